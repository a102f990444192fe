"""Exception and warning types shared across the package."""


class FdswiptError(Exception):
    """Base class for all package-specific errors."""


class ParameterError(FdswiptError, ValueError):
    """Invalid system parameters or mismatched array dimensions."""


class DegenerateBasisError(FdswiptError, ValueError):
    """Projection basis vector is (numerically) zero."""


class InfeasibleError(FdswiptError):
    """No operating point satisfies the problem constraints.

    ``binding`` names the constraint that cannot be met
    ("power" or "harvest").
    """

    binding = "unknown"


class InfeasiblePowerError(InfeasibleError):
    """Relay transmit power budget cannot be met."""

    binding = "power"


class InfeasibleHarvestError(InfeasibleError):
    """Minimum harvested-energy requirement cannot be met."""

    binding = "harvest"


class InternalSolverError(FdswiptError):
    """An internal solver invariant was violated (e.g. a decreasing
    objective in a step that is guaranteed to be non-decreasing)."""


class DegenerateChannelWarning(UserWarning):
    """A channel configuration collapsed a parameterized search to a
    fixed direction (e.g. collinear uplink channels)."""
