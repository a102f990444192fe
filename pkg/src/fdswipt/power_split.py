"""Closed-form optimization of the receive power-splitting ratio.

For fixed beamformers the sum-rate is increasing in the splitting ratio,
so the optimum is the largest ratio admitted by the relay power budget
and the minimum-harvest requirement.  The harvest constraint involves the
relay's own output power, which itself depends on the ratio; the closed
forms treat that loopback power as a constant taken from the previous
iterate, and :func:`self_consistent_rho` alternates the two updates to a
fixed point.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channels import ChannelRealization, SystemParams
from .errors import InfeasibleHarvestError, InfeasiblePowerError, ParameterError
from .metrics import BeamformingSolution, effective_gains, relay_power

RHO_EPS = 1e-6

POWER_CONSTRAINT = "power_constraint"
HARVEST_CONSTRAINT = "harvest_constraint"
INTERIOR_CLAMP = "interior_clamp"


@dataclass(frozen=True)
class RhoSolution:
    """Result of one splitting-ratio update.

    ``binding`` records which constraint determined the value; ``feasible``
    is False when the returned (clamped) ratio violates a constraint.
    """

    rho: float
    binding: str
    feasible: bool


def rho_candidate(w_t: np.ndarray, c_ra: float, c_rb: float,
                  params: SystemParams) -> float:
    """Largest splitting ratio satisfying the relay power budget.

    Solves ``rho*(p_a*c_ra + p_b*c_rb + 1)*||w_t||^2 + ||w_t||^2 = p_r``
    for ``rho``.  Raises :class:`InfeasiblePowerError` when the
    ratio-independent term alone exceeds the budget.
    """
    nt2 = float(np.vdot(w_t, w_t).real)
    if nt2 <= 0.0:
        raise ParameterError("transmit beamformer must be nonzero")
    if nt2 > params.p_r:
        raise InfeasiblePowerError(
            f"||w_t||^2 = {nt2:.6g} exceeds the relay budget {params.p_r:.6g}; "
            f"no splitting ratio can satisfy the power constraint")
    return float((params.p_r - nt2)
                 / ((params.p_a * c_ra + params.p_b * c_rb + 1.0) * nt2))


def _power_ok(rho: float, nt2: float, c_ra: float, c_rb: float,
              params: SystemParams) -> bool:
    used = rho * (params.p_a * c_ra + params.p_b * c_rb + 1.0) * nt2 + nt2
    return bool(used <= params.p_r + 1e-9)


def optimal_rho(w_t: np.ndarray, w_r: np.ndarray, ch: ChannelRealization,
                params: SystemParams, e_bar_prev: float) -> RhoSolution:
    """Splitting ratio for fixed beamformers, loopback power held constant.

    Tries the power-saturating candidate first; if the harvested energy at
    that ratio falls short of the requirement, the harvest constraint is
    met with equality instead.  ``e_bar_prev`` is the loopback power of
    the previous iterate.  Raises :class:`InfeasibleHarvestError` when the
    requirement exceeds the total splittable power outright.
    """
    if e_bar_prev < 0:
        raise ParameterError("loopback power must be >= 0")
    c_ra, c_rb = effective_gains(w_r, ch)
    nt2 = float(np.vdot(w_t, w_t).real)
    total = (np.vdot(ch.h_ar, ch.h_ar).real * params.p_a
             + np.vdot(ch.h_br, ch.h_br).real * params.p_b
             + e_bar_prev + 1.0)

    raw_c = rho_candidate(w_t, c_ra, c_rb, params)
    rho_c = float(np.clip(raw_c, RHO_EPS, 1.0 - RHO_EPS))
    if (1.0 - rho_c) * total >= params.q_bar:
        clamped = rho_c != raw_c
        return RhoSolution(
            rho=rho_c,
            binding=INTERIOR_CLAMP if clamped else POWER_CONSTRAINT,
            feasible=_power_ok(rho_c, nt2, c_ra, c_rb, params))

    if params.q_bar > total:
        raise InfeasibleHarvestError(
            f"harvest requirement {params.q_bar:.6g} exceeds the total "
            f"splittable power {total:.6g}")
    raw_h = 1.0 - params.q_bar / total
    rho_h = float(np.clip(raw_h, RHO_EPS, 1.0 - RHO_EPS))
    feasible = raw_h > RHO_EPS and _power_ok(rho_h, nt2, c_ra, c_rb, params)
    return RhoSolution(rho=rho_h, binding=HARVEST_CONSTRAINT, feasible=feasible)


def self_consistent_rho(w_t: np.ndarray, w_r: np.ndarray,
                        ch: ChannelRealization, params: SystemParams,
                        rho_init: float, tol: float = 1e-15,
                        max_iter: int = 200) -> tuple[RhoSolution, float]:
    """Alternate the ratio update and the loopback-power evaluation until
    they agree.

    At the fixed point the harvested energy evaluated with the operating
    point's own loopback power meets the requirement (with equality when
    the harvest constraint binds).  Returns the final update and the
    matching loopback power.
    """
    rho = float(rho_init)
    sol = None
    for _ in range(max_iter):
        probe = BeamformingSolution(w_r=w_r, w_t=w_t, rho=rho, alpha=0.0)
        _, e_bar = relay_power(probe, ch, params)
        sol = optimal_rho(w_t, w_r, ch, params, e_bar)
        if abs(sol.rho - rho) <= tol:
            rho = sol.rho
            break
        rho = sol.rho
    probe = BeamformingSolution(w_r=w_r, w_t=w_t, rho=rho, alpha=0.0)
    _, e_bar = relay_power(probe, ch, params)
    return sol, float(e_bar)
