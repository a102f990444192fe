"""Receive-beamformer construction and the 1-D search over its parameter.

The receive beamformer lives in the two-dimensional span of the uplink
channels and is parameterized by a scalar ``alpha`` in [0, 1] that weights
the direction aligned with one uplink against the direction orthogonal to
it.  The search evaluates an inner solver on a grid of ``alpha`` values
and optionally refines around the best grid point with a golden-section
step.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np

from .channels import ChannelRealization, project_complement, project_onto
from .errors import (DegenerateChannelWarning, InfeasibleError,
                     InfeasibleHarvestError, ParameterError)

_COLLINEAR_TOL = 1e-10
_GOLDEN = (np.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class AlphaGrid:
    """Search grid for the receive-beamformer parameter.

    ``step`` is the grid spacing, ``refine_tol`` the termination width of
    the golden-section refinement around the best grid point (set to 0 to
    disable refinement).  ``include`` lists extra values that are always
    evaluated, regardless of the grid spacing.
    """

    start: float = 0.0
    stop: float = 1.0
    step: float = 0.01
    refine_tol: float = 1e-3
    include: tuple[float, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if not (0.0 <= self.start < self.stop <= 1.0):
            raise ParameterError(
                f"need 0 <= start < stop <= 1, got [{self.start}, {self.stop}]")
        if self.step <= 0:
            raise ParameterError(f"step must be positive, got {self.step}")
        if any(not (0.0 <= a <= 1.0) for a in self.include):
            raise ParameterError("extra grid points must lie in [0, 1]")

    def points(self) -> np.ndarray:
        """All grid points, ascending, with the extra values merged in."""
        n = int(np.floor((self.stop - self.start) / self.step + 1e-9))
        pts = self.start + self.step * np.arange(n + 1)
        pts = np.minimum(pts, self.stop)
        if pts[-1] < self.stop - 1e-12:
            pts = np.append(pts, self.stop)
        extra = [a for a in self.include if self.start <= a <= self.stop]
        return np.unique(np.concatenate([pts, np.asarray(extra, dtype=float)]))


def build_wr(alpha: float, ch: ChannelRealization) -> np.ndarray:
    """Unit-norm receive beamformer for a given ``alpha``.

    Combines the normalized projection of one uplink channel onto the
    other with the normalized orthogonal remainder, weighted by
    ``alpha`` and ``sqrt(1 - alpha)``, then renormalizes so the result is
    exactly unit norm for every interior ``alpha``.

    If the uplink channels are (numerically) collinear the span is
    one-dimensional; the matched direction is returned and a
    :class:`DegenerateChannelWarning` is emitted.
    """
    if not (0.0 <= alpha <= 1.0):
        raise ParameterError(f"alpha must be in [0, 1], got {alpha}")
    norm_ar = np.linalg.norm(ch.h_ar)
    norm_br = np.linalg.norm(ch.h_br)
    if norm_ar < _COLLINEAR_TOL or norm_br < _COLLINEAR_TOL:
        raise ParameterError("uplink channels must be nonzero")

    perp = project_complement(ch.h_ar, ch.h_br)
    norm_perp = np.linalg.norm(perp)
    if norm_perp < _COLLINEAR_TOL:
        warnings.warn("uplink channels are collinear; receive beamformer "
                      "fixed to the common direction",
                      DegenerateChannelWarning, stacklevel=2)
        return ch.h_ar / norm_ar

    par = project_onto(ch.h_ar, ch.h_br)
    norm_par = np.linalg.norm(par)
    if norm_par < _COLLINEAR_TOL * norm_ar:
        # Orthogonal uplinks: the parallel direction degenerates to the
        # other channel's own direction (arbitrary phase).
        par = ch.h_br
        norm_par = norm_br

    w = alpha * (par / norm_par) + np.sqrt(1.0 - alpha) * (perp / norm_perp)
    return w / np.linalg.norm(w)


def search_alpha(ch: ChannelRealization, params,
                 inner: Callable[[float], tuple[float, Any]],
                 grid: AlphaGrid) -> tuple[float, Any]:
    """Maximize an inner solver's achieved sum-rate over the alpha grid.

    ``inner`` maps an alpha value to ``(sum_rate, payload)`` and may raise
    :class:`InfeasibleError` to signal that no feasible operating point
    exists at that alpha.  Returns the best ``(alpha, payload)``; exact
    ties break toward the smaller alpha.  Raises the last infeasibility
    error if every evaluation is infeasible.
    """
    best_alpha = None
    best_value = -np.inf
    best_payload = None
    last_error: InfeasibleError | None = None

    def evaluate(a: float) -> float:
        nonlocal best_alpha, best_value, best_payload, last_error
        try:
            value, payload = inner(float(a))
        except InfeasibleError as err:
            last_error = err
            return -np.inf
        if not np.isfinite(value):
            return -np.inf
        if value > best_value or (value == best_value
                                  and (best_alpha is None or a < best_alpha)):
            best_alpha, best_value, best_payload = float(a), float(value), payload
        return value

    pts = grid.points()
    values = np.array([evaluate(a) for a in pts])
    if not np.isfinite(best_value):
        if last_error is not None:
            raise last_error
        raise InfeasibleHarvestError("no feasible operating point on the alpha grid")

    if grid.refine_tol > 0:
        k = int(np.argmax(values))
        lo = pts[max(k - 1, 0)]
        hi = pts[min(k + 1, len(pts) - 1)]
        _golden_refine(evaluate, float(lo), float(hi), grid.refine_tol)

    return best_alpha, best_payload


def _golden_refine(evaluate, lo: float, hi: float, tol: float):
    """Golden-section maximization of ``evaluate`` on [lo, hi].

    ``evaluate`` records the running best internally, so this only needs
    to shrink the bracket; infeasible points score -inf and push the
    bracket away.
    """
    c = hi - _GOLDEN * (hi - lo)
    d = lo + _GOLDEN * (hi - lo)
    fc, fd = evaluate(c), evaluate(d)
    while hi - lo > tol:
        if fc >= fd:
            hi, d, fd = d, c, fc
            c = hi - _GOLDEN * (hi - lo)
            fc = evaluate(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + _GOLDEN * (hi - lo)
            fd = evaluate(d)
