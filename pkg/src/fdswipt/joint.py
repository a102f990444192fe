"""Joint optimization: alternate the transmit beamformer and splitting
ratio for a fixed receive parameterization, then search the receive
parameter.

The alternation bootstraps the splitting ratio at the largest value the
harvest requirement admits when the relay transmits at full budget.  The
sum rate is increasing in the ratio for any fixed beamformer (including
the budget shrink it causes), and a budget-saturating transmit update
leaves the power-saturating ratio unchanged, so the alternation started
from the top converges to the best ratio of the family rather than
freezing wherever it began.  Each returned point is the best one seen
across the outer iterations.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .channels import ChannelRealization, SystemParams
from .errors import (InfeasibleHarvestError, InfeasiblePowerError)
from .metrics import (BeamformingSolution, LinkReport, link_report)
from .power_split import RHO_EPS, HARVEST_CONSTRAINT, self_consistent_rho
from .rx_beam import AlphaGrid, build_wr, search_alpha
from .tx_beam_dc import dc_optimize_wt, zf_complement_basis


@dataclass(frozen=True)
class JointConfig:
    """Settings for the joint solver."""

    alpha_grid: AlphaGrid = field(default_factory=AlphaGrid)
    outer_tol: float = 1e-4
    outer_max_iter: int = 50
    dc_tol: float = 1e-5
    dc_max_iter: int = 100

    def __post_init__(self):
        if self.outer_tol <= 0 or self.dc_tol <= 0:
            raise ValueError("tolerances must be positive")
        if self.outer_max_iter < 1 or self.dc_max_iter < 1:
            raise ValueError("iteration caps must be >= 1")


@dataclass(frozen=True)
class JointSolution:
    """Solver output: the operating point, its metrics and diagnostics."""

    solution: BeamformingSolution
    report: LinkReport
    alpha_star: float
    iterations_outer: int
    converged: bool
    trace: tuple[float, ...]


def solve_fixed_alpha(alpha: float, ch: ChannelRealization,
                      params: SystemParams, cfg: JointConfig) -> JointSolution:
    """Alternate transmit-beamformer and splitting-ratio updates at a
    fixed receive parameterization.

    Stops when the sum-rate improvement falls below ``cfg.outer_tol`` or
    the iteration cap is reached; always returns the best point seen.
    Raises an infeasibility error (power or harvest) when no operating
    point satisfies the constraints at this ``alpha``.
    """
    w_r = build_wr(alpha, ch)
    base = (np.vdot(ch.h_ar, ch.h_ar).real * params.p_a
            + np.vdot(ch.h_br, ch.h_br).real * params.p_b)

    # Largest admissible ratio assuming the relay transmits at full budget
    # (the loopback power then equals the budget exactly).
    total_sat = base + params.p_r + 1.0
    if params.q_bar > (1.0 - RHO_EPS) * total_sat:
        raise InfeasibleHarvestError(
            f"harvest requirement {params.q_bar:.6g} exceeds the splittable "
            f"power {total_sat:.6g} at every admissible splitting ratio")
    rho = float(np.clip(1.0 - params.q_bar / total_sat, RHO_EPS, 1.0 - RHO_EPS))

    basis = zf_complement_basis(ch.h_rr, w_r)
    x_init = None
    best_sol = None
    best_rep = None
    history: list[float] = []
    converged = False
    for _ in range(cfg.outer_max_iter):
        w_t, _ = dc_optimize_wt(ch, w_r, rho, params, init=x_init,
                                tol=cfg.dc_tol, max_iter=cfg.dc_max_iter)
        if np.linalg.norm(w_t) == 0.0:
            sol, rep = _zero_gain_point(alpha, w_r, w_t, base, ch, params)
            if best_rep is None:
                best_sol, best_rep = sol, rep
                history.append(rep.sum_rate)
            converged = True
            break
        rho_sol, _ = self_consistent_rho(w_t, w_r, ch, params, rho)
        if not rho_sol.feasible:
            cls = (InfeasibleHarvestError
                   if rho_sol.binding == HARVEST_CONSTRAINT
                   else InfeasiblePowerError)
            raise cls(f"splitting-ratio update infeasible "
                      f"(binding: {rho_sol.binding})")
        rho = rho_sol.rho
        sol = BeamformingSolution(w_r=w_r, w_t=w_t, rho=rho, alpha=float(alpha))
        rep = link_report(sol, ch, params)
        history.append(rep.sum_rate)
        if best_rep is None or rep.sum_rate > best_rep.sum_rate:
            best_sol, best_rep = sol, rep
        if len(history) >= 2 and abs(history[-1] - history[-2]) < cfg.outer_tol:
            converged = True
            break
        x_init = basis.conj().T @ w_t

    return JointSolution(solution=best_sol, report=best_rep,
                         alpha_star=float(alpha),
                         iterations_outer=len(history), converged=converged,
                         trace=tuple(history))


def _zero_gain_point(alpha, w_r, w_t, base, ch, params):
    """Fallback when the transmit beamformer has no effect on either
    destination: zero rate, ratio set by the harvest requirement alone."""
    total = base + 1.0
    if params.q_bar > (1.0 - RHO_EPS) * total:
        raise InfeasibleHarvestError(
            f"harvest requirement {params.q_bar:.6g} exceeds the splittable "
            f"power {total:.6g} with an inactive relay transmitter")
    rho = float(np.clip(1.0 - params.q_bar / total, RHO_EPS, 1.0 - RHO_EPS))
    sol = BeamformingSolution(w_r=w_r, w_t=w_t, rho=rho, alpha=float(alpha))
    return sol, link_report(sol, ch, params)


def solve_joint(ch: ChannelRealization, params: SystemParams,
                cfg: JointConfig) -> JointSolution:
    """Grid search the receive parameterization with
    :func:`solve_fixed_alpha` as the inner solver.

    Returns the solution achieving the best sum rate over the grid (and
    its refinement); raises an infeasibility error when every grid point
    is infeasible.
    """
    def inner(alpha: float):
        js = solve_fixed_alpha(alpha, ch, params, cfg)
        return js.report.sum_rate, js

    alpha_star, js = search_alpha(ch, params, inner, cfg.alpha_grid)
    return replace(js, alpha_star=float(alpha_star))


def zero_rsi_reference(ch: ChannelRealization, params: SystemParams,
                       cfg: JointConfig) -> float:
    """Sum rate the joint solver reaches with all self-interference
    removed; an upper reference for reporting."""
    clean = ChannelRealization(
        h_ar=ch.h_ar, h_br=ch.h_br, h_ra=ch.h_ra, h_rb=ch.h_rb,
        h_rr=np.zeros_like(ch.h_rr), h_aa=0j, h_bb=0j)
    return solve_joint(clean, params, cfg).report.sum_rate


def solution_diagnostics(js: JointSolution, ch: ChannelRealization,
                         params: SystemParams) -> dict:
    """Constraint residuals of a returned solution.

    Positive slacks mean the constraint holds; the loopback-nulling
    residual is reported relative to the beamformer norm.
    """
    sol = js.solution
    nt = float(np.linalg.norm(sol.w_t))
    zf = float(abs(np.vdot(sol.w_r, ch.h_rr @ sol.w_t)))
    return {
        "wr_norm_error": float(abs(np.linalg.norm(sol.w_r) - 1.0)),
        "zf_residual": zf,
        "zf_residual_relative": zf / nt if nt > 0 else 0.0,
        "power_slack": float(params.p_r - js.report.p_relay),
        "harvest_slack": float(js.report.q_harvest - params.q_bar),
        "rho": sol.rho,
    }
