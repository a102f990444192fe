"""Closed-form link metrics for a candidate relay operating point.

An operating point is a rank-one relay amplification matrix, decomposed as
an outer product of a unit-norm receive beamformer ``w_r`` and a transmit
beamformer ``w_t`` (whose norm carries the transmit power), together with
the power-splitting ratio ``rho`` routing a ``rho`` fraction of received
power to the information path and ``1 - rho`` to the energy harvester.

Conventions baked into the formulas: the splitting ratio enters the
end-to-end SINRs quadratically (signal and forwarded relay-noise terms)
but the relay output power and harvested energy linearly; all thermal and
processing noise variances are one.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channels import ChannelRealization, SystemParams


@dataclass(frozen=True)
class BeamformingSolution:
    """Candidate operating point.

    ``w_r``: unit-norm receive beamformer, length ``m_r``.
    ``w_t``: transmit beamformer, length ``m_t`` (norm carries power).
    ``rho``: power-splitting ratio in (0, 1).
    ``alpha``: receive-parameterization scalar in [0, 1].
    """

    w_r: np.ndarray
    w_t: np.ndarray
    rho: float
    alpha: float


@dataclass(frozen=True)
class LinkReport:
    """All closed-form performance quantities at one operating point."""

    sinr_a: float
    sinr_b: float
    rate_a: float
    rate_b: float
    sum_rate: float
    c_ra: float
    c_rb: float
    p_relay: float
    e_bar: float
    q_harvest: float


def effective_gains(w_r: np.ndarray, ch: ChannelRealization) -> tuple[float, float]:
    """Receive-combined uplink power gains |w_r^H h_ar|^2 and |w_r^H h_br|^2."""
    c_ra = abs(np.vdot(w_r, ch.h_ar)) ** 2
    c_rb = abs(np.vdot(w_r, ch.h_br)) ** 2
    return float(c_ra), float(c_rb)


def sinr_pair(sol: BeamformingSolution, ch: ChannelRealization,
              params: SystemParams) -> tuple[float, float]:
    """End-to-end SINRs at the two destination nodes.

    At node A the desired signal is B's stream relayed with combined gain
    ``c_rb`` and downlink gain |h_ra^H w_t|^2; the interference floor adds
    forwarded relay noise, forwarded processing noise, the local RSI
    leakage and unit receiver noise.  Node B is symmetric.
    """
    rho = sol.rho
    c_ra, c_rb = effective_gains(sol.w_r, ch)
    t_a = abs(np.vdot(ch.h_ra, sol.w_t)) ** 2
    t_b = abs(np.vdot(ch.h_rb, sol.w_t)) ** 2
    g_aa = abs(ch.h_aa) ** 2
    g_bb = abs(ch.h_bb) ** 2
    sinr_a = (rho ** 2 * params.p_b * c_rb * t_a
              / (rho ** 2 * t_a + t_a + params.p_a * g_aa + 1.0))
    sinr_b = (rho ** 2 * params.p_a * c_ra * t_b
              / (rho ** 2 * t_b + t_b + params.p_b * g_bb + 1.0))
    return float(sinr_a), float(sinr_b)


def sum_rate(sol: BeamformingSolution, ch: ChannelRealization,
             params: SystemParams) -> tuple[float, float, float]:
    """Per-link rates log2(1 + SINR) and their sum, in bits/s/Hz."""
    sinr_a, sinr_b = sinr_pair(sol, ch, params)
    rate_a = np.log2(1.0 + sinr_a)
    rate_b = np.log2(1.0 + sinr_b)
    return float(rate_a), float(rate_b), float(rate_a + rate_b)


def relay_power(sol: BeamformingSolution, ch: ChannelRealization,
                params: SystemParams) -> tuple[float, float]:
    """Relay output power and the transmit-covariance trace.

    With a unit-norm receive beamformer both quantities coincide:
    ``rho * (p_a*c_ra + p_b*c_rb + 1) * ||w_t||^2 + ||w_t||^2``.
    """
    c_ra, c_rb = effective_gains(sol.w_r, ch)
    nt2 = float(np.vdot(sol.w_t, sol.w_t).real)
    p = sol.rho * (params.p_a * c_ra + params.p_b * c_rb + 1.0) * nt2 + nt2
    return float(p), float(p)


def harvested_energy(sol: BeamformingSolution, ch: ChannelRealization,
                     params: SystemParams, e_bar: float) -> float:
    """Energy collected by the relay's harvester.

    The ``1 - rho`` split of the total received power: both uplinks at
    full channel norm, the relay's own transmit loopback power ``e_bar``
    (supplied by the caller, see the power-split solver for the fixed
    point convention) and the unit noise floor.
    """
    base = (np.vdot(ch.h_ar, ch.h_ar).real * params.p_a
            + np.vdot(ch.h_br, ch.h_br).real * params.p_b)
    return float(params.beta * (1.0 - sol.rho) * (base + e_bar + 1.0))


def link_report(sol: BeamformingSolution, ch: ChannelRealization,
                params: SystemParams) -> LinkReport:
    """Assemble every metric at ``sol``, with the loopback power evaluated
    at the operating point itself."""
    c_ra, c_rb = effective_gains(sol.w_r, ch)
    sinr_a, sinr_b = sinr_pair(sol, ch, params)
    rate_a, rate_b, total = sum_rate(sol, ch, params)
    p_relay, e_bar = relay_power(sol, ch, params)
    q = harvested_energy(sol, ch, params, e_bar)
    return LinkReport(sinr_a=sinr_a, sinr_b=sinr_b, rate_a=rate_a,
                      rate_b=rate_b, sum_rate=total, c_ra=c_ra, c_rb=c_rb,
                      p_relay=p_relay, e_bar=e_bar, q_harvest=q)
