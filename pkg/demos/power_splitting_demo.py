"""Power-splitting ratio closed forms: the power-saturating candidate, the
harvest-equality fallback and the fixed point with the loopback power."""

import numpy as np

from fdswipt import (BeamformingSolution, InfeasibleHarvestError,
                     SystemParams, build_wr, dc_optimize_wt,
                     effective_gains, harvested_energy, optimal_rho,
                     relay_power, rho_candidate, sample_channels,
                     self_consistent_rho)

base = dict(p_a=1.0, p_b=1.0, p_r=2.0, var_rsi_a=0.1, var_rsi_b=0.1,
            var_rsi_r=0.1)
ch = sample_channels(SystemParams(**base), seed=11)
w_r = build_wr(0.5, ch)
w_t, _ = dc_optimize_wt(ch, w_r, 0.7, SystemParams(**base))

# ---------------------------------------------------------------------------
# Without a harvest requirement the relay power budget picks the ratio.
params = SystemParams(**base, q_bar=0.0)
sol = optimal_rho(w_t, w_r, ch, params, e_bar_prev=0.0)
print("no harvest requirement -> binding:", sol.binding,
      " rho =", round(sol.rho, 6))
c_ra, c_rb = effective_gains(w_r, ch)
print("power-saturating candidate:",
      round(rho_candidate(w_t, c_ra, c_rb, params), 6),
      "(the beamformer was sized for ratio 0.7, so the budget pins it there)")

# ---------------------------------------------------------------------------
# A demanding harvest requirement binds instead and is met with equality.
for q_bar in (0.5, 1.5, 3.0):
    params = SystemParams(**base, q_bar=q_bar)
    sol, e_bar = self_consistent_rho(w_t, w_r, ch, params, rho_init=0.7)
    probe = BeamformingSolution(w_r=w_r, w_t=w_t, rho=sol.rho, alpha=0.0)
    q = harvested_energy(probe, ch, params, e_bar)
    p, _ = relay_power(probe, ch, params)
    print(f"q_bar={q_bar:3.1f}: binding={sol.binding:18s} "
          f"rho={sol.rho:.6f} harvested={q:.6f} relay_power={p:.4f}")

# Raising the requirement only ever lowers the ratio, until nothing can
# satisfy it at all.
rhos = []
for q_bar in np.linspace(0.0, 4.0, 9):
    params = SystemParams(**base, q_bar=float(q_bar))
    try:
        sol, _ = self_consistent_rho(w_t, w_r, ch, params, rho_init=0.7)
    except InfeasibleHarvestError as err:
        print(f"\nq_bar={q_bar:.1f} is infeasible: {err}")
        break
    rhos.append(sol.rho)
print("ratio versus requirement:", [round(r, 4) for r in rhos])
print("monotone non-increasing:",
      all(r1 >= r2 for r1, r2 in zip(rhos, rhos[1:])))
