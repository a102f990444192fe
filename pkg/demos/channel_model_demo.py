"""Channel model walkthrough: seeded sampling, RSI scaling and the
projection primitives behind the receive parameterization."""

import numpy as np

from fdswipt import (SystemParams, derive_seed, project_complement,
                     project_onto, sample_channels)

params = SystemParams(p_a=1.0, p_b=1.0, p_r=2.0,
                      var_rsi_a=0.3, var_rsi_b=0.3, var_rsi_r=0.3,
                      m_t=3, m_r=2)

# ---------------------------------------------------------------------------
# One realization is fully determined by its seed.
ch = sample_channels(params, seed=7)
print("uplink A->relay:     ", np.round(ch.h_ar, 3))
print("uplink B->relay:     ", np.round(ch.h_br, 3))
print("downlink relay->A:   ", np.round(ch.h_ra, 3))
print("loopback (relay RSI):")
print(np.round(ch.h_rr, 3))
print("source RSI scalars:  ", round(abs(ch.h_aa), 4), round(abs(ch.h_bb), 4))

again = sample_channels(params, seed=7)
print("\nsame seed reproduces the draw exactly:",
      np.array_equal(ch.h_rr, again.h_rr))

# The RSI channels are the same standard draws scaled by sqrt(variance),
# so sweeping the RSI level keeps the underlying randomness fixed.
weaker = sample_channels(SystemParams(**{**params.__dict__,
                                         "var_rsi_r": 0.03}), seed=7)
print("RSI scaling factor between variances 0.3 and 0.03:",
      round(float(np.abs(ch.h_rr / weaker.h_rr).mean()), 4),
      "(expect sqrt(10) ~ 3.1623)")

# ---------------------------------------------------------------------------
# Monte Carlo sanity: unit-variance Rayleigh fading entries.
n = 20_000
acc = 0.0
for i in range(n):
    draw = sample_channels(params, derive_seed(123, i))
    acc += float(np.vdot(draw.h_ar, draw.h_ar).real)
print(f"\nmean |uplink entry|^2 over {n} draws:", round(acc / (n * params.m_r), 4))

# ---------------------------------------------------------------------------
# Projection identities used by the receive-beamformer construction.
x = ch.h_ar
b = ch.h_br
par = project_onto(x, b)
perp = project_complement(x, b)
print("\nprojection + complement reassembles the vector:",
      np.allclose(par + perp, x))
print("components are orthogonal:", abs(np.vdot(par, perp)) < 1e-12)
print("projection is idempotent:", np.allclose(project_onto(par, b), par))
