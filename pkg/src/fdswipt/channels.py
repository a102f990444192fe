"""System parameters, random channel generation and projection primitives.

The radio model is a three-node full-duplex network: two single-antenna
sources exchanging data through an amplify-and-forward relay with ``m_r``
receive and ``m_t`` transmit antennas.  Information channels are i.i.d.
circularly-symmetric complex Gaussian with unit variance (flat Rayleigh
fading); residual self-interference (RSI) channels carry configurable
variances.  Receiver, relay-input and processing noise variances are
normalized to one and are therefore not parameters.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateBasisError, ParameterError

_ZERO_BASIS_TOL = 1e-12


@dataclass(frozen=True)
class SystemParams:
    """Scalar system configuration.

    Powers are linear Watts.  ``q_bar`` is the minimum harvested energy
    the relay must collect per symbol.  ``var_rsi_*`` are the variances of
    the residual self-interference channels at the two sources and the
    relay.  ``var_proc`` is the processing-noise variance at the relay's
    information receiver; it is normalized to 1.0 in all rate expressions
    and kept only as a recorded setting.  ``tau`` is the relay processing
    delay in symbols (informational, it does not enter any metric).
    """

    p_a: float = 1.0
    p_b: float = 1.0
    p_r: float = 1.0
    q_bar: float = 0.0
    var_rsi_a: float = 0.0
    var_rsi_b: float = 0.0
    var_rsi_r: float = 0.0
    var_proc: float = 1.0
    m_t: int = 2
    m_r: int = 2
    beta: float = 1.0
    tau: int = 1

    def __post_init__(self):
        for name in ("p_a", "p_b", "p_r", "q_bar", "var_rsi_a", "var_rsi_b",
                     "var_rsi_r", "var_proc"):
            v = getattr(self, name)
            if not np.isfinite(v) or v < 0:
                raise ParameterError(f"{name} must be finite and >= 0, got {v!r}")
        if int(self.m_t) != self.m_t or self.m_t < 2:
            raise ParameterError(
                f"m_t must be an integer >= 2 so the loopback null space is "
                f"non-empty, got {self.m_t!r}")
        if int(self.m_r) != self.m_r or self.m_r < 1:
            raise ParameterError(f"m_r must be a positive integer, got {self.m_r!r}")
        if self.beta != 1.0:
            raise ParameterError(
                f"energy conversion efficiency is fixed at 1.0, got {self.beta!r}")
        if int(self.tau) != self.tau or self.tau < 1:
            raise ParameterError(f"tau must be a positive integer, got {self.tau!r}")


@dataclass(frozen=True)
class ChannelRealization:
    """One draw of every channel in the network.

    ``h_ar``/``h_br`` are the source-to-relay vectors (length ``m_r``),
    ``h_ra``/``h_rb`` the relay-to-source vectors (length ``m_t``),
    ``h_rr`` the relay transmit-to-receive loopback matrix
    (``m_r x m_t``) and ``h_aa``/``h_bb`` the scalar source RSI channels.
    """

    h_ar: np.ndarray
    h_br: np.ndarray
    h_ra: np.ndarray
    h_rb: np.ndarray
    h_rr: np.ndarray
    h_aa: complex
    h_bb: complex

    def __post_init__(self):
        m_r = self.h_ar.shape[0]
        m_t = self.h_ra.shape[0]
        if self.h_ar.shape != (m_r,) or self.h_br.shape != (m_r,):
            raise ParameterError("h_ar and h_br must be vectors of equal length")
        if self.h_ra.shape != (m_t,) or self.h_rb.shape != (m_t,):
            raise ParameterError("h_ra and h_rb must be vectors of equal length")
        if self.h_rr.shape != (m_r, m_t):
            raise ParameterError(
                f"h_rr must have shape ({m_r}, {m_t}), got {self.h_rr.shape}")
        for name in ("h_ar", "h_br", "h_ra", "h_rb", "h_rr"):
            if not np.all(np.isfinite(getattr(self, name))):
                raise ParameterError(f"{name} contains non-finite entries")
        if not (np.isfinite(self.h_aa.real) and np.isfinite(self.h_aa.imag)
                and np.isfinite(self.h_bb.real) and np.isfinite(self.h_bb.imag)):
            raise ParameterError("scalar RSI channels must be finite")

    @property
    def m_r(self) -> int:
        return self.h_ar.shape[0]

    @property
    def m_t(self) -> int:
        return self.h_ra.shape[0]


def _cn(rng: np.random.Generator, shape) -> np.ndarray:
    """Standard circularly-symmetric complex Gaussian, CN(0, 1) per entry."""
    re = rng.standard_normal(shape)
    im = rng.standard_normal(shape)
    return (re + 1j * im) / np.sqrt(2.0)


def sample_channels(params: SystemParams, seed: int) -> ChannelRealization:
    """Draw one channel realization, deterministically from ``seed``.

    Information channels are CN(0, 1) per entry; RSI channels are the same
    standard draws scaled by the square root of their configured variance.
    The draw order is fixed (h_ar, h_br, h_ra, h_rb, h_rr, h_aa, h_bb), so
    two parameter sets with equal antenna counts and the same seed share
    the underlying standard normals and differ only by the RSI scaling.
    """
    rng = np.random.default_rng(seed)
    m_r, m_t = int(params.m_r), int(params.m_t)
    h_ar = _cn(rng, m_r)
    h_br = _cn(rng, m_r)
    h_ra = _cn(rng, m_t)
    h_rb = _cn(rng, m_t)
    h_rr = np.sqrt(params.var_rsi_r) * _cn(rng, (m_r, m_t))
    h_aa = complex(np.sqrt(params.var_rsi_a) * _cn(rng, ()))
    h_bb = complex(np.sqrt(params.var_rsi_b) * _cn(rng, ()))
    return ChannelRealization(h_ar=h_ar, h_br=h_br, h_ra=h_ra, h_rb=h_rb,
                              h_rr=h_rr, h_aa=h_aa, h_bb=h_bb)


def derive_seed(master_seed: int, realization_index: int) -> int:
    """Per-realization stream seed.

    Streams are derived from the pair ``(master_seed, realization_index)``
    through a seed sequence, so realizations are independent of each other
    but identical across sweep points and schemes that share the index.
    """
    ss = np.random.SeedSequence([int(master_seed), int(realization_index)])
    return int(ss.generate_state(1, np.uint64)[0])


def _check_pair(x: np.ndarray, b: np.ndarray):
    x = np.asarray(x, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if x.shape != b.shape or x.ndim != 1:
        raise ParameterError(
            f"projection arguments must be equal-length vectors, "
            f"got shapes {x.shape} and {b.shape}")
    if np.linalg.norm(b) < _ZERO_BASIS_TOL:
        raise DegenerateBasisError("projection basis vector is numerically zero")
    return x, b


def project_onto(x: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Orthogonal projection of ``x`` onto the span of ``b``."""
    x, b = _check_pair(x, b)
    return b * (np.vdot(b, x) / np.vdot(b, b).real)


def project_complement(x: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Component of ``x`` orthogonal to ``b`` (``x`` minus its projection)."""
    x, b = _check_pair(x, b)
    return x - b * (np.vdot(b, x) / np.vdot(b, b).real)
