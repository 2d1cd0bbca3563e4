"""Two-mode states, the beam-splitter unitary and photon-number conditioning.

The beam splitter conserves total photon number, so the unitary is applied
block by block over subspaces of fixed m + n.  Each block is the matrix
exponential of the mixing generator theta * (a b† - a† b) restricted to the
block; the output space is enlarged to (d1 + d2 - 1) levels per mode so
every block fits entirely and the map is exactly unitary.

Convention: coherent inputs (alpha, beta) map to coherent outputs
(t*alpha - r*beta, t*beta + r*alpha); in particular (alpha, 0) ->
(t*alpha, r*alpha) with the reflected field in mode 2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.linalg import expm

from .errors import ZeroProbabilityError
from .fock import FockState


@dataclass(frozen=True)
class BeamSplitter:
    """Lossless beam splitter with reflectivity r and transmissivity sqrt(1-r^2)."""

    r: float

    def __post_init__(self):
        if not -1.0 < self.r < 1.0:
            raise ValueError(f"reflectivity must satisfy |r| < 1, got {self.r}")

    @property
    def t(self) -> float:
        return math.sqrt(1.0 - self.r * self.r)


@dataclass(frozen=True)
class TwoModeState:
    """Joint state, amps[m, n] = amplitude of m photons in mode 1, n in mode 2."""

    amps: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amps, dtype=complex)
        if amps.ndim != 2:
            raise ValueError("amps must be a 2-d complex matrix")
        amps.setflags(write=False)
        object.__setattr__(self, "amps", amps)

    @property
    def dims(self) -> tuple[int, int]:
        return self.amps.shape


def tensor(mode1: FockState, mode2: FockState) -> TwoModeState:
    """Product state amps[m, n] = mode1[m] * mode2[n]."""
    return TwoModeState(np.outer(mode1.amps, mode2.amps))


@lru_cache(maxsize=None)
def _block_unitary(total_n: int, theta: float) -> np.ndarray:
    """Beam-splitter unitary on the total-photon-number block, basis |m, N-m⟩.

    Generator G has elements of (a b† - a† b): G[m-1, m] = sqrt(m (N-m+1)),
    G[m+1, m] = -sqrt((m+1)(N-m)); G is real antisymmetric so expm(theta G)
    is orthogonal.
    """
    size = total_n + 1
    g = np.zeros((size, size))
    for m in range(1, size):
        g[m - 1, m] = math.sqrt(m * (total_n - m + 1))
    g -= g.T
    u = expm(theta * g)
    u.setflags(write=False)
    return u


def apply_beam_splitter(state: TwoModeState, bs: BeamSplitter) -> TwoModeState:
    """Apply the beam-splitter unitary; output dims grow to (d1+d2-1, d1+d2-1).

    The enlargement makes the map exact: no amplitude can leave the
    represented space because total photon number is conserved block-wise.
    """
    d1, d2 = state.dims
    d_out = d1 + d2 - 1
    theta = math.asin(bs.r)
    out = np.zeros((d_out, d_out), dtype=complex)
    for total_n in range(d1 + d2 - 1):
        # gather |m, N-m⟩ amplitudes present in the rectangular input
        m_lo = max(0, total_n - d2 + 1)
        m_hi = min(d1 - 1, total_n)
        if m_lo > m_hi:
            continue
        vec = np.zeros(total_n + 1, dtype=complex)
        ms = np.arange(m_lo, m_hi + 1)
        vec[ms] = state.amps[ms, total_n - ms]
        if not np.any(vec):
            continue
        rotated = _block_unitary(total_n, theta) @ vec
        ms_out = np.arange(total_n + 1)
        out[ms_out, total_n - ms_out] += rotated
    return TwoModeState(out)


def project_mode2(state: TwoModeState, n: int) -> tuple[float, FockState]:
    """Condition on detecting exactly n photons in mode 2.

    Returns the outcome probability sum_m |amps[m, n]|^2 and the collapsed,
    renormalized mode-1 state.  Raises ZeroProbabilityError when the branch
    carries no probability; callers treat such branches as unreachable.
    """
    d1, d2 = state.dims
    if not 0 <= n < d2:
        raise IndexError(f"outcome {n} outside mode-2 space of dim {d2}")
    column = state.amps[:, n]
    probability = float(np.sum(np.abs(column) ** 2))
    if probability < 1e-300:
        raise ZeroProbabilityError(f"outcome n={n} has probability {probability:.3e}")
    return probability, FockState(column / math.sqrt(probability))
