"""M-PAM alphabets with per-symbol neighbor lists and quantization.

The neighbor structure is what the local-search detectors move over: each
symbol has exactly N candidate replacement symbols, ordered nearest-first.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class SignalSet:
    """An M-PAM alphabet with a fixed neighborhood structure.

    Immutable after construction; safe to share across simulation workers.
    """

    M: int
    N: int
    symbols: np.ndarray        # (M,) ascending reals, 2q - 1 - M
    neighbors: np.ndarray      # (M, N) neighbor symbol values, nearest-first
    neighbor_idx: np.ndarray   # (M, N) indices into `symbols`
    # reverse_idx[q, v] = position of symbols[q] inside the neighbor list of
    # its v-th neighbor, or -1 when the relation is not symmetric.
    reverse_idx: np.ndarray
    midpoints: np.ndarray      # (M-1,) quantizer decision thresholds

    @property
    def bits_per_symbol(self) -> int:
        return self.M.bit_length() - 1

    @property
    def mean_energy(self) -> float:
        """Average energy of one real PAM symbol."""
        return float(np.mean(self.symbols ** 2))


def make_pam(M: int, N: int) -> SignalSet:
    """Build the M-PAM set {2q - 1 - M : q = 1..M} with N-nearest neighbor lists.

    Neighbor lists hold the N symbols closest in absolute difference,
    nearest-first; a tie between equidistant symbols is broken toward the
    smaller value. Deterministic for a given (M, N).
    """
    if M < 2 or M % 2 != 0:
        raise ValueError(f"M must be a positive even integer, got {M}")
    if not 1 <= N <= M - 1:
        raise ValueError(f"N must be in [1, M-1]={M - 1}, got {N}")
    symbols = np.arange(1 - M, M, 2, dtype=float)
    neighbor_idx = np.empty((M, N), dtype=np.intp)
    for q in range(M):
        others = [j for j in range(M) if j != q]
        others.sort(key=lambda j: (abs(symbols[j] - symbols[q]), symbols[j]))
        neighbor_idx[q] = others[:N]
    neighbors = symbols[neighbor_idx]
    reverse_idx = np.full((M, N), -1, dtype=np.intp)
    for q in range(M):
        for v in range(N):
            j = neighbor_idx[q, v]
            hits = np.nonzero(neighbor_idx[j] == q)[0]
            if hits.size:
                reverse_idx[q, v] = hits[0]
    midpoints = 0.5 * (symbols[:-1] + symbols[1:])
    for arr in (symbols, neighbors, neighbor_idx, reverse_idx, midpoints):
        arr.setflags(write=False)
    return SignalSet(M=M, N=N, symbols=symbols, neighbors=neighbors,
                     neighbor_idx=neighbor_idx, reverse_idx=reverse_idx,
                     midpoints=midpoints)


def quantize(sset: SignalSet, value: float) -> float:
    """Nearest alphabet symbol; a tie goes to the smaller symbol."""
    if not np.isfinite(value):
        raise ValueError(f"cannot quantize non-finite value {value}")
    idx = int(np.searchsorted(sset.midpoints, value, side="left"))
    return float(sset.symbols[idx])


def quantize_array(sset: SignalSet, values: np.ndarray) -> np.ndarray:
    """Elementwise `quantize` over an array."""
    values = np.asarray(values, dtype=float)
    if not np.all(np.isfinite(values)):
        raise ValueError("cannot quantize non-finite values")
    idx = np.searchsorted(sset.midpoints, values, side="left")
    return sset.symbols[idx]


def symbol_indices(sset: SignalSet, x: np.ndarray) -> np.ndarray:
    """Map alphabet members to their indices; raises if any entry is foreign."""
    x = np.asarray(x, dtype=float)
    idx = np.searchsorted(sset.symbols, x)
    idx = np.clip(idx, 0, sset.M - 1)
    if not np.array_equal(sset.symbols[idx], x):
        raise ValueError("vector contains values outside the signal set")
    return idx
