"""Full-rate non-orthogonal STBC construction, encoding and realification.

Square n x n codes carrying k = n^2 complex symbols per code matrix, built
from the circulant-with-twist family parameterized by (delta, t). The
`ill_code` preset uses delta = t = 1; `fdill_code` uses delta = e^{j sqrt(5)},
t = e^{j}.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .signal_set import SignalSet, symbol_indices


@dataclass(frozen=True)
class StbcCode:
    """Linear-dispersion description of one square full-rate code."""

    n: int                 # transmit antennas
    p: int                 # time slots (= n)
    k: int                 # complex symbols per code matrix (= n^2)
    delta: complex
    t: complex
    weights: np.ndarray    # (k, n, p) complex dispersion matrices

    def layout(self, u: int, v: int) -> int:
        """Flat symbol index of data symbol d[u, v], 0 <= u, v < n."""
        return u * self.n + v


def build_code(n: int, delta: complex = 1.0, t: complex = 1.0) -> StbcCode:
    """Construct the n x n full-rate code with parameters (delta, t).

    Entry (r, c) of the code matrix is
        delta^[r < c] * sum_i d[(r - c) mod n, i] * w_n^(c i) * t^i
    with w_n = e^{j 2 pi / n}, so each of the k = n^2 weight matrices has
    permutation-type support (one nonzero per row and per column).
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    omega = np.exp(2j * np.pi / n)
    weights = np.zeros((n * n, n, n), dtype=complex)
    for u in range(n):
        for v in range(n):
            a = weights[u * n + v]
            for c in range(n):
                r = (u + c) % n
                coeff = (omega ** (c * v)) * (t ** v)
                if r < c:
                    coeff = coeff * delta
                a[r, c] = coeff
    weights.setflags(write=False)
    return StbcCode(n=n, p=n, k=n * n, delta=complex(delta), t=complex(t),
                    weights=weights)


def ill_code(n: int) -> StbcCode:
    """Information-lossless parameterization (delta = t = 1)."""
    return build_code(n, 1.0, 1.0)


def fdill_code(n: int) -> StbcCode:
    """Full-diversity information-lossless parameterization."""
    return build_code(n, np.exp(1j * np.sqrt(5.0)), np.exp(1j))


def encode(code: StbcCode, data: np.ndarray) -> np.ndarray:
    """Code matrix sum_i data[i] * weights[i]; linear in the data vector."""
    data = np.asarray(data)
    if data.shape != (code.k,):
        raise ValueError(f"data must have length k={code.k}, got {data.shape}")
    return np.tensordot(data, code.weights, axes=1)


def effective_channel(code: StbcCode, H_c: np.ndarray) -> np.ndarray:
    """Equivalent V-BLAST channel: column i = vec(H_c @ weights[i]).

    Satisfies vec(H_c @ encode(code, x)) = result @ x for all data x.
    """
    H_c = np.asarray(H_c)
    if H_c.ndim != 2 or H_c.shape[1] != code.n:
        raise ValueError(f"H_c must have {code.n} columns, got {H_c.shape}")
    prod = np.einsum("rn,knp->krp", H_c, code.weights)
    # vec() stacks columns: transpose (k, r, p) -> (k, p, r) then flatten rows.
    return prod.transpose(0, 2, 1).reshape(code.k, -1).T


@dataclass(frozen=True)
class RealSystem:
    """Real-valued decomposition of y_c = H_tilde x_c + n_c.

    H has the block structure [[Re H, -Im H], [Im H, Re H]]; R = H^T H and
    y_mf = H^T y are precomputed since every detector consumes them.
    """

    H: np.ndarray        # (2 Nr p, 2k)
    y: np.ndarray        # (2 Nr p,)
    R: np.ndarray        # (2k, 2k)
    y_mf: np.ndarray     # (2k,)
    sigma2: float        # complex noise variance per entry


def realify(H_tilde: np.ndarray, y_c: np.ndarray, sigma2: float) -> RealSystem:
    """Stack the complex system into its real-valued equivalent."""
    H_tilde = np.asarray(H_tilde)
    y_c = np.asarray(y_c)
    if H_tilde.ndim != 2 or y_c.ndim != 1 or H_tilde.shape[0] != y_c.shape[0]:
        raise ValueError(
            f"inconsistent dimensions: H {H_tilde.shape}, y {y_c.shape}")
    HI, HQ = H_tilde.real, H_tilde.imag
    H = np.block([[HI, -HQ], [HQ, HI]])
    y = np.concatenate([y_c.real, y_c.imag])
    R = H.T @ H
    y_mf = H.T @ y
    for arr in (H, y, R, y_mf):
        arr.setflags(write=False)
    return RealSystem(H=H, y=y, R=R, y_mf=y_mf, sigma2=float(sigma2))


def _gray(q: int) -> int:
    return q ^ (q >> 1)


def _gray_tables(M: int) -> tuple[np.ndarray, np.ndarray]:
    labels = np.array([_gray(q) for q in range(M)], dtype=np.intp)
    index_of_label = np.empty(M, dtype=np.intp)
    index_of_label[labels] = np.arange(M)
    return labels, index_of_label


def extract_bits(x_hat: np.ndarray, sset: SignalSet) -> np.ndarray:
    """Map detected PAM symbols to bits via Gray labeling of ascending order.

    Output has len(x_hat) * log2(M) bits, MSB first per symbol. Every entry
    of x_hat must be an alphabet member.
    """
    b = sset.bits_per_symbol
    if (1 << b) != sset.M:
        raise ValueError(f"M={sset.M} is not a power of two; no bit labeling")
    idx = symbol_indices(sset, x_hat)
    labels, _ = _gray_tables(sset.M)
    vals = labels[idx]
    bits = np.empty((len(vals), b), dtype=np.int64)
    for j in range(b):
        bits[:, j] = (vals >> (b - 1 - j)) & 1
    return bits.reshape(-1)


def bits_to_symbols(bits: np.ndarray, sset: SignalSet) -> np.ndarray:
    """Inverse of `extract_bits`: Gray-labeled bit groups to PAM symbols."""
    b = sset.bits_per_symbol
    if (1 << b) != sset.M:
        raise ValueError(f"M={sset.M} is not a power of two; no bit labeling")
    bits = np.asarray(bits, dtype=np.int64)
    if bits.ndim != 1 or bits.size % b != 0:
        raise ValueError(f"bit vector length must be a multiple of {b}")
    groups = bits.reshape(-1, b)
    vals = np.zeros(len(groups), dtype=np.intp)
    for j in range(b):
        vals = (vals << 1) | groups[:, j]
    _, index_of_label = _gray_tables(sset.M)
    return sset.symbols[index_of_label[vals]]
