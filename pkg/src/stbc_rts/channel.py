"""Rayleigh MIMO channel sampling, AWGN, and pilot-based MMSE estimation."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class ChannelInstance:
    """One quasi-static channel realization."""

    H_c: np.ndarray   # (N_r, N_t) complex gains
    N_r: int
    N_t: int


def substream(seed: int, *path: int) -> np.random.Generator:
    """Independent generator for a (seed, path...) tuple.

    Frame-indexed substreams keep Monte-Carlo results independent of worker
    scheduling.
    """
    return np.random.default_rng(np.random.SeedSequence((seed, *path)))


def sample_channel(rng: np.random.Generator, N_r: int, N_t: int) -> ChannelInstance:
    """i.i.d. CN(0, 1) channel: (g1 + j g2) / sqrt(2) per entry."""
    if N_r < 1 or N_t < 1:
        raise ValueError(f"antenna counts must be >= 1, got {N_r}x{N_t}")
    g = rng.standard_normal((2, N_r, N_t))
    H_c = (g[0] + 1j * g[1]) / np.sqrt(2.0)
    H_c.setflags(write=False)
    return ChannelInstance(H_c=H_c, N_r=N_r, N_t=N_t)


def snr_to_sigma2(gamma_db: float, N_t: int, Es: float) -> float:
    """Complex noise variance for an average received SNR per antenna.

    sigma^2 = N_t Es / gamma with gamma the linear SNR.
    """
    if N_t < 1:
        raise ValueError(f"N_t must be >= 1, got {N_t}")
    if Es <= 0:
        raise ValueError(f"Es must be positive, got {Es}")
    return N_t * Es / (10.0 ** (gamma_db / 10.0))


def add_noise(rng: np.random.Generator, signal: np.ndarray, sigma2: float) -> np.ndarray:
    """Add i.i.d. complex Gaussian noise, variance sigma2 per entry."""
    if sigma2 < 0:
        raise ValueError(f"sigma2 must be non-negative, got {sigma2}")
    signal = np.asarray(signal, dtype=complex)
    if sigma2 == 0:
        return signal.copy()
    g = rng.standard_normal((2,) + signal.shape)
    return signal + np.sqrt(sigma2 / 2.0) * (g[0] + 1j * g[1])


def mmse_channel_estimate(Y_p: np.ndarray, X_p: np.ndarray, sigma2: float) -> ChannelInstance:
    """Linear MMSE channel estimate from a pilot block.

    For a unit-variance channel prior: H_hat = Y_p X_p^H (X_p X_p^H + sigma2 I)^-1.
    X_p may also contain decoded data matrices used as virtual pilots.
    """
    Y_p = np.asarray(Y_p, dtype=complex)
    X_p = np.asarray(X_p, dtype=complex)
    if Y_p.ndim != 2 or X_p.ndim != 2 or Y_p.shape[1] != X_p.shape[1]:
        raise ValueError(
            f"inconsistent pilot shapes: Y {Y_p.shape}, X {X_p.shape}")
    N_t = X_p.shape[0]
    G = X_p @ X_p.conj().T + sigma2 * np.eye(N_t)
    # Right division: H_hat G = Y_p X_p^H.
    H_c = np.linalg.solve(G.T, (Y_p @ X_p.conj().T).T).T
    H_c.setflags(write=False)
    return ChannelInstance(H_c=H_c, N_r=Y_p.shape[0], N_t=N_t)
