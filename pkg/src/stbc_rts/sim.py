"""Monte-Carlo BER simulation: SNR sweeps, pilot frames, SISO AWGN baseline.

Each frame draws its own RNG substream keyed by (seed, snr index, frame
index), so sweep results are independent of worker count and scheduling.
"""

from __future__ import annotations

import csv
import json
import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .channel import (add_noise, mmse_channel_estimate, sample_channel,
                      snr_to_sigma2, substream)
from .detectors import (RtsConfig, las_decode, mf_detect, ml_brute_force,
                        mmse_detect, rts_decode)
from .signal_set import SignalSet, make_pam, quantize_array
from .stbc import (StbcCode, bits_to_symbols, effective_channel, encode,
                   extract_bits, fdill_code, ill_code, realify)

_BATCH = 32  # frames per dispatch; fixed so results never depend on workers

KNOWN_DETECTORS = ("rts", "las", "mmse", "mf", "ml")


def default_workers() -> int:
    return int(os.environ.get("STBC_RTS_WORKERS", "1"))


@dataclass
class SimConfig:
    """One simulation campaign: code, antennas, detectors, SNR grid."""

    n: int = 4
    code: str = "ill"                      # "ill" or "fdill"
    nr: int | None = None                  # defaults to n
    mod: int = 4                           # QAM order (square)
    detectors: tuple[str, ...] = ("rts",)
    rts: RtsConfig = field(default_factory=RtsConfig)
    neighbor_count: int | None = None      # defaults to min(M_pam - 1, 2)
    snr_db: tuple[float, ...] = (10.0,)
    max_frames: int = 10_000
    target_errors: int = 200
    seed: int = 0
    csir: str = "perfect"                  # "perfect" or "estimated"
    n_d: int = 8                           # data STBC matrices per frame
    est_iters: int = 2                     # decode/estimate rounds
    workers: int = field(default_factory=default_workers)

    def __post_init__(self) -> None:
        if self.nr is None:
            self.nr = self.n
        if self.nr < 1 or self.n < 1:
            raise ValueError("antenna counts must be >= 1")
        if not self.snr_db:
            raise ValueError("snr grid must be non-empty")
        if self.max_frames < 1:
            raise ValueError("max_frames must be >= 1")
        if self.code not in ("ill", "fdill"):
            raise ValueError(f"unknown code preset {self.code!r}")
        if self.csir not in ("perfect", "estimated"):
            raise ValueError(f"unknown csir mode {self.csir!r}")
        for d in self.detectors:
            if d not in KNOWN_DETECTORS:
                raise ValueError(f"unknown detector {d!r}")
        m_pam = math.isqrt(self.mod)
        if m_pam * m_pam != self.mod or m_pam % 2 != 0:
            raise ValueError(f"mod must be a square QAM order, got {self.mod}")


@dataclass
class BerRecord:
    """Aggregated Monte-Carlo result for one (detector, SNR) point."""

    detector: str
    snr_db: float
    frames: int
    bits: int
    bit_errors: int
    ber: float
    mean_iterations: float
    mean_decode_wallclock: float


@dataclass
class FrameResult:
    """Outcome of one transmitted frame under every configured detector."""

    tx_bits: np.ndarray
    rx_bits: dict[str, np.ndarray]
    iterations: dict[str, int]
    decode_calls: dict[str, int]
    wallclock: dict[str, float]
    channel_uses: int


class _Context:
    """Per-sweep immutable pieces: code, signal set, geometry."""

    def __init__(self, cfg: SimConfig) -> None:
        self.cfg = cfg
        m_pam = math.isqrt(cfg.mod)
        n_nbr = cfg.neighbor_count if cfg.neighbor_count else min(m_pam - 1, 2)
        self.sset = make_pam(m_pam, n_nbr)
        self.code = ill_code(cfg.n) if cfg.code == "ill" else fdill_code(cfg.n)
        self.es_qam = 2.0 * self.sset.mean_energy
        # Every code-matrix entry sums n unit-modulus-weighted data symbols,
        # so the energy actually transmitted per antenna per use is n * Es.
        # The SNR convention sigma2 = N_t Es / gamma is defined on that
        # transmitted energy; this is what makes the curves comparable to the
        # SISO AWGN baseline.
        self.es_tx = cfg.n * self.es_qam
        self.bits_per_matrix = 2 * self.code.k * self.sset.bits_per_symbol


def _detect(name: str, sys, sset: SignalSet, rts_cfg: RtsConfig):
    """Dispatch one detector; returns (x_hat, iterations)."""
    if name == "rts":
        x_hat, iters, _ = rts_decode(sys, sset, rts_cfg)
        return x_hat, iters
    if name == "las":
        return las_decode(sys, sset)
    if name == "mmse":
        return mmse_detect(sys, sset), 0
    if name == "mf":
        return mf_detect(sys, sset), 0
    if name == "ml":
        x_hat, _ = ml_brute_force(sys, sset)
        return x_hat, 0
    raise ValueError(f"unknown detector {name!r}")


def _draw_matrix(ctx: _Context, rng) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Random bits -> real symbol vector -> complex code matrix."""
    bits = rng.integers(0, 2, size=ctx.bits_per_matrix)
    x_r = bits_to_symbols(bits, ctx.sset)
    k = ctx.code.k
    data = x_r[:k] + 1j * x_r[k:]
    return bits, x_r, encode(ctx.code, data)


def _decode_matrix(ctx: _Context, name: str, H_tilde, y_c, sigma2):
    sys = realify(H_tilde, y_c, sigma2)
    t0 = time.perf_counter()
    x_hat, iters = _detect(name, sys, ctx.sset, ctx.cfg.rts)
    return x_hat, iters, time.perf_counter() - t0


def _run_frame_perfect(ctx: _Context, rng, sigma2: float) -> FrameResult:
    bits, _, X_c = _draw_matrix(ctx, rng)
    H_c = sample_channel(rng, ctx.cfg.nr, ctx.cfg.n).H_c
    Y_c = add_noise(rng, H_c @ X_c, sigma2)
    H_tilde = effective_channel(ctx.code, H_c)
    y_c = Y_c.ravel(order="F")
    rx, iters, calls, wall = {}, {}, {}, {}
    for name in ctx.cfg.detectors:
        x_hat, it, dt = _decode_matrix(ctx, name, H_tilde, y_c, sigma2)
        rx[name] = extract_bits(x_hat, ctx.sset)
        iters[name], calls[name], wall[name] = it, 1, dt
    return FrameResult(tx_bits=bits, rx_bits=rx, iterations=iters,
                       decode_calls=calls, wallclock=wall,
                       channel_uses=ctx.code.p)


def _run_frame_estimated(ctx: _Context, rng, sigma2: float) -> FrameResult:
    """One coherence frame: pilot, N_d data matrices, iterative re-estimation."""
    cfg = ctx.cfg
    n = cfg.n
    H_c = sample_channel(rng, cfg.nr, n).H_c
    X_p = np.sqrt(n * ctx.es_tx) * np.eye(n, dtype=complex)
    Y_p = add_noise(rng, H_c @ X_p, sigma2)
    tx_bits, X_list, Y_list = [], [], []
    for _ in range(cfg.n_d):
        bits, _, X_c = _draw_matrix(ctx, rng)
        tx_bits.append(bits)
        X_list.append(X_c)
        Y_list.append(add_noise(rng, H_c @ X_c, sigma2))
    rx, iters, calls, wall = {}, {}, {}, {}
    k = ctx.code.k
    for name in cfg.detectors:
        est = mmse_channel_estimate(Y_p, X_p, sigma2)
        total_it, total_calls, total_dt = 0, 0, 0.0
        decoded: list[np.ndarray] = []
        for round_ in range(cfg.est_iters):
            H_tilde = effective_channel(ctx.code, est.H_c)
            decoded = []
            for Y_c in Y_list:
                x_hat, it, dt = _decode_matrix(
                    ctx, name, H_tilde, Y_c.ravel(order="F"), sigma2)
                decoded.append(x_hat)
                total_it += it
                total_calls += 1
                total_dt += dt
            if round_ < cfg.est_iters - 1:
                # Hard decisions become virtual pilots for re-estimation.
                X_hat = [encode(ctx.code, d[:k] + 1j * d[k:]) for d in decoded]
                X_all = np.hstack([X_p] + X_hat)
                Y_all = np.hstack([Y_p] + Y_list)
                est = mmse_channel_estimate(Y_all, X_all, sigma2)
        rx[name] = np.concatenate(
            [extract_bits(d, ctx.sset) for d in decoded])
        iters[name], calls[name], wall[name] = total_it, total_calls, total_dt
    return FrameResult(tx_bits=np.concatenate(tx_bits), rx_bits=rx,
                       iterations=iters, decode_calls=calls, wallclock=wall,
                       channel_uses=(cfg.n_d + 1) * n)


def _run_frame(ctx: _Context, rng, snr_db: float) -> FrameResult:
    sigma2 = snr_to_sigma2(snr_db, ctx.cfg.n, ctx.es_tx)
    if ctx.cfg.csir == "perfect":
        return _run_frame_perfect(ctx, rng, sigma2)
    return _run_frame_estimated(ctx, rng, sigma2)


def run_frame(cfg: SimConfig, rng: np.random.Generator,
              snr_db: float | None = None) -> FrameResult:
    """Simulate one frame at the given (default: first grid) SNR point."""
    ctx = _Context(cfg)
    return _run_frame(ctx, rng, cfg.snr_db[0] if snr_db is None else snr_db)


def run_ber_sweep(cfg: SimConfig) -> list[BerRecord]:
    """Accumulate frames per SNR point until every detector reaches the
    target error count or max_frames is hit. Deterministic for a given seed
    regardless of worker count."""
    ctx = _Context(cfg)
    records: list[BerRecord] = []
    pool = ThreadPoolExecutor(cfg.workers) if cfg.workers > 1 else None
    try:
        for si, snr in enumerate(sorted(cfg.snr_db)):
            errors = {d: 0 for d in cfg.detectors}
            bits = {d: 0 for d in cfg.detectors}
            iters = {d: 0 for d in cfg.detectors}
            calls = {d: 0 for d in cfg.detectors}
            wall = {d: 0.0 for d in cfg.detectors}
            frames = 0
            done = False
            while not done and frames < cfg.max_frames:
                batch = range(frames, min(frames + _BATCH, cfg.max_frames))

                def work(fi: int, _snr=snr) -> FrameResult:
                    return _run_frame(ctx, substream(cfg.seed, si, fi), _snr)

                results = (list(pool.map(work, batch)) if pool
                           else [work(fi) for fi in batch])
                for res in results:  # in frame order: worker-independent stop
                    frames += 1
                    for d in cfg.detectors:
                        errors[d] += int(np.sum(res.tx_bits != res.rx_bits[d]))
                        bits[d] += res.tx_bits.size
                        iters[d] += res.iterations[d]
                        calls[d] += res.decode_calls[d]
                        wall[d] += res.wallclock[d]
                    if min(errors.values()) >= cfg.target_errors:
                        done = True
                        break
            for d in cfg.detectors:
                records.append(BerRecord(
                    detector=d, snr_db=snr, frames=frames, bits=bits[d],
                    bit_errors=errors[d], ber=errors[d] / bits[d],
                    mean_iterations=iters[d] / calls[d] if calls[d] else 0.0,
                    mean_decode_wallclock=wall[d] / frames if frames else 0.0))
    finally:
        if pool:
            pool.shutdown()
    return records


def siso_awgn_reference(snr_db: tuple[float, ...], mod: int = 4,
                        target_errors: int = 200, seed: int = 0,
                        max_symbols: int = 5_000_000) -> list[BerRecord]:
    """Simulated 1x1 AWGN baseline (H = 1) under the same SNR convention."""
    m_pam = math.isqrt(mod)
    if m_pam * m_pam != mod or m_pam % 2 != 0:
        raise ValueError(f"mod must be a square QAM order, got {mod}")
    sset = make_pam(m_pam, 1)
    es = 2.0 * sset.mean_energy
    b = sset.bits_per_symbol
    records = []
    batch = 50_000
    for si, snr in enumerate(sorted(snr_db)):
        sigma2 = snr_to_sigma2(snr, 1, es)
        rng = substream(seed, si)
        errors = bitcount = symbols = 0
        while errors < target_errors and symbols < max_symbols:
            # 2*batch real PAM coordinates = batch complex symbols; each real
            # coordinate sees noise of variance sigma2 / 2.
            tx = rng.integers(0, 2, size=2 * b * batch)
            x_r = bits_to_symbols(tx, sset)
            y = x_r + np.sqrt(sigma2 / 2.0) * rng.standard_normal(x_r.size)
            rx = extract_bits(quantize_array(sset, y), sset)
            errors += int(np.sum(tx != rx))
            bitcount += tx.size
            symbols += batch
        records.append(BerRecord(
            detector="siso-awgn", snr_db=snr, frames=symbols, bits=bitcount,
            bit_errors=errors, ber=errors / bitcount,
            mean_iterations=0.0, mean_decode_wallclock=0.0))
    return records


# ---------------------------------------------------------------------------
# Result output
# ---------------------------------------------------------------------------

CSV_HEADER = ("detector", "code", "n", "nr", "mod", "snr_db", "frames",
              "bits", "bit_errors", "ber", "mean_iters")


def csv_rows(records: list[BerRecord], code: str, n: int, nr: int,
             mod: int) -> list[list[str]]:
    rows = [list(CSV_HEADER)]
    for r in records:
        rows.append([r.detector, code, str(n), str(nr), str(mod),
                     f"{r.snr_db:g}", str(r.frames), str(r.bits),
                     str(r.bit_errors), f"{r.ber:.12g}",
                     f"{r.mean_iterations:.6f}"])
    return rows


def write_results(records: list[BerRecord], cfg: SimConfig, out_path: str,
                  summary_path: str | None = None) -> None:
    """Write the CSV table plus a JSON summary next to it."""
    rows = csv_rows(records, cfg.code, cfg.n, cfg.nr, cfg.mod)
    with open(out_path, "w", newline="") as fh:
        csv.writer(fh).writerows(rows)
    if summary_path is None:
        summary_path = out_path + ".summary.json"
    summary = {"config": asdict(cfg), "records": [asdict(r) for r in records]}
    with open(summary_path, "w") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True, default=list)
        fh.write("\n")
