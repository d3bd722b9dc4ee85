"""Command-line front end: `sweep`, `decode-one`, and `reference`."""

from __future__ import annotations

import argparse
import csv
import sys
from dataclasses import fields

import numpy as np

from .channel import substream
from .detectors import RtsConfig, ml_cost, mmse_detect, rts_decode
from .sim import (BerRecord, SimConfig, csv_rows, run_ber_sweep,
                  siso_awgn_reference, write_results)
from . import sim as _sim
from .stbc import realify

_RTS_KEYS = {f.name for f in fields(RtsConfig)}
_SIM_KEYS = {f.name for f in fields(SimConfig)} - {"rts"}
_LIST_KEYS = {"snr_db", "detectors"}


def _parse_value(key: str, raw: str):
    if key == "detectors":
        return tuple(s.strip() for s in raw.split(",") if s.strip())
    if key == "snr_db":
        return tuple(float(s) for s in raw.split(",") if s.strip())
    if key in ("code", "csir"):
        return raw.strip()
    if key in ("beta", "alpha1", "alpha2"):
        return float(raw)
    return int(raw)


def load_config(path: str) -> SimConfig:
    """Read a flat `key = value` config file (see README for the key list)."""
    sim_kwargs: dict = {}
    rts_kwargs: dict = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected 'key = value'")
            key, raw = (s.strip() for s in line.split("=", 1))
            if key in _RTS_KEYS:
                rts_kwargs[key] = _parse_value(key, raw)
            elif key in _SIM_KEYS:
                sim_kwargs[key] = _parse_value(key, raw)
            else:
                raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
    return SimConfig(rts=RtsConfig(**rts_kwargs), **sim_kwargs)


def _apply_overrides(cfg: SimConfig, args: argparse.Namespace) -> SimConfig:
    if args.snr is not None:
        cfg.snr_db = tuple(float(s) for s in args.snr.split(","))
    if args.code is not None:
        cfg.code = args.code
    if args.detector is not None:
        cfg.detectors = tuple(s.strip() for s in args.detector.split(","))
    if args.seed is not None:
        cfg.seed = args.seed
    if args.frames is not None:
        cfg.max_frames = args.frames
    if getattr(args, "n", None) is not None:
        cfg.n = args.n
        cfg.nr = args.n if args.nr is None else args.nr
    elif getattr(args, "nr", None) is not None:
        cfg.nr = args.nr
    if getattr(args, "workers", None) is not None:
        cfg.workers = args.workers
    if getattr(args, "target_errors", None) is not None:
        cfg.target_errors = args.target_errors
    cfg.__post_init__()
    return cfg


def cmd_sweep(args: argparse.Namespace) -> int:
    cfg = load_config(args.config) if args.config else SimConfig()
    cfg = _apply_overrides(cfg, args)
    records = run_ber_sweep(cfg)
    if args.out:
        write_results(records, cfg, args.out)
    else:
        csv.writer(sys.stdout).writerows(
            csv_rows(records, cfg.code, cfg.n, cfg.nr, cfg.mod))
    return 0


def cmd_decode_one(args: argparse.Namespace) -> int:
    cfg = SimConfig(snr_db=(args.snr,), detectors=("rts",), code=args.code,
                    seed=args.seed, n=args.n,
                    nr=args.nr if args.nr is not None else args.n)
    ctx = _sim._Context(cfg)
    rng = substream(cfg.seed, 0, 0)
    sigma2 = _sim.snr_to_sigma2(cfg.snr_db[0], cfg.n, ctx.es_tx)
    bits, x_r, X_c = _sim._draw_matrix(ctx, rng)
    H_c = _sim.sample_channel(rng, cfg.nr, cfg.n).H_c
    Y_c = _sim.add_noise(rng, H_c @ X_c, sigma2)
    system = realify(_sim.effective_channel(ctx.code, H_c),
                     Y_c.ravel(order="F"), sigma2)
    x0 = mmse_detect(system, ctx.sset)
    trace: list = []
    x_hat, iters, best = rts_decode(system, ctx.sset, cfg.rts, x0, trace=trace)
    print(f"seed={cfg.seed} code={cfg.code} n={cfg.n} nr={cfg.nr} "
          f"mod={cfg.mod} snr_db={cfg.snr_db[0]:g}")
    print("tx symbols:", np.array2string(x_r, max_line_width=120))
    print("rx symbols:", np.array2string(x_hat, max_line_width=120))
    print(f"initial (MMSE) cost: {ml_cost(system, x0):.6f}")
    print(f"iterations: {iters}  best cost: {best:.6f}  "
          f"cost floor (-y'y): {-float(system.y @ system.y):.6f}")
    symbol_errors = int(np.sum(x_r != x_hat))
    rx_bits = _sim.extract_bits(x_hat, ctx.sset)
    print(f"symbol errors: {symbol_errors}/{x_r.size}  "
          f"bit errors: {int(np.sum(bits != rx_bits))}/{bits.size}")
    print("cost trace (iter, current, best):")
    for m, cur, g in trace:
        print(f"  {m:4d}  {cur:14.6f}  {g:14.6f}")
    return 0


def cmd_reference(args: argparse.Namespace) -> int:
    snrs = tuple(float(s) for s in args.snr.split(","))
    records = siso_awgn_reference(snrs, mod=args.mod,
                                  target_errors=args.target_errors,
                                  seed=args.seed or 0)
    rows = csv_rows(records, "awgn", 1, 1, args.mod)
    if args.out:
        with open(args.out, "w", newline="") as fh:
            csv.writer(fh).writerows(rows)
    else:
        csv.writer(sys.stdout).writerows(rows)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="stbc-rts",
        description="Monte-Carlo BER simulator for RTS decoding of "
                    "full-rate non-orthogonal STBCs")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--snr", help="comma-separated SNR grid in dB")
        p.add_argument("--code", choices=("ill", "fdill"))
        p.add_argument("--detector",
                       help="comma-separated list: rts,las,mmse,mf,ml")
        p.add_argument("--seed", type=int)
        p.add_argument("--frames", type=int, help="max frames per SNR point")

    p_sweep = sub.add_parser("sweep", help="run a BER sweep")
    p_sweep.add_argument("--config", help="flat key=value config file")
    common(p_sweep)
    p_sweep.add_argument("--n", type=int, help="transmit antennas")
    p_sweep.add_argument("--nr", type=int, help="receive antennas")
    p_sweep.add_argument("--workers", type=int)
    p_sweep.add_argument("--target-errors", dest="target_errors", type=int)
    p_sweep.add_argument("--out", help="CSV output path")
    p_sweep.set_defaults(func=cmd_sweep)

    p_one = sub.add_parser("decode-one",
                           help="decode a single frame and print the trace")
    p_one.add_argument("--snr", type=float, default=10.0,
                       help="single SNR point in dB")
    p_one.add_argument("--code", choices=("ill", "fdill"), default="ill")
    p_one.add_argument("--seed", type=int, default=0)
    p_one.add_argument("--n", type=int, default=4)
    p_one.add_argument("--nr", type=int)
    p_one.set_defaults(func=cmd_decode_one)

    p_ref = sub.add_parser("reference", help="SISO AWGN baseline curve")
    p_ref.add_argument("--snr", required=True,
                       help="comma-separated SNR grid in dB")
    p_ref.add_argument("--mod", type=int, default=4)
    p_ref.add_argument("--seed", type=int)
    p_ref.add_argument("--target-errors", dest="target_errors", type=int,
                       default=200)
    p_ref.add_argument("--out", help="CSV output path")
    p_ref.set_defaults(func=cmd_reference)
    return parser


def cli_main(argv: list[str] | None = None) -> int:
    """Entry point; returns the process exit status (2 on usage errors)."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(cli_main())


if __name__ == "__main__":
    main()
