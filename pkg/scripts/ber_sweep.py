#!/usr/bin/env python3
"""Uncoded BER vs SNR for RTS-decoded full-rate STBCs of growing size.

Reproduces the headline large-system experiment: as N_t = N_r grows, the
RTS-decoded BER curve moves toward the SISO AWGN baseline. Emits one CSV
per system plus the baseline curve.

Example:
    python3 scripts/ber_sweep.py --sizes 4,8 --snr 4,6,8,10,12 \
        --target-errors 200 --outdir results/
"""

import argparse
import os

from stbc_rts import SimConfig, run_ber_sweep, siso_awgn_reference, write_results
from stbc_rts.sim import csv_rows


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", default="4,8",
                    help="comma-separated N_t=N_r system sizes")
    ap.add_argument("--snr", default="4,6,8,10,12",
                    help="comma-separated SNR grid in dB")
    ap.add_argument("--code", choices=("ill", "fdill"), default="ill")
    ap.add_argument("--detectors", default="rts")
    ap.add_argument("--frames", type=int, default=20_000)
    ap.add_argument("--target-errors", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--workers", type=int, default=None)
    ap.add_argument("--outdir", default="results")
    args = ap.parse_args()

    os.makedirs(args.outdir, exist_ok=True)
    snrs = tuple(float(s) for s in args.snr.split(","))
    detectors = tuple(s.strip() for s in args.detectors.split(","))

    for size in (int(s) for s in args.sizes.split(",")):
        kwargs = dict(n=size, code=args.code, detectors=detectors,
                      snr_db=snrs, max_frames=args.frames,
                      target_errors=args.target_errors, seed=args.seed)
        if args.workers is not None:
            kwargs["workers"] = args.workers
        cfg = SimConfig(**kwargs)
        records = run_ber_sweep(cfg)
        out = os.path.join(args.outdir, f"ber_{args.code}_{size}x{size}.csv")
        write_results(records, cfg, out)
        for r in records:
            print(f"{size}x{size} {r.detector:5s} {r.snr_db:5.1f} dB  "
                  f"BER {r.ber:.3e}  ({r.bit_errors} errs / {r.frames} frames)")
        print(f"wrote {out}")

    baseline = siso_awgn_reference(snrs, target_errors=10 * args.target_errors,
                                   seed=args.seed)
    import csv

    out = os.path.join(args.outdir, "ber_siso_awgn.csv")
    with open(out, "w", newline="") as fh:
        csv.writer(fh).writerows(csv_rows(baseline, "awgn", 1, 1, 4))
    print(f"wrote {out}")


if __name__ == "__main__":
    main()
