#!/usr/bin/env python3
"""BER under pilot-based channel estimation for varying frame lengths.

Each coherence frame carries one pilot block plus N_d data code matrices;
hard decisions from the first decode round act as virtual pilots for
re-estimation. Longer frames amortize the pilot and sharpen the estimate,
pulling the BER toward the perfect-CSIR curve.

Example:
    python3 scripts/estimated_csir.py --n 4 --snr 10 --nd 8,12,20
"""

import argparse

from stbc_rts import SimConfig, run_ber_sweep


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=4)
    ap.add_argument("--snr", default="10")
    ap.add_argument("--nd", default="8,12,20",
                    help="comma-separated data-matrix counts per frame")
    ap.add_argument("--est-iters", type=int, default=2)
    ap.add_argument("--target-errors", type=int, default=400)
    ap.add_argument("--frames", type=int, default=4000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    snrs = tuple(float(s) for s in args.snr.split(","))
    base = dict(n=args.n, snr_db=snrs, max_frames=args.frames,
                target_errors=args.target_errors, seed=args.seed)

    perfect = run_ber_sweep(SimConfig(csir="perfect", **base))
    print(f"{'snr_db':>7} {'mode':>14} {'ber':>10} {'errors':>7}")
    for r in perfect:
        print(f"{r.snr_db:7.1f} {'perfect':>14} {r.ber:10.3e} "
              f"{r.bit_errors:7d}")
    for nd in (int(s) for s in args.nd.split(",")):
        recs = run_ber_sweep(SimConfig(csir="estimated", n_d=nd,
                                       est_iters=args.est_iters, **base))
        for r in recs:
            print(f"{r.snr_db:7.1f} {f'estimated nd={nd}':>14} "
                  f"{r.ber:10.3e} {r.bit_errors:7d}")


if __name__ == "__main__":
    main()
