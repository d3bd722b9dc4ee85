#!/usr/bin/env python3
"""Compare the adaptive stopping rule against fixed-iteration decoding.

For each SNR point, decodes the same frames twice -- once with the default
stopping parameters and once with a fixed iteration budget -- and reports
mean iterations and the BER penalty of stopping early.

Example:
    python3 scripts/stopping_economy.py --n 4 --snr 6,8,10,12 --frames 2000
"""

import argparse

from stbc_rts import SimConfig, fixed_iteration_config, run_ber_sweep


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=4)
    ap.add_argument("--snr", default="6,8,10,12")
    ap.add_argument("--frames", type=int, default=2000)
    ap.add_argument("--fixed-iters", type=int, default=300)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    snrs = tuple(float(s) for s in args.snr.split(","))
    base = dict(n=args.n, snr_db=snrs, max_frames=args.frames,
                target_errors=10 ** 9, seed=args.seed)
    default = run_ber_sweep(SimConfig(**base))
    fixed = run_ber_sweep(SimConfig(
        rts=fixed_iteration_config(args.fixed_iters), **base))

    print(f"{'snr_db':>7} {'iters(def)':>11} {'iters(fix)':>11} "
          f"{'frac':>6} {'ber(def)':>10} {'ber(fix)':>10} {'ratio':>6}")
    for d, f in zip(default, fixed):
        frac = d.mean_iterations / f.mean_iterations
        ratio = d.ber / f.ber if f.ber > 0 else float("inf")
        print(f"{d.snr_db:7.1f} {d.mean_iterations:11.1f} "
              f"{f.mean_iterations:11.1f} {frac:6.1%} "
              f"{d.ber:10.3e} {f.ber:10.3e} {ratio:6.3f}")


if __name__ == "__main__":
    main()
