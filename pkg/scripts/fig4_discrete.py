"""Detector statistics for the spin-1 test, with and without coincidence on D1.

    python scripts/fig4_discrete.py [--beta2 0.9] [--shots 100000] [--seed 0]
"""

import argparse
import math

from poppersim.discrete import DETECTORS, DiscreteConfig, decompose_x_basis, run_coincidence


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--beta2", type=float, default=0.9, help="weight of |0,0> (beta squared)")
    ap.add_argument("--shots", type=int, default=100_000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    cfg = DiscreteConfig.from_beta(math.sqrt(args.beta2), shots=args.shots, seed=args.seed)
    r = run_coincidence(cfg)
    print(f"alpha = {cfg.alpha:.6f}  beta = {cfg.beta:.6f}")
    print(f"P(D1 fires) = {r.selection_probability:.6f}")
    print(f"{'detector':>8} {'no A-side':>10} {'counts':>8} {'with D1':>10} {'counts':>8}")
    for d in DETECTORS:
        print(f"{d:>8} {r.unconditional[d]:10.6f} {r.unconditional_counts[d]:8d} "
              f"{r.conditional[d]:10.6f} {r.conditional_counts[d]:8d}")
    print("\nB amplitudes (+1, 0, -1) per A_x branch:")
    for m, amps in decompose_x_basis(cfg).items():
        print(f"  A_x = {m:+d}: {[round(float(a.real), 6) for a in amps]}")


if __name__ == "__main__":
    main()
