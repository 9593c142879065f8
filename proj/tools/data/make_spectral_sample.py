"""Writes data/spectral_sample.csv: a SYNTHETIC stand-in for Maass-form data.

The records are not real spectral parameters. kappa follows the Weyl law
N(kappa) ~ kappa^2 / 12 with jitter; roughly half the weights vanish (as
for odd forms) and the rest are positive with mean growing like log^3 kappa.
Replace the file with published data for meaningful explicit-formula scans.
"""

import argparse
import math

import numpy as np


def generate(kappa_max: float, seed: int) -> list[tuple[float, float]]:
    rng = np.random.default_rng(seed)
    rows = []
    j = 0
    while True:
        j += 1
        base = math.sqrt(12.0 * j + 78.9)  # first kappa near 9.53
        if base > kappa_max:
            break
        gap = math.sqrt(12.0 * (j + 1) + 78.9) - base
        kappa = base + rng.uniform(-0.25, 0.25) * gap
        if rng.random() < 0.5:
            weight = 0.0
        else:
            weight = 0.05 * math.log(kappa) ** 3 * rng.gamma(2.0, 0.5)
        rows.append((kappa, weight))
    return rows


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="data/spectral_sample.csv")
    ap.add_argument("--kappa-max", type=float, default=300.0)
    ap.add_argument("--seed", type=int, default=2026)
    args = ap.parse_args()
    rows = generate(args.kappa_max, args.seed)
    with open(args.out, "w", encoding="utf-8", newline="\n") as f:
        f.write("# SYNTHETIC spectral sample (not real Maass-form data); see tools/data/make_spectral_sample.py\n")
        f.write("kappa,alpha_h3\n")
        for kappa, weight in rows:
            f.write(f"{kappa:.12g},{weight:.12g}\n")


if __name__ == "__main__":
    main()
