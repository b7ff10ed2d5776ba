#!/usr/bin/env python3
"""Sidelobe envelope of |H|^2 per unit band of fT, for several alphas.

The alpha-half-sine phase has a jump in g'' at |t| = T/2 of size
2 pi alpha (alpha - 1) / T^2, so h'' jumps there and every alpha > 1 tail
falls as omega^-6 in power with a prefactor growing like (alpha (alpha - 1))^2.
For alpha <= 2 the edges t = +-T add a tail of the same or slower order,
so the printed asymptote only describes alpha > 2 closely.
"""
import argparse
import math

import numpy as np

from wavebench.psf import PulseShape
from wavebench.spectral import from_normalized, power_spectrum, transform


def run():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--alpha", default="1.5,2,3,5")
    ap.add_argument("--fmax", type=int, default=30)
    args = ap.parse_args()
    alphas = [float(a) for a in args.alpha.split(",")]
    shapes = [PulseShape.half_sine(), PulseShape.sfsk()] + [PulseShape.alpha_half_sine(a) for a in alphas]

    f = np.arange(0, args.fmax * 100 + 1) / 100
    P = {s.label: power_spectrum(transform(s, from_normalized(f))) for s in shapes}
    print("band  " + "  ".join(f"{s.label:>26s}" for s in shapes))
    for lo in range(1, args.fmax):
        m = (f >= lo) & (f < lo + 1)
        print(f"{lo:4d}  " + "  ".join(f"{10 * math.log10(P[s.label][m].max()):26.1f}" for s in shapes))

    print("\nasymptotic envelope at fT = f (dB), alpha > 1: 2 sin(pi/4) * jump / omega^3")
    for a in alphas:
        if a <= 1:
            continue
        jump = 2 * math.pi * a * (a - 1)
        w = 2 * math.pi * args.fmax
        print(f"alpha={a:g}: {20 * math.log10(2 * math.sin(math.pi / 4) * jump / w ** 3):.1f} dB at fT={args.fmax}")


if __name__ == "__main__":
    run()
