"""Pattern flatness and BER of Kronecker-structured ZC precoder variants.

Each variant uses ``N1 x N2 = N`` cyclic shifts of the column and row ZC
sequences, either by one sample ("unit") or spread evenly over the sequence
("spread").  The package baseline is the unit-shift variant with ``N1 = min(N, L1)``.
"""
import argparse

import numpy as np

from gcas.baselines import random_precoders, zc_sequence
from gcas.mimo import UraGeometry, flatness, pattern_grid
from gcas.stbc import SimConfig, simulate_ber


def kron_variant(L1, L2, N1, N2, spread):
    c, r = zc_sequence(L1), zc_sequence(L2)
    s1 = L1 // N1 if spread else 1
    s2 = L2 // N2 if spread else 1
    return [np.outer(np.roll(c, a * s1), np.roll(r, b * s2)) for b in range(N2) for a in range(N1)]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--bits", type=int, default=2 * 10**5)
    ap.add_argument("--ebn0", type=float, default=8.0)
    args = ap.parse_args()
    for L1, L2, N in ((4, 33, 4), (4, 21, 8)):
        schemes = {}
        for N1 in (1, 2, 4, 8):
            if N % N1 or N1 > L1 or N // N1 > L2:
                continue
            for spread in (False, True):
                schemes[f"{N1}x{N // N1}{'-spread' if spread else ''}"] = kron_variant(L1, L2, N1, N // N1, spread)
        schemes["random"] = random_precoders(L1, L2, N, 0)
        geom = UraGeometry(L1, L2)
        res = simulate_ber(SimConfig(geom, schemes, [args.ebn0], max_bits=args.bits, max_errors=10**9))
        for name, pre in schemes.items():
            ratio, cv = flatness(pattern_grid(pre, geom))
            print(f"{L1}x{L2} N={N} {name:12s} max/min={ratio:10.4g} std/mean={cv:.3f} "
                  f"BER@{args.ebn0}dB={res[name].ber[0]:.3e}")


if __name__ == "__main__":
    main()
