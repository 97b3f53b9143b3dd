"""Eb/N0 needed by each precoding scheme to reach a target BER, and the gaps to GCAS.

    python3 scripts/ber_gains.py --bits 1000000 --target 1e-4 --out gains.json
"""
import argparse
import json

import numpy as np

from gcas.baselines import random_precoders, zc_precoders
from gcas.constructions import th1_construct, th2_construct
from gcas.mimo import UraGeometry
from gcas.stbc import SimConfig, simulate_ber, snr_at_ber
from gcas.tables import PARAMS_4X4X33, PARAMS_8X4X21

SETUPS = {"4x33": (th1_construct(PARAMS_4X4X33), 4), "4x21": (th2_construct(PARAMS_8X4X21), 8)}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--setup", choices=sorted(SETUPS), action="append")
    ap.add_argument("--bits", type=int, default=10**6)
    ap.add_argument("--ebn0", default="6,7,8,9,10,11,12,13,14")
    ap.add_argument("--target", type=float, default=1e-4)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--threads", type=int, default=1)
    ap.add_argument("--out")
    args = ap.parse_args()
    ebn0 = [float(x) for x in args.ebn0.split(",")]
    result = {}
    for setup in args.setup or sorted(SETUPS):
        out, N = SETUPS[setup]
        L1, L2 = out.L1, out.L2
        schemes = {"gcas": out.unimodular(), "zc": zc_precoders(L1, L2, N),
                   "random": random_precoders(L1, L2, N, args.seed)}
        cfg = SimConfig(UraGeometry(L1, L2), schemes, ebn0, max_bits=args.bits, max_errors=10**9,
                        seed=args.seed, threads=args.threads)
        curves = simulate_ber(cfg)
        at = {k: snr_at_ber(ebn0, c.ber, args.target) for k, c in curves.items()}
        result[setup] = {
            "ebn0_at_target": at,
            "gain_over_zc_db": at["zc"] - at["gcas"],
            "gain_over_random_db": at["random"] - at["gcas"],
            "ber": {k: c.ber for k, c in curves.items()},
            "bits": {k: c.bits for k, c in curves.items()},
        }
        print(setup, json.dumps({k: v for k, v in result[setup].items() if k != "ber" and k != "bits"}))
    result["config"] = {"bits": args.bits, "ebn0": ebn0, "target": args.target, "seed": args.seed}
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(result, fh, indent=2, default=lambda x: None if np.isnan(x) else x)


if __name__ == "__main__":
    main()
