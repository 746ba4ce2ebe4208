"""Stream random messages through sampled admissible loss patterns for several seeds."""

from __future__ import annotations

import argparse

from streamcode.construction import derive_params
from streamcode.streaming import simulate


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("T", type=int, nargs="?", default=6)
    ap.add_argument("B", type=int, nargs="?", default=4)
    ap.add_argument("N", type=int, nargs="?", default=3)
    ap.add_argument("--W", type=int)
    ap.add_argument("--len", type=int, default=10_000)
    ap.add_argument("--seeds", type=int, default=20)
    ap.add_argument("--loss-rate", type=float, default=0.05)
    args = ap.parse_args()

    params = derive_params(args.T, args.B, args.N, args.W)
    missed = 0
    for seed in range(args.seeds):
        res = simulate(params, args.len, seed, event_rate=args.loss_rate)
        missed += res.missed_deadlines + res.wrong_symbols
        print(f"seed={seed} {res.summary()}")
    print(f"{params}: total missed or wrong symbols={missed}")


if __name__ == "__main__":
    main()
