"""Build the (T,B,N) = (6,4,3) code, print its matrices and decode three erasure patterns."""

from __future__ import annotations

import argparse

from streamcode.construction import build_code, derive_params
from streamcode.decoder import apply_erasures, encode_block, structured_decode


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("T", type=int, nargs="?", default=6)
    ap.add_argument("B", type=int, nargs="?", default=4)
    ap.add_argument("N", type=int, nargs="?", default=3)
    args = ap.parse_args()

    params = derive_params(args.T, args.B, args.N)
    t = build_code(params)
    f = t.field
    print(f"{params}: n={params.n} k={params.k} field GF({f.p}^2), w^2 = {f.r}, alpha = {t.alpha}")
    for name, m in t.matrices().items():
        print(f"\n{name} ({m.rows}x{m.cols}):\n{m}")

    u = list(range(1, params.k + 1))
    cw = encode_block(t, u)
    B, N, T = params.B, params.N, params.T
    patterns = {
        "burst at 0": list(range(B)),
        "N erasures, last one at T": [0] + list(range(T - N + 2, T + 1)),
        "N erasures, column T received": [0] + list(range(T - N + 1, T)),
    }
    for label, erased in patterns.items():
        erased = sorted({e for e in erased if 0 <= e < params.n})
        rep = structured_decode(t, apply_erasures(cw, erased))
        print(f"\nerased {erased} ({label}):")
        print(rep.format(f), end="")


if __name__ == "__main__":
    main()
