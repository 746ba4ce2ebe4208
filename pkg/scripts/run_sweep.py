"""Verify every grid point T <= t_max and print one line per point."""

from __future__ import annotations

import argparse
import time

from streamcode.construction import build_code, grid_params
from streamcode.verify import check_recovery_exhaustive, verify_point


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--t-max", type=int, default=9)
    ap.add_argument("--tight", action="store_true", help="also check that delay T-1 fails")
    args = ap.parse_args()

    start = time.perf_counter()
    failed = tight_ok = 0
    points = grid_params(args.t_max)
    for p in points:
        rep = verify_point(p)
        status = "PASS" if rep.passed else "FAIL"
        failed += not rep.passed
        line = f"T={p.T} B={p.B} N={p.N} n={p.n} p={p.p} patterns={rep.recovery.patterns} {status}"
        if args.tight:
            tight = check_recovery_exhaustive(build_code(p), delay=p.T - 1, structured=False, stop_after=1)
            tight_ok += not tight.passed
            line += f" delay{p.T - 1}={'fails' if not tight.passed else 'holds'}"
        print(line)
        if not rep.passed:
            print(rep.format())
    summary = f"points={len(points)} failed={failed}"
    if args.tight:
        summary += f" tight={tight_ok}/{len(points)}"
    print(f"{summary} elapsed={time.perf_counter() - start:.1f}s")


if __name__ == "__main__":
    main()
