"""Command-line front end.

Exit codes: 0 success, 1 a check or simulation reported failures, 2 bad
parameters, 3 malformed input file (with byte offset), 4 guard exceeded.
"""

from __future__ import annotations

import argparse
import io
import json
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .bytepack import pack_bytes, unpack_bytes
from .channel import SlidingWindowSpec, sample_sequence
from .construction import CodeParams, ParameterError, build_code, capacity, derive_params, rate
from .decoder import ERASED, decode_block
from .linalg import GuardExceeded, matrix_to_dict
from .streaming import (
    Packet,
    StreamDecoder,
    StreamEncoder,
    TraceFormatError,
    TraceHeader,
    read_trace,
    simulate,
    write_trace,
)
from .verify import sweep, verify_point

EXIT_FAIL, EXIT_PARAMS, EXIT_FORMAT, EXIT_GUARD = 1, 2, 3, 4


class InputFormatError(ValueError):
    def __init__(self, offset: int, reason: str):
        super().__init__(f"malformed input at byte {offset}: {reason}")
        self.offset = offset


@dataclass(frozen=True)
class RunConfig:
    command: str
    params: CodeParams | None
    seed: int
    loss_seed: int | None
    length: int
    loss_mix: float
    loss_rate: float
    grid: int | None
    inp: Path | None
    out: Path | None
    as_bytes: bool


def _params_from(args: argparse.Namespace) -> CodeParams | None:
    pos = list(getattr(args, "tbn", None) or [])
    if len(pos) not in (0, 3):
        raise ParameterError("give T B N as three positional integers or via --T --B --N")
    T = pos[0] if pos else args.T
    B = pos[1] if pos else args.B
    N = pos[2] if pos else args.N
    if T is None and B is None and N is None:
        return None
    if None in (T, B, N):
        raise ParameterError("T, B and N are all required")
    return derive_params(T, B, N, args.W)


def make_config(args: argparse.Namespace) -> RunConfig:
    params = _params_from(args)
    if args.command in ("verify", "sweep"):
        needs_params = getattr(args, "grid", None) is None
    elif args.command == "decode":
        needs_params = args.block
    else:
        needs_params = True
    if params is None and needs_params:
        raise ParameterError(f"{args.command} needs T, B and N")
    if getattr(args, "len", 1) < 1:
        raise ParameterError("--len must be positive")
    for name in ("loss_mix", "loss_rate"):
        v = getattr(args, name, 0.0)
        if not 0.0 <= v <= 1.0:
            raise ParameterError(f"--{name.replace('_', '-')} must lie in [0, 1]")
    return RunConfig(
        command=args.command,
        params=params,
        seed=args.seed,
        loss_seed=getattr(args, "loss_seed", None),
        length=getattr(args, "len", 0),
        loss_mix=getattr(args, "loss_mix", 0.5),
        loss_rate=getattr(args, "loss_rate", 0.0),
        grid=getattr(args, "grid", None),
        inp=Path(args.inp) if getattr(args, "inp", None) else None,
        out=Path(args.out) if getattr(args, "out", None) else None,
        as_bytes=getattr(args, "bytes", False),
    )


# -- text I/O ------------------------------------------------------------------------


def parse_messages(text: bytes, field, k: int) -> list[tuple[int, ...]]:
    """k "a+b*w" tokens per line; blank lines and '#' comments skipped."""
    rows = []
    off = 0
    for raw in text.split(b"\n"):
        line = raw.split(b"#", 1)[0]
        if line.strip():
            toks, pos = [], 0
            for tok in line.split():
                pos = line.index(tok, pos)
                try:
                    toks.append(field.parse(tok.decode("ascii")))
                except (ValueError, UnicodeDecodeError) as exc:
                    raise InputFormatError(off + pos, str(exc)) from None
                pos += len(tok)
            if len(toks) != k:
                raise InputFormatError(off, f"expected {k} symbols per line, found {len(toks)}")
            rows.append(tuple(toks))
        off += len(raw) + 1
    return rows


def format_messages(rows, field) -> str:
    return "".join(" ".join("?" if x is None else field.format(x) for x in r) + "\n" for r in rows)


def parse_block(text: bytes, field, n: int) -> list[int | None]:
    out: list[int | None] = []
    pos = 0
    for tok in text.split():
        pos = text.index(tok, pos)
        if tok == b"?":
            out.append(ERASED)
        else:
            try:
                out.append(field.parse(tok.decode("ascii")))
            except (ValueError, UnicodeDecodeError) as exc:
                raise InputFormatError(pos, str(exc)) from None
        pos += len(tok)
    if len(out) != n:
        raise InputFormatError(len(text), f"expected {n} symbols, found {len(out)}")
    return out


def _emit(cfg: RunConfig, data: bytes | str) -> None:
    if isinstance(data, str):
        data = data.encode()
    if cfg.out is None:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
    else:
        cfg.out.write_bytes(data)


def _read(cfg: RunConfig) -> bytes:
    return sys.stdin.buffer.read() if cfg.inp is None else cfg.inp.read_bytes()


# -- subcommands ---------------------------------------------------------------------


def cmd_params(cfg: RunConfig) -> int:
    p = cfg.params
    print(f"n={p.n} k={p.k} p={p.p} rate={rate(p)} capacity={capacity(p)}")
    return 0


def cmd_gen(cfg: RunConfig) -> int:
    t = build_code(cfg.params)
    p, f = t.params, t.field
    doc = {
        "T": p.T, "B": p.B, "N": p.N, "W": p.W, "n": p.n, "k": p.k,
        "p": f.p, "r": f.r, "alpha": str(t.alpha),
        "matrices": {name: matrix_to_dict(m) for name, m in t.matrices().items()},
    }
    _emit(cfg, json.dumps(doc, indent=1) + "\n")
    return 0


def _loss_sequence(cfg: RunConfig, length: int) -> list[int]:
    if cfg.loss_seed is None or cfg.loss_rate == 0.0:
        return [0] * length
    spec = SlidingWindowSpec.for_params(cfg.params)
    return sample_sequence(spec, max(length, spec.W), cfg.loss_seed,
                           event_rate=cfg.loss_rate, burst_mix=cfg.loss_mix)[:length]


def cmd_encode(cfg: RunConfig) -> int:
    t = build_code(cfg.params)
    p, f = t.params, t.field
    data = _read(cfg)
    rows = pack_bytes(data, f.p, p.k) if cfg.as_bytes else parse_messages(data, f, p.k)
    total = len(rows) + p.n - 1
    losses = _loss_sequence(cfg, total)
    enc = StreamEncoder(t)
    zero = (0,) * p.k
    packets = []
    for i in range(total):
        pkt = enc.encode_step(rows[i] if i < len(rows) else zero)
        packets.append(Packet(pkt.seq, None) if losses[i] else pkt)
    buf = io.BytesIO()
    write_trace(buf, TraceHeader.for_tables(t), packets)
    _emit(cfg, buf.getvalue())
    print(f"messages={len(rows)} packets={total} erased={sum(losses)}", file=sys.stderr)
    return 0


def cmd_decode(cfg: RunConfig) -> int:
    data = _read(cfg)
    header, packets = read_trace(data)
    params = header.params()
    t = build_code(params)
    f = t.field
    L = len(packets) - (params.n - 1)
    if L < 0:
        raise TraceFormatError(len(data), f"{len(packets)} packets cannot hold a message stream (need >= {params.n - 1})")
    dec = StreamDecoder(t)
    rows: list = [None] * L
    delays: list = [None] * L
    for pkt in packets:
        for i, s, delay in dec.decode_step(pkt):
            if i < L:
                rows[i], delays[i] = s, delay
    missed = sum(1 for d in delays if d is None)
    report = "".join(f"# message {i} delay {'MISSED' if d is None else d}\n" for i, d in enumerate(delays))
    if cfg.as_bytes:
        if missed:
            print(f"messages={L} missed_deadlines={missed}: cannot rebuild the byte stream", file=sys.stderr)
            return EXIT_FAIL
        try:
            _emit(cfg, unpack_bytes(rows, f.p))
        except ValueError as exc:
            raise InputFormatError(len(data), str(exc)) from None
    else:
        _emit(cfg, format_messages(rows, f))
    sys.stderr.write(report)
    print(f"messages={L} missed_deadlines={missed} max_delay={max((d for d in delays if d is not None), default=0)}",
          file=sys.stderr)
    for w in dec.warnings:
        print(f"warning: {w}", file=sys.stderr)
    return EXIT_FAIL if missed else 0


def cmd_decode_block(cfg: RunConfig) -> int:
    t = build_code(cfg.params)
    received = parse_block(_read(cfg), t.field, cfg.params.n)
    rep = decode_block(t, received, on_warning=lambda m: None)
    _emit(cfg, rep.format(t.field))
    return 0 if rep.complete else EXIT_FAIL


def cmd_simulate(cfg: RunConfig) -> int:
    p = cfg.params
    res = simulate(p, cfg.length, cfg.seed, loss_seed=cfg.loss_seed,
                   event_rate=cfg.loss_rate, loss_mix=cfg.loss_mix)
    _emit(cfg, f"T={p.T} B={p.B} N={p.N} W={p.W} seed={cfg.seed} {res.summary()}\n")
    return 0 if res.missed_deadlines == 0 and res.wrong_symbols == 0 else EXIT_FAIL


def cmd_verify(cfg: RunConfig, recovery: bool) -> int:
    if cfg.grid is not None:
        reps = sweep(cfg.grid, recovery=recovery)
    else:
        reps = [verify_point(cfg.params, recovery=recovery)]
    text = "\n".join(r.format() for r in reps)
    bad = [r for r in reps if not r.passed]
    text += f"\nsummary: points={len(reps)} failed={len(bad)}\n"
    _emit(cfg, text)
    return EXIT_FAIL if bad else 0


def cmd_sweep(cfg: RunConfig) -> int:
    reps = sweep(cfg.grid if cfg.grid is not None else 7)
    lines = []
    for r in reps:
        p = r.params
        rec = r.recovery
        lines.append(f"T={p.T} B={p.B} N={p.N} n={p.n} k={p.k} p={p.p} rate={rate(p)} "
                     f"patterns={rec.patterns} {'PASS' if r.passed else 'FAIL'}")
    bad = sum(1 for r in reps if not r.passed)
    lines.append(f"summary: points={len(reps)} failed={bad}")
    _emit(cfg, "\n".join(lines) + "\n")
    return EXIT_FAIL if bad else 0


# -- parser --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("tbn", nargs="*", type=int, metavar="T B N", help="delay, burst and arbitrary-erasure bounds")
    common.add_argument("--T", type=int, help="decoding delay")
    common.add_argument("--B", type=int, help="maximum burst length")
    common.add_argument("--N", type=int, help="maximum number of arbitrary erasures")
    common.add_argument("--W", type=int, help="window length (default T+1)")
    common.add_argument("--seed", type=int, default=1, help="message RNG seed")
    common.add_argument("--out", help="output file (default stdout)")

    ap = argparse.ArgumentParser(prog="streamcode", description="Rate-optimal streaming codes for burst and arbitrary erasures.")
    sub = ap.add_subparsers(dest="command", required=True)
    sub.add_parser("params", parents=[common], help="print n, k, p, rate and capacity")
    sub.add_parser("gen", parents=[common], help="dump the generator family as JSON")

    enc = sub.add_parser("encode", parents=[common], help="encode a message file into a packet trace")
    enc.add_argument("--in", dest="inp", help="message file (default stdin)")
    enc.add_argument("--bytes", action="store_true", help="input is raw bytes; pack into base-field symbols")
    enc.add_argument("--loss-seed", type=int, help="erase packets with a sampled admissible pattern")
    enc.add_argument("--loss-rate", type=float, default=0.05, help="loss event probability per free slot")
    enc.add_argument("--loss-mix", type=float, default=0.5, help="probability a loss event is a burst")

    dec = sub.add_parser("decode", parents=[common], help="decode a packet trace (or a single block with --block)")
    dec.add_argument("--in", dest="inp", help="trace or block file (default stdin)")
    dec.add_argument("--bytes", action="store_true", help="unpack decoded symbols back into bytes")
    dec.add_argument("--block", action="store_true", help="input is n symbols with '?' for erasures; needs T B N")

    sim = sub.add_parser("simulate", parents=[common], help="stream random messages through sampled losses")
    sim.add_argument("--len", type=int, default=10_000, help="number of messages")
    sim.add_argument("--loss-seed", type=int, help="channel RNG seed (default: --seed)")
    sim.add_argument("--loss-rate", type=float, default=0.05, help="loss event probability per free slot")
    sim.add_argument("--loss-mix", type=float, default=0.5, help="probability a loss event is a burst")

    ver = sub.add_parser("verify", parents=[common], help="run the parity-check, property and recovery checks")
    ver.add_argument("--grid", type=int, help="check every T <= GRID, T >= B >= N >= 1")
    ver.add_argument("--no-recovery", action="store_true", help="skip exhaustive block recovery")

    sw = sub.add_parser("sweep", parents=[common], help="one summary line per grid point")
    sw.add_argument("--grid", type=int, default=7, help="largest T (default 7)")
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        cfg = make_config(args)
        if args.command == "params":
            return cmd_params(cfg)
        if args.command == "gen":
            return cmd_gen(cfg)
        if args.command == "encode":
            return cmd_encode(cfg)
        if args.command == "decode":
            return cmd_decode_block(cfg) if args.block else cmd_decode(cfg)
        if args.command == "simulate":
            return cmd_simulate(cfg)
        if args.command == "verify":
            return cmd_verify(cfg, recovery=not args.no_recovery)
        if args.command == "sweep":
            return cmd_sweep(cfg)
    except ParameterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARAMS
    except (TraceFormatError, InputFormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FORMAT
    except GuardExceeded as exc:
        print(f"error: guard exceeded: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FORMAT
    ap.error(f"unknown command {args.command}")
    return EXIT_PARAMS


if __name__ == "__main__":
    sys.exit(main())
