"""Command-line front end: check, gen, mutate, and reduce subcommands.

Transcript files carry one operation per line (``I 5``, ``E 7 3``, ``IH 2``,
...); Dyck input uses the characters ``()[]``.  ``#`` begins a comment line,
and an optional first line ``# N=<len> U=<max>`` declares the length and the
value universe.  Exit codes: 0 accept, 1 reject, 2 format/usage error,
3 oracle disagreement (a found bug).
"""
from __future__ import annotations

import argparse
import dataclasses
import json
import math
import sys
from dataclasses import dataclass
from typing import Optional, Sequence

from . import checkers, genmut, oracle, pqcheck, reduction
from .errors import TranscheckError
from .transcript import (
    Header,
    Operation,
    TranscriptStream,
    infer_universe,
    parse_transcript_text,
    render_transcript,
)
from .verdict import CheckResult

EXIT_ACCEPT = 0
EXIT_REJECT = 1
EXIT_USAGE = 2
EXIT_DISAGREE = 3

_BLOCK_LANGUAGES = {"pq", "stack", "deque", "dyck2"}


@dataclass
class CheckReport:
    """JSON-serializable outcome of one check run."""

    verdict: str
    reject_reason: Optional[str]
    n: int
    language: str
    mode: str
    peak_state_cells: int
    block_length: int
    fp_error_bound: float
    seed: int

    def to_json(self) -> str:
        return json.dumps(dataclasses.asdict(self))

    def one_line(self) -> str:
        extra = "" if self.reject_reason is None else f" reason={self.reject_reason!r}"
        return (
            f"{self.verdict} language={self.language} n={self.n} mode={self.mode}"
            f" block_length={self.block_length} peak_state_cells={self.peak_state_cells}"
            f" fp_error_bound={self.fp_error_bound:.3g} seed={self.seed}{extra}"
        )


def dispatch_check(
    ops: Sequence[Operation],
    language: str,
    mode: str = "fp",
    block_length: Optional[int] = None,
    seed: int = 0,
    universe: Optional[int] = None,
) -> CheckResult:
    """Run the checker for ``language`` over an in-memory transcript."""
    n = len(ops)
    if universe is None:
        universe = infer_universe(ops)
    stream = TranscriptStream(iter(ops), universe=universe, declared_length=n)
    if language == "pq":
        return pqcheck.pq_pipeline(stream, block_length, mode=mode, seed=seed)
    if language == "stack":
        return checkers.stack_check(stream, block_length, mode=mode, seed=seed)
    if language == "queue":
        return checkers.queue_check(stream, mode=mode, seed=seed)
    if language == "deque":
        return checkers.deque_check(stream, block_length, mode=mode, seed=seed)
    if language == "dyck2":
        return checkers.dyck_check(stream, block_length, mode=mode, seed=seed)
    if language in ("queue_ts", "stack_ts", "deque_ts"):
        return checkers.ts_check(stream, language.split("_")[0], mode=mode, seed=seed)
    raise TranscheckError(f"unknown language {language!r}")


def _read_input(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _write_output(path: Optional[str], text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _cmd_check(args: argparse.Namespace) -> int:
    text = _read_input(args.file)
    header, ops = parse_transcript_text(text)
    n = len(ops)
    if header is not None and header.length != n:
        print(
            f"error: header declares N={header.length} but file has {n} operations",
            file=sys.stderr,
        )
        return EXIT_USAGE
    universe = header.universe if header is not None else infer_universe(ops)
    block_length = args.block_size
    if block_length is None:
        if args.file == "-" and header is None and args.lang in _BLOCK_LANGUAGES:
            print(
                "error: standard input without a header needs --block-size",
                file=sys.stderr,
            )
            return EXIT_USAGE
        block_length = max(1, math.isqrt(max(n - 1, 0)) + 1)
    result = dispatch_check(
        ops, args.lang, mode=args.mode, block_length=block_length,
        seed=args.seed, universe=universe,
    )
    reason = result.reason
    if reason is not None and result.position is not None:
        reason = f"{reason} (at position {result.position})"
    report = CheckReport(
        verdict="accept" if result.ok else "reject",
        reject_reason=reason,
        n=n,
        language=args.lang,
        mode=args.mode,
        peak_state_cells=result.peak_cells,
        block_length=block_length,
        fp_error_bound=result.error_bound,
        seed=args.seed,
    )
    if args.oracle:
        truth = oracle.oracle_check(ops, args.lang)
        if truth.ok != result.ok:
            print(
                f"oracle disagreement: checker={report.verdict} "
                f"oracle={'accept' if truth.ok else 'reject'}",
                file=sys.stderr,
            )
            print(report.to_json() if args.json else report.one_line())
            return EXIT_DISAGREE
    print(report.to_json() if args.json else report.one_line())
    return EXIT_ACCEPT if result.ok else EXIT_REJECT


def _cmd_gen(args: argparse.Namespace) -> int:
    ops = genmut.gen_valid(args.lang, args.n, args.universe, args.seed)
    header = Header(len(ops), args.universe if args.lang != "dyck2" else 2)
    _write_output(args.output, render_transcript(ops, header))
    return EXIT_ACCEPT


def _cmd_mutate(args: argparse.Namespace) -> int:
    text = _read_input(args.file)
    _, ops = parse_transcript_text(text)
    kind = genmut.MutationKind(args.kind)
    mutated = genmut.mutate(ops, kind, args.seed)
    header = Header(len(mutated), infer_universe(mutated))
    _write_output(args.output, render_transcript(mutated, header))
    return EXIT_ACCEPT


def _cmd_reduce(args: argparse.Namespace) -> int:
    if getattr(args, "from_lang") != "dyck2":
        print(f"error: unsupported reduction source {args.from_lang!r}", file=sys.stderr)
        return EXIT_USAGE
    text = _read_input(args.file)
    _, parens = parse_transcript_text(text)
    n = len(parens)
    image = list(reduction.dyck_to_pq(parens, n))
    header = Header(n, max(4 * n, 1))
    _write_output(args.output, render_transcript(image, header))
    return EXIT_ACCEPT


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="transcheck",
        description="One-pass verifiers for data-structure operation transcripts.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    langs = list(oracle.LANGUAGES)

    p_check = sub.add_parser("check", help="verify a transcript file or - for stdin")
    p_check.add_argument("file", help="transcript file, or - for standard input")
    p_check.add_argument("--lang", required=True, choices=langs)
    p_check.add_argument("--mode", choices=("exact", "fp"), default="fp")
    p_check.add_argument("--block-size", type=int, default=None)
    p_check.add_argument("--seed", type=int, default=0)
    p_check.add_argument("--json", action="store_true")
    p_check.add_argument(
        "--oracle", action="store_true",
        help="cross-check against the simulating oracle; disagreement exits 3",
    )
    p_check.set_defaults(func=_cmd_check)

    p_gen = sub.add_parser("gen", help="emit a valid transcript")
    p_gen.add_argument("--lang", required=True, choices=langs)
    p_gen.add_argument("--n", type=int, required=True)
    p_gen.add_argument("--universe", "-U", type=int, default=8)
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--output", "-o", default=None)
    p_gen.set_defaults(func=_cmd_gen)

    p_mut = sub.add_parser("mutate", help="apply one seeded edit to a transcript")
    p_mut.add_argument("file", help="transcript file, or - for standard input")
    p_mut.add_argument(
        "--kind", required=True, choices=[k.value for k in genmut.MutationKind]
    )
    p_mut.add_argument("--seed", type=int, default=0)
    p_mut.add_argument("--output", "-o", default=None)
    p_mut.set_defaults(func=_cmd_mutate)

    p_red = sub.add_parser("reduce", help="transform a Dyck file into a pq transcript")
    p_red.add_argument("file", help="parenthesis file, or - for standard input")
    p_red.add_argument("--from", dest="from_lang", default="dyck2")
    p_red.add_argument("--output", "-o", default=None)
    p_red.set_defaults(func=_cmd_reduce)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except TranscheckError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
