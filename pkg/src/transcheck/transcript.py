"""Operation alphabet, transcript streams, and the line-based text format.

A transcript is a sequence of operations observed on a data structure:
inserts and extracts of positive integer values, optionally tagged with an
end (head/tail, for deques) or with the timestamp of the matching insert.
Parenthesis characters form the alphabet of the Dyck language over two
bracket types.
"""
from __future__ import annotations

import enum
import re
from typing import Iterable, Iterator, NamedTuple, Optional, Sequence

from .errors import FormatError

# Parse-time cap; values and timestamps must fit in 63 bits.
MAX_VALUE = (1 << 63) - 1

OPEN_CHARS = "(["
CLOSE_CHARS = ")]"
PAREN_CHARS = OPEN_CHARS + CLOSE_CHARS
MATCHING_OPEN = {")": "(", "]": "["}


class Kind(enum.IntEnum):
    INS = 0
    EXT = 1
    INS_HEAD = 2
    INS_TAIL = 3
    EXT_HEAD = 4
    EXT_TAIL = 5
    EXT_TS = 6
    EXT_TS_HEAD = 7
    EXT_TS_TAIL = 8
    OPEN = 9
    CLOSE = 10


class Operation(NamedTuple):
    """One transcript symbol.

    ``value`` is a positive integer (0 is reserved as an internal sentinel
    and never appears in a parsed transcript).  ``timestamp`` is nonzero only
    for the timestamped extract kinds; ``paren`` is nonempty only for
    OPEN/CLOSE.
    """

    kind: Kind
    value: int = 0
    timestamp: int = 0
    paren: str = ""


def ins(u: int) -> Operation:
    return Operation(Kind.INS, u)


def ext(u: int) -> Operation:
    return Operation(Kind.EXT, u)


def ins_head(u: int) -> Operation:
    return Operation(Kind.INS_HEAD, u)


def ins_tail(u: int) -> Operation:
    return Operation(Kind.INS_TAIL, u)


def ext_head(u: int) -> Operation:
    return Operation(Kind.EXT_HEAD, u)


def ext_tail(u: int) -> Operation:
    return Operation(Kind.EXT_TAIL, u)


def ext_ts(u: int, t: int) -> Operation:
    return Operation(Kind.EXT_TS, u, t)


def ext_ts_head(u: int, t: int) -> Operation:
    return Operation(Kind.EXT_TS_HEAD, u, t)


def ext_ts_tail(u: int, t: int) -> Operation:
    return Operation(Kind.EXT_TS_TAIL, u, t)


def paren(ch: str) -> Operation:
    if ch in OPEN_CHARS:
        return Operation(Kind.OPEN, paren=ch)
    if ch in CLOSE_CHARS:
        return Operation(Kind.CLOSE, paren=ch)
    raise FormatError(f"not a parenthesis character: {ch!r}")


INSERT_KINDS = frozenset({Kind.INS, Kind.INS_HEAD, Kind.INS_TAIL})
EXTRACT_KINDS = frozenset(
    {Kind.EXT, Kind.EXT_HEAD, Kind.EXT_TAIL, Kind.EXT_TS, Kind.EXT_TS_HEAD, Kind.EXT_TS_TAIL}
)

_TAG_TO_KIND = {
    "I": Kind.INS,
    "E": Kind.EXT,
    "IH": Kind.INS_HEAD,
    "IT": Kind.INS_TAIL,
    "EH": Kind.EXT_HEAD,
    "ET": Kind.EXT_TAIL,
}
_TS_TAG_TO_KIND = {"E": Kind.EXT_TS, "EH": Kind.EXT_TS_HEAD, "ET": Kind.EXT_TS_TAIL}
_KIND_TO_TAG = {v: k for k, v in _TAG_TO_KIND.items()}
_KIND_TO_TAG.update({Kind.EXT_TS: "E", Kind.EXT_TS_HEAD: "EH", Kind.EXT_TS_TAIL: "ET"})


def _parse_int(token: str, what: str, lineno: int) -> int:
    try:
        n = int(token)
    except ValueError:
        raise FormatError(f"line {lineno}: {what} {token!r} is not an integer") from None
    if n < 1:
        raise FormatError(f"line {lineno}: {what} must be positive, got {n}")
    if n > MAX_VALUE:
        raise FormatError(f"line {lineno}: {what} {n} does not fit in 63 bits")
    return n


def parse_line(text: str, lineno: int = 0) -> Operation:
    """Parse one operation line.  Whitespace between tokens is insignificant.

    Lines are ``I u``, ``E u``, ``IH u``, ``IT u``, ``EH u``, ``ET u`` or the
    timestamped forms ``E u t``, ``EH u t``, ``ET u t``.  A line consisting of
    a single parenthesis character denotes that parenthesis.
    """
    tokens = text.split()
    if not tokens:
        raise FormatError(f"line {lineno}: empty operation line")
    if len(tokens) == 1 and tokens[0] in PAREN_CHARS:
        return paren(tokens[0])
    tag = tokens[0]
    if tag not in _TAG_TO_KIND:
        raise FormatError(f"line {lineno}: unknown operation tag {tag!r}")
    if len(tokens) == 2:
        return Operation(_TAG_TO_KIND[tag], _parse_int(tokens[1], "value", lineno))
    if len(tokens) == 3:
        if tag not in _TS_TAG_TO_KIND:
            raise FormatError(f"line {lineno}: timestamp not allowed on {tag!r}")
        value = _parse_int(tokens[1], "value", lineno)
        ts = _parse_int(tokens[2], "timestamp", lineno)
        return Operation(_TS_TAG_TO_KIND[tag], value, ts)
    raise FormatError(f"line {lineno}: expected 2 or 3 tokens, got {len(tokens)}")


def serialize(op: Operation) -> str:
    """Render an operation as one text line; inverse of parse_line."""
    if op.kind in (Kind.OPEN, Kind.CLOSE):
        return op.paren
    tag = _KIND_TO_TAG[op.kind]
    if op.kind in (Kind.EXT_TS, Kind.EXT_TS_HEAD, Kind.EXT_TS_TAIL):
        return f"{tag} {op.value} {op.timestamp}"
    return f"{tag} {op.value}"


_HEADER_RE = re.compile(r"#\s*N=(\d+)\s+U=(\d+)\s*$")


class Header(NamedTuple):
    length: int
    universe: int

    def render(self) -> str:
        return f"# N={self.length} U={self.universe}"


def parse_transcript_text(text: str) -> tuple[Optional[Header], list[Operation]]:
    """Parse a whole transcript file: optional first-line header, comments,
    one operation per line.  Dyck input may also pack several parenthesis
    characters on one line."""
    header = None
    ops: list[Operation] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            if lineno == 1:
                m = _HEADER_RE.match(line)
                if m:
                    header = Header(int(m.group(1)), int(m.group(2)))
            continue
        if all(ch in PAREN_CHARS for ch in line.replace(" ", "")):
            ops.extend(paren(ch) for ch in line if ch in PAREN_CHARS)
            continue
        ops.append(parse_line(line, lineno))
    return header, ops


def render_transcript(ops: Iterable[Operation], header: Optional[Header] = None) -> str:
    lines = [] if header is None else [header.render()]
    lines.extend(serialize(op) for op in ops)
    return "\n".join(lines) + "\n"


def balance(prefix: Iterable[Operation], u: int) -> int:
    """Number of inserts of ``u`` minus number of extracts of ``u``.

    Total on insert/extract prefixes; may be negative.
    """
    total = 0
    for op in prefix:
        if op.value == u:
            if op.kind == Kind.INS:
                total += 1
            elif op.kind == Kind.EXT:
                total -= 1
    return total


def infer_universe(ops: Sequence[Operation]) -> int:
    """Largest value mentioned; parenthesis transcripts map onto two values."""
    best = 0
    for op in ops:
        if op.kind in (Kind.OPEN, Kind.CLOSE):
            best = max(best, 2)
        else:
            best = max(best, op.value)
    return max(best, 1)


class TranscriptStream:
    """Single-consumer forward pass over operations, with declared metadata.

    ``declared_length`` is optional; when present it must equal the number of
    operations produced.  ``universe`` bounds every value in the stream.
    """

    __slots__ = ("_source", "declared_length", "universe", "_consumed")

    def __init__(
        self,
        source: Iterable[Operation],
        universe: int,
        declared_length: Optional[int] = None,
    ):
        self._source = iter(source)
        self.universe = universe
        self.declared_length = declared_length
        self._consumed = False

    def __iter__(self) -> Iterator[Operation]:
        if self._consumed:
            raise RuntimeError("transcript stream already consumed (single pass only)")
        self._consumed = True
        return self._source


def stream_of(
    ops: Sequence[Operation],
    universe: Optional[int] = None,
    declared_length: Optional[int] = None,
) -> TranscriptStream:
    """Wrap an in-memory transcript, inferring metadata when not given."""
    if universe is None:
        universe = infer_universe(ops)
    if declared_length is None:
        declared_length = len(ops)
    return TranscriptStream(ops, universe, declared_length)
