"""Streaming transform from two-bracket Dyck strings to priority-queue
transcripts.

Each parenthesis becomes one insert or extract whose value is derived from
the nesting height at that point, relative to twice the string length: round
brackets map onto even values, square brackets onto the odd values just
below them.  Deeper nesting yields smaller values, so properly nested input
extracts minima in exactly the right order, while any crossing of bracket
types lands on a value the queue is not holding.  The transform keeps only
the running height, and a string is well-nested exactly when its image is a
valid priority-queue transcript over values [1, 4N].
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

from .errors import FormatError, KindError
from .transcript import Kind, Operation, TranscriptStream, ext, ins


@dataclass
class HeightTracker:
    """Running nesting height of the consumed prefix; all retained state."""

    h: int = 0

    def update(self, op: Operation) -> int:
        if op.kind == Kind.OPEN:
            self.h += 1
        elif op.kind == Kind.CLOSE:
            self.h -= 1
        else:
            raise KindError(f"height is defined on parentheses, got {op.kind.name}")
        return self.h


def height(prefix: Iterable[Operation]) -> int:
    """Opens minus closes of a parenthesis string."""
    tracker = HeightTracker()
    for op in prefix:
        tracker.update(op)
    return tracker.h


def dyck_to_pq(parens: Iterable[Operation], length: int) -> Iterator[Operation]:
    """Transform a parenthesis stream of known length into pq operations.

    Total on every input, balanced or not; non-members of the Dyck language
    are transformed into non-members of the pq language.  Raises FormatError
    when the stream length differs from ``length``.
    """
    double = 2 * length
    tracker = HeightTracker()
    seen = 0
    for op in parens:
        seen += 1
        if seen > length:
            raise FormatError(f"parenthesis stream longer than declared {length}")
        before = tracker.h
        after = tracker.update(op)
        ch = op.paren
        if ch == "(":
            yield ins(double - 2 * before)
        elif ch == ")":
            yield ext(double - 2 * after)
        elif ch == "[":
            yield ins(double - 2 * before - 1)
        else:  # "]"
            yield ext(double - 2 * after - 1)
    if seen != length:
        raise FormatError(f"parenthesis stream shorter than declared {length} (got {seen})")


def dyck_to_pq_stream(stream: TranscriptStream) -> TranscriptStream:
    """Stream wrapper: the image uses values in [1, 4N]."""
    n = stream.declared_length
    if n is None:
        raise FormatError("the reduction needs the stream length in advance")
    return TranscriptStream(
        dyck_to_pq(stream, n), universe=max(4 * n, 1), declared_length=n
    )
