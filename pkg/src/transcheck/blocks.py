"""Local-consistency scan of insert/extract blocks and their canonical form.

A block is *locally consistent* when no extract names a value larger than
some still-pending in-block insert, and no extract names a value below an
earlier in-block extract that nothing re-inserted.  Either violation proves
the whole surrounding transcript invalid for a priority queue, whatever
comes before or after the block.

A consistent block is summarized by its canonical form: the unmatched
extracts in ascending order, at most one insert/extract pair at the largest
value matched inside the block, then the unmatched inserts in ascending
order.  Splicing the canonical form in place of the original block preserves
priority-queue membership of the whole transcript.
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Iterable, Optional, Union

from .errors import KindError
from .transcript import Kind, Operation, ext, ins

_GUARD = float("inf")  # sentinel kept in the pending-insert heap, never emitted


@dataclass(frozen=True)
class CanonicalBlock:
    """Canonical rewrite of a locally consistent block."""

    extracts: tuple[int, ...]  # unmatched extracts, ascending
    matched_max: Optional[int]  # largest value both inserted and extracted here
    inserts: tuple[int, ...]  # unmatched inserts, ascending

    def operations(self) -> list[Operation]:
        ops = [ext(v) for v in self.extracts]
        if self.matched_max is not None:
            ops.append(ins(self.matched_max))
            ops.append(ext(self.matched_max))
        ops.extend(ins(u) for u in self.inserts)
        return ops


@dataclass(frozen=True)
class BlockViolation:
    """Certificate of local inconsistency at a 1-based position in the block."""

    position: int
    reason: str


ScanOutcome = Union[CanonicalBlock, BlockViolation]


class BlockScanner:
    """Streaming scanner; O(log n) per operation, O(n) live state."""

    __slots__ = ("_pending", "_extracts", "_floor", "_matched", "_count")

    def __init__(self):
        self._pending: list = [_GUARD]  # min-heap of in-block unextracted inserts
        self._extracts: list[int] = []  # unmatched extract values, ascending
        self._floor = 0  # most recent unmatched extract
        self._matched = 0  # largest matched insert/extract value so far
        self._count = 0

    def push(self, op: Operation) -> Optional[BlockViolation]:
        """Consume one operation; a violation report means scanning is over."""
        self._count += 1
        if op.kind == Kind.INS:
            heapq.heappush(self._pending, op.value)
            return None
        if op.kind != Kind.EXT:
            raise KindError(f"block scan expects ins/ext operations, got {op.kind.name}")
        v = op.value
        m = self._pending[0]
        if v > m:
            return BlockViolation(
                self._count, f"extract of {v} while smaller insert {m} is still pending"
            )
        if v == m:
            heapq.heappop(self._pending)
            if v > self._matched:
                self._matched = v
            return None
        limit = self._floor if self._floor > self._matched else self._matched
        if v < limit:
            return BlockViolation(
                self._count, f"extract of {v} below earlier extract level {limit}"
            )
        self._floor = v
        self._extracts.append(v)
        return None

    def live_size(self) -> int:
        """Number of values held, for space instrumentation."""
        return len(self._pending) - 1 + len(self._extracts)

    def finish(self) -> CanonicalBlock:
        inserts = sorted(x for x in self._pending if x is not _GUARD)
        matched = self._matched if self._matched > 0 else None
        return CanonicalBlock(tuple(self._extracts), matched, tuple(inserts))


def scan_block(block: Iterable[Operation]) -> ScanOutcome:
    """Scan a whole block; returns its canonical form or the first violation."""
    scanner = BlockScanner()
    for op in block:
        bad = scanner.push(op)
        if bad is not None:
            return bad
    return scanner.finish()
