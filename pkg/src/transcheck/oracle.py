"""Ground-truth checkers that simulate the real data structures.

These run in linear space straight from the definitions and anchor every
differential test in the suite.  ``canonical_block_by_rewriting`` is the
naive counterpart of the streaming block scanner: it reaches the canonical
form by local rearrangements instead of a single scan, so the two can be
compared on every consistent block.
"""
from __future__ import annotations

import heapq
from collections import deque
from typing import Iterable, Sequence

from .blocks import CanonicalBlock
from .errors import KindError
from .transcript import Kind, MATCHING_OPEN, Operation
from .verdict import ACCEPT, Verdict, reject

PQ = "pq"
STACK = "stack"
QUEUE = "queue"
DEQUE = "deque"
DYCK2 = "dyck2"
QUEUE_TS = "queue_ts"
STACK_TS = "stack_ts"
DEQUE_TS = "deque_ts"

LANGUAGES = (PQ, STACK, QUEUE, DEQUE, DYCK2, QUEUE_TS, STACK_TS, DEQUE_TS)


def _check_pq(ops) -> Verdict:
    heap: list[int] = []
    for pos, op in enumerate(ops, start=1):
        if op.kind == Kind.INS:
            heapq.heappush(heap, op.value)
        elif op.kind == Kind.EXT:
            if not heap:
                return reject("extract from empty priority queue", pos)
            if heap[0] != op.value:
                return reject(
                    f"extracted {op.value} but minimum is {heap[0]}", pos
                )
            heapq.heappop(heap)
        else:
            raise KindError(f"pq transcripts use ins/ext only, got {op.kind.name}")
    if heap:
        return reject("priority queue not empty at end")
    return ACCEPT


def _check_stack(ops) -> Verdict:
    stack: list[int] = []
    for pos, op in enumerate(ops, start=1):
        if op.kind == Kind.INS:
            stack.append(op.value)
        elif op.kind == Kind.EXT:
            if not stack:
                return reject("extract from empty stack", pos)
            if stack[-1] != op.value:
                return reject(f"extracted {op.value} but top is {stack[-1]}", pos)
            stack.pop()
        else:
            raise KindError(f"stack transcripts use ins/ext only, got {op.kind.name}")
    if stack:
        return reject("stack not empty at end")
    return ACCEPT


def _check_queue(ops) -> Verdict:
    q: deque[int] = deque()
    for pos, op in enumerate(ops, start=1):
        if op.kind == Kind.INS:
            q.append(op.value)
        elif op.kind == Kind.EXT:
            if not q:
                return reject("extract from empty queue", pos)
            if q[0] != op.value:
                return reject(f"extracted {op.value} but front is {q[0]}", pos)
            q.popleft()
        else:
            raise KindError(f"queue transcripts use ins/ext only, got {op.kind.name}")
    if q:
        return reject("queue not empty at end")
    return ACCEPT


def _check_deque(ops) -> Verdict:
    d: deque[int] = deque()
    for pos, op in enumerate(ops, start=1):
        kind = op.kind
        if kind == Kind.INS_HEAD:
            d.appendleft(op.value)
        elif kind == Kind.INS_TAIL:
            d.append(op.value)
        elif kind == Kind.EXT_HEAD:
            if not d:
                return reject("extract from empty deque", pos)
            if d[0] != op.value:
                return reject(f"extracted {op.value} but head is {d[0]}", pos)
            d.popleft()
        elif kind == Kind.EXT_TAIL:
            if not d:
                return reject("extract from empty deque", pos)
            if d[-1] != op.value:
                return reject(f"extracted {op.value} but tail is {d[-1]}", pos)
            d.pop()
        else:
            raise KindError(f"deque transcripts use end-tagged ins/ext, got {kind.name}")
    if d:
        return reject("deque not empty at end")
    return ACCEPT


def _check_dyck(ops) -> Verdict:
    stack: list[str] = []
    for pos, op in enumerate(ops, start=1):
        if op.kind == Kind.OPEN:
            stack.append(op.paren)
        elif op.kind == Kind.CLOSE:
            if not stack:
                return reject("close without matching open", pos)
            if stack[-1] != MATCHING_OPEN[op.paren]:
                return reject(f"mismatched parenthesis {op.paren!r}", pos)
            stack.pop()
        else:
            raise KindError(f"dyck transcripts use parentheses only, got {op.kind.name}")
    if stack:
        return reject("unclosed parentheses at end")
    return ACCEPT


# Timestamped variants: the stamp on each extract must equal the stream
# position where the item actually being extracted was inserted.  Stamps
# therefore identify physical items, which is what makes small-space
# verification possible at all.

def _check_queue_ts(ops) -> Verdict:
    q: deque[tuple[int, int]] = deque()
    for pos, op in enumerate(ops, start=1):
        if op.kind == Kind.INS:
            q.append((op.value, pos))
        elif op.kind == Kind.EXT_TS:
            if not q:
                return reject("extract from empty queue", pos)
            if q[0] != (op.value, op.timestamp):
                return reject(
                    f"claimed ({op.value}, t={op.timestamp}) but front is {q[0]}", pos
                )
            q.popleft()
        else:
            raise KindError(
                f"queue_ts transcripts use ins and stamped ext, got {op.kind.name}"
            )
    if q:
        return reject("queue not empty at end")
    return ACCEPT


def _check_stack_ts(ops) -> Verdict:
    stack: list[tuple[int, int]] = []
    for pos, op in enumerate(ops, start=1):
        if op.kind == Kind.INS:
            stack.append((op.value, pos))
        elif op.kind == Kind.EXT_TS:
            if not stack:
                return reject("extract from empty stack", pos)
            if stack[-1] != (op.value, op.timestamp):
                return reject(
                    f"claimed ({op.value}, t={op.timestamp}) but top is {stack[-1]}", pos
                )
            stack.pop()
        else:
            raise KindError(
                f"stack_ts transcripts use ins and stamped ext, got {op.kind.name}"
            )
    if stack:
        return reject("stack not empty at end")
    return ACCEPT


def _check_deque_ts(ops) -> Verdict:
    d: deque[tuple[int, int]] = deque()
    for pos, op in enumerate(ops, start=1):
        kind = op.kind
        if kind == Kind.INS_HEAD:
            d.appendleft((op.value, pos))
        elif kind == Kind.INS_TAIL:
            d.append((op.value, pos))
        elif kind in (Kind.EXT_TS_HEAD, Kind.EXT_TS_TAIL):
            if not d:
                return reject("extract from empty deque", pos)
            got = d[0] if kind == Kind.EXT_TS_HEAD else d[-1]
            if got != (op.value, op.timestamp):
                return reject(
                    f"claimed ({op.value}, t={op.timestamp}) but end holds {got}", pos
                )
            if kind == Kind.EXT_TS_HEAD:
                d.popleft()
            else:
                d.pop()
        else:
            raise KindError(
                f"deque_ts transcripts use end-tagged ins and stamped ext, got {kind.name}"
            )
    if d:
        return reject("deque not empty at end")
    return ACCEPT


_CHECKERS = {
    PQ: _check_pq,
    STACK: _check_stack,
    QUEUE: _check_queue,
    DEQUE: _check_deque,
    DYCK2: _check_dyck,
    QUEUE_TS: _check_queue_ts,
    STACK_TS: _check_stack_ts,
    DEQUE_TS: _check_deque_ts,
}


def oracle_check(ops: Iterable[Operation], language: str) -> Verdict:
    """Exact membership verdict by simulating the data structure."""
    try:
        checker = _CHECKERS[language]
    except KeyError:
        raise KindError(f"unknown language {language!r}") from None
    return checker(ops)


def potential(ops: Sequence[Operation]) -> int:
    """Sum of 1-based positions of extract operations; each rearrangement
    step below lowers it by exactly one, which bounds the rewrite count."""
    return sum(i for i, op in enumerate(ops, start=1) if op.kind == Kind.EXT)


def _rule_at(ops: list[Operation], p: int) -> bool:
    """Apply the leftmost-applicable rearrangement at position p, if any.

    The three rules, each moving one extract a single step left:
      swap:  ins(u) ext(v)        -> ext(v) ins(u)         when u > v
      drain: ins(u) ext(u) ext(v) -> ext(v) ins(u) ext(u)
      lift:  ins(v) ins(u) ext(u) -> ins(u) ext(u) ins(v)
    """
    a = ops[p]
    if a.kind != Kind.INS:
        return False
    b = ops[p + 1] if p + 1 < len(ops) else None
    if b is None:
        return False
    if b.kind == Kind.EXT:
        if a.value > b.value:
            ops[p], ops[p + 1] = b, a
            return True
        if a.value == b.value and p + 2 < len(ops) and ops[p + 2].kind == Kind.EXT:
            ops[p], ops[p + 1], ops[p + 2] = ops[p + 2], a, b
            return True
        return False
    # b is an insert; look for a matched pair starting at it
    if p + 2 < len(ops):
        c = ops[p + 2]
        if c.kind == Kind.EXT and c.value == b.value:
            ops[p], ops[p + 1], ops[p + 2] = b, c, a
            return True
    return False


def canonical_block_by_rewriting(
    block: Sequence[Operation], assert_each_step: bool = False
) -> CanonicalBlock:
    """Reach the canonical block form by repeated local rearrangement.

    Rules are applied leftmost-first to a fixpoint.  After a rewrite at
    position p only positions >= p-2 can become newly applicable, so the
    scan resumes there; this keeps the order strictly leftmost-first while
    avoiding full rescans.  Callers are expected to pass locally consistent
    blocks; on other inputs the rules still apply mechanically but the final
    shape may be unparseable, which raises ValueError.
    """
    ops = list(block)
    for op in ops:
        if op.kind not in (Kind.INS, Kind.EXT):
            raise KindError(f"rewriting expects ins/ext operations, got {op.kind.name}")
    phi_before = potential(ops)
    steps = 0
    p = 0
    while p < len(ops):
        if _rule_at(ops, p):
            steps += 1
            if assert_each_step:
                assert potential(ops) == phi_before - steps, "rearrangement step must lower the potential by exactly 1"
            p = max(0, p - 2)
        else:
            p += 1
    assert potential(ops) == phi_before - steps

    # Parse the fixpoint: extracts, then matched pairs, then inserts.
    i = 0
    extracts: list[int] = []
    while i < len(ops) and ops[i].kind == Kind.EXT:
        extracts.append(ops[i].value)
        i += 1
    pairs: list[int] = []
    while (
        i + 1 < len(ops)
        and ops[i].kind == Kind.INS
        and ops[i + 1].kind == Kind.EXT
        and ops[i].value == ops[i + 1].value
    ):
        pairs.append(ops[i].value)
        i += 2
    inserts: list[int] = []
    while i < len(ops) and ops[i].kind == Kind.INS:
        inserts.append(ops[i].value)
        i += 1
    if i != len(ops) or extracts != sorted(extracts):
        raise ValueError("rewriting did not reach the canonical shape; block was not locally consistent")
    matched = max(pairs) if pairs else None
    return CanonicalBlock(tuple(extracts), matched, tuple(sorted(inserts)))
