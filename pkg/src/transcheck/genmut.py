"""Seeded transcript generators and mutators.

``gen_valid`` produces valid transcripts by walking the real data structure:
at each step it inserts a fresh value or extracts whatever the discipline
forces, with the insert probability shrinking as the pending pile grows, so
the walk wanders and still returns to empty exactly at the requested length.
Every generated transcript is post-validated against the oracle; the oracle
is the trust anchor, not the construction.

``mutate`` applies one small, seeded edit.  Mutants are not guaranteed
invalid; callers filter with the oracle to build rejection corpora.
"""
from __future__ import annotations

import enum
import random
from collections import deque
from typing import Optional

from .errors import ParamError
from .oracle import (
    DEQUE,
    DYCK2,
    LANGUAGES,
    PQ,
    QUEUE,
    QUEUE_TS,
    STACK,
    STACK_TS,
    oracle_check,
)
from .transcript import (
    Kind,
    Operation,
    ext,
    ext_head,
    ext_tail,
    ext_ts,
    ext_ts_head,
    ext_ts_tail,
    ins,
    ins_head,
    ins_tail,
    paren,
)

import heapq


class MutationKind(enum.Enum):
    VALUE_CHANGE = "value_change"
    SWAP_ADJACENT = "swap_adjacent"
    DROP_OP = "drop_op"
    DUPLICATE_OP = "duplicate_op"
    REORDER_EXTRACT = "reorder_extract"
    TIMESTAMP_SHIFT = "timestamp_shift"


def _want_insert(rng: random.Random, pending: int, ins_left: int) -> bool:
    if pending == 0:
        return True
    if ins_left == 0:
        return False
    return rng.random() < ins_left / (ins_left + pending)


def gen_valid(language: str, n: int, universe: int, seed: int) -> list[Operation]:
    """A length-n oracle-accepted transcript, deterministic per seed."""
    if language not in LANGUAGES:
        raise ParamError(f"unknown language {language!r}")
    if n < 0 or n % 2:
        raise ParamError(f"start/end-empty transcripts need even length, got {n}")
    if universe < 1:
        raise ParamError("universe must be at least 1")
    rng = random.Random(f"gen:{language}:{n}:{universe}:{seed}")
    ops: list[Operation] = []
    ins_left = n // 2

    if language == PQ:
        heap: list[int] = []
        while len(ops) < n:
            if _want_insert(rng, len(heap), ins_left):
                v = rng.randint(1, universe)
                heapq.heappush(heap, v)
                ops.append(ins(v))
                ins_left -= 1
            else:
                ops.append(ext(heapq.heappop(heap)))
    elif language == STACK:
        stack: list[int] = []
        while len(ops) < n:
            if _want_insert(rng, len(stack), ins_left):
                v = rng.randint(1, universe)
                stack.append(v)
                ops.append(ins(v))
                ins_left -= 1
            else:
                ops.append(ext(stack.pop()))
    elif language == QUEUE:
        q: deque[int] = deque()
        while len(ops) < n:
            if _want_insert(rng, len(q), ins_left):
                v = rng.randint(1, universe)
                q.append(v)
                ops.append(ins(v))
                ins_left -= 1
            else:
                ops.append(ext(q.popleft()))
    elif language == DEQUE:
        d: deque[int] = deque()
        while len(ops) < n:
            if _want_insert(rng, len(d), ins_left):
                v = rng.randint(1, universe)
                if rng.random() < 0.5:
                    d.appendleft(v)
                    ops.append(ins_head(v))
                else:
                    d.append(v)
                    ops.append(ins_tail(v))
                ins_left -= 1
            else:
                if rng.random() < 0.5:
                    ops.append(ext_head(d.popleft()))
                else:
                    ops.append(ext_tail(d.pop()))
    elif language == DYCK2:
        stack2: list[str] = []
        close_of = {"(": ")", "[": "]"}
        while len(ops) < n:
            if _want_insert(rng, len(stack2), ins_left):
                ch = rng.choice("([")
                stack2.append(ch)
                ops.append(paren(ch))
                ins_left -= 1
            else:
                ops.append(paren(close_of[stack2.pop()]))
    elif language == QUEUE_TS:
        qts: deque[tuple[int, int]] = deque()
        while len(ops) < n:
            if _want_insert(rng, len(qts), ins_left):
                v = rng.randint(1, universe)
                qts.append((v, len(ops) + 1))
                ops.append(ins(v))
                ins_left -= 1
            else:
                v, t = qts.popleft()
                ops.append(ext_ts(v, t))
    elif language == STACK_TS:
        sts: list[tuple[int, int]] = []
        while len(ops) < n:
            if _want_insert(rng, len(sts), ins_left):
                v = rng.randint(1, universe)
                sts.append((v, len(ops) + 1))
                ops.append(ins(v))
                ins_left -= 1
            else:
                v, t = sts.pop()
                ops.append(ext_ts(v, t))
    else:  # DEQUE_TS
        dts: deque[tuple[int, int]] = deque()
        while len(ops) < n:
            if _want_insert(rng, len(dts), ins_left):
                v = rng.randint(1, universe)
                if rng.random() < 0.5:
                    dts.appendleft((v, len(ops) + 1))
                    ops.append(ins_head(v))
                else:
                    dts.append((v, len(ops) + 1))
                    ops.append(ins_tail(v))
                ins_left -= 1
            else:
                if rng.random() < 0.5:
                    v, t = dts.popleft()
                    ops.append(ext_ts_head(v, t))
                else:
                    v, t = dts.pop()
                    ops.append(ext_ts_tail(v, t))

    verdict = oracle_check(ops, language)
    assert verdict.ok, f"generator produced an invalid transcript: {verdict.reason}"
    return ops


_EXTRACT_KINDS = (
    Kind.EXT,
    Kind.EXT_HEAD,
    Kind.EXT_TAIL,
    Kind.EXT_TS,
    Kind.EXT_TS_HEAD,
    Kind.EXT_TS_TAIL,
)

_TRIES = 64


def mutate(
    ops: list[Operation],
    kind: MutationKind,
    seed: int,
    universe: Optional[int] = None,
) -> list[Operation]:
    """One seeded edit of the given kind; the result differs from the input."""
    if not ops:
        raise ParamError("cannot mutate an empty transcript")
    if universe is None:
        universe = max((op.value for op in ops if op.value), default=1)
    rng = random.Random(f"mutate:{kind.value}:{seed}")
    out = list(ops)

    if kind is MutationKind.VALUE_CHANGE:
        candidates = [i for i, op in enumerate(ops) if op.value or op.paren]
        if not candidates:
            raise ParamError("no valued operation to change")
        i = rng.choice(candidates)
        old = out[i]
        if old.paren:
            out[i] = paren(rng.choice([c for c in "()[]" if c != old.paren]))
        else:
            choices = [v for v in range(1, max(universe, 2) + 1) if v != old.value]
            out[i] = old._replace(value=rng.choice(choices))
        return out

    if kind is MutationKind.SWAP_ADJACENT:
        if len(ops) < 2:
            raise ParamError("need at least two operations to swap")
        for _ in range(_TRIES):
            i = rng.randrange(len(ops) - 1)
            if ops[i] != ops[i + 1]:
                out[i], out[i + 1] = out[i + 1], out[i]
                return out
        raise ParamError("all adjacent operations are identical; swap cannot change the transcript")

    if kind is MutationKind.DROP_OP:
        i = rng.randrange(len(ops))
        del out[i]
        return out

    if kind is MutationKind.DUPLICATE_OP:
        i = rng.randrange(len(ops))
        out.insert(i, ops[i])
        return out

    if kind is MutationKind.REORDER_EXTRACT:
        extracts = [i for i, op in enumerate(ops) if op.kind in _EXTRACT_KINDS]
        pair = None
        if len(extracts) >= 2:
            for _ in range(_TRIES):
                i, j = rng.sample(extracts, 2)
                if ops[i].value != ops[j].value:
                    pair = (i, j)
                    break
            if pair is None:  # nearly all extract values equal; scan instead
                first = extracts[0]
                for j in extracts[1:]:
                    if ops[j].value != ops[first].value:
                        pair = (first, j)
                        break
        if pair is None:
            raise ParamError("no two extracts with distinct values to reorder")
        i, j = pair
        vi, vj = out[i].value, out[j].value
        out[i] = out[i]._replace(value=vj)
        out[j] = out[j]._replace(value=vi)
        return out

    if kind is MutationKind.TIMESTAMP_SHIFT:
        stamped = [i for i, op in enumerate(ops) if op.timestamp]
        if not stamped:
            raise ParamError("no timestamped operation to shift")
        i = rng.choice(stamped)
        old = out[i]
        hi = max(len(ops), 2)
        choices = [t for t in range(1, hi + 1) if t != old.timestamp]
        out[i] = old._replace(timestamp=rng.choice(choices))
        return out

    raise ParamError(f"unknown mutation kind {kind!r}")
