"""One-pass checkers for queue, stack, Dyck, deque, and timestamped variants.

The queue checker needs only a single fingerprint pair: the i-th insert must
equal the i-th extract.  The stack and deque checkers cut the stream into
blocks; within a block, inserts and extracts are matched against each other
directly (a value mismatch there is a certain violation).  What survives a
block is a run of extracts reaching into older material and a run of fresh
inserts; the fresh inserts are parceled into one summary over
(value, height) cells and pushed on a stack (or deque) of summaries, and
each surviving extract is cancelled out of the summary at its end.  A
summary that claims to cover no more items must be identically zero,
otherwise some extract lied about a value or a height.

The timestamped checkers exploit that each extract names the stream
position of the insert it claims to match, which pins the matching and
shrinks the state to O(1) fingerprints: one over (value, position) pairs
for the matching itself, one over (value, stamp, structural position)
triples for the discipline.
"""
from __future__ import annotations

import math
from collections import deque
from typing import Optional

from .errors import FormatError, KindError, ParamError
from .fingerprint import (
    CellSummary,
    ExactCells,
    FingerprintParams,
    PowerTable,
    cell_layout,
    fp_equal,
    value_stamp_pos_index,
)
from .transcript import Kind, Operation, TranscriptStream
from .verdict import ACCEPT, CheckResult, Verdict, reject

_CONST_CELLS = 12  # scalars held by a constant-state checker


def _require_length(stream: TranscriptStream, who: str) -> int:
    if stream.declared_length is None:
        raise ParamError(f"{who} needs the declared stream length")
    return stream.declared_length


def _new_params(
    mode: str, max_index: int, seed: int, params: Optional[FingerprintParams]
) -> Optional[FingerprintParams]:
    if mode != "fp":
        return None
    if params is None:
        params = FingerprintParams.generate(max_index=max_index, seed=seed)
    return params


def _cells(mode: str, max_index: int, params: Optional[FingerprintParams]) -> CellSummary:
    if mode == "fp":
        return params.zero()
    if mode == "exact":
        return ExactCells(max_index)
    raise ParamError(f"unknown mode {mode!r}")


def queue_check(
    stream: TranscriptStream,
    mode: str = "fp",
    params: Optional[FingerprintParams] = None,
    seed: int = 0,
) -> CheckResult:
    """FIFO check: the i-th insert value must equal the i-th extract value."""
    n = _require_length(stream, "queue checker")
    params = _new_params(mode, n, seed, params)
    if mode == "fp" and stream.universe >= params.modulus:
        raise ParamError("universe too large to use values as field coefficients")
    ins_sum = _cells(mode, n, params)
    ext_sum = _cells(mode, n, params)
    layout = cell_layout(params, 1, n + 1)
    ins_seen = ext_seen = 0
    for pos, op in enumerate(stream, start=1):
        if pos > n:
            raise FormatError(f"stream longer than declared length {n}")
        if op.kind == Kind.INS:
            ins_seen += 1
            ins_sum.add_cell(layout, ins_seen, 0, op.value)
        elif op.kind == Kind.EXT:
            ext_seen += 1
            if ext_seen > ins_seen:
                return CheckResult(
                    reject("extract from empty queue", pos), _CONST_CELLS,
                    params.error_bound if mode == "fp" else 0.0,
                )
            ext_sum.add_cell(layout, ext_seen, 0, op.value)
        else:
            raise KindError(f"queue checker expects ins/ext, got {op.kind.name}")
    bound = params.error_bound if mode == "fp" else 0.0
    if ins_seen + ext_seen != n:
        raise FormatError(f"stream shorter than declared length {n}")
    if ins_seen != ext_seen:
        verdict = reject("insert and extract counts differ at end")
    elif not fp_equal(ins_sum, ext_sum):
        verdict = reject("i-th extract does not match i-th insert")
    else:
        verdict = ACCEPT
    return CheckResult(verdict, _CONST_CELLS, bound)


def stack_check(
    stream: TranscriptStream,
    block_length: Optional[int] = None,
    mode: str = "fp",
    params: Optional[FingerprintParams] = None,
    seed: int = 0,
) -> CheckResult:
    """LIFO check over blocks with a stack of (value, height) summaries."""
    n = _require_length(stream, "stack checker")
    universe = stream.universe
    if block_length is None:
        block_length = max(1, math.isqrt(max(n - 1, 0)) + 1)
    if block_length < 1:
        raise ParamError("block length must be at least 1")
    max_index = max(n * universe - 1, 0)
    params = _new_params(mode, max_index, seed, params)
    bound = params.error_bound if mode == "fp" else 0.0
    layout = cell_layout(params, universe, max(n, 1))

    entries: list[list] = []  # [summary, item count]
    local: list[int] = []  # this block's unmatched insert values
    height = 0  # items committed to entries
    peak = _CONST_CELLS
    count = 0

    def flush() -> None:
        nonlocal height
        if not local:
            return
        summary = _cells(mode, max_index, params)
        for off, u in enumerate(local):
            summary.add_cell(layout, height + off, u - 1, 1)
        entries.append([summary, len(local)])
        height += len(local)
        local.clear()

    for pos, op in enumerate(stream, start=1):
        if pos > n:
            raise FormatError(f"stream longer than declared length {n}")
        count = pos
        u = op.value
        if op.kind == Kind.INS:
            if not 1 <= u <= universe:
                raise FormatError(f"value {u} outside declared universe [1, {universe}]")
            local.append(u)
        elif op.kind == Kind.EXT:
            if local:
                if local[-1] != u:
                    return CheckResult(
                        reject(f"extracted {u} but top is {local[-1]}", pos), peak, bound
                    )
                local.pop()
            elif entries:
                if not 1 <= u <= universe:
                    raise FormatError(
                        f"value {u} outside declared universe [1, {universe}]"
                    )
                top = entries[-1]
                height -= 1
                top[0].add_cell(layout, height, u - 1, -1)
                top[1] -= 1
                if top[1] == 0:
                    if not top[0].is_zero():
                        return CheckResult(
                            reject("drained block summary is not zero", pos), peak, bound
                        )
                    entries.pop()
            else:
                return CheckResult(reject("extract from empty stack", pos), peak, bound)
        else:
            raise KindError(f"stack checker expects ins/ext, got {op.kind.name}")
        live = len(local) + 2 * len(entries) + _CONST_CELLS
        if live > peak:
            peak = live
        if pos % block_length == 0:
            flush()
    if count != n:
        raise FormatError(f"stream shorter than declared length {n} (got {count})")
    flush()
    if entries or height:
        return CheckResult(reject("stack not empty at end"), peak, bound)
    return CheckResult(ACCEPT, peak, bound)


_PAREN_VALUE = {"(": 1, "[": 2, ")": 1, "]": 2}


def dyck_check(
    stream: TranscriptStream,
    block_length: Optional[int] = None,
    mode: str = "fp",
    params: Optional[FingerprintParams] = None,
    seed: int = 0,
) -> CheckResult:
    """Well-nestedness of two bracket types, as a stack over two values."""

    def translate():
        for op in stream:
            if op.kind == Kind.OPEN:
                yield Operation(Kind.INS, _PAREN_VALUE[op.paren])
            elif op.kind == Kind.CLOSE:
                yield Operation(Kind.EXT, _PAREN_VALUE[op.paren])
            else:
                raise KindError(f"dyck checker expects parentheses, got {op.kind.name}")

    inner = TranscriptStream(translate(), universe=2, declared_length=stream.declared_length)
    return stack_check(inner, block_length, mode, params, seed)


def deque_check(
    stream: TranscriptStream,
    block_length: Optional[int] = None,
    mode: str = "fp",
    params: Optional[FingerprintParams] = None,
    seed: int = 0,
) -> CheckResult:
    """Double-ended check with a deque of (value, position) summaries.

    Item positions form a signed axis: head inserts grow it downward, tail
    inserts upward, so an item's position never changes while it is stored.
    Positions are offset by the stream length to index fingerprint cells.
    """
    n = _require_length(stream, "deque checker")
    universe = stream.universe
    if block_length is None:
        block_length = max(1, math.isqrt(max(n - 1, 0)) + 1)
    if block_length < 1:
        raise ParamError("block length must be at least 1")
    offset = n
    max_index = max(2 * n * universe - 1, 0)
    params = _new_params(mode, max_index, seed, params)
    bound = params.error_bound if mode == "fp" else 0.0
    layout = cell_layout(params, universe, max(2 * n, 1))

    entries: deque[list] = deque()  # [summary, count]; head entry first
    head_local: deque[tuple[int, int]] = deque()  # (value, position), headmost first
    tail_local: deque[tuple[int, int]] = deque()  # (value, position), tailmost last
    head_pos = 0
    tail_pos = 0
    core = 0  # items from earlier blocks still stored
    peak = _CONST_CELLS
    count = 0

    def check_value(u: int) -> None:
        if not 1 <= u <= universe:
            raise FormatError(f"value {u} outside declared universe [1, {universe}]")

    def flush() -> None:
        nonlocal core
        if head_local:
            summary = _cells(mode, max_index, params)
            for u, q in head_local:
                summary.add_cell(layout, q + offset, u - 1, 1)
            entries.appendleft([summary, len(head_local)])
            head_local.clear()
        if tail_local:
            summary = _cells(mode, max_index, params)
            for u, q in tail_local:
                summary.add_cell(layout, q + offset, u - 1, 1)
            entries.append([summary, len(tail_local)])
            tail_local.clear()
        core = tail_pos - head_pos

    def drain(side: int, u: int, q: int, pos: int) -> Optional[Verdict]:
        entry = entries[side]
        entry[0].add_cell(layout, q + offset, u - 1, -1)
        entry[1] -= 1
        if entry[1] == 0:
            if not entry[0].is_zero():
                return reject("drained block summary is not zero", pos)
            if side == 0:
                entries.popleft()
            else:
                entries.pop()
        return None

    for pos, op in enumerate(stream, start=1):
        if pos > n:
            raise FormatError(f"stream longer than declared length {n}")
        count = pos
        kind = op.kind
        u = op.value
        if kind == Kind.INS_HEAD:
            check_value(u)
            head_pos -= 1
            head_local.appendleft((u, head_pos))
        elif kind == Kind.INS_TAIL:
            check_value(u)
            tail_local.append((u, tail_pos))
            tail_pos += 1
        elif kind == Kind.EXT_HEAD:
            if head_local:
                v, _ = head_local.popleft()
                if v != u:
                    return CheckResult(
                        reject(f"extracted {u} but head is {v}", pos), peak, bound
                    )
                head_pos += 1
            elif core:
                check_value(u)
                bad = drain(0, u, head_pos, pos)
                if bad is not None:
                    return CheckResult(bad, peak, bound)
                head_pos += 1
                core -= 1
            elif tail_local:
                v, _ = tail_local.popleft()
                if v != u:
                    return CheckResult(
                        reject(f"extracted {u} but head is {v}", pos), peak, bound
                    )
                head_pos += 1
            else:
                return CheckResult(reject("extract from empty deque", pos), peak, bound)
        elif kind == Kind.EXT_TAIL:
            if tail_local:
                v, _ = tail_local.pop()
                if v != u:
                    return CheckResult(
                        reject(f"extracted {u} but tail is {v}", pos), peak, bound
                    )
                tail_pos -= 1
            elif core:
                check_value(u)
                tail_pos -= 1
                bad = drain(-1, u, tail_pos, pos)
                if bad is not None:
                    return CheckResult(bad, peak, bound)
                core -= 1
            elif head_local:
                v, _ = head_local.pop()
                if v != u:
                    return CheckResult(
                        reject(f"extracted {u} but tail is {v}", pos), peak, bound
                    )
                tail_pos -= 1
            else:
                return CheckResult(reject("extract from empty deque", pos), peak, bound)
        else:
            raise KindError(f"deque checker expects end-tagged ins/ext, got {kind.name}")
        live = len(head_local) + len(tail_local) + 2 * len(entries) + _CONST_CELLS
        if live > peak:
            peak = live
        if pos % block_length == 0:
            flush()
    if count != n:
        raise FormatError(f"stream shorter than declared length {n} (got {count})")
    flush()
    if entries or head_pos != tail_pos:
        return CheckResult(reject("deque not empty at end"), peak, bound)
    return CheckResult(ACCEPT, peak, bound)


_TS_INS_KINDS = {
    "queue": (Kind.INS,),
    "stack": (Kind.INS,),
    "deque": (Kind.INS_HEAD, Kind.INS_TAIL),
}
_TS_EXT_KINDS = {
    "queue": (Kind.EXT_TS,),
    "stack": (Kind.EXT_TS,),
    "deque": (Kind.EXT_TS_HEAD, Kind.EXT_TS_TAIL),
}


def ts_check(
    stream: TranscriptStream,
    discipline: str,
    mode: str = "fp",
    params: Optional[FingerprintParams] = None,
    seed: int = 0,
) -> CheckResult:
    """O(1)-state check of timestamped transcripts.

    Soundness rests on three pieces: (a) the multiset of (value, position)
    over inserts must equal the multiset of (value, stamp) over extracts,
    so stamps form a perfect matching onto the inserts; (b) every stamp
    must point strictly into the past; (c) a summary of the structure's
    content over (value, stamp, structural position) cells must cancel to
    zero, so each extract removed exactly the item its end was holding.
    Cheap necessary orderings (queue stamps increase; consecutive stack
    stamps either nest or restart) reject common errors without hashing.
    """
    if discipline not in _TS_INS_KINDS:
        raise ParamError(f"unknown timestamped discipline {discipline!r}")
    n = _require_length(stream, "timestamped checker")
    universe = stream.universe
    ins_kinds = _TS_INS_KINDS[discipline]
    ext_kinds = _TS_EXT_KINDS[discipline]

    match_bound = max(n * universe - 1, 0)
    structpos_bound = 2 * n if discipline == "deque" else n
    content_bound = (
        value_stamp_pos_index(universe, n, structpos_bound, universe, n) if n else 0
    )
    params = _new_params(mode, content_bound, seed, params)
    matching = _cells(mode, match_bound, params)
    content = _cells(mode, content_bound, params)
    bound = params.error_bound if mode == "fp" else 0.0
    match_layout = cell_layout(params, universe, max(n, 1))
    if mode == "fp":
        # content cells factor as (structural position, stamp, value)
        npoints = len(params.points)
        modulus = params.modulus
        sp_tab = PowerTable(params, (n + 1) * universe, structpos_bound + 1)
        t_tab = PowerTable(params, universe, n + 1)
        v_tab = PowerTable(params, 1, universe)

    def content_add(u: int, t: int, structpos: int, delta: int) -> None:
        idx = value_stamp_pos_index(u, t, structpos, universe, n)
        if mode == "fp":
            terms = [
                sp_tab.get(i, structpos) * t_tab.get(i, t) % modulus * v_tab.get(i, u - 1) % modulus
                for i in range(npoints)
            ]
            content.add_terms(idx, delta, terms)
        else:
            content.add(idx, delta)

    size = 0
    head_pos = 0
    tail_pos = 0
    offset = n
    prev_stamp = 0
    prev_ext_pos = 0
    count = 0

    def done(verdict: Verdict) -> CheckResult:
        return CheckResult(verdict, _CONST_CELLS, bound)

    for pos, op in enumerate(stream, start=1):
        if pos > n:
            raise FormatError(f"stream longer than declared length {n}")
        count = pos
        kind = op.kind
        u = op.value
        if kind in ins_kinds:
            if not 1 <= u <= universe:
                raise FormatError(f"value {u} outside declared universe [1, {universe}]")
            if kind == Kind.INS_HEAD:
                head_pos -= 1
                structpos = head_pos + offset
            elif kind == Kind.INS_TAIL:
                structpos = tail_pos + offset
                tail_pos += 1
            elif discipline == "stack":
                structpos = size
            else:  # queue: inserts arrive at consecutive slots
                structpos = tail_pos
                tail_pos += 1
            size += 1
            matching.add_cell(match_layout, pos - 1, u - 1, 1)
            content_add(u, pos, structpos, 1)
        elif kind in ext_kinds:
            if size == 0:
                return done(reject(f"extract from empty {discipline}", pos))
            t = op.timestamp
            if not 1 <= t < pos:
                return done(reject(f"timestamp {t} does not point into the past", pos))
            if discipline == "queue" and t <= prev_stamp:
                return done(reject("queue stamps must strictly increase", pos))
            if (
                discipline == "stack"
                and prev_ext_pos
                and not (t > prev_ext_pos or t < prev_stamp)
            ):
                return done(reject("stack stamps neither nest nor restart", pos))
            if not 1 <= u <= universe:
                raise FormatError(f"value {u} outside declared universe [1, {universe}]")
            if kind == Kind.EXT_TS_HEAD:
                structpos = head_pos + offset
                head_pos += 1
            elif kind == Kind.EXT_TS_TAIL:
                tail_pos -= 1
                structpos = tail_pos + offset
            elif discipline == "stack":
                structpos = size - 1
            else:  # queue: extracts consume slots in arrival order
                structpos = head_pos
                head_pos += 1
            size -= 1
            prev_stamp = t
            prev_ext_pos = pos
            matching.add_cell(match_layout, t - 1, u - 1, -1)
            content_add(u, t, structpos, -1)
        else:
            raise KindError(f"{discipline}_ts checker got unexpected operation {kind.name}")
    if count != n:
        raise FormatError(f"stream shorter than declared length {n} (got {count})")
    if size != 0:
        return done(reject(f"{discipline} not empty at end"))
    if not matching.is_zero():
        return done(reject("extract stamps do not match insert positions"))
    if not content.is_zero():
        return done(reject("an extract took an item its end was not holding"))
    return done(ACCEPT)
