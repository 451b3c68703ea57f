"""One-pass priority-queue transcript checker.

The checker consumes a transcript rearranged into epochs, where each epoch
is a run of extracts in ascending order followed by a run of inserts (the
block pipeline below produces this shape from an arbitrary transcript).  It
maintains, per epoch k, the floor ``f[k]``: the largest value extracted
after epoch k ended.  Every operation on value u is charged to the earliest
epoch whose floor does not exceed u, and three per-(epoch, value) counters
are accumulated:

  X  inserts charged to the cell while its floor was still below the value,
  Y  extracts charged to the cell, minus inserts charged at floor level,
  Z  the running maximum of Y, which exposes extract-before-insert errors.

A transcript in the language leaves X = Y = Z; any violation leaves some
cell unequal forever once its floor passes the value.  Floors are
non-increasing across epochs and only ever rise over time, so they are
stored as run-length segments; only the first epoch of a run can ever be
charged, so each segment carries a single live (Y, Z) pair that is folded
into the array summary when its floor rises and the cell becomes immutable.

In ``fp`` mode the three arrays exist only as homomorphic fingerprints plus
the live pairs, giving O(epochs) words of state; in ``exact`` mode they are
kept as real dictionaries and the final comparison is collision-free.
"""
from __future__ import annotations

import math
from typing import Iterable, Optional

from .blocks import BlockScanner
from .errors import CapacityError, FormatError, KindError, ParamError
from .fingerprint import FingerprintParams, cell_layout, fp_equal
from .transcript import Kind, Operation, TranscriptStream
from .verdict import ACCEPT, CheckResult, Verdict, reject

# Field values and counters retained by the fingerprint trio, counted as
# cells by the space instrumentation.
_SUMMARY_CELLS = 9


class _Seg:
    """Run of consecutive epochs sharing one floor value.

    ``start`` is the first epoch of the run; the run ends where the next
    segment begins.  ``y``/``z`` are the live counters of the cell
    (start, floor value); cells at the other epochs of a run are provably
    never charged, so they stay zero and need no storage.
    """

    __slots__ = ("val", "start", "y", "z")

    def __init__(self, val: int, start: int):
        self.val = val
        self.start = start
        self.y = 0
        self.z = 0


class PqChecker:
    """Streaming state machine for epoch-form transcripts."""

    def __init__(
        self,
        universe: int,
        mode: str = "fp",
        params: Optional[FingerprintParams] = None,
        max_epochs: Optional[int] = None,
        seed: int = 0,
    ):
        if universe < 1:
            raise ParamError("universe must be at least 1")
        self.universe = universe
        self.mode = mode
        self.max_epochs = max_epochs
        self.params = params
        if mode == "fp":
            if params is None:
                if max_epochs is None:
                    raise ParamError("fingerprint mode needs params or max_epochs")
                self.params = FingerprintParams.generate(
                    max_index=max(max_epochs * universe - 1, 0), seed=seed
                )
            self.x_sum = self.params.zero()
            self.y_sum = self.params.zero()
            self.z_sum = self.params.zero()
            rows = (
                max_epochs
                if max_epochs is not None
                else self.params.max_index // universe + 1
            )
            self._layout = cell_layout(self.params, universe, max(rows, 1))
        elif mode == "exact":
            self.x_arr: dict[tuple[int, int], int] = {}
            self.y_arr: dict[tuple[int, int], int] = {}
            self.z_arr: dict[tuple[int, int], int] = {}
        else:
            raise ParamError(f"unknown mode {mode!r}")
        # Floor run-length segments: values strictly decreasing, last segment
        # is always the zero tail covering every epoch not yet risen.
        self._segs: list[_Seg] = [_Seg(0, 1)]
        self.epoch = 1
        self._phase = "E"
        self._last_ext = 0
        self.verdict: Optional[Verdict] = None
        self.steps = 0
        self.peak_cells = 3

    # -- floor bookkeeping --------------------------------------------------

    def _find(self, u: int) -> int:
        """Index of the first segment whose floor is <= u."""
        segs = self._segs
        lo, hi = 0, len(segs) - 1
        while lo < hi:
            mid = (lo + hi) // 2
            if segs[mid].val <= u:
                hi = mid
            else:
                lo = mid + 1
        return lo

    def epoch_assign(self, u: int) -> int:
        """Earliest epoch whose floor does not exceed u."""
        return self._segs[self._find(u)].start

    def _fold_live(self, seg: _Seg) -> None:
        if self.mode == "fp" and seg.val > 0 and (seg.y or seg.z):
            self.y_sum.add_cell(self._layout, seg.start - 1, seg.val - 1, seg.y)
            self.z_sum.add_cell(self._layout, seg.start - 1, seg.val - 1, seg.z)
        seg.y = 0
        seg.z = 0

    def f_update(self, u: int) -> None:
        """Raise the floor of every epoch before the current one to at least u.

        Floors are non-increasing in the epoch index, so exactly one suffix
        of the earlier epochs rises.  Every risen run head retires its live
        counters (those cells can never be charged again), and the risen
        range becomes a single fresh run.
        """
        i = self.epoch
        if i <= 1:
            return
        segs = self._segs
        idx = self._find(u)
        seg = segs[idx]
        if seg.val == u:
            # this run already sits at u; runs after it rise and merge in
            for j in range(idx + 1, len(segs) - 1):
                self._fold_live(segs[j])
            del segs[idx + 1 : len(segs) - 1]
            tail = segs[-1]
            if tail is not seg and tail.start <= i - 1:
                tail.start = i
            return
        start = seg.start
        if start > i - 1:
            return  # nothing before the current epoch has a lower floor
        for j in range(idx, len(segs) - 1):
            self._fold_live(segs[j])
        del segs[idx : len(segs) - 1]
        tail = segs[-1]
        if tail.start <= i - 1:
            tail.start = i
        segs.insert(len(segs) - 1, _Seg(u, start))

    # -- operations -----------------------------------------------------------

    def new_epoch(self) -> None:
        self.epoch += 1
        if self.max_epochs is not None and self.epoch > self.max_epochs:
            raise CapacityError(
                f"epoch {self.epoch} exceeds declared capacity {self.max_epochs}"
            )
        self._phase = "E"
        self._last_ext = 0

    def step(self, op: Operation, epoch_boundary: bool = False) -> None:
        """Consume one epoch-form operation; check ``verdict`` afterwards."""
        if self.verdict is not None:
            return
        if epoch_boundary:
            self.new_epoch()
        if op.kind == Kind.EXT:
            self._ext(op.value)
        elif op.kind == Kind.INS:
            self._ins(op.value)
        else:
            raise KindError(f"pq checker expects ins/ext, got {op.kind.name}")
        self.steps += 1
        cells = 3 * len(self._segs)
        if cells > self.peak_cells:
            self.peak_cells = cells

    def _ext(self, u: int) -> None:
        if self._phase == "I":
            raise FormatError(
                "extract arrived mid-epoch after inserts; missing epoch boundary"
            )
        if self.epoch == 1:
            self.verdict = reject("extract precedes any insert", self.steps + 1)
            return
        if u < self._last_ext:
            self.verdict = reject(
                f"extracts not ascending within an epoch run ({u} after {self._last_ext})",
                self.steps + 1,
            )
            return
        self._last_ext = u
        if not 1 <= u <= self.universe:
            raise FormatError(f"value {u} outside declared universe [1, {self.universe}]")
        self.f_update(u)
        seg = self._segs[self._find(u)]
        assert seg.val == u and seg.start < self.epoch
        if self.mode == "fp":
            seg.y += 1
            if seg.y > seg.z:
                seg.z = seg.y
        else:
            cell = (seg.start, u)
            y = self.y_arr.get(cell, 0) + 1
            self.y_arr[cell] = y
            if y > self.z_arr.get(cell, 0):
                self.z_arr[cell] = y

    def _ins(self, u: int) -> None:
        if not 1 <= u <= self.universe:
            raise FormatError(f"value {u} outside declared universe [1, {self.universe}]")
        self._phase = "I"
        seg = self._segs[self._find(u)]
        if seg.val < u:
            if self.mode == "fp":
                self.x_sum.add_cell(self._layout, seg.start - 1, u - 1, 1)
            else:
                cell = (seg.start, u)
                self.x_arr[cell] = self.x_arr.get(cell, 0) + 1
        else:  # floor equals the value: cancel against the live extract count
            if self.mode == "fp":
                seg.y -= 1
            else:
                cell = (seg.start, u)
                self.y_arr[cell] = self.y_arr.get(cell, 0) - 1

    def finalize(self) -> Verdict:
        """Fold remaining live counters and compare the three summaries."""
        if self.verdict is not None:
            return self.verdict
        if self.mode == "fp":
            for seg in self._segs:
                self._fold_live(seg)
            if not fp_equal(self.x_sum, self.y_sum):
                self.verdict = reject("insert and extract summaries differ")
            elif not fp_equal(self.x_sum, self.z_sum):
                self.verdict = reject(
                    "an extract preceded its insert (peak summary differs)"
                )
            else:
                self.verdict = ACCEPT
        else:
            x = {c: v for c, v in self.x_arr.items() if v}
            y = {c: v for c, v in self.y_arr.items() if v}
            z = {c: v for c, v in self.z_arr.items() if v}
            if x != y:
                self.verdict = reject("insert and extract summaries differ")
            elif x != z:
                self.verdict = reject(
                    "an extract preceded its insert (peak summary differs)"
                )
            else:
                self.verdict = ACCEPT
        return self.verdict

    # -- introspection (tests and instrumentation) ----------------------------

    def segment_count(self) -> int:
        return len(self._segs)

    def floor_values(self, count: int) -> list[int]:
        """Materialized floors f[1..count]."""
        out: list[int] = []
        segs = self._segs
        for j, seg in enumerate(segs):
            end = segs[j + 1].start - 1 if j + 1 < len(segs) else count
            for _ in range(seg.start, min(end, count) + 1):
                out.append(seg.val)
        return out[:count]

    def exact_cell(self, array: str, epoch: int, value: int) -> int:
        table = {"x": self.x_arr, "y": self.y_arr, "z": self.z_arr}[array]
        return table.get((epoch, value), 0)


def pq_step(state: PqChecker, op: Operation, epoch_boundary: bool = False) -> PqChecker:
    state.step(op, epoch_boundary)
    return state


def pq_finalize(state: PqChecker) -> Verdict:
    return state.finalize()


def check_pq_epochs(
    epochs: Iterable[tuple[Iterable[int], Iterable[int]]],
    universe: int,
    mode: str = "exact",
    params: Optional[FingerprintParams] = None,
    max_epochs: Optional[int] = None,
    seed: int = 0,
) -> Verdict:
    """Run the checker on a transcript already in epoch form.

    Each epoch is (extract values, insert values).  The first epoch must
    have no extracts and the last no inserts; both are certain violations
    of membership and are rejected, not raised.
    """
    state = PqChecker(universe, mode=mode, params=params, max_epochs=max_epochs, seed=seed)
    first = True
    trailing_inserts = False
    for extracts, inserts in epochs:
        if not first:
            state.new_epoch()
        first = False
        trailing_inserts = False
        for v in extracts:
            state.step(Operation(Kind.EXT, v))
            if state.verdict is not None:
                return state.verdict
        for v in inserts:
            trailing_inserts = True
            state.step(Operation(Kind.INS, v))
    if trailing_inserts:
        return reject("final epoch contains inserts that are never extracted")
    return state.finalize()


def pq_pipeline(
    stream: TranscriptStream,
    block_length: Optional[int] = None,
    mode: str = "fp",
    params: Optional[FingerprintParams] = None,
    seed: int = 0,
) -> CheckResult:
    """Full one-pass membership check for priority-queue transcripts.

    The stream is cut into consecutive blocks of ``block_length``
    operations.  Each block is scanned for local consistency (a violation
    rejects immediately) and collapsed to its canonical form, which feeds
    the epoch checker as two epochs: (extracts, matched insert) and
    (matched extract, inserts).  With block length ~sqrt(N) the live state
    is O(sqrt(N)) cells.  Valid transcripts are always accepted; invalid
    ones slip through only on a fingerprint collision.
    """
    n = stream.declared_length
    if n is None:
        raise ParamError("pq pipeline needs the declared stream length")
    universe = stream.universe
    if block_length is None:
        block_length = max(1, math.isqrt(max(n - 1, 0)) + 1)
    if block_length < 1:
        raise ParamError("block length must be at least 1")
    num_epochs = 2 * ((n + block_length - 1) // block_length)
    state = PqChecker(
        universe,
        mode=mode,
        params=params,
        max_epochs=max(num_epochs, 2),
        seed=seed,
    )
    error_bound = state.params.error_bound if mode == "fp" else 0.0

    scanner = BlockScanner()
    peak = _SUMMARY_CELLS + 3
    count = 0
    block_start = 0
    first_block = True

    def flush(last: bool) -> Optional[Verdict]:
        nonlocal scanner, first_block, peak
        gamma = scanner.finish()
        scanner = BlockScanner()
        if first_block and gamma.extracts:
            return reject("extract precedes any insert", block_start + 1)
        if last and gamma.inserts:
            return reject("inserts near the end are never extracted")
        if not first_block:
            state.new_epoch()
        first_block = False
        for v in gamma.extracts:
            state._ext(v)
            if state.verdict is not None:
                return state.verdict
        if gamma.matched_max is not None:
            state._ins(gamma.matched_max)
        state.new_epoch()
        if gamma.matched_max is not None:
            state._ext(gamma.matched_max)
            if state.verdict is not None:
                return state.verdict
        for v in gamma.inserts:
            state._ins(v)
        live = 3 * len(state._segs) + _SUMMARY_CELLS
        if live > peak:
            peak = live
        return None

    for op in stream:
        count += 1
        if count > n:
            raise FormatError(f"stream longer than declared length {n}")
        bad = scanner.push(op)
        if bad is not None:
            return CheckResult(
                reject(bad.reason, block_start + bad.position), peak, error_bound
            )
        live = 3 * len(state._segs) + scanner.live_size() + _SUMMARY_CELLS
        if live > peak:
            peak = live
        if count % block_length == 0:
            verdict = flush(last=(count == n))
            if verdict is not None:
                return CheckResult(verdict, peak, error_bound)
            block_start = count
    if count != n:
        raise FormatError(f"stream shorter than declared length {n} (got {count})")
    if count % block_length and count > 0:
        verdict = flush(last=True)
        if verdict is not None:
            return CheckResult(verdict, peak, error_bound)
    return CheckResult(state.finalize(), peak, error_bound)
