"""Shared enumeration and differential-test helpers."""
from __future__ import annotations

import itertools
from typing import Iterator, Sequence

from transcheck import (
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


def insext_alphabet(universe: int) -> list[Operation]:
    return [ins(u) for u in range(1, universe + 1)] + [
        ext(u) for u in range(1, universe + 1)
    ]


def deque_alphabet(universe: int) -> list[Operation]:
    values = range(1, universe + 1)
    return (
        [ins_head(u) for u in values]
        + [ins_tail(u) for u in values]
        + [ext_head(u) for u in values]
        + [ext_tail(u) for u in values]
    )


def dyck_alphabet() -> list[Operation]:
    return [paren(c) for c in "()[]"]


def ts_alphabet(discipline: str, universe: int, n: int) -> list[Operation]:
    """Every operation a length-n timestamped transcript could contain."""
    values = range(1, universe + 1)
    stamps = range(1, n + 1)
    if discipline == "deque":
        return (
            [ins_head(u) for u in values]
            + [ins_tail(u) for u in values]
            + [ext_ts_head(u, t) for u in values for t in stamps]
            + [ext_ts_tail(u, t) for u in values for t in stamps]
        )
    return [ins(u) for u in values] + [ext_ts(u, t) for u in values for t in stamps]


def all_transcripts(
    alphabet: Sequence[Operation], max_n: int, min_n: int = 0
) -> Iterator[tuple[Operation, ...]]:
    for n in range(min_n, max_n + 1):
        yield from itertools.product(alphabet, repeat=n)


def valid_ts_transcripts(
    discipline: str, universe: int, n: int
) -> Iterator[list[Operation]]:
    """All valid timestamped transcripts of length exactly n, by walking the
    structure and emitting only legal operations with their true stamps."""
    values = range(1, universe + 1)

    def walk(prefix: list[Operation], content: tuple[tuple[int, int], ...]):
        if len(prefix) == n:
            if not content:
                yield list(prefix)
            return
        remaining = n - len(prefix)
        if len(content) < remaining:  # room to insert and still drain
            pos = len(prefix) + 1
            for u in values:
                if discipline == "deque":
                    yield from walk(prefix + [ins_head(u)], ((u, pos),) + content)
                    yield from walk(prefix + [ins_tail(u)], content + ((u, pos),))
                else:
                    yield from walk(prefix + [ins(u)], content + ((u, pos),))
        if content:
            if discipline == "queue":
                v, t = content[0]
                yield from walk(prefix + [ext_ts(v, t)], content[1:])
            elif discipline == "stack":
                v, t = content[-1]
                yield from walk(prefix + [ext_ts(v, t)], content[:-1])
            else:
                v, t = content[0]
                yield from walk(prefix + [ext_ts_head(v, t)], content[1:])
                v, t = content[-1]
                yield from walk(prefix + [ext_ts_tail(v, t)], content[:-1])

    yield from walk([], ())
