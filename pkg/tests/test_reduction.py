import pytest

from transcheck import (
    FormatError,
    KindError,
    dyck_to_pq,
    dyck_to_pq_stream,
    ext,
    height,
    ins,
    oracle_check,
    paren,
    pq_pipeline,
    serialize,
    stream_of,
)
from transcheck.reduction import HeightTracker
from helpers import all_transcripts, dyck_alphabet


def parens(text: str):
    return [paren(c) for c in text]


class TestHeight:
    def test_empty_prefix(self):
        assert height([]) == 0

    def test_examples(self):
        assert height(parens("(()")) == 1
        assert height(parens("(()[])")) == 0
        assert height(parens(")")) == -1

    def test_tracker_state_is_one_integer(self):
        tracker = HeightTracker()
        assert list(vars(tracker)) == ["h"]

    def test_kind_error(self):
        with pytest.raises(KindError):
            height([ins(1)])


class TestTransform:
    def test_worked_example(self):
        image = list(dyck_to_pq(parens("(()[])"[:6]), 6))
        assert image == [ins(12), ins(10), ext(10), ins(9), ext(9), ext(12)]

    def test_single_matched_pair(self):
        assert list(dyck_to_pq(parens("()"), 2)) == [ins(4), ext(4)]

    def test_lone_close_maps_below_the_range_top_and_rejects(self):
        image = list(dyck_to_pq(parens(")"), 1))
        assert image == [ext(4)]
        assert not oracle_check(image, "pq").ok

    def test_length_mismatch(self):
        with pytest.raises(FormatError):
            list(dyck_to_pq(parens("()"), 3))
        with pytest.raises(FormatError):
            list(dyck_to_pq(parens("()"), 1))

    def test_kind_error(self):
        with pytest.raises(KindError):
            list(dyck_to_pq([ins(1)], 1))

    def test_values_stay_in_range(self):
        for tup in all_transcripts(dyck_alphabet(), 6):
            n = len(tup)
            for op in dyck_to_pq(list(tup), n):
                assert 1 <= op.value <= 4 * n, [serialize(o) for o in tup]

    def test_membership_equivalence_exhaustive(self):
        for tup in all_transcripts(dyck_alphabet(), 7):
            n = len(tup)
            want = oracle_check(tup, "dyck2").ok
            got = oracle_check(list(dyck_to_pq(list(tup), n)), "pq").ok
            assert want == got, [serialize(o) for o in tup]

    def test_crossing_bracket_families_reject(self):
        for text in ("([)]", "[(])", "(([)])", "[[(]])"):
            image = list(dyck_to_pq(parens(text), len(text)))
            assert not oracle_check(image, "pq").ok, text
            res = pq_pipeline(stream_of(image, universe=4 * len(text)), 2)
            assert not res.ok, text

    def test_stream_wrapper_universe(self):
        stream = dyck_to_pq_stream(stream_of(parens("()"), universe=2))
        assert stream.universe == 8 and stream.declared_length == 2
        assert pq_pipeline(stream, 2).ok
