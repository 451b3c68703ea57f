import pytest
from hypothesis import given, strategies as st

from transcheck import (
    FormatError,
    balance,
    ext,
    ext_head,
    ext_tail,
    ext_ts,
    ext_ts_head,
    ext_ts_tail,
    infer_universe,
    ins,
    ins_head,
    ins_tail,
    paren,
    parse_line,
    parse_transcript_text,
    render_transcript,
    serialize,
    stream_of,
)
from transcheck.transcript import Header


@pytest.mark.parametrize(
    "line,expected",
    [
        ("I 5", ins(5)),
        ("E 7 3", ext_ts(7, 3)),
        ("IH 2", ins_head(2)),
        ("IT 9", ins_tail(9)),
        ("EH 4", ext_head(4)),
        ("ET 1", ext_tail(1)),
        ("EH 4 2", ext_ts_head(4, 2)),
        ("ET 1 7", ext_ts_tail(1, 7)),
        ("E 3", ext(3)),
        ("(", paren("(")),
        ("]", paren("]")),
    ],
)
def test_parse_line_grammar(line, expected):
    assert parse_line(line) == expected


def test_parse_line_is_whitespace_insensitive():
    assert parse_line("  I    5 ") == ins(5)


@pytest.mark.parametrize(
    "line",
    ["I 0", "E -3", "I", "I 5 3", "IH 2 4", "Q 5", "", "I x", f"I {1 << 63}"],
)
def test_parse_line_rejects_malformed(line):
    with pytest.raises(FormatError) as err:
        parse_line(line, lineno=17)
    assert "17" in str(err.value)


_ALL_CONSTRUCTORS = [
    lambda u, t: ins(u),
    lambda u, t: ext(u),
    lambda u, t: ins_head(u),
    lambda u, t: ins_tail(u),
    lambda u, t: ext_head(u),
    lambda u, t: ext_tail(u),
    ext_ts,
    ext_ts_head,
    ext_ts_tail,
]


@given(
    st.integers(0, len(_ALL_CONSTRUCTORS) - 1),
    st.integers(1, (1 << 63) - 1),
    st.integers(1, (1 << 63) - 1),
)
def test_round_trip_all_kinds(which, value, stamp):
    op = _ALL_CONSTRUCTORS[which](value, stamp)
    assert parse_line(serialize(op)) == op


@pytest.mark.parametrize("ch", "()[]")
def test_round_trip_parens(ch):
    op = paren(ch)
    assert parse_line(serialize(op)) == op


@given(st.lists(st.tuples(st.booleans(), st.integers(1, 4)), max_size=30), st.integers(1, 4))
def test_balance_additive_over_concatenation(pairs, u):
    ops = [ins(v) if is_ins else ext(v) for is_ins, v in pairs]
    for cut in range(len(ops) + 1):
        assert balance(ops, u) == balance(ops[:cut], u) + balance(ops[cut:], u)


def test_balance_examples():
    assert balance([ins(1), ins(1), ext(1)], 1) == 1
    assert balance([], 9) == 0
    assert balance([ext(4)], 4) == -1


def test_transcript_text_header_and_comments():
    text = "# N=3 U=7\n# a comment\nI 5\n\nE 5\nI 2\n"
    header, ops = parse_transcript_text(text)
    assert header == Header(3, 7)
    assert ops == [ins(5), ext(5), ins(2)]


def test_transcript_text_dyck_characters():
    header, ops = parse_transcript_text("([\n])\n")
    assert header is None
    assert [op.paren for op in ops] == ["(", "[", "]", ")"]


def test_render_parse_round_trip():
    ops = [ins(3), ext_ts(3, 1), ins_head(2), ext_tail(2)]
    text = render_transcript(ops, Header(4, 3))
    header, back = parse_transcript_text(text)
    assert header == Header(4, 3)
    assert back == ops


def test_stream_is_single_pass():
    s = stream_of([ins(1), ext(1)])
    assert s.declared_length == 2 and s.universe == 1
    list(s)
    with pytest.raises(RuntimeError):
        iter(s)


def test_infer_universe():
    assert infer_universe([ins(3), ext(9)]) == 9
    assert infer_universe([paren("(")]) == 2
    assert infer_universe([]) == 1
