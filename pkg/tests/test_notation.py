import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import field_elems
from g2flow.notation import NotationError, parse_entries, render_entries
from g2flow.scalars import R2, FieldElem


def test_parses_radical_coefficients():
    entries = parse_entries("(0,0,0,0,2h12+(2r2-2)h13+(-2-2r2)h24-2h34,4r2h12+4r2h23-4r2h34)", 6)
    assert entries[4][(1, 3)] == FieldElem(-2, 2)
    assert entries[4][(2, 4)] == FieldElem(-2, -2)
    assert entries[5][(2, 3)] == 4 * R2


def test_fraction_times_radical():
    entries = parse_entries("(1/2r2h16+h45,0,0,0,0,0)", 6)
    assert entries[0][(1, 6)] == R2 * FieldElem(1, 0) / 2


def test_reversed_indices_flip_sign():
    assert parse_entries("(h21,0,0,0,0,0)", 6)[0] == {(1, 2): FieldElem(-1)}


@pytest.mark.parametrize("text, offset", [
    ("(0,0,0,0,0)", 0),
    ("(0,0,0,0,0,h1)", 12),
    ("(0,0,0,0,0,h77)", 12),
    ("(0,0,0,0,0,h11)", 12),
    ("(0,0,0,0,0,0", 12),
    ("(0,0,0,0,0,2*)", 13),
])
def test_malformed_input_reports_offset(text, offset):
    with pytest.raises(NotationError) as info:
        parse_entries(text, 6)
    assert info.value.offset == offset
    assert "^" in str(info.value)


PAIRS = [(i, j) for i in range(1, 7) for j in range(i + 1, 7)]


@given(st.lists(st.dictionaries(st.sampled_from(PAIRS), field_elems(3), max_size=3), min_size=6, max_size=6))
def test_render_parse_round_trip(entries):
    entries = [{k: v for k, v in e.items() if v} for e in entries]
    assert parse_entries(render_entries(entries), 6) == entries
