import itertools

import pytest
from hypothesis import given, strategies as st

from ecoplan.errors import CapacityError, StateLookupError, UnsupportedError
from ecoplan.state_space import (ProblemDims, appendix_cross_map, bits_to_code, code_to_bits,
                                 count_states, enumerate_states, load_appendix_codes, parse_bits,
                                 state_by_code)

from oracles import brute_force_codes

# Transcribed by hand from the appendix listing of the 25 matrices.
APPENDIX_MATRICES = [
    "001;110", "001;111", "010;101", "011;100", "011;101", "010;111", "011;110", "011;111",
    "100;011", "101;010", "101;011", "110;001", "111;001", "110;011", "111;010", "111;011",
    "100;111", "101;110", "101;111", "110;101", "111;100", "111;101", "110;111", "111;110",
    "111;111",
]

SMALL_DIMS = [(m, n) for m in range(1, 13) for n in range(1, 13) if m * n <= 12]


def test_two_by_three_has_25_states(space23):
    assert space23.l == 25


def test_one_by_one():
    sp = enumerate_states(ProblemDims(1, 1, 1))
    assert sp.l == 1 and sp.states[0].bits == ((1,),)


def test_two_by_two_count():
    assert enumerate_states(ProblemDims(2, 2)).l == 7
    assert len(brute_force_codes(2, 2)) == 7


@pytest.mark.parametrize("m,n", SMALL_DIMS)
def test_enumeration_matches_brute_force(m, n):
    sp = enumerate_states(ProblemDims(m, n))
    assert list(sp.codes) == brute_force_codes(m, n)
    assert count_states(sp.dims) == sp.l
    assert [s.index for s in sp] == list(range(1, sp.l + 1))


@pytest.mark.parametrize("dims,expected", [((2, 3), 25), ((3, 2), 25), ((1, 7), 1), ((1, 1), 1)])
def test_count_states_examples(dims, expected):
    assert count_states(ProblemDims(*dims)) == expected


def test_capacity_guard():
    with pytest.raises(CapacityError):
        ProblemDims(5, 5)
    assert enumerate_states(ProblemDims(2, 10)).l == count_states(ProblemDims(2, 10)) == 3 ** 10 - 2


def test_codes_and_lookup(space23):
    assert state_by_code(space23, 14).index == 1
    assert state_by_code(space23, 14).bits == ((0, 0, 1), (1, 1, 0))
    assert state_by_code(space23, 63).index == 25
    with pytest.raises(StateLookupError):
        state_by_code(space23, 13)
    with pytest.raises(StateLookupError):
        state_by_code(space23, 64)


def test_roundtrips(space23):
    for s in space23:
        assert state_by_code(space23, s.code) is s
        assert bits_to_code(s.bits) == s.code
        assert parse_bits(s.render()) == s.bits
    assert space23[1].render() == "001;110"


@given(st.integers(1, 4), st.integers(1, 4), st.data())
def test_code_bits_inverse(m, n, data):
    code = data.draw(st.integers(0, (1 << (m * n)) - 1))
    assert bits_to_code(code_to_bits(code, m, n)) == code


def test_fixture_matches_transcription():
    fixture = load_appendix_codes()
    assert sorted(fixture) == list(range(1, 26))
    for i, text in enumerate(APPENDIX_MATRICES, start=1):
        assert fixture[i] == int(text.replace(";", ""), 2)


def test_fixture_set_equals_enumeration(space23):
    assert set(load_appendix_codes().values()) == set(space23.codes.tolist())


def test_appendix_cross_map(space23):
    cross = appendix_cross_map(space23)
    assert cross[1] == 1
    assert cross[6] == 4
    assert sorted(cross.values()) == list(range(1, 26))
    # appendix ordering is not monotone in the code
    codes = load_appendix_codes()
    assert [codes[i] for i in (4, 5, 6)] == [28, 29, 23]


def test_cross_map_unsupported():
    with pytest.raises(UnsupportedError):
        appendix_cross_map(enumerate_states(ProblemDims(2, 2)))


def test_state_coverage_invariant(space23):
    for s in space23:
        mat = s.matrix
        assert mat.any(axis=1).all() and mat.any(axis=0).all()
    rejected = set(range(64)) - set(space23.codes.tolist())
    for code in rejected:
        bits = code_to_bits(code, 2, 3)
        assert not (all(any(r) for r in bits) and all(any(c) for c in zip(*bits)))


def test_invalid_dims():
    for bad in itertools.product((0, -1), (1,)):
        with pytest.raises(ValueError):
            ProblemDims(*bad)
