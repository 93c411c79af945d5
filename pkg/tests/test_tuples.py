import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fiedlerkron.tuples import (NEG_ZERO, Csf, IndexType, commute, concat, csf, csf_with_permutation,
                                format_tuple, h_count, heads, index_type, is_permutation_of, negate,
                                parse_tuple, rev, satisfies_sip, shift, sip_append_check, string,
                                tuple_equivalent)
from strategies import random_sip_tuple


def test_parse_and_format():
    assert parse_tuple("3:5,2,0:1") == (3, 4, 5, 2, 0, 1)
    assert parse_tuple("(0,2,4,1,3,5)") == (0, 2, 4, 1, 3, 5)
    assert parse_tuple("-6:-2,-6:-3") == (-6, -5, -4, -3, -2, -6, -5, -4, -3)
    assert parse_tuple("5:-1:3") == (5, 4, 3)
    assert parse_tuple("4:2") == ()
    assert parse_tuple("") == ()
    assert parse_tuple("-0,-1")[0] is NEG_ZERO
    assert format_tuple((3, 4, 5, 2, 0, 1)) in ("3:5,2,0:1", "(3:5,2,0:1)")
    assert parse_tuple(format_tuple((0, 2, 4, 1, 3, 5))) == (0, 2, 4, 1, 3, 5)
    with pytest.raises(ValueError):
        parse_tuple("1,x")


def test_basic_tuple_operations():
    assert string(2, 4) == (2, 3, 4)
    assert string(3, 2) == ()
    assert rev((1, 2, 3)) == (3, 2, 1)
    assert shift((-3, -1), 3) == (0, 2)
    assert negate((1, 2)) == (-1, -2)
    assert concat((1,), (), (2, 3)) == (1, 2, 3)


def test_commutation_rule():
    assert commute(0, 2) and commute(-1, -4)
    assert not commute(1, 2) and not commute(3, 3) and not commute(-2, -3)


def test_sip_examples():
    assert satisfies_sip(())
    assert satisfies_sip((0, 1, 0))
    assert not satisfies_sip((0, 0))
    assert not satisfies_sip((1, 0, 1))
    assert satisfies_sip((-3, -2, -3))


def test_csf_examples():
    assert csf((3, 4, 5, 2, 0, 1, 3)).strings == ((3, 5), (2, 3), (0, 1))
    assert csf((3, 4, 5, 2, 0, 1, 4)).strings == ((3, 5), (4, 4), (2, 2), (0, 1))


def test_heads_examples():
    t1 = (3, 4, 0, 1, 2)
    assert heads(t1) == {4, 2} and h_count(t1) == 2
    t2 = concat(string(1, 4), string(0, 3), string(0, 2), (1, 0))
    assert heads(t2) == {4, 3, 2, 1, 0} and h_count(t2) == 5
    assert heads(string(2, 6)) == {6}
    assert h_count(()) == 0


def test_type_examples():
    t = (3, 4, 5, 2, 0, 1)
    assert index_type(t, 3)[0] is IndexType.TYPE_I
    assert index_type(t, 4)[0] is IndexType.TYPE_II
    assert index_type(t, 0)[0] is IndexType.TYPE_II


def test_append_string_examples():
    assert sip_append_check((3, 4, 5, 2, 0, 1), 3, 3)
    assert not sip_append_check((3, 4, 0, 1, 2), 2, 2)


def test_negative_tuples_use_shifted_csf():
    t = (-2, -1, -3)
    c = csf(t)
    assert c.tuple == tuple(x - 3 for x in csf(shift(t, 3)).tuple)


def test_csf_rejects_non_sip_and_bad_heads():
    with pytest.raises(ValueError):
        csf((0, 0))
    with pytest.raises(ValueError):
        Csf(((0, 1), (2, 3)))


def test_tuple_equivalence():
    assert tuple_equivalent((0, 2), (2, 0))
    assert not tuple_equivalent((0, 1), (1, 0))
    assert not tuple_equivalent((0, 1), (0, 2))


def test_is_permutation_of():
    assert is_permutation_of((2, 0, 1), range(3))
    assert not is_permutation_of((0, 0, 1), range(3))


@settings(max_examples=300, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 10), st.integers(0, 14))
def test_csf_properties(seed, k, length):
    rng = np.random.default_rng(seed)
    t = random_sip_tuple(rng, k, length)
    c, perm = csf_with_permutation(t)
    assert satisfies_sip(c.tuple)
    assert c.tuple == tuple(t[i] for i in perm)
    assert tuple_equivalent(t, c.tuple)
    assert heads(c.tuple) == heads(t) if t else True
    assert h_count(t) == len(c) if t else h_count(t) == 0
    heads_desc = [b for _, b in c.strings]
    assert heads_desc == sorted(heads_desc, reverse=True)
