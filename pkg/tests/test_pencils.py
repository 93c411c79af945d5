import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fiedlerkron.core import BlockPencil, MatrixPolynomial, integer_fixture
from fiedlerkron.elementary import trivial_product
from fiedlerkron.fixtures import D1, D2, D3, FIEDLER, FPR, GFP, fpr_spec, grid
from fiedlerkron.pencils import (GfprSpec, block_structure_check, dl_specs, fiedler, fiedler_spec, gfp, gfpr,
                                 gfpr_split, is_proper, reassemble_split, simple_pair, with_assignments)
from fiedlerkron.tuples import NEG_ZERO
from strategies import integer_polynomial, random_fiedler_q, random_gfp, random_gfpr

P6 = integer_fixture(6, 2)
P3 = integer_fixture(3, 2)


def test_fiedler_golden():
    assert fiedler(P6, (0, 2, 4, 1, 3, 5)).equals(grid(P6, FIEDLER))


def test_gfp_golden():
    assert gfp(P6, (3, 4, 2, 0), (-1, -6, -5)).equals(grid(P6, GFP))


def test_fpr_golden():
    assert gfpr(fpr_spec(P6)).equals(grid(P6, FPR))


@pytest.mark.parametrize("name,golden", [("D1", D1), ("D2", D2), ("D3", D3)])
def test_dl_goldens(name, golden):
    target = grid(P3, golden)
    for spec in dl_specs(P3)[name]:
        assert gfpr(spec).equals(target)


def test_goldens_hold_for_n1_and_n3():
    for n in (1, 3):
        P = integer_fixture(6, n)
        assert fiedler(P, (0, 2, 4, 1, 3, 5)).equals(grid(P, FIEDLER))
        assert gfpr(fpr_spec(P)).equals(grid(P, FPR))


def test_companion_shapes():
    P = integer_fixture(4, 2)
    L = fiedler(P, (3, 2, 1, 0))
    # q = (k-1:-1:0) gives the first Frobenius companion form.
    b1, b0 = L.block(0, 0)
    assert np.array_equal(b1, P[4]) and np.array_equal(b0, P[3])
    assert np.array_equal(L.block(0, 3)[1], P[0])


def test_fiedler_rejects_non_permutation():
    with pytest.raises(ValueError):
        fiedler(P6, (0, 1, 1, 2, 3, 4))


def test_gfp_with_z_minus_k_is_fiedler():
    rng = np.random.default_rng(0)
    for k in range(2, 7):
        P = integer_polynomial(rng, 2, k)
        q = random_fiedler_q(rng, k)
        assert gfp(P, q, (-k,)).equals(fiedler(P, q))


def test_gfp_partition_check():
    with pytest.raises(ValueError):
        gfp(P6, (0, 1), (-6,))
    with pytest.raises(ValueError):
        gfp(P6, (0, 1, 2, 3, 4, 5), (-6, -1))


def test_proper_classification():
    assert is_proper(6, (3, 4, 2, 0), (-1, -6, -5))
    assert not is_proper(4, (3, 1), (NEG_ZERO, -2, -4))
    assert not is_proper(4, (4, 3, 2), (NEG_ZERO, -1))


def test_simple_pair_example():
    sp = simple_pair(P6, (3, 4, 2, 0), (-1, -6, -5))
    assert (sp.qhat, sp.h, sp.m) == ((1, 3, 4, 2, 0), 4, (-1,))


def test_simple_pair_trivial_cases():
    q = (2, 0, 1, 3, 4, 5)
    assert simple_pair(P6, q, (-6,)).qhat == q
    sp = simple_pair(P6, (0, 2, 1), (-6, -5, -4, -3))
    assert sp.m == () and sp.h == 2


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 7), st.integers(0, 10**6))
def test_simple_pair_reconstructs(k, seed):
    rng = np.random.default_rng(seed)
    P = integer_polynomial(rng, 2, k)
    q, z = random_gfp(rng, k)
    sp = simple_pair(P, q, z)
    Mm = trivial_product(P, sp.m)
    tail = tuple(range(-k, -sp.h))
    K = gfp(P, q, z)
    assert np.allclose(Mm @ trivial_product(P, tail), K.B1, atol=1e-12)
    assert np.allclose(-Mm @ trivial_product(P, sp.qhat), K.B0, atol=1e-12)
    assert sorted(sp.qhat) == list(range(sp.h + 1))


def test_simple_pair_rejects_nonproper():
    with pytest.raises(ValueError):
        simple_pair(integer_fixture(4, 2), (3, 1), (NEG_ZERO, -2, -4))


def test_fiedler_spec_matches_fiedler():
    q = (0, 2, 4, 1, 3, 5)
    assert gfpr(fiedler_spec(P6, q)).equals(fiedler(P6, q))


def test_gfpr_with_empty_outer_tuples_is_gfp():
    spec = GfprSpec(P6, 3, (1, 0, 3, 2), (-5, -6, -4))
    assert spec.outer_empty
    assert gfpr(spec).equals(gfp(P6, (1, 0, 3, 2), (-5, -6, -4)))


def test_spec_validation():
    with pytest.raises(ValueError):
        GfprSpec(P6, 6, tuple(range(7)), ())
    with pytest.raises(ValueError):
        GfprSpec(P6, 2, (0, 1, 2), (-6, -5, -4, -3), lq=(0, 0))
    with pytest.raises(ValueError):
        GfprSpec(P6, 2, (0, 1, 2), (-6, -5, -4, -3), rz=(-3,))
    with pytest.raises(ValueError):
        GfprSpec(P6, 2, (0, 1, 2), (-6, -5, -4, -3), rq=(0,), Y=(np.eye(3),))


def test_spec_parse_and_json_roundtrip():
    spec = GfprSpec.parse(P6, q="0", z="-6:-1", rz="-6:-2,-6:-3,-6:-4,-6:-5,-6")
    assert spec.h == 0 and spec.rz == fpr_spec(P6).rz
    back = GfprSpec.from_json(json.loads(json.dumps(spec.to_json())))
    assert gfpr(back).equals(gfpr(spec))
    Y = (np.array([[1.0, 2.0], [3.0, 4.0]]),)
    spec2 = GfprSpec(P6, 2, (0, 1, 2), (-6, -5, -4, -3), rq=(0,), Y=Y)
    back2 = GfprSpec.from_json(json.loads(json.dumps(spec2.to_json())))
    assert not back2.is_fpr and gfpr(back2).equals(gfpr(spec2))


def test_nontrivial_assignment_changes_pencil():
    spec = GfprSpec(P3, 2, (0, 1, 2), (-3,), rq=(0, 1, 0))
    other = with_assignments(spec, Y=tuple(np.eye(2) * (i + 2) for i in range(3)))
    assert not gfpr(other).equals(gfpr(spec))
    assert not other.is_fpr


def test_split_of_golden_gfp():
    s = gfpr_split(GfprSpec(P6, 4, (1, 3, 4, 2, 0), (-6, -5)))
    assert s.center == 1
    assert s.Q.grade == 5 and s.Zpoly.grade == 2


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 3), st.integers(2, 7), st.integers(0, 10**6), st.booleans())
def test_split_reassembles_and_block_structure(n, k, seed, assign):
    rng = np.random.default_rng(seed)
    P = integer_polynomial(rng, n, k)
    spec = random_gfpr(rng, P, assignments=assign)
    s = gfpr_split(spec)
    assert reassemble_split(s, k).equals(gfpr(spec))
    assert block_structure_check(spec)
    assert s.F.grid_rows == spec.h + 1 and s.G.grid_rows == k - spec.h


def test_gfpr_rejects_bad_h_in_parse():
    with pytest.raises(ValueError):
        GfprSpec.parse(P6, q="0,1", z="-6:-3")
