import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from momentricci.toric import (
    FiniteAbelianGroup,
    TorusWeightSystem,
    VanishingStratum,
    all_strata,
    brute_force_stabilizer,
    cube,
    cut_face,
    det,
    example2_action,
    example3_action,
    format_element,
    format_group,
    freeness_scan,
    group_from_elements,
    matmul,
    moment_angle_dims,
    parse_group,
    polytope_q1,
    polytope_q2,
    polytope_q3,
    rational_rank,
    smith_normal_form,
    stratum_stabilizer,
    torus_kernel,
)

small_ints = st.integers(-4, 4)


def int_matrices(max_rows=4, max_cols=3):
    return st.integers(1, max_rows).flatmap(
        lambda m: st.integers(1, max_cols).flatmap(
            lambda n: st.lists(st.lists(small_ints, min_size=n, max_size=n), min_size=m, max_size=m)
        )
    )


# -- Smith normal form ----------------------------------------------------------


@given(int_matrices())
def test_snf_reconstructs(M):
    s = smith_normal_form(M)
    assert matmul(matmul(s.U, M), s.V) == s.D


@given(int_matrices())
def test_snf_unimodular_and_divisible(M):
    s = smith_normal_form(M)
    assert abs(det(s.U)) == 1 and abs(det(s.V)) == 1
    d = [abs(x) for x in s.diagonal if x != 0]
    assert all(b % a == 0 for a, b in zip(d, d[1:]))
    assert all(x >= 0 for x in s.diagonal)
    off = [s.D[i][j] for i in range(len(s.D)) for j in range(len(s.D[0])) if i != j]
    assert not any(off)


@given(int_matrices())
def test_snf_rank_matches_numpy(M):
    assert smith_normal_form(M).rank == rational_rank(M) == np.linalg.matrix_rank(np.array(M, dtype=float))


def test_snf_known():
    # diag(2, 6) up to units
    assert smith_normal_form([[2, 4], [6, 8]]).diagonal == [2, 4]
    assert smith_normal_form([[2, 0], [0, 3]]).diagonal == [1, 6]


def test_snf_exact_big_integers():
    big = 10**30
    s = smith_normal_form([[big, 0], [0, big * 3]])
    assert s.diagonal == [big, 3 * big]


# -- kernels versus enumeration ------------------------------------------------------


def _kernel_by_enumeration(A, N):
    k = len(A[0])
    out = set()
    for a in itertools.product(range(N), repeat=k):
        if all(sum(w * x for w, x in zip(row, a)) % N == 0 for row in A):
            out.add(tuple(Fraction(x, N) for x in a))
    return out


@given(st.lists(st.lists(small_ints, min_size=2, max_size=2), min_size=2, max_size=3))
def test_torus_kernel_finite_matches_enumeration(A):
    G = torus_kernel(A)
    if not G.is_finite:
        assert rational_rank(A) < 2
        return
    # the exponent of G divides its order, so N = order sees every element
    found = _kernel_by_enumeration(A, G.order)
    assert len(found) == G.order
    assert set(G.elements) == found
    assert group_from_elements(found) == G


def test_torus_kernel_free_part():
    G = torus_kernel([[1, 1, 0]])
    assert G.free_rank == 2 and G.elements is None


@given(st.lists(st.sampled_from([2, 3, 4, 6, 12]), max_size=3), st.integers(0, 2))
def test_group_format_roundtrip(fs, r):
    fs = sorted(fs)
    # force a divisibility chain
    chain = []
    for f in fs:
        chain.append(f if not chain else chain[-1] * f)
    G = FiniteAbelianGroup(r, tuple(chain))
    assert parse_group(format_group(G)) == G


def test_trivial_group_is_one():
    assert format_group(FiniteAbelianGroup()) == "1"
    assert format_group(FiniteAbelianGroup(1, (2, 6))) == "Z_2 × Z_6 × T^1"


def test_format_element():
    assert format_element((Fraction(0), Fraction(1, 2), Fraction(1, 3))) == "(1, -1, e^(2πi·1/3))"


# -- strata --------------------------------------------------------------------------


@given(st.integers(1, 4))
def test_all_strata_count(s):
    assert len(all_strata(s)) == 3**s


def test_stratum_describe():
    assert VanishingStratum.parse("uug").describe() == "u1=u2=0"
    assert VanishingStratum.parse("ggg").describe() == "generic"


def test_lemma1_single_stratum():
    scan = freeness_scan(example2_action())
    assert [str(s) for s, _ in scan] == ["vvv"]
    G = scan[0][1]
    assert format_group(G) == "Z_3"
    third = Fraction(1, 3)
    assert set(G.elements) == {(third * j, third * j, third * j) for j in range(3)}


def test_lemma2_strata_and_elements():
    scan = {str(s): G for s, G in freeness_scan(example3_action())}
    assert sorted(scan) == ["gvv", "uug", "uuu", "uuv", "uvv", "vvv"]
    h = Fraction(1, 2)
    for s, G in scan.items():
        assert format_group(G) == "Z_2"
        elem = (0, h, h) if s.endswith("vv") else (h, h, 0)
        assert set(G.elements) == {(0, 0, 0), elem}


@pytest.mark.parametrize("action", [example2_action(), example3_action()])
def test_brute_force_agrees_on_every_stratum(action):
    for s in all_strata(action.n_spheres):
        G = stratum_stabilizer(action, s)
        B = brute_force_stabilizer(action, s, 6)
        if G.free_rank:
            assert B is None
        else:
            assert B == G and set(B.elements) == set(G.elements)


def test_weight_system_validation():
    with pytest.raises(ValueError):
        TorusWeightSystem(((1, 0), (0, 1), (1, 1)))
    with pytest.raises(ValueError):
        TorusWeightSystem.from_rows({"u1": (1,), "v2": (1,)})
    with pytest.raises(ValueError):
        brute_force_stabilizer(example2_action(), VanishingStratum.parse("ggg"), 1)
    with pytest.raises(ValueError):
        stratum_stabilizer(example2_action(), VanishingStratum.parse("gg"))


# -- polytopes ---------------------------------------------------------------------


def test_moment_angle_dims():
    assert moment_angle_dims(cube()) == (9, 3)
    assert moment_angle_dims(polytope_q1())[1] == 11
    assert moment_angle_dims(polytope_q2())[1] == 4
    assert moment_angle_dims(polytope_q3()) == (11, 5)


@given(st.lists(st.integers(0, 7), min_size=1, max_size=4, unique=True))
def test_vertex_cuts_stay_simple(idx):
    P = cube()
    verts = sorted(cube().vertices, key=sorted)
    for i in idx:
        P = cut_face(P, verts[i])
    assert P.is_simple()
    # each vertex cut adds a facet and two vertices
    assert len(P.vertices) == 8 + 2 * len(idx)
    assert moment_angle_dims(P) == (P.m + 3, P.m - 3)


def test_cut_face_rejects_non_faces():
    with pytest.raises(ValueError):
        cut_face(cube(), ("x0", "x1"))
