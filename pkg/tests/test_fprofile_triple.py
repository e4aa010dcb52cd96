import numpy as np
import pytest
from hypothesis import given, strategies as st

from momentricci.curvature import ricci_eigenvalues
from momentricci.submersion.fprofile import HALF_PI, InfeasibleProfileError, build_f_profile, verify_f_profile
from momentricci.submersion.oneill import NonFreeError
from momentricci.submersion.triple import (
    CASE1,
    CASE2,
    COORDS,
    TripleSphereMetric,
    AxisError,
    degenerate_directions,
    factor_chart,
    factor_ricci,
    flat_fields,
    horizontality_check,
    min_pairing_on_subspace,
    sample_generic_points,
    stratum_point,
    swap_defect,
    swap_map,
    unit_vector,
    vertical_frame,
    vertical_rank,
)
from momentricci.toric import all_strata, stratum_stabilizer

eps_st = st.floats(0.01, 0.35)


@pytest.fixture(scope="module")
def m():
    return TripleSphereMetric.from_eps(0.1)


# -- f profile -----------------------------------------------------------------------


@given(eps_st)
def test_f_profile_invariants(eps):
    prof = build_f_profile(eps)
    rep = verify_f_profile(prof, num=4001)
    assert rep["pass"] and rep["c2_gap"] <= 1e-9
    assert prof(eps / 2) == 1.0
    assert prof(HALF_PI) == pytest.approx(0.0, abs=1e-15)
    assert prof(HALF_PI, 1) == pytest.approx(-1.0)
    mid = prof(HALF_PI / 2)
    assert np.cos(HALF_PI - eps) < mid < 1 and prof(HALF_PI / 2, 1) < 0


@given(eps_st)
def test_f_profile_c2_by_finite_differences(eps):
    prof = build_f_profile(eps)
    # one-sided limits agree: the gap shrinks with h instead of staying finite
    for t0 in (eps, HALF_PI - eps):
        for order in (0, 1, 2):
            gaps = [abs(prof(t0 + h, order) - prof(t0 - h, order)) for h in (1e-6, 1e-8)]
            assert gaps[1] <= 1e-5 and gaps[1] <= 0.05 * gaps[0] + 1e-12


def test_f_profile_preconditions():
    with pytest.raises(InfeasibleProfileError):
        build_f_profile(0.0)
    with pytest.raises(InfeasibleProfileError):
        build_f_profile(np.pi / 8)


# -- factor Ricci --------------------------------------------------------------------


def _sin(t):
    return np.sin(t), np.cos(t), -np.sin(t)


def _cos(t):
    return np.cos(t), -np.sin(t), -np.cos(t)


@given(st.floats(0.05, HALF_PI - 0.05))
def test_round_s3_factor(t):
    assert np.allclose(factor_ricci(_sin, _cos, t), 2.0)


def test_flat_piece_pattern():
    prof = build_f_profile(0.1)
    assert np.allclose(factor_ricci(prof, _sin, 0.05), [1.0, 0.0, 1.0])


@pytest.mark.parametrize("t", [0.3, 0.8, 1.2])
def test_factor_ricci_against_oracle(m, t):
    def a(s):
        return m.factor_jets(1, s)[0]

    def b(s):
        return m.factor_jets(1, s)[1]

    chart = factor_chart(a, b, 0.2, 1.35)
    ev = ricci_eigenvalues(chart, [t, 0.0, 0.0], step=3e-4, extrapolate=True)
    assert np.allclose(ev, np.sort(factor_ricci(a, b, t)), atol=1e-5)


def test_factor_ricci_axis_error():
    with pytest.raises(AxisError):
        factor_ricci(_sin, _cos, 0.0)


# -- the product metric --------------------------------------------------------------


def test_unit_ricci_matches_oracle(m):
    pts = sample_generic_points(4, np.random.default_rng(7), margin=0.15)
    ev = ricci_eigenvalues(m.chart(), pts, step=3e-4, extrapolate=True)
    assert np.allclose(ev, np.sort(m.unit_ricci(pts), axis=-1), atol=1e-5)


@given(st.lists(st.floats(0.001, HALF_PI - 0.001), min_size=3, max_size=3))
def test_ricci_nonnegative_and_zero_set(m, ts):
    x = np.r_[ts, np.zeros(6)]
    u = m.unit_ricci(x)
    assert u.min() >= -1e-10
    zeros = {COORDS[i] for i in np.flatnonzero(np.abs(u) <= 1e-10)}
    assert zeros == set(flat_fields(m, x))


def test_case_examples(m):
    e = m.eps
    x1 = np.r_[0.7, e / 2, e / 2, np.zeros(6)]
    fams = degenerate_directions(m, x1)
    assert [f.case for f in fams] == [CASE1] and fams[0].complete
    assert m.ricci_form(x1, unit_vector("phi2")) == pytest.approx(0.0, abs=1e-10)
    x2 = np.r_[HALF_PI - e / 2, HALF_PI - e / 2, 0.7, np.zeros(6)]
    assert [f.case for f in degenerate_directions(m, x2)] == [CASE2]
    x3 = np.r_[0.7, 0.8, 0.9, np.zeros(6)]
    assert degenerate_directions(m, x3) == []
    assert m.unit_ricci(x3).min() > 0


def test_flat_directions_never_horizontal(m):
    e = m.eps
    for x in (np.r_[0.7, e / 2, e / 2, np.zeros(6)], np.r_[HALF_PI - e / 2, HALF_PI - e / 2, 0.7, np.zeros(6)]):
        for fam in degenerate_directions(m, x):
            assert min_pairing_on_subspace(m, x, fam.basis()) > 1e-3
            for v in fam.basis():
                assert not horizontality_check(m, x, v)[0]


def test_horizontality_trivial_cases(m):
    x = np.r_[0.4, 0.9, 1.1, 0.3 * np.arange(6)]
    assert horizontality_check(m, x, unit_vector("t1"))[0]
    K = m.killing_rows()
    for j, row in enumerate(K):
        ok, p = horizontality_check(m, x, row)
        assert not ok
        assert np.allclose(p, m.gram(x)[:, j])
    with pytest.raises(ValueError):
        horizontality_check(m, x, np.zeros(9))


def test_vertical_frame_orthonormal(m):
    x = np.r_[0.4, 0.9, 1.1, np.zeros(6)]
    fr = vertical_frame(m, x)
    G = m.metric(x)
    assert fr.rank == 3
    assert np.allclose(fr.orthonormal @ G @ fr.orthonormal.T, np.eye(3), atol=1e-12)


def test_vertical_rank_matches_stabilizers(m):
    """Orbit dimension is 3 minus the circle rank of the stabilizer on every stratum.

    Finite stabilizers (F1, F2) do not lower the rank; only circles do.
    """
    for s in all_strata(3):
        G = stratum_stabilizer(m.action, s)
        assert vertical_rank(m, stratum_point(s)) == 3 - G.free_rank, str(s)


@given(st.lists(st.floats(0.01, HALF_PI - 0.01), min_size=3, max_size=3))
def test_vertical_rank_generic(m, ts):
    assert vertical_rank(m, np.r_[ts, np.zeros(6)]) == 3


@given(st.lists(st.floats(0.0, HALF_PI), min_size=3, max_size=3), st.lists(st.floats(0, 6.28), min_size=6, max_size=6))
def test_swap_isometry(m, ts, angs):
    x = np.r_[ts, angs]
    assert swap_defect(m, x) <= 1e-12
    assert np.allclose(swap_map(swap_map(x)), x)


def test_swap_interchanges_case_regions(m):
    e = m.eps
    x1 = np.r_[0.7, e / 2, e / 2, np.zeros(6)]
    assert [f.case for f in degenerate_directions(m, swap_map(x1))] == [CASE2]


def test_check_free(m):
    with pytest.raises(NonFreeError):
        m.check_free(np.r_[0.0, 0.5, 0.5, np.zeros(6)])
    m.check_free(np.r_[0.3, 0.5, 0.5, np.zeros(6)])
