import numpy as np
import pytest
from hypothesis import given, strategies as st

from momentricci.submersion.fprofile import HALF_PI
from momentricci.submersion.oneill import (
    NonFreeError,
    NotHorizontalError,
    oneill_quotient_ricci,
    oracle_quotient_ricci,
    quotient_chart,
    sample_from_forms,
    sectional_curvature,
    submersion_forms,
)
from momentricci.submersion.triple import (
    TripleSphereMetric,
    coordinate_index,
    oneill_scan,
    unit_vector,
)
from momentricci.curvature import MetricChart, ricci_at


@pytest.fixture(scope="module")
def m():
    return TripleSphereMetric.from_eps(0.1)


def _point(ts, angs=None):
    return np.r_[ts, np.zeros(6) if angs is None else angs]


def test_ricci_from_jets_matches_closed_form(m):
    x = _point([0.4, 0.9, 1.2])
    forms = submersion_forms(*m.jets(x), m.killing_rows())
    assert np.allclose(forms.ricci, m.ricci(x), atol=1e-12)


def test_sectional_curvature_round_block(m):
    """K(d_t1, d_phi1) = 1: factor 1 has a = cos t1."""
    x = _point([0.5, 0.8, 1.0])
    forms = submersion_forms(*m.jets(x), m.killing_rows())
    assert sectional_curvature(forms, unit_vector("t1"), unit_vector("phi1")) == pytest.approx(1.0, abs=1e-12)


def test_totally_geodesic_fibers():
    """S^2 x flat T^2, fibers the torus: T = 0, N = 0, A = 0, total = Ric."""
    th = 0.9
    g = np.diag([1.0, np.sin(th) ** 2, 1.0, 1.0])
    dg = np.zeros((4, 4, 4))
    dg[0, 1, 1] = 2 * np.sin(th) * np.cos(th)
    ddg = np.zeros((4, 4, 4, 4))
    ddg[0, 0, 1, 1] = 2 * np.cos(2 * th)
    K = np.array([[0, 0, 1.0, 0], [0, 0, 0, 1.0]])
    forms = submersion_forms(g, dg, ddg, K)
    assert np.allclose(forms.tt, 0) and np.allclose(forms.dn, 0) and np.allclose(forms.aa, 0)
    X = np.array([1.0, 0.5, 0, 0])
    s = sample_from_forms(forms, [th, 0, 0, 0], X)
    assert s.total == pytest.approx(s.ricci)
    assert s.total == pytest.approx(X @ g @ X)  # Ric = g on the unit sphere


def test_warped_circle_fibers():
    """dx^2 + e^{2x} da^2 over the line: quotient is flat, so T exactly cancels Ric."""
    x0 = 0.3
    E = np.exp(2 * x0)
    g = np.diag([1.0, E])
    dg = np.zeros((2, 2, 2))
    dg[0, 1, 1] = 2 * E
    ddg = np.zeros((2, 2, 2, 2))
    ddg[0, 0, 1, 1] = 4 * E
    forms = submersion_forms(g, dg, ddg, np.array([[0.0, 1.0]]))
    s = sample_from_forms(forms, [x0, 0.0], np.array([1.0, 0.0]))
    assert s.ricci == pytest.approx(-1.0)
    assert s.tt == pytest.approx(1.0)
    assert s.dn == pytest.approx(0.0, abs=1e-14)
    assert s.total == pytest.approx(0.0, abs=1e-14)
    assert np.allclose(forms.N_frame, [-1.0, 0.0])
    assert np.allclose(forms.N_grad, forms.N_frame)


@given(st.lists(st.floats(0.05, HALF_PI - 0.05), min_size=3, max_size=3), st.integers(0, 2**31))
def test_four_terms_identities(m, ts, seed):
    x = _point(ts)
    forms = submersion_forms(*m.jets(x), m.killing_rows())
    c = np.random.default_rng(seed).standard_normal(forms.horizontal.shape[1])
    X = forms.horizontal @ c
    s = sample_from_forms(forms, x, X)
    scale = max(1.0, abs(s.total))
    assert abs(s.total - s.parts_sum) <= 1e-9 * scale
    assert abs(s.total - s.gauss) <= 1e-9 * scale
    assert s.aa2 >= 0 and s.tt >= 0
    assert s.total >= s.lower_bound - 1e-12
    assert np.allclose(forms.N_frame, forms.N_grad, atol=1e-10)


def test_matches_quotient_chart_oracle(m):
    """Four-term value against finite differences of the orbit-space metric."""
    names = ("t1", "t2", "t3", "phi1", "phi2", "psi3")
    C = np.zeros((9, 6))
    for j, n in enumerate(names):
        C[coordinate_index(n), j] = 1.0
    K = m.killing_rows()
    lo = [0.05] * 3 + [-np.inf] * 3
    hi = [HALF_PI - 0.05] * 3 + [np.inf] * 3
    chart = quotient_chart(m.metric, K, C, lo, hi)
    rng = np.random.default_rng(11)
    for _ in range(3):
        y = np.r_[rng.uniform(0.25, HALF_PI - 0.25, 3), rng.uniform(0, 6, 3)]
        forms = submersion_forms(*m.jets(C @ y), K)
        for Y in (np.eye(6)[0], np.eye(6)[4], rng.standard_normal(6)):
            oracle, four = oracle_quotient_ricci(chart, y, C, forms, Y, step=3e-4)
            assert oracle == pytest.approx(four, abs=1e-5 * max(1.0, abs(four)))


def test_generic_total_positive_for_dt1(m):
    rng = np.random.default_rng(5)
    for _ in range(20):
        x = _point(rng.uniform(0.05, HALF_PI - 0.05, 3), rng.uniform(0, 6.28, 6))
        assert oneill_quotient_ricci(m, x, unit_vector("t1")).total > 0


def test_errors(m):
    x = _point([0.4, 0.9, 1.2])
    with pytest.raises(NotHorizontalError):
        oneill_quotient_ricci(m, x, unit_vector("phi1"))
    with pytest.raises(NonFreeError):
        oneill_quotient_ricci(m, _point([0.0, 0.9, 1.2]), unit_vector("t2"))
    with pytest.raises(ValueError):
        oneill_quotient_ricci(m, x, np.zeros(9))


def test_scan_is_seeded(m):
    a = oneill_scan(m, 20, seed=3)
    b = oneill_scan(m, 20, seed=3)
    assert a.rows() == b.rows()
    cert = a.certificate("t", {})
    assert cert.passed and cert.checks["sum_identity"]
