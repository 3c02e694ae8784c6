import math
import warnings
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from boundfield.radial import (ConvergenceError, DivergenceError, MultipoleSeries, PolyExp, SampledProfile,
                               hydrogen_radial, integrate_lower, integrate_upper, quad_oracle, read_radial_csv,
                               vector_potential_profile)
from boundfield.field import potential_series
from boundfield.multipole import current_series
from boundfield.states import QuantumState

lams = st.sampled_from([Fraction(1, 3), Fraction(2, 3), Fraction(1), Fraction(1, 2), Fraction(2)])
terms = st.lists(st.tuples(st.fractions(min_value=-5, max_value=5, max_denominator=7),
                           st.integers(0, 6), lams), min_size=1, max_size=4)


def test_polyexp_canonical_form():
    a = PolyExp([(1, 2, "1/3"), (2, 2, Fraction(1, 3)), (0, 5, 1)])
    assert a.terms == {(2, Fraction(1, 3)): Fraction(3)}
    assert a == PolyExp([(3, 2, Fraction(1, 3))])
    assert not PolyExp.zero()
    with pytest.raises(ValueError):
        PolyExp([(1, 0.5, 0)])
    with pytest.raises(ValueError):
        PolyExp([(1, 0, -1)])


def test_polyexp_json_round_trip():
    a = PolyExp([(Fraction(-2, 7), 3, Fraction(2, 3)), (Fraction(1, 9), -1, 0)])
    assert PolyExp.from_json(a.to_json()) == a


@given(terms, terms)
def test_polyexp_algebra_matches_pointwise(t1, t2):
    a, b = PolyExp(t1), PolyExp(t2)
    r = np.array([0.3, 1.7, 6.0])
    np.testing.assert_allclose((a + b)(r), a(r) + b(r), atol=1e-9)
    np.testing.assert_allclose((a * b)(r), a(r) * b(r), rtol=1e-9, atol=1e-9)
    np.testing.assert_allclose((a - b)(r), a(r) - b(r), atol=1e-9)
    np.testing.assert_allclose(a.shift(2)(r), a(r) * r ** 2, rtol=1e-10, atol=1e-12)


@given(terms)
def test_integrate_lower_differentiates_back(t):
    f = PolyExp(t)
    F = integrate_lower(f)
    assert F.derivative() == f
    # constant and exponential parts cancel at the origin to rounding
    scale = sum(abs(float(c)) for c, _, _ in F)
    assert F(0.0) == pytest.approx(0.0, abs=1e-15 * scale)


@given(terms)
def test_integrate_upper_differentiates_back(t):
    f = PolyExp(t)
    G = integrate_upper(f)
    assert G.derivative() == -f
    assert abs(G(400.0)) < 1e-40


def test_integration_errors():
    with pytest.raises(ConvergenceError):
        integrate_lower(PolyExp([(1, -1, 1)]))
    with pytest.raises(DivergenceError):
        integrate_upper(PolyExp([(1, 0, 0)]))
    with pytest.raises(DivergenceError):
        integrate_upper(PolyExp([(1, -1, 0)]))
    with pytest.raises(DivergenceError):
        integrate_upper(PolyExp([(1, -2, 1)]))
    assert integrate_upper(PolyExp([(1, -3, 0)])) == PolyExp([(Fraction(1, 2), -2, 0)])


@given(terms, st.floats(0.05, 20))
def test_integrals_against_quadrature(t, r):
    f = PolyExp(t)
    lo = quad_oracle(f, 0.0, r, rtol=1e-12, atol=1e-14)
    hi = quad_oracle(f, r, math.inf, rtol=1e-12, atol=1e-14)
    scale = quad_oracle(lambda x: np.abs(f(x)), 0.0, math.inf, rtol=1e-10).value
    assert integrate_lower(f)(r) == pytest.approx(lo.value, abs=1e-10 * scale)
    assert integrate_upper(f)(r) == pytest.approx(hi.value, abs=1e-10 * scale)


def test_taylor_branch_is_continuous():
    # heavy cancellation near the origin: r^-3 e^{-r} times its Taylor remainder
    f = PolyExp([(1, -3, 1), (-1, -3, 0), (1, -2, 0), (Fraction(-1, 2), -1, 0)])
    r = np.array([1e-6, 1e-3, 0.1, 1.0, 5.0, 11.9, 12.1, 30.0])
    mpmath.mp.dps = 60
    ref = np.array([float((mpmath.exp(-mpmath.mpf(x)) - 1 + x - mpmath.mpf(x) ** 2 / 2) / mpmath.mpf(x) ** 3)
                    for x in r])
    np.testing.assert_allclose(f(r), ref, rtol=1e-12)
    assert f.scalar(0.1) == pytest.approx(float(ref[2]), rel=1e-13)


@pytest.mark.parametrize("n", range(1, 6))
def test_hydrogen_normalization_and_orthogonality(n):
    for l in range(n):
        R = hydrogen_radial(n, l)
        norm = integrate_upper(R.squared().shift(2))
        assert sum(c for c, k, _ in norm if k == 0) == 1
        if n > l + 1:
            other = hydrogen_radial(n - 1, l)
            prod = (R.as_polyexp() * other.as_polyexp()).shift(2)
            assert quad_oracle(prod, 0, math.inf, rtol=1e-12, atol=1e-14).value == pytest.approx(0, abs=1e-12)


def test_hydrogen_known_forms():
    assert hydrogen_radial(1, 0).squared() == PolyExp([(4, 0, 2)])
    R32 = hydrogen_radial(3, 2)
    # R_32 = 4/(81 sqrt 30) r^2 e^{-r/3}
    assert R32(1.0) == pytest.approx(4 / (81 * math.sqrt(30)) * math.exp(-1 / 3), rel=1e-14)
    with pytest.raises(ValueError):
        hydrogen_radial(2, 2)


@pytest.mark.parametrize("state", [QuantumState.ls(2, 1, n=3), QuantumState.jj(2, "3/2", "3/2", n=3),
                                   QuantumState.jj(3, "7/2", "-1/2", n=5)])
def test_potential_solves_radial_equation(state):
    # A'' + 2A'/r - L(L+1) A/r^2 = -4 j_L, exactly
    cur = current_series(state, hydrogen_radial(state.n, state.l))
    pot = potential_series(cur)
    for L, A in pot:
        lhs = A.derivative().derivative() + A.derivative().shift(-1) * 2 - A.shift(-2) * (L * (L + 1))
        assert lhs == cur[L] * -4


def test_potential_regular_and_decaying():
    cur = current_series(QuantumState.ls(2, 2, n=3), hydrogen_radial(3, 2))
    for L, A in potential_series(cur):
        assert abs(A(1e-4)) < 1e-6
        # outside the source only r^-(L+1) survives
        tail = {k: c for (k, lam), c in A.terms.items() if lam == 0}
        assert set(tail) == {-(L + 1)}


def test_vector_potential_rejects_even_order():
    with pytest.raises(ValueError):
        vector_potential_profile(PolyExp([(1, 2, 1)]), 2)
    assert not vector_potential_profile(PolyExp.zero(), 3)


# -- quadrature oracle ------------------------------------------------------------


def test_quad_oracle_known_integrals():
    assert quad_oracle(np.exp, 0, 1).value == pytest.approx(math.e - 1, rel=1e-13)
    res = quad_oracle(lambda x: np.exp(-x) * x ** 3, 0, math.inf)
    assert res.converged and res.value == pytest.approx(6, rel=1e-12)
    assert float(res) == res.value


def test_quad_oracle_warns_when_budget_exhausted():
    with pytest.warns(RuntimeWarning):
        res = quad_oracle(lambda x: np.sin(1 / np.maximum(x, 1e-300)), 0, 1, rtol=1e-14, max_intervals=10)
    assert not res.converged


# -- sampled profiles ------------------------------------------------------------


def test_sampled_profile_validation():
    with pytest.raises(ValueError):
        SampledProfile(np.array([0.0, 1, 2, 3]), np.ones(4))
    with pytest.raises(ValueError):
        SampledProfile(np.array([1.0, 3, 2, 4]), np.ones(4))
    with pytest.raises(ValueError):
        SampledProfile(np.array([1.0, 2]), np.ones(2))
    with pytest.raises(ValueError):
        SampledProfile(np.linspace(1, 2, 5), np.array([1, 2, np.nan, 3, 4]))


def test_sampled_profile_spline_and_cumulative():
    r = np.geomspace(1e-3, 40, 2000)
    f = SampledProfile(r, r ** 2 * np.exp(-r))
    np.testing.assert_allclose(f(np.array([0.5, 2.0])), [0.25 * math.exp(-0.5), 4 * math.exp(-2)], rtol=1e-8)
    assert f(100.0) == 0.0 and f(1e-4) == 0.0
    vals, err = f.cumulative()
    assert vals[-1] == pytest.approx(2.0, abs=1e-7)
    assert err < 1e-6
    assert f.truncation_estimate() == pytest.approx(1e-9 / 3, rel=1e-2)


def test_read_radial_csv(tmp_path):
    path = tmp_path / "R.csv"
    r = np.geomspace(0.01, 60, 3000)
    R = hydrogen_radial(2, 1)
    path.write_text("r,R\n" + "\n".join(f"{float(a)!r},{float(b)!r}" for a, b in zip(r, R(r))))
    prof = read_radial_csv(path)
    np.testing.assert_allclose(prof(r[5:-5]), R(r[5:-5]), rtol=1e-14)
    (tmp_path / "bad.csv").write_text("r,R\n")
    with pytest.raises(ValueError):
        read_radial_csv(tmp_path / "bad.csv")


def test_multipole_series_validation():
    with pytest.raises(ValueError):
        MultipoleSeries({2: PolyExp([(1, 0, 1)])})
    with pytest.raises(ValueError):
        MultipoleSeries({}, "bogus")
    s = MultipoleSeries({3: PolyExp([(1, 0, 1)]), 1: PolyExp([(1, 0, 1)])})
    assert s.orders == [1, 3] and s.is_analytic
