import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
import scipy.special as sp
from hypothesis import given
from hypothesis import strategies as st
from sympy import Rational as SR
from sympy.physics.quantum.cg import CG

from boundfield.angular import (AngularIndex, SqrtRational, assoc_legendre, clebsch_gordan, doubled, legendre,
                                parse_half_integer, product_expand, spherical_harmonic)


# -- SqrtRational ------------------------------------------------------------------


def test_sqrt_rational_basics():
    x = SqrtRational.sqrt(Fraction(2, 3))
    assert float(x) == pytest.approx(math.sqrt(2 / 3), rel=1e-15)
    assert not x.is_rational
    assert (x * x).to_fraction() == Fraction(2, 3)
    assert (-x).sign == -1
    assert SqrtRational.from_rational(Fraction(-3, 4)) == SqrtRational(-1, Fraction(9, 16))
    assert str(SqrtRational.from_rational(Fraction(-3, 4))) == "-3/4"
    assert str(x) == "sqrt(2/3)"
    with pytest.raises(ValueError):
        x.to_fraction()


def test_sqrt_rational_zero_is_canonical():
    z = SqrtRational.sqrt(0)
    assert z.is_zero and z.sign == 0
    assert str(z) == "0"


@given(st.fractions(min_value=-50, max_value=50), st.fractions(min_value=-50, max_value=50))
def test_sqrt_rational_product_of_rationals(a, b):
    x, y = SqrtRational.from_rational(a), SqrtRational.from_rational(b)
    assert (x * y).to_fraction() == a * b


@pytest.mark.parametrize("text, want", [("3/2", Fraction(3, 2)), ("1.5", Fraction(3, 2)), ("-0.5", Fraction(-1, 2)),
                                        (2, Fraction(2)), (Fraction(7, 2), Fraction(7, 2))])
def test_parse_half_integer(text, want):
    assert parse_half_integer(text) == want


@pytest.mark.parametrize("bad", ["1/3", "0.25", 0.3])
def test_parse_half_integer_rejects(bad):
    with pytest.raises(ValueError):
        parse_half_integer(bad)


def test_angular_index():
    idx = AngularIndex.of("3/2", "-1/2")
    assert (idx.two_l, idx.two_m) == (3, -1)
    assert idx.l == Fraction(3, 2)
    with pytest.raises(ValueError):
        AngularIndex.of(1, 2)
    with pytest.raises(ValueError):
        AngularIndex(2, 1)
    assert doubled("7/2") == 7


# -- Legendre ---------------------------------------------------------------------------


def test_legendre_known_values():
    assert assoc_legendre(3, 1, 0.0) == pytest.approx(-1.5, abs=1e-15)
    assert legendre(3, 0.5) == pytest.approx(-0.4375, abs=1e-15)
    t = np.linspace(0, math.pi, 7)
    np.testing.assert_allclose(assoc_legendre(1, 1, np.cos(t)), np.sin(t), atol=1e-15)


@pytest.mark.parametrize("L", range(0, 10))
def test_assoc_legendre_matches_scipy(L):
    x = np.linspace(-1, 1, 101)
    for M in range(-L, L + 1):
        # scipy includes the Condon-Shortley phase
        ref = (-1) ** M * sp.lpmv(M, L, x)
        np.testing.assert_allclose(assoc_legendre(L, M, x), ref, rtol=1e-12, atol=1e-12 * max(1, abs(ref).max()))


def test_assoc_legendre_domain_errors():
    with pytest.raises(ValueError):
        assoc_legendre(2, 3, 0.1)
    with pytest.raises(ValueError):
        assoc_legendre(2, 1, 1.5)
    with pytest.raises(ValueError):
        assoc_legendre(-1, 0, 0.0)


@pytest.mark.parametrize("l", range(0, 6))
def test_spherical_harmonic_matches_scipy(l):
    t = np.linspace(0.01, math.pi - 0.01, 23)
    phi = 0.83
    for m in range(-l, l + 1):
        ref = sp.sph_harm_y(l, m, t, phi)
        np.testing.assert_allclose(spherical_harmonic(l, m, t, phi), ref, rtol=1e-12, atol=1e-13)


# -- Clebsch-Gordan ------------------------------------------------------------------


def test_cg_known_value():
    assert clebsch_gordan(1, 0, 1, 0, 2, 0) == SqrtRational.sqrt(Fraction(2, 3))
    assert clebsch_gordan(1, 0, 1, 0, 1, 0).is_zero


half_integer_sets = [(j1, j2) for j1, j2 in itertools.product(range(0, 6), repeat=2)]


@pytest.mark.parametrize("tj1, tj2", half_integer_sets)
def test_cg_matches_sympy(tj1, tj2):
    for tJ in range(abs(tj1 - tj2), tj1 + tj2 + 1, 2):
        for tm1 in range(-tj1, tj1 + 1, 2):
            for tm2 in range(-tj2, tj2 + 1, 2):
                tM = tm1 + tm2
                if abs(tM) > tJ:
                    continue
                ours = clebsch_gordan(*(Fraction(v, 2) for v in (tj1, tm1, tj2, tm2, tJ, tM)))
                ref = CG(*(SR(v, 2) for v in (tj1, tm1, tj2, tm2)), SR(tJ, 2), SR(tM, 2)).doit()
                assert float(ours) == pytest.approx(float(ref), abs=1e-14)
                # squares compare exactly as rationals
                assert (ours * ours).to_fraction() == Fraction(str(ref ** 2))


def _jsq_oracle(tj1, tj2, tM):
    """Eigenvectors of J^2 in the M subspace of j1 x j2 (numpy diagonalization)."""
    j1, j2 = tj1 / 2, tj2 / 2
    basis = [(m1, tM - m1) for m1 in range(-tj1, tj1 + 1, 2) if abs(tM - m1) <= tj2]
    n = len(basis)
    J2 = np.zeros((n, n))
    for a, (m1, m2) in enumerate(basis):
        m1h, m2h = m1 / 2, m2 / 2
        J2[a, a] = j1 * (j1 + 1) + j2 * (j2 + 1) + 2 * m1h * m2h
        for b, (n1, n2) in enumerate(basis):
            # J1+ J2- and J1- J2+ couple neighbouring product states
            if n1 == m1 + 2 and n2 == m2 - 2:
                v = math.sqrt(j1 * (j1 + 1) - m1h * (m1h + 1)) * math.sqrt(j2 * (j2 + 1) - m2h * (m2h - 1))
                J2[b, a] += v
                J2[a, b] += v
    w, vecs = np.linalg.eigh(J2)
    return basis, w, vecs


@pytest.mark.parametrize("tj1, tj2", [(2, 2), (4, 2), (3, 1), (5, 4), (6, 6), (7, 3)])
def test_cg_squares_match_j2_diagonalization(tj1, tj2):
    for tM in range(-(tj1 + tj2), tj1 + tj2 + 1, 2):
        basis, w, vecs = _jsq_oracle(tj1, tj2, tM)
        for k in range(len(w)):
            J = (-1 + math.sqrt(1 + 4 * w[k])) / 2
            tJ = round(2 * J)
            for a, (m1, m2) in enumerate(basis):
                c = clebsch_gordan(*(Fraction(v, 2) for v in (tj1, m1, tj2, m2, tJ, tM)))
                assert float(c) ** 2 == pytest.approx(vecs[a, k] ** 2, abs=1e-12)


@given(st.integers(0, 4), st.integers(0, 4), st.data())
def test_cg_unitarity(l1, l2, data):
    # sum over (L, M) of C^2 for fixed (m1, m2) is 1
    m1 = data.draw(st.integers(-l1, l1))
    m2 = data.draw(st.integers(-l2, l2))
    total = sum((clebsch_gordan(l1, m1, l2, m2, L, m1 + m2) * clebsch_gordan(l1, m1, l2, m2, L, m1 + m2)).to_fraction()
                if abs(m1 + m2) <= L else 0 for L in range(abs(l1 - l2), l1 + l2 + 1))
    assert total == 1


@given(st.integers(0, 4), st.integers(0, 4), st.integers(0, 8), st.data())
def test_cg_symmetry_exchange(l1, l2, L, data):
    # C^{LM}_{l2 m2 l1 m1} = (-1)^{l1+l2-L} C^{LM}_{l1 m1 l2 m2}
    m1 = data.draw(st.integers(-l1, l1))
    m2 = data.draw(st.integers(-l2, l2))
    a = clebsch_gordan(l1, m1, l2, m2, L, m1 + m2) if abs(m1 + m2) <= L else None
    if a is None:
        return
    b = clebsch_gordan(l2, m2, l1, m1, L, m1 + m2)
    sign = (-1) ** ((l1 + l2 - L) % 2)
    assert b == (a if sign > 0 else -a)


def test_cg_selection_rules_give_zero():
    assert clebsch_gordan(1, 1, 1, 0, 2, 0).is_zero     # M != m1 + m2
    assert clebsch_gordan(1, 0, 1, 0, 3, 0).is_zero     # triangle
    assert clebsch_gordan(2, 0, 1, 0, 2, 0).is_zero     # parity of l1 + l2 + L


# -- products of harmonics ------------------------------------------------------------


@given(st.integers(0, 3), st.integers(0, 3), st.data())
def test_product_expansion_pointwise(l1, l2, data):
    m1 = data.draw(st.integers(-l1, l1))
    m2 = data.draw(st.integers(-l2, l2))
    t = np.linspace(0.1, 3.0, 17)
    phi = 0.4
    lhs = spherical_harmonic(l1, m1, t, phi) * spherical_harmonic(l2, m2, t, phi)
    rhs = sum(float(g) * spherical_harmonic(L, M, t, phi) for (L, M), g in product_expand(l1, m1, l2, m2).items())
    np.testing.assert_allclose(rhs, lhs, atol=1e-13)


def test_product_expand_selection():
    terms = product_expand(2, 1, 2, -1)
    assert set(terms) <= {(0, 0), (2, 0), (4, 0)}
    assert all(M == 0 for _, M in terms)
