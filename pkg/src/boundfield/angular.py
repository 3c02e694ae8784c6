"""Angular-momentum algebra.

Exact Clebsch-Gordan coefficients (values of the form ``sign * sqrt(p/q)``),
associated Legendre functions and the spherical-harmonic product expansion.

Quantum numbers that may be half-integers are passed around as *doubled*
integers wherever exactness matters (``two_j=3`` means ``j=3/2``).  The
public :func:`clebsch_gordan` accepts plain ints, :class:`fractions.Fraction`
or strings like ``"3/2"`` and converts them itself.

Conventions
-----------
``P_l^m`` carries **no** Condon-Shortley phase, so ``P_1^1(cos t) = sin t``.
The ``(-1)^m`` lives in the spherical harmonic instead::

    Y_l^m = (-1)^m sqrt((2l+1)(l-m)! / (4 pi (l+m)!)) P_l^m(cos t) e^{i m phi}
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

__all__ = [
    "SqrtRational",
    "AngularIndex",
    "parse_half_integer",
    "doubled",
    "assoc_legendre",
    "legendre",
    "spherical_harmonic",
    "clebsch_gordan",
    "product_expand",
    "GauntCoefficient",
]


def _rational_sqrt(q: Fraction) -> Fraction | None:
    """Exact square root of a non-negative rational, or None if irrational."""
    if q < 0:
        return None
    a, b = math.isqrt(q.numerator), math.isqrt(q.denominator)
    if a * a == q.numerator and b * b == q.denominator:
        return Fraction(a, b)
    return None


@dataclass(frozen=True)
class SqrtRational:
    """The exact number ``sign * sqrt(radicand)``.

    ``radicand`` is a non-negative :class:`~fractions.Fraction` (always kept in
    lowest terms by ``Fraction`` itself); ``sign`` is -1, 0 or +1 and is 0
    exactly when the radicand is 0.
    """

    sign: int
    radicand: Fraction

    def __post_init__(self):
        radicand = Fraction(self.radicand)
        if radicand < 0:
            raise ValueError("radicand must be non-negative")
        if self.sign not in (-1, 0, 1):
            raise ValueError("sign must be -1, 0 or +1")
        sign = 0 if radicand == 0 else self.sign
        if sign == 0:
            radicand = Fraction(0)
        object.__setattr__(self, "sign", sign)
        object.__setattr__(self, "radicand", radicand)

    @classmethod
    def from_rational(cls, value) -> "SqrtRational":
        value = Fraction(value)
        sign = (value > 0) - (value < 0)
        return cls(sign, value * value)

    @classmethod
    def sqrt(cls, value) -> "SqrtRational":
        """``+sqrt(value)`` for a non-negative rational ``value``."""
        value = Fraction(value)
        return cls(1 if value else 0, value)

    @property
    def is_zero(self) -> bool:
        return self.sign == 0

    @property
    def is_rational(self) -> bool:
        return _rational_sqrt(self.radicand) is not None

    def to_fraction(self) -> Fraction:
        root = _rational_sqrt(self.radicand)
        if root is None:
            raise ValueError(f"{self} is irrational")
        return self.sign * root

    def __float__(self) -> float:
        # sqrt(p)/sqrt(q) loses less than sqrt(float(p/q)) for huge p, q
        p, q = self.radicand.numerator, self.radicand.denominator
        return self.sign * math.sqrt(p) / math.sqrt(q)

    def __mul__(self, other):
        if isinstance(other, SqrtRational):
            return SqrtRational(self.sign * other.sign, self.radicand * other.radicand)
        if isinstance(other, (int, Fraction)):
            return self * SqrtRational.from_rational(other)
        return NotImplemented

    __rmul__ = __mul__

    def __neg__(self):
        return SqrtRational(-self.sign, self.radicand)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = SqrtRational.from_rational(other)
        if not isinstance(other, SqrtRational):
            return NotImplemented
        return self.sign == other.sign and self.radicand == other.radicand

    def __hash__(self):
        return hash((self.sign, self.radicand))

    def __str__(self):
        if self.sign == 0:
            return "0"
        s = "-" if self.sign < 0 else ""
        root = _rational_sqrt(self.radicand)
        if root is not None:
            return f"{s}{root}"
        return f"{s}sqrt({self.radicand})"


def parse_half_integer(value) -> Fraction:
    """Read ``3``, ``"3/2"``, ``"1.5"`` or a Fraction as an integer/half-integer."""
    if isinstance(value, str):
        text = value.strip()
        frac = Fraction(text)  # handles "3/2", "1.5", "-0.5"
    else:
        frac = Fraction(value)
    if (2 * frac).denominator != 1:
        raise ValueError(f"{value!r} is not an integer or half-integer")
    return frac


def doubled(value) -> int:
    """Twice the (half-)integer ``value`` as an int."""
    return int(2 * parse_half_integer(value))


@dataclass(frozen=True)
class AngularIndex:
    """An ``(l, m)`` pair stored as doubled integers."""

    two_l: int
    two_m: int

    def __post_init__(self):
        if self.two_l < 0:
            raise ValueError("l must be non-negative")
        if (self.two_l - self.two_m) % 2:
            raise ValueError("l and m must both be integers or both half-integers")
        if abs(self.two_m) > self.two_l:
            raise ValueError("|m| <= l violated")

    @classmethod
    def of(cls, l, m) -> "AngularIndex":
        return cls(doubled(l), doubled(m))

    @property
    def l(self) -> Fraction:
        return Fraction(self.two_l, 2)

    @property
    def m(self) -> Fraction:
        return Fraction(self.two_m, 2)


# ---------------------------------------------------------------------------
# Legendre functions


def _check_x(x):
    x = np.asarray(x, dtype=float)
    if np.any(np.abs(x) > 1.0):
        raise ValueError("associated Legendre function needs |x| <= 1")
    return x


def assoc_legendre(L: int, M: int, x):
    """``P_L^M(x)`` without the Condon-Shortley phase.

    Upward recurrence in ``L`` from ``P_M^M = (2M-1)!! (1-x^2)^{M/2}``.
    Negative ``M`` is reduced with
    ``P_L^{-M} = (-1)^M (L-M)!/(L+M)! P_L^M``.  Works on scalars and arrays.
    """
    if L < 0:
        raise ValueError("L must be non-negative")
    if abs(M) > L:
        raise ValueError(f"|M| <= L violated (L={L}, M={M})")
    x = _check_x(x)
    if M < 0:
        k = -M
        factor = (-1) ** k * math.factorial(L - k) / math.factorial(L + k)
        return factor * assoc_legendre(L, k, x)

    pmm = np.full_like(x, float(math.prod(range(1, 2 * M, 2))))
    if M:
        pmm = pmm * (1.0 - x * x) ** (0.5 * M)
    if L == M:
        return pmm[()] if pmm.ndim == 0 else pmm
    p_prev, p_cur = pmm, x * (2 * M + 1) * pmm
    for ell in range(M + 2, L + 1):
        p_prev, p_cur = p_cur, (x * (2 * ell - 1) * p_cur - (ell + M - 1) * p_prev) / (ell - M)
    return p_cur[()] if p_cur.ndim == 0 else p_cur


def legendre(L: int, x):
    """Legendre polynomial ``P_L(x)`` on ``[-1, 1]``."""
    return assoc_legendre(L, 0, x)


def spherical_harmonic(l: int, m: int, theta, phi=0.0):
    """``Y_l^m(theta, phi)`` with the Condon-Shortley phase (complex)."""
    if abs(m) > l:
        raise ValueError(f"|m| <= l violated (l={l}, m={m})")
    theta = np.asarray(theta, dtype=float)
    norm = math.sqrt((2 * l + 1) * math.factorial(l - m) / (4 * math.pi * math.factorial(l + m)))
    return (-1) ** (m % 2) * norm * assoc_legendre(l, m, np.cos(theta)) * np.exp(1j * m * np.asarray(phi))


# ---------------------------------------------------------------------------
# Clebsch-Gordan coefficients


@lru_cache(maxsize=None)
def _factorial(n: int) -> int:
    return math.factorial(n)


@lru_cache(maxsize=4096)
def _cg_doubled(j1: int, m1: int, j2: int, m2: int, J: int, M: int) -> SqrtRational:
    # all arguments doubled
    zero = SqrtRational(0, Fraction(0))
    if min(j1, j2, J) < 0:
        return zero
    if abs(m1) > j1 or abs(m2) > j2 or abs(M) > J:
        return zero
    if (j1 - m1) % 2 or (j2 - m2) % 2 or (J - M) % 2:
        return zero
    if m1 + m2 != M:
        return zero
    if (j1 + j2 + J) % 2 or J < abs(j1 - j2) or J > j1 + j2:
        return zero

    a = (j1 + j2 - J) // 2
    b = (j1 - j2 + J) // 2
    c = (-j1 + j2 + J) // 2
    triangle = Fraction(_factorial(a) * _factorial(b) * _factorial(c), _factorial((j1 + j2 + J) // 2 + 1))
    radicand = (J + 1) * triangle * (
        _factorial((J + M) // 2) * _factorial((J - M) // 2)
        * _factorial((j1 - m1) // 2) * _factorial((j1 + m1) // 2)
        * _factorial((j2 - m2) // 2) * _factorial((j2 + m2) // 2)
    )

    e1 = (j1 - m1) // 2
    e2 = (j2 + m2) // 2
    e3 = (J - j2 + m1) // 2
    e4 = (J - j1 - m2) // 2
    total = Fraction(0)
    for k in range(max(0, -e3, -e4), min(a, e1, e2) + 1):
        denom = (_factorial(k) * _factorial(a - k) * _factorial(e1 - k) * _factorial(e2 - k)
                 * _factorial(e3 + k) * _factorial(e4 + k))
        total += Fraction((-1) ** k, denom)
    if total == 0:
        return zero
    sign = 1 if total > 0 else -1
    return SqrtRational(sign, radicand * total * total)


def clebsch_gordan(l1, m1, l2, m2, L, M) -> SqrtRational:
    """Exact ``<l1 m1; l2 m2 | L M>`` (Condon-Shortley phase).

    Arguments may be ints, Fractions or strings such as ``"1/2"``.  Any
    combination violating the triangle rule, ``m1 + m2 = M``, ``|m| <= l`` or
    integer/half-integer consistency gives an exact zero.
    """
    return _cg_doubled(doubled(l1), doubled(m1), doubled(l2), doubled(m2), doubled(L), doubled(M))


def product_expand(l1: int, m1: int, l2: int, m2: int) -> dict[tuple[int, int], "GauntCoefficient"]:
    """Expand ``Y_l1^m1 * Y_l2^m2 = sum_{L} c_L Y_L^M`` with ``M = m1 + m2``.

    Each value is a :class:`GauntCoefficient`; its ``exact`` part is the
    radical without the common ``1/sqrt(4 pi)``.  Zero coefficients are
    omitted.
    """
    M = m1 + m2
    out = {}
    for L in range(abs(l1 - l2), l1 + l2 + 1):
        if abs(M) > L:
            continue
        c = (clebsch_gordan(l1, 0, l2, 0, L, 0) * clebsch_gordan(l1, m1, l2, m2, L, M)
             * SqrtRational.sqrt(Fraction((2 * l1 + 1) * (2 * l2 + 1), 2 * L + 1)))
        if c.is_zero:
            continue
        out[(L, M)] = GauntCoefficient(c)
    return out


@dataclass(frozen=True)
class GauntCoefficient:
    """``exact / sqrt(4 pi)``: a spherical-harmonic product coefficient."""

    exact: SqrtRational

    def __float__(self):
        return float(self.exact) / math.sqrt(4 * math.pi)

    def __str__(self):
        return f"{self.exact}/sqrt(4*pi)"
