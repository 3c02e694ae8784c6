"""Radial calculus on polynomial-times-exponential functions.

Everything is in units of the Bohr radius: a :class:`PolyExp` term
``(c, k, lam)`` stands for ``c * r**k * exp(-lam * r)`` with ``r`` in ``a0``.

Unit convention for the field pipeline
--------------------------------------
Current densities are stored as ``pi * j / (mu_B / a0**4)`` so that hydrogenic
coefficients stay rational.  :func:`vector_potential_profile` then returns
``A_L`` in units of ``mu0 mu_B / (4 pi a0**2)``, and the curl of that is in
``mu0 mu_B / (4 pi a0**3)``.
"""
from __future__ import annotations

import csv
import heapq
import json
import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping

import numpy as np
from scipy.interpolate import CubicSpline

from .angular import SqrtRational

__all__ = [
    "IntegrabilityError",
    "ConvergenceError",
    "DivergenceError",
    "PolyExp",
    "HydrogenRadial",
    "hydrogen_radial",
    "integrate_lower",
    "integrate_upper",
    "vector_potential_profile",
    "QuadResult",
    "quad_oracle",
    "SampledProfile",
    "MultipoleSeries",
    "read_radial_csv",
]


class IntegrabilityError(ArithmeticError):
    """A radial integral does not exist (or has no closed form in the class)."""


class ConvergenceError(IntegrabilityError):
    """``int_0^r`` diverges at the origin."""


class DivergenceError(IntegrabilityError):
    """``int_r^inf`` diverges, or is not expressible as a PolyExp."""


def _as_exact(c):
    if isinstance(c, (int, Fraction)):
        return Fraction(c)
    return c


class PolyExp:
    """Finite sum ``sum_i c_i r**k_i exp(-lam_i r)``.

    Immutable.  Terms with equal ``(k, lam)`` are merged and zero
    coefficients dropped on construction, so two PolyExps that represent the
    same function compare equal term by term.  Coefficients may be
    :class:`~fractions.Fraction` (exact) or float.
    """

    __slots__ = ("_terms", "_series", "_groups")

    # Sums with negative powers cancel near the origin.  Up to
    # lam*r = _TAYLOR_REACH the exact origin expansion is a candidate, and each
    # point uses whichever form has the smaller sum of |terms| (the better
    # conditioned one); _TAYLOR_ORDER terms keep truncation below 1 ulp there.
    _TAYLOR_REACH = 12.0
    _TAYLOR_ORDER = 100

    def __init__(self, terms=()):
        if isinstance(terms, Mapping):
            items = ((c, k, lam) for (k, lam), c in terms.items())
        else:
            items = terms
        merged: dict[tuple[int, Fraction], object] = {}
        for c, k, lam in items:
            if int(k) != k:
                raise ValueError("exponents must be integers")
            lam = Fraction(lam)
            if lam < 0:
                raise ValueError("decay rates must be non-negative")
            key = (int(k), lam)
            merged[key] = merged.get(key, 0) + _as_exact(c)
        self._terms = {key: c for key, c in sorted(merged.items()) if c != 0}
        self._series = None
        self._groups = None

    # -- construction helpers -------------------------------------------------
    @classmethod
    def monomial(cls, c=1, k=0, lam=0) -> "PolyExp":
        return cls([(c, k, lam)])

    @classmethod
    def zero(cls) -> "PolyExp":
        return cls()

    # -- introspection ----------------------------------------------------------
    @property
    def terms(self) -> dict[tuple[int, Fraction], object]:
        """Mapping ``(k, lam) -> c`` (a copy)."""
        return dict(self._terms)

    def __iter__(self):
        for (k, lam), c in self._terms.items():
            yield c, k, lam

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    @property
    def is_exact(self) -> bool:
        return all(isinstance(c, Fraction) for c in self._terms.values())

    def __eq__(self, other):
        if isinstance(other, PolyExp):
            return self._terms == other._terms
        if other == 0:
            return not self._terms
        return NotImplemented

    def __hash__(self):
        return hash(tuple(self._terms.items()))

    def __repr__(self):
        if not self._terms:
            return "PolyExp(0)"
        parts = []
        for c, k, lam in self:
            s = str(c)
            if k:
                s += f"*r^{k}"
            if lam:
                s += f"*exp(-{lam}r)"
            parts.append(s)
        return "PolyExp(" + " + ".join(parts) + ")"

    # -- algebra ---------------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, PolyExp):
            if other == 0:
                return self
            other = PolyExp.monomial(other)
        return PolyExp([*self, *other])

    __radd__ = __add__

    def __neg__(self):
        return PolyExp([(-c, k, lam) for c, k, lam in self])

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, PolyExp):
            return PolyExp([(c1 * c2, k1 + k2, l1 + l2)
                            for c1, k1, l1 in self for c2, k2, l2 in other])
        if isinstance(other, SqrtRational):
            other = other.to_fraction()
        other = _as_exact(other)
        return PolyExp([(c * other, k, lam) for c, k, lam in self])

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        if isinstance(scalar, (int, Fraction)):
            return self * (1 / Fraction(scalar))
        return self * (1.0 / scalar)

    def shift(self, p: int) -> "PolyExp":
        """Multiply by ``r**p``."""
        return PolyExp([(c, k + p, lam) for c, k, lam in self])

    def derivative(self) -> "PolyExp":
        out = []
        for c, k, lam in self:
            if k:
                out.append((c * k, k - 1, lam))
            if lam:
                out.append((-c * lam, k, lam))
        return PolyExp(out)

    def integrate_lower(self) -> "PolyExp":
        return integrate_lower(self)

    def integrate_upper(self) -> "PolyExp":
        return integrate_upper(self)

    # -- evaluation ------------------------------------------------------------
    def taylor(self, order: int | None = None) -> dict[int, Fraction]:
        """Exact Laurent coefficients ``{n: t_n}`` of the expansion about ``r = 0``.

        Covers every power up to ``max_k + order``; powers whose coefficients
        cancel exactly are absent.  Only for exact PolyExps.
        """
        if not self.is_exact:
            raise TypeError("Taylor expansion needs exact coefficients")
        order = self._TAYLOR_ORDER if order is None else order
        top = max((k for _, k, _ in self), default=0) + order
        out: dict[int, Fraction] = {}
        for c, k, lam in self:
            term = c
            for i in range(top - k + 1):
                if i:
                    term = term * -lam / i
                if term == 0:
                    break
                out[k + i] = out.get(k + i, 0) + term
        return {n: t for n, t in sorted(out.items()) if t != 0}

    def _needs_series(self) -> bool:
        return (self.is_exact and any(lam for _, _, lam in self)
                and any(k < 0 for _, k, _ in self))

    def _series_coeffs(self):
        if self._series is None:
            coeffs = self.taylor()
            n0 = min(coeffs, default=0)
            top = max(coeffs, default=0)
            self._series = (n0, float(max(lam for _, _, lam in self)),
                            np.array([float(coeffs.get(n, 0)) for n in range(n0, top + 1)]))
        return self._series

    def scalar(self, r: float) -> float:
        """Fast evaluation at a single float ``r`` (same numerics as ``__call__``)."""
        if self._groups is None:
            groups: dict[float, list] = {}
            for c, k, lam in self:
                groups.setdefault(float(lam), []).append((float(c), k))
            self._groups = [(lam, tuple(ck)) for lam, ck in groups.items()]
        total = size = 0.0
        for lam, ck in self._groups:
            e = math.exp(-lam * r) if lam else 1.0
            for c, k in ck:
                term = c * r ** k * e
                total += term
                size += abs(term)
        if self._needs_series():
            n0, lam_max, cs = self._series_coeffs()
            if r * lam_max < self._TAYLOR_REACH:
                acc = acc_abs = 0.0
                for c in cs[::-1]:
                    acc = acc * r + c
                    acc_abs = acc_abs * r + abs(c)
                if acc_abs * r ** n0 < size:
                    return acc * r ** n0
        return total

    def __call__(self, r):
        if isinstance(r, float):
            return self.scalar(r)
        r = np.asarray(r, dtype=float)
        scalar = r.ndim == 0
        shape = r.shape
        r = np.atleast_1d(r).ravel()
        out = np.zeros_like(r)
        size = np.zeros_like(r)
        for c, k, lam in self:
            term = float(c) * r ** k * np.exp(-float(lam) * r)
            out = out + term
            size = size + np.abs(term)
        if self._needs_series():
            n0, lam_max, cs = self._series_coeffs()
            near = r * lam_max < self._TAYLOR_REACH
            if np.any(near):
                rn = r[near]
                pw = rn ** float(n0)
                ser = np.polynomial.polynomial.polyval(rn, cs) * pw
                ser_size = np.polynomial.polynomial.polyval(rn, np.abs(cs)) * pw
                better = ser_size < size[near]
                idx = np.flatnonzero(near)[better]
                out[idx] = ser[better]
        return out[0] if scalar else out.reshape(shape)

    def min_power(self, lam=None) -> int | None:
        ks = [k for (k, l_) in self._terms if lam is None or l_ == lam]
        return min(ks) if ks else None

    # -- serialization ---------------------------------------------------------
    def to_json(self) -> list[dict]:
        """``[{"c": "p/q", "k": int, "lambda": "p/q"}, ...]``; float coefficients stay JSON numbers."""
        return [{"c": str(c) if isinstance(c, Fraction) else float(c), "k": k, "lambda": str(lam)}
                for c, k, lam in self]

    @classmethod
    def from_json(cls, data) -> "PolyExp":
        if isinstance(data, str):
            data = json.loads(data)
        terms = []
        for item in data:
            c = item["c"]
            c = Fraction(c) if isinstance(c, str) else float(c)
            terms.append((c, int(item["k"]), Fraction(item["lambda"])))
        return cls(terms)


def _factorial(n):
    return math.factorial(n)


def integrate_lower(f: PolyExp) -> PolyExp:
    """``F(r) = int_0^r f(t) dt`` in closed form.

    Uses ``int_0^r t^k e^{-lam t} dt = k!/lam^{k+1}
    - e^{-lam r} sum_{i<=k} k!/(i! lam^{k+1-i}) r^i``.
    """
    out = []
    for c, k, lam in f:
        if k < 0:
            raise ConvergenceError(f"int_0^r of r^{k} diverges at the origin")
        if lam == 0:
            out.append((c / (k + 1), k + 1, 0))
            continue
        kf = _factorial(k)
        out.append((c * Fraction(kf) / lam ** (k + 1), 0, 0))
        for i in range(k + 1):
            out.append((-c * Fraction(kf, _factorial(i)) / lam ** (k + 1 - i), i, lam))
    return PolyExp(out)


def integrate_upper(f: PolyExp) -> PolyExp:
    """``G(r) = int_r^inf f(t) dt`` in closed form."""
    out = []
    for c, k, lam in f:
        if lam == 0:
            if k >= -1:
                raise DivergenceError(f"int_r^inf of r^{k} diverges")
            out.append((-c / (k + 1), k + 1, 0))
            continue
        if k < 0:
            raise DivergenceError(
                f"int_r^inf of r^{k} exp(-{lam} r) is an exponential integral, not a PolyExp")
        kf = _factorial(k)
        for i in range(k + 1):
            out.append((c * Fraction(kf, _factorial(i)) / lam ** (k + 1 - i), i, lam))
    return PolyExp(out)


def vector_potential_profile(j_L: PolyExp, L: int) -> PolyExp:
    """Radial coefficient ``A_L(r)`` of ``P_L^1(cos t)`` in the azimuthal potential.

    ``A_L = 4/(2L+1) [r^-(L+1) int_0^r j t^(L+2) dt + r^L int_r^inf j t^(1-L) dt]``

    with ``j_L`` in ``mu_B/(pi a0^4)`` and the result in
    ``mu0 mu_B/(4 pi a0^2)`` (the ``4`` is ``4 pi * 1/pi``).
    """
    if L < 1 or L % 2 == 0:
        raise ValueError("multipole order must be odd and positive")
    if not j_L:
        return PolyExp.zero()
    inner = integrate_lower(j_L.shift(L + 2)).shift(-(L + 1))
    outer = integrate_upper(j_L.shift(1 - L)).shift(L)
    return (inner + outer) * Fraction(4, 2 * L + 1)


# ---------------------------------------------------------------------------
# Hydrogenic radial functions


@dataclass(frozen=True)
class HydrogenRadial:
    """``R_nl(r) = norm * shape(r)`` with ``norm**2`` rational."""

    n: int
    l: int
    norm: SqrtRational
    shape: PolyExp

    def squared(self) -> PolyExp:
        """Exact ``R_nl**2`` as a rational PolyExp."""
        return (self.shape * self.shape) * self.norm.radicand

    def as_polyexp(self) -> PolyExp:
        """``R_nl`` with float coefficients (the norm is irrational in general)."""
        return self.shape * float(self.norm)

    def __call__(self, r):
        return float(self.norm) * self.shape(r)


def hydrogen_radial(n: int, l: int) -> HydrogenRadial:
    """Normalized hydrogen radial function, lengths in ``a0``.

    ``R_nl ~ rho^l e^{-rho/2} L_{n-l-1}^{(2l+1)}(rho)`` with ``rho = 2r/n``;
    the normalization is fixed exactly from ``int_0^inf R^2 r^2 dr = 1``.
    """
    if n < 1 or l < 0:
        raise ValueError("need n >= 1 and l >= 0")
    if l >= n:
        raise ValueError(f"l < n violated (n={n}, l={l})")
    k = n - l - 1
    alpha = 2 * l + 1
    lam = Fraction(1, n)
    terms = []
    for i in range(k + 1):
        # generalized Laguerre coefficient times (2/n)^(l+i) for rho -> r
        coef = Fraction((-1) ** i * math.comb(k + alpha, k - i), _factorial(i))
        terms.append((coef * Fraction(2, n) ** (l + i), l + i, lam))
    shape = PolyExp(terms)
    norm_sq = integrate_upper((shape * shape).shift(2))
    # int_0^inf = G(0); only the r^0 terms survive at r = 0
    total = sum(c for c, kk, _ in norm_sq if kk == 0)
    return HydrogenRadial(n, l, SqrtRational.sqrt(1 / Fraction(total)), shape)


# ---------------------------------------------------------------------------
# Adaptive Gauss-Kronrod quadrature (independent numeric oracle)

_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])
_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
_KWEIGHTS = np.concatenate([_WGK[:-1], _WGK[::-1]])
# Gauss nodes are the odd-indexed Kronrod nodes (1, 3, 5, 7 from the outside)
_GWEIGHTS = np.zeros(15)
_GWEIGHTS[[1, 3, 5, 7, 9, 11, 13]] = np.concatenate([_WG[:-1], _WG[::-1]])


@dataclass(frozen=True)
class QuadResult:
    value: float
    error: float
    converged: bool
    intervals: int

    def __float__(self):
        return self.value


def _gk15(g, a, b):
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    vals = g(mid + half * _NODES)
    k = half * np.dot(_KWEIGHTS, vals)
    gauss = half * np.dot(_GWEIGHTS, vals)
    return k, abs(k - gauss)


def quad_oracle(f: Callable, a: float, b: float, rtol: float = 1e-10,
                atol: float = 0.0, max_intervals: int = 2000) -> QuadResult:
    """Globally adaptive 7/15-point Gauss-Kronrod integration of ``f`` on ``[a, b]``.

    ``b`` may be ``inf``; the substitution ``r = a + t/(1-t)`` maps the
    half-line onto ``[0, 1)``.  ``f`` must accept numpy arrays.  On
    non-convergence a :class:`RuntimeWarning` is issued and the best estimate
    is returned with ``converged=False``.
    """
    if math.isinf(b):
        if b < 0:
            raise ValueError("upper bound must be +inf or finite")

        def g(t):
            t = np.asarray(t)
            s = 1.0 - t
            return f(a + t / s) / (s * s)
        lo, hi = 0.0, 1.0
    else:
        g = lambda t: f(np.asarray(t))  # noqa: E731
        lo, hi = a, b

    value, err = _gk15(g, lo, hi)
    heap = [(-err, lo, hi, value)]
    total, total_err = value, err
    while total_err > max(atol, rtol * abs(total)) and len(heap) < max_intervals:
        neg_err, x0, x1, v = heapq.heappop(heap)
        xm = 0.5 * (x0 + x1)
        v1, e1 = _gk15(g, x0, xm)
        v2, e2 = _gk15(g, xm, x1)
        heapq.heappush(heap, (-e1, x0, xm, v1))
        heapq.heappush(heap, (-e2, xm, x1, v2))
        total += v1 + v2 - v
        total_err += e1 + e2 + neg_err
    # re-sum to shed the drift of the running updates
    total = math.fsum(item[3] for item in heap)
    total_err = math.fsum(-item[0] for item in heap)
    converged = total_err <= max(atol, rtol * abs(total))
    if not converged:
        warnings.warn(f"quad_oracle did not converge: estimate {total!r} +/- {total_err:.3g}",
                      RuntimeWarning, stacklevel=2)
    return QuadResult(total, total_err, converged, len(heap))


# ---------------------------------------------------------------------------
# Sampled radial profiles


@dataclass(frozen=True)
class SampledProfile:
    """A radial function known on a grid, interpolated by a cubic spline.

    Below the first node the function is taken to be zero.  This is the
    second-class path for non-hydrogenic input: no exact results, and the
    integrals carry a Richardson error estimate.
    """

    r: np.ndarray
    values: np.ndarray
    _spline: CubicSpline = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        r = np.asarray(self.r, dtype=float)
        v = np.asarray(self.values, dtype=float)
        if r.ndim != 1 or r.shape != v.shape or r.size < 4:
            raise ValueError("need matching 1-d grids with at least 4 nodes")
        if r[0] <= 0 or np.any(np.diff(r) <= 0):
            raise ValueError("radial grid must be strictly increasing and start at r > 0")
        if not np.all(np.isfinite(v)):
            raise ValueError("radial samples must be finite")
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "_spline", CubicSpline(r, v))

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        out = np.where((r >= self.r[0]) & (r <= self.r[-1]), self._spline(np.clip(r, self.r[0], self.r[-1])), 0.0)
        return out[()] if out.ndim == 0 else out

    def derivative(self) -> "SampledProfile":
        return SampledProfile(self.r, self._spline(self.r, 1))

    def _same_grid(self, other):
        if not (other.r.shape == self.r.shape and np.array_equal(other.r, self.r)):
            raise ValueError("sampled profiles live on different grids")

    def __add__(self, other):
        if isinstance(other, SampledProfile):
            self._same_grid(other)
            return SampledProfile(self.r, self.values + other.values)
        if other == 0:
            return self
        return NotImplemented

    __radd__ = __add__

    def __mul__(self, scalar):
        if isinstance(scalar, SampledProfile):
            self._same_grid(scalar)
            return SampledProfile(self.r, self.values * scalar.values)
        return SampledProfile(self.r, self.values * float(scalar))

    __rmul__ = __mul__

    def __neg__(self):
        return SampledProfile(self.r, -self.values)

    def __sub__(self, other):
        return self + (-other)

    def __bool__(self):
        return bool(np.any(self.values != 0))

    def shift(self, p: int) -> "SampledProfile":
        """Multiply by ``r**p``."""
        return SampledProfile(self.r, self.values * self.r ** p)

    def map(self, fn) -> "SampledProfile":
        """Pointwise transform of the node values, ``fn(r, values)``."""
        return SampledProfile(self.r, fn(self.r, self.values))

    def cumulative(self, pointwise: bool = False):
        """``int_{r0}^{r_i} f`` at every node, plus a Richardson error estimate.

        The estimate compares against the spline through every other node and
        assumes fourth-order convergence.  With ``pointwise`` the estimate is
        an array over the nodes (interpolated between the even ones).
        """
        fine = self._spline.antiderivative()(self.r)
        fine = fine - fine[0]
        if self.r.size >= 8:
            coarse_r = self.r[::2]
            coarse = CubicSpline(coarse_r, self.values[::2]).antiderivative()(coarse_r)
            diff = np.abs(fine[::2] - (coarse - coarse[0])) / 15.0
            err = np.interp(self.r, coarse_r, diff) if pointwise else float(diff.max())
        else:
            err = np.full(self.r.size, np.nan) if pointwise else float("nan")
        return fine, err

    def truncation_estimate(self) -> float:
        """Rough size of ``int_0^{r0} f``, from a power law through the first two nodes."""
        r0, r1 = self.r[:2]
        f0, f1 = self.values[:2]
        if f0 == 0:
            return 0.0
        if f1 == 0 or np.sign(f0) != np.sign(f1):
            return abs(f0) * r0
        p = math.log(abs(f1 / f0)) / math.log(r1 / r0)
        if p <= -1:
            return float("inf")
        return abs(f0) * r0 / (p + 1)


def read_radial_csv(path) -> SampledProfile:
    """Two-column CSV ``(r/a0, R)`` with a one-line header."""
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if len(rows) < 2:
        raise ValueError(f"{path}: expected a header and data rows")
    data = np.array([[float(x) for x in row[:2]] for row in rows[1:] if row], dtype=float)
    return SampledProfile(data[:, 0], data[:, 1])


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MultipoleSeries:
    """Map odd ``L`` -> radial profile for one of current / potential / field.

    ``quantity`` is ``"current"`` (``mu_B/(pi a0^4)``) or
    ``"vector_potential"`` (``mu0 mu_B/(4 pi a0^2)``).
    """

    entries: dict
    quantity: str = "current"

    def __post_init__(self):
        for L in self.entries:
            if L < 1 or L % 2 == 0:
                raise ValueError(f"multipole order {L} is not odd and positive")
        if self.quantity not in ("current", "vector_potential", "field"):
            raise ValueError(f"unknown quantity {self.quantity!r}")
        object.__setattr__(self, "entries", dict(sorted(self.entries.items())))

    @property
    def orders(self) -> list[int]:
        return list(self.entries)

    def __getitem__(self, L):
        return self.entries[L]

    def __iter__(self):
        return iter(self.entries.items())

    def __len__(self):
        return len(self.entries)

    @property
    def is_analytic(self) -> bool:
        return all(isinstance(p, PolyExp) for p in self.entries.values())

    def evaluate(self, r, theta):
        """``sum_L profile_L(r) P_L^1(cos theta)`` (the azimuthal component)."""
        from .angular import assoc_legendre

        r = np.asarray(r, dtype=float)
        x = np.cos(np.asarray(theta, dtype=float))
        out = np.zeros(np.broadcast(r, x).shape)
        for L, prof in self.entries.items():
            out = out + prof(r) * assoc_legendre(L, 1, x)
        return out[()] if out.ndim == 0 else out
