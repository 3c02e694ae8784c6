"""Multipole coefficients of the orbital, spin and total current densities.

Every current density here is azimuthal and expands over ``P_L^1(cos t)`` with
odd ``L`` only.  The angular coefficients are exact rationals built from
Clebsch-Gordan products.

Normalizations
--------------
Orbital (``L = 1, 3, ..., 2l-1``)::

    m |Y_l^m|^2 / sin t = (1/pi) sum_L alpha_L P_L^1(cos t)
    j_orb = -2 mu_B (R^2/r) (1/pi) sum_L alpha_L P_L^1

Spin for an ``S_z`` eigenstate (``L = 1, 3, ..., 2l+1``)::

    j_spin = 2 m_s mu_B (2l+1)/(4 pi) (-1)^m
             sum_L [c_deriv dR^2/dr + c_over_r R^2/r] P_L^1

Total for ``j = l +/- 1/2`` (``L = 1, 3, ..., 2j``; the alphas do not depend
on ``l``)::

    j_tot = +/- mu_B/(4 pi) {dR^2/dr + [2 -/+ (2j+1)] R^2/r} sum_L alpha_L P_L^1
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .angular import SqrtRational, clebsch_gordan
from .radial import HydrogenRadial, IntegrabilityError, MultipoleSeries, PolyExp, SampledProfile
from .states import QuantumNumberError, QuantumState

__all__ = [
    "CoefficientTable",
    "SpinExpansion",
    "orbital_coefficients",
    "spin_coefficients",
    "total_coefficients",
    "total_coefficients_for_l",
    "current_series",
]


@dataclass(frozen=True)
class CoefficientTable:
    """Exact multipole coefficients ``{L: alpha_L}`` of an orbital or total current."""

    entries: dict
    kind: str
    l: int | None = None
    m: int | None = None
    two_j: int | None = None
    two_mj: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "entries", {L: Fraction(a) for L, a in sorted(self.entries.items())})

    @property
    def max_L(self) -> int:
        return max(self.entries, default=0)

    def __getitem__(self, L):
        return self.entries[L]

    def __len__(self):
        return len(self.entries)

    def to_dict(self) -> dict:
        out = {}
        if self.kind == "total":
            out["j"] = str(Fraction(self.two_j, 2))
            out["mj"] = str(Fraction(self.two_mj, 2))
        else:
            out["l"] = self.l
            out["m"] = self.m
        out["alphas"] = {str(L): str(a) for L, a in self.entries.items()}
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict) -> "CoefficientTable":
        entries = {int(L): Fraction(a) for L, a in data["alphas"].items()}
        if "j" in data:
            return cls(entries, "total", two_j=int(2 * Fraction(data["j"])),
                       two_mj=int(2 * Fraction(data["mj"])))
        return cls(entries, "orbital", l=int(data["l"]), m=int(data["m"]))

    @classmethod
    def from_json(cls, text: str) -> "CoefficientTable":
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class SpinExpansion:
    """``{L: (c_deriv, c_over_r)}`` for the spin current of an ``S_z`` eigenstate."""

    entries: dict
    l: int
    m: int

    def __getitem__(self, L):
        return self.entries[L]

    def __len__(self):
        return len(self.entries)


def _rational(x: SqrtRational) -> Fraction:
    # every quantity assembled below is a product of paired CGs
    return x.to_fraction()


def _sqrt(x) -> SqrtRational:
    return SqrtRational.sqrt(Fraction(x))


def _cg_pair(l: int, K: int, m: int, mp: int) -> Fraction:
    """``C^{K0}_{l0 l0} C^{K0}_{l m l mp}`` as an exact rational."""
    return _rational(clebsch_gordan(l, 0, l, 0, K, 0) * clebsch_gordan(l, m, l, mp, K, 0))


def orbital_coefficients(l: int, m: int) -> CoefficientTable:
    """Table of ``alpha_L`` for the orbital current of ``|l, m>``.

    ``m = 0`` gives an empty table (no orbital current).  For ``m < 0`` the
    table is the negative of the ``|m|`` one.
    """
    if l < 0 or abs(m) > l:
        raise QuantumNumberError("|m| <= l violated")
    if m == 0:
        return CoefficientTable({}, "orbital", l=l, m=m)
    if m < 0:
        pos = orbital_coefficients(l, -m)
        return CoefficientTable({L: -a for L, a in pos.entries.items()}, "orbital", l=l, m=m)
    return CoefficientTable(_orbital_alphas(l, m), "orbital", l=l, m=m)


def _orbital_alphas(l: int, m: int) -> dict[int, Fraction]:
    # m Y_l^m / sin t lowered to Y_{l-1}^{m+-1}, then the product with Y_l^{-m}
    # projected onto Y_L^{+-1}
    out = {}
    sign = -1 if m % 2 else 1
    for L in range(1, 2 * l, 2):
        base = clebsch_gordan(l - 1, 0, l, 0, L, 0)
        if base.is_zero:
            continue
        up = (_sqrt(Fraction(max((l - m - 1) * (l - m), 0), L * (L + 1)))
              * clebsch_gordan(l - 1, m + 1, l, -m, L, 1))
        down = (_sqrt(Fraction(max((l + m - 1) * (l + m), 0), L * (L + 1)))
                * clebsch_gordan(l - 1, m - 1, l, -m, L, -1))
        alpha = sign * Fraction(2 * l + 1, 8) * (_rational(base * up) - _rational(base * down))
        out[L] = alpha
    return out


def spin_coefficients(l: int, m: int, ms="1/2") -> SpinExpansion:
    """``(c_deriv, c_over_r)`` per odd ``L <= 2l+1`` for the spin current of ``|l, m, m_s>``.

    The overall ``2 m_s (2l+1)/(4 pi) (-1)^m`` stays outside; see the module
    docstring.  ``ms`` only validates here.
    """
    if l < 0 or abs(m) > l:
        raise QuantumNumberError("|m| <= l violated")
    if Fraction(ms) not in (Fraction(1, 2), Fraction(-1, 2)):
        raise QuantumNumberError("m_s in {-1/2, +1/2} violated")
    a = {K: _cg_pair(l, K, m, -m) for K in range(0, 2 * l + 1, 2)}
    out = {}
    for L in range(1, 2 * l + 2, 2):
        below = a.get(L - 1, Fraction(0)) / (2 * L - 1)
        above = a.get(L + 1, Fraction(0)) / (2 * L + 3)
        c_deriv = below - above
        c_over_r = -(L - 1) * below - (L + 2) * above
        if c_deriv or c_over_r:
            out[L] = (c_deriv, c_over_r)
    return SpinExpansion(out, l, m)


def total_coefficients_for_l(l: int, j, mj) -> CoefficientTable:
    """``alpha_L`` of the total current computed for a specific orbital ``l``.

    Uses the unreduced sums over ``L <= 2l+1`` so that every ``m_j`` (including
    ``m_j = -j`` for ``j = l + 1/2``) is covered.
    """
    state = QuantumState.jj(l, j, mj)
    m = state.spinor_m
    upper = state.upper
    # spinor weights: psi_up ~ Y_l^m, psi_down ~ Y_l^{m+1}
    w_same, w_next = (l + m + 1, l - m) if upper else (l - m, l + m + 1)
    a_same = {K: _cg_pair(l, K, m, -m) for K in range(0, 2 * l + 1, 2)}
    a_next = {K: _cg_pair(l, K, m + 1, -(m + 1)) for K in range(0, 2 * l + 1, 2)}
    # the bracket is [L + 2 x] for the lower sum, [L + 1 - 2 x] for the upper
    # one, with x = +w for j = l+1/2 and x = -w for j = l-1/2
    s = 1 if upper else -1
    out = {}
    for L in range(1, 2 * l + 2, 2):
        total = Fraction(0)
        K = L - 1
        if K in a_same:
            total += Fraction(1, L * (2 * L - 1)) * (
                w_same * (L + s * 2 * w_next) * a_same[K] + w_next * (L + s * 2 * w_same) * a_next[K])
        K = L + 1
        if K in a_same:
            total -= Fraction(1, (L + 1) * (2 * L + 3)) * (
                w_same * (L + 1 - s * 2 * w_next) * a_same[K]
                + w_next * (L + 1 - s * 2 * w_same) * a_next[K])
        alpha = (-1 if m % 2 else 1) * s * total
        if alpha:
            out[L] = alpha
    return CoefficientTable(out, "total", two_j=state.two_j, two_mj=state.two_mj)


def total_coefficients(j, mj) -> CoefficientTable:
    """``alpha_L`` of the total current of a ``(j, m_j)`` eigenstate.

    Computed with ``l = j - 1/2`` and with ``l = j + 1/2``; the two must agree
    exactly, otherwise :class:`ArithmeticError` is raised.
    """
    two_j = int(2 * Fraction(j))
    two_mj = int(2 * Fraction(mj))
    if two_j < 1 or two_j % 2 == 0:
        raise QuantumNumberError("j must be a positive half-integer")
    if two_mj % 2 == 0:
        raise QuantumNumberError("m_j must be a half-integer")
    if abs(two_mj) > two_j:
        raise QuantumNumberError("|m_j| <= j violated")
    l_low = (two_j - 1) // 2
    from_low = total_coefficients_for_l(l_low, Fraction(two_j, 2), Fraction(two_mj, 2))
    from_high = total_coefficients_for_l(l_low + 1, Fraction(two_j, 2), Fraction(two_mj, 2))
    if from_low.entries != from_high.entries:
        raise ArithmeticError(f"total-current coefficients depend on l for j={j}, mj={mj}")
    return from_low


# ---------------------------------------------------------------------------


def _density(radial):
    """``R^2`` from a HydrogenRadial, a PolyExp for ``R`` or a SampledProfile for ``R``."""
    if isinstance(radial, HydrogenRadial):
        return radial.squared()
    if isinstance(radial, (PolyExp, SampledProfile)):
        return radial * radial
    raise TypeError("radial part must be a HydrogenRadial, PolyExp or SampledProfile")


def _check_normalizable(R2):
    if isinstance(R2, SampledProfile):
        weight = np.abs(R2.values) * R2.r ** 2
        if weight[-1] > 1e-6 * weight.max():
            raise IntegrabilityError("sampled radial density has not decayed at the last node")
        return
    if any(lam == 0 for _, _, lam in R2):
        raise IntegrabilityError("radial density must decay exponentially (int R^2 r^2 dr finite)")
    if R2.min_power() is not None and R2.min_power() + 2 < 0:
        raise IntegrabilityError("radial density is not square-integrable at the origin")


def current_series(state: QuantumState, radial, part: str = "total") -> MultipoleSeries:
    """Per-multipole radial current ``pi j_L(r)`` (units ``mu_B/a0^4``).

    ``radial`` is the radial wavefunction ``R``: a :class:`HydrogenRadial`, an
    exact :class:`PolyExp` (analytic path) or a :class:`SampledProfile`
    (numeric path).

    ``part`` selects ``"orbital"``, ``"spin"`` or ``"total"`` for LS states;
    J-coupled states only have ``"total"``.  The result satisfies
    ``j_phi(r, t) = (1/pi) sum_L series[L](r) P_L^1(cos t)``.
    """
    R2 = _density(radial)
    _check_normalizable(R2)
    dR2 = R2.derivative()
    R2_over_r = R2.shift(-1)
    entries: dict = {}

    def add(L, prof):
        entries[L] = prof if L not in entries else entries[L] + prof

    if state.coupling == "LS":
        if part not in ("orbital", "spin", "total"):
            raise ValueError(f"unknown part {part!r}")
        if part in ("orbital", "total"):
            for L, a in orbital_coefficients(state.l, state.ml).entries.items():
                add(L, R2_over_r * (-2 * a))
        if part in ("spin", "total"):
            l, m = state.l, state.ml
            pref = Fraction(state.two_ms * (2 * l + 1), 4) * (-1 if m % 2 else 1)
            for L, (cd, co) in spin_coefficients(l, m, state.ms).entries.items():
                add(L, (dR2 * cd + R2_over_r * co) * pref)
    else:
        if part != "total":
            raise ValueError("J-coupled states carry only the total current")
        table = total_coefficients(state.j, state.mj)
        sign = 1 if state.upper else -1
        radial_factor = (dR2 + R2_over_r * (2 - sign * (state.two_j + 1))) * Fraction(sign, 4)
        for L, a in table.entries.items():
            add(L, radial_factor * a)
    return MultipoleSeries({L: p for L, p in entries.items() if p}, "current")
