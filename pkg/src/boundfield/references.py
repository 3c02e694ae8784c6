"""Published closed forms for two hydrogen 3d states, used as regression oracles.

``orbital_321``
    orbital current of ``|n=3, l=2, m_l=1>``.
``j32_mj32``
    total current of ``|n=3, l=2, j=3/2, m_j=3/2>``.

Each component is stored as printed: ``(p/pi) * angular(t) * {exp(-2r/3) *
sum_k c_k r^k - r^q}`` with ``p/pi`` the printed prefactor in units of
``mu0 mu_B / a0^n``.  In the package's scaled units (``mu0 mu_B / (4 pi
a0^n)``) that prefactor becomes ``4 p``.

A few printed coefficients are inconsistent with the rest of the same
printed solution (for instance ``B_r`` of a dipole must be ``2 A_1 / r``).
Those are listed in :data:`ERRATA`; ``closed_form_reference(..., corrected=True)``
applies them.  Evaluation uses mpmath because the braces cancel to many
digits near the origin.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction as F

import mpmath
import numpy as np

from .radial import PolyExp

__all__ = ["ReferenceComponent", "Erratum", "ERRATA", "closed_form_reference", "closed_form_current", "EXAMPLES"]

LAM = F(2, 3)

# angular factor -> (callable, coefficient of the P_L^1 or P_L it equals)
_ANGULAR = {
    "sin": (lambda c, s: s, F(1)),                       # P_1^1
    "cos": (lambda c, s: c, F(1)),                       # P_1
    "4cos2sin-sin3": (lambda c, s: 4 * c * c * s - s ** 3, F(2, 3)),   # (2/3) P_3^1
    "5cos3-3cos": (lambda c, s: 5 * c ** 3 - 3 * c, F(2)),             # 2 P_3
}


@dataclass(frozen=True)
class ReferenceComponent:
    name: str
    L: int
    prefactor: F          # printed coefficient of 1/pi
    angular: str
    braces: tuple         # ((coefficient, power), ...) multiplying exp(-2r/3)
    pole: int             # the trailing "- r^pole"

    @property
    def scaled_prefactor(self) -> F:
        """Prefactor in ``mu0 mu_B/(4 pi a0^n)`` units (``4 pi * p/pi``)."""
        return 4 * self.prefactor

    def radial(self) -> PolyExp:
        """Exact coefficient of ``P_L^1`` (or ``P_L`` for B_r) as a PolyExp."""
        k = self.scaled_prefactor * _ANGULAR[self.angular][1]
        inner = PolyExp([(c, p, LAM) for c, p in self.braces] + [(-1, self.pole, 0)])
        return inner * k

    def __call__(self, r, theta, dps: int = 60):
        r = np.asarray(r, dtype=float)
        theta = np.asarray(theta, dtype=float)
        rb, tb = np.broadcast_arrays(r, theta)
        out = np.empty(rb.shape)
        ang = _ANGULAR[self.angular][0]
        with mpmath.workdps(dps):
            pref = mpmath.mpf(self.scaled_prefactor.numerator) / self.scaled_prefactor.denominator
            for idx in np.ndindex(rb.shape):
                rr = mpmath.mpf(float(rb[idx]))
                tt = mpmath.mpf(float(tb[idx]))
                acc = mpmath.mpf(0)
                for c, p in self.braces:
                    acc += mpmath.mpf(c.numerator) / c.denominator * rr ** p
                val = mpmath.exp(-2 * rr / 3) * acc - rr ** self.pole
                out[idx] = float(pref * ang(mpmath.cos(tt), mpmath.sin(tt)) * val)
        return out[()] if out.ndim == 0 else out


def _b(*pairs):
    return tuple((F(c), p) for c, p in pairs)


def _c(num, three_pow, five=True):
    """``num / (5 * 3**three_pow)`` (or ``num / 3**three_pow``)."""
    return F(num, (5 if five else 1) * 3 ** three_pow)


EXAMPLES: dict[str, dict[str, ReferenceComponent]] = {
    "orbital_321": {
        "A1": ReferenceComponent("A1", 1, F(1, 4), "sin", _b(
            (_c(2, 6), 3), (_c(8, 5), 2), (_c(19, 4), 1), (F(2, 9), 0), (F(2, 3), -1), (1, -2)), -2),
        "A3": ReferenceComponent("A3", 3, F(27, 2), "4cos2sin-sin3", _b(
            (_c(1, 9), 3), (_c(4, 8), 2), (_c(4, 6), 1), (_c(2, 5, False), 0), (_c(4, 4, False), -1),
            (F(2, 9), -2), (F(2, 3), -3), (1, -4)), -4),
        "Br1": ReferenceComponent("Br1", 1, F(1, 2), "cos", _b(
            (_c(2, 6), 2), (_c(8, 5), 1), (_c(19, 4), 0), (F(2, 9), -1), (F(2, 3), -2), (1, -3)), -3),
        "Br3": ReferenceComponent("Br3", 3, F(54), "5cos3-3cos", _b(
            (_c(1, 9), 2), (_c(4, 8), 1), (_c(4, 6), 0), (_c(2, 5, False), -1), (_c(4, 4, False), -2),
            (F(2, 9), -3), (F(2, 3), -4), (1, -5)), -5),
        "Bt1": ReferenceComponent("Bt1", 1, F(1, 4), "sin", _b(
            (_c(4, 7), 3), (_c(8, 6), 2), (_c(14, 5), 1), (_c(22, 4), 0), (F(2, 9), -1),
            (F(2, 3), -2), (1, -3)), -3),
        "Bt3": ReferenceComponent("Bt3", 3, F(81, 2), "4cos2sin-sin3", _b(
            (_c(2, 11), 3), (_c(4, 10), 2), (_c(4, 8), 1), (_c(4, 6), 0), (_c(2, 5, False), -1),
            (_c(4, 4, False), -2), (F(2, 9), -3), (F(2, 3), -4), (1, -5)), -5),
    },
    "j32_mj32": {
        "A1": ReferenceComponent("A1", 1, F(3, 10), "sin", _b(
            (_c(4, 8), 4), (_c(2, 4), 2), (_c(2, 2), 1), (F(2, 9), 0), (F(2, 3), -1), (1, -2)), -2),
        "A3": ReferenceComponent("A3", 3, F(-27, 20), "4cos2sin-sin3", _b(
            (_c(4, 8), 2), (_c(4, 6), 1), (_c(2, 5, False), 0), (_c(4, 4, False), -1), (F(2, 9), -2),
            (F(2, 3), -3), (1, -4), (-_c(2, 10), 4)), -4),
        "Br1": ReferenceComponent("Br1", 1, F(3, 10), "cos", _b(
            (_c(2, 4), 1), (_c(2, 2), 0), (F(2, 9), -1), (F(2, 3), -2), (1, -3), (-_c(4, 8), 3)), -3),
        "Br3": ReferenceComponent("Br3", 3, F(-27, 5), "5cos3-3cos", _b(
            (_c(4, 8), 1), (_c(4, 6), 0), (_c(2, 5, False), -1), (_c(4, 4, False), -2), (F(2, 9), -3),
            (F(2, 3), -4), (1, -5), (-_c(2, 10), 3)), -5),
        "Bt1": ReferenceComponent("Bt1", 1, F(3, 10), "sin", _b(
            (_c(4, 8), 3), (_c(4, 5), 2), (_c(2, 3), 1), (_c(8, 3), 0), (F(2, 9), -1), (F(2, 3), -2),
            (1, -3), (-_c(8, 9), 4)), -3),
        # the printed "...r/a0 4/(5 3^6)..." is read with the missing '+'
        "Bt3": ReferenceComponent("Bt3", 3, F(-81, 20), "4cos2sin-sin3", _b(
            (_c(2, 11, False), 3), (_c(8, 10), 2), (_c(4, 8), 1), (_c(4, 6), 0), (_c(2, 5, False), -1),
            (_c(4, 4, False), -2), (F(2, 9), -3), (F(2, 3), -4), (1, -5), (-_c(4, 12), 4)), -5),
    },
}


@dataclass(frozen=True)
class Erratum:
    example: str
    component: str
    description: str
    prefactor: F | None = None
    braces: dict | None = None   # power -> corrected coefficient


ERRATA: tuple[Erratum, ...] = (
    Erratum("j32_mj32", "A1", "r^4 term printed with '+'; B_r1 = 2 A_1/r needs '-'",
            braces={4: -_c(4, 8)}),
    Erratum("j32_mj32", "Br1", "prefactor printed as 3/(10 pi); 2 x A_1 prefactor is 3/(5 pi)",
            prefactor=F(3, 5)),
    Erratum("j32_mj32", "Bt1", "r^3 coefficient printed as 4/(5 3^8); -(1/r) d(r A_1)/dr gives 4/3^8",
            braces={3: _c(4, 8, False)}),
)


def _apply(comp: ReferenceComponent, err: Erratum) -> ReferenceComponent:
    out = comp
    if err.prefactor is not None:
        out = replace(out, prefactor=err.prefactor)
    if err.braces:
        braces = tuple((err.braces.get(p, c), p) for c, p in out.braces)
        out = replace(out, braces=braces)
    return out


def closed_form_reference(example: str, corrected: bool = False) -> dict[str, ReferenceComponent]:
    """Components ``A1, A3, Br1, Br3, Bt1, Bt3`` of a published example.

    With ``corrected=True`` the entries of :data:`ERRATA` are applied.
    """
    if example not in EXAMPLES:
        raise KeyError(f"unknown example {example!r}; choose from {sorted(EXAMPLES)}")
    comps = dict(EXAMPLES[example])
    if corrected:
        for err in ERRATA:
            if err.example == example:
                comps[err.component] = _apply(comps[err.component], err)
    return comps


# printed current densities as pi * j_L(r) in mu_B/a0^4 (coefficients of P_L^1)
_CURRENTS = {
    "orbital_321": {
        1: PolyExp([(F(-2, 5 * 3 ** 8), 3, LAM)]),
        3: PolyExp([(F(-4, 5 * 3 ** 9), 3, LAM)]),
    },
    # 4 r^3 e^{-2r/3} (15 - r) / (5 3^10) times -6/5 and 7/35
    "j32_mj32": {
        1: PolyExp([(F(4 * 15, 5 * 3 ** 10) * F(-6, 5), 3, LAM), (F(-4, 5 * 3 ** 10) * F(-6, 5), 4, LAM)]),
        3: PolyExp([(F(4 * 15, 5 * 3 ** 10) * F(7, 35), 3, LAM), (F(-4, 5 * 3 ** 10) * F(7, 35), 4, LAM)]),
    },
}


def closed_form_current(example: str) -> dict[int, PolyExp]:
    """Printed current multipoles ``{L: pi j_L(r)}`` of a published example."""
    if example not in _CURRENTS:
        raise KeyError(f"unknown example {example!r}; choose from {sorted(_CURRENTS)}")
    return dict(_CURRENTS[example])
