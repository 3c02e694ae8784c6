"""Bound-state labels: LS-coupled ``(n, l, m_l, m_s)`` or J-coupled ``(n, l, j, m_j)``."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .angular import doubled

__all__ = ["QuantumNumberError", "QuantumState"]


class QuantumNumberError(ValueError):
    """Quantum numbers violating a selection rule; the message names the rule."""


@dataclass(frozen=True)
class QuantumState:
    """An angular-momentum eigenstate of one electron.

    Half-integers are stored doubled: ``two_ms``, ``two_j`` and ``two_mj``.
    Build instances with :meth:`ls` or :meth:`jj`, which validate.
    """

    coupling: str
    l: int
    n: int | None = None
    ml: int | None = None
    two_ms: int | None = None
    two_j: int | None = None
    two_mj: int | None = None

    def __post_init__(self):
        if self.coupling not in ("LS", "J"):
            raise QuantumNumberError(f"unknown coupling {self.coupling!r}")
        if self.l < 0:
            raise QuantumNumberError("l >= 0 violated")
        if self.n is not None:
            if self.n < 1:
                raise QuantumNumberError("n >= 1 violated")
            if self.l >= self.n:
                raise QuantumNumberError("l <= n-1 violated")
        if self.coupling == "LS":
            if self.ml is None or abs(self.ml) > self.l:
                raise QuantumNumberError("|m_l| <= l violated")
            if self.two_ms not in (-1, 1):
                raise QuantumNumberError("m_s in {-1/2, +1/2} violated")
        else:
            if self.two_j not in (2 * self.l - 1, 2 * self.l + 1) or self.two_j < 1:
                raise QuantumNumberError("j = l +/- 1/2 (j >= 1/2) violated")
            if self.two_mj is None or self.two_mj % 2 == 0:
                raise QuantumNumberError("m_j must be a half-integer")
            if abs(self.two_mj) > self.two_j:
                raise QuantumNumberError("|m_j| <= j violated")

    @classmethod
    def ls(cls, l: int, ml: int, ms="1/2", n: int | None = None) -> "QuantumState":
        return cls("LS", int(l), n=n, ml=int(ml), two_ms=doubled(ms))

    @classmethod
    def jj(cls, l: int, j, mj, n: int | None = None) -> "QuantumState":
        try:
            two_j, two_mj = doubled(j), doubled(mj)
        except ValueError as exc:
            raise QuantumNumberError(str(exc)) from None
        return cls("J", int(l), n=n, two_j=two_j, two_mj=two_mj)

    @property
    def ms(self) -> Fraction | None:
        return None if self.two_ms is None else Fraction(self.two_ms, 2)

    @property
    def j(self) -> Fraction | None:
        return None if self.two_j is None else Fraction(self.two_j, 2)

    @property
    def mj(self) -> Fraction | None:
        return None if self.two_mj is None else Fraction(self.two_mj, 2)

    @property
    def upper(self) -> bool:
        """True for ``j = l + 1/2``."""
        return self.two_j == 2 * self.l + 1

    @property
    def spinor_m(self) -> int:
        """``m = m_j - 1/2``: the spin-up component carries ``Y_l^m``."""
        return (self.two_mj - 1) // 2

    def label(self) -> str:
        n = "" if self.n is None else f"{self.n},"
        if self.coupling == "LS":
            return f"|{n}{self.l},ml={self.ml},ms={self.ms}>"
        return f"|{n}{self.l},j={self.j},mj={self.mj}>"
