"""scikit-learn style wrapper: ``fit`` a bound state, ``predict`` at ``(r, theta)`` points."""
from __future__ import annotations

import math

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .angular import assoc_legendre
from .field import MultipoleField, potential_series
from .multipole import current_series
from .radial import hydrogen_radial
from .states import QuantumState

__all__ = ["BoundStateField"]


class BoundStateField(BaseEstimator):
    """Magnetic quantities of one electron state as an estimator.

    Parameters
    ----------
    quantity : {"field", "potential", "current"}
        What :meth:`predict` returns: ``(B_r, B_theta)`` columns, ``A_phi`` or
        ``j_phi`` (scaled units, see the README).
    part : {"total", "orbital", "spin"}
        Current contribution for LS states; J states only have "total".
    radial : None, HydrogenRadial, PolyExp or SampledProfile
        Radial wavefunction.  ``None`` uses the hydrogenic ``R_nl`` of the state.

    Nothing is learned from data: ``fit`` takes the state itself as ``X``.
    """

    def __init__(self, quantity: str = "field", part: str = "total", radial=None):
        self.quantity = quantity
        self.part = part
        self.radial = radial

    def fit(self, X: QuantumState, y=None):
        if not isinstance(X, QuantumState):
            raise TypeError("fit expects a QuantumState")
        if self.quantity not in ("field", "potential", "current"):
            raise ValueError(f"unknown quantity {self.quantity!r}")
        radial = self.radial
        if radial is None:
            if X.n is None:
                raise ValueError("state has no n; pass a radial profile")
            radial = hydrogen_radial(X.n, X.l)
        self.state_ = X
        self.current_ = current_series(X, radial, self.part)
        self.potential_ = potential_series(self.current_)
        self.field_ = MultipoleField(self.potential_)
        self.orders_ = list(self.current_.orders)
        return self

    def predict(self, X):
        """``X``: array of shape ``(n, 2)`` holding ``(r, theta)`` rows."""
        check_is_fitted(self, "field_")
        X = np.asarray(X, dtype=float)
        if X.ndim != 2 or X.shape[1] != 2:
            raise ValueError("X must have shape (n_samples, 2): columns r, theta")
        r, t = X[:, 0], X[:, 1]
        if self.quantity == "field":
            return np.column_stack(self.field_(r, t))
        if self.quantity == "potential":
            return self.field_.A_phi(r, t)
        out = np.zeros_like(r)
        for L, prof in self.current_:
            out = out + prof(r) * assoc_legendre(L, 1, np.cos(t))
        return out / math.pi
