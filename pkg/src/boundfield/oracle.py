"""Brute-force current densities straight from the wavefunctions.

Nothing here touches the Clebsch-Gordan or multipole machinery: spherical
harmonics come from explicit derivatives of Legendre polynomials, and the
spin current of a J eigenstate is built from the Pauli matrices and a
numerical curl.  Slow on purpose.

All currents are ``j_phi`` in ``mu_B / a0^4`` (multiply by ``pi`` to compare
with :func:`boundfield.multipole.current_series`).  Radial inputs ``R2`` and
``dR2`` are callables for ``R^2`` and ``d(R^2)/dr``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import legendre as npleg

from .angular import doubled

__all__ = [
    "PoleProximityError",
    "ylm",
    "direct_orbital_current",
    "direct_spin_current",
    "SpinDensity",
    "spinor_weights",
    "spin_density",
    "direct_total_current",
]

FD_STEP = 1e-4


class PoleProximityError(ValueError):
    """Evaluation too close to ``theta = 0`` or ``pi`` for a ``1/sin(theta)`` form."""


def ylm(l: int, m: int, theta, phi=0.0):
    """``Y_l^m`` with the Condon-Shortley phase, from ``d^m P_l / dx^m``."""
    if abs(m) > l:
        return np.zeros(np.broadcast(np.asarray(theta), np.asarray(phi)).shape, dtype=complex)
    am = abs(m)
    theta = np.asarray(theta, dtype=float)
    x = np.cos(theta)
    deriv = npleg.Legendre.basis(l).deriv(am) if am else npleg.Legendre.basis(l)
    plm = (-1) ** am * np.sin(theta) ** am * deriv(x)
    norm = math.sqrt((2 * l + 1) / (4 * math.pi) * math.factorial(l - am) / math.factorial(l + am))
    y = norm * plm * np.exp(1j * am * np.asarray(phi, dtype=float))
    if m < 0:
        y = (-1) ** am * np.conj(y)
    return y


def _abs2(l, m, theta, phi=0.0):
    return np.abs(ylm(l, m, theta, phi)) ** 2


def _check_pole(theta, needs):
    if needs and np.any(np.abs(np.sin(np.asarray(theta, dtype=float))) < 1e-12):
        raise PoleProximityError("sin(theta) < 1e-12: too close to the axis")


def _fd(fn, theta, h=FD_STEP):
    """Five-point central difference in ``theta``."""
    return (-fn(theta + 2 * h) + 8 * fn(theta + h) - 8 * fn(theta - h) + fn(theta - 2 * h)) / (12 * h)


def direct_orbital_current(l: int, m: int, R2, r, theta):
    """``-2 (R^2/r) m |Y_l^m|^2 / sin(theta)``."""
    r = np.asarray(r, dtype=float)
    theta = np.asarray(theta, dtype=float)
    if m == 0:
        return np.zeros(np.broadcast(r, theta).shape)
    _check_pole(theta, True)
    return -2.0 * R2(r) / r * m * _abs2(l, m, theta) / np.sin(theta)


def _dtheta_abs2(l, m, theta, mode):
    if mode == "fd":
        return _fd(lambda t: _abs2(l, m, t), theta)
    if mode != "ladder":
        raise ValueError("mode is 'ladder' or 'fd'")
    # d/dt Y^m = m cot(t) Y^m + sqrt((l-m)(l+m+1)) e^{-i phi} Y^{m+1}, at phi = 0
    y = ylm(l, m, theta)
    up = math.sqrt((l - m) * (l + m + 1)) * ylm(l, m + 1, theta) if m < l else 0.0
    with np.errstate(divide="ignore", invalid="ignore"):
        cot_term = np.where(m == 0, 0.0, m * np.cos(theta) / np.sin(theta) * np.abs(y) ** 2)
    return 2 * cot_term + 2 * np.real(np.conj(y) * up)


def direct_spin_current(l: int, m: int, ms, R2, dR2, r, theta, mode: str = "ladder"):
    """``2 m_s [sin(t) d(R^2)/dr |Y|^2 + (cos(t)/r) R^2 d|Y|^2/dt]``.

    ``mode="ladder"`` takes the angular derivative from the raising identity,
    ``mode="fd"`` from a five-point finite difference.
    """
    r = np.asarray(r, dtype=float)
    theta = np.asarray(theta, dtype=float)
    two_ms = doubled(ms)
    if mode == "ladder":
        _check_pole(theta, m != 0)
    a2 = _abs2(l, m, theta)
    d = _dtheta_abs2(l, m, theta, mode)
    return two_ms * (np.sin(theta) * dR2(r) * a2 + np.cos(theta) / r * R2(r) * d)


@dataclass(frozen=True)
class SpinDensity:
    """Angular parts of ``<sigma>`` in spherical components; multiply by ``R^2``."""

    sigma_r: np.ndarray
    sigma_theta: np.ndarray
    sigma_phi: np.ndarray


def spinor_weights(l: int, two_j: int, two_mj: int) -> tuple[float, float, int]:
    """``(a, b, m)`` with ``Psi = R (a Y_l^m up + b Y_l^{m+1} down)``."""
    m = (two_mj - 1) // 2
    n = 2 * l + 1
    if two_j == 2 * l + 1:
        return math.sqrt((l + m + 1) / n), math.sqrt((l - m) / n), m
    if two_j == 2 * l - 1:
        return math.sqrt((l - m) / n), -math.sqrt((l + m + 1) / n), m
    raise ValueError("j must be l +/- 1/2")


_PAULI = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)


def spin_density(l: int, two_j: int, two_mj: int, theta, phi=0.0) -> SpinDensity:
    """``<sigma_r>, <sigma_theta>, <sigma_phi>`` per unit ``R^2``, from the Pauli matrices."""
    a, b, m = spinor_weights(l, two_j, two_mj)
    theta, phi = np.broadcast_arrays(np.asarray(theta, dtype=float), np.asarray(phi, dtype=float))
    up = a * ylm(l, m, theta, phi)
    dn = b * ylm(l, m + 1, theta, phi)
    # cartesian expectation values psi^dagger sigma_i psi
    cart = []
    for s in _PAULI:
        v = (np.conj(up) * (s[0, 0] * up + s[0, 1] * dn) + np.conj(dn) * (s[1, 0] * up + s[1, 1] * dn))
        cart.append(v)
    sx, sy, sz = cart
    st, ct, sp, cp = np.sin(theta), np.cos(theta), np.sin(phi), np.cos(phi)
    s_r = st * cp * sx + st * sp * sy + ct * sz
    s_t = ct * cp * sx + ct * sp * sy - st * sz
    s_p = -sp * sx + cp * sy
    # the imaginary parts vanish identically; keep only the real values
    return SpinDensity(np.real(s_r), np.real(s_t), np.real(s_p))


def _factorized(l, two_j, m, R2, dR2, r, theta):
    y0 = ylm(l, m, theta)
    y1 = ylm(l, m + 1, theta)
    cross = np.real(np.conj(y0) * y1)       # Y^m* Y^{m+1} e^{-i phi} at phi = 0
    root = math.sqrt((l - m) * (l + m + 1))
    if two_j == 2 * l - 1:
        radial = dR2(r) + 2 * (l + 1) * R2(r) / r
        ang = np.sin(theta) * ((l - m) * np.abs(y0) ** 2 - (l + m + 1) * np.abs(y1) ** 2) + 2 * np.cos(theta) * root * cross
    else:
        radial = dR2(r) - 2 * l * R2(r) / r
        ang = np.sin(theta) * ((l + m + 1) * np.abs(y0) ** 2 - (l - m) * np.abs(y1) ** 2) - 2 * np.cos(theta) * root * cross
    return radial * ang / (2 * l + 1)


def _chain(l, two_j, two_mj, R2, dR2, r, theta, phi):
    a, b, m = spinor_weights(l, two_j, two_mj)
    orb = -2.0 * R2(r) / (r * np.sin(theta)) * (
        m * a * a * _abs2(l, m, theta) + (m + 1) * b * b * _abs2(l, m + 1, theta))
    sd = spin_density(l, two_j, two_mj, theta, phi)
    d_sr = _fd(lambda t: spin_density(l, two_j, two_mj, t, phi).sigma_r, theta)
    # j_s = -(1/r) [d/dr (r <s_t>) - d/dt <s_r>] with <s> = R^2 g(theta)
    spin = -(1.0 / r) * ((R2(r) + r * dR2(r)) * sd.sigma_theta - R2(r) * d_sr)
    return orb + spin


def direct_total_current(l: int, j, mj, R2, dR2, r, theta, phi: float = 0.37):
    """Total current of ``|l, j, m_j>`` by two independent routes.

    Returns ``(factorized, chain)``: the closed product of a radial bracket
    and an angular function, and the sum of the orbital current of both
    spinor components plus the curl of the spin density (evaluated at
    azimuth ``phi`` with a numerical ``theta`` derivative).
    """
    two_j, two_mj = doubled(j), doubled(mj)
    if two_j not in (2 * l - 1, 2 * l + 1) or two_j < 1:
        raise ValueError("j = l +/- 1/2 violated")
    if abs(two_mj) > two_j or two_mj % 2 == 0:
        raise ValueError("|m_j| <= j (half-integer) violated")
    r = np.asarray(r, dtype=float)
    theta = np.asarray(theta, dtype=float)
    _check_pole(theta, True)
    m = (two_mj - 1) // 2
    return _factorized(l, two_j, m, R2, dR2, r, theta), _chain(l, two_j, two_mj, R2, dR2, r, theta, phi)
