"""Vector potential, magnetic field and field lines of an azimuthal multipole current.

The potential is ``A_phi = sum_L A_L(r) P_L^1(cos t)`` and its curl is::

    B_r = sum_L L(L+1) A_L(r)/r  P_L(cos t)
    B_t = -sum_L (1/r) d(r A_L)/dr P_L^1(cos t)

using ``(1/sin t) d(sin t P_L^1)/dt = L(L+1) P_L``, so nothing divides by
``sin t`` and the poles are ordinary points.  Units: lengths in ``a0``,
``A`` in ``mu0 mu_B/(4 pi a0^2)``, ``B`` in ``mu0 mu_B/(4 pi a0^3)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .angular import assoc_legendre
from .multipole import current_series
from .radial import MultipoleSeries, PolyExp, SampledProfile, vector_potential_profile

__all__ = [
    "SingularityError",
    "StagnationError",
    "potential_series",
    "MultipoleField",
    "field_from_potential",
    "field_for_state",
    "FieldSample",
    "sample_grid",
    "FieldLine",
    "trace_field_line",
]


class SingularityError(ValueError):
    """Field requested at the origin."""


class StagnationError(RuntimeError):
    """Field-line tracing hit a point where ``|B|`` vanishes."""


def _sampled_potential(j_L: SampledProfile, L: int) -> tuple[SampledProfile, float]:
    r = j_L.r
    inner, err_in = j_L.shift(L + 2).cumulative(pointwise=True)
    outer_cum, err_out = j_L.shift(1 - L).cumulative(pointwise=True)
    outer = outer_cum[-1] - outer_cum
    A = 4.0 / (2 * L + 1) * (inner * r ** (-(L + 1)) + outer * r ** L)
    # the inner integral misses [0, r0]; that piece decays like r^-(L+1)
    trunc = j_L.shift(L + 2).truncation_estimate() * r ** (-(L + 1))
    err_out = err_out[-1] + err_out   # both ends of int_r^inf carry error
    err = 4.0 / (2 * L + 1) * (err_in * r ** (-(L + 1)) + err_out * r ** L + trunc)
    return SampledProfile(r, A), float(np.max(err))


def potential_series(current: MultipoleSeries) -> MultipoleSeries:
    """``A_L`` for every multipole of a current series.

    Analytic (PolyExp) entries are integrated exactly; sampled ones by spline
    quadrature, with the error estimates kept in ``potential.errors``.
    """
    if current.quantity != "current":
        raise ValueError("expected a current series")
    entries, errors = {}, {}
    for L, j_L in current:
        if isinstance(j_L, PolyExp):
            entries[L] = vector_potential_profile(j_L, L)
        else:
            entries[L], errors[L] = _sampled_potential(j_L, L)
    series = MultipoleSeries(entries, "vector_potential")
    object.__setattr__(series, "errors", errors)
    return series


@dataclass
class _Component:
    L: int
    A: object
    Br: object   # coefficient of P_L
    Bt: object   # coefficient of P_L^1


def _components(L, A):
    Br = A.shift(-1) * (L * (L + 1) if isinstance(A, PolyExp) else float(L * (L + 1)))
    Bt = -(A.shift(1).derivative()).shift(-1)
    return _Component(L, A, Br, Bt)


class MultipoleField:
    """Callable ``(r, theta) -> (B_r, B_theta)`` assembled multipole by multipole.

    Each order is kept separately: ``field.B_r(r, t, orders=[3])`` is the
    octupole part alone.  Analytic inputs stay exact (PolyExp radial parts).
    """

    def __init__(self, potential: MultipoleSeries):
        if potential.quantity != "vector_potential":
            raise ValueError("expected a vector-potential series")
        self.potential = potential
        self._parts = {L: _components(L, A) for L, A in potential}

    @property
    def orders(self) -> list[int]:
        return list(self._parts)

    @property
    def is_analytic(self) -> bool:
        return self.potential.is_analytic

    def radial(self, L: int) -> tuple:
        """``(A_L, B_r coefficient of P_L, B_theta coefficient of P_L^1)``."""
        c = self._parts[L]
        return c.A, c.Br, c.Bt

    def _select(self, orders):
        if orders is None:
            return self._parts.values()
        return [self._parts[L] for L in orders if L in self._parts]

    @staticmethod
    def _prep(r, theta):
        r = np.asarray(r, dtype=float)
        if np.any(r <= 0):
            raise SingularityError("the multipole field is evaluated only for r > 0")
        theta = np.asarray(theta, dtype=float)
        return r, theta

    def A_phi(self, r, theta, orders=None):
        r, theta = self._prep(r, theta)
        x = np.cos(theta)
        out = np.zeros(np.broadcast(r, x).shape)
        for c in self._select(orders):
            out = out + c.A(r) * assoc_legendre(c.L, 1, x)
        return out[()] if out.ndim == 0 else out

    def B_r(self, r, theta, orders=None):
        r, theta = self._prep(r, theta)
        x = np.cos(theta)
        out = np.zeros(np.broadcast(r, x).shape)
        for c in self._select(orders):
            out = out + c.Br(r) * assoc_legendre(c.L, 0, x)
        return out[()] if out.ndim == 0 else out

    def B_theta(self, r, theta, orders=None):
        r, theta = self._prep(r, theta)
        x = np.cos(theta)
        out = np.zeros(np.broadcast(r, x).shape)
        for c in self._select(orders):
            out = out + c.Bt(r) * assoc_legendre(c.L, 1, x)
        return out[()] if out.ndim == 0 else out

    def __call__(self, r, theta, orders=None):
        return self.B_r(r, theta, orders), self.B_theta(r, theta, orders)

    def flux_function(self, r, theta):
        """``r sin(t) A_phi``: constant along every field line."""
        r, theta = self._prep(r, theta)
        return r * np.sin(theta) * self.A_phi(r, theta)

    def point(self, r: float, theta: float) -> tuple[float, float]:
        """Scalar fast path used by the tracer."""
        x = math.cos(theta)
        s = math.sin(theta)
        br = bt = 0.0
        for c in self._parts.values():
            p0, p1 = _scalar_legendre(c.L, x, s)
            if isinstance(c.Br, PolyExp):
                br += c.Br.scalar(r) * p0
                bt += c.Bt.scalar(r) * p1
            else:
                br += float(c.Br(r)) * p0
                bt += float(c.Bt(r)) * p1
        return br, bt


def _scalar_legendre(L, x, s):
    """``(P_L(x), P_L^1(x))`` for a scalar ``x = cos t``, ``s = sin t``."""
    p0_prev, p0 = 1.0, x
    p1_prev, p1 = 0.0, s
    if L == 0:
        return 1.0, 0.0
    for ell in range(2, L + 1):
        p0_prev, p0 = p0, ((2 * ell - 1) * x * p0 - (ell - 1) * p0_prev) / ell
        p1_prev, p1 = p1, ((2 * ell - 1) * x * p1 - ell * p1_prev) / (ell - 1)
    return p0, p1


def field_from_potential(A: MultipoleSeries) -> MultipoleField:
    return MultipoleField(A)


def field_for_state(state, radial, part: str = "total") -> MultipoleField:
    """State -> current multipoles -> potential -> field, in one call."""
    return MultipoleField(potential_series(current_series(state, radial, part)))


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FieldSample:
    r: float
    theta: float
    B_r: float
    B_theta: float
    components: tuple = ()   # ((L, B_r_L, B_theta_L), ...) when requested


def sample_grid(fld, r_range=(0.05, 30.0), theta_range=None, n_r: int = 50,
                n_theta: int = 37, split_multipoles: bool = False) -> list[FieldSample]:
    """Field on a log-spaced ``r`` x uniform ``theta`` grid, r-major order.

    With ``theta_range=None`` the ``theta`` nodes are cell centres of
    ``[0, pi]``, which keeps the poles out of the grid.
    """
    r_min, r_max = map(float, r_range)
    if not 0 < r_min < r_max:
        raise ValueError("need 0 < r_min < r_max")
    if n_r < 2 or n_theta < 2:
        raise ValueError("need at least 2 nodes in r and theta")
    rs = np.geomspace(r_min, r_max, n_r)
    if theta_range is None:
        ts = (np.arange(n_theta) + 0.5) * math.pi / n_theta
    else:
        t0, t1 = map(float, theta_range)
        if not 0 <= t0 < t1 <= math.pi:
            raise ValueError("need 0 <= theta_min < theta_max <= pi")
        ts = np.linspace(t0, t1, n_theta)
    R, T = np.meshgrid(rs, ts, indexing="ij")
    br, bt = fld(R, T)
    comps = {}
    if split_multipoles and isinstance(fld, MultipoleField):
        for L in fld.orders:
            comps[L] = fld(R, T, orders=[L])
    out = []
    for i in range(n_r):
        for k in range(n_theta):
            extra = tuple((L, float(c[0][i, k]), float(c[1][i, k])) for L, c in comps.items())
            out.append(FieldSample(float(rs[i]), float(ts[k]), float(br[i, k]), float(bt[i, k]), extra))
    return out


# ---------------------------------------------------------------------------


@dataclass
class FieldLine:
    """Polyline of ``(r, theta)`` points in a meridian half-plane."""

    points: np.ndarray
    termination: str            # "closed", "left_domain" or "step_limit"
    closure_gap: float = math.nan
    degenerate: bool = False    # started on the symmetry axis
    start: tuple = field(default=(math.nan, math.nan))

    @property
    def xz(self) -> np.ndarray:
        """Cartesian meridian coordinates ``(r sin t, r cos t)``."""
        r, t = self.points[:, 0], self.points[:, 1]
        return np.column_stack([r * np.sin(t), r * np.cos(t)])

    def __len__(self):
        return len(self.points)


def _direction(fld, x, z):
    r = math.hypot(x, z)
    t = math.atan2(x, z)
    br, bt = fld.point(r, t) if hasattr(fld, "point") else map(float, fld(r, t))
    s, c = math.sin(t), math.cos(t)
    bx = br * s + bt * c
    bz = br * c - bt * s
    norm = math.hypot(bx, bz)
    if norm < 1e-14:
        raise StagnationError(f"|B| = {norm:.3g} at r={r:.6g}, theta={t:.6g}")
    return bx / norm, bz / norm


def _segment_distance(p, a, b):
    ab = b - a
    denom = float(ab @ ab)
    u = 0.0 if denom == 0 else min(1.0, max(0.0, float((p - a) @ ab) / denom))
    return float(np.linalg.norm(a + u * ab - p))


def trace_field_line(fld, start, arc_step: float = 0.01, max_steps: int = 10**6,
                     r_min: float = 0.05, r_max: float = 100.0, min_steps: int = 10) -> FieldLine:
    """Follow ``B`` from ``start = (r, theta)`` with fixed-arc-length RK4.

    The tracer works in the Cartesian meridian plane, so the axis is not
    special.  It stops when the line passes within ``arc_step`` of the start
    after at least ``min_steps`` steps (closed), leaves
    ``r_min <= r <= r_max`` (left_domain), or after ``max_steps``.
    Raises :class:`StagnationError` where ``|B| < 1e-14``.
    """
    r0, t0 = map(float, start)
    if not r_min <= r0 <= r_max:
        raise ValueError("start point outside the tracing domain")
    degenerate = math.sin(t0) == 0.0 or abs(math.sin(t0)) < 1e-15
    p0 = np.array([r0 * math.sin(t0), r0 * math.cos(t0)])
    pts = [p0]
    x, z = p0
    h = arc_step
    termination, gap = "step_limit", math.nan
    def rk4(x, z):
        k1 = _direction(fld, x, z)
        k2 = _direction(fld, x + 0.5 * h * k1[0], z + 0.5 * h * k1[1])
        k3 = _direction(fld, x + 0.5 * h * k2[0], z + 0.5 * h * k2[1])
        k4 = _direction(fld, x + h * k3[0], z + h * k3[1])
        return (x + h / 6 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0]),
                z + h / 6 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1]))

    for step in range(1, max_steps + 1):
        x, z = rk4(x, z)
        if degenerate:
            x = 0.0
        cur = np.array([x, z])
        r = math.hypot(x, z)
        if not r_min <= r <= r_max:
            termination = "left_domain"
            break
        if step >= min_steps:
            d = _segment_distance(p0, pts[-1], cur)
            if d <= arc_step:
                # the closest approach may lie on the following segment
                nxt = np.array(rk4(x, z))
                gap = min(d, _segment_distance(p0, cur, nxt))
                pts.append(cur)
                termination = "closed"
                break
        pts.append(cur)
    xz = np.array(pts)
    rt = np.column_stack([np.hypot(xz[:, 0], xz[:, 1]), np.arctan2(xz[:, 0], xz[:, 1])])
    return FieldLine(rt, termination, gap, degenerate, (r0, t0))
