"""Self-verification suites behind ``boundfield verify``.

Each suite returns a list of :class:`Check` records; :func:`run` bundles them
into a JSON-serializable report.  Exact checks use ``tolerance = 0`` and
``max_error`` 0 (pass) or 1 (fail).  Numerical errors are relative to the
largest magnitude of the reference quantity over the sample.
"""
from __future__ import annotations

import itertools
import json
import math
import time
import warnings
from dataclasses import asdict, dataclass
from fractions import Fraction as F

import numpy as np

from . import oracle
from .angular import assoc_legendre, clebsch_gordan, product_expand, spherical_harmonic
from .field import field_for_state
from .multipole import current_series, orbital_coefficients, total_coefficients
from .radial import hydrogen_radial, quad_oracle
from .references import ERRATA, closed_form_current, closed_form_reference
from .states import QuantumState

__all__ = ["Check", "SCOPES", "run", "report_json", "TABLE_ORBITAL", "TABLE_TOTAL"]

# published coefficient tables, keyed by (l, m) and (j, m_j)
TABLE_ORBITAL = {
    (1, 1): {1: F(3, 8)},
    (2, 1): {1: F(3, 8), 3: F(2, 8)},
    (2, 2): {1: F(6, 8), 3: F(-1, 8)},
    (3, 1): {1: F(3, 8), 3: F(7, 24), 5: F(5, 24)},
    (3, 2): {1: F(6, 8), 3: F(7, 24), 5: F(-4, 24)},
    (3, 3): {1: F(9, 8), 3: F(-7, 24), 5: F(1, 24)},
}
TABLE_TOTAL = {
    ("7/2", "7/2"): {1: F(4, 3), 3: F(-14, 33), 5: F(4, 39), 7: F(-5, 429)},
    ("7/2", "5/2"): {1: F(20, 21), 3: F(10, 33), 5: F(-92, 273), 7: F(35, 429)},
    ("7/2", "3/2"): {1: F(4, 7), 3: F(14, 33), 5: F(68, 273), 7: F(-35, 143)},
    ("7/2", "1/2"): {1: F(4, 21), 3: F(2, 11), 5: F(20, 91), 7: F(175, 429)},
    ("5/2", "5/2"): {1: F(9, 7), 3: F(-1, 3), 5: F(1, 21)},
    ("5/2", "3/2"): {1: F(27, 35), 3: F(7, 15), 5: F(-5, 21)},
    ("5/2", "1/2"): {1: F(9, 35), 3: F(4, 15), 5: F(10, 21)},
    ("3/2", "3/2"): {1: F(6, 5), 3: F(-1, 5)},
    ("3/2", "1/2"): {1: F(2, 5), 3: F(3, 5)},
    ("1/2", "1/2"): {1: F(1)},
}

EXAMPLE_STATES = {
    "orbital_321": (QuantumState.ls(2, 1, "1/2", n=3), "orbital"),
    "j32_mj32": (QuantumState.jj(2, "3/2", "3/2", n=3), "total"),
}


@dataclass
class Check:
    name: str
    status: str            # "pass", "fail" or "reported" (known misprint, not a failure)
    max_error: float
    tolerance: float
    detail: str = ""


def _num(name, err, tol, detail=""):
    err = float(err)
    return Check(name, "pass" if err <= tol else "fail", err, tol, detail)


def _exact(name, ok, detail=""):
    return Check(name, "pass" if ok else "fail", 0.0 if ok else 1.0, 0.0, detail)


def _rel(a, b):
    a, b = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    scale = np.max(np.abs(b))
    return float(np.max(np.abs(a - b)) / scale) if scale else float(np.max(np.abs(a)))


# -- tables ------------------------------------------------------------------


def suite_tables() -> list[Check]:
    out = []
    for (l, m), want in TABLE_ORBITAL.items():
        got = orbital_coefficients(l, m).entries
        out.append(_exact(f"table_orbital l={l} m={m}", got == want, str({k: str(v) for k, v in got.items()})))
    for (j, mj), want in TABLE_TOTAL.items():
        got = total_coefficients(j, mj).entries
        out.append(_exact(f"table_total j={j} mj={mj}", got == want, str({k: str(v) for k, v in got.items()})))
    return out


# -- identities --------------------------------------------------------------


def _P(L, M, x):
    if L < 0 or M > L:
        return np.zeros_like(x)
    return assoc_legendre(L, M, x)


def _squarefree_split(n: int) -> tuple[int, int]:
    """``n = k^2 f`` with ``f`` squarefree; returns ``(k, f)``."""
    k, f, d = 1, 1, 2
    while d * d <= n:
        while n % (d * d) == 0:
            n //= d * d
            k *= d
        if n % d == 0:
            n //= d
            f *= d
        d += 1
    return k, f * n


def _accumulate(acc: dict, x) -> None:
    """Add a signed square root of a rational to ``{squarefree: coefficient}`` exactly."""
    if x.is_zero:
        return
    q = x.radicand
    k, f = _squarefree_split(q.numerator * q.denominator)
    acc[f] = acc.get(f, F(0)) + x.sign * F(k, q.denominator)


def _half_range(two):
    return range(-two, two + 1, 2)


def suite_identities(max_two_j: int = 6) -> list[Check]:
    out = []
    # CG orthogonality, sum over m1 of C^{JM} C^{J'M} = delta_{JJ'}, exact
    ok = True
    for tj1, tj2 in itertools.product(range(0, max_two_j + 1), repeat=2):
        for tJ, tJp in itertools.product(range(abs(tj1 - tj2), tj1 + tj2 + 1, 2), repeat=2):
            for tM in _half_range(min(tJ, tJp)):
                acc = {}
                for tm1 in _half_range(tj1):
                    tm2 = tM - tm1
                    if abs(tm2) > tj2:
                        continue
                    a = clebsch_gordan(F(tj1, 2), F(tm1, 2), F(tj2, 2), F(tm2, 2), F(tJ, 2), F(tM, 2))
                    b = clebsch_gordan(F(tj1, 2), F(tm1, 2), F(tj2, 2), F(tm2, 2), F(tJp, 2), F(tM, 2))
                    _accumulate(acc, a * b)
                want = {1: F(1)} if tJ == tJp else {}
                ok &= {k: v for k, v in acc.items() if v} == want
    out.append(_exact("cg_orthogonality", ok))

    # selection rules: parity of C^{L0}_{l0l0}, triangle and M = m1 + m2
    ok = True
    for l1, l2, L in itertools.product(range(5), repeat=3):
        if (l1 + l2 + L) % 2 and abs(l1 - l2) <= L <= l1 + l2:
            ok &= clebsch_gordan(l1, 0, l2, 0, L, 0).is_zero
        for m1, m2 in itertools.product(range(-l1, l1 + 1), range(-l2, l2 + 1)):
            for M in range(-L, L + 1):
                if M != m1 + m2 or not abs(l1 - l2) <= L <= l1 + l2:
                    ok &= clebsch_gordan(l1, m1, l2, m2, L, M).is_zero
    out.append(_exact("cg_selection_rules", ok))

    # associated Legendre orthogonality by Gauss-Legendre quadrature
    x, w = np.polynomial.legendre.leggauss(64)
    err = 0.0
    for M in range(0, 4):
        for p, q in itertools.product(range(M, 10), repeat=2):
            val = np.dot(w, assoc_legendre(p, M, x) * assoc_legendre(q, M, x))
            want = 2 / (2 * q + 1) * math.factorial(q + M) / math.factorial(q - M) if p == q else 0.0
            scale = 2 / (2 * q + 1) * math.factorial(q + M) / math.factorial(q - M)
            err = max(err, abs(val - want) / scale)
    out.append(_num("legendre_orthogonality", err, 1e-12))

    # recurrences: sin P_l^m, cos P_l^m, dP_L/dt = -P_L^1, cos dP_L/dt
    t = np.linspace(0.01, math.pi - 0.01, 301)
    c, s = np.cos(t), np.sin(t)
    e_sin = e_cos = e_d = e_cd = 0.0
    for lv in range(0, 9):
        for m in range(0, lv + 1):
            rhs = (_P(lv + 1, m + 1, c) - _P(lv - 1, m + 1, c)) / (2 * lv + 1)
            e_sin = max(e_sin, _rel(s * _P(lv, m, c), rhs))
            rhs = ((lv - m + 1) * _P(lv + 1, m, c) + (lv + m) * _P(lv - 1, m, c)) / (2 * lv + 1)
            e_cos = max(e_cos, _rel(c * _P(lv, m, c), rhs))
        if lv == 0:
            continue
        h = 1e-5
        d = (_P(lv, 0, np.cos(t + h)) - _P(lv, 0, np.cos(t - h))) / (2 * h)
        e_d = max(e_d, _rel(d, -_P(lv, 1, c)))
        rhs = -(lv * _P(lv + 1, 1, c) + (lv + 1) * _P(lv - 1, 1, c)) / (2 * lv + 1)
        e_cd = max(e_cd, _rel(c * -_P(lv, 1, c), rhs))
    out.append(_num("recurrence_sin_P", e_sin, 1e-12))
    out.append(_num("recurrence_cos_P", e_cos, 1e-12))
    # the theta derivative is checked by central differences, hence a looser bound
    out.append(_num("derivative_P_L_is_minus_P_L1", e_d, 1e-8, "central difference, h=1e-5"))
    out.append(_num("recurrence_cos_dP", e_cd, 1e-12))

    # sqrt(L(L+1)) C^{L1}_{l -m l m+1} = sqrt((l-m)(l+m+1)) (C^{L0}_{l -(m+1) l m+1} + C^{L0}_{l -m l m})
    ok = True
    for lv in range(0, 5):
        for m in range(-lv, lv):
            for L in range(1, 2 * lv + 1):
                lhs = clebsch_gordan(lv, -m, lv, m + 1, L, 1)
                a = clebsch_gordan(lv, -(m + 1), lv, m + 1, L, 0)
                b = clebsch_gordan(lv, -m, lv, m, L, 0)
                # both sides are signed square roots of rationals: compare squares and signs
                ab = a * b
                if not ab.is_rational:
                    ok = False
                    continue
                left = F(L * (L + 1)) * (lhs * lhs).to_fraction()
                right = F((lv - m) * (lv + m + 1)) * ((a * a).to_fraction() + (b * b).to_fraction()
                                                      + 2 * ab.to_fraction())
                sign_ok = left == 0 or (float(lhs) > 0) == (float(a) + float(b) > 0)
                ok &= left == right and sign_ok
    out.append(_exact("cg_raising_identity", ok))

    # m Y_l^m / sin t lowered to degree l-1, pointwise
    t = np.linspace(0.05, math.pi - 0.05, 97)
    phi = 0.61
    err = 0.0
    for lv in range(1, 6):
        for m in range(-lv, lv + 1):
            lhs = m * spherical_harmonic(lv, m, t, phi) / np.sin(t)
            k = -0.5 * math.sqrt((2 * lv + 1) / (2 * lv - 1))
            rhs = k * (math.sqrt(max((lv - m - 1) * (lv - m), 0)) * np.exp(-1j * phi) * _y(lv - 1, m + 1, t, phi)
                       + math.sqrt(max((lv + m - 1) * (lv + m), 0)) * np.exp(1j * phi) * _y(lv - 1, m - 1, t, phi))
            scale = max(np.max(np.abs(lhs)), 1.0)
            err = max(err, float(np.max(np.abs(lhs - rhs)) / scale))
    out.append(_num("lowering_identity_mY_over_sin", err, 1e-10))

    # product expansion of two harmonics
    err = 0.0
    t = np.linspace(0.1, math.pi - 0.1, 41)
    for l1, l2 in itertools.product(range(0, 4), repeat=2):
        for m1, m2 in itertools.product(range(-l1, l1 + 1), range(-l2, l2 + 1)):
            lhs = spherical_harmonic(l1, m1, t, phi) * spherical_harmonic(l2, m2, t, phi)
            rhs = sum(float(g) * spherical_harmonic(L, M, t, phi)
                      for (L, M), g in product_expand(l1, m1, l2, m2).items())
            err = max(err, float(np.max(np.abs(lhs - rhs))))
    out.append(_num("harmonic_product_expansion", err, 1e-12))
    return out


def _y(l, m, t, phi):
    if l < 0 or abs(m) > l:
        return np.zeros_like(t, dtype=complex)
    return spherical_harmonic(l, m, t, phi)


# -- worked examples -----------------------------------------------------------


def example_points(n: int = 500, seed: int = 20240601):
    rng = np.random.default_rng(seed)
    return rng.uniform(0.1, 30.0, n), rng.uniform(0.0, math.pi, n)


def _pipeline_components(example):
    state, part = EXAMPLE_STATES[example]
    fld = field_for_state(state, hydrogen_radial(3, 2), part)
    comps = {}
    for L in (1, 3):
        A, Br, Bt = fld.radial(L)
        comps[f"A{L}"], comps[f"Br{L}"], comps[f"Bt{L}"] = A, Br, Bt
    return state, part, fld, comps


def _pipeline_eval(fld, name, r, t):
    L = int(name[-1])
    if name.startswith("A"):
        return fld.A_phi(r, t, orders=[L])
    if name.startswith("Br"):
        return fld.B_r(r, t, orders=[L])
    return fld.B_theta(r, t, orders=[L])


def suite_examples(n_points: int = 500) -> list[Check]:
    r, t = example_points(n_points)
    out = []
    errata = {(e.example, e.component): e for e in ERRATA}
    for example, (state, part) in EXAMPLE_STATES.items():
        series = current_series(state, hydrogen_radial(3, 2), part)
        printed = closed_form_current(example)
        out.append(_exact(f"{example} current multipoles", set(series.orders) == set(printed)
                          and all(series[L] == printed[L] for L in printed)))
        _, _, fld, comps = _pipeline_components(example)
        literal = closed_form_reference(example)
        corrected = closed_form_reference(example, corrected=True)
        for name, ref in corrected.items():
            got = _pipeline_eval(fld, name, r, t)
            err = _rel(got, ref(r, t))
            exact = comps[name] == ref.radial()
            out.append(_num(f"{example} {name}", err, 1e-10, "exact PolyExp match" if exact else "numeric only"))
            if (example, name) in errata:
                lit = _rel(got, literal[name](r, t))
                out.append(Check(f"{example} {name} (as printed)", "reported", lit, 1e-10,
                                 errata[(example, name)].description))
    return out


# -- spinor oracle -----------------------------------------------------------


def oracle_states(max_l: int = 3):
    for l in range(0, max_l + 1):
        for m in range(-l, l + 1):
            for ms in ("1/2", "-1/2"):
                yield QuantumState.ls(l, m, ms, n=l + 2)
        for two_j in (2 * l - 1, 2 * l + 1):
            if two_j < 1:
                continue
            for two_mj in range(-two_j, two_j + 1, 2):
                yield QuantumState.jj(l, F(two_j, 2), F(two_mj, 2), n=l + 2)


def _reconstruct(series, R, T):
    x = np.cos(T)
    acc = np.zeros_like(R)
    for L, prof in series:
        acc = acc + prof(R) * assoc_legendre(L, 1, x)
    return acc / math.pi


def suite_oracle(n_grid: int = 40, max_l: int = 3) -> list[Check]:
    r = np.geomspace(0.2, 30.0, n_grid)
    t = (np.arange(n_grid) + 0.5) * math.pi / n_grid
    R, T = np.meshgrid(r, t, indexing="ij")
    worst_multi = worst_paths = worst_fd = 0.0
    where = ["", "", ""]
    for st in oracle_states(max_l):
        rad = hydrogen_radial(st.n, st.l)
        R2 = rad.squared()
        dR2 = R2.derivative()
        if st.coupling == "LS":
            direct = (oracle.direct_orbital_current(st.l, st.ml, R2, R, T)
                      + oracle.direct_spin_current(st.l, st.ml, st.ms, R2, dR2, R, T))
            fd = oracle.direct_spin_current(st.l, st.ml, st.ms, R2, dR2, R, T, mode="fd")
            ladder = oracle.direct_spin_current(st.l, st.ml, st.ms, R2, dR2, R, T)
            e = _rel(fd, ladder)
            if e > worst_fd:
                worst_fd, where[2] = e, st.label()
        else:
            direct, chain = oracle.direct_total_current(st.l, st.j, st.mj, R2, dR2, R, T)
            e = _rel(chain, direct)
            if e > worst_paths:
                worst_paths, where[1] = e, st.label()
        e = _rel(_reconstruct(current_series(st, rad, "total"), R, T), direct)
        if e > worst_multi:
            worst_multi, where[0] = e, st.label()
    return [
        _num("multipole_vs_direct", worst_multi, 1e-10, f"worst {where[0]}"),
        _num("factorized_vs_spin_density_chain", worst_paths, 1e-7, f"worst {where[1]}"),
        _num("ladder_vs_finite_difference", worst_fd, 1e-7, f"worst {where[2]}"),
    ]


# -- physics -------------------------------------------------------------------


def divergence(fld, r, t, h: float = 1e-4):
    """``(1/r^2) d(r^2 B_r)/dr + (1/(r sin t)) d(sin t B_t)/dt`` by 4th-order differences."""
    def d(f, x, step):
        return (-f(x + 2 * step) + 8 * f(x + step) - 8 * f(x - step) + f(x - 2 * step)) / (12 * step)
    dr = d(lambda rr: rr * rr * fld.B_r(rr, t), r, h * r)
    dt = d(lambda tt: np.sin(tt) * fld.B_theta(r, tt), t, h)
    return dr / (r * r) + dt / (r * np.sin(t))


def suite_physics() -> list[Check]:
    out = []
    rng = np.random.default_rng(7)
    r = rng.uniform(0.3, 30.0, 200)
    t = rng.uniform(0.1, math.pi - 0.1, 200)
    x, w = np.polynomial.legendre.leggauss(48)
    for example, (state, part) in EXAMPLE_STATES.items():
        fld = field_for_state(state, hydrogen_radial(3, 2), part)
        out.append(_num(f"{example} divergence", np.max(np.abs(divergence(fld, r, t))), 1e-7))
        flux = 0.0
        for shell in (0.2, 1.0, 3.0, 9.0, 27.0):
            vals = fld.B_r(shell, np.arccos(x))
            scale = np.max(np.abs(vals))
            flux = max(flux, abs(2 * math.pi * np.dot(w, vals)) / (4 * math.pi * scale))
        out.append(_num(f"{example} shell flux", flux, 1e-13, "Gauss-Legendre, 48 nodes"))
    fld = field_for_state(*EXAMPLE_STATES["orbital_321"][:1], hydrogen_radial(3, 2), "orbital")
    th = np.array([0.2, 0.7, 1.2])
    tail = 200.0 ** 3 * fld.B_r(200.0, th, orders=[1]) / np.cos(th)
    out.append(_num("orbital_321 far-field dipole r^3 B_r/cos -> -2", np.max(np.abs(tail + 2)), 1e-6,
                    "dipole component"))
    total_tail = 200.0 ** 3 * fld.B_r(200.0, th) / np.cos(th)
    out.append(Check("orbital_321 far field, all multipoles", "reported", float(np.max(np.abs(total_tail + 2))),
                     1e-6, "octupole part still ~1e-2 at r=200"))
    worst = 0.0
    for L in (1, 3):
        comp = [abs(r0 ** (L + 2) * fld.B_r(r0, 0.3, orders=[L])) for r0 in (100.0, 200.0)]
        worst = max(worst, abs(comp[1] / comp[0] - 1))
    out.append(_num("multipole decay r^(L+2) B_r,L constant", worst, 1e-6))
    ratio = [abs(fld.B_r(r0, 0.3, orders=[3]) / fld.B_r(r0, 0.3, orders=[1])) for r0 in (100.0, 200.0)]
    out.append(_num("octupole/dipole falls as r^-2", abs(ratio[0] / ratio[1] - 4), 1e-6))
    return out


# -- quadrature cross-check ---------------------------------------------------


def suite_quadrature(max_l: int = 3, radii=(0.3, 2.0, 8.0, 20.0)) -> list[Check]:
    """Closed-form radial integrals against the adaptive Gauss-Kronrod oracle.

    The error of each integral is relative to ``int |f|`` over the same range.
    """
    worst, count, where = 0.0, 0, ""
    seen = set()
    states = list(oracle_states(max_l)) + [s for s, _ in EXAMPLE_STATES.values()]
    for st in states:
        part = "orbital" if st is EXAMPLE_STATES["orbital_321"][0] else "total"
        series = current_series(st, hydrogen_radial(st.n, st.l), part)
        for L, j in series:
            key = (L, j)
            if key in seen:
                continue
            seen.add(key)
            # the two pieces of A_L exactly as the pipeline evaluates them
            inner = j.shift(L + 2).integrate_lower().shift(-(L + 1))
            outer = j.shift(1 - L).integrate_upper().shift(L)
            flo, fhi = j.shift(L + 2), j.shift(1 - L)
            for r0 in radii:
                for closed, f, a, b, w in ((inner, flo, 0.0, r0, r0 ** -(L + 1)),
                                           (outer, fhi, r0, math.inf, r0 ** L)):
                    # scale: int |f|, so sign-changing integrands with tiny net value stay meaningful
                    scale = quad_oracle(lambda x: np.abs(f(x)), a, b, rtol=1e-6).value
                    with warnings.catch_warnings():
                        # integrals that vanish to ~1e-15 of int|f| cannot meet rtol; atol covers them
                        warnings.simplefilter("ignore", RuntimeWarning)
                        q = quad_oracle(f, a, b, rtol=1e-13, atol=1e-15 * scale).value
                    e = abs(closed(r0) - w * q) / (w * scale) if scale else abs(closed(r0))
                    count += 1
                    if e > worst:
                        worst, where = e, f"{st.label()} L={L} r={r0}"
    return [_num("closed_form_vs_gauss_kronrod", worst, 1e-8, f"{count} integrals; worst {where}")]


SCOPES = {
    "tables": suite_tables,
    "identities": suite_identities,
    "examples": suite_examples,
    "oracle": suite_oracle,
    "physics": suite_physics,
    "quadrature": suite_quadrature,
}


def run(scope: str = "all") -> dict:
    if scope != "all" and scope not in SCOPES:
        raise ValueError(f"unknown scope {scope!r}; choose from {['all', *SCOPES]}")
    names = list(SCOPES) if scope == "all" else [scope]
    checks, timing = [], {}
    for name in names:
        t0 = time.perf_counter()
        for c in SCOPES[name]():
            d = asdict(c)
            d["suite"] = name
            checks.append(d)
        timing[name] = round(time.perf_counter() - t0, 3)
    ok = all(c["status"] != "fail" for c in checks)
    return {"scope": scope, "passed": ok, "checks": checks, "seconds": timing}


def report_json(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True)
