"""``boundfield`` command line: coefficient tables, current / potential / field grids,
field-line figures and the verification suites.

Exit codes: 0 ok, 1 verification failure, 2 invalid input (quantum numbers or
usage), 3 radial profile not integrable.
"""
from __future__ import annotations

import argparse
import io
import json
import math
import sys
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import numpy as np

from . import verify
from .angular import assoc_legendre, doubled
from .field import MultipoleField, StagnationError, potential_series, sample_grid, trace_field_line
from .multipole import current_series, orbital_coefficients, spin_coefficients, total_coefficients
from .radial import IntegrabilityError, hydrogen_radial, read_radial_csv
from .states import QuantumNumberError, QuantumState

UNITS = "a0-muB-scaled"
UNIT_TEXT = {
    "current": "r in a0, theta in rad, j_phi in mu_B/a0^4",
    "potential": "r in a0, theta in rad, A_phi in mu0*mu_B/(4*pi*a0^2)",
    "field": "r in a0, theta in rad, B in mu0*mu_B/(4*pi*a0^3)",
}


class UsageError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    coupling: str | None = None
    n: int | None = None
    l: int | None = None
    ml: int | None = None
    ms: str | None = None
    j: str | None = None
    mj: str | None = None
    part: str = "total"
    radial: str = "hydrogenic"
    format: str | None = None
    grid: dict = field(default_factory=dict)
    units: str = UNITS


def fmt(x) -> str:
    """Fixed 17-significant-digit float text (byte-stable across runs)."""
    x = float(x)
    if x == 0:
        return "0"
    return f"{x:.17g}"


def _dumps(obj) -> str:
    """JSON with every float written by :func:`fmt`."""
    if isinstance(obj, float) or isinstance(obj, np.floating):
        v = float(obj)
        if not math.isfinite(v):
            return "null"
        return fmt(v)
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {_dumps(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(_dumps(v) for v in obj) + "]"
    return json.dumps(obj)


# -- argument handling -----------------------------------------------------------


def _pair(text: str) -> tuple[float, float]:
    try:
        a, b = text.split(",")
        return float(a), float(b)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 'r,theta', got {text!r}") from None


def _common(p: argparse.ArgumentParser, fmt_choices=("csv", "json", "svg")):
    g = p.add_argument_group("output")
    g.add_argument("--format", choices=fmt_choices)
    g.add_argument("--out", help="output file (default: stdout)")
    g.add_argument("--rmin", type=float, default=0.05)
    g.add_argument("--rmax", type=float, default=30.0)
    g.add_argument("--nr", type=int, default=50)
    g.add_argument("--ntheta", type=int, default=36)
    g.add_argument("--split-multipoles", action="store_true", help="add one column per multipole order")
    g.add_argument("--seed", action="append", type=_pair, default=[], metavar="r,theta",
                   help="field-line start point (repeatable)")
    g.add_argument("--point", action="append", type=_pair, default=[], metavar="r,theta",
                   help="evaluate at these points instead of a grid (repeatable)")


def _state_args(p: argparse.ArgumentParser):
    g = p.add_argument_group("state")
    g.add_argument("--n", type=int)
    g.add_argument("--l", type=int)
    g.add_argument("--ml", type=int)
    g.add_argument("--ms", default="1/2")
    g.add_argument("--j")
    g.add_argument("--mj")
    g.add_argument("--orbital", action="store_true", help="orbital current only (LS states)")
    g.add_argument("--spin", action="store_true", help="spin current only (LS states)")
    g.add_argument("--radial-file", help="two-column CSV (r/a0, R) replacing the hydrogenic R_nl")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="boundfield", description=__doc__.split("\n\n")[0].replace("\n", " "),
                                epilog=__doc__.split("\n\n")[1].replace("\n", " "))
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("coeffs", help="exact multipole coefficient table")
    _state_args(c)
    c.add_argument("--format", choices=("text", "json"), default="text")
    c.add_argument("--out")

    for name, text in (("current", "azimuthal current density"), ("potential", "vector potential A_phi"),
                       ("field", "magnetic field B_r, B_theta")):
        s = sub.add_parser(name, help=f"{text} on a grid")
        _state_args(s)
        _common(s)

    f = sub.add_parser("fieldlines", help="trace field lines and draw them")
    _state_args(f)
    _common(f)
    f.add_argument("--nseeds", type=int, default=8, help="equatorial seeds used when no --seed is given")
    f.add_argument("--arc-step", type=float, default=0.01)
    f.add_argument("--max-steps", type=int, default=200000)

    v = sub.add_parser("verify", help="run the verification suites")
    v.add_argument("--scope", choices=("all", *verify.SCOPES), default="all")
    v.add_argument("--out")
    return p


def resolve_state(args) -> tuple[QuantumState | None, RunConfig]:
    cfg = RunConfig(args.command)
    if args.orbital and args.spin:
        raise UsageError("--orbital and --spin are exclusive")
    if args.j is not None or args.mj is not None:
        if args.j is None or args.mj is None:
            raise UsageError("J-coupled states need both --j and --mj")
        cfg.coupling, cfg.j, cfg.mj = "J", args.j, args.mj
        if args.orbital or args.spin:
            raise UsageError("J-coupled states carry only the total current")
        if args.l is None:
            return None, cfg
        cfg.l, cfg.n = args.l, args.n
        return QuantumState.jj(args.l, args.j, args.mj, n=args.n), cfg
    if args.l is None or args.ml is None:
        raise UsageError("give --l and --ml (LS state) or --j and --mj (J state)")
    cfg.coupling, cfg.l, cfg.ml, cfg.ms, cfg.n = "LS", args.l, args.ml, args.ms, args.n
    cfg.part = "orbital" if args.orbital else "spin" if args.spin else "total"
    try:
        return QuantumState.ls(args.l, args.ml, args.ms, n=args.n), cfg
    except ValueError as exc:
        if isinstance(exc, QuantumNumberError):
            raise
        raise QuantumNumberError(str(exc)) from None


def _radial(args, state, cfg):
    if args.radial_file:
        cfg.radial = args.radial_file
        return read_radial_csv(args.radial_file)
    if state.n is None:
        raise UsageError("give --n (hydrogenic radial part) or --radial-file")
    return hydrogen_radial(state.n, state.l)


def _write(text: str, out: str | None):
    if out:
        with open(out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# -- commands --------------------------------------------------------------------------


def cmd_coeffs(args) -> int:
    state, cfg = resolve_state(args)
    if cfg.coupling == "J":
        if state is not None:
            QuantumState.jj(state.l, args.j, args.mj)
        tables = {"total": total_coefficients(Fraction(doubled(args.j), 2), Fraction(doubled(args.mj), 2))}
    else:
        tables = {}
        if cfg.part in ("orbital", "total"):
            tables["orbital"] = orbital_coefficients(state.l, state.ml)
        if cfg.part in ("spin", "total"):
            tables["spin"] = spin_coefficients(state.l, state.ml, state.ms)
    if args.format == "json":
        out = {}
        for name, tab in tables.items():
            if name == "spin":
                out[name] = {"l": tab.l, "m": tab.m, "ms": str(state.ms),
                             "terms": {str(L): {"c_deriv": str(a), "c_over_r": str(b)}
                                       for L, (a, b) in tab.entries.items()}}
            else:
                out[name] = tab.to_dict()
        _write(json.dumps(out if len(out) > 1 else next(iter(out.values())), indent=2) + "\n", args.out)
        return 0
    buf = io.StringIO()
    for name, tab in tables.items():
        buf.write(f"# {name} coefficients\n")
        if name == "spin":
            buf.write(f"{'L':>3}  {'c_deriv':>12}  {'c_over_r':>12}\n")
            for L, (a, b) in tab.entries.items():
                buf.write(f"{L:>3}  {str(a):>12}  {str(b):>12}\n")
        else:
            buf.write(f"{'L':>3}  {'alpha':>12}\n")
            for L, a in tab.entries.items():
                buf.write(f"{L:>3}  {str(a):>12}\n")
    _write(buf.getvalue(), args.out)
    return 0


def _grid(args):
    if args.point:
        pts = np.array(args.point, dtype=float)
        if np.any(pts[:, 0] <= 0):
            raise UsageError("points need r > 0")
        return pts[:, 0], pts[:, 1], {"points": [list(p) for p in args.point]}
    if not 0 < args.rmin < args.rmax:
        raise UsageError("need 0 < --rmin < --rmax")
    if args.nr < 2 or args.ntheta < 2:
        raise UsageError("need --nr and --ntheta >= 2")
    rs = np.geomspace(args.rmin, args.rmax, args.nr)
    ts = (np.arange(args.ntheta) + 0.5) * math.pi / args.ntheta
    R, T = np.meshgrid(rs, ts, indexing="ij")
    grid = {"rmin": args.rmin, "rmax": args.rmax, "nr": args.nr, "ntheta": args.ntheta}
    return R.ravel(), T.ravel(), grid


def _series_columns(series, r, t, symbol):
    """``[(name, values)]`` for ``sum_L series[L](r) P_L^1``, per L and total."""
    x = np.cos(t)
    total = np.zeros_like(r)
    per = []
    for L, prof in series:
        v = prof(r) * assoc_legendre(L, 1, x)
        per.append((f"{symbol}_L{L}", v))
        total = total + v
    return total, per


def _emit_table(args, cfg, kind, r, t, columns, split):
    fmt_ = args.format or "csv"
    if fmt_ == "svg":
        raise UsageError("svg output is only available for fieldlines")
    names = ["r_over_a0", "theta"] + [n for n, _ in columns] + [n for n, _ in split]
    data = [r, t] + [v for _, v in columns] + [v for _, v in split]
    if fmt_ == "csv":
        buf = io.StringIO()
        buf.write(f"# boundfield {kind}; units: {UNIT_TEXT[kind]}; config: {_dumps(asdict(cfg))}\n")
        buf.write(",".join(names) + "\n")
        for i in range(len(r)):
            buf.write(",".join(fmt(col[i]) for col in data) + "\n")
        _write(buf.getvalue(), args.out)
    else:
        rows = [{n: float(col[i]) for n, col in zip(names, data)} for i in range(len(r))]
        doc = {"units": UNIT_TEXT[kind], "config": asdict(cfg), "columns": names, "rows": rows}
        _write(_dumps(doc) + "\n", args.out)
    return 0


def _prepare(args):
    state, cfg = resolve_state(args)
    if state is None:
        raise UsageError("J-coupled grids need --l as well (j = l +/- 1/2)")
    cfg.format = args.format
    radial = _radial(args, state, cfg)
    cur = current_series(state, radial, cfg.part)
    return state, cfg, cur


def cmd_current(args) -> int:
    _, cfg, cur = _prepare(args)
    r, t, cfg.grid = _grid(args)
    total, per = _series_columns(cur, r, t, "j_phi")
    # series hold pi j_L
    return _emit_table(args, cfg, "current", r, t, [("j_phi", total / math.pi)],
                       [(n, v / math.pi) for n, v in per] if args.split_multipoles else [])


def cmd_potential(args) -> int:
    _, cfg, cur = _prepare(args)
    r, t, cfg.grid = _grid(args)
    total, per = _series_columns(potential_series(cur), r, t, "A_phi")
    return _emit_table(args, cfg, "potential", r, t, [("A_phi", total)], per if args.split_multipoles else [])


def cmd_field(args) -> int:
    _, cfg, cur = _prepare(args)
    fld = MultipoleField(potential_series(cur))
    r, t, cfg.grid = _grid(args)
    br, bt = fld(r, t)
    split = []
    if args.split_multipoles:
        for L in fld.orders:
            a, b = fld(r, t, orders=[L])
            split += [(f"B_r_L{L}", a), (f"B_theta_L{L}", b)]
    return _emit_table(args, cfg, "field", r, t, [("B_r", br), ("B_theta", bt)], split)


def default_seeds(fld, count: int, rmax: float):
    """``count`` equatorial starting points, evenly spaced in ``r``."""
    if count <= 0 or not fld.orders:
        return []
    return [(float(r), math.pi / 2) for r in np.linspace(0.05 * rmax, 0.6 * rmax, count)]


def _svg(lines, cfg, rmax, notes) -> str:
    size = 600
    scale = size / (2.2 * rmax)
    cx = cy = size / 2

    def path(xz):
        pts = [f"{cx + x * scale:.3f},{cy - z * scale:.3f}" for x, z in xz]
        return "M" + " L".join(pts)

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
           f'viewBox="0 0 {size} {size}">',
           f"<!-- boundfield fieldlines; units: lengths in a0; config: {_dumps(asdict(cfg))} -->",
           f'<line x1="{cx}" y1="0" x2="{cx}" y2="{size}" stroke="#bbb" stroke-width="0.5"/>',
           f'<line x1="0" y1="{cy}" x2="{size}" y2="{cy}" stroke="#bbb" stroke-width="0.5"/>']
    for i, (ln, note) in enumerate(zip(lines, notes)):
        out.append(f"<!-- line {i}: {note} -->")
        if ln is None or len(ln) < 2:
            continue
        xz = ln.xz
        # the meridian plane is symmetric under x -> -x and z -> -z
        branches = [xz, xz * [-1, 1], xz * [1, -1], xz * [-1, -1]]
        d = " ".join(path(b) for b in branches)
        out.append(f'<path d="{d}" fill="none" stroke="#1f4e9c" stroke-width="1"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def cmd_fieldlines(args) -> int:
    _, cfg, cur = _prepare(args)
    fld = MultipoleField(potential_series(cur))
    seeds = list(args.seed) or default_seeds(fld, args.nseeds, args.rmax)
    cfg.grid = {"seeds": [list(s) for s in seeds], "rmin": args.rmin, "rmax": args.rmax,
                "arc_step": args.arc_step}
    lines, notes = [], []
    for s in seeds:
        try:
            ln = trace_field_line(fld, s, arc_step=args.arc_step, max_steps=args.max_steps,
                                  r_min=args.rmin, r_max=args.rmax)
            lines.append(ln)
            gap = "" if math.isnan(ln.closure_gap) else f", closure_gap={ln.closure_gap:.3g}"
            notes.append(f"start={s}, termination={ln.termination}{gap}"
                         + (", degenerate (on axis)" if ln.degenerate else ""))
        except (StagnationError, ValueError) as exc:
            lines.append(None)
            notes.append(f"start={s}, not traced: {exc}")
    if (args.format or "svg") == "json":
        doc = {"units": "lengths in a0, theta in rad", "config": asdict(cfg),
               "lines": [None if ln is None else {"termination": ln.termination,
                                                   "closure_gap": ln.closure_gap,
                                                   "degenerate": ln.degenerate,
                                                   "points": ln.points.tolist()} for ln in lines],
               "notes": notes}
        _write(_dumps(doc) + "\n", args.out)
        return 0
    if args.format == "csv":
        raise UsageError("fieldlines writes svg or json")
    _write(_svg(lines, cfg, args.rmax, notes), args.out)
    return 0


def cmd_verify(args) -> int:
    report = verify.run(args.scope)
    _write(verify.report_json(report) + "\n", args.out)
    for c in report["checks"]:
        print(f"{c['status']:>8}  {c['suite']}/{c['name']}  err={c['max_error']:.3g}  tol={c['tolerance']:.3g}",
              file=sys.stderr)
    return 0 if report["passed"] else 1


COMMANDS = {
    "coeffs": cmd_coeffs,
    "current": cmd_current,
    "potential": cmd_potential,
    "field": cmd_field,
    "fieldlines": cmd_fieldlines,
    "verify": cmd_verify,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except QuantumNumberError as exc:
        print(f"boundfield: invalid quantum numbers: {exc}", file=sys.stderr)
        return 2
    except UsageError as exc:
        print(f"boundfield: {exc}", file=sys.stderr)
        return 2
    except IntegrabilityError as exc:
        print(f"boundfield: radial profile not integrable: {exc}", file=sys.stderr)
        return 3
    except (OSError, ValueError) as exc:
        print(f"boundfield: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
