"""Command-line front end.

Every subcommand reads a medium file, computes a table and writes it as CSV
(with a leading ``# units:`` line) or JSON.  Numbers are printed with 10
significant digits and rows come out in a fixed order, so identical inputs
give byte-identical output.  Nothing is written unless the whole command
succeeds.

Exit codes: 0 ok, 2 bad input, 3 solver failure, 4 failed verification.
"""

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Sequence

import numpy as np

from . import __version__
from .applications import KGrid, emission_rate_ratio
from .dispersion import (
    branch_frequencies_squared,
    branch_point,
    find_k_roots,
    solve_branches,
    stop_bands,
)
from .errors import DegeneratePoint, MediumError, PolaritonError
from .fields import COMMUTATOR_PAIRS, FIELD_KINDS, amplitude_table, commutator_coefficient, sum_rules
from .medium import Medium
from .mediumfile import load_medium
from .oracle import arrowhead_eigenvalues, companion_eigenvalues, dispersion_polynomial
from .units import C

EXIT_OK, EXIT_PARSE, EXIT_SOLVER, EXIT_VERIFY = 0, 2, 3, 4

SUM_RULE_TOL = 1e-10
ORACLE_TOL = 1e-9
FD_TOL = 1e-6
FD_STEP = 1e-5
# a central difference cannot resolve v_g below eps*omega/h; points whose
# roundoff floor is within 100x of FD_TOL are not compared
FD_FLOOR = 1e-8
MONOMIAL_MAX_M = 4


class CommandError(Exception):
    def __init__(self, message, code):
        super().__init__(message)
        self.code = code


@dataclass(frozen=True)
class SweepSpec:
    variable: str
    start: float
    stop: float
    points: int
    spacing: str = "linear"

    def __post_init__(self):
        if self.variable not in ("k", "omega"):
            raise ValueError("sweep variable must be k or omega")
        if self.spacing not in ("linear", "log"):
            raise ValueError("spacing must be linear or log")
        if not (self.start > 0 and self.stop > 0):
            raise ValueError("sweep bounds must be positive")
        if not self.points >= 2:
            raise ValueError("a sweep needs at least 2 points")
        if not self.start < self.stop:
            raise ValueError("sweep start must be below stop")

    def values(self) -> np.ndarray:
        if self.spacing == "log":
            return np.geomspace(self.start, self.stop, self.points)
        return np.linspace(self.start, self.stop, self.points)


# -- formatting -----------------------------------------------------------

def fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, str):
        return value
    return f"{float(value):.10g}"


def _json_value(value):
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, str):
        return value
    v = float(fmt(value))
    return v if math.isfinite(v) else fmt(value)


@dataclass
class Table:
    columns: List[str]
    rows: List[list]
    units: str
    meta: Optional[dict] = None

    def render(self, fmt_name: str) -> str:
        if fmt_name == "json":
            doc = {"units": self.units, "columns": self.columns,
                   "rows": [[_json_value(v) for v in row] for row in self.rows]}
            for key, val in (self.meta or {}).items():
                doc[key] = _json_value(val)
            return json.dumps(doc, indent=2) + "\n"
        buf = io.StringIO()
        buf.write(f"# units: {self.units}\n")
        for key, val in (self.meta or {}).items():
            buf.write(f"# {key}: {fmt(val)}\n")
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.columns)
        for row in self.rows:
            writer.writerow([fmt(v) for v in row])
        return buf.getvalue()


# -- commands -------------------------------------------------------------

def _sweep(args, default=None) -> np.ndarray:
    if args.k is not None:
        if args.start is not None or args.stop is not None:
            raise CommandError("--k cannot be combined with --from/--to", EXIT_PARSE)
        if not args.k > 0:
            raise CommandError("--k must be a positive wavenumber", EXIT_PARSE)
        return np.array([args.k])
    if args.start is None or args.stop is None:
        if default is None:
            raise CommandError("--from and --to are required", EXIT_PARSE)
        return default
    try:
        sweep = SweepSpec("k", args.start, args.stop, args.points, "log" if args.log else "linear")
    except ValueError as exc:
        raise CommandError(str(exc), EXIT_PARSE) from None
    return sweep.values()


def _scaled_ks(medium: Medium, args, default=None) -> np.ndarray:
    ks = _sweep(args, default)
    if args.start is None and args.k is None:
        return ks
    return medium.units.wavenumber_in(ks)


def cmd_branches(medium: Medium, args) -> Table:
    u = medium.units
    rows = []
    for k in _scaled_ks(medium, args):
        for p in solve_branches(medium, float(k)):
            rows.append([u.wavenumber_out(p.k), p.m, u.frequency_out(p.omega), p.n,
                         u.velocity_out(p.v_g), p.eps_r])
    return Table(["k", "m", "omega", "n", "v_g", "eps_r"], rows, u.label())


def cmd_sumrules(medium: Medium, args):
    u = medium.units
    rows = []
    worst = 0.0
    for k in _scaled_ks(medium, args):
        r = sum_rules(medium, float(k))
        worst = max(worst, r.residual1, r.residual2)
        rows.append([u.wavenumber_out(r.k), r.s1, r.s2, r.residual1, r.residual2])
    if medium.spatially_dispersive:
        status = "unverified regime"
    else:
        status = "pass" if worst < SUM_RULE_TOL * C else "fail"
    meta = {"max_residual": worst, "tolerance": SUM_RULE_TOL, "status": status}
    table = Table(["k", "sum_vg_n", "sum_vg_over_n", "residual_vg_n", "residual_vg_over_n"],
                  rows, u.label() + "; sums in units of c", meta)
    return table, EXIT_VERIFY if status == "fail" else EXIT_OK


def cmd_fields(medium: Medium, args) -> Table:
    u = medium.units
    kinds = [s.strip() for s in args.kinds.split(",") if s.strip()]
    bad = [s for s in kinds if s not in FIELD_KINDS]
    if bad or not kinds:
        raise CommandError(f"unknown field kind(s) {bad}; choose from {', '.join(FIELD_KINDS)}", EXIT_PARSE)
    if args.k is None or not args.k > 0:
        raise CommandError("--k must be a positive wavenumber", EXIT_PARSE)
    k = float(u.wavenumber_in(args.k))
    rows = [[u.wavenumber_out(a.k), a.m, a.kind, a.local, u.amplitude_out(a.magnitude, a.kind)]
            for a in amplitude_table(medium, k, kinds, local=args.local)]
    return Table(["k", "m", "kind", "local", "magnitude"], rows, u.label())


def cmd_stopbands(medium: Medium, args) -> Table:
    u = medium.units
    rows = [[j, u.frequency_out(b.lo), u.frequency_out(b.hi)]
            for j, b in enumerate(stop_bands(medium), 1)]
    return Table(["j", "lo", "hi"], rows, u.label())


def cmd_kroots(medium: Medium, args) -> Table:
    u = medium.units
    if args.omega is None or not args.omega > 0:
        raise CommandError("--omega must be a positive frequency", EXIT_PARSE)
    roots = find_k_roots(medium, float(u.frequency_in(args.omega)))
    rows = [[args.omega, u.wavenumber_out(r.k), r.classification, r.branch] for r in roots.roots]
    return Table(["omega", "k", "classification", "branch"], rows, u.label())


def cmd_emission(medium: Medium, args) -> Table:
    u = medium.units
    if args.omega is None or not args.omega > 0:
        raise CommandError("--omega must be a positive frequency", EXIT_PARSE)
    omega_e = float(u.frequency_in(args.omega))
    eta = 1e-3 * omega_e if args.eta is None else float(u.frequency_in(args.eta))
    try:
        grid = KGrid(args.grid_points, args.window)
    except ValueError as exc:
        raise CommandError(str(exc), EXIT_PARSE) from None
    r = emission_rate_ratio(medium, omega_e, eta, grid)
    row = [u.frequency_out(r.omega_e), r.branch, u.frequency_out(r.eta), r.points,
           r.rate_ratio_modesum, r.rate_ratio_closed, r.relative_difference]
    return Table(["omega_e", "branch", "eta", "points", "rate_ratio_modesum", "rate_ratio_closed",
                  "relative_difference"], [row], u.label())


def verify_medium(medium: Medium, ks: Sequence[float]) -> List[dict]:
    """Run the invariant battery on scaled wavenumbers ``ks``."""
    dispersive = medium.spatially_dispersive
    checks = []

    def add(name, err, tol, status=None, note=""):
        if status is None:
            status = "pass" if err < tol else "fail"
        checks.append({"check": name, "max_error": err, "tolerance": tol, "status": status, "note": note})

    s_err = c_err = arrow_err = mono_err = fd_err = trip_err = 0.0
    fd_skipped = edge_skipped = 0
    interlaced = True
    eps = np.finfo(float).eps
    for k in ks:
        k = float(k)
        pts = solve_branches(medium, k)
        x = np.array([p.omega**2 for p in pts])

        r = sum_rules(medium, k)
        s_err = max(s_err, r.residual1, r.residual2)
        for pair in COMMUTATOR_PAIRS:
            c_err = max(c_err, abs(commutator_coefficient(medium, k, pair) - 1.0))

        arrow_err = max(arrow_err, float(np.max(np.abs(arrowhead_eigenvalues(medium, k) - x) / x)))
        if medium.M <= MONOMIAL_MAX_M:
            comp = companion_eigenvalues(dispersion_polynomial(medium, k))
            mono_err = max(mono_err, float(np.max(np.abs(comp - x) / x)))

        poles = np.sort(medium.shifted_poles(k))
        interlaced &= bool(np.all(x[:-1] < poles) and np.all(poles < x[1:]))

        h = FD_STEP * k
        up = np.sqrt(branch_frequencies_squared(medium, [k + h])[0])
        down = np.sqrt(branch_frequencies_squared(medium, [k - h])[0])
        for p, a, b in zip(pts, up, down):
            if eps * p.omega / (h * p.v_g) > FD_FLOOR:
                fd_skipped += 1
                continue
            fd_err = max(fd_err, abs((a - b) / (2 * h) - p.v_g) / p.v_g)

        # omega -> k -> omega; compared in frequency since k itself is
        # ill-conditioned where a branch is flat
        for p in pts:
            try:
                found = find_k_roots(medium, p.omega).roots
            except DegeneratePoint:
                edge_skipped += 1
                continue
            roots = [r for r in found if r.branch == p.m]
            back = [branch_point(medium, r.k, r.branch).omega for r in roots]
            trip_err = max(trip_err, min(abs(w - p.omega) / p.omega for w in back) if back else math.inf)

    add("sum_rules", s_err, SUM_RULE_TOL, "unverified regime" if dispersive else None)
    add("commutators", c_err, SUM_RULE_TOL, "unverified regime" if dispersive else None)
    add("oracle_arrowhead", arrow_err, ORACLE_TOL)
    if medium.M <= MONOMIAL_MAX_M:
        add("oracle_companion", mono_err, ORACLE_TOL)
    else:
        add("oracle_companion", 0.0, ORACLE_TOL, "skipped", f"monomial form ill-conditioned for M > {MONOMIAL_MAX_M}")
    add("group_velocity_fd", fd_err, FD_TOL, note=f"{fd_skipped} flat-branch points below finite-difference resolution")
    add("interlacing", 0.0 if interlaced else 1.0, 0.5)
    add("k_round_trip", trip_err, ORACLE_TOL, note=f"{edge_skipped} points on a band edge" if edge_skipped else "")
    return checks


def cmd_verify(medium: Medium, args):
    ks = _scaled_ks(medium, args, default=np.geomspace(0.01, 100.0, 20))
    checks = verify_medium(medium, ks)
    failed = any(c["status"] == "fail" for c in checks)
    rows = [[c["check"], c["max_error"], c["tolerance"], c["status"], c["note"]] for c in checks]
    meta = {"status": "fail" if failed else "pass"}
    table = Table(["check", "max_error", "tolerance", "status", "note"], rows, medium.units.label(), meta)
    return table, EXIT_VERIFY if failed else EXIT_OK


COMMANDS = {
    "branches": cmd_branches,
    "sumrules": cmd_sumrules,
    "fields": cmd_fields,
    "stopbands": cmd_stopbands,
    "kroots": cmd_kroots,
    "emission": cmd_emission,
    "verify": cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="polariton", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--medium", required=True, type=Path, help="medium description file")
    common.add_argument("--out", default="-", help="output path, '-' for stdout")
    common.add_argument("--format", choices=("csv", "json"), default="csv")

    sweep = argparse.ArgumentParser(add_help=False)
    sweep.add_argument("--from", dest="start", type=float, help="first wavenumber")
    sweep.add_argument("--to", dest="stop", type=float, help="last wavenumber")
    sweep.add_argument("--points", type=int, default=2)
    sweep.add_argument("--log", action="store_true", help="logarithmic spacing")
    sweep.add_argument("--k", type=float, help="single wavenumber instead of a sweep")

    sub.add_parser("branches", parents=[common, sweep], help="branch table over a k sweep")
    sub.add_parser("sumrules", parents=[common, sweep], help="group-velocity sum rules")
    p = sub.add_parser("fields", parents=[common], help="mode amplitudes at one k")
    p.add_argument("--k", type=float, required=True)
    p.add_argument("--kinds", default=",".join(FIELD_KINDS), help="comma-separated field kinds")
    p.add_argument("--local", action="store_true", help="local-field displacement amplitudes")
    sub.add_parser("stopbands", parents=[common], help="forbidden frequency intervals")
    p = sub.add_parser("kroots", parents=[common], help="all wavenumbers at one frequency")
    p.add_argument("--omega", type=float, required=True)
    p = sub.add_parser("emission", parents=[common], help="spontaneous emission rate ratio")
    p.add_argument("--omega", type=float, required=True, help="emitter frequency")
    p.add_argument("--eta", type=float, help="Lorentzian width (default 1e-3 omega)")
    p.add_argument("--grid-points", type=int, help="number of k samples (automatic by default)")
    p.add_argument("--window", type=float, default=200.0, help="half window in units of eta")
    sub.add_parser("verify", parents=[common, sweep], help="invariant battery")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        medium = load_medium(args.medium)
        result = COMMANDS[args.command](medium, args)
        table, code = result if isinstance(result, tuple) else (result, EXIT_OK)
        text = table.render(args.format)
    except CommandError as exc:
        print(f"polariton: error: {exc}", file=sys.stderr)
        return exc.code
    except MediumError as exc:
        print(f"polariton: error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (PolaritonError, ValueError) as exc:
        print(f"polariton: solver error: {exc}", file=sys.stderr)
        return EXIT_SOLVER

    if args.out == "-":
        sys.stdout.write(text)
    else:
        Path(args.out).write_text(text)
    if code == EXIT_VERIFY:
        print("polariton: verification failed", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
