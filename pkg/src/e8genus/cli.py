"""Command-line driver: every check as a subcommand, reports as text or JSON.

Exit status is 0 when every report passes, 1 when any fails, 2 on usage errors.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict
from enum import Enum

from gmpy2 import mpq

from . import genus as G
from .e8char import check_e8_character
from .eisenstein import E2, check_expansions, weight_basis
from .poly import GradedPoly
from .qseries import Q24Series
from .reports import VerificationReport
from .theta import check_lattice_shifts, check_modular_transforms

JOBS_ENV = "E8GENUS_JOBS"

EISENSTEIN_TABLE = {
    "G4": [1, 240, 2160, 6720],
    "G6": [1, -504, -16632, -122976],
    "G4^2": [1, 480, 61920],
    "G4*G6": [1, -264, -135432],
    "G4^3": [1, 720, 179280],
    "G6^2": [1, -1008, 220752],
    "G4^2*G6": [1, -24, -196632],
    "G4^4": [1, 960, 354240],
    "G4*G6^2": [1, -768, -19008],
}

THETA_POINTS = [
    (0.8j, 0.13 + 0.05j),
    (0.3 + 1.0j, 0.21 - 0.1j),
    (-0.4 + 1.3j, 0.35 + 0.2j),
    (0.1 + 1.7j, -0.27 + 0.11j),
    (0.5 + 2.0j, 0.4 + 0.3j),
]

JACOBI_POINTS = [(tau, z) for tau in (2j, 1 + 1.5j) for z in (0.2, 0.1 + 0.1j)]


class UsageError(Exception):
    pass


# -- serialization -------------------------------------------------------------


def jsonable(x):
    if isinstance(x, VerificationReport):
        return jsonable(asdict(x))
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if isinstance(x, bool) or x is None or isinstance(x, (int, str)):
        return x
    if isinstance(x, float):
        return x
    if isinstance(x, complex):
        return [x.real, x.imag]
    if type(x) is type(mpq(0)):
        return str(x)
    if isinstance(x, Enum):
        return x.value
    if isinstance(x, (GradedPoly, Q24Series)):
        return str(x) if isinstance(x, GradedPoly) else x.to_text()
    return str(x)


def report_dict(rep: VerificationReport, timing: bool) -> dict:
    out = {"check": rep.check, "instance": rep.instance, "status": rep.status}
    for key in ("witness", "expected", "got"):
        val = getattr(rep, key)
        if val is not None:
            out[key] = val
    if timing:
        out["elapsed_ms"] = round(rep.elapsed_ms, 3)
    if rep.details:
        out["details"] = rep.details
    if rep.notes:
        out["notes"] = rep.notes
    return jsonable(out)


def render(reports, fmt: str, timing: bool) -> str:
    if fmt == "json":
        return json.dumps([report_dict(r, timing) for r in reports], indent=2) + "\n"
    lines = []
    for r in reports:
        inst = ", ".join(f"{k}={jsonable(v)}" for k, v in r.instance.items())
        line = f"{r.status.upper():4} {r.check} ({inst})"
        if timing:
            line += f" [{r.elapsed_ms:.1f} ms]"
        lines.append(line)
        if r.witness is not None:
            lines.append(f"     witness: {json.dumps(jsonable(r.witness))}")
        for n in r.notes:
            lines.append(f"     note: {n}")
    return "\n".join(lines) + "\n"


# -- individual tasks (module level so they pickle) -----------------------------


def task_eisenstein():
    return [check_expansions(EISENSTEIN_TABLE)]


def task_e2():
    got = [int(c) for c in E2(2).coefficient_list(2)]
    ok = got == [1, -24, -72]
    return [VerificationReport("e2-expansion", {"order": 2}, "pass" if ok else "fail",
                               witness=None if ok else {"got": got},
                               expected=[1, -24, -72], got=got)]


def task_theta(tol=1e-9, q_order=4):
    reps = [check_modular_transforms(t, z, tol) for t, z in THETA_POINTS]
    reps.append(check_lattice_shifts("symbolic", q_order=q_order))
    return reps


def task_e8_character(q_order=3):
    return [check_e8_character(q_order)]


def task_route(d, l, gauge, q_order=2, u_order=4):
    return [G.route_equivalence(G.GenusInstance(d, l, gauge, q_order, u_order))]


def task_prop(d, l, gauge, fixed_a2=False):
    inst = G.GenusInstance(d, l, gauge)
    return [G.verify_prop_expansions(inst, fixed_a2), G.verify_c_series(inst)]


def task_anomaly(gauge, case, d=None, l=None):
    gauge = G.Gauge.parse(gauge)
    if d is None:
        pairs = G.case_instances(gauge, case)
    else:
        pairs = [(d, l)]
    return [G.verify_anomaly_case(G.GenusInstance(dd, ll, gauge), case) for dd, ll in pairs]


def task_vanishing(gauge, clause, d=None, l=None):
    gauge = G.Gauge.parse(gauge)
    pairs = G.vanishing_samples(gauge, clause) if d is None else [(d, l)]
    return [G.verify_vanishing(G.GenusInstance(dd, ll, gauge), clause) for dd, ll in pairs]


def task_jacobi(d, l, gauge, points=None, tol=1e-6):
    inst = G.GenusInstance(d, l, gauge, tol=tol)
    return [G.jacobi_numeric_check(inst, t, z) for t, z in (points or JACOBI_POINTS)]


def task_decompose(d, l, gauge, weight=None):
    return [G.decompose_a0(G.GenusInstance(d, l, gauge), weight)]


def suite_tasks():
    """(criterion, function, kwargs) for the whole acceptance suite."""
    tasks = [(1, task_eisenstein, {}), (2, task_e2, {}), (3, task_theta, {}),
             (5, task_e8_character, {})]
    for g in ("none", "e8"):
        for d, l in ((1, 1), (2, 2), (3, 2)):
            tasks.append((4, task_route, {"d": d, "l": l, "gauge": g}))
    tasks.append((4, task_route, {"d": 1, "l": 2, "gauge": "e8xe8"}))
    tasks.append((6, task_prop, {"d": 2, "l": 2, "gauge": "e8"}))
    tasks.append((6, task_prop, {"d": 1, "l": 2, "gauge": "e8xe8"}))
    for crit, g in ((7, G.Gauge.E8), (8, G.Gauge.E8XE8)):
        for case in sorted(G.anomaly_cases(g)):
            tasks.append((crit, task_anomaly, {"gauge": g.value, "case": case}))
    for g in ("e8", "e8xe8"):
        for clause in range(1, 6):
            tasks.append((9, task_vanishing, {"gauge": g, "clause": clause}))
    for g in ("none", "e8", "e8xe8"):
        tasks.append((10, task_jacobi, {"d": 2, "l": 2, "gauge": g}))
    for d, l in G.case_instances(G.Gauge.E8, 8):
        tasks.append((11, task_decompose, {"d": d, "l": l, "gauge": "e8"}))
    return tasks


def _run(task):
    _, fn, kw = task
    return fn(**kw)


def run_tasks(tasks, jobs: int):
    if jobs <= 1 or len(tasks) <= 1:
        return [r for t in tasks for r in _run(t)]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        # map keeps submission order, so output does not depend on scheduling
        return [r for batch in pool.map(_run, tasks) for r in batch]


# -- argument parsing ----------------------------------------------------------


def _complex(s: str) -> complex:
    try:
        return complex(s.replace(" ", "").replace("i", "j"))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a complex number: {s}") from exc


def _default_jobs() -> int:
    raw = os.environ.get(JOBS_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--output", help="write the report here instead of stdout")
    common.add_argument("--jobs", type=int, default=_default_jobs(),
                        help=f"worker processes (default from ${JOBS_ENV}, else 1)")
    common.add_argument("--timing", action="store_true",
                        help="include elapsed times (makes output non-reproducible)")
    common.add_argument("--tol", type=float, default=None)

    inst = argparse.ArgumentParser(add_help=False)
    inst.add_argument("--d", type=int, required=True)
    inst.add_argument("--l", type=int, required=True)
    inst.add_argument("--gauge", choices=("none", "e8", "e8xe8"), default="e8")
    inst.add_argument("--q-order", type=int, default=None)
    inst.add_argument("--u-order", type=int, default=None)

    p = argparse.ArgumentParser(prog="e8genus", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("eisenstein-expand", parents=[common],
                       help="print normalized weight-w basis q-expansions")
    s.add_argument("--weight", type=int, required=True)
    s.add_argument("--order", type=int, default=3)

    sub.add_parser("theta-check", parents=[common], help="theta transformation laws")
    sub.add_parser("route-equivalence", parents=[common, inst],
                   help="definition route against theta route")
    s = sub.add_parser("prop-expansions", parents=[common, inst],
                       help="a_n coefficients against the stated templates")
    s.add_argument("--fixed-a2", action="store_true",
                   help="include the q^2 cross term in the A2 template")

    s = sub.add_parser("anomaly", parents=[common], help="anomaly-cancellation relations")
    s.add_argument("--case", type=int, default=None, help="value of 2d - l")
    s.add_argument("--gauge", choices=("e8", "e8xe8"), default="e8")
    s.add_argument("--d", type=int)
    s.add_argument("--l", type=int)

    s = sub.add_parser("vanishing", parents=[common], help="vanishing statements")
    s.add_argument("--clause", type=int, required=True, choices=range(1, 6))
    s.add_argument("--gauge", choices=("e8", "e8xe8"), default="e8")
    s.add_argument("--d", type=int)
    s.add_argument("--l", type=int)

    s = sub.add_parser("decompose-a0", parents=[common, inst],
                       help="G4^a G6^b decomposition of a0")
    s.add_argument("--weight", type=int, default=None)

    s = sub.add_parser("jacobi-numeric", parents=[common, inst],
                       help="numeric Jacobi-form laws")
    s.add_argument("--tau", type=_complex, action="append")
    s.add_argument("--z", type=_complex, action="append")

    sub.add_parser("all", parents=[common], help="the full acceptance suite")
    return p


def _instance(args) -> G.GenusInstance:
    kw = {}
    if args.q_order is not None:
        kw["q_order"] = args.q_order
    if args.u_order is not None:
        kw["u_order"] = args.u_order
    if args.tol is not None:
        kw["tol"] = args.tol
    try:
        return G.GenusInstance(args.d, args.l, args.gauge, **kw)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _dispatch(args):
    """Returns (reports, plain_text or None)."""
    cmd = args.command
    if cmd == "eisenstein-expand":
        basis = weight_basis(args.weight, args.order)
        if not basis:
            raise UsageError(f"no modular forms of weight {args.weight}")
        rows = []
        for b in basis:
            coeffs = " ".join(str(int(c)) for c in b.series.coefficient_list(args.order))
            rows.append(coeffs if len(basis) == 1 else f"{b.label}: {coeffs}")
        if args.format == "json":
            return [], json.dumps({b.label: [int(c) for c in b.series.coefficient_list(args.order)]
                                   for b in basis}, indent=2) + "\n"
        return [], "\n".join(rows) + "\n"
    if cmd == "theta-check":
        return task_theta(args.tol or 1e-9), None
    if cmd == "route-equivalence":
        inst = _instance(args)
        return [G.route_equivalence(inst)], None
    if cmd == "prop-expansions":
        inst = _instance(args)
        if inst.gauge is G.Gauge.NONE:
            raise UsageError("prop-expansions needs an E8 gauge")
        if inst.u_order < 4:
            raise UsageError("prop-expansions needs u_order >= 4")
        return [G.verify_prop_expansions(inst, args.fixed_a2), G.verify_c_series(inst)], None
    if cmd == "anomaly":
        if (args.d is None) != (args.l is None):
            raise UsageError("give both --d and --l or neither")
        case = args.case
        if case is None:
            if args.d is None:
                raise UsageError("need --case or --d/--l")
            case = 2 * args.d - args.l
        if case not in G.anomaly_cases(args.gauge):
            raise UsageError(f"no stated relation for 2d - l = {case}")
        if args.d is not None and 2 * args.d - args.l != case:
            raise UsageError("--case disagrees with 2d - l")
        try:
            return task_anomaly(args.gauge, case, args.d, args.l), None
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
    if cmd == "vanishing":
        if (args.d is None) != (args.l is None):
            raise UsageError("give both --d and --l or neither")
        try:
            return task_vanishing(args.gauge, args.clause, args.d, args.l), None
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
    if cmd == "decompose-a0":
        inst = _instance(args)
        return [G.decompose_a0(inst, args.weight)], None
    if cmd == "jacobi-numeric":
        inst = _instance(args)
        taus = args.tau or [2j, 1 + 1.5j]
        zs = args.z or [0.2, 0.1 + 0.1j]
        try:
            return [G.jacobi_numeric_check(inst, t, z) for t in taus for z in zs], None
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
    if cmd == "all":
        return run_tasks(suite_tasks(), args.jobs), None
    raise UsageError(f"unknown command {cmd}")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        reports, text = _dispatch(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if text is None:
        text = render(reports, args.format, args.timing)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0 if all(r.passed for r in reports) else 1


if __name__ == "__main__":
    sys.exit(main())
