"""Command-line front end.

Exit codes: 0 all checks pass, 1 a checked property fails, 2 bad input,
3 numeric precision or search budget exhausted.
"""

from __future__ import annotations

import argparse
import os
import sys
import time
from pathlib import Path

from . import catalog
from .arrangement import counting_identities, hirzebruch_check, intersection_lattice
from .exact import PrecisionError
from .flatmetric import angle_record
from .io import InputError, arrangement_to_json, dumps, load_arrangement

REPORT_SCHEMA = "hirzebruch.report/1"
EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3


class _Exit(Exception):
    def __init__(self, code: int, message: str, results: dict | None = None):
        super().__init__(message)
        self.code = code
        self.results = results or {}


def _tolerance() -> float:
    raw = os.environ.get("ARR_TOL")
    if raw is None:
        return 1e-9
    try:
        tol = float(raw)
    except ValueError:
        raise _Exit(EXIT_INPUT, f"ARR_TOL is not a number: {raw!r}")
    if not tol > 0:
        raise _Exit(EXIT_INPUT, "ARR_TOL must be positive")
    return tol


# -- commands -------------------------------------------------------------------------


def cmd_check(args, tol) -> tuple[bool, dict, list[str]]:
    from .cells import structural_predicates

    arr = load_arrangement(args.file)
    lat = intersection_lattice(arr)
    hz = hirzebruch_check(lat)
    res = {
        "name": arr.name,
        "field": arr.field.name,
        "lines": len(arr.lines),
        "real": arr.is_real and arr.field.is_real,
        "t_profile": {str(k): v for k, v in lat.t_profile.items()},
        "hirzebruch": hz.as_dict(),
    }
    ok = hz.passed
    diags = [] if hz.passed else [hz.reason]
    if hz.passed:
        ids = counting_identities(lat.t_profile, hz.n)
        res["counting_identities"] = ids
        ok &= ids["sum_k_tk_ok"] and ids["pairs_ok"]
        if res["real"]:
            sp = structural_predicates(arr, lat)
            res["structural"] = sp
            ok &= sp["all_pass"]
            diags += [f"predicate failed: {k}" for k, v in sp["predicates"].items() if not v and k not in sp["exempt"]]
        else:
            res["structural"] = "not applicable (arrangement is not real)"
    return ok, res, diags


def cmd_catalog(args, tol):
    if args.action == "list":
        names = catalog.catalog_names(include_stretch=args.all)
        entries = []
        for nm in names:
            e = catalog.CATALOG[nm]
            entries.append(
                {
                    "name": nm,
                    "lines": 3 * e.expected_n,
                    "n": e.expected_n,
                    "field": e.field,
                    "real": e.real,
                    "t_profile": {str(k): v for k, v in e.expected_t_profile.items()},
                }
            )
        return True, {"entries": entries}, []
    if not args.name:
        raise _Exit(EXIT_INPUT, "catalog emit needs a NAME")
    try:
        arr = catalog.build(args.name)
    except (KeyError, ValueError) as e:
        raise _Exit(EXIT_INPUT, e.args[0])
    hz = hirzebruch_check(arr)
    entry = catalog.CATALOG.get(args.name)
    if not hz.passed or (entry is not None and hz.n != entry.expected_n):
        return False, {"name": args.name, "hirzebruch": hz.as_dict()}, ["self-check failed; nothing written"]
    doc = arrangement_to_json(arr)
    if args.output in (None, "-"):
        return True, {"_raw": dumps(doc)}, []
    Path(args.output).write_text(dumps(doc))
    return True, {"name": args.name, "lines": len(arr.lines), "field": arr.field.name, "written": args.output}, []


def cmd_metric(args, tol):
    from .flatmetric import verify_metric

    arr = load_arrangement(args.file)
    if not (arr.is_real and arr.field.is_real):
        raise _Exit(EXIT_INPUT, "metric needs a real arrangement")
    hz = hirzebruch_check(arr)
    if not hz.passed:
        return False, {"hirzebruch": hz.as_dict()}, [hz.reason]
    if (args.n or hz.n) < 2:
        raise _Exit(EXIT_INPUT, "the flat metric needs n >= 2")
    try:
        rep = verify_metric(arr, n_override=args.n, tol=tol)
    except ValueError as e:
        return False, {"n": hz.n}, [str(e)]
    return rep.passed, rep.as_dict(), rep.diagnostics


def cmd_polygon(args, tol):
    from .campaign import run_campaign

    if args.samples < 1:
        raise _Exit(EXIT_INPUT, "--samples must be positive")
    t = args.tol if args.tol is not None else tol
    res = run_campaign(args.samples, args.seed, t)
    diags = [
        f"{k}: {v['violations']} violations, {v['inconclusive']} inconclusive"
        for k, v in res["statements"].items()
        if v["violations"] or v["inconclusive"]
    ]
    return res["pass"], res, diags


def cmd_search(args, tol):
    from .search import arrangement_incidence_canonical, enumerate_types

    if args.n < 1:
        raise _Exit(EXIT_INPUT, "--n must be positive")
    r = enumerate_types(args.n, args.mode, jobs=args.jobs, budget=args.budget)
    matches = {}
    for t in r.types:
        names = []
        for nm in catalog.catalog_names(include_stretch=True):
            e = catalog.CATALOG[nm]
            if 3 * e.expected_n == t.n_lines and arrangement_incidence_canonical(e.build()) == t.incidence_canonical:
                names.append(nm)
        matches[t.canonical] = names
    cert = r.certificate(matches, timings=not args.no_timings)
    if args.certificate:
        Path(args.certificate).write_text(dumps(cert))
    res = {k: cert[k] for k in ("n", "mode", "soundness", "nodes", "types_found", "exhausted_budget", "profiles")}
    res["matches"] = sorted({m for v in matches.values() for m in v})
    if args.certificate:
        res["certificate"] = args.certificate
    if r.exhausted:
        raise _Exit(EXIT_BUDGET, f"node budget exhausted after {r.nodes} nodes; results are partial", res)
    return True, res, []


def cmd_consistency(args, tol):
    from .flatmetric import solve_consistency, triangle_shape

    if args.dmax < 3:
        raise _Exit(EXIT_INPUT, "--dmax must be at least 3")
    try:
        c = solve_consistency(tuple(range(3, min(args.dmax, 5) + 1)), args.nmax, tol)
    except ValueError as e:
        raise _Exit(EXIT_INPUT, str(e))
    res = c.as_dict()
    res["solution_triangles"] = {
        f"{d},{n}": [angle_record(a) for a in triangle_shape(n, d, tol).angles] for d, n in c.solutions
    }
    diags = [] if args.dmax <= 5 else ["face types only allow d <= 5; larger d ignored"]
    return c.identity_agrees, res, diags


# -- driver ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print the report as JSON")
    common.add_argument("--no-timings", action="store_true", help="omit wall-clock timings from reports")

    # --json / --no-timings belong to each subcommand (argparse would let a
    # subparser default silently override a top-level flag)
    p = argparse.ArgumentParser(prog="hirzebruch", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("check", parents=[common], help="lattice, Hirzebruch property and structural predicates")
    s.add_argument("file", help="arrangement JSON file ('-' for stdin)")
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("catalog", parents=[common], help="list or emit catalog arrangements")
    s.add_argument("action", choices=("list", "emit"))
    s.add_argument("name", nargs="?")
    s.add_argument("-o", "--output", help="output file (default stdout)")
    s.add_argument("--all", action="store_true", help="include stretch entries")
    s.set_defaults(func=cmd_catalog)

    s = sub.add_parser("metric", parents=[common], help="verify the flat triangulation of a real arrangement")
    s.add_argument("file")
    s.add_argument("--n", type=int, default=None, help="override the parameter n")
    s.set_defaults(func=cmd_metric)

    s = sub.add_parser("polygon", parents=[common], help="spherical polygon property campaign")
    s.add_argument("action", choices=("selftest",))
    s.add_argument("--samples", type=int, default=1000)
    s.add_argument("--seed", type=int, default=42)
    s.add_argument("--tol", type=float, default=None)
    s.set_defaults(func=cmd_polygon)

    s = sub.add_parser("search", parents=[common], help="enumerate combinatorial types")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--mode", choices=("counting_only", "paper_pruned"), default="counting_only")
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--budget", type=int, default=None, help="node budget")
    s.add_argument("--certificate", help="write the search certificate here")
    s.set_defaults(func=cmd_search)

    s = sub.add_parser("consistency", parents=[common], help="solve for flat (2,3,d) triangles")
    s.add_argument("--dmax", type=int, default=5)
    s.add_argument("--nmax", type=int, default=100)
    s.set_defaults(func=cmd_consistency)
    return p


def _human(command: str, ok: bool, res: dict, diags: list[str]) -> str:
    lines = [f"{command}: {'PASS' if ok else 'FAIL'}"]
    for k, v in res.items():
        if isinstance(v, (dict, list)) and len(str(v)) > 100:
            v = f"<{type(v).__name__} with {len(v)} entries; use --json>"
        lines.append(f"  {k}: {v}")
    lines += [f"  ! {d}" for d in diags]
    return "\n".join(lines) + "\n"


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    t0 = time.perf_counter()
    code, ok, res, diags = EXIT_OK, False, {}, []
    try:
        tol = _tolerance()
        ok, res, diags = args.func(args, tol)
        code = EXIT_OK if ok else EXIT_FAIL
    except _Exit as e:
        code, res, diags = e.code, e.results, [str(e)]
    except InputError as e:
        code, diags = EXIT_INPUT, [str(e)]
    except PrecisionError as e:
        code, diags = EXIT_BUDGET, [f"precision budget exhausted: {e}"]
    if "_raw" in res:
        sys.stdout.write(res["_raw"])
        return code
    report = {
        "schema": REPORT_SCHEMA,
        "command": argv,
        "pass": code == EXIT_OK,
        "exit_code": code,
        "results": res,
        "diagnostics": diags,
    }
    if not args.no_timings:
        report["timings"] = {"wall_s": round(time.perf_counter() - t0, 3)}
    if args.json:
        sys.stdout.write(dumps(report))
    else:
        sys.stdout.write(_human(args.command, code == EXIT_OK, res, diags))
    return code


if __name__ == "__main__":
    sys.exit(main())
