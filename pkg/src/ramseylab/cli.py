"""Command-line front end.

Every subcommand prints one canonical JSON report to stdout::

    {"schema_version": 1, "query": {...}, "verdict": "...",
     "witness": ..., "stats": {"engine": ..., "nodes": ..., "time_ms": ...}}

Exit codes: 0 when the question was answered (in either direction), 1 on
usage or input errors, 2 when a node/conflict budget ran out first.

Reports are deterministic by default — time_ms is zeroed and the worker
count is not echoed, so the same query produces byte-identical output
whatever the machine or --workers value; pass --timing for wall-clock
numbers.  The RAMSEY_WORKERS environment variable, when set, overrides
--workers.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

from . import sat as satmod
from .colorings import (GENERATORS, Coloring, ColoringSpec, load_file,
                        save_file)
from .errors import BudgetExceededError, MalformedInputError, RamseyError
from .hindman import (BUILTIN_OPS, CutGrid, ScaledBundle, ShiftedBundle,
                      builtin_op, check_composed_witness,
                      check_depth_indexed_witness, check_fs_witness,
                      check_grid_witness, check_scaled_bundle,
                      check_scaled_quad, check_shifted_bundle,
                      check_shifted_quad, composed_color_by_depth,
                      find_fs_witness_detailed, find_grid_witness_detailed,
                      find_scaled_bundle_detailed, find_scaled_quad_detailed,
                      find_shifted_bundle_detailed,
                      find_shifted_quad_detailed, load_op_table,
                      load_witness, make_witness, save_witness,
                      verify_witness)
from .patterns import format_pattern, parse_pattern
from .search import (ENGINES, InstanceQuery, find_all_instances,
                     find_avoiding_coloring, find_instance_detailed,
                     threshold_number)
from .semigroups import algebra_report, is_central, load_table, translate_set

PROG = "ramseylab"


def _canonical(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on usage errors; the report contract reserves 2 for
    exhausted budgets, so remap to 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _csv_ints(text: str) -> tuple:
    try:
        return tuple(int(t) for t in text.split(",") if t.strip() != "")
    except ValueError:
        raise MalformedInputError(f"expected comma-separated integers, got {text!r}")


def _add_coloring_args(p: argparse.ArgumentParser):
    g = p.add_argument_group("coloring source")
    g.add_argument("--coloring-file", metavar="FILE",
                   help="read the coloring from a grid file")
    g.add_argument("--generator", choices=GENERATORS,
                   help="build the coloring from a named generator")
    g.add_argument("--d", type=int, default=1, help="dimension (default 1)")
    g.add_argument("--n", type=int, help="box size N")
    g.add_argument("--colors", type=int, help="number of colors")
    g.add_argument("--param", default="",
                   help="generator parameters, comma separated")
    g.add_argument("--seed", type=int, default=0,
                   help="seed for the random generator (default 0)")


def _coloring_from_args(args) -> tuple:
    """Returns (coloring, spec).  Exactly one source must be given."""
    if args.coloring_file and args.generator:
        raise RamseyError("give either --coloring-file or --generator, not both")
    if args.coloring_file:
        spec = ColoringSpec(kind="file", path=args.coloring_file)
        return load_file(args.coloring_file), spec
    if args.generator:
        if args.n is None or args.colors is None:
            raise RamseyError("--generator needs --n and --colors")
        spec = ColoringSpec(kind="generator", generator=args.generator,
                            d=args.d, N=args.n, c=args.colors,
                            param=_csv_ints(args.param), seed=args.seed)
        return spec.load(), spec
    raise RamseyError("no coloring given (use --coloring-file or --generator)")


def _workers(args) -> int:
    env = os.environ.get("RAMSEY_WORKERS")
    if env is not None:
        try:
            return max(1, int(env))
        except ValueError:
            raise RamseyError(f"RAMSEY_WORKERS must be an integer, got {env!r}")
    return max(1, getattr(args, "workers", 1))


def _stats(engine: str, nodes: int, t0: float, timing: bool) -> dict:
    dt = (time.perf_counter() - t0) * 1000.0
    return {"engine": engine, "nodes": nodes,
            "time_ms": round(dt, 3) if timing else 0.0}


def _report(query: dict, verdict: str, witness, stats: dict) -> dict:
    return {"schema_version": 1, "query": query, "verdict": verdict,
            "witness": witness, "stats": stats}


def _emit(report: dict, out_path=None) -> None:
    text = _canonical(report)
    sys.stdout.write(text)
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _maybe_save_witness(args, kind: str, data: dict, spec: ColoringSpec):
    path = getattr(args, "witness_out", None)
    if path:
        save_witness(path, make_witness(kind, data, coloring_spec=spec,
                                        validated=True))


# ---------------------------------------------------------------------------
# subcommands


def cmd_find(args) -> int:
    schema = parse_pattern(args.pattern, distinct_vars=args.distinct,
                           min_value=args.min_value)
    coloring, spec = _coloring_from_args(args)
    query = {"command": "find", "pattern": format_pattern(schema),
             "distinct": schema.distinct_vars, "min_value": schema.min_value,
             "coloring": spec.to_json()}
    t0 = time.perf_counter()
    iq = InstanceQuery(schema=schema, coloring=coloring)
    if args.all:
        hits = find_all_instances(iq, limit=args.max_witnesses)
        witness = [{"assignment": a, "color": c} for a, c in hits]
        nodes = len(hits)
        verdict = "found" if hits else "none"
    else:
        hit, nodes = find_instance_detailed(iq, workers=_workers(args),
                                            max_nodes=args.max_nodes)
        witness = ({"assignment": hit[0], "color": hit[1]}
                   if hit is not None else None)
        verdict = "found" if hit is not None else "none"
    _emit(_report(query, verdict, witness,
                  _stats("scan", nodes, t0, args.timing)), args.out)
    return 0


def cmd_avoid(args) -> int:
    schema = parse_pattern(args.pattern, distinct_vars=args.distinct,
                           min_value=args.min_value)
    query = {"command": "avoid", "pattern": format_pattern(schema),
             "distinct": schema.distinct_vars, "min_value": schema.min_value,
             "n": args.n, "colors": args.colors, "engine": args.engine}
    t0 = time.perf_counter()
    res = find_avoiding_coloring(schema, args.n, args.colors,
                                 engine=args.engine,
                                 max_nodes=args.max_nodes,
                                 workers=_workers(args))
    witness = None
    if res.coloring is not None:
        witness = {"cells": list(res.coloring.cells)}
        if args.coloring_out:
            save_file(res.coloring, args.coloring_out)
    _emit(_report(query, res.verdict, witness,
                  _stats(args.engine, res.stats.nodes, t0, args.timing)),
          args.out)
    return 2 if res.verdict == "unknown" else 0


def cmd_threshold(args) -> int:
    schema = parse_pattern(args.pattern, distinct_vars=args.distinct,
                           min_value=args.min_value)
    query = {"command": "threshold", "pattern": format_pattern(schema),
             "distinct": schema.distinct_vars, "min_value": schema.min_value,
             "colors": args.colors, "n_max": args.n_max,
             "engine": args.engine}
    t0 = time.perf_counter()
    res = threshold_number(schema, args.colors, args.n_max,
                           engine=args.engine, max_nodes=args.max_nodes,
                           workers=_workers(args))
    nodes = sum(r[2] for r in res.rows)
    witness = None
    if res.threshold is not None:
        witness = {"threshold": res.threshold,
                   "certificate": (list(res.certificate.cells)
                                   if res.certificate else None)}
    if args.csv:
        with open(args.csv, "w", encoding="utf-8") as fh:
            fh.write("N,verdict,nodes,time_ms\n")
            for N, verdict, n_nodes, t_ms in res.rows:
                ms = round(t_ms, 3) if args.timing else 0.0
                fh.write(f"{N},{verdict},{n_nodes},{ms}\n")
    _emit(_report(query, res.status, witness,
                  _stats(args.engine, nodes, t0, args.timing)), args.out)
    return 2 if res.status == "unknown" else 0


def cmd_encode(args) -> int:
    schema = parse_pattern(args.pattern, distinct_vars=args.distinct,
                           min_value=args.min_value)
    formula, _ = satmod.encode_avoidance(schema, args.n, args.colors,
                                         symmetry_break=args.symmetry_break)
    with open(args.out_cnf, "w", encoding="utf-8") as fh:
        fh.write(satmod.export_dimacs(formula))
    query = {"command": "encode", "pattern": format_pattern(schema),
             "distinct": schema.distinct_vars, "min_value": schema.min_value,
             "n": args.n, "colors": args.colors,
             "symmetry_break": args.symmetry_break}
    witness = {"path": args.out_cnf, "vars": formula.var_count,
               "clauses": len(formula.clauses)}
    _emit(_report(query, "encoded", witness,
                  {"engine": "encode", "nodes": 0, "time_ms": 0.0}), args.out)
    return 0


def cmd_solve(args) -> int:
    with open(args.cnf, "r", encoding="utf-8") as fh:
        formula = satmod.parse_dimacs(fh.read())
    t0 = time.perf_counter()
    sv = satmod.solve(formula, max_conflicts=args.max_conflicts)
    query = {"command": "solve", "cnf": args.cnf,
             "vars": formula.var_count, "clauses": len(formula.clauses)}
    witness = None
    if sv.status == satmod.SAT:
        witness = {"model": list(sv.model)}
        if args.n is not None and args.colors is not None:
            vmap = satmod.ColorVarMap(N=args.n, c=args.colors)
            witness["cells"] = list(vmap.decode(sv.model).cells)
    if args.model_out and sv.status != satmod.UNKNOWN:
        with open(args.model_out, "w", encoding="utf-8") as fh:
            fh.write(satmod.format_solver_output(sv))
    verdict = {satmod.SAT: "sat", satmod.UNSAT: "unsat",
               satmod.UNKNOWN: "unknown"}[sv.status]
    _emit(_report(query, verdict, witness,
                  _stats("sat", sv.conflicts + sv.decisions, t0,
                         args.timing)), args.out)
    return 2 if verdict == "unknown" else 0


def cmd_fs_witness(args) -> int:
    coloring, spec = _coloring_from_args(args)
    query = {"command": "fs-witness", "k": args.k,
             "coloring": spec.to_json()}
    t0 = time.perf_counter()
    hit, nodes = find_fs_witness_detailed(coloring, args.k,
                                          budget=args.budget,
                                          workers=_workers(args))
    witness = None
    if hit is not None:
        ok, color = check_fs_witness(coloring, hit)
        assert ok
        witness = {"generators": list(hit), "color": color}
        _maybe_save_witness(args, "fs", dict(witness, k=args.k), spec)
    _emit(_report(query, "found" if hit else "none", witness,
                  _stats("fs-scan", nodes, t0, args.timing)), args.out)
    return 0


def cmd_grid_witness(args) -> int:
    coloring, spec = _coloring_from_args(args)
    query = {"command": "grid-witness", "length": args.length,
             "blocks": args.blocks, "coloring": spec.to_json()}
    t0 = time.perf_counter()
    hit, nodes = find_grid_witness_detailed(coloring, args.length,
                                            args.blocks, budget=args.budget,
                                            workers=_workers(args))
    witness = None
    if hit is not None:
        seq, color = hit
        witness = {"sequence": list(seq), "d": args.blocks, "color": color}
        _maybe_save_witness(args, "grid", dict(witness), spec)
    _emit(_report(query, "found" if hit else "none", witness,
                  _stats("grid-scan", nodes, t0, args.timing)), args.out)
    return 0


def _op_from_args(args, coloring: Coloring):
    if args.op_table:
        return load_op_table(args.op_table)
    n = args.op_n if args.op_n is not None else coloring.N
    return builtin_op(args.op, n)


def cmd_composed_witness(args) -> int:
    coloring, spec = _coloring_from_args(args)
    op = _op_from_args(args, coloring)
    seq = _csv_ints(args.sequence)
    base = {"command": "composed-witness", "sequence": list(seq),
            "op": op.to_json(), "coloring": spec.to_json()}
    t0 = time.perf_counter()
    if args.profile_depth is not None:
        profile = composed_color_by_depth(coloring, op, seq,
                                          args.profile_depth)
        verdict = "profiled"
        witness = {"profile": profile}
        query = dict(base, mode="profile", d_max=args.profile_depth)
    elif args.depth_set_m0 is not None:
        ok, color = check_depth_indexed_witness(coloring, op, seq,
                                                args.depth_set_m0)
        verdict = "valid" if ok else "invalid"
        witness = {"color": color} if ok else None
        query = dict(base, mode="depth-indexed", m0=args.depth_set_m0)
    else:
        if not args.cuts:
            raise RamseyError("composed-witness needs --cuts (or --profile-depth"
                              " / --depth-set-m0)")
        cuts = _csv_ints(args.cuts)
        ok, color = check_composed_witness(coloring, op, CutGrid(seq, cuts))
        verdict = "valid" if ok else "invalid"
        witness = {"color": color} if ok else None
        query = dict(base, mode="check", cuts=list(cuts))
    _emit(_report(query, verdict, witness,
                  _stats("composed-check", 0, t0, args.timing)), args.out)
    return 0


def _cmd_bundle(args, shifted: bool) -> int:
    coloring, spec = _coloring_from_args(args)
    name = "bundle15" if shifted else "bundle14"
    t0 = time.perf_counter()
    if args.corollary:
        find = find_shifted_quad_detailed if shifted else find_scaled_quad_detailed
        query = {"command": name, "mode": "corollary",
                 "coloring": spec.to_json()}
        hit, nodes = find(coloring, workers=_workers(args),
                          max_nodes=args.budget)
        witness = None
        if hit is not None:
            asg, color = hit
            if shifted:
                ok, chk = check_shifted_quad(coloring, asg["b"], asg["u"],
                                             asg["v"])
            else:
                ok, chk = check_scaled_quad(coloring, asg["a"], asg["x"],
                                            asg["y"])
            assert ok and chk == color
            witness = {"assignment": asg, "color": color}
        _emit(_report(query, "found" if hit else "none", witness,
                      _stats("quad-scan", nodes, t0, args.timing)), args.out)
        return 0
    query = {"command": name, "mode": "bundle", "k": args.k,
             "cap_a": args.cap_a, "cap_b": args.cap_b,
             "coloring": spec.to_json()}
    find = find_shifted_bundle_detailed if shifted else find_scaled_bundle_detailed
    hit, nodes = find(coloring, args.k, cap_a=args.cap_a, cap_b=args.cap_b,
                      budget=args.budget, workers=_workers(args))
    witness = None
    if hit is not None:
        check = check_shifted_bundle if shifted else check_scaled_bundle
        ok, detail = check(coloring, hit)
        assert ok, detail
        witness = {"lam": hit.lam, "a_set": list(hit.a_set),
                   "b_set": list(hit.b_set), "k": hit.k, "color": hit.color}
        _maybe_save_witness(args, name, dict(witness), spec)
    _emit(_report(query, "found" if hit else "none", witness,
                  _stats("bundle-scan", nodes, t0, args.timing)), args.out)
    return 0


def cmd_bundle14(args) -> int:
    return _cmd_bundle(args, shifted=False)


def cmd_bundle15(args) -> int:
    return _cmd_bundle(args, shifted=True)


def cmd_verify(args) -> int:
    record = load_witness(args.witness)
    coloring = None
    if args.coloring_file or args.generator:
        coloring, _ = _coloring_from_args(args)
    ok, detail = verify_witness(record, coloring=coloring)
    query = {"command": "verify", "witness": args.witness,
             "kind": record["kind"]}
    _emit(_report(query, "valid" if ok else "invalid", {"detail": detail},
                  {"engine": "verify", "nodes": 0, "time_ms": 0.0}), args.out)
    return 0


def cmd_semigroup(args) -> int:
    table = load_table(args.table)
    report = algebra_report(table).to_json()
    if args.central_subset is not None:
        subset = _csv_ints(args.central_subset)
        report["subset"] = sorted(subset)
        report["central"] = is_central(table, subset)
        if args.translate_by is not None:
            report["translate_by"] = args.translate_by
            report["translate"] = sorted(
                translate_set(table, subset, args.translate_by))
    elif args.translate_by is not None:
        raise RamseyError("--translate-by needs --central-subset")
    query = {"command": "semigroup", "table": args.table}
    _emit(_report(query, "analyzed", report,
                  {"engine": "algebra", "nodes": 0, "time_ms": 0.0}),
          args.out)
    return 0


def cmd_suite(args) -> int:
    from .acceptance import run_criteria
    ids = _csv_ints(args.ids) if args.ids else None
    results = run_criteria(ids)
    failed = 0
    for cid, name, passed, detail in results:
        tag = "PASS" if passed else "FAIL"
        print(f"criterion {cid} [{name}]: {tag} — {detail}")
        if not passed:
            failed += 1
    print(f"{len(results) - failed}/{len(results)} criteria passed")
    return 0 if failed == 0 else 1


# ---------------------------------------------------------------------------
# parser


def _pattern_args(p):
    p.add_argument("--pattern", required=True,
                   help='pattern schema, e.g. "{x, y, x+y}"')
    p.add_argument("--distinct", action="store_true",
                   help="require pairwise distinct variable values")
    p.add_argument("--min-value", type=int, default=1,
                   help="least admissible variable value (default 1)")


def _search_args(p, budget_flag="--max-nodes"):
    p.add_argument(budget_flag, dest=budget_flag.strip("-").replace("-", "_"),
                   type=int, default=None, help="node/conflict budget")
    p.add_argument("--workers", type=int, default=1,
                   help="worker threads (RAMSEY_WORKERS overrides)")


def _common_out(p):
    p.add_argument("--out", help="also write the report JSON to this file")
    p.add_argument("--timing", action="store_true",
                   help="report wall-clock time_ms instead of 0.0")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog=PROG, description=__doc__,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("find", help="least monochromatic instance in a coloring")
    _pattern_args(p)
    _add_coloring_args(p)
    _search_args(p)
    p.add_argument("--all", action="store_true",
                   help="enumerate instances instead of stopping at the first")
    p.add_argument("--max-witnesses", type=int, default=1000,
                   help="cap for --all (default 1000)")
    _common_out(p)
    p.set_defaults(fn=cmd_find)

    p = sub.add_parser("avoid", help="search for an avoiding coloring of [1..N]")
    _pattern_args(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--colors", type=int, required=True)
    p.add_argument("--engine", choices=ENGINES, default="backtracking")
    _search_args(p)
    p.add_argument("--coloring-out", help="save a found coloring to this file")
    _common_out(p)
    p.set_defaults(fn=cmd_avoid)

    p = sub.add_parser("threshold",
                       help="least N forcing the pattern in every c-coloring")
    _pattern_args(p)
    p.add_argument("--colors", type=int, required=True)
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--engine", choices=ENGINES, default="backtracking")
    _search_args(p)
    p.add_argument("--csv", help="write the per-N scan rows to this CSV file")
    _common_out(p)
    p.set_defaults(fn=cmd_threshold)

    p = sub.add_parser("encode", help="write the avoidance CNF as DIMACS")
    _pattern_args(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--colors", type=int, required=True)
    p.add_argument("--symmetry-break", action="store_true",
                   help="pin value 1 to color 0")
    p.add_argument("--out-cnf", required=True, metavar="FILE")
    _common_out(p)
    p.set_defaults(fn=cmd_encode)

    p = sub.add_parser("solve", help="run the bundled solver on a DIMACS file")
    p.add_argument("cnf")
    p.add_argument("--max-conflicts", type=int, default=None)
    p.add_argument("--model-out", help="write s/v solver output to this file")
    p.add_argument("--n", type=int, help="decode the model as a coloring of [1..N]")
    p.add_argument("--colors", type=int, help="colors for model decoding")
    _common_out(p)
    p.set_defaults(fn=cmd_solve)

    p = sub.add_parser("fs-witness",
                       help="least k-generator monochromatic subset-sum closure")
    _add_coloring_args(p)
    p.add_argument("--k", type=int, required=True)
    _search_args(p, "--budget")
    p.add_argument("--witness-out", help="save the witness record here")
    _common_out(p)
    p.set_defaults(fn=cmd_fs_witness)

    p = sub.add_parser("grid-witness",
                       help="least sequence whose d-block grids share one color")
    _add_coloring_args(p)
    p.add_argument("--length", type=int, required=True, help="sequence length L")
    p.add_argument("--blocks", type=int, required=True, help="blocks per cut d")
    _search_args(p, "--budget")
    p.add_argument("--witness-out", help="save the witness record here")
    _common_out(p)
    p.set_defaults(fn=cmd_grid_witness)

    p = sub.add_parser("composed-witness",
                       help="check composed/depth-indexed witnesses")
    _add_coloring_args(p)
    p.add_argument("--sequence", required=True, help="comma-separated entries")
    p.add_argument("--cuts", help="comma-separated cut tuple m_0,...,m_d")
    p.add_argument("--op", choices=BUILTIN_OPS, default="multiplication-capped")
    p.add_argument("--op-table", help="explicit operation table file")
    p.add_argument("--op-n", type=int, help="builtin op domain (default N)")
    p.add_argument("--profile-depth", type=int,
                   help="profile common colors for d = 1..D instead")
    p.add_argument("--depth-set-m0", type=int,
                   help="depth-indexed check with this head length")
    _common_out(p)
    p.set_defaults(fn=cmd_composed_witness)

    for name, helptext in (("bundle14", "scaled bundle lam*A ∪ lam*B ∪ "
                            "lam*(A+B) ∪ A*B with structured A"),
                           ("bundle15", "shifted bundle (lam+A) ∪ (lam+B) ∪ "
                            "(lam+A*B) ∪ (A+B) with structured A")):
        p = sub.add_parser(name, help=helptext)
        _add_coloring_args(p)
        p.add_argument("--k", type=int, default=2,
                       help="structure order (default 2)")
        p.add_argument("--cap-a", type=int, default=None,
                       help="largest |A| to try")
        p.add_argument("--cap-b", type=int, default=2,
                       help="largest |B| to try (default 2)")
        p.add_argument("--corollary", action="store_true",
                       help="search the 4-term quadruple pattern instead")
        _search_args(p, "--budget")
        p.add_argument("--witness-out", help="save the witness record here")
        _common_out(p)
        p.set_defaults(fn=cmd_bundle14 if name == "bundle14" else cmd_bundle15)

    p = sub.add_parser("verify", help="re-check a saved witness record")
    p.add_argument("witness")
    _add_coloring_args(p)
    _common_out(p)
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("semigroup", help="idempotent/ideal report for a table")
    p.add_argument("--table", required=True, help="Cayley table file")
    p.add_argument("--central-subset", help="comma-separated elements")
    p.add_argument("--translate-by", type=int,
                   help="also report subset - s for this s")
    _common_out(p)
    p.set_defaults(fn=cmd_semigroup)

    p = sub.add_parser("suite", help="run the acceptance criteria")
    p.add_argument("--ids", help="comma-separated criterion ids (default all)")
    p.set_defaults(fn=cmd_suite)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.fn(args)
    except BudgetExceededError as exc:
        _emit({"schema_version": 1, "query": {"command": args.command},
               "verdict": "unknown", "witness": None,
               "stats": {"engine": "", "nodes": 0, "time_ms": 0.0},
               "error": str(exc)})
        return 2
    except RamseyError as exc:
        _emit({"schema_version": 1, "query": {"command": args.command},
               "verdict": "error", "witness": None,
               "stats": {"engine": "", "nodes": 0, "time_ms": 0.0},
               "error": str(exc)})
        return 1
    except OSError as exc:
        print(f"{PROG}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
