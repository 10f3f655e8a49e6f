"""Command-line front end. Every command prints a JSON summary on stdout.

Exit codes: 0 success, 1 infeasible plan or violated rows, 2 bad input, 3 oracle limit.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from pdpset.bench import METHODS, Scenario, run_scenario
from pdpset.heuristic import solve
from pdpset.instance import (
    InstanceFormatError,
    Weights,
    generate_instance,
    illustrative_instance,
    load_instance,
    save_instance,
)
from pdpset.milp import build_model, check_assignment, export_lp, load_solution, objective_value
from pdpset.oracle import OracleLimitError, OracleLimits, exact_pdp, exact_pdpset
from pdpset.plan import PlanFormatError, check_feasible, evaluate, load_plan, save_plan

EXIT_OK, EXIT_INFEASIBLE, EXIT_INPUT, EXIT_LIMIT = 0, 1, 2, 3


class InputError(Exception):
    pass


def _emit(summary: dict) -> None:
    print(json.dumps(summary, indent=2, sort_keys=True))


def _write(path: str | None, text: str) -> None:
    if path:
        Path(path).write_text(text)


def _read_json(path: str, what: str):
    try:
        return json.loads(Path(path).read_text())
    except FileNotFoundError:
        raise InputError(f"{what} file {path}: not found")
    except json.JSONDecodeError as exc:
        raise InputError(f"{what} file {path}: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}")


def _weights(args) -> Weights:
    return Weights(args.alpha, args.beta, args.theta, args.delta)


def _instance(args):
    if getattr(args, "example", False):
        return illustrative_instance(d_max=args.dmax, t_range=args.trange)
    if getattr(args, "instance", None):
        try:
            return load_instance(_read_json(args.instance, "instance"))
        except InstanceFormatError as exc:
            raise InputError(f"instance file {args.instance}: {exc}")
    rows, cols = args.grid
    return generate_instance(
        rows, cols, args.vehicles, args.requests, capacity=args.capacity, weights=_weights(args),
        d_max=args.dmax, t_range=args.trange, seed=args.seed,
    )


def _plan(path: str):
    try:
        return load_plan(_read_json(path, "plan"))
    except PlanFormatError as exc:
        raise InputError(f"plan file {path}: {exc}")


def _gen_flags(p: argparse.ArgumentParser, with_instance: bool = True):
    if with_instance:
        p.add_argument("instance", nargs="?", help="instance JSON (otherwise generated from the flags)")
        p.add_argument("--example", action="store_true", help="use the built-in 5x5 two-vehicle example")
    p.add_argument("--grid", nargs=2, type=int, metavar=("R", "C"), default=(5, 5))
    p.add_argument("--vehicles", type=int, default=2)
    p.add_argument("--requests", type=int, default=3)
    p.add_argument("--capacity", type=int, default=6)
    for w in ("alpha", "beta", "theta", "delta"):
        p.add_argument(f"--{w}", type=float, default=1.0)
    p.add_argument("--dmax", type=float, default=2)
    p.add_argument("--trange", type=float, default=8)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="output path")


def cmd_gen(args) -> int:
    inst = _instance(args)
    doc = save_instance(inst)
    text = json.dumps(doc, indent=2)
    _write(args.out, text + "\n")
    summary = {"command": "gen", "nodes": inst.network.n_nodes, "vehicles": len(inst.vehicles),
               "requests": len(inst.requests), "seed": inst.seed, "out": args.out}
    if not args.out:
        summary["instance"] = doc
    _emit(summary)
    return EXIT_OK


def cmd_solve(args) -> int:
    inst = _instance(args)
    res = solve(inst, phase1_only=args.phase1_only, repeat=args.phase2_repeat, jobs=args.jobs)
    _write(args.out, json.dumps(save_plan(res.plan), indent=2) + "\n")
    _emit({
        "command": "solve",
        "pdp_cost": res.phase1_cost.total,
        "pdp_components": res.phase1_cost.as_dict(),
        "pdpset_cost": None if args.phase1_only else res.cost.total,
        "pdpset_components": None if args.phase1_only else res.cost.as_dict(),
        "n_transfers": res.n_transfers,
        "vehicles_in_transfers": res.vehicles_in_transfers,
        "phase1_seconds": round(res.phase1_seconds, 3),
        "phase2_seconds": round(res.phase2_seconds, 3),
        "plan": str(res.plan),
        "out": args.out,
    })
    return EXIT_OK


def cmd_oracle(args) -> int:
    inst = _instance(args)
    try:
        if args.mode == "pdp":
            res = exact_pdp(inst, OracleLimits(time_budget=args.time_limit), simple_routes=args.simple_routes)
        else:
            res = exact_pdpset(inst, OracleLimits(2, 3, 25, args.time_limit), simple_routes=args.simple_routes)
    except OracleLimitError as exc:
        _emit({"command": "oracle", "error": str(exc), "dimension": exc.dimension,
               "value": exc.value, "limit": exc.limit})
        return EXIT_LIMIT
    _write(args.out, json.dumps(save_plan(res.plan), indent=2) + "\n")
    _emit({"command": "oracle", "mode": args.mode, "cost": res.total, "components": res.cost.as_dict(),
           "plan": str(res.plan), "out": args.out})
    return EXIT_OK


def cmd_export(args) -> int:
    inst = _instance(args)
    model = build_model(inst, big_m=args.big_m)
    text = export_lp(model)
    _write(args.out, text)
    _emit({"command": "export-milp", "variables": len(model.vars), "constraints": len(model.rows),
           "big_m": model.big_m, "variable_families": model.family_counts(), "out": args.out,
           **({} if args.out else {"lp": text})})
    return EXIT_OK


def cmd_check(args) -> int:
    inst = _instance(args)
    if bool(args.plan) == bool(args.solution):
        raise InputError("check needs exactly one of --plan or --solution")
    if args.plan:
        violations = check_feasible(inst, _plan(args.plan))
        _emit({"command": "check", "kind": "plan", "feasible": not violations, "violations": violations})
        return EXIT_INFEASIBLE if violations else EXIT_OK
    model = build_model(inst, big_m=args.big_m)
    try:
        text = Path(args.solution).read_text()
    except FileNotFoundError:
        raise InputError(f"solution file {args.solution}: not found")
    asg, warnings = load_solution(text, model)
    violations = check_assignment(model, asg, tol=args.tol)
    _emit({"command": "check", "kind": "solution", "feasible": not violations, "violations": violations,
           "objective": objective_value(model, asg), "warnings": warnings})
    return EXIT_INFEASIBLE if violations else EXIT_OK


def cmd_eval(args) -> int:
    inst = _instance(args)
    plan = _plan(args.plan)
    violations = check_feasible(inst, plan)
    if violations:
        _emit({"command": "eval", "error": "plan is infeasible", "violations": violations})
        return EXIT_INFEASIBLE
    _emit({"command": "eval", **evaluate(inst, plan).as_dict()})
    return EXIT_OK


def cmd_bench(args) -> int:
    rows, cols = args.grid
    scenario = Scenario(
        name=args.name, rows=rows, cols=cols, n_vehicles=args.vehicles, n_requests=args.requests,
        seeds=tuple(args.seed + i for i in range(args.seeds)), capacity=args.capacity, weights=_weights(args),
        d_max=args.dmax, t_range=args.trange, methods=tuple(args.methods), phase2_repeat=args.phase2_repeat,
        oracle_time_limit=args.time_limit, oracle_simple_routes=args.simple_routes,
    )
    report = run_scenario(scenario, jobs=args.jobs)
    text = report.to_csv() if args.format == "csv" else report.to_json() + "\n"
    _write(args.out, text)
    if args.components:
        _write(args.components, report.components_csv())
    avg = report.aggregates()[0]
    _emit({"command": "bench", "scenario": scenario.name, "instances": len(report.rows), "format": args.format,
           "out": args.out, "avg": {k: v for k, v in avg.items() if v != "" and k not in ("instance", "seed")},
           "errors": [r["error"] for r in report.rows if r["error"]]})
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pdpset", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="write a random instance")
    _gen_flags(p, with_instance=False)
    p.add_argument("--example", action="store_true", help="write the built-in example instead")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("solve", help="run the two-phase heuristic")
    _gen_flags(p)
    p.add_argument("--phase1-only", action="store_true", help="stop after construction (no transfers)")
    p.add_argument("--phase2-repeat", action="store_true", help="repeat the transfer pass until nothing improves")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("oracle", help="exact enumeration on tiny instances")
    _gen_flags(p)
    p.add_argument("--mode", choices=("pdp", "pdpset"), default="pdpset")
    p.add_argument("--simple-routes", action="store_true", help="only plans without node revisits")
    p.add_argument("--time-limit", type=float, default=None, metavar="SECONDS")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("export-milp", help="write the MILP in LP format")
    _gen_flags(p)
    p.add_argument("--big-m", type=float, default=None)
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("check", help="validate a plan, or a solver solution against the MILP")
    _gen_flags(p)
    p.add_argument("--plan")
    p.add_argument("--solution", help="lines of 'variable value'")
    p.add_argument("--big-m", type=float, default=None)
    p.add_argument("--tol", type=float, default=1e-6)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("eval", help="cost breakdown of a plan")
    _gen_flags(p)
    p.add_argument("--plan", required=True)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("bench", help="scenario sweep with a comparison report")
    _gen_flags(p, with_instance=False)
    p.add_argument("--name", default="S")
    p.add_argument("--seeds", type=int, default=5, metavar="N")
    p.add_argument("--methods", nargs="+", choices=METHODS, default=["ha_pdp", "ha_pdpset"])
    p.add_argument("--phase2-repeat", action="store_true")
    p.add_argument("--simple-routes", action="store_true")
    p.add_argument("--time-limit", type=float, default=None, metavar="SECONDS")
    p.add_argument("--format", choices=("json", "csv"), default="csv")
    p.add_argument("--components", help="also write the per-method component table (CSV) here")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        _emit({"command": args.command, "error": str(exc)})
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
