"""Small-scale sweep: S1-S4 on a 5x5 grid, every method that fits, plus T_range sensitivity.

    python3 scripts/small_scale.py --out results/small
"""

from __future__ import annotations

import argparse
import json
import statistics
from pathlib import Path

from pdpset.bench import run_scenario, small_scale_scenarios
from pdpset.heuristic import best_transfer_for_pair, phase1_construct, phase2_improve
from pdpset.plan import evaluate


def sensitivity(scenarios, t_ranges=(8, 5, 2)) -> list[dict]:
    rows = []
    for sc in scenarios:
        for i, seed in enumerate(sc.seeds):
            inst = sc.instance(seed)
            p1 = phase1_construct(inst)
            row = {"instance": f"{sc.name}N{i + 1}", "seed": seed, "ha_pdp_total": evaluate(inst, p1).total}
            for t in t_ranges:
                p2 = phase2_improve(inst, p1, t_range=t)
                cand = best_transfer_for_pair(inst, p1, 1, 2, t_range=t)
                row[f"t{t}_total"] = evaluate(inst, p2).total
                row[f"t{t}_pair_savings"] = cand.savings if cand else 0.0
                row[f"t{t}_transfers"] = len(p2.transfers())
            rows.append(row)
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="results/small")
    ap.add_argument("--seed-base", type=int, default=0)
    ap.add_argument("--simple-routes", action="store_true", help="oracle restricted to routes without revisits")
    ap.add_argument("--jobs", type=int, default=1)
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    scenarios = small_scale_scenarios(args.seed_base, oracle_simple_routes=args.simple_routes)
    ratios = []
    for sc in scenarios:
        methods = ["ha_pdp", "ha_pdpset"]
        if sc.n_requests <= 4:
            methods.append("exact_pdp")
        if sc.n_requests <= 3:
            methods.append("exact_pdpset")
        sc = type(sc)(**{**sc.__dict__, "methods": tuple(methods)})
        report = run_scenario(sc, jobs=args.jobs)
        (out / f"{sc.name}.csv").write_text(report.to_csv())
        (out / f"{sc.name}_components.csv").write_text(report.components_csv())
        ratios += [r["ha_pdp_vs_ha_pdpset"] for r in report.rows if r["ha_pdp_vs_ha_pdpset"] != ""]
        print(f"{sc.name}: " + json.dumps({k: v for k, v in report.aggregates()[0].items()
                                           if k.endswith("_total") or "_vs_" in k}))

    sens = sensitivity(scenarios)
    cols = list(sens[0])
    lines = [",".join(cols)] + [",".join(str(r[c]) for c in cols) for r in sens]
    (out / "trange_sensitivity.csv").write_text("\n".join(lines) + "\n")
    no_transfer = {t: sum(r[f"t{t}_transfers"] == 0 for r in sens) for t in (8, 5, 2)}
    print(json.dumps({
        "ha_pdp_vs_ha_pdpset_mean": statistics.fmean(ratios),
        "ha_pdp_vs_ha_pdpset_min": min(ratios),
        "instances_without_transfer": no_transfer,
    }, indent=2))


if __name__ == "__main__":
    main()
