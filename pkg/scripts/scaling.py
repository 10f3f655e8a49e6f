"""Network-size sweep: |K|=10, |R|=30 on square grids, heuristic runtime and transfer counts.

    python3 scripts/scaling.py --grids 5 25 50 100 --seeds 5
"""

from __future__ import annotations

import argparse
import json
from pathlib import Path

from pdpset.bench import Scenario, run_scenario


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--grids", nargs="+", type=int, default=[5, 25, 50, 100])
    ap.add_argument("--vehicles", type=int, default=10)
    ap.add_argument("--requests", type=int, default=30)
    ap.add_argument("--seeds", type=int, default=5)
    ap.add_argument("--out", default="results/scaling")
    ap.add_argument("--jobs", type=int, default=1)
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    summary = []
    for g in args.grids:
        sc = Scenario(name=f"G{g}", rows=g, cols=g, n_vehicles=args.vehicles, n_requests=args.requests,
                      seeds=tuple(range(1, args.seeds + 1)))
        report = run_scenario(sc, jobs=args.jobs)
        (out / f"G{g}.csv").write_text(report.to_csv())
        avg = report.aggregates()[0]
        summary.append({
            "grid": g,
            "phase1_seconds": avg["ha_phase1_seconds"],
            "phase2_seconds": avg["ha_phase2_seconds"],
            "total_seconds": avg["ha_pdpset_seconds"],
            "saving": avg["ha_pdp_vs_ha_pdpset"],
            "transfers": avg["n_transfers"],
        })
        print(json.dumps(summary[-1]))
    (out / "summary.json").write_text(json.dumps(summary, indent=2) + "\n")


if __name__ == "__main__":
    main()
