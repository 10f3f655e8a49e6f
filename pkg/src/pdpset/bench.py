"""Scenario sweeps comparing heuristic and exact methods, with CSV/JSON reports."""

from __future__ import annotations

import csv
import io
import json
import statistics
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

from pdpset.heuristic import phase1_construct, phase2_improve
from pdpset.instance import Instance, Weights, generate_instance
from pdpset.oracle import OracleLimitError, OracleLimits, exact_pdp, exact_pdpset
from pdpset.plan import CostBreakdown, evaluate

METHODS = ("ha_pdp", "ha_pdpset", "exact_pdp", "exact_pdpset")
COMPONENTS = ("vd", "wt", "td", "tt", "total")

# (A, B) pairs; each ratio column holds (B - A) / A
COMPARISONS = (
    ("exact_pdp", "ha_pdp"),
    ("exact_pdpset", "ha_pdpset"),
    ("exact_pdp", "exact_pdpset"),
    ("ha_pdp", "ha_pdpset"),
    ("exact_pdp", "ha_pdpset"),
)

COLUMNS = (
    ["instance", "seed"]
    + [f"{m}_{c}" for m in METHODS for c in COMPONENTS]
    + ["ha_phase1_seconds", "ha_phase2_seconds", "ha_pdpset_seconds", "exact_pdp_seconds", "exact_pdpset_seconds"]
    + [f"{a}_vs_{b}" for a, b in COMPARISONS]
    + ["n_transfers", "vehicles_in_transfers", "error"]
)
COMPONENT_COLUMNS = ["instance", "method", *COMPONENTS]


@dataclass(frozen=True)
class Scenario:
    name: str
    rows: int = 5
    cols: int = 5
    n_vehicles: int = 2
    n_requests: int = 3
    seeds: tuple[int, ...] = (1, 2, 3, 4, 5)
    capacity: int = 6
    weights: Weights = field(default_factory=Weights)
    d_max: float = 2
    t_range: float = 8
    methods: tuple[str, ...] = ("ha_pdp", "ha_pdpset")
    phase2_repeat: bool = False
    oracle_time_limit: float | None = None
    oracle_simple_routes: bool = False

    def __post_init__(self):
        unknown = set(self.methods) - set(METHODS)
        if unknown:
            raise ValueError(f"unknown methods {sorted(unknown)}; choose from {list(METHODS)}")

    def instance(self, seed: int) -> Instance:
        return generate_instance(
            self.rows, self.cols, self.n_vehicles, self.n_requests, capacity=self.capacity,
            weights=self.weights, d_max=self.d_max, t_range=self.t_range, seed=seed,
        )


@dataclass
class ComparisonReport:
    scenario: Scenario
    rows: list[dict]
    components: list[dict]

    def aggregates(self) -> list[dict]:
        """``avg`` and ``std`` rows (population std) over every numeric column."""
        avg = {"instance": "avg", "seed": ""}
        std = {"instance": "std", "seed": ""}
        for col in COLUMNS[2:]:
            vals = [r[col] for r in self.rows if isinstance(r.get(col), (int, float))]
            if col in ("error",) or not vals:
                avg[col] = std[col] = ""
                continue
            avg[col] = statistics.fmean(vals)
            std[col] = statistics.pstdev(vals)
        return [avg, std]

    def table(self) -> list[dict]:
        return self.rows + self.aggregates()

    def to_csv(self) -> str:
        return _csv(COLUMNS, self.table())

    def components_csv(self) -> str:
        return _csv(COMPONENT_COLUMNS, self.components)

    def to_dict(self) -> dict:
        sc = asdict(self.scenario)
        return {"scenario": sc, "rows": self.rows, "aggregates": self.aggregates(), "components": self.components}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def _csv(columns, rows) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n", extrasaction="ignore")
    writer.writeheader()
    for row in rows:
        writer.writerow({c: _cell(row.get(c, "")) for c in columns})
    return buf.getvalue()


def _cell(v):
    if isinstance(v, float):
        return f"{v:.6g}"
    return v


def _put(row: dict, method: str, cost: CostBreakdown):
    for c, v in cost.as_dict().items():
        row[f"{method}_{c}"] = v


def run_instance(scenario: Scenario, index: int) -> tuple[dict, list[dict]]:
    """One report row plus its component-table rows; failures land in the ``error`` column."""
    seed = scenario.seeds[index]
    row = {c: "" for c in COLUMNS}
    row["instance"] = f"{scenario.name}N{index + 1}"
    row["seed"] = seed
    costs: dict[str, CostBreakdown] = {}
    errors = []
    try:
        inst = scenario.instance(seed)
        wants = set(scenario.methods)
        if wants & {"ha_pdp", "ha_pdpset"}:
            t0 = time.perf_counter()
            p1 = phase1_construct(inst)
            t1 = time.perf_counter()
            row["ha_phase1_seconds"] = round(t1 - t0, 3)
            if "ha_pdp" in wants:
                costs["ha_pdp"] = evaluate(inst, p1)
            if "ha_pdpset" in wants:
                p2 = phase2_improve(inst, p1, repeat=scenario.phase2_repeat)
                t2 = time.perf_counter()
                row["ha_phase2_seconds"] = round(t2 - t1, 3)
                row["ha_pdpset_seconds"] = round(t2 - t0, 3)
                costs["ha_pdpset"] = evaluate(inst, p2)
                transfers = p2.transfers()
                row["n_transfers"] = len(transfers)
                row["vehicles_in_transfers"] = len({v for k, l, _ in transfers for v in (k, l)})
        for method, fn, lim in (
            ("exact_pdp", exact_pdp, OracleLimits(time_budget=scenario.oracle_time_limit)),
            ("exact_pdpset", exact_pdpset, OracleLimits(2, 3, 25, scenario.oracle_time_limit)),
        ):
            if method not in wants:
                continue
            t0 = time.perf_counter()
            try:
                res = fn(inst, lim, simple_routes=scenario.oracle_simple_routes)
            except OracleLimitError as exc:
                errors.append(f"{method}: {exc}")
                continue
            row[f"{method}_seconds"] = round(time.perf_counter() - t0, 3)
            costs[method] = res.cost
    except Exception as exc:  # recorded in the row; the sweep continues
        errors.append(f"{type(exc).__name__}: {exc}")
    for method, cost in costs.items():
        _put(row, method, cost)
    for a, b in COMPARISONS:
        if a in costs and b in costs and costs[a].total:
            row[f"{a}_vs_{b}"] = (costs[b].total - costs[a].total) / costs[a].total
    row["error"] = "; ".join(errors)
    comps = [{"instance": row["instance"], "method": m, **costs[m].as_dict()} for m in METHODS if m in costs]
    return row, comps


def _job(args):
    return run_instance(*args)


def run_scenario(scenario: Scenario, jobs: int = 1) -> ComparisonReport:
    idx = range(len(scenario.seeds))
    if jobs > 1 and len(scenario.seeds) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_job, [(scenario, i) for i in idx]))
    else:
        results = [run_instance(scenario, i) for i in idx]
    rows = [r for r, _ in results]
    comps = [c for _, cs in results for c in cs]
    return ComparisonReport(scenario, rows, comps)


def small_scale_scenarios(seed_base: int = 0, methods=("ha_pdp", "ha_pdpset"), **kwargs) -> list[Scenario]:
    """S1-S4: two vehicles on a 5x5 grid with 3..6 requests, five seeds each."""
    return [
        Scenario(
            name=f"S{i}", n_requests=n, seeds=tuple(seed_base + 10 * n + s for s in range(1, 6)),
            methods=tuple(methods), **kwargs,
        )
        for i, n in enumerate(range(3, 7), start=1)
    ]
