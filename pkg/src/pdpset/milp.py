"""Symbolic MILP for pickup-and-delivery with synchronized en-route transfers.

The model is built row by row over the grid arcs plus a shared zero-cost dummy depot
(node id 0, inbound arcs only). Each row carries a short numeric family id (``"29"``,
``"44"``, ...) that is also the prefix of its name, so violations can be traced back. Nothing here solves the model: it is
exported in LP format for an external solver, and assignments (from plans or solver
output) are checked against every row.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

from pdpset.graph import shortest_paths
from pdpset.instance import Instance
from pdpset.plan import PICKUP, TRANSFER, Plan, simulate

DEPOT = 0
BINARY = "B"
CONTINUOUS = "C"

# variable families in export order
FAMILIES = ("X", "Y", "V", "F", "TV", "TP", "U", "Z", "S", "W")


class NotRepresentableError(ValueError):
    """The plan cannot be written with node-simple vehicle routes."""


@dataclass(frozen=True)
class Var:
    name: str
    kind: str
    lb: float = 0.0
    ub: float = math.inf


@dataclass(frozen=True)
class Row:
    name: str
    family: str
    coeffs: tuple[tuple[str, float], ...]
    sense: str  # "<=", ">=", "="
    rhs: float

    def lhs(self, values) -> float:
        return sum(c * values.get(v, 0.0) for v, c in self.coeffs)

    def violated(self, values, tol: float) -> bool:
        lhs = self.lhs(values)
        if self.sense == "<=":
            return lhs > self.rhs + tol
        if self.sense == ">=":
            return lhs < self.rhs - tol
        return abs(lhs - self.rhs) > tol


@dataclass
class MilpModel:
    vars: dict[str, Var] = field(default_factory=dict)
    rows: list[Row] = field(default_factory=list)
    objective: dict[str, float] = field(default_factory=dict)
    big_m: float = 0.0
    nodes: tuple[int, ...] = ()
    arcs: tuple[tuple[int, int], ...] = ()

    def family_counts(self) -> dict[str, int]:
        out = {}
        for name in self.vars:
            fam = name.split("_", 1)[0]
            out[fam] = out.get(fam, 0) + 1
        return out

    def row_counts(self) -> dict[str, int]:
        out = {}
        for row in self.rows:
            out[row.family] = out.get(row.family, 0) + 1
        return out

    def rows_of(self, *families: str) -> list[Row]:
        return [r for r in self.rows if r.family in families]


class Assignment(dict):
    """Variable name -> value; missing variables read as 0."""


def name(family: str, *idx) -> str:
    return "_".join([family, *map(str, idx)])


def compute_big_m(inst: Instance) -> float:
    """A constant that exceeds any feasible arrival time.

    A route makes at most 2|R| + 2 physical stops, each at most a network diameter apart,
    and dwells add at most d_max per request per vehicle.
    """
    diameter = inst.network.diameter("time")
    nr, nk = len(inst.requests), len(inst.vehicles)
    return diameter * (2 * nr + 2) + inst.d_max * nr * nk + 1


def glover_rows(z: str, x_terms: dict[str, float], a_terms: dict[str, float], big_m: float,
                a_const: float = 0.0) -> list[tuple[dict, str, float]]:
    """Linear rows forcing ``z = x * A`` for binary x and ``0 <= A < M``.

    ``A = sum(a_terms) + a_const``. Returned as (coeffs, sense, rhs) triples in the order
    z <= M x, z <= A, z >= A - M (1 - x).
    """

    def merge(*parts):
        out: dict[str, float] = {}
        for part in parts:
            for v, c in part.items():
                out[v] = out.get(v, 0.0) + c
        return {v: c for v, c in out.items() if c != 0}

    neg_a = {v: -c for v, c in a_terms.items()}
    m_x = {v: -big_m * c for v, c in x_terms.items()}
    return [
        (merge({z: 1.0}, m_x), "<=", 0.0),
        (merge({z: 1.0}, neg_a), "<=", a_const),
        (merge({z: 1.0}, neg_a, m_x), ">=", a_const - big_m),
    ]


class _Builder:
    def __init__(self, inst: Instance, big_m: float | None):
        self.inst = inst
        self.model = MilpModel()
        self.M = compute_big_m(inst) if big_m is None else big_m
        self.model.big_m = self.M

    def var(self, v: Var):
        self.model.vars[v.name] = v

    def row(self, family: str, idx, coeffs: dict, sense: str, rhs: float):
        terms = tuple((v, float(c)) for v, c in coeffs.items() if c != 0)
        if not terms:
            return
        self.model.rows.append(Row(name(f"c{family}", *idx), family, terms, sense, float(rhs)))


def build_model(inst: Instance, big_m: float | None = None) -> MilpModel:
    """Every variable and constraint row of the transfer-enabled model for ``inst``."""
    b = _Builder(inst, big_m)
    M = b.M
    net = inst.network
    m = b.model
    phys = list(net.nodes())
    needs_depot = any(v.destination is None for v in inst.vehicles)
    nodes = phys + ([DEPOT] if needs_depot else [])
    arcs = list(net.arcs()) + ([(i, DEPOT) for i in phys] if needs_depot else [])
    arcset = set(arcs)
    m.nodes, m.arcs = tuple(nodes), tuple(arcs)
    cost = {a: (0 if a[1] == DEPOT else net.cost(*a)) for a in arcs}
    ttime = {a: (0 if a[1] == DEPOT else net.time(*a)) for a in arcs}
    out_arcs = {i: [] for i in nodes}
    in_arcs = {i: [] for i in nodes}
    for a in arcs:
        out_arcs[a[0]].append(a)
        in_arcs[a[1]].append(a)
    K = inst.vehicle_ids
    R = inst.request_ids
    req = {r.id: r for r in inst.requests}
    veh = {v.id: v for v in inst.vehicles}
    dest = {k: (DEPOT if veh[k].destination is None else veh[k].destination) for k in K}
    pairs = [(k, l) for k in K for l in K if k != l]

    def X(a, k):
        return name("X", a[0], a[1], k)

    def Y(a, k, r):
        return name("Y", a[0], a[1], k, r)

    def Z(i, j, k):
        return name("Z", i, j, k)

    def S(a, k):
        return name("S", a[0], a[1], k)

    TV = lambda i, k: name("TV", i, k)  # noqa: E731
    TP = lambda i, r: name("TP", i, r)  # noqa: E731
    U = lambda i, k: name("U", i, k)  # noqa: E731
    F = lambda r, i, k, l: name("F", r, i, k, l)  # noqa: E731

    # variables
    for a in arcs:
        for k in K:
            b.var(Var(X(a, k), BINARY, 0, 1))
    for a in arcs:
        for k in K:
            for r in R:
                b.var(Var(Y(a, k, r), BINARY, 0, 1))
    for k in K:
        for r in R:
            b.var(Var(name("V", k, r), BINARY, 0, 1))
    for r in R:
        for i in nodes:
            for k, l in pairs:
                b.var(Var(F(r, i, k, l), BINARY, 0, 1))
    for i in nodes:
        for k in K:
            b.var(Var(TV(i, k), CONTINUOUS))
    for i in nodes:
        for r in R:
            b.var(Var(TP(i, r), CONTINUOUS))
    for i in nodes:
        for k in K:
            b.var(Var(U(i, k), CONTINUOUS, 0, inst.d_max))
    for a in arcs:
        for k in K:
            b.var(Var(Z(*a, k), CONTINUOUS))
            if a[1] == DEPOT:
                # reverse-side dummy of the one-way depot arc
                b.var(Var(Z(DEPOT, a[0], k), CONTINUOUS))
    for a in arcs:
        for k in K:
            b.var(Var(S(a, k), CONTINUOUS, 0, inst.d_max))
    for k in K:
        for r in R:
            b.var(Var(name("W", k, r), CONTINUOUS))

    # objective
    w = inst.weights
    obj = m.objective
    for a in arcs:
        if cost[a] and w.alpha:
            for k in K:
                obj[X(a, k)] = w.alpha * cost[a]
    for r in R:
        if w.beta:
            obj[TP(req[r].pickup, r)] = obj.get(TP(req[r].pickup, r), 0) + w.beta * req[r].qty
    for a in arcs:
        if cost[a] and w.theta:
            for k in K:
                for r in R:
                    obj[Y(a, k, r)] = w.theta * cost[a] * req[r].qty
    if w.delta:
        for i in nodes:
            for k in K:
                obj[U(i, k)] = w.delta

    # vehicle flow
    for k in K:
        b.row("2", (k,), {X(a, k): 1 for a in out_arcs[veh[k].origin]}, "=", 1)
    for k in K:
        b.row("3", (k,), {X(a, k): 1 for a in in_arcs[dest[k]]}, "=", 1)
        if dest[k] != DEPOT:
            b.row("3b", (k,), {X(a, k): 1 for a in out_arcs[dest[k]]}, "=", 0)
    for k in K:
        for i in nodes:
            if i in (veh[k].origin, dest[k]):
                continue
            coeffs = {X(a, k): 1 for a in out_arcs[i]}
            for a in in_arcs[i]:
                coeffs[X(a, k)] = coeffs.get(X(a, k), 0) - 1
            b.row("4", (i, k), coeffs, "=", 0)

    # request flow
    for r in R:
        b.row("5", (r,), {Y(a, k, r): 1 for k in K for a in out_arcs[req[r].pickup]}, "=", 1)
    for r in R:
        b.row("6", (r,), {Y(a, k, r): 1 for k in K for a in in_arcs[req[r].dropoff]}, "=", 1)
    for r in R:
        for i in nodes:
            if i in (req[r].pickup, req[r].dropoff):
                continue
            coeffs = {Y(a, k, r): 1 for k in K for a in out_arcs[i]}
            for k in K:
                for a in in_arcs[i]:
                    coeffs[Y(a, k, r)] = coeffs.get(Y(a, k, r), 0) - 1
            b.row("7", (i, r), coeffs, "=", 0)

    # capacity linkage, one vehicle per request per arc, no passenger flow into the destination
    for a in arcs:
        for k in K:
            coeffs = {Y(a, k, r): req[r].qty for r in R}
            coeffs[X(a, k)] = -veh[k].capacity
            b.row("8", (*a, k), coeffs, "<=", 0)
    for a in arcs:
        for r in R:
            b.row("9", (*a, r), {Y(a, k, r): 1 for k in K}, "<=", 1)
    for k in K:
        b.row("10", (k,), {Y(a, k, r): 1 for r in R for a in in_arcs[dest[k]]}, "=", 0)

    # passenger time propagation, precedence
    for r in R:
        for a in arcs:
            coeffs = {TP(a[0], r): 1, TP(a[1], r): -1}
            for k in K:
                coeffs[Y(a, k, r)] = M
            b.row("11", (*a, r), coeffs, "<=", M - ttime[a])
    for r in R:
        b.row("12", (r,), {TP(req[r].pickup, r): 1, TP(req[r].dropoff, r): -1}, "<=", 0)

    # start time, inactive-node zeroing
    for k in K:
        b.row("23", (k,), {TV(veh[k].origin, k): 1}, "=", 0)
    for i in nodes:
        for k in K:
            coeffs = {TV(i, k): 1}
            for a in out_arcs[i] + in_arcs[i]:
                coeffs[X(a, k)] = coeffs.get(X(a, k), 0) - M
            b.row("24", (i, k), coeffs, "<=", 0)

    # arrival-time continuity, linearized per arc
    for (i, j) in arcs:
        rev = (j, i) in arcset
        for k in K:
            a = (i, j)
            x_terms = {X(a, k): 1.0}
            if rev:
                x_terms[X((j, i), k)] = 1.0
            b.row("26", (i, j, k), {Z(i, j, k): 1, Z(j, i, k): -1}, "=", 0)
            tail = {TV(i, k): 1.0, S(a, k): 1.0}
            if ttime[a]:
                tail[X(a, k)] = ttime[a]
            for fam, (coeffs, sense, rhs) in zip(("27", "28", "29"), glover_rows(Z(i, j, k), x_terms, tail, M)):
                b.row(fam, (i, j, k), coeffs, sense, rhs)
            head = {TV(j, k): 1.0}
            if rev:
                head[S((j, i), k)] = 1.0
                if ttime[(j, i)]:
                    head[X((j, i), k)] = ttime[(j, i)]
            for fam, (coeffs, sense, rhs) in zip(("30", "31", "32"), glover_rows(Z(j, i, k), x_terms, head, M)):
                b.row(fam, (i, j, k), coeffs, sense, rhs)
            for fam, (coeffs, sense, rhs) in zip(
                ("33", "34", "35"), glover_rows(S(a, k), {X(a, k): 1.0}, {U(i, k): 1.0}, M)
            ):
                b.row(fam, (i, j, k), coeffs, sense, rhs)

    # pickup assignment, wait time
    for k in K:
        for r in R:
            coeffs = {name("V", k, r): 1}
            for a in out_arcs[req[r].pickup]:
                coeffs[Y(a, k, r)] = -1
            b.row("39", (k, r), coeffs, "=", 0)
    for r in R:
        coeffs = {TP(req[r].pickup, r): 1}
        for k in K:
            coeffs[name("W", k, r)] = -1
        b.row("40", (r,), coeffs, "=", 0)
    for k in K:
        for r in R:
            rows = glover_rows(name("W", k, r), {name("V", k, r): 1.0}, {TV(req[r].pickup, k): 1.0}, M)
            for fam, (coeffs, sense, rhs) in zip(("41", "42", "43"), rows):
                b.row(fam, (k, r), coeffs, sense, rhs)

    # transfer capture
    for r in R:
        for i in nodes:
            for k, l in pairs:
                inflow = {Y(a, k, r): 1 for a in in_arcs[i]}
                outflow = {Y(a, l, r): 1 for a in out_arcs[i]}
                f = F(r, i, k, l)
                b.row("44", (r, i, k, l), {**inflow, **outflow, f: -1}, "<=", 1)
                b.row("45", (r, i, k, l), {f: 1, **{v: -1 for v in inflow}}, "<=", 0)
                b.row("46", (r, i, k, l), {f: 1, **{v: -1 for v in outflow}}, "<=", 0)

    # no dwell away from transfers, synchronization windows
    for i in nodes:
        for k in K:
            coeffs = {U(i, k): 1}
            for r in R:
                for l in K:
                    if l != k:
                        coeffs[F(r, i, k, l)] = -M
                        coeffs[F(r, i, l, k)] = -M
            b.row("47", (i, k), coeffs, "<=", 0)
    for i in nodes:
        for k, l in pairs:
            for r in R:
                f = F(r, i, k, l)
                b.row("48", (i, k, l, r), {TV(i, k): 1, TV(i, l): -1, U(i, l): -1, f: M}, "<=", M)
                b.row("49", (i, k, l, r), {TV(i, l): 1, TV(i, k): -1, U(i, k): -1, f: M}, "<=", M)
    return m


# ---------------------------------------------------------------- LP export


def _fmt(c: float) -> str:
    return repr(int(c)) if float(c).is_integer() else f"{c:.12g}"


def _terms(coeffs) -> str:
    parts = []
    for v, c in coeffs:
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        parts.append(f"{sign} {v}" if mag == 1 else f"{sign} {_fmt(mag)} {v}")
    text = " ".join(parts)
    return text[2:] if text.startswith("+ ") else text


def _wrap(line: str, width: int = 200) -> list[str]:
    out = []
    while len(line) > width:
        cut = line.rfind(" ", 0, width)
        if cut <= 0:
            break
        out.append(line[:cut])
        line = "   " + line[cut + 1:]
    out.append(line)
    return out


def _sort_key(varname: str):
    fam, *idx = varname.split("_")
    return FAMILIES.index(fam), tuple(int(x) for x in idx)


def export_lp(model: MilpModel) -> str:
    """The model as LP-format text; identical models give byte-identical output."""
    names = sorted(model.vars, key=_sort_key)
    lines = [f"\\ {len(model.vars)} variables, {len(model.rows)} constraints, big-M {_fmt(model.big_m)}", "Minimize"]
    obj = [(v, model.objective[v]) for v in names if model.objective.get(v)]
    lines += _wrap(" obj: " + (_terms(obj) if obj else f"0 {names[0]}"))
    lines.append("Subject To")
    for row in model.rows:
        sense = {"<=": "<=", ">=": ">=", "=": "="}[row.sense]
        lines += _wrap(f" {row.name}: {_terms(row.coeffs)} {sense} {_fmt(row.rhs)}")
    lines.append("Bounds")
    for v in names:
        var = model.vars[v]
        if var.kind == BINARY:
            continue
        if var.ub == math.inf:
            if var.lb != 0:
                lines.append(f" {v} >= {_fmt(var.lb)}")
        else:
            lines.append(f" {_fmt(var.lb)} <= {v} <= {_fmt(var.ub)}")
    lines.append("Binaries")
    binaries = [v for v in names if model.vars[v].kind == BINARY]
    for i in range(0, len(binaries), 8):
        lines.append(" " + " ".join(binaries[i:i + 8]))
    lines.append("End")
    return "\n".join(lines) + "\n"


def load_solution(text: str, model: MilpModel) -> tuple[Assignment, list[str]]:
    """Parse ``name value`` lines; unknown or malformed lines become warnings."""
    asg = Assignment()
    warnings = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            warnings.append(f"line {lineno}: expected 'name value', got {line!r}")
            continue
        var, val = parts
        try:
            value = float(val)
        except ValueError:
            warnings.append(f"line {lineno}: value {val!r} is not a number")
            continue
        if var not in model.vars:
            warnings.append(f"line {lineno}: unknown variable {var}")
            continue
        asg[var] = value
    return asg, warnings


# ---------------------------------------------------------------- checking


def check_assignment(model: MilpModel, asg: dict, tol: float = 1e-6) -> list[str]:
    """Names of violated rows (model order), then bound and integrality failures."""
    out = [row.name for row in model.rows if row.violated(asg, tol)]
    for v, var in model.vars.items():
        x = asg.get(v, 0.0)
        if x < var.lb - tol or x > var.ub + tol:
            out.append(f"bound:{v}")
        if var.kind == BINARY and abs(x - round(x)) > 1e-6:
            out.append(f"integrality:{v}")
    return out


def objective_value(model: MilpModel, asg: dict) -> float:
    return sum(c * asg.get(v, 0.0) for v, c in model.objective.items())


# ---------------------------------------------------------------- plans -> assignments


def _stops(inst: Instance, k: int, events) -> list[int]:
    stops = [inst.vehicle(k).origin]
    for ev in events:
        if ev.node != stops[-1]:
            stops.append(ev.node)
    dest = inst.vehicle(k).destination
    if dest is not None and dest != stops[-1]:
        stops.append(dest)
    return stops


def _simple_routes(inst: Instance, k: int, events):
    """Yield node-simple walks through the vehicle's stops using only shortest legs."""
    net = inst.network
    stops = _stops(inst, k, events)
    if len(set(stops)) != len(stops):
        return

    def rec(idx, walk, seen):
        if idx == len(stops) - 1:
            yield list(walk)
            return
        for path in shortest_paths(net, stops[idx], stops[idx + 1]):
            inner = path[1:]
            if any(n in seen for n in inner):
                continue
            walk.extend(inner)
            seen.update(inner)
            yield from rec(idx + 1, walk, seen)
            del walk[len(walk) - len(inner):]
            seen.difference_update(inner)

    yield from rec(0, [stops[0]], {stops[0]})


def has_simple_route(inst: Instance, k: int, events) -> bool:
    """Whether vehicle ``k`` can serve ``events`` along shortest legs without revisiting a node."""
    return next(_simple_routes(inst, k, events), None) is not None


def _request_walks(inst: Instance, plan: Plan, walks: dict, sched) -> dict:
    """Per request: ordered (from, to, vehicle) arcs it rides."""
    out = {r: [] for r in inst.request_ids}
    for k, events in plan.routes.items():
        walk = walks[k]
        pos = 0
        riding: frozenset = frozenset()
        for i, ev in enumerate(events):
            end = walk.index(ev.node, pos)
            for a, b in zip(walk[pos:end], walk[pos + 1:end + 1]):
                for r in riding:
                    out[r].append((a, b, k))
            pos = end
            riding = sched.onboard_after[k][i]
    req = inst._request_index
    return {r: _chain(req[r].pickup, arcs) for r, arcs in out.items()}


def _chain(start: int, arcs: list) -> list | None:
    """Order arcs into one path from ``start``; None if they do not form a simple path."""
    by_tail = {}
    for arc in arcs:
        if arc[0] in by_tail:
            return None
        by_tail[arc[0]] = arc
    path, node, seen = [], start, {start}
    while node in by_tail:
        arc = by_tail.pop(node)
        path.append(arc)
        node = arc[1]
        if node in seen:
            return None
        seen.add(node)
    return None if by_tail else path


def route_paths(inst: Instance, plan: Plan, max_tries: int = 20000) -> dict[int, list[int]]:
    """Node-simple walks for every vehicle, such that each request's own path is simple too.

    Raises ``NotRepresentableError`` if no combination of shortest legs achieves that.
    """
    sched = simulate(inst, plan)
    req = inst._request_index
    for k, events in plan.routes.items():
        for ev in events:
            if ev.kind == TRANSFER:
                for r in ev.out:
                    if req[r].pickup == ev.node:
                        raise NotRepresentableError(f"request {r} is transferred at its own pickup node {ev.node}")
    ids = inst.vehicle_ids
    options = {k: _simple_routes(inst, k, plan.route(k)) for k in ids}
    cached = {k: [] for k in ids}

    def walks_for(k):
        yield from cached[k]
        for w in options[k]:
            cached[k].append(w)
            yield w

    tries = 0
    for combo in itertools.product(*(walks_for(k) for k in ids)):
        tries += 1
        if tries > max_tries:
            break
        walks = dict(zip(ids, combo))
        if all(p is not None for p in _request_walks(inst, plan, walks, sched).values()):
            return walks
    for k in ids:
        if not cached[k] and not any(True for _ in _simple_routes(inst, k, plan.route(k))):
            raise NotRepresentableError(f"vehicle {k} must revisit a node on every shortest routing of its events")
    raise NotRepresentableError("no routing keeps every vehicle and request path node-simple")


def plan_to_assignment(inst: Instance, plan: Plan) -> Assignment:
    """Variable values that encode a feasible plan in the model's variable space."""
    sched = simulate(inst, plan)
    walks = route_paths(inst, plan)
    net = inst.network
    asg = Assignment()
    req = inst._request_index
    dwell_at = {}
    for k, events in plan.routes.items():
        for i, ev in enumerate(events):
            if ev.kind == TRANSFER:
                dwell_at[k, ev.node] = dwell_at.get((k, ev.node), 0.0) + sched.dwell[k][i]
    tv = {}
    for k in inst.vehicle_ids:
        walk = walks.get(k) or _stops(inst, k, ())
        t = 0.0
        tv[walk[0], k] = 0.0
        for a, b in zip(walk, walk[1:]):
            u = dwell_at.get((k, a), 0.0)
            asg[name("X", a, b, k)] = 1
            if u:
                asg[name("U", a, k)] = u
                asg[name("S", a, b, k)] = u
            z = t + net.time(a, b) + u
            asg[name("Z", a, b, k)] = z
            asg[name("Z", b, a, k)] = z
            t = z
            tv[b, k] = t
        last = walk[-1]
        if inst.vehicle(k).destination is None:
            u = dwell_at.get((k, last), 0.0)
            asg[name("X", last, DEPOT, k)] = 1
            if u:
                asg[name("U", last, k)] = u
                asg[name("S", last, DEPOT, k)] = u
            t += u
            asg[name("Z", last, DEPOT, k)] = t
            asg[name("Z", DEPOT, last, k)] = t
            tv[DEPOT, k] = t
    for (i, k), t in tv.items():
        if t:
            asg[name("TV", i, k)] = t
    # check simulated event times against walk times
    for k, events in plan.routes.items():
        for i, ev in enumerate(events):
            if abs(tv[ev.node, k] - sched.arrival[k][i]) > 1e-9 and not _revisited_same_node(events, i):
                raise NotRepresentableError(
                    f"vehicle {k}: walk time {tv[ev.node, k]} at node {ev.node} differs from simulated {sched.arrival[k][i]}"
                )
    rides = _request_walks(inst, plan, walks, sched)
    for r, path in rides.items():
        p = req[r].pickup
        k0 = sched.pickup_vehicle[r]
        for a, b, k in path:
            asg[name("Y", a, b, k, r)] = 1
            asg[name("TP", b, r)] = tv[b, k]
        asg[name("V", k0, r)] = 1
        asg[name("W", k0, r)] = tv[p, k0]
        asg[name("TP", p, r)] = tv[p, k0]
        for (a, b, k), (_, _, l) in zip(path, path[1:]):
            if k != l:
                asg[name("F", r, b, k, l)] = 1
    return Assignment({v: x for v, x in asg.items() if x})


def _revisited_same_node(events, i) -> bool:
    # consecutive events at one node share the first arrival time except after a dwell
    return i > 0 and events[i - 1].node == events[i].node


__all__ = [
    "Assignment",
    "MilpModel",
    "NotRepresentableError",
    "Row",
    "Var",
    "build_model",
    "check_assignment",
    "compute_big_m",
    "export_lp",
    "glover_rows",
    "load_solution",
    "objective_value",
    "plan_to_assignment",
    "has_simple_route",
    "route_paths",
]
