"""Plans, schedule simulation, feasibility checking and cost accounting.

Every objective value elsewhere in the package (heuristic, oracle, MILP cross-checks)
is computed here. Vehicles move between consecutive event locations along shortest
paths, start at time 0, and spend no time at pickups or dropoffs. At a transfer the
earlier of the two vehicles waits for the later one; that wait is its dwell.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from pdpset.graph import shortest_dist, shortest_time
from pdpset.instance import Instance

PICKUP = "pickup"
DROPOFF = "dropoff"
TRANSFER = "transfer"


class PlanStructureError(ValueError):
    pass


class SyncWindowError(ValueError):
    pass


class PlanFormatError(ValueError):
    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


@dataclass(frozen=True)
class Event:
    kind: str
    node: int
    request: int | None = None
    partner: int | None = None
    out: tuple[int, ...] = ()  # requests handed to the partner
    inc: tuple[int, ...] = ()  # requests received from the partner

    @classmethod
    def pickup(cls, request: int, node: int) -> "Event":
        return cls(PICKUP, node, request)

    @classmethod
    def dropoff(cls, request: int, node: int) -> "Event":
        return cls(DROPOFF, node, request)

    @classmethod
    def transfer(cls, node: int, partner: int, out=(), inc=()) -> "Event":
        return cls(TRANSFER, node, None, partner, tuple(sorted(out)), tuple(sorted(inc)))

    def __str__(self):
        if self.kind == TRANSFER:
            return f"T@{self.node}(k{self.partner} out={list(self.out)} in={list(self.inc)})"
        return f"{'P' if self.kind == PICKUP else 'D'}{self.request}@{self.node}"


@dataclass(frozen=True)
class Plan:
    """Ordered events per vehicle id. Vehicles missing from ``routes`` have no events."""

    routes: dict[int, tuple[Event, ...]]

    def __post_init__(self):
        object.__setattr__(self, "routes", {k: tuple(v) for k, v in self.routes.items()})

    def route(self, k: int) -> tuple[Event, ...]:
        return self.routes.get(k, ())

    def replace(self, changes: dict[int, tuple[Event, ...]]) -> "Plan":
        routes = dict(self.routes)
        routes.update({k: tuple(v) for k, v in changes.items()})
        return Plan(routes)

    def transfers(self) -> list[tuple[int, int, Event]]:
        """(vehicle, partner, event) for each transfer, counted once from the sender side with lower id."""
        out = []
        for k, events in sorted(self.routes.items()):
            for ev in events:
                if ev.kind == TRANSFER and k < ev.partner:
                    out.append((k, ev.partner, ev))
        return out

    def encode(self) -> tuple:
        return tuple(
            (k, tuple((e.kind, e.node, e.request, e.partner, e.out, e.inc) for e in evs))
            for k, evs in sorted(self.routes.items())
        )

    def __str__(self):
        return "\n".join(f"k{k}: [{', '.join(map(str, evs))}]" for k, evs in sorted(self.routes.items()))


@dataclass(frozen=True)
class TransferRecord:
    node: int
    first: int
    second: int
    arrival_first: float
    arrival_second: float
    dwell: float  # charged to whichever vehicle arrived first


@dataclass
class Schedule:
    arrival: dict[int, list[float]] = field(default_factory=dict)
    dwell: dict[int, list[float]] = field(default_factory=dict)
    # passengers onboard (qty) on the leg leaving each event; index -1 is the leg leaving the origin
    load_after: dict[int, list[int]] = field(default_factory=dict)
    onboard_after: dict[int, list[frozenset[int]]] = field(default_factory=dict)
    vehicle_distance: dict[int, float] = field(default_factory=dict)
    end_time: dict[int, float] = field(default_factory=dict)
    pickup_time: dict[int, float] = field(default_factory=dict)
    pickup_vehicle: dict[int, int] = field(default_factory=dict)
    dropoff_time: dict[int, float] = field(default_factory=dict)
    onboard_distance: dict[int, float] = field(default_factory=dict)
    transfers: list[TransferRecord] = field(default_factory=list)
    issues: list[str] = field(default_factory=list)

    def departure(self, k: int, idx: int) -> float:
        if idx < 0:
            return 0.0
        return self.arrival[k][idx] + self.dwell[k][idx]


@dataclass(frozen=True)
class CostBreakdown:
    vehicle_travel_distance: float
    customer_wait_time: float
    customer_travel_distance: float
    vehicle_transfer_time: float
    total: float

    def as_dict(self) -> dict:
        return {
            "vd": self.vehicle_travel_distance,
            "wt": self.customer_wait_time,
            "td": self.customer_travel_distance,
            "tt": self.vehicle_transfer_time,
            "total": self.total,
        }


def _check_structure(inst: Instance, plan: Plan) -> None:
    for k, events in plan.routes.items():
        if k not in inst._vehicle_index:
            raise PlanStructureError(f"route given for unknown vehicle {k}")
        for ev in events:
            if ev.kind not in (PICKUP, DROPOFF, TRANSFER):
                raise PlanStructureError(f"vehicle {k}: unknown event kind {ev.kind!r}")
            if ev.kind == TRANSFER:
                if ev.partner == k:
                    raise PlanStructureError(f"vehicle {k}: transfer with itself at node {ev.node}")
                if ev.partner not in inst._vehicle_index:
                    raise PlanStructureError(f"vehicle {k}: transfer partner {ev.partner} does not exist")
            elif ev.request not in inst._request_index:
                raise PlanStructureError(f"vehicle {k}: unknown request {ev.request}")
    for k, events in plan.routes.items():
        for l in {ev.partner for ev in events if ev.kind == TRANSFER}:
            mine = [ev for ev in events if ev.kind == TRANSFER and ev.partner == l]
            theirs = [ev for ev in plan.route(l) if ev.kind == TRANSFER and ev.partner == k]
            if len(mine) != len(theirs):
                raise PlanStructureError(
                    f"vehicles {k} and {l}: {len(mine)} vs {len(theirs)} transfer events, pairs must match"
                )
            for a, b in zip(mine, theirs):
                if a.node != b.node:
                    raise PlanStructureError(f"vehicles {k} and {l}: transfer nodes {a.node} and {b.node} differ")
                if set(a.out) != set(b.inc) or set(a.inc) != set(b.out):
                    raise PlanStructureError(f"vehicles {k} and {l}: transfer request sets are not mirrored")


def simulate(inst: Instance, plan: Plan, enforce_window: bool = True) -> Schedule:
    """Arrival times, dwells, loads and onboard distances for every vehicle in the plan.

    Raises ``PlanStructureError`` for unmatched or deadlocked transfer pairs and, when
    ``enforce_window`` is set, ``SyncWindowError`` if a transfer dwell exceeds ``d_max``.
    Onboard-state inconsistencies are not raised; they are collected in ``schedule.issues``.
    """
    _check_structure(inst, plan)
    net = inst.network
    sched = Schedule()
    order = [v.id for v in inst.vehicles]
    pos = {}
    clock = {}
    loc = {}
    onboard: dict[int, set[int]] = {}
    waiting = {}
    for k in order:
        events = plan.route(k)
        sched.arrival[k] = [0.0] * len(events)
        sched.dwell[k] = [0.0] * len(events)
        sched.load_after[k] = [0] * len(events)
        sched.onboard_after[k] = [frozenset()] * len(events)
        sched.vehicle_distance[k] = 0.0
        pos[k], clock[k], loc[k], onboard[k], waiting[k] = 0, 0.0, inst.vehicle(k).origin, set(), False

    def load(k):
        return sum(inst.request(r).qty for r in onboard[k])

    def travel(k, node):
        d = shortest_dist(net, loc[k], node)
        sched.vehicle_distance[k] += d
        for r in onboard[k]:
            sched.onboard_distance[r] = sched.onboard_distance.get(r, 0.0) + d
        clock[k] += shortest_time(net, loc[k], node)
        loc[k] = node

    def close(k, i):
        sched.load_after[k][i] = load(k)
        sched.onboard_after[k][i] = frozenset(onboard[k])

    remaining = set(order)
    while remaining:
        progressed = False
        for k in order:
            if k not in remaining or waiting[k]:
                continue
            events = plan.route(k)
            while pos[k] < len(events):
                i = pos[k]
                ev = events[i]
                travel(k, ev.node)
                sched.arrival[k][i] = clock[k]
                if ev.kind == TRANSFER:
                    waiting[k] = True
                    break
                r = ev.request
                if ev.kind == PICKUP:
                    if r in sched.pickup_time:
                        sched.issues.append(f"request {r} picked up more than once")
                    else:
                        sched.pickup_time[r] = clock[k]
                        sched.pickup_vehicle[r] = k
                    onboard[k].add(r)
                    sched.onboard_distance.setdefault(r, 0.0)
                else:
                    if r not in onboard[k]:
                        sched.issues.append(f"vehicle {k} drops request {r} which is not onboard")
                    onboard[k].discard(r)
                    if r in sched.dropoff_time:
                        sched.issues.append(f"request {r} dropped off more than once")
                    sched.dropoff_time[r] = clock[k]
                close(k, i)
                pos[k] += 1
                progressed = True
            else:
                v = inst.vehicle(k)
                if v.destination is not None:
                    travel(k, v.destination)
                    if onboard[k]:
                        sched.issues.append(
                            f"vehicle {k} carries requests {sorted(onboard[k])} to its destination"
                        )
                sched.end_time[k] = clock[k]
                remaining.discard(k)
                progressed = True
        for k in order:
            if not waiting[k]:
                continue
            ev = plan.route(k)[pos[k]]
            l = ev.partner
            if not waiting[l] or k > l:
                continue
            other = plan.route(l)[pos[l]]
            if other.partner != k or other.node != ev.node:
                continue
            ak, al = sched.arrival[k][pos[k]], sched.arrival[l][pos[l]]
            gap = abs(ak - al)
            if enforce_window and gap > inst.d_max + 1e-9:
                raise SyncWindowError(
                    f"vehicles {k} and {l} at node {ev.node}: dwell {gap:g} exceeds d_max {inst.d_max:g}"
                )
            first, second = (k, l) if ak <= al else (l, k)
            sched.dwell[first][pos[first]] = gap
            sched.transfers.append(
                TransferRecord(ev.node, first, second, min(ak, al), max(ak, al), gap)
            )
            for a, b, evx in ((k, l, ev), (l, k, other)):
                missing = set(evx.out) - onboard[a]
                if missing:
                    sched.issues.append(
                        f"vehicle {a} hands over requests {sorted(missing)} at node {evx.node} which are not onboard"
                    )
            moved_kl = set(ev.out) & onboard[k]
            moved_lk = set(other.out) & onboard[l]
            onboard[k] = (onboard[k] - moved_kl) | moved_lk
            onboard[l] = (onboard[l] - moved_lk) | moved_kl
            depart = max(ak, al)
            for a in (k, l):
                clock[a] = depart
                close(a, pos[a])
                pos[a] += 1
                waiting[a] = False
            progressed = True
        if not progressed:
            stuck = sorted(k for k in order if waiting[k])
            raise PlanStructureError(f"transfers deadlock or lack a partner: vehicles {stuck} wait forever")
    for k in order:
        if onboard[k] and inst.vehicle(k).destination is None:
            sched.issues.append(f"vehicle {k} ends its route with requests {sorted(onboard[k])} still onboard")
    return sched


def cost_breakdown(inst: Instance, sched: Schedule, wait_at: str = "pickup") -> CostBreakdown:
    """Weighted objective from a schedule.

    ``wait_at="dropoff"`` charges each request its arrival time at the dropoff (full journey
    time) instead of the pickup-vehicle arrival.
    """
    w = inst.weights
    vd = sum(sched.vehicle_distance.values())
    times = sched.pickup_time if wait_at == "pickup" else sched.dropoff_time
    wt = sum(inst.request(r).qty * t for r, t in times.items())
    td = sum(inst.request(r).qty * d for r, d in sched.onboard_distance.items())
    tt = sum(sum(d) for d in sched.dwell.values())
    total = w.alpha * vd + w.beta * wt + w.theta * td + w.delta * tt
    return CostBreakdown(vd, wt, td, tt, total)


def evaluate(inst: Instance, plan: Plan, **kwargs) -> CostBreakdown:
    return cost_breakdown(inst, simulate(inst, plan), **kwargs)


def route_cost(inst: Instance, k: int, events, start_node: int | None = None, start_time: float = 0.0,
               onboard=(), to_destination: bool = True) -> float:
    """Weighted cost of one vehicle's transfer-free event list.

    Matches ``evaluate`` on a plan holding only this route. ``start_node``/``start_time``/
    ``onboard`` let callers price a suffix starting mid-route.
    """
    dist, ttime = inst.network.metric()
    w = inst.weights
    req = inst._request_index
    node = inst.vehicle(k).origin if start_node is None else start_node
    t = start_time
    riding = sum(req[r].qty for r in onboard)
    cost = 0.0
    for ev in events:
        d = dist(node, ev.node)
        t += ttime(node, ev.node)
        cost += (w.alpha + w.theta * riding) * d
        node = ev.node
        q = req[ev.request].qty
        if ev.kind == PICKUP:
            cost += w.beta * q * t
            riding += q
        elif ev.kind == DROPOFF:
            riding -= q
        else:
            raise ValueError("route_cost does not handle transfer events")
    dest = inst.vehicle(k).destination
    if dest is not None and to_destination:
        cost += (w.alpha + w.theta * riding) * dist(node, dest)
    return cost


def check_feasible(inst: Instance, plan: Plan) -> list[str]:
    """All feasibility violations of a plan; empty iff it is feasible."""
    out = []
    picks: dict[int, list[int]] = {}
    drops: dict[int, list[int]] = {}
    for k, events in sorted(plan.routes.items()):
        for i, ev in enumerate(events):
            if ev.kind == TRANSFER:
                if set(ev.out) & set(ev.inc):
                    out.append(f"vehicle {k} event {i}: transfer out and in sets overlap")
                continue
            if ev.request not in inst._request_index:
                continue
            req = inst.request(ev.request)
            if ev.kind == PICKUP:
                picks.setdefault(ev.request, []).append(k)
                if ev.node != req.pickup:
                    out.append(f"vehicle {k} event {i}: pickup of request {req.id} at node {ev.node}, expected {req.pickup}")
            elif ev.kind == DROPOFF:
                drops.setdefault(ev.request, []).append(k)
                if ev.node != req.dropoff:
                    out.append(f"vehicle {k} event {i}: dropoff of request {req.id} at node {ev.node}, expected {req.dropoff}")
    for r in inst.request_ids:
        if len(picks.get(r, [])) != 1:
            out.append(f"request {r}: picked up {len(picks.get(r, []))} times, expected exactly once")
        if len(drops.get(r, [])) != 1:
            out.append(f"request {r}: dropped off {len(drops.get(r, []))} times, expected exactly once")
    try:
        sched = simulate(inst, plan, enforce_window=False)
    except PlanStructureError as exc:
        out.append(f"structure: {exc}")
        return out
    out.extend(sched.issues)
    for r in inst.request_ids:
        if r in sched.pickup_time and r in sched.dropoff_time and sched.dropoff_time[r] < sched.pickup_time[r]:
            out.append(f"request {r}: dropped off before it is picked up")
    for k, loads in sched.load_after.items():
        cap = inst.vehicle(k).capacity
        for i, q in enumerate(loads):
            if q > cap:
                out.append(f"vehicle {k} after event {i}: load {q} exceeds capacity {cap}")
    for tr in sched.transfers:
        if tr.dwell > inst.d_max + 1e-9:
            out.append(
                f"transfer of vehicles {tr.first} and {tr.second} at node {tr.node}: dwell {tr.dwell:g} exceeds d_max {inst.d_max:g}"
            )
    return out


def _event_doc(ev: Event) -> dict:
    if ev.kind == TRANSFER:
        return {"kind": TRANSFER, "node": ev.node, "partner": ev.partner, "out": list(ev.out), "in": list(ev.inc)}
    return {"kind": ev.kind, "request": ev.request, "node": ev.node}


def save_plan(plan: Plan) -> dict:
    return {"routes": [{"vehicle": k, "events": [_event_doc(e) for e in evs]} for k, evs in sorted(plan.routes.items())]}


def load_plan(doc: dict | str) -> Plan:
    if isinstance(doc, str):
        try:
            doc = json.loads(doc)
        except json.JSONDecodeError as exc:
            raise PlanFormatError("$", f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict) or not isinstance(doc.get("routes"), list):
        raise PlanFormatError("$.routes", "expected a list of {vehicle, events} objects")
    routes = {}
    for i, item in enumerate(doc["routes"]):
        base = f"$.routes[{i}]"
        if not isinstance(item, dict) or not isinstance(item.get("vehicle"), int):
            raise PlanFormatError(f"{base}.vehicle", "expected an integer vehicle id")
        if not isinstance(item.get("events"), list):
            raise PlanFormatError(f"{base}.events", "expected a list")
        evs = []
        for j, e in enumerate(item["events"]):
            path = f"{base}.events[{j}]"
            if not isinstance(e, dict):
                raise PlanFormatError(path, "expected an object")
            kind = e.get("kind")
            if kind not in (PICKUP, DROPOFF, TRANSFER):
                raise PlanFormatError(f"{path}.kind", f"unknown kind {kind!r}")
            if not isinstance(e.get("node"), int):
                raise PlanFormatError(f"{path}.node", "expected an integer node")
            if kind == TRANSFER:
                if not isinstance(e.get("partner"), int):
                    raise PlanFormatError(f"{path}.partner", "expected an integer vehicle id")
                for key in ("out", "in"):
                    val = e.get(key, [])
                    if not isinstance(val, list) or not all(isinstance(x, int) for x in val):
                        raise PlanFormatError(f"{path}.{key}", "expected a list of request ids")
                evs.append(Event.transfer(e["node"], e["partner"], e.get("out", []), e.get("in", [])))
            else:
                if not isinstance(e.get("request"), int):
                    raise PlanFormatError(f"{path}.request", "expected an integer request id")
                evs.append(Event(kind, e["node"], e["request"]))
        if item["vehicle"] in routes:
            raise PlanFormatError(f"{base}.vehicle", f"duplicate route for vehicle {item['vehicle']}")
        routes[item["vehicle"]] = tuple(evs)
    return Plan(routes)
