"""Exhaustive solvers for desk-size instances, used as ground truth.

``exact_pdp`` enumerates every request-to-vehicle assignment and every pickup/dropoff
interleaving. ``exact_pdpset`` adds at most one transfer between the two vehicles, placed
anywhere after both vehicles' last pickups, at any node, with any passenger exchange and
any dropoff order afterwards. All costs come from the plan evaluator.

By default the search space is the heuristic's: vehicles may pass a node twice. With
``simple_routes=True`` only plans whose vehicle and passenger paths can be drawn without
revisiting a node are kept, which is the set the MILP can express.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass

from pdpset.instance import Instance
from pdpset.milp import NotRepresentableError, has_simple_route, route_paths
from pdpset.plan import CostBreakdown, Event, Plan, evaluate, route_cost

EPS = 1e-9


class OracleLimitError(RuntimeError):
    def __init__(self, dimension: str, value, limit):
        super().__init__(f"oracle refuses: {dimension} = {value} exceeds limit {limit}")
        self.dimension = dimension
        self.value = value
        self.limit = limit


@dataclass(frozen=True)
class OracleLimits:
    max_vehicles: int = 3
    max_requests: int = 4
    max_transfer_nodes: int = 25
    time_budget: float | None = None  # seconds

    @classmethod
    def pdpset(cls) -> "OracleLimits":
        return cls(max_vehicles=2, max_requests=3, max_transfer_nodes=25)


@dataclass(frozen=True)
class OracleResult:
    plan: Plan
    cost: CostBreakdown

    @property
    def total(self) -> float:
        return self.cost.total


class _Clock:
    def __init__(self, budget):
        self.deadline = None if budget is None else time.perf_counter() + budget
        self.budget = budget

    def check(self):
        if self.deadline is not None and time.perf_counter() > self.deadline:
            raise OracleLimitError("time", f">{self.budget}s", f"{self.budget}s")


def _check(inst: Instance, lim: OracleLimits, transfers: bool):
    if len(inst.vehicles) > lim.max_vehicles:
        raise OracleLimitError("vehicles", len(inst.vehicles), lim.max_vehicles)
    if len(inst.requests) > lim.max_requests:
        raise OracleLimitError("requests", len(inst.requests), lim.max_requests)
    if transfers and inst.network.n_nodes > lim.max_transfer_nodes:
        raise OracleLimitError("transfer_nodes", inst.network.n_nodes, lim.max_transfer_nodes)


def _key(events) -> tuple:
    return tuple((e.kind, e.node, e.request, e.partner, e.out, e.inc) for e in events)


def _sequences(inst: Instance, k: int, reqs, clock: _Clock, emit_prefixes: bool = False):
    """Yield (events, complete) for every precedence- and capacity-feasible interleaving.

    With ``emit_prefixes`` also yields each partial sequence that already holds every pickup.
    """
    cap = inst.vehicle(k).capacity
    req = inst._request_index
    reqs = sorted(reqs)
    total = len(reqs)

    def rec(seq, picked, onboard, load):
        clock.check()
        done = len(picked) == total
        if done and emit_prefixes:
            yield tuple(seq), not onboard
        elif done and not onboard:
            yield tuple(seq), True
        for r in reqs:
            if r not in picked and load + req[r].qty <= cap:
                seq.append(Event.pickup(r, req[r].pickup))
                yield from rec(seq, picked | {r}, onboard | {r}, load + req[r].qty)
                seq.pop()
        for r in sorted(onboard):
            seq.append(Event.dropoff(r, req[r].dropoff))
            yield from rec(seq, picked, onboard - {r}, load - req[r].qty)
            seq.pop()

    yield from rec([], frozenset(), frozenset(), 0)


def _best_route(inst, k, reqs, clock, simple=False):
    best = None
    for seq, complete in _sequences(inst, k, reqs, clock):
        c = route_cost(inst, k, seq)
        if best is not None and c > best[1] + EPS:
            continue
        if simple and not has_simple_route(inst, k, seq):
            continue
        key = (round(c, 9), _key(seq))
        if best is None or key < best[0]:
            best = (key, c, seq)
    return None if best is None else (best[1], best[2])


def _assignments(inst: Instance):
    ids = inst.vehicle_ids
    rids = sorted(inst.request_ids)
    for combo in itertools.product(ids, repeat=len(rids)):
        yield {k: frozenset(r for r, kk in zip(rids, combo) if kk == k) for k in ids}


def _pdp(inst: Instance, clock: _Clock, simple: bool = False):
    routes = {}
    best = None
    for assign in _assignments(inst):
        total = 0.0
        chosen = {}
        for k, reqs in assign.items():
            if (k, reqs) not in routes:
                routes[k, reqs] = _best_route(inst, k, reqs, clock, simple)
            got = routes[k, reqs]
            if got is None:
                break
            total += got[0]
            chosen[k] = got[1]
        else:
            plan = Plan(chosen)
            key = (round(total, 9), plan.encode())
            if best is None or key < best[0]:
                best = (key, plan)
    if best is None:
        raise ValueError("no capacity-feasible assignment exists")
    return best[1]


def exact_pdp(inst: Instance, lim: OracleLimits | None = None, simple_routes: bool = False) -> OracleResult:
    lim = lim or OracleLimits()
    _check(inst, lim, transfers=False)
    plan = _pdp(inst, _Clock(lim.time_budget), simple_routes)
    return OracleResult(plan, evaluate(inst, plan))


def _representable(inst, plan) -> bool:
    try:
        route_paths(inst, plan)
    except NotRepresentableError:
        return False
    return True


def _prefixes(inst, k, reqs, clock):
    """Cheapest prefix per (end node, end time, onboard set), each holding every pickup."""
    v = inst.vehicle(k)
    req = inst._request_index
    dist, ttime = inst.network.metric()
    groups = {}
    for seq, _ in _sequences(inst, k, reqs, clock, emit_prefixes=True):
        node, t, onboard = v.origin, 0.0, set()
        for ev in seq:
            t += ttime(node, ev.node)
            node = ev.node
            (onboard.add if ev.kind == "pickup" else onboard.discard)(ev.request)
        c = route_cost(inst, k, seq, to_destination=False)
        key = (node, t, frozenset(onboard))
        cand = (round(c, 9), _key(seq), c, seq)
        if key not in groups or cand[:2] < groups[key][:2]:
            groups[key] = cand
    out = [(node, t, onb, c, seq) for (node, t, onb), (_, _, c, seq) in groups.items()]
    out.sort(key=lambda g: (g[3], _key(g[4])))
    return out


def _tail(inst, k, start, reqs, memo):
    """Cheapest dropoff order for ``reqs`` from ``start`` by full enumeration."""
    key = (k, start, reqs)
    if key in memo:
        return memo[key]
    req = inst._request_index
    best = None
    for perm in itertools.permutations(sorted(reqs)):
        evs = tuple(Event.dropoff(r, req[r].dropoff) for r in perm)
        c = route_cost(inst, k, evs, start_node=start, onboard=reqs)
        if best is None or c < best[0] - EPS:
            best = (c, evs)
    memo[key] = best
    return best


def exact_pdpset(inst: Instance, lim: OracleLimits | None = None, simple_routes: bool = False) -> OracleResult:
    """Minimum cost with at most one pairwise transfer after all pickups (two vehicles)."""
    lim = lim or OracleLimits.pdpset()
    _check(inst, lim, transfers=True)
    clock = _Clock(lim.time_budget)
    best_plan = _pdp(inst, clock, simple_routes)
    best_cost = evaluate(inst, best_plan).total
    best_key = (round(best_cost, 9), best_plan.encode())
    if len(inst.vehicles) < 2:
        return OracleResult(best_plan, evaluate(inst, best_plan))
    net = inst.network
    dist, ttime = net.metric()
    w = inst.weights
    req = inst._request_index
    memo = {}
    prefix_memo = {}
    for k, l in itertools.combinations(inst.vehicle_ids, 2):
        vk, vl = inst.vehicle(k), inst.vehicle(l)
        others = [v for v in inst.vehicle_ids if v not in (k, l)]
        for assign in _assignments(inst):
            if any(assign[o] for o in others):
                continue
            for v in (k, l):
                if (v, assign[v]) not in prefix_memo:
                    prefix_memo[v, assign[v]] = _prefixes(inst, v, assign[v], clock)
            for nk, tk, onk, ck, seqk in prefix_memo[k, assign[k]]:
                if ck > best_cost + EPS:
                    break
                for nl, tl, onl, cl, seql in prefix_memo[l, assign[l]]:
                    clock.check()
                    if ck + cl > best_cost + EPS:
                        break
                    if not onk and not onl:
                        continue
                    qk = sum(req[r].qty for r in onk)
                    ql = sum(req[r].qty for r in onl)
                    for x in net.nodes():
                        gap = abs(tk + ttime(nk, x) - tl - ttime(nl, x))
                        if gap > inst.d_max + EPS:
                            continue
                        base = (ck + cl + w.delta * gap
                                + (w.alpha + w.theta * qk) * dist(nk, x) + (w.alpha + w.theta * ql) * dist(nl, x))
                        if base > best_cost + EPS:
                            continue
                        for mk in (c for n in range(len(onk) + 1) for c in itertools.combinations(sorted(onk), n)):
                            for ml in (c for n in range(len(onl) + 1) for c in itertools.combinations(sorted(onl), n)):
                                if not mk and not ml:
                                    continue
                                keep_k = frozenset(onk - set(mk) | set(ml))
                                keep_l = frozenset(onl - set(ml) | set(mk))
                                if sum(req[r].qty for r in keep_k) > vk.capacity:
                                    continue
                                if sum(req[r].qty for r in keep_l) > vl.capacity:
                                    continue
                                tail_k = _tail(inst, k, x, keep_k, memo)
                                tail_l = _tail(inst, l, x, keep_l, memo)
                                total = base + tail_k[0] + tail_l[0]
                                if total > best_cost + EPS:
                                    continue
                                plan = Plan({
                                    **{o: () for o in others},
                                    k: seqk + (Event.transfer(x, l, out=mk, inc=ml),) + tail_k[1],
                                    l: seql + (Event.transfer(x, k, out=ml, inc=mk),) + tail_l[1],
                                })
                                key = (round(total, 9), plan.encode())
                                if key < best_key and simple_routes and not _representable(inst, plan):
                                    continue
                                if key < best_key:
                                    best_key, best_cost, best_plan = key, total, plan
    return OracleResult(best_plan, evaluate(inst, best_plan))
