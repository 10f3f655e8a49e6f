"""Two-phase heuristic: greedy insertion construction, then pairwise synchronized transfers.

Phase I builds a transfer-free plan by repeatedly committing the cheapest
(request, vehicle, pickup position, dropoff position) insertion. Phase II looks at every
vehicle pair, detours both vehicles to a common node right after their last pickup,
lets onboard passengers switch vehicles, and re-sequences the remaining dropoffs.
"""

from __future__ import annotations

import itertools
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from pdpset.graph import nodes_within
from pdpset.instance import Instance
from pdpset.plan import (
    DROPOFF,
    PICKUP,
    TRANSFER,
    CostBreakdown,
    Event,
    Plan,
    Schedule,
    check_feasible,
    evaluate,
    route_cost,
    simulate,
)

log = logging.getLogger(__name__)

EPS = 1e-9
EXACT_RESEQUENCE_LIMIT = 6


class ConstructionError(ValueError):
    pass


@dataclass(frozen=True)
class TransferCandidate:
    k: int
    l: int
    node: int
    k_to_l: tuple[int, ...]
    l_to_k: tuple[int, ...]
    routes: dict[int, tuple[Event, ...]]
    dwell: float
    total: float
    savings: float


# ---------------------------------------------------------------- phase I


def _loads_ok(inst: Instance, k: int, events) -> bool:
    cap = inst.vehicle(k).capacity
    req = inst._request_index
    load = 0
    for ev in events:
        load += req[ev.request].qty if ev.kind == PICKUP else -req[ev.request].qty
        if load > cap:
            return False
    return True


def _best_insertion(inst: Instance, k: int, route: tuple, r: int):
    """Cheapest (increase, i, j, new_route) for inserting request r into vehicle k's route."""
    req = inst.request(r)
    if req.qty > inst.vehicle(k).capacity:
        return None
    base = route_cost(inst, k, route)
    pick = Event.pickup(r, req.pickup)
    drop = Event.dropoff(r, req.dropoff)
    best = None
    n = len(route)
    for i in range(n + 1):
        for j in range(i, n + 1):
            new = route[:i] + (pick,) + route[i:j] + (drop,) + route[j:]
            if not _loads_ok(inst, k, new):
                continue
            inc = route_cost(inst, k, new) - base
            if best is None or inc < best[0] - EPS:
                best = (inc, i, j + 1, new)
    return best


def phase1_construct(inst: Instance) -> Plan:
    """Greedy insertion of all requests; ties go to lower request id, vehicle id, then positions."""
    max_cap = max(v.capacity for v in inst.vehicles)
    for r in inst.requests:
        if r.qty > max_cap:
            raise ConstructionError(f"request {r.id} needs {r.qty} seats but the largest vehicle holds {max_cap}")
    routes = {v.id: () for v in inst.vehicles}
    unassigned = sorted(inst.request_ids)
    cache = {}
    while unassigned:
        choice = None
        for r in unassigned:
            for k in inst.vehicle_ids:
                if (r, k) not in cache:
                    cache[r, k] = _best_insertion(inst, k, routes[k], r)
                opt = cache[r, k]
                if opt is None:
                    continue
                if choice is None or opt[0] < choice[0] - EPS:
                    choice = (opt[0], r, k, opt[3])
        if choice is None:
            raise ConstructionError(f"no vehicle can take requests {unassigned}")
        _, r, k, new = choice
        routes[k] = new
        unassigned.remove(r)
        for key in [key for key in cache if key[1] == k]:
            del cache[key]
    return Plan(routes)


# ---------------------------------------------------------------- re-sequencing


def _sequence_cost(inst: Instance, start: int, order, destination=None) -> float:
    dist, _ = inst.network.metric()
    w = inst.weights
    req = inst._request_index
    riding = sum(req[r].qty for r in order)
    node = start
    cost = 0.0
    for r in order:
        nxt = req[r].dropoff
        cost += (w.alpha + w.theta * riding) * dist(node, nxt)
        riding -= req[r].qty
        node = nxt
    if destination is not None:
        cost += w.alpha * dist(node, destination)
    return cost


def _exact_tail(inst: Instance, node: int, reqs: frozenset, destination, memo: dict):
    """Cheapest (cost, order) to drop ``reqs`` from ``node``; subset DP, memoized."""
    key = (node, reqs, destination)
    hit = memo.get(key)
    if hit is not None:
        return hit
    dist, _ = inst.network.metric()
    w = inst.weights
    if not reqs:
        res = (0.0 if destination is None else w.alpha * dist(node, destination), ())
    else:
        req = inst._request_index
        rate = w.alpha + w.theta * sum(req[r].qty for r in reqs)
        res = None
        # sorted scan with strict improvement keeps the lexicographically first optimal order
        for r in sorted(reqs):
            d = req[r].dropoff
            sub_cost, sub_order = _exact_tail(inst, d, reqs - {r}, destination, memo)
            c = rate * dist(node, d) + sub_cost
            if res is None or c < res[0] - EPS:
                res = (c, (r,) + sub_order)
    memo[key] = res
    return res


def resequence_dropoffs(inst: Instance, start: int, requests, destination: int | None = None,
                        exact_limit: int = EXACT_RESEQUENCE_LIMIT, memo: dict | None = None):
    """Order for dropping all ``requests`` starting at node ``start``, and its weighted cost.

    The cost counts vehicle distance and onboard passenger distance of the remaining legs
    (plus the leg to a physical destination). Exact up to ``exact_limit`` dropoffs (same
    optimum and tie-break as scanning all permutations in lexicographic order), cheapest
    insertion beyond that. ``memo`` may be shared between calls on the same instance.
    """
    reqs = sorted(requests)
    if not reqs:
        return (), _sequence_cost(inst, start, (), destination)
    if len(reqs) <= exact_limit:
        cost, order = _exact_tail(inst, start, frozenset(reqs), destination, {} if memo is None else memo)
        return order, cost
    order: list[int] = []
    left = list(reqs)
    while left:
        pick = None
        for r in left:
            for pos in range(len(order) + 1):
                trial = order[:pos] + [r] + order[pos:]
                c = _sequence_cost(inst, start, trial, destination)
                if pick is None or c < pick[0] - EPS:
                    pick = (c, r, pos)
        _, r, pos = pick
        order.insert(pos, r)
        left.remove(r)
    return tuple(order), _sequence_cost(inst, start, order, destination)


# ---------------------------------------------------------------- phase II


@dataclass
class _Anchor:
    index: int  # last pickup/transfer position, -1 for the origin
    node: int
    depart: float
    onboard: tuple[int, ...]
    load: int
    suffix_cost: float


def _anchor(inst: Instance, plan: Plan, sched: Schedule, k: int) -> _Anchor:
    events = plan.route(k)
    idx = -1
    for i, ev in enumerate(events):
        if ev.kind in (PICKUP, TRANSFER):
            idx = i
    if idx < 0:
        node, onboard = inst.vehicle(k).origin, ()
    else:
        node, onboard = events[idx].node, tuple(sorted(sched.onboard_after[k][idx]))
    depart = sched.departure(k, idx)
    suffix = events[idx + 1:]
    cost = route_cost(inst, k, suffix, start_node=node, start_time=depart, onboard=onboard)
    load = sum(inst.request(r).qty for r in onboard)
    return _Anchor(idx, node, depart, onboard, load, cost)


def _subsets(items):
    for n in range(len(items) + 1):
        yield from itertools.combinations(items, n)


def best_transfer_for_pair(inst: Instance, plan: Plan, k: int, l: int, t_range: float | None = None,
                           sched: Schedule | None = None, base_total: float | None = None,
                           cache: dict | None = None) -> TransferCandidate | None:
    """Best single transfer between vehicles k and l, or None if nothing beats the plan.

    Both vehicles detour to a common node right after their last pickup (or last transfer),
    some onboard requests switch vehicle, and each vehicle's remaining dropoffs are
    re-sequenced. Candidate nodes lie within ``t_range`` of both anchors and must keep the
    arrival gap within ``d_max``.
    """
    if k == l:
        raise ValueError("a transfer needs two distinct vehicles")
    if t_range is None:
        t_range = inst.t_range
    if sched is None:
        sched = simulate(inst, plan)
    if base_total is None:
        base_total = evaluate(inst, plan).total
    if cache is None:
        cache = {}
    net = inst.network
    dist, ttime = net.metric()
    w = inst.weights
    qty = {r.id: r.qty for r in inst.requests}
    ak, al = _anchor(inst, plan, sched, k), _anchor(inst, plan, sched, l)
    if not ak.onboard and not al.onboard:
        return None
    vk, vl = inst.vehicle(k), inst.vehicle(l)
    nodes = sorted(nodes_within(net, ak.node, t_range) & nodes_within(net, al.node, t_range))
    fixed = base_total - ak.suffix_cost - al.suffix_cost

    def seq(start, reqs, dest):
        key = (start, reqs, dest)
        hit = cache.get(key)
        if hit is None:
            hit = cache[key] = resequence_dropoffs(inst, start, reqs, dest, memo=cache.setdefault("dp", {}))
        return hit

    arrangements = []
    for mk in _subsets(ak.onboard):
        for ml in _subsets(al.onboard):
            if not mk and not ml:
                continue
            moved_k, moved_l = sum(qty[r] for r in mk), sum(qty[r] for r in ml)
            if ak.load - moved_k + moved_l > vk.capacity or al.load - moved_l + moved_k > vl.capacity:
                continue
            keep_k = frozenset(set(ak.onboard) - set(mk) | set(ml))
            keep_l = frozenset(set(al.onboard) - set(ml) | set(mk))
            arrangements.append((mk, ml, keep_k, keep_l))
    if not arrangements:
        return None

    best = None
    for x in nodes:
        arr_k = ak.depart + ttime(ak.node, x)
        arr_l = al.depart + ttime(al.node, x)
        gap = abs(arr_k - arr_l)
        if gap > inst.d_max + EPS:
            continue
        detour = (w.alpha + w.theta * ak.load) * dist(ak.node, x) + (w.alpha + w.theta * al.load) * dist(al.node, x)
        base = fixed + detour + w.delta * gap
        for mk, ml, keep_k, keep_l in arrangements:
            total = base + seq(x, keep_k, vk.destination)[1] + seq(x, keep_l, vl.destination)[1]
            if best is None or total < best[0] - EPS:
                best = (total, x, mk, ml, keep_k, keep_l, gap)
    if best is None or best[0] >= base_total - EPS:
        return None
    _, x, mk, ml, keep_k, keep_l, gap = best
    req = inst._request_index
    new_routes = {}
    for v, a, partner, out, inc, keep in ((k, ak, l, mk, ml, keep_k), (l, al, k, ml, mk, keep_l)):
        order, _ = seq(x, keep, inst.vehicle(v).destination)
        new_routes[v] = (
            plan.route(v)[: a.index + 1]
            + (Event.transfer(x, partner, out=out, inc=inc),)
            + tuple(Event.dropoff(r, req[r].dropoff) for r in order)
        )
    candidate_total = evaluate(inst, plan.replace(new_routes)).total
    return TransferCandidate(
        k, l, x, tuple(mk), tuple(ml), new_routes, gap, candidate_total, base_total - candidate_total
    )


def _pair_worker(args):
    inst, plan, pairs, t_range = args
    sched = simulate(inst, plan)
    base_total = evaluate(inst, plan).total
    cache = {}
    out = []
    for k, l in pairs:
        cand = best_transfer_for_pair(inst, plan, k, l, t_range, sched, base_total, cache)
        if cand is not None:
            out.append(cand)
    return out


def _candidates(inst, plan, pairs, t_range, jobs):
    if jobs <= 1 or len(pairs) < 2:
        return _pair_worker((inst, plan, pairs, t_range))
    chunks = [pairs[i::jobs] for i in range(jobs)]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        found = pool.map(_pair_worker, [(inst, plan, c, t_range) for c in chunks if c])
        return [c for part in found for c in part]


def phase2_improve(inst: Instance, plan: Plan, repeat: bool = False, jobs: int = 1,
                   t_range: float | None = None) -> Plan:
    """Accept improving pairwise transfers, best savings first, each vehicle in at most one.

    With ``repeat`` the sweep runs again on the improved plan (vehicles may then take part
    in further transfers after their latest one) until no improving candidate remains.
    """
    ids = sorted(inst.vehicle_ids)
    pairs = list(itertools.combinations(ids, 2))
    current = plan
    while pairs:
        cands = [c for c in _candidates(inst, current, pairs, t_range, jobs) if c.savings > EPS]
        cands.sort(key=lambda c: (-c.savings, c.k, c.l))
        used: set[int] = set()
        changes = {}
        for c in cands:
            if c.k in used or c.l in used:
                continue
            used |= {c.k, c.l}
            changes.update(c.routes)
            log.debug("accept transfer k%d-k%d at %d saving %g", c.k, c.l, c.node, c.savings)
        if not changes:
            break
        improved = current.replace(changes)
        if evaluate(inst, improved).total > evaluate(inst, current).total - EPS:
            break
        current = improved
        if not repeat:
            break
    return current


@dataclass
class HeuristicResult:
    phase1: Plan
    plan: Plan
    phase1_cost: CostBreakdown
    cost: CostBreakdown
    phase1_seconds: float
    phase2_seconds: float
    transfers: list = field(default_factory=list)

    @property
    def n_transfers(self) -> int:
        return len(self.plan.transfers())

    @property
    def vehicles_in_transfers(self) -> int:
        return len({v for k, l, _ in self.plan.transfers() for v in (k, l)})


def solve(inst: Instance, phase1_only: bool = False, repeat: bool = False, jobs: int = 1) -> HeuristicResult:
    t0 = time.perf_counter()
    p1 = phase1_construct(inst)
    t1 = time.perf_counter()
    p2 = p1 if phase1_only else phase2_improve(inst, p1, repeat=repeat, jobs=jobs)
    t2 = time.perf_counter()
    problems = check_feasible(inst, p2)
    if problems:
        raise AssertionError(f"heuristic produced an infeasible plan: {problems}")
    return HeuristicResult(p1, p2, evaluate(inst, p1), evaluate(inst, p2), t1 - t0, t2 - t1)
