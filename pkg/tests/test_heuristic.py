import itertools
import random

import pytest
from helpers import D, P
from hypothesis import given
from hypothesis import strategies as st

from pdpset.heuristic import (
    ConstructionError,
    _sequence_cost,
    best_transfer_for_pair,
    phase1_construct,
    phase2_improve,
    resequence_dropoffs,
    solve,
)
from pdpset.instance import Request, Vehicle, generate_instance
from pdpset.plan import TRANSFER, Plan, check_feasible, evaluate, simulate


def test_phase1_on_worked_example(example):
    plan = phase1_construct(example)
    assert evaluate(example, plan).as_dict() == {"vd": 16, "wt": 6, "td": 17, "tt": 0, "total": 39}
    assert {e.request for e in plan.route(1)} == {1, 2}
    assert {e.request for e in plan.route(2)} == {3}


def test_phase2_on_worked_example(example):
    p1 = phase1_construct(example)
    p2 = phase2_improve(example, p1)
    cost = evaluate(example, p2)
    assert cost.as_dict() == {"vd": 12, "wt": 6, "td": 17, "tt": 1, "total": 36}
    ((k, l, ev),) = p2.transfers()
    assert (k, l) == (1, 2)
    moved = set(ev.out) | set(ev.inc)
    assert moved == {3}
    assert check_feasible(example, p2) == []


def test_best_pair_candidate_saves_three(example):
    cand = best_transfer_for_pair(example, phase1_construct(example), 1, 2)
    assert cand.savings == 3
    assert cand.node == 8
    assert cand.dwell == 1


def test_single_vehicle_forced():
    inst = generate_instance(5, 5, 1, 1, seed=3)
    r = inst.requests[0]
    inst = inst.replace(vehicles=(Vehicle(1, r.pickup, 6),))
    plan = phase1_construct(inst)
    assert plan.route(1) == (P(r.id, r.pickup), D(r.id, r.dropoff))
    assert phase2_improve(inst, plan) == plan


def test_unservable_request_raises():
    inst = generate_instance(5, 5, 2, 2, capacity=2, seed=0)
    inst = inst.replace(requests=inst.requests + (Request(3, 1, 2, qty=3),))
    with pytest.raises(ConstructionError):
        phase1_construct(inst)


def test_far_apart_anchors_have_no_candidate():
    inst = generate_instance(10, 10, 2, 2, seed=0).replace(
        vehicles=(Vehicle(1, 1, 6), Vehicle(2, 100, 6)),
        requests=(Request(1, 1, 2), Request(2, 100, 99)),
        t_range=3,
    )
    plan = Plan({1: (P(1, 1), D(1, 2)), 2: (P(2, 100), D(2, 99))})
    assert best_transfer_for_pair(inst, plan, 1, 2) is None


def test_zero_window_with_unequal_arrivals(example):
    # vehicle 2 reaches every common node one step before or after vehicle 1 on this grid parity
    tight = example.replace(d_max=0)
    plan = phase1_construct(tight)
    cand = best_transfer_for_pair(tight, plan, 1, 2)
    if cand is not None:
        assert cand.dwell == 0


def test_resequence_from_transfer_node(example):
    order, cost = resequence_dropoffs(example, 8, [1, 2, 3])
    # vehicle 1 reaches node 8 via 1 and 7, then drops everyone
    legs = [2, 1, 7, 8] + [example.request(r).dropoff for r in order]
    assert sum(example.network.manhattan(a, b) for a, b in zip(legs, legs[1:])) == 9
    assert order == (2, 1, 3)
    assert resequence_dropoffs(example, 8, []) == ((), 0.0)


@given(st.integers(0, 10**6), st.integers(0, 6), st.booleans())
def test_exact_resequence_equals_permutation_scan(seed, n, to_dest):
    inst = generate_instance(6, 6, 1, 7, seed=seed)
    rng = random.Random(seed)
    reqs = rng.sample(inst.request_ids, n)
    start = rng.randint(1, 36)
    dest = rng.randint(1, 36) if to_dest else None
    best = None
    for perm in itertools.permutations(sorted(reqs)):
        c = _sequence_cost(inst, start, perm, dest)
        if best is None or c < best[0] - 1e-9:
            best = (c, perm)
    assert resequence_dropoffs(inst, start, reqs, dest) == (tuple(best[1]), best[0])


def test_insertion_fallback_never_beats_exact():
    for seed in range(10):
        inst = generate_instance(7, 7, 1, 7, seed=seed)
        start = 1 + seed
        exact = resequence_dropoffs(inst, start, inst.request_ids, exact_limit=7)
        greedy = resequence_dropoffs(inst, start, inst.request_ids)
        assert sorted(greedy[0]) == sorted(inst.request_ids)
        assert greedy[1] >= exact[1] - 1e-9


@given(st.integers(0, 10**6), st.integers(2, 4), st.integers(2, 7))
def test_phase2_invariants(seed, nk, nr):
    inst = generate_instance(6, 6, nk, nr, seed=seed)
    p1 = phase1_construct(inst)
    p2 = phase2_improve(inst, p1)
    assert check_feasible(inst, p2) == []
    assert evaluate(inst, p2).total <= evaluate(inst, p1).total + 1e-9
    assert simulate(inst, p2).pickup_time == simulate(inst, p1).pickup_time
    counts = {}
    for k, l, _ in p2.transfers():
        counts[k] = counts.get(k, 0) + 1
        counts[l] = counts.get(l, 0) + 1
    assert all(c == 1 for c in counts.values())


@given(st.integers(0, 10**6))
def test_pair_savings_monotone_in_trange(seed):
    inst = generate_instance(5, 5, 2, 4, seed=seed)
    p1 = phase1_construct(inst)
    found = []
    for t in (1, 2, 5, 8):
        cand = best_transfer_for_pair(inst, p1, 1, 2, t_range=t)
        found.append(cand.savings if cand else 0.0)
    assert found == sorted(found)


def test_repeat_mode_keeps_improving_or_stops():
    for seed in range(15):
        inst = generate_instance(6, 6, 4, 8, seed=seed)
        once = solve(inst)
        again = solve(inst, repeat=True)
        assert again.cost.total <= once.cost.total + 1e-9
        assert check_feasible(inst, again.plan) == []


def test_parallel_matches_serial():
    for seed in range(3):
        inst = generate_instance(8, 8, 5, 12, seed=seed)
        assert solve(inst, jobs=3).plan == solve(inst).plan


def test_transfers_only_after_pickups():
    for seed in range(40):
        inst = generate_instance(5, 5, 2, 5, seed=seed)
        plan = solve(inst).plan
        for k, events in plan.routes.items():
            kinds = [e.kind for e in events]
            if TRANSFER in kinds:
                assert "pickup" not in kinds[kinds.index(TRANSFER):]
