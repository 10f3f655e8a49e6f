"""Shared builders for tests: the worked two-vehicle plans and random feasible plans."""

from __future__ import annotations

import random

from pdpset.instance import Instance
from pdpset.plan import Event, Plan

P, D, T = Event.pickup, Event.dropoff, Event.transfer


def no_transfer_plan() -> Plan:
    return Plan({1: (P(1, 1), P(2, 7), D(2, 19), D(1, 20)), 2: (P(3, 3), D(3, 25))})


def transfer_plan() -> Plan:
    return Plan({
        1: (P(1, 1), P(2, 7), T(8, 2, inc=[3]), D(2, 19), D(1, 20), D(3, 25)),
        2: (P(3, 3), T(8, 1, out=[3])),
    })


def _interleave(inst: Instance, reqs, rng: random.Random, pickups_only=False):
    """Random precedence-feasible order; with ``pickups_only`` stops after the last pickup."""
    req = inst._request_index
    todo = set(reqs)
    onboard = set()
    seq = []
    while todo or (onboard and not pickups_only):
        choices = [("p", r) for r in sorted(todo)] + [("d", r) for r in sorted(onboard)]
        kind, r = rng.choice(choices)
        if kind == "p":
            todo.discard(r)
            onboard.add(r)
            seq.append(P(r, req[r].pickup))
        else:
            onboard.discard(r)
            seq.append(D(r, req[r].dropoff))
    return seq, onboard


def random_plan(inst: Instance, rng: random.Random, transfer_prob: float = 0.5) -> Plan:
    """A random plan; capacity is not enforced, so callers filter with ``check_feasible``."""
    ids = inst.vehicle_ids
    assign = {k: [] for k in ids}
    for r in inst.request_ids:
        assign[rng.choice(ids)].append(r)
    routes = {}
    if len(ids) >= 2 and rng.random() < transfer_prob:
        k, l = rng.sample(ids, 2)
        heads = {}
        for v in (k, l):
            heads[v] = _interleave(inst, assign[v], rng, pickups_only=True)
        onk, onl = heads[k][1], heads[l][1]
        mk = sorted(r for r in onk if rng.random() < 0.5)
        ml = sorted(r for r in onl if rng.random() < 0.5)
        if mk or ml:
            x = rng.randint(1, inst.network.n_nodes)
            req = inst._request_index
            for v, partner, out, inc, keep in (
                (k, l, mk, ml, (onk - set(mk)) | set(ml)),
                (l, k, ml, mk, (onl - set(ml)) | set(mk)),
            ):
                tail = [D(r, req[r].dropoff) for r in rng.sample(sorted(keep), len(keep))]
                routes[v] = tuple(heads[v][0]) + (T(x, partner, out=out, inc=inc),) + tuple(tail)
    for k in ids:
        if k not in routes:
            routes[k] = tuple(_interleave(inst, assign[k], rng)[0])
    return Plan(routes)
