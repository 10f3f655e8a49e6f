import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from pdpset.instance import (
    GenerationError,
    InstanceFormatError,
    Request,
    Vehicle,
    generate_instance,
    illustrative_instance,
    load_instance,
    save_instance,
    validate_instance,
)


def test_example_is_valid(example):
    assert validate_instance(example) == []
    assert example.network.n_nodes == 25
    assert [v.origin for v in example.vehicles] == [2, 9]


def test_pickup_equals_dropoff_flagged(example):
    bad = example.replace(requests=example.requests + (Request(4, 5, 5),))
    msgs = validate_instance(bad)
    assert len(msgs) == 1 and msgs[0].startswith("requests[3].dropoff")


def test_unservable_request_flagged():
    inst = generate_instance(5, 5, 2, 3, capacity=6, seed=1)
    bad = inst.replace(requests=inst.requests + (Request(9, 1, 2, qty=7),))
    msgs = validate_instance(bad)
    assert len(msgs) == 1 and "unservable request" in msgs[0]


def test_bad_origin_and_duplicate_ids(example):
    bad = example.replace(vehicles=(Vehicle(1, 99, 3), Vehicle(1, 2, 3)))
    msgs = validate_instance(bad)
    assert any(m.startswith("vehicles[0].origin") for m in msgs)
    assert any(m.startswith("vehicles[1].id") for m in msgs)


def test_generation_is_deterministic():
    a = generate_instance(5, 5, 2, 3, seed=42)
    b = generate_instance(5, 5, 2, 3, seed=42)
    assert a == b
    assert a.vehicles[0].capacity == 6 and a.d_max == 2 and a.t_range == 8


def test_generation_errors():
    with pytest.raises(GenerationError):
        generate_instance(1, 1, 1, 1)
    with pytest.raises(GenerationError):
        generate_instance(5, 5, 0, 3)


def test_sweep_is_valid_and_seeds_differ():
    insts = [generate_instance(5, 5, 2, 3, seed=s) for s in range(100)]
    assert all(validate_instance(i) == [] for i in insts)
    draws = [(tuple(v.origin for v in i.vehicles), tuple((r.pickup, r.dropoff) for r in i.requests)) for i in insts]
    collisions = sum(draws[s] == draws[s + 1] for s in range(99))
    assert collisions <= 1


def test_roundtrip_example(example):
    doc = json.loads(json.dumps(save_instance(example)))
    assert load_instance(doc) == example


@given(st.integers(2, 7), st.integers(2, 7), st.integers(1, 4), st.integers(1, 6), st.integers(0, 10**6))
def test_roundtrip_random(rows, cols, nk, nr, seed):
    inst = generate_instance(rows, cols, nk, nr, seed=seed)
    assert load_instance(json.dumps(save_instance(inst))) == inst


def test_destination_roundtrip(example):
    inst = example.replace(vehicles=(Vehicle(1, 2, 3, destination=5), example.vehicles[1]))
    assert load_instance(save_instance(inst)) == inst


@pytest.mark.parametrize(
    "mutate,path",
    [
        (lambda d: d.update(vehicles=[]), "$.vehicles"),
        (lambda d: d["requests"][1].update(pickup="x"), "$.requests[1].pickup"),
        (lambda d: d["weights"].pop("beta"), "$.weights"),
        (lambda d: d["vehicles"][0].update(capacity=0), "$.vehicles[0].capacity"),
        (lambda d: d.update(grid={"rows": 1, "cols": 1}), "$.grid"),
    ],
)
def test_schema_errors_name_the_path(mutate, path):
    doc = save_instance(illustrative_instance())
    mutate(doc)
    with pytest.raises(InstanceFormatError) as err:
        load_instance(doc)
    assert err.value.path == path


def test_invalid_node_in_document():
    doc = save_instance(illustrative_instance())
    doc["requests"][0]["dropoff"] = 26
    with pytest.raises(InstanceFormatError) as err:
        load_instance(doc)
    assert "requests[0]" in err.value.path
