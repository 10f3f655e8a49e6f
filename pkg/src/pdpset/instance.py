"""Problem instances: vehicles, requests, objective weights, JSON persistence."""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field

import jsonschema

from pdpset.graph import GridNetwork, InvalidDimensionError


class InstanceFormatError(ValueError):
    """A document does not match the instance schema; ``path`` names the offending field."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


class GenerationError(ValueError):
    pass


@dataclass(frozen=True)
class Vehicle:
    id: int
    origin: int
    capacity: int
    destination: int | None = None  # None means the zero-cost dummy depot


@dataclass(frozen=True)
class Request:
    id: int
    pickup: int
    dropoff: int
    qty: int = 1


@dataclass(frozen=True)
class Weights:
    alpha: float = 1.0  # vehicle travel distance
    beta: float = 1.0  # customer wait time
    theta: float = 1.0  # customer travel distance
    delta: float = 1.0  # vehicle transfer time


@dataclass(frozen=True)
class Instance:
    network: GridNetwork
    vehicles: tuple[Vehicle, ...]
    requests: tuple[Request, ...]
    weights: Weights = field(default_factory=Weights)
    d_max: float = 2
    t_range: float = 8
    seed: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "vehicles", tuple(self.vehicles))
        object.__setattr__(self, "requests", tuple(self.requests))

    def vehicle(self, k: int) -> Vehicle:
        return self._vehicle_index[k]

    def request(self, r: int) -> Request:
        return self._request_index[r]

    @property
    def _vehicle_index(self) -> dict[int, Vehicle]:
        idx = self.__dict__.get("_vidx")
        if idx is None:
            idx = {v.id: v for v in self.vehicles}
            object.__setattr__(self, "_vidx", idx)
        return idx

    @property
    def _request_index(self) -> dict[int, Request]:
        idx = self.__dict__.get("_ridx")
        if idx is None:
            idx = {r.id: r for r in self.requests}
            object.__setattr__(self, "_ridx", idx)
        return idx

    @property
    def vehicle_ids(self) -> list[int]:
        return [v.id for v in self.vehicles]

    @property
    def request_ids(self) -> list[int]:
        return [r.id for r in self.requests]

    def replace(self, **changes) -> "Instance":
        data = {
            "network": self.network,
            "vehicles": self.vehicles,
            "requests": self.requests,
            "weights": self.weights,
            "d_max": self.d_max,
            "t_range": self.t_range,
            "seed": self.seed,
        }
        data.update(changes)
        return Instance(**data)


def illustrative_instance(d_max: float = 2, t_range: float = 8) -> Instance:
    """Two vehicles (at nodes 2 and 9, capacity 3) and requests 1->20, 7->19, 3->25 on a 5x5 grid."""
    return Instance(
        network=GridNetwork(5, 5),
        vehicles=(Vehicle(1, 2, 3), Vehicle(2, 9, 3)),
        requests=(Request(1, 1, 20), Request(2, 7, 19), Request(3, 3, 25)),
        d_max=d_max,
        t_range=t_range,
    )


def generate_instance(
    rows: int,
    cols: int,
    n_vehicles: int,
    n_requests: int,
    capacity: int = 6,
    weights: Weights | None = None,
    d_max: float = 2,
    t_range: float = 8,
    seed: int | None = None,
) -> Instance:
    """Random instance with origins, pickups and dropoffs drawn uniformly and independently."""
    if n_vehicles < 1 or n_requests < 1:
        raise GenerationError("need at least one vehicle and one request")
    if capacity < 1:
        raise GenerationError("capacity must be positive")
    if rows < 1 or cols < 1 or rows * cols < 2:
        raise GenerationError(f"a {rows}x{cols} grid cannot hold a request with distinct pickup and dropoff")
    try:
        net = GridNetwork(rows, cols)
    except InvalidDimensionError as exc:
        raise GenerationError(str(exc)) from exc
    rng = random.Random(seed)
    n = net.n_nodes
    vehicles = tuple(Vehicle(k + 1, rng.randint(1, n), capacity) for k in range(n_vehicles))
    requests = []
    for r in range(n_requests):
        p = rng.randint(1, n)
        d = rng.randint(1, n)
        while d == p:
            d = rng.randint(1, n)
        requests.append(Request(r + 1, p, d, 1))
    return Instance(net, vehicles, tuple(requests), weights or Weights(), d_max, t_range, seed)


def validate_instance(inst: Instance) -> list[str]:
    """Every broken invariant as a ``"field: rule"`` message; empty when valid."""
    out = []
    net = inst.network
    n = net.n_nodes

    def bad_node(x):
        return not isinstance(x, int) or isinstance(x, bool) or not 1 <= x <= n

    if not inst.vehicles:
        out.append("vehicles: at least one vehicle is required")
    if not inst.requests:
        out.append("requests: at least one request is required")
    for name in ("alpha", "beta", "theta", "delta"):
        if getattr(inst.weights, name) < 0:
            out.append(f"weights.{name}: must be non-negative")
    if inst.d_max < 0:
        out.append("d_max: must be non-negative")
    if inst.t_range < 0:
        out.append("t_range: must be non-negative")
    seen = set()
    for i, v in enumerate(inst.vehicles):
        if v.id in seen:
            out.append(f"vehicles[{i}].id: duplicate id {v.id}")
        seen.add(v.id)
        if v.capacity < 1:
            out.append(f"vehicles[{i}].capacity: must be at least 1")
        if bad_node(v.origin):
            out.append(f"vehicles[{i}].origin: node {v.origin} is not in 1..{n}")
        if v.destination is not None and bad_node(v.destination):
            out.append(f"vehicles[{i}].destination: node {v.destination} is not in 1..{n}")
    max_cap = max((v.capacity for v in inst.vehicles), default=0)
    seen = set()
    for i, r in enumerate(inst.requests):
        if r.id in seen:
            out.append(f"requests[{i}].id: duplicate id {r.id}")
        seen.add(r.id)
        if bad_node(r.pickup):
            out.append(f"requests[{i}].pickup: node {r.pickup} is not in 1..{n}")
        if bad_node(r.dropoff):
            out.append(f"requests[{i}].dropoff: node {r.dropoff} is not in 1..{n}")
        if r.pickup == r.dropoff:
            out.append(f"requests[{i}].dropoff: equals pickup {r.pickup}")
        if r.qty < 1:
            out.append(f"requests[{i}].qty: must be at least 1")
        elif inst.vehicles and r.qty > max_cap:
            out.append(f"requests[{i}].qty: unservable request, {r.qty} passengers exceed every capacity (max {max_cap})")
    return out


_NUM = {"type": "number"}
_INT = {"type": "integer"}

INSTANCE_SCHEMA = {
    "type": "object",
    "required": ["grid", "weights", "d_max", "t_range", "vehicles", "requests"],
    "properties": {
        "grid": {
            "type": "object",
            "required": ["rows", "cols"],
            "properties": {"rows": {"type": "integer", "minimum": 1}, "cols": {"type": "integer", "minimum": 1}},
        },
        "weights": {
            "type": "object",
            "required": ["alpha", "beta", "theta", "delta"],
            "properties": {k: {"type": "number", "minimum": 0} for k in ("alpha", "beta", "theta", "delta")},
        },
        "d_max": {"type": "number", "minimum": 0},
        "t_range": {"type": "number", "minimum": 0},
        "seed": {"type": ["integer", "null"]},
        "vehicles": {
            "type": "array",
            "minItems": 1,
            "items": {
                "type": "object",
                "required": ["id", "origin", "capacity"],
                "properties": {
                    "id": _INT,
                    "origin": _INT,
                    "capacity": {"type": "integer", "minimum": 1},
                    "destination": {"type": ["integer", "null"]},
                },
            },
        },
        "requests": {
            "type": "array",
            "minItems": 1,
            "items": {
                "type": "object",
                "required": ["id", "pickup", "dropoff", "qty"],
                "properties": {"id": _INT, "pickup": _INT, "dropoff": _INT, "qty": {"type": "integer", "minimum": 1}},
            },
        },
    },
}


def _json_path(parts) -> str:
    out = "$"
    for p in parts:
        out += f"[{p}]" if isinstance(p, int) else f".{p}"
    return out


def _num(x):
    return int(x) if isinstance(x, float) and x.is_integer() else x


def save_instance(inst: Instance) -> dict:
    doc = {
        "grid": {"rows": inst.network.rows, "cols": inst.network.cols},
        "weights": {k: _num(getattr(inst.weights, k)) for k in ("alpha", "beta", "theta", "delta")},
        "d_max": _num(inst.d_max),
        "t_range": _num(inst.t_range),
        "vehicles": [],
        "requests": [{"id": r.id, "pickup": r.pickup, "dropoff": r.dropoff, "qty": r.qty} for r in inst.requests],
    }
    if inst.seed is not None:
        doc["seed"] = inst.seed
    for v in inst.vehicles:
        item = {"id": v.id, "origin": v.origin, "capacity": v.capacity}
        if v.destination is not None:
            item["destination"] = v.destination
        doc["vehicles"].append(item)
    return doc


def load_instance(doc: dict | str) -> Instance:
    if isinstance(doc, str):
        try:
            doc = json.loads(doc)
        except json.JSONDecodeError as exc:
            raise InstanceFormatError("$", f"invalid JSON: {exc}") from exc
    validator = jsonschema.Draft7Validator(INSTANCE_SCHEMA)
    errors = sorted(validator.iter_errors(doc), key=lambda e: list(map(str, e.absolute_path)))
    if errors:
        err = errors[0]
        raise InstanceFormatError(_json_path(err.absolute_path), err.message)
    try:
        net = GridNetwork(doc["grid"]["rows"], doc["grid"]["cols"])
    except InvalidDimensionError as exc:
        raise InstanceFormatError("$.grid", str(exc)) from exc
    inst = Instance(
        network=net,
        vehicles=tuple(Vehicle(v["id"], v["origin"], v["capacity"], v.get("destination")) for v in doc["vehicles"]),
        requests=tuple(Request(r["id"], r["pickup"], r["dropoff"], r["qty"]) for r in doc["requests"]),
        weights=Weights(**{k: doc["weights"][k] for k in ("alpha", "beta", "theta", "delta")}),
        d_max=doc["d_max"],
        t_range=doc["t_range"],
        seed=doc.get("seed"),
    )
    problems = [p for p in validate_instance(inst) if not p.startswith("requests") or "unservable" not in p]
    if problems:
        field_name, _, rule = problems[0].partition(": ")
        raise InstanceFormatError("$." + field_name, rule)
    return inst
