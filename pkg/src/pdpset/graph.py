"""Grid networks with unit (or overridden) arc costs and shortest-path queries.

Nodes are numbered ``1..rows*cols`` in row-major order, so node ``(r - 1) * cols + c``
sits at row ``r``, column ``c``. Every grid edge appears as two directed arcs.
"""

from __future__ import annotations

import heapq
import threading
from dataclasses import dataclass, field
from typing import Iterator, Mapping


class InvalidDimensionError(ValueError):
    pass


class InvalidNodeError(ValueError):
    pass


Arc = tuple[int, int]


@dataclass(frozen=True)
class GridNetwork:
    rows: int
    cols: int
    # optional per-arc overrides; missing arcs keep cost/time 1
    arc_cost: Mapping[Arc, float] | None = None
    arc_time: Mapping[Arc, float] | None = None
    _cache: dict = field(default_factory=dict, init=False, repr=False, compare=False)
    _lock: threading.Lock = field(default_factory=threading.Lock, init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.rows < 1 or self.cols < 1 or self.rows * self.cols < 2:
            raise InvalidDimensionError(f"grid {self.rows}x{self.cols} must have positive dimensions and at least 2 nodes")
        for table in (self.arc_cost, self.arc_time):
            if not table:
                continue
            for (i, j), value in table.items():
                if not self.is_arc(i, j):
                    raise InvalidNodeError(f"({i}, {j}) is not a grid arc")
                if value <= 0:
                    raise ValueError(f"arc ({i}, {j}) needs a positive value, got {value}")
                if table.get((j, i), 1) != value:
                    raise ValueError(f"arc ({i}, {j}) and its reverse must have equal values")

    def __getstate__(self):
        return {"rows": self.rows, "cols": self.cols, "arc_cost": self.arc_cost, "arc_time": self.arc_time}

    def __setstate__(self, state):
        for key, value in state.items():
            object.__setattr__(self, key, value)
        object.__setattr__(self, "_cache", {})
        object.__setattr__(self, "_lock", threading.Lock())

    @property
    def n_nodes(self) -> int:
        return self.rows * self.cols

    @property
    def unit(self) -> bool:
        return not self.arc_cost and not self.arc_time

    def nodes(self) -> range:
        return range(1, self.n_nodes + 1)

    def coord(self, i: int) -> tuple[int, int]:
        self.check_node(i)
        return (i - 1) // self.cols + 1, (i - 1) % self.cols + 1

    def node_at(self, row: int, col: int) -> int:
        if not (1 <= row <= self.rows and 1 <= col <= self.cols):
            raise InvalidNodeError(f"({row}, {col}) lies outside the {self.rows}x{self.cols} grid")
        return (row - 1) * self.cols + col

    def check_node(self, i) -> None:
        if not isinstance(i, int) or isinstance(i, bool) or not 1 <= i <= self.n_nodes:
            raise InvalidNodeError(f"node {i!r} is not in 1..{self.n_nodes}")

    def neighbors(self, i: int) -> list[int]:
        """Adjacent nodes in ascending id order."""
        r, c = self.coord(i)
        out = []
        if r > 1:
            out.append(i - self.cols)
        if c > 1:
            out.append(i - 1)
        if c < self.cols:
            out.append(i + 1)
        if r < self.rows:
            out.append(i + self.cols)
        return out

    def is_arc(self, i: int, j: int) -> bool:
        try:
            return j in self.neighbors(i)
        except InvalidNodeError:
            return False

    def arcs(self) -> Iterator[Arc]:
        for i in self.nodes():
            for j in self.neighbors(i):
                yield i, j

    @property
    def n_arcs(self) -> int:
        return 2 * (self.rows * (self.cols - 1) + self.cols * (self.rows - 1))

    def cost(self, i: int, j: int) -> float:
        return self.arc_cost.get((i, j), 1) if self.arc_cost else 1

    def time(self, i: int, j: int) -> float:
        return self.arc_time.get((i, j), 1) if self.arc_time else 1

    def manhattan(self, i: int, j: int) -> int:
        ri, ci = self.coord(i)
        rj, cj = self.coord(j)
        return abs(ri - rj) + abs(ci - cj)

    def _dijkstra(self, source: int, weight: str) -> dict[int, float]:
        key = (weight, source)
        with self._lock:
            hit = self._cache.get(key)
        if hit is not None:
            return hit
        w = self.cost if weight == "cost" else self.time
        dist = {source: 0}
        heap = [(0, source)]
        while heap:
            d, u = heapq.heappop(heap)
            if d > dist[u]:
                continue
            for v in self.neighbors(u):
                nd = d + w(u, v)
                if nd < dist.get(v, float("inf")):
                    dist[v] = nd
                    heapq.heappush(heap, (nd, v))
        with self._lock:
            self._cache[key] = dist
        return dist

    def metric(self):
        """Unchecked ``(dist, time)`` callables for hot loops; node ids must already be valid."""
        cols = self.cols

        def manhattan(a, b):
            a -= 1
            b -= 1
            return abs(a // cols - b // cols) + abs(a % cols - b % cols)

        dist = manhattan if not self.arc_cost else (lambda a, b: self._dijkstra(a, "cost")[b])
        time = manhattan if not self.arc_time else (lambda a, b: self._dijkstra(a, "time")[b])
        return dist, time

    def diameter(self, weight: str = "time") -> float:
        if self.unit:
            return self.rows + self.cols - 2
        return max(max(self._dijkstra(s, weight).values()) for s in self.nodes())


def build_grid(rows: int, cols: int) -> GridNetwork:
    return GridNetwork(rows, cols)


def shortest_dist(net: GridNetwork, i: int, j: int) -> float:
    net.check_node(i)
    net.check_node(j)
    if net.unit or not net.arc_cost:
        return net.manhattan(i, j)
    return net._dijkstra(i, "cost")[j]


def shortest_time(net: GridNetwork, i: int, j: int) -> float:
    net.check_node(i)
    net.check_node(j)
    if net.unit or not net.arc_time:
        return net.manhattan(i, j)
    return net._dijkstra(i, "time")[j]


def nodes_within(net: GridNetwork, i: int, radius: float) -> set[int]:
    """All nodes whose shortest-path distance from ``i`` is at most ``radius``."""
    net.check_node(i)
    if radius < 0:
        raise ValueError(f"radius must be non-negative, got {radius}")
    if not net.arc_cost:
        r0, c0 = net.coord(i)
        reach = int(radius)
        found = set()
        for r in range(max(1, r0 - reach), min(net.rows, r0 + reach) + 1):
            span = reach - abs(r - r0)
            for c in range(max(1, c0 - span), min(net.cols, c0 + span) + 1):
                found.add((r - 1) * net.cols + c)
        return found
    return {j for j, d in net._dijkstra(i, "cost").items() if d <= radius}


def shortest_paths(net: GridNetwork, i: int, j: int, weight: str = "cost") -> Iterator[list[int]]:
    """Yield every shortest path from ``i`` to ``j`` (node lists, both ends included).

    Paths come out in lexicographic order of node ids, which keeps callers deterministic.
    """
    net.check_node(i)
    net.check_node(j)
    if weight == "cost":
        to_target = {v: shortest_dist(net, v, j) for v in net.nodes()} if net.arc_cost else None
        dist = (lambda v: to_target[v]) if to_target else (lambda v: net.manhattan(v, j))
        w = net.cost
    else:
        to_target = {v: shortest_time(net, v, j) for v in net.nodes()} if net.arc_time else None
        dist = (lambda v: to_target[v]) if to_target else (lambda v: net.manhattan(v, j))
        w = net.time

    def walk(path):
        u = path[-1]
        if u == j:
            yield list(path)
            return
        for v in net.neighbors(u):
            if abs(w(u, v) + dist(v) - dist(u)) < 1e-9:
                path.append(v)
                yield from walk(path)
                path.pop()

    yield from walk([i])
