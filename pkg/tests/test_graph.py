import itertools

import networkx as nx
import pytest
from hypothesis import given
from hypothesis import strategies as st

from pdpset.graph import (
    GridNetwork,
    InvalidDimensionError,
    InvalidNodeError,
    build_grid,
    nodes_within,
    shortest_dist,
    shortest_paths,
    shortest_time,
)


def test_row_major_numbering():
    net = build_grid(5, 5)
    assert net.coord(1) == (1, 1)
    assert net.coord(7) == (2, 2)
    assert net.coord(25) == (5, 5)
    assert net.node_at(4, 5) == 20


def test_arc_count_and_neighbors():
    net = build_grid(5, 5)
    assert net.n_arcs == 80 == len(list(net.arcs()))
    assert net.neighbors(1) == [2, 6]
    assert net.neighbors(13) == [8, 12, 14, 18]


@pytest.mark.parametrize("rows,cols", [(0, 5), (5, 0), (1, 1), (-2, 3)])
def test_bad_dimensions(rows, cols):
    with pytest.raises(InvalidDimensionError):
        GridNetwork(rows, cols)


@pytest.mark.parametrize("node", [0, 26, -1, 2.5, True])
def test_bad_nodes(node):
    with pytest.raises(InvalidNodeError):
        shortest_dist(build_grid(5, 5), node, 1)


def test_distances_on_the_worked_grid():
    net = build_grid(5, 5)
    assert shortest_dist(net, 1, 20) == 7
    assert shortest_dist(net, 8, 19) == 3
    assert shortest_time(net, 2, 8) == 2
    assert net.diameter() == 8


def test_matches_networkx_on_overridden_costs():
    net = GridNetwork(3, 4, arc_cost={(1, 2): 5, (2, 1): 5, (6, 7): 3, (7, 6): 3})
    g = nx.DiGraph()
    for i, j in net.arcs():
        g.add_edge(i, j, weight=net.cost(i, j))
    ref = dict(nx.all_pairs_dijkstra_path_length(g))
    for i, j in itertools.product(net.nodes(), repeat=2):
        assert shortest_dist(net, i, j) == ref[i][j]


def test_asymmetric_override_rejected():
    with pytest.raises(ValueError):
        GridNetwork(2, 2, arc_cost={(1, 2): 2})


@given(st.integers(2, 9), st.integers(2, 9), st.data())
def test_manhattan_metric_properties(rows, cols, data):
    net = build_grid(rows, cols)
    node = st.integers(1, rows * cols)
    a, b, c = data.draw(node), data.draw(node), data.draw(node)
    assert shortest_dist(net, a, b) == shortest_dist(net, b, a)
    assert shortest_dist(net, a, c) <= shortest_dist(net, a, b) + shortest_dist(net, b, c)
    assert (shortest_dist(net, a, b) == 0) == (a == b)


@given(st.integers(2, 8), st.integers(2, 8), st.data())
def test_nodes_within_is_a_ball(rows, cols, data):
    net = build_grid(rows, cols)
    center = data.draw(st.integers(1, rows * cols))
    radius = data.draw(st.integers(0, rows + cols))
    ball = nodes_within(net, center, radius)
    assert ball == {j for j in net.nodes() if shortest_dist(net, center, j) <= radius}


def test_shortest_paths_enumeration():
    net = build_grid(3, 3)
    paths = list(shortest_paths(net, 1, 9))
    assert len(paths) == 6  # C(4, 2)
    assert paths == sorted(paths)
    assert all(len(p) == 5 and p[0] == 1 and p[-1] == 9 for p in paths)
    assert list(shortest_paths(net, 5, 5)) == [[5]]


def test_pickle_roundtrip_drops_cache():
    import pickle

    net = GridNetwork(2, 3, arc_time={(1, 2): 2, (2, 1): 2})
    shortest_time(net, 1, 6)
    clone = pickle.loads(pickle.dumps(net))
    assert clone == net
    assert shortest_time(clone, 1, 6) == shortest_time(net, 1, 6)
