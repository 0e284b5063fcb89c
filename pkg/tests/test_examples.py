"""Worked examples with known answers, one assertion group per example."""

import numpy as np
import pytest

from dpillar.marked_cycle import apply_moves, canonicalize, count_turns
from dpillar.metrics import link_loads, path_length_survey
from dpillar.oracle import bfs_distances, bfs_distances_reference
from dpillar.routing import diameter, route
from dpillar.symmetry import Generator, GroupElement, generator_edge, generators, identity, multiply, phi
from dpillar.topology import (
    Server,
    Switch,
    TopologyParams,
    adjacent_switches,
    neighbor,
    origin,
    server_from_index,
    switch_servers,
)


def test_figure_switch_names(p63):
    right, left = adjacent_switches(Server.parse("2:000", p63), p63)
    assert (right.column, str(right)) == (2, "2:0.0")
    assert (left.column, str(left)) == (1, "1:0.0")


@pytest.mark.parametrize("nk", [(4, 2), (6, 3), (8, 5)])
def test_origin_switches(nk):
    p = TopologyParams(*nk)
    right, left = adjacent_switches(origin(p), p)
    assert right == Switch(0, (0,) * (p.k - 1))
    assert left == Switch(p.k - 1, (0,) * (p.k - 1))


def test_n12_left_switch_and_static_edge():
    p = TopologyParams(12, 5)
    s = Server.parse("1:1.2.5.3.0", p)
    _, left = adjacent_switches(s, p)
    assert str(left) == "0:1.2.5.3"
    members = {str(u) for u in switch_servers(left, p)}
    assert "0:1.2.5.3.4" in members and str(s) in members
    assert str(neighbor(s, "b", 1, p)) == "1:1.2.5.1.0"


def test_d_then_c_hops(p63):
    first = neighbor(Server.parse("0:0.0.0", p63), "d", 1, p63)
    assert str(first) == "0:1.0.0"
    assert str(neighbor(first, "c", 0, p63)) == "1:1.0.0"


@pytest.mark.parametrize("nk,servers,switches", [((16, 3), 1536, 192), ((128, 3), 786432, 12288), ((4, 2), 8, 4)])
def test_sizes(nk, servers, switches):
    p = TopologyParams(*nk)
    assert (p.num_servers, p.num_switches) == (servers, switches)


def test_canonical_already(p63):
    cyc = canonicalize(Server.parse("0:000", p63), Server.parse("1:100", p63), p63)
    assert (cyc.x, cyc.marked) == (1, frozenset({2}))
    cyc = canonicalize(Server.parse("0:000", p63), Server.parse("0:001", p63), p63)
    assert (cyc.x, cyc.marked) == (0, frozenset({0}))


def test_fold_examples():
    assert apply_moves(3, "dc") == (1, frozenset({2, 0}))
    assert apply_moves(5, "ccccc") == (0, frozenset(range(5)))
    assert count_turns("cba") == 1


def test_bfs_examples(p63):
    dm = bfs_distances(origin(p63), p63)
    assert dm[Server.parse("1:100", p63)] == 2
    assert dm[origin(p63)] == 0
    p44 = TopologyParams(4, 4)
    assert bfs_distances(origin(p44), p44).eccentricity == 4


def test_min_to_far_server(p63):
    src, dst = Server.parse("0:000", p63), Server.parse("2:111", p63)
    assert route(src, dst, p63).length == bfs_distances(src, p63)[dst]


@pytest.mark.parametrize("k,expected", [(3, 3), (5, 5), (7, 8)])
def test_diameter_examples(k, expected):
    assert diameter(TopologyParams(4, k)) == expected


def test_identity_times_generator():
    p = TopologyParams(4, 3)
    e = identity(p)
    for s in generators(p):
        kind, digit = generator_edge(e, s, p)
        assert phi(multiply(e, s, p)) == neighbor(origin(p), kind, digit, p)


def test_d_product_lands_on_d_edge():
    p = TopologyParams(4, 3)
    g = GroupElement(0, (1, 0, 1))
    prod = multiply(g, Generator("d", 1), p)
    assert prod == GroupElement(0, (1, 0, 0))
    assert phi(prod) == neighbor(phi(g), "d", 0, p)


def test_cumulative_16_5_min():
    cum = path_length_survey(TopologyParams(16, 5), "min").cumulative()
    assert round(cum[4], 1) == 20.3
    assert cum[5] == pytest.approx(100.0)
    assert len(cum) == 6


def _bfs_first_shortest_loads(params):
    """All-pairs loads using, for every pair, the lexicographically first
    shortest server path found by BFS (independent of the router)."""
    from collections import deque

    from dpillar.metrics import MOVE_SLOTS
    from dpillar.topology import neighbors, server_index

    loads = np.zeros(4 * params.num_servers, dtype=np.int64)
    for si in range(params.num_servers):
        src = server_from_index(si, params)
        parent = {src: None}
        queue = deque([src])
        while queue:
            u = queue.popleft()
            for kind, _, v in sorted(neighbors(u, params), key=lambda t: (t[0].value, t[1])):
                if v not in parent:
                    parent[v] = (u, kind.value)
                    queue.append(v)
        for dst, link in parent.items():
            while link is not None:
                u, m = link
                out_slot, in_slot = MOVE_SLOTS[m]
                loads[4 * server_index(u, params) + out_slot] += 1
                loads[4 * server_index(dst, params) + in_slot] += 1
                dst, link = u, parent[u]
    return loads


def test_abt_reference_on_smallest_instance():
    p = TopologyParams(4, 2)
    ref = _bfs_first_shortest_loads(p)
    ours = link_loads(p, "min").loads
    assert ref.sum() == ours.sum()
    assert abs(int(ours.max()) - int(ref.max())) <= 0.25 * ref.max()


def test_reference_bfs_counts_every_server(p63):
    assert len(bfs_distances_reference(origin(p63), p63)) == p63.num_servers
