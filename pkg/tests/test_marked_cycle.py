import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dpillar.errors import IdenticalEndpointsError
from dpillar.marked_cycle import (
    FORBIDDEN_PAIRS,
    MarkedCycle,
    apply_moves,
    canonicalize,
    compress_moves,
    count_turns,
    has_forbidden_pair,
    is_valid,
    parse_moves,
)
from dpillar.oracle import bfs_distances, exhaustive_cycle_min
from dpillar.routing import dpillar_min_length
from dpillar.topology import Server, TopologyParams


def test_power_notation():
    assert parse_moves("c2ba3dc1") == "ccbaaadc"
    assert parse_moves("ccbaaadc") == "ccbaaadc"
    assert compress_moves("ccbaaadc") == "c2ba3dc"
    with pytest.raises(ValueError):
        parse_moves("cxz")


def test_apply_moves_ba():
    assert apply_moves(4, "ba") == (3, frozenset({0, 3}))


def test_turn_counts():
    assert count_turns(parse_moves("c2ba3dc")) == 2
    assert count_turns(parse_moves("a2dc3")) == 1
    assert count_turns("cccc") == 0


def test_forbidden_pairs():
    assert len(FORBIDDEN_PAIRS) == 8
    assert has_forbidden_pair("cbaac")
    assert not has_forbidden_pair("cbaadc")


def test_identical_endpoints_rejected():
    with pytest.raises(IdenticalEndpointsError):
        MarkedCycle(4, 0, frozenset())


def test_canonicalize_example(p63):
    src, dst = Server.parse("1:0.0.1", p63), Server.parse("2:1.0.1", p63)
    cyc = canonicalize(src, dst, p63)
    assert (cyc.x, cyc.marked) == (1, frozenset({1}))
    assert dpillar_min_length(cyc) == bfs_distances(src, p63)[dst]


def test_x0_b12_needs_four():
    cyc = MarkedCycle.of(4, 0, {1, 2})
    assert exhaustive_cycle_min(cyc).length == 4
    assert dpillar_min_length(cyc) == 4
    assert is_valid(cyc, "cccc")


@settings(max_examples=150, deadline=None)
@given(
    st.sampled_from([(4, 3), (6, 3), (4, 4)]),
    st.integers(0, 10**6),
    st.integers(0, 10**6),
)
def test_canonical_cycle_distance_matches_bfs(nk, a, b):
    params = TopologyParams(*nk)
    from dpillar.topology import server_from_index

    src = server_from_index(a % params.num_servers, params)
    dst = server_from_index(b % params.num_servers, params)
    if src == dst:
        return
    cyc = canonicalize(src, dst, params)
    assert dpillar_min_length(cyc) == bfs_distances(src, params)[dst]
