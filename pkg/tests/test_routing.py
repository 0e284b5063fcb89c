import pytest

from dpillar.errors import IdenticalEndpointsError, InvalidPlanError
from dpillar.marked_cycle import MarkedCycle, apply_moves, count_turns, has_forbidden_pair
from dpillar.oracle import all_cycles, bfs_distances, exhaustive_cycle_min
from dpillar.routing import (
    CaseData,
    candidate_set,
    diameter,
    dpillar_min_length,
    dpillar_min_path,
    dpillar_sp_path,
    execute_moves,
    route,
    select_candidate,
)
from dpillar.topology import Server, TopologyParams, adjacent_switches


def test_case_data_ordering():
    cd = CaseData.from_cycle(MarkedCycle.of(8, 4, {1, 3, 5, 7, 0}))
    assert cd.i == (5, 7) and cd.j == (3, 1)
    assert (cd.r, cd.s, cd.delta0, cd.deltax) == (2, 2, 1, 0)


def test_k3_x1_b2():
    cyc = MarkedCycle.of(3, 1, {2})
    lengths = {c.moves: c.length for c in candidate_set(cyc)}
    assert lengths["aa"] == 2
    assert dpillar_min_length(cyc) == 2


def test_single_b_move():
    cyc = MarkedCycle.of(5, 0, {0})
    assert [c.moves for c in candidate_set(cyc)] == ["b", "ccccc"]
    assert dpillar_min_length(cyc) == 1


def test_ring_only():
    assert dpillar_min_length(MarkedCycle.of(3, 1, set())) == 1


@pytest.mark.parametrize("k", range(2, 7))
def test_closed_form_equals_exhaustive(k):
    for cyc in all_cycles(k):
        best = exhaustive_cycle_min(cyc).length
        assert dpillar_min_length(cyc) == best, cyc
        assert select_candidate(cyc).length == best, cyc
        assert min(c.length for c in candidate_set(cyc, full_family=True)) == best


@pytest.mark.parametrize("k", range(2, 8))
def test_selected_strings_are_well_formed(k):
    for cyc in all_cycles(k):
        moves = select_candidate(cyc).moves
        assert count_turns(moves) <= 2
        assert not has_forbidden_pair(moves)
        final, covered = apply_moves(k, moves)
        assert final == cyc.x and cyc.marked <= covered


def test_worked_example_min(p63):
    src, dst = Server.parse("0:0.0.0", p63), Server.parse("1:1.0.0", p63)
    r = dpillar_min_path(src, dst, p63)
    assert r.length == 2
    assert r.servers[0] == src and r.servers[-1] == dst


def test_route_switches_are_shared(p63):
    src, dst = Server.parse("0:0.0.0", p63), Server.parse("2:1.1.1", p63)
    r = dpillar_min_path(src, dst, p63)
    assert r.length == bfs_distances(src, p63)[dst]
    for (u, sw), v in zip(r.hops, r.servers[1:]):
        assert sw in adjacent_switches(u, p63) and sw in adjacent_switches(v, p63)


def test_trivial_ring_hop():
    p = TopologyParams(4, 2)
    r = dpillar_min_path(Server(0, (0, 0)), Server(1, (0, 0)), p)
    assert r.moves == "c"


@pytest.mark.parametrize("k", [3, 4, 5])
def test_sp_worked_example(k):
    p = TopologyParams(4, k)
    src = Server(0, (0,) * k)
    dst = Server(1, (0,) * (k - 1) + (1,))
    assert dpillar_sp_path(src, dst, p, "clockwise").length == k + 1
    assert dpillar_sp_path(src, dst, p, "anticlockwise").length == k - 1


def test_sp_same_server(p63):
    s = Server.parse("0:0.0.0", p63)
    assert dpillar_sp_path(s, s, p63).length == 0
    with pytest.raises(IdenticalEndpointsError):
        route(s, s, p63, "min")


def test_sp_best_is_shorter(p63):
    src, dst = Server.parse("0:0.0.0", p63), Server.parse("1:1.0.0", p63)
    assert route(src, dst, p63, "sp-best").length == 2


def test_execute_rejects_bad_plans(p63):
    src, dst = Server.parse("0:0.0.0", p63), Server.parse("1:1.0.0", p63)
    with pytest.raises(InvalidPlanError):
        execute_moves(src, dst, "c", p63)
    with pytest.raises(InvalidPlanError):
        execute_moves(src, dst, "bc", p63)
    with pytest.raises(InvalidPlanError):
        execute_moves(src, dst, "x", p63)


@pytest.mark.parametrize("k,expected", [(2, 2), (3, 3), (4, 4), (5, 5), (6, 7), (7, 8)])
def test_diameter_formula(k, expected):
    assert diameter(TopologyParams(4, k)) == expected
