"""Single-path routing in DPillar: DPillarMin (shortest) and DPillarSP.

DPillarMin works on the canonical marked cycle.  ``dpillar_min_length`` is the
O(k) chain of numeric tests; ``candidate_set`` builds the matching move
strings so a concrete path can be emitted.  Ties between equal-length
candidates go to the first candidate in the order the tests are evaluated.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal

from .errors import IdenticalEndpointsError, InvalidPlanError
from .marked_cycle import MarkedCycle, apply_moves, canonicalize, is_valid
from .topology import (
    EdgeKind,
    Server,
    Switch,
    TopologyParams,
    covered_position,
    edge_switch,
    validate_server,
)

Direction = Literal["clockwise", "anticlockwise"]


@dataclass(frozen=True)
class CaseData:
    """Marked nodes split around the destination ``x``.

    ``i`` holds the marked nodes on the clockwise side ``x < i_1 < ... < i_r < k``
    and ``j`` those on the anticlockwise side, stored as ``(j_1, ..., j_s)``
    with ``j_1 > ... > j_s > 0``.  For ``x == 0`` only ``i`` is populated.
    """

    k: int
    x: int
    i: tuple[int, ...]
    j: tuple[int, ...]
    delta0: int
    deltax: int

    @classmethod
    def from_cycle(cls, cycle: MarkedCycle) -> "CaseData":
        k, x, marked = cycle.k, cycle.x, cycle.marked
        if x == 0:
            i = tuple(sorted(v for v in marked if v != 0))
            j: tuple[int, ...] = ()
        else:
            i = tuple(sorted(v for v in marked if v > x))
            j = tuple(sorted((v for v in marked if 0 < v < x), reverse=True))
        return cls(k, x, i, j, int(0 in marked), int(x in marked))

    @property
    def r(self) -> int:
        return len(self.i)

    @property
    def s(self) -> int:
        return len(self.j)

    def widest_i_gap(self) -> int:
        """0-based l maximising i_{l+1} - i_l (first one on ties)."""
        gaps = [self.i[l + 1] - self.i[l] for l in range(self.r - 1)]
        return gaps.index(max(gaps))

    def widest_j_gap(self) -> int:
        gaps = [self.j[l] - self.j[l + 1] for l in range(self.s - 1)]
        return gaps.index(max(gaps))


@dataclass(frozen=True)
class CandidatePath:
    moves: str
    case: str

    @property
    def length(self) -> int:
        return len(self.moves)


@dataclass
class Route:
    """A server path; ``switches[t]`` joins ``servers[t]`` and ``servers[t+1]``."""

    servers: list[Server]
    switches: list[Switch] = field(default_factory=list)
    moves: str = ""

    @property
    def length(self) -> int:
        return len(self.switches)

    @property
    def hops(self) -> list[tuple[Server, Switch]]:
        return list(zip(self.servers, self.switches))

    def to_dict(self) -> dict:
        return {
            "length": self.length,
            "moves": self.moves,
            "servers": [str(s) for s in self.servers],
            "switches": [str(w) for w in self.switches],
        }


def _seq(*parts: tuple[str, int]) -> str:
    return "".join(m * count for m, count in parts)


def _x_nonzero_candidates(cd: CaseData, full_family: bool) -> list[CandidatePath]:
    k, x, i, j, d0, dx = cd.k, cd.x, cd.i, cd.j, cd.delta0, cd.deltax
    out = [
        CandidatePath("c" * (k + x), "ring-cw"),
        CandidatePath("a" * (2 * k - x), "ring-acw"),
    ]

    def turn_back_cw(i1: int) -> CandidatePath:
        # a^{k-i1-1} d c^{k-i1-1+x} b^{dx}
        return CandidatePath(_seq(("a", k - i1 - 1), ("d", 1), ("c", k - i1 - 1 + x), ("b", dx)), f"i-first:{i1}")

    def overshoot_cw(ir: int) -> CandidatePath:
        return CandidatePath(_seq(("c", ir), ("b", 1), ("a", ir - x)), f"i-last:{ir}")

    def turn_back_acw(js: int) -> CandidatePath:
        return CandidatePath(_seq(("b", d0), ("a", k - js - 1), ("d", 1), ("c", x - js - 1)), f"j-last:{js}")

    def overshoot_acw(j1: int) -> CandidatePath:
        return CandidatePath(_seq(("c", j1), ("b", 1), ("a", k + j1 - x)), f"j-first:{j1}")

    def i_gap(l: int) -> CandidatePath:
        lo, hi = i[l], i[l + 1]
        return CandidatePath(
            _seq(("a", k - hi - 1), ("d", 1), ("c", k - hi - 1 + lo), ("b", 1), ("a", lo - x)), f"i-gap:{lo}-{hi}"
        )

    def j_gap(l: int) -> CandidatePath:
        hi, lo = j[l], j[l + 1]
        return CandidatePath(
            _seq(("c", lo), ("b", 1), ("a", lo + k - hi - 1), ("d", 1), ("c", x - hi - 1)), f"j-gap:{lo}-{hi}"
        )

    if cd.r == 0:
        out.append(CandidatePath(_seq(("c", x), ("b", dx)), "direct-cw"))
    if cd.s == 0:
        out.append(CandidatePath(_seq(("b", d0), ("a", k - x)), "direct-acw"))
    if cd.r == 1:
        out += [turn_back_cw(i[0]), overshoot_cw(i[0])]
    if cd.s == 1:
        out += [turn_back_acw(j[0]), overshoot_acw(j[0])]
    if cd.r >= 2:
        gaps = range(cd.r - 1) if full_family else [cd.widest_i_gap()]
        out += [i_gap(l) for l in gaps]
        out += [turn_back_cw(i[0]), overshoot_cw(i[-1])]
    if cd.s >= 2:
        gaps = range(cd.s - 1) if full_family else [cd.widest_j_gap()]
        out += [j_gap(l) for l in gaps]
        out += [turn_back_acw(j[-1]), overshoot_acw(j[0])]
    return out


def _x_zero_candidates(cd: CaseData, full_family: bool) -> list[CandidatePath]:
    k, i, d0 = cd.k, cd.i, cd.delta0
    ring = CandidatePath("c" * k, "ring-cw")

    def turn_back(i1: int) -> CandidatePath:
        return CandidatePath(_seq(("b", d0), ("a", k - i1 - 1), ("d", 1), ("c", k - i1 - 1)), f"i-first:{i1}")

    def overshoot(ir: int) -> CandidatePath:
        return CandidatePath(_seq(("c", ir), ("b", 1), ("a", ir)), f"i-last:{ir}")

    # for r <= 1 the case path replaces the ring outright, so it is listed first
    if cd.r == 0:
        return [CandidatePath("b", "static"), ring]
    if cd.r == 1:
        i1 = i[0]
        if i1 == k - 1:
            return [CandidatePath(_seq(("b", d0), ("d", 1)), "static"), ring]
        if i1 == 1:
            return [CandidatePath("cba", "i-last:1"), ring]
        return [turn_back(i1), overshoot(i1), ring]
    out = [ring]
    gaps = range(cd.r - 1) if full_family else [cd.widest_i_gap()]
    for l in gaps:
        lo, hi = i[l], i[l + 1]
        out.append(
            CandidatePath(_seq(("a", k - hi - 1), ("d", 1), ("c", k - hi - 1 + lo), ("b", 1), ("a", lo)), f"i-gap:{lo}-{hi}")
        )
    out += [turn_back(i[0]), overshoot(i[-1])]
    return out


def candidate_set(cycle: MarkedCycle, full_family: bool = False) -> list[CandidatePath]:
    """The candidate family, in tie-breaking order.

    ``full_family`` adds every gap path instead of only the widest gap; it is
    meant for cross-checking and never changes the minimum length.
    """
    cd = CaseData.from_cycle(cycle)
    cands = _x_zero_candidates(cd, full_family) if cycle.x == 0 else _x_nonzero_candidates(cd, full_family)
    for cand in cands:
        if not is_valid(cycle, cand.moves):
            final, covered = apply_moves(cycle.k, cand.moves)
            raise AssertionError(
                f"candidate {cand.case} {cand.moves!r} invalid on {cycle}: ends at {final}, covers {sorted(covered)}"
            )
    return cands


def select_candidate(cycle: MarkedCycle) -> CandidatePath:
    best = None
    for cand in candidate_set(cycle):
        if best is None or cand.length < best.length:
            best = cand
    return best


def dpillar_min_length(cycle: MarkedCycle) -> int:
    """Shortest path length on ``cycle`` by direct numeric tests."""
    cd = CaseData.from_cycle(cycle)
    k, x, i, j, d0, dx = cd.k, cd.x, cd.i, cd.j, cd.delta0, cd.deltax
    r, s = cd.r, cd.s
    if x != 0:
        L = min(k + x, 2 * k - x)
        if r == 0:
            L = min(L, x + dx)
        if s == 0:
            L = min(L, k - x + d0)
        if r == 1:
            L = min(L, 2 * k - 2 * i[0] + x - 1 + dx, 2 * i[0] - x + 1)
        if s == 1:
            L = min(L, k - 2 * j[0] + x - 1 + d0, k + 2 * j[0] - x + 1)
        if r >= 2:
            delta = max(i[l + 1] - i[l] for l in range(r - 1))
            L = min(L, 2 * k - 2 * delta - x, 2 * k - 2 * i[0] + x - 1 + dx, 2 * i[-1] - x + 1)
        if s >= 2:
            eps = max(j[l] - j[l + 1] for l in range(s - 1))
            L = min(L, k - 2 * eps + x, k - 2 * j[-1] + x - 1 + d0, k + 2 * j[0] - x + 1)
        return L
    if r == 0:
        return 1
    if r == 1:
        if i[0] == k - 1:
            return 1 + d0
        if i[0] == 1:
            return 3
        return min(2 * k - 2 * i[0] - 1 + d0, 2 * i[0] + 1)
    delta = max(i[l + 1] - i[l] for l in range(r - 1))
    return min(k, 2 * k - 2 * delta, 2 * k - 2 * i[0] - 1 + d0, 2 * i[-1] + 1)


def execute_moves(src: Server, dst: Server, moves: str, params: TopologyParams) -> Route:
    """Replay a move string in real coordinates, fixing bits to ``dst``'s values."""
    validate_server(src, params)
    validate_server(dst, params)
    k = params.k
    cur = src
    servers, switches = [src], []
    for m in moves:
        try:
            kind = EdgeKind(m)
        except ValueError:
            raise InvalidPlanError(f"unknown move {m!r}") from None
        pos = covered_position(cur.column, kind, k)
        if kind in (EdgeKind.BASIC_STATIC, EdgeKind.DECREMENTED_STATIC) and cur.digits[pos] == dst.digits[pos]:
            raise InvalidPlanError(f"{m}-move at {cur} would not change the row (self-loop)")
        switches.append(edge_switch(cur, kind, params))
        digits = list(cur.digits)
        digits[pos] = dst.digits[pos]
        cur = Server((cur.column + kind.column_step) % k, tuple(digits))
        servers.append(cur)
    if cur != dst:
        raise InvalidPlanError(f"moves {moves!r} from {src} end at {cur}, not {dst}")
    return Route(servers, switches, moves)


def dpillar_min_path(src: Server, dst: Server, params: TopologyParams) -> Route:
    cycle = canonicalize(src, dst, params)
    return execute_moves(src, dst, select_candidate(cycle).moves, params)


def sp_length_on_cycle(k: int, x: int, marked, direction: Direction = "clockwise") -> int:
    """DPillarSP length for a canonical instance (source at node 0)."""
    if direction == "clockwise":
        helix = max(marked) + 1 if marked else 0
        return helix + (x - helix) % k
    if direction == "anticlockwise":
        helix = max((-1 - v) % k for v in marked) + 1 if marked else 0
        return helix + (-helix - x) % k
    raise ValueError(f"unknown direction {direction!r}")


def dpillar_sp_path(src: Server, dst: Server, params: TopologyParams, direction: Direction = "clockwise") -> Route:
    """Helix phase fixes differing bits in one direction, ring phase finishes
    the trip to ``dst``'s column in the same direction."""
    validate_server(src, params)
    validate_server(dst, params)
    if src == dst:
        return Route([src])
    k = params.k
    marked = [(v - src.column) % k for v in range(k) if src.digits[v] != dst.digits[v]]
    x = (dst.column - src.column) % k
    length = sp_length_on_cycle(k, x, marked, direction)
    move = "c" if direction == "clockwise" else "a"
    return execute_moves(src, dst, move * length, params)


def route(src: Server, dst: Server, params: TopologyParams, alg: str = "min") -> Route:
    """Dispatch on the CLI algorithm tag (``min``, ``sp-cw``, ``sp-acw``, ``sp-best``)."""
    if alg == "min":
        if src == dst:
            raise IdenticalEndpointsError(f"identical endpoints {src}")
        return dpillar_min_path(src, dst, params)
    if alg == "sp-cw":
        return dpillar_sp_path(src, dst, params, "clockwise")
    if alg == "sp-acw":
        return dpillar_sp_path(src, dst, params, "anticlockwise")
    if alg == "sp-best":
        cw = dpillar_sp_path(src, dst, params, "clockwise")
        acw = dpillar_sp_path(src, dst, params, "anticlockwise")
        return cw if cw.length <= acw.length else acw
    raise ValueError(f"unknown algorithm {alg!r}")


def diameter(params: TopologyParams) -> int:
    k = params.k
    return k if k <= 3 else k + k // 2 - 2
