"""Brute-force ground truth: BFS on the server digraph and exhaustive
move-string search on marked cycles.  Nothing here calls the routing code
except ``verify_instance``, which compares the two."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import BudgetExceededError
from .marked_cycle import MarkedCycle
from .topology import Server, TopologyParams, origin, server_from_index, server_index, validate_server

DEFAULT_NODE_BUDGET = 10**6


@dataclass
class DistanceMap:
    params: TopologyParams
    source: Server
    dist: np.ndarray

    def __getitem__(self, server: Server) -> int:
        return int(self.dist[server_index(server, self.params)])

    @property
    def eccentricity(self) -> int:
        return int(self.dist.max())


def _expand(frontier: np.ndarray, params: TopologyParams) -> np.ndarray:
    """Indices of every neighbour of every node in ``frontier``."""
    k, h, rows = params.k, params.h, params.rows
    col, value = np.divmod(frontier, rows)
    out = []
    for step, offset in ((1, 0), (-1, -1), (0, 0), (0, -1)):  # c, a, b, d
        pos = (col + offset) % k
        weight = np.asarray(h, dtype=np.int64) ** pos
        cleared = value - ((value // weight) % h) * weight
        new_col = (col + step) % k
        for digit in range(h):
            out.append(new_col * rows + cleared + digit * weight)
    return np.concatenate(out)


def bfs_distances(src: Server, params: TopologyParams, node_budget: int = DEFAULT_NODE_BUDGET) -> DistanceMap:
    """Hop distances from ``src`` (edges come in opposite pairs, so this is
    plain undirected BFS).  Self-loops from b/d moves are harmless."""
    validate_server(src, params)
    if params.num_servers > node_budget:
        raise BudgetExceededError(f"{params.num_servers} servers exceeds the BFS node budget {node_budget}")
    dist = np.full(params.num_servers, -1, dtype=np.int64)
    start = server_index(src, params)
    dist[start] = 0
    frontier = np.array([start], dtype=np.int64)
    level = 0
    while frontier.size:
        level += 1
        nxt = np.unique(_expand(frontier, params))
        nxt = nxt[dist[nxt] < 0]
        dist[nxt] = level
        frontier = nxt
    return DistanceMap(params, src, dist)


def bfs_distances_reference(src: Server, params: TopologyParams) -> dict[Server, int]:
    """Slow dict-based BFS over :func:`topology.neighbors`, for cross-checking
    the vectorised version on tiny instances."""
    from collections import deque

    from .topology import neighbors

    dist = {src: 0}
    queue = deque([src])
    while queue:
        u = queue.popleft()
        for _, _, v in neighbors(u, params):
            if v not in dist:
                dist[v] = dist[u] + 1
                queue.append(v)
    return dist


@dataclass
class CycleOptimum:
    length: int
    strings: list[str]


def exhaustive_cycle_min(cycle: MarkedCycle, max_len: int | None = None) -> CycleOptimum:
    """Every minimum-length valid move string on ``cycle``.

    Strings are enumerated by increasing length.  Branches are cut only when
    the remaining budget cannot reach ``x`` or cannot cover the still
    uncovered marked nodes (each move covers at most one node), so no valid
    string of the current length is ever skipped.
    """
    k, x = cycle.k, cycle.x
    if k > 8:
        raise BudgetExceededError("exhaustive search is limited to k <= 8")
    max_len = 2 * k if max_len is None else max_len
    target = cycle.mask
    steps = {"a": (-1, -1), "b": (0, 0), "c": (1, 0), "d": (0, -1)}

    def ring_dist(v: int) -> int:
        d = (x - v) % k
        return min(d, k - d)

    for length in range(1, max_len + 1):
        found: list[str] = []

        def dfs(node: int, covered: int, prefix: list[str]) -> None:
            left = length - len(prefix)
            if left == 0:
                if node == x and covered & target == target:
                    found.append("".join(prefix))
                return
            if ring_dist(node) > left or bin(target & ~covered).count("1") > left:
                return
            for m, (step, off) in steps.items():
                prefix.append(m)
                dfs((node + step) % k, covered | 1 << ((node + off) % k), prefix)
                prefix.pop()

        dfs(0, 0, [])
        if found:
            return CycleOptimum(length, found)
    raise BudgetExceededError(f"no valid move string of length <= {max_len} on {cycle}")


def all_cycles(k: int):
    """Every canonical marked cycle of length ``k``."""
    for x in range(k):
        for mask in range(1 << k):
            if x == 0 and mask == 0:
                continue
            yield MarkedCycle(k, x, frozenset(v for v in range(k) if mask >> v & 1))


@dataclass
class VerifyReport:
    params: TopologyParams
    sources: int = 0
    pairs: int = 0
    eccentricity: int | None = None
    diameter: int | None = None
    min_mismatches: list[dict] = field(default_factory=list)
    diameter_mismatch: bool = False
    sp_violations: list[dict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not (self.min_mismatches or self.diameter_mismatch or self.sp_violations)

    def to_dict(self) -> dict:
        return {
            "n": self.params.n,
            "k": self.params.k,
            "sources": self.sources,
            "pairs": self.pairs,
            "eccentricity": self.eccentricity,
            "diameter": self.diameter,
            "passed": self.passed,
            "min_mismatches": self.min_mismatches[:20],
            "diameter_mismatch": self.diameter_mismatch,
            "sp_violations": self.sp_violations[:20],
        }


def verify_instance(params: TopologyParams, all_sources: bool = False, node_budget: int = DEFAULT_NODE_BUDGET) -> VerifyReport:
    """Compare DPillarMin and DPillarSP against BFS from one or every source."""
    from .routing import diameter, dpillar_min_path, dpillar_sp_path

    report = VerifyReport(params, diameter=diameter(params))
    sources = (server_from_index(i, params) for i in range(params.num_servers)) if all_sources else [origin(params)]
    limit = 2 * params.k - 1
    ecc = 0
    for src in sources:
        dm = bfs_distances(src, params, node_budget)
        ecc = max(ecc, dm.eccentricity)
        report.sources += 1
        for idx in range(params.num_servers):
            dst = server_from_index(idx, params)
            if dst == src:
                continue
            report.pairs += 1
            got = dpillar_min_path(src, dst, params).length
            want = int(dm.dist[idx])
            if got != want:
                report.min_mismatches.append({"src": str(src), "dst": str(dst), "min": got, "bfs": want})
            for direction in ("clockwise", "anticlockwise"):
                sp = dpillar_sp_path(src, dst, params, direction).length
                if sp > limit or sp < want:
                    report.sp_violations.append({"src": str(src), "dst": str(dst), "direction": direction, "sp": sp})
    report.eccentricity = ecc
    report.diameter_mismatch = ecc != report.diameter
    return report
