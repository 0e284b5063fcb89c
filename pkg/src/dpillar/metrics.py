"""Path-length surveys, all-to-all link loads / ABT, and the latency model.

Surveys fix the source at the origin (the network is node-symmetric).  With
the source fixed, a destination's route depends only on its column ``x`` and
the set ``B`` of differing row positions, and exactly ``(h-1)**|B|``
destinations share each ``(x, B)``.  The default survey therefore walks the
``k * 2**k`` classes with weights; ``method="enumerate"`` walks every
destination instead and is kept for cross-checking.
"""

from __future__ import annotations

import math
import os
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import BudgetExceededError
from .marked_cycle import MarkedCycle, canonicalize
from .routing import Route, dpillar_min_length, route, select_candidate, sp_length_on_cycle
from .topology import TopologyParams, origin, server_from_index, server_index

ALGORITHMS = ("min", "sp-cw", "sp-acw", "sp-best")
DEFAULT_FLOW_BUDGET = 3 * 10**8
DEFAULT_DESTINATION_BUDGET = 2 * 10**6

# link slot = port * 2 + direction; port 0 is the right switch, 1 the left;
# direction 0 is server->switch, 1 is switch->server
OUT_RIGHT, IN_RIGHT, OUT_LEFT, IN_LEFT = 0, 1, 2, 3
# (slot used at the hop's source server, slot used at its target server)
MOVE_SLOTS = {
    "c": (OUT_RIGHT, IN_LEFT),
    "a": (OUT_LEFT, IN_RIGHT),
    "b": (OUT_RIGHT, IN_RIGHT),
    "d": (OUT_LEFT, IN_LEFT),
}


def default_workers() -> int:
    try:
        return max(1, int(os.environ.get("DPILLAR_WORKERS", "1")))
    except ValueError:
        return 1


def _check_alg(alg: str) -> None:
    if alg not in ALGORITHMS:
        raise ValueError(f"unknown algorithm {alg!r}; expected one of {ALGORITHMS}")


def class_length(k: int, x: int, marked: frozenset[int], alg: str) -> int:
    """Route length from the origin to any destination of class ``(x, marked)``."""
    if x == 0 and not marked:
        return 0
    if alg == "min":
        return dpillar_min_length(MarkedCycle(k, x, marked))
    if alg == "sp-cw":
        return sp_length_on_cycle(k, x, marked, "clockwise")
    if alg == "sp-acw":
        return sp_length_on_cycle(k, x, marked, "anticlockwise")
    if alg == "sp-best":
        return min(sp_length_on_cycle(k, x, marked, d) for d in ("clockwise", "anticlockwise"))
    raise ValueError(f"unknown algorithm {alg!r}")


def destination_classes(params: TopologyParams):
    """Yield ``(x, marked, weight)`` covering every destination exactly once."""
    k, h = params.k, params.h
    for x in range(k):
        for mask in range(1 << k):
            marked = frozenset(v for v in range(k) if mask >> v & 1)
            yield x, marked, (h - 1) ** len(marked)


@dataclass
class SurveyReport:
    n: int
    k: int
    alg: str
    destinations: int
    histogram: dict[int, int]
    total_length: int
    nonminimal: int

    @property
    def mean(self) -> float:
        return self.total_length / self.destinations

    @property
    def mean_exact(self) -> Fraction:
        return Fraction(self.total_length, self.destinations)

    @property
    def nonminimal_fraction(self) -> float:
        return self.nonminimal / self.destinations

    @property
    def max_length(self) -> int:
        return max(self.histogram)

    def cumulative(self) -> list[float]:
        """Cumulative percentage of destinations with length <= L, L = 0..max."""
        out, running = [], 0
        for length in range(self.max_length + 1):
            running += self.histogram.get(length, 0)
            out.append(100.0 * running / self.destinations)
        return out

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "alg": self.alg,
            "destinations": self.destinations,
            "mean": self.mean,
            "mean_display": round(self.mean, 2),
            "histogram": {str(k): v for k, v in sorted(self.histogram.items())},
            "cumulative_pct": [round(c, 1) for c in self.cumulative()],
            "nonminimal_fraction": self.nonminimal_fraction,
        }


def path_length_survey(
    params: TopologyParams,
    alg: str = "min",
    method: str = "classes",
    destination_budget: int = DEFAULT_DESTINATION_BUDGET,
) -> SurveyReport:
    """Route from the origin to every server (itself included, at length 0)."""
    _check_alg(alg)
    k = params.k
    hist: Counter[int] = Counter()
    total = nonmin = 0
    if method == "classes":
        for x, marked, weight in destination_classes(params):
            length = class_length(k, x, marked, alg)
            hist[length] += weight
            total += weight * length
            if alg != "min" and length > class_length(k, x, marked, "min"):
                nonmin += weight
    elif method == "enumerate":
        if params.num_servers > destination_budget:
            raise BudgetExceededError(
                f"{params.num_servers} destinations exceeds the budget {destination_budget}; use method='classes'"
            )
        src = origin(params)
        for idx in range(params.num_servers):
            dst = server_from_index(idx, params)
            length = 0 if dst == src else route(src, dst, params, alg).length
            hist[length] += 1
            total += length
            if alg != "min" and dst != src and length > dpillar_min_length(canonicalize(src, dst, params)):
                nonmin += 1
    else:
        raise ValueError(f"unknown survey method {method!r}")
    return SurveyReport(params.n, params.k, alg, params.num_servers, dict(hist), total, nonmin)


# --------------------------------------------------------------------------
# link loads and aggregate bottleneck throughput


def route_link_ids(r: Route, params: TopologyParams) -> list[int]:
    """Directed server-switch link ids used by ``r`` (two per hop)."""
    ids = []
    for u, v, m in zip(r.servers, r.servers[1:], r.moves):
        out_slot, in_slot = MOVE_SLOTS[m]
        ids.append(4 * server_index(u, params) + out_slot)
        ids.append(4 * server_index(v, params) + in_slot)
    return ids


@dataclass
class LinkLoadMap:
    params: TopologyParams
    loads: np.ndarray  # shape (4 * N,), indexed by 4 * server_index + slot
    flows: int
    total_hops: int

    @property
    def max_load(self) -> int:
        return int(self.loads.max())

    @property
    def total_load(self) -> int:
        return int(self.loads.sum())

    def by_slot(self) -> np.ndarray:
        return self.loads.reshape(-1, 4)


@dataclass
class AbtReport:
    n: int
    k: int
    alg: str
    servers: int
    flows: int
    max_load: int
    method: str
    slot_max: list[int] = field(default_factory=list)

    @property
    def abt(self) -> float:
        return self.flows / self.max_load

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "alg": self.alg,
            "servers": self.servers,
            "flows": self.flows,
            "max_load": self.max_load,
            "abt": self.abt,
            "method": self.method,
            "slot_max": self.slot_max,
        }


def _server_coordinates(params: TopologyParams) -> tuple[np.ndarray, np.ndarray]:
    idx = np.arange(params.num_servers, dtype=np.int64)
    cols, values = np.divmod(idx, params.rows)
    powers = params.h ** np.arange(params.k, dtype=np.int64)
    digits = (values[:, None] // powers[None, :]) % params.h
    return cols, digits


def _translate(s_col: int, s_dig: np.ndarray, cols: np.ndarray, digits: np.ndarray, params: TopologyParams) -> np.ndarray:
    """Indices of the images of the given servers under the translation
    sending the origin to server ``(s_col, s_dig)`` (see :func:`symmetry.translation`)."""
    k, h = params.k, params.h
    shifted = digits[:, (np.arange(k) - s_col) % k]
    new_digits = (s_dig[None, :] + shifted) % h
    powers = h ** np.arange(k, dtype=np.int64)
    return ((cols + s_col) % k) * params.rows + new_digits @ powers


def origin_route_links(params: TopologyParams, alg: str) -> tuple[np.ndarray, np.ndarray, int]:
    """Link usage of every route leaving the origin, as (server index, slot)
    arrays, plus the total hop count."""
    src = origin(params)
    servers, slots = [], []
    hops = 0
    for idx in range(1, params.num_servers):
        dst = server_from_index(idx, params)
        r = route(src, dst, params, alg)
        hops += r.length
        for u, v, m in zip(r.servers, r.servers[1:], r.moves):
            out_slot, in_slot = MOVE_SLOTS[m]
            servers += [server_index(u, params), server_index(v, params)]
            slots += [out_slot, in_slot]
    return np.asarray(servers, dtype=np.int64), np.asarray(slots, dtype=np.int64), hops


def _accumulate_shard(args) -> np.ndarray:
    params, link_servers, link_slots, sources, chunk = args
    cols, digits = _server_coordinates(params)
    l_cols, l_digits = cols[link_servers], digits[link_servers]
    loads = np.zeros(4 * params.num_servers, dtype=np.int64)
    for start in range(0, len(sources), chunk):
        batch = [
            4 * _translate(int(cols[s]), digits[s], l_cols, l_digits, params) + link_slots
            for s in sources[start : start + chunk]
        ]
        loads += np.bincount(np.concatenate(batch), minlength=loads.size)
    return loads


def link_loads(
    params: TopologyParams,
    alg: str = "min",
    method: str = "translate",
    workers: int | None = None,
    flow_budget: int = DEFAULT_FLOW_BUDGET,
) -> LinkLoadMap:
    """All-to-all (N(N-1) flows) load on every directed server-switch link.

    ``translate`` routes every flow leaving the origin once and obtains the
    flows of source ``s`` by applying the translation taking the origin to
    ``s``; this is exactly how a route from ``s`` is produced (canonicalise,
    then replay moves), just vectorised.  ``direct`` calls the router for
    every ordered pair and is only practical for small instances.  Sources
    are sharded across ``workers`` processes and merged by addition.
    """
    _check_alg(alg)
    n_servers = params.num_servers
    flows = n_servers * (n_servers - 1)
    if flows > flow_budget:
        raise BudgetExceededError(
            f"{flows} flows exceeds the flow budget {flow_budget}; choose a smaller instance or raise --flow-budget"
        )
    if method == "direct":
        loads = np.zeros(4 * n_servers, dtype=np.int64)
        hops = 0
        for si in range(n_servers):
            src = server_from_index(si, params)
            for di in range(n_servers):
                if si == di:
                    continue
                r = route(src, server_from_index(di, params), params, alg)
                hops += r.length
                np.add.at(loads, route_link_ids(r, params), 1)
        return LinkLoadMap(params, loads, flows, hops)
    if method != "translate":
        raise ValueError(f"unknown link-load method {method!r}")

    link_servers, link_slots, origin_hops = origin_route_links(params, alg)
    workers = workers or default_workers()
    chunk = max(1, min(256, 4_000_000 // max(1, link_servers.size)))
    sources = np.arange(n_servers, dtype=np.int64)
    shards = [s for s in np.array_split(sources, workers) if s.size]
    jobs = [(params, link_servers, link_slots, shard, chunk) for shard in shards]
    if len(jobs) == 1:
        parts = [_accumulate_shard(jobs[0])]
    else:
        with ProcessPoolExecutor(max_workers=len(jobs)) as pool:
            parts = list(pool.map(_accumulate_shard, jobs))
    loads = np.zeros(4 * n_servers, dtype=np.int64)
    for part in parts:
        loads += part
    return LinkLoadMap(params, loads, flows, origin_hops * n_servers)


def orbit_slot_loads(params: TopologyParams, alg: str = "min") -> list[int]:
    """Per-link load for each of the four link slots, from move counts alone.

    Translations act transitively on servers and preserve routes, so every
    link in a slot class carries the same load: the number of uses of that
    slot summed over routes leaving the origin.
    """
    _check_alg(alg)
    k = params.k
    totals = [0, 0, 0, 0]
    for x, marked, weight in destination_classes(params):
        if x == 0 and not marked:
            continue
        moves = _class_moves(k, x, marked, alg)
        for m in moves:
            out_slot, in_slot = MOVE_SLOTS[m]
            totals[out_slot] += weight
            totals[in_slot] += weight
    return totals


def _class_moves(k: int, x: int, marked: frozenset[int], alg: str) -> str:
    if alg == "min":
        return select_candidate(MarkedCycle(k, x, marked)).moves
    cw = sp_length_on_cycle(k, x, marked, "clockwise")
    acw = sp_length_on_cycle(k, x, marked, "anticlockwise")
    if alg == "sp-cw" or (alg == "sp-best" and cw <= acw):
        return "c" * cw
    return "a" * acw


def abt(
    params: TopologyParams,
    alg: str = "min",
    method: str = "translate",
    workers: int | None = None,
    flow_budget: int = DEFAULT_FLOW_BUDGET,
) -> AbtReport:
    """Aggregate bottleneck throughput: flows / load on the busiest directed link."""
    n_servers = params.num_servers
    if method == "orbit":
        slot_loads = orbit_slot_loads(params, alg)
        return AbtReport(params.n, params.k, alg, n_servers, n_servers * (n_servers - 1), max(slot_loads), method, slot_loads)
    lm = link_loads(params, alg, method, workers, flow_budget)
    slot_max = [int(v) for v in lm.by_slot().max(axis=0)]
    return AbtReport(params.n, params.k, alg, n_servers, lm.flows, lm.max_load, method, slot_max)


# --------------------------------------------------------------------------
# latency model

# 38 us measured for a 1472-byte frame on 1-Gbit Ethernet
DERIVED_NS_PER_BYTE = 38_000 / 1472
STANDARD_FRAME = 1472
JUMBO_FRAME = 9000

# average routing latency in microseconds, measured per instance
ROUTING_LATENCY_US = {
    (16, 4): {"min": 5.964, "sp": 1.349},
    (32, 3): {"min": 3.325, "sp": 0.960},
    (48, 3): {"min": 3.328, "sp": 0.859},
}


@dataclass(frozen=True)
class LatencyParams:
    stack_us: float = 10.0
    propagation_us: float = 22.0
    ns_per_byte: float = DERIVED_NS_PER_BYTE
    frame_bytes: int = STANDARD_FRAME
    routing_us: float = 0.0
    bandwidth_scale: float = 1.0

    def __post_init__(self) -> None:
        for name in ("stack_us", "propagation_us", "ns_per_byte", "frame_bytes", "routing_us"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be nonnegative")
        if self.bandwidth_scale <= 0:
            raise ValueError("bandwidth_scale must be positive")


PRESETS = {
    "1g-std": {"frame_bytes": STANDARD_FRAME, "bandwidth_scale": 1.0},
    "1g-jumbo": {"frame_bytes": JUMBO_FRAME, "bandwidth_scale": 1.0},
    "10g-std": {"frame_bytes": STANDARD_FRAME, "bandwidth_scale": 10.0},
    "10g-jumbo": {"frame_bytes": JUMBO_FRAME, "bandwidth_scale": 10.0},
}


def preset(name: str, routing_us: float) -> LatencyParams:
    try:
        return LatencyParams(routing_us=routing_us, **PRESETS[name])
    except KeyError:
        raise ValueError(f"unknown latency preset {name!r}; expected one of {sorted(PRESETS)}") from None


@dataclass(frozen=True)
class LatencyReport:
    transfer_us: float
    per_hop_us: float
    total_us: float
    mean_hops: float

    def to_dict(self) -> dict:
        return {
            "L_d": self.transfer_us,
            "L_hop": self.per_hop_us,
            "L_total": self.total_us,
            "dbar": self.mean_hops,
        }


def latency(lp: LatencyParams, mean_hops: float) -> LatencyReport:
    if mean_hops < 0 or math.isnan(mean_hops):
        raise ValueError("mean path length must be nonnegative")
    transfer = lp.ns_per_byte * lp.frame_bytes / lp.bandwidth_scale / 1000.0
    per_hop = lp.stack_us + lp.propagation_us + transfer + lp.routing_us
    return LatencyReport(transfer, per_hop, per_hop * mean_hops, mean_hops)
