"""Routing reduced to a marked k-cycle.

A routing instance is canonicalised so the source sits at cycle node 0; the
destination column becomes node ``x`` and the bit positions that must be
rewritten become the marked set ``B``.  Moves act on the cycle as follows:

====  ==========  ==============
move  position    covers
====  ==========  ==============
c     v -> v+1    v
a     v -> v-1    v-1
b     v           v
d     v           v-1
====  ==========  ==============
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import DPillarError, IdenticalEndpointsError
from .topology import Server, TopologyParams, validate_server

MOVES = "abcd"
FORBIDDEN_PAIRS = frozenset({"ab", "ac", "bb", "bc", "ca", "cd", "da", "dd"})

_STEP = {"a": -1, "b": 0, "c": 1, "d": 0}
_COVER_OFFSET = {"a": -1, "b": 0, "c": 0, "d": -1}
_POWER_TOKEN = re.compile(r"([abcd])(\d*)")


@dataclass(frozen=True)
class MarkedCycle:
    k: int
    x: int
    marked: frozenset[int]

    def __post_init__(self) -> None:
        if self.k < 2:
            raise DPillarError(f"cycle length must be >= 2, got {self.k}")
        if not 0 <= self.x < self.k:
            raise DPillarError(f"destination node {self.x} outside [0, {self.k})")
        if any(not 0 <= v < self.k for v in self.marked):
            raise DPillarError(f"marked set {sorted(self.marked)} outside [0, {self.k})")
        if self.x == 0 and not self.marked:
            raise IdenticalEndpointsError("x = 0 with nothing marked means src = dst")

    @classmethod
    def of(cls, k: int, x: int, marked=()) -> "MarkedCycle":
        return cls(k, x, frozenset(marked))

    @property
    def mask(self) -> int:
        return sum(1 << v for v in self.marked)


def parse_moves(text: str) -> str:
    """Accept plain (``"ccbaaadc"``) or power (``"c2ba3dc1"``) notation."""
    text = text.strip().replace("^", "")
    pos, out = 0, []
    while pos < len(text):
        m = _POWER_TOKEN.match(text, pos)
        if m is None:
            raise DPillarError(f"cannot parse move string {text!r} at offset {pos}")
        out.append(m.group(1) * (int(m.group(2)) if m.group(2) else 1))
        pos = m.end()
    return "".join(out)


def compress_moves(moves: str) -> str:
    """Power notation, e.g. ``"ccbaaadc" -> "c2ba3dc"``."""
    parts = []
    for m in re.finditer(r"(a+|b+|c+|d+)", moves):
        run = m.group(0)
        parts.append(run[0] + (str(len(run)) if len(run) > 1 else ""))
    return "".join(parts)


def apply_moves(k: int, moves: str) -> tuple[int, frozenset[int]]:
    """Fold ``moves`` from node 0; return (final node, covered nodes)."""
    node, covered = 0, 0
    for m in moves:
        try:
            covered |= 1 << ((node + _COVER_OFFSET[m]) % k)
        except KeyError:
            raise DPillarError(f"unknown move {m!r}") from None
        node = (node + _STEP[m]) % k
    return node, frozenset(v for v in range(k) if covered >> v & 1)


def is_valid(cycle: MarkedCycle, moves: str) -> bool:
    if not moves:
        return False
    final, covered = apply_moves(cycle.k, moves)
    return final == cycle.x and cycle.marked <= covered


def count_turns(moves: str) -> int:
    """Occurrences of ``cba`` (a-turns) plus ``adc`` (c-turns)."""
    return sum(moves[i : i + 3] in ("cba", "adc") for i in range(len(moves) - 2))


def has_forbidden_pair(moves: str) -> bool:
    return any(moves[i : i + 2] in FORBIDDEN_PAIRS for i in range(len(moves) - 1))


def canonicalize(src: Server, dst: Server, params: TopologyParams) -> MarkedCycle:
    """Rotate columns and digit positions by ``-src.column`` and compare rows."""
    validate_server(src, params)
    validate_server(dst, params)
    if src == dst:
        raise IdenticalEndpointsError(f"identical endpoints {src}")
    k = params.k
    x = (dst.column - src.column) % k
    marked = frozenset(
        (i - src.column) % k for i in range(k) if dst.digits[i] != src.digits[i]
    )
    return MarkedCycle(k, x, marked)
