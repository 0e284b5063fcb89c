"""DPillar(n, k) construction: servers, switches and the four edge kinds.

Servers are ``(column, digits)`` pairs where ``digits[i]`` is the row digit at
bit position ``i`` (so the printed row ``v_{k-1} ... v_0`` is ``digits``
reversed).  Nothing is materialised: every query is O(k) arithmetic on the
coordinates.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterator

from .errors import DegenerateMoveError, InvalidParamsError, InvalidServerError


@dataclass(frozen=True)
class TopologyParams:
    n: int
    k: int

    def __post_init__(self) -> None:
        if isinstance(self.n, bool) or not isinstance(self.n, int) or self.n < 2 or self.n % 2:
            raise InvalidParamsError(f"n must be an even integer >= 2, got {self.n!r}")
        if isinstance(self.k, bool) or not isinstance(self.k, int) or self.k < 2:
            raise InvalidParamsError(f"k must be an integer >= 2, got {self.k!r}")

    @property
    def h(self) -> int:
        """Digit radix n/2."""
        return self.n // 2

    @property
    def rows(self) -> int:
        return self.h**self.k

    @property
    def num_servers(self) -> int:
        return self.k * self.h**self.k

    @property
    def num_switches(self) -> int:
        return self.k * self.h ** (self.k - 1)

    @property
    def degree(self) -> int:
        """Out-degree of the digraph abstraction (counting parallel edges)."""
        return 2 * self.n - 2


def _format_digits(digits_msb_first) -> str:
    return ".".join(str(d) for d in digits_msb_first)


def _parse_digits(text: str, radix: int | None) -> tuple[int, ...]:
    if "." in text:
        parts = text.split(".")
    elif radix is None or radix <= 10:
        parts = list(text)
    else:
        raise InvalidServerError(f"row {text!r} must be dot-separated when digits may exceed 9")
    try:
        return tuple(int(p) for p in parts)
    except ValueError:
        raise InvalidServerError(f"malformed row {text!r}") from None


@dataclass(frozen=True, order=True)
class Server:
    column: int
    digits: tuple[int, ...]

    @classmethod
    def parse(cls, text: str, params: TopologyParams | None = None) -> "Server":
        """Parse ``"c:d_{k-1}.....d_0"``; the compact ``"c:d..d"`` form is
        accepted when every digit is a single decimal character."""
        col, sep, row = text.strip().partition(":")
        if not sep:
            raise InvalidServerError(f"server {text!r} is missing the ':' separator")
        try:
            column = int(col)
        except ValueError:
            raise InvalidServerError(f"malformed column in {text!r}") from None
        msb_first = _parse_digits(row, params.h if params else None)
        server = cls(column, tuple(reversed(msb_first)))
        if params is not None:
            validate_server(server, params)
        return server

    @property
    def row(self) -> tuple[int, ...]:
        """Row digits in printed order ``v_{k-1} ... v_0``."""
        return tuple(reversed(self.digits))

    def __str__(self) -> str:
        return f"{self.column}:{_format_digits(self.row)}"


@dataclass(frozen=True, order=True)
class Switch:
    column: int
    # name[j] is the j-th least significant of the k-1 name digits
    name: tuple[int, ...]

    def __str__(self) -> str:
        return f"{self.column}:{_format_digits(reversed(self.name))}"


class EdgeKind(str, enum.Enum):
    CLOCKWISE = "c"
    ANTICLOCKWISE = "a"
    BASIC_STATIC = "b"
    DECREMENTED_STATIC = "d"

    @property
    def inverse(self) -> "EdgeKind":
        return _INVERSE[self]

    @property
    def column_step(self) -> int:
        return _STEP[self]


_INVERSE = {
    EdgeKind.CLOCKWISE: EdgeKind.ANTICLOCKWISE,
    EdgeKind.ANTICLOCKWISE: EdgeKind.CLOCKWISE,
    EdgeKind.BASIC_STATIC: EdgeKind.BASIC_STATIC,
    EdgeKind.DECREMENTED_STATIC: EdgeKind.DECREMENTED_STATIC,
}
_STEP = {
    EdgeKind.CLOCKWISE: 1,
    EdgeKind.ANTICLOCKWISE: -1,
    EdgeKind.BASIC_STATIC: 0,
    EdgeKind.DECREMENTED_STATIC: 0,
}


def validate_server(server: Server, params: TopologyParams) -> None:
    if not 0 <= server.column < params.k:
        raise InvalidServerError(f"column {server.column} outside [0, {params.k})")
    if len(server.digits) != params.k:
        raise InvalidServerError(f"row of {server} has {len(server.digits)} digits, expected {params.k}")
    if any(not 0 <= d < params.h for d in server.digits):
        raise InvalidServerError(f"row digits of {server} must lie in [0, {params.h})")


def covered_position(column: int, kind: EdgeKind, k: int) -> int:
    """Bit position an edge of ``kind`` leaving ``column`` may rewrite."""
    if kind in (EdgeKind.CLOCKWISE, EdgeKind.BASIC_STATIC):
        return column
    return (column - 1) % k


def _delete(digits: tuple[int, ...], pos: int) -> tuple[int, ...]:
    return digits[:pos] + digits[pos + 1 :]


def adjacent_switches(server: Server, params: TopologyParams) -> tuple[Switch, Switch]:
    """Return the (right, left) switches of ``server``.

    The right switch sits in the server's own column and the left one in the
    column before it; each switch name is the row with one digit removed.
    """
    validate_server(server, params)
    c, k = server.column, params.k
    right = Switch(c, _delete(server.digits, c))
    left_col = (c - 1) % k
    left = Switch(left_col, _delete(server.digits, left_col))
    return right, left


def switch_servers(switch: Switch, params: TopologyParams) -> list[Server]:
    """All n servers attached to ``switch``: h in its column, h in the next."""
    c = switch.column
    out = []
    for col in (c, (c + 1) % params.k):
        for v in range(params.h):
            digits = switch.name[:c] + (v,) + switch.name[c:]
            out.append(Server(col, digits))
    return out


def edge_switch(server: Server, kind: EdgeKind, params: TopologyParams) -> Switch:
    """Switch traversed by an edge of ``kind`` leaving ``server``."""
    right, left = adjacent_switches(server, params)
    return right if kind in (EdgeKind.CLOCKWISE, EdgeKind.BASIC_STATIC) else left


def neighbor(server: Server, kind: EdgeKind | str, digit: int, params: TopologyParams) -> Server:
    kind = EdgeKind(kind)
    validate_server(server, params)
    if not 0 <= digit < params.h:
        raise InvalidServerError(f"digit {digit} outside [0, {params.h})")
    pos = covered_position(server.column, kind, params.k)
    if kind in (EdgeKind.BASIC_STATIC, EdgeKind.DECREMENTED_STATIC) and server.digits[pos] == digit:
        raise DegenerateMoveError(f"{kind.value}-edge from {server} with digit {digit} is a self-loop")
    digits = list(server.digits)
    digits[pos] = digit
    return Server((server.column + kind.column_step) % params.k, tuple(digits))


def neighbors(server: Server, params: TopologyParams) -> Iterator[tuple[EdgeKind, int, Server]]:
    """Every legal (kind, digit, target) out of ``server``."""
    pos_by_kind = {kind: covered_position(server.column, kind, params.k) for kind in EdgeKind}
    for kind in EdgeKind:
        for digit in range(params.h):
            if kind in (EdgeKind.BASIC_STATIC, EdgeKind.DECREMENTED_STATIC):
                if server.digits[pos_by_kind[kind]] == digit:
                    continue
            yield kind, digit, neighbor(server, kind, digit, params)


def enumerate_servers(params: TopologyParams) -> Iterator[Server]:
    """Servers in index order (see :func:`server_index`)."""
    for index in range(params.num_servers):
        yield server_from_index(index, params)


def count_links(params: TopologyParams) -> int:
    """Number of server->switch links (two NIC ports per server)."""
    return 2 * params.num_servers


def server_index(server: Server, params: TopologyParams) -> int:
    """Mixed-radix index ``column * h**k + sum(v_i * h**i)``."""
    value = 0
    for d in reversed(server.digits):
        value = value * params.h + d
    return server.column * params.rows + value


def server_from_index(index: int, params: TopologyParams) -> Server:
    if not 0 <= index < params.num_servers:
        raise InvalidServerError(f"index {index} outside [0, {params.num_servers})")
    column, value = divmod(index, params.rows)
    digits = []
    for _ in range(params.k):
        value, d = divmod(value, params.h)
        digits.append(d)
    return Server(column, tuple(digits))


def origin(params: TopologyParams) -> Server:
    return Server(0, (0,) * params.k)


def summary(params: TopologyParams) -> dict:
    return {
        "n": params.n,
        "k": params.k,
        "servers": params.num_servers,
        "switches": params.num_switches,
        "links": count_links(params),
    }
