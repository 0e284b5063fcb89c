"""The group behind DPillar and the translations it induces.

A group element is a rotation ``i`` plus exponents ``p_0 ... p_{k-1}`` (read
as the word ``t_i^{p_i} t_{i+1}^{p_{i+1}} ... t_{i-1}^{p_{i-1}}``).  Right
multiplication by the four generator families moves along the four edge
kinds, and ``phi`` sends ``(i, p)`` to server ``(i, p_{k-1} ... p_0)``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable, Iterator

from .topology import EdgeKind, Server, TopologyParams, covered_position, enumerate_servers, neighbor, neighbors

FAMILIES = ("a", "b", "c", "d")


@dataclass(frozen=True, order=True)
class GroupElement:
    rotation: int
    exponents: tuple[int, ...]


@dataclass(frozen=True)
class Generator:
    family: str
    q: int

    @property
    def kind(self) -> EdgeKind:
        return EdgeKind(self.family)


def identity(params: TopologyParams) -> GroupElement:
    return GroupElement(0, (0,) * params.k)


def elements(params: TopologyParams) -> Iterator[GroupElement]:
    for server in enumerate_servers(params):
        yield phi_inverse(server)


def multiply(g: GroupElement, s: Generator, params: TopologyParams) -> GroupElement:
    """Right-multiply ``g`` by the generator ``s``."""
    k, h = params.k, params.h
    i = g.rotation
    p = list(g.exponents)
    if s.family == "a":
        p[(i - 1) % k] = (p[(i - 1) % k] + s.q) % h
        i = (i - 1) % k
    elif s.family == "b":
        p[i] = (p[i] + s.q) % h
    elif s.family == "c":
        p[i] = (p[i] + s.q) % h
        i = (i + 1) % k
    elif s.family == "d":
        p[(i - 1) % k] = (p[(i - 1) % k] + s.q) % h
    else:
        raise ValueError(f"unknown generator family {s.family!r}")
    return GroupElement(i, tuple(p))


def generators(params: TopologyParams) -> list[Generator]:
    """The generating set: every family/exponent except the identity (b^0, d^0)."""
    return [Generator(f, q) for f in FAMILIES for q in range(params.h) if not (f in "bd" and q == 0)]


def generator_inverse(s: Generator, params: TopologyParams) -> Generator:
    h = params.h
    if s.family in "bd":
        return Generator(s.family, (-s.q) % h)
    # a^q undoes to c^{-q} and vice versa
    return Generator("c" if s.family == "a" else "a", (-s.q) % h)


def word(g: GroupElement, params: TopologyParams) -> list[Generator]:
    """A generator word spelling ``g`` from the identity: k c-moves set each
    exponent in turn, then ``rotation`` plain c-moves."""
    return [Generator("c", q) for q in g.exponents] + [Generator("c", 0)] * g.rotation


def compose(g: GroupElement, other: GroupElement, params: TopologyParams) -> GroupElement:
    """``g o other``, multiplying ``g`` on the right by a word for ``other``."""
    for s in word(other, params):
        g = multiply(g, s, params)
    return g


def compose_closed(g: GroupElement, other: GroupElement, params: TopologyParams) -> GroupElement:
    """Closed form of :func:`compose`: rotations add and ``other``'s exponents
    are shifted by ``g.rotation`` before adding."""
    k, h = params.k, params.h
    i = g.rotation
    exps = tuple((g.exponents[m] + other.exponents[(m - i) % k]) % h for m in range(k))
    return GroupElement((i + other.rotation) % k, exps)


def inverse(g: GroupElement, params: TopologyParams) -> GroupElement:
    k, h = params.k, params.h
    i = g.rotation
    return GroupElement((-i) % k, tuple((-g.exponents[(m + i) % k]) % h for m in range(k)))


def phi(g: GroupElement) -> Server:
    return Server(g.rotation, g.exponents)


def phi_inverse(server: Server) -> GroupElement:
    return GroupElement(server.column, server.digits)


def generator_edge(g: GroupElement, s: Generator, params: TopologyParams) -> tuple[EdgeKind, int]:
    """The (kind, digit) pair of the digraph edge that ``s`` should describe at ``g``."""
    pos = covered_position(g.rotation, s.kind, params.k)
    return s.kind, (g.exponents[pos] + s.q) % params.h


@dataclass
class CayleyReport:
    params: TopologyParams
    generator_count: int = 0
    distinct_generators: int = 0
    checked_edges: int = 0
    counterexamples: list[dict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.counterexamples

    def to_dict(self) -> dict:
        return {
            "n": self.params.n,
            "k": self.params.k,
            "passed": self.passed,
            "generators": self.generator_count,
            "distinct_generators": self.distinct_generators,
            "checked_edges": self.checked_edges,
            "counterexamples": self.counterexamples[:20],
        }


def check_cayley(params: TopologyParams) -> CayleyReport:
    """Check that phi carries the Cayley graph onto the server digraph.

    For every element and generator the product must land on the edge of
    the generator's kind, and the products from each element must reach
    exactly the digraph neighbours of its image.
    """
    gens = generators(params)
    report = CayleyReport(params, len(gens))
    e = identity(params)
    report.distinct_generators = len({multiply(e, s, params) for s in gens})
    for g in elements(params):
        u = phi(g)
        reached = set()
        for s in gens:
            v = phi(multiply(g, s, params))
            reached.add(v)
            kind, digit = generator_edge(g, s, params)
            try:
                expected = neighbor(u, kind, digit, params)
            except ValueError as exc:
                report.counterexamples.append({"element": str(u), "generator": f"{s.family}{s.q}", "error": str(exc)})
                continue
            report.checked_edges += 1
            if v != expected:
                report.counterexamples.append(
                    {"element": str(u), "generator": f"{s.family}{s.q}", "product": str(v), "edge_target": str(expected)}
                )
        adjacent = {v for _, _, v in neighbors(u, params)}
        if reached != adjacent:
            report.counterexamples.append(
                {
                    "element": str(u),
                    "missing_edges": sorted(map(str, adjacent - reached)),
                    "extra_products": sorted(map(str, reached - adjacent)),
                }
            )
    return report


def automorphism(src: Server, params: TopologyParams) -> Callable[[Server], Server]:
    """Left translation by ``src``'s inverse; sends ``src`` to the origin."""
    g_inv = inverse(phi_inverse(src), params)

    def psi(u: Server) -> Server:
        return phi(compose_closed(g_inv, phi_inverse(u), params))

    return psi


def translation(src: Server, params: TopologyParams) -> Callable[[Server], Server]:
    """Inverse of :func:`automorphism`: sends the origin to ``src``."""
    g = phi_inverse(src)

    def tau(u: Server) -> Server:
        return phi(compose_closed(g, phi_inverse(u), params))

    return tau


def random_element(params: TopologyParams, rng: random.Random) -> GroupElement:
    return GroupElement(rng.randrange(params.k), tuple(rng.randrange(params.h) for _ in range(params.k)))


def check_group_laws(params: TopologyParams, samples: int, rng: random.Random) -> list[str]:
    """Associativity, identity and inverses on ``samples`` random triples.

    Products go through :func:`compose` (generator words), which is checked
    against :func:`compose_closed` on the way.  Returns failure descriptions.
    """
    failures = []
    e = identity(params)
    gens = generators(params)
    for _ in range(samples):
        a, b, c = (random_element(params, rng) for _ in range(3))
        ab = compose(a, b, params)
        if ab != compose_closed(a, b, params):
            failures.append(f"word and closed products differ for {a} o {b}")
        if compose(ab, c, params) != compose(a, compose(b, c, params), params):
            failures.append(f"associativity fails for {a}, {b}, {c}")
        if compose(e, a, params) != a or compose(a, e, params) != a:
            failures.append(f"identity law fails for {a}")
        if compose(a, inverse(a, params), params) != e or compose(inverse(a, params), a, params) != e:
            failures.append(f"inverse law fails for {a}")
        s = rng.choice(gens)
        if multiply(multiply(a, s, params), generator_inverse(s, params), params) != a:
            failures.append(f"generator {s} has no inverse in the generating set at {a}")
    return failures


def check_distance_preservation(params: TopologyParams, samples: int, rng: random.Random) -> list[str]:
    """BFS distance src->dst must equal origin->automorphism(src)(dst)."""
    from .oracle import bfs_distances
    from .topology import origin

    failures = []
    from_origin = bfs_distances(origin(params), params)
    cache = {}
    for _ in range(samples):
        src = phi(random_element(params, rng))
        dst = phi(random_element(params, rng))
        if src not in cache:
            cache[src] = bfs_distances(src, params)
        image = automorphism(src, params)(dst)
        if cache[src][dst] != from_origin[image]:
            failures.append(f"d({src}, {dst}) = {cache[src][dst]} but d(origin, {image}) = {from_origin[image]}")
    return failures
