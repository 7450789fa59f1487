"""Bundled named graphs and a random generator for test suites."""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations

from .graph import BoundaryGraph


def complete(n: int, boundary=()) -> BoundaryGraph:
    verts = list(range(1, n + 1))
    return BoundaryGraph.build(verts, list(combinations(verts, 2)), boundary)


def cycle(n: int, boundary=()) -> BoundaryGraph:
    verts = list(range(1, n + 1))
    edges = [(verts[i], verts[(i + 1) % n]) for i in range(n)]
    return BoundaryGraph.build(verts, edges, boundary)


def path(n: int, boundary=()) -> BoundaryGraph:
    verts = list(range(1, n + 1))
    return BoundaryGraph.build(verts, [(verts[i], verts[i + 1]) for i in range(n - 1)], boundary)


def triangle_with_pendant(boundary=(4,)) -> BoundaryGraph:
    """Triangle 1-2-3 with a pendant edge 1-4; boundary {4} by default."""
    return BoundaryGraph.build([1, 2, 3, 4], [(1, 2), (1, 3), (2, 3), (1, 4)], boundary)


_NAMED = {
    "K3": lambda b: complete(3, b),
    "K4": lambda b: complete(4, b),
    "C4": lambda b: cycle(4, b),
    "C5": lambda b: cycle(5, b),
    "P2": lambda b: path(2, b),
    "C3+P2": lambda b: triangle_with_pendant(b),
}

_DEFAULT_BOUNDARY = {"P2": (2,), "C3+P2": (4,)}


def named_graph(name: str, boundary=None) -> BoundaryGraph:
    """One of K3, K4, C4, C5, P2, C3+P2 (vertices 1..n, unit weights, zero potential)."""
    key = name.upper()
    if key not in _NAMED:
        raise KeyError(f"unknown graph {name!r}; choose from {', '.join(_NAMED)}")
    if boundary is None:
        boundary = _DEFAULT_BOUNDARY.get(key, ())
    return _NAMED[key](tuple(boundary))


def named_graphs() -> list[str]:
    return list(_NAMED)


def _random_rational(rng: random.Random, bound: int, nonzero: bool) -> Fraction:
    while True:
        den = rng.choice((1, 1, 2, 3))
        q = Fraction(rng.randint(-bound * den, bound * den), den)
        if q or not nonzero:
            return q


def random_graph(
    rng: random.Random,
    max_vertices: int = 6,
    max_edges: int = 9,
    bound: int = 3,
    boundary: str = "nonempty",
    multi_edges: bool = True,
) -> BoundaryGraph:
    """Random connected multigraph with rational weights and potential in [-bound, bound].

    ``boundary`` is ``"nonempty"``, ``"any"`` or ``"empty"``.
    """
    n = rng.randint(2, max_vertices)
    verts = list(range(1, n + 1))
    order = verts[:]
    rng.shuffle(order)
    edges = [(order[i], order[rng.randrange(i)]) for i in range(1, n)]
    pairs = list(combinations(verts, 2))
    extra = rng.randint(0, max(0, max_edges - len(edges)))
    for _ in range(extra):
        u, v = rng.choice(pairs)
        if not multi_edges and ((u, v) in edges or (v, u) in edges):
            continue
        edges.append((u, v))
    edges = [(u, v, _random_rational(rng, bound, True)) for u, v in edges]
    potential = {x: _random_rational(rng, bound, False) for x in verts}
    if boundary == "empty":
        bnd = []
    else:
        lo = 1 if boundary == "nonempty" else 0
        bnd = rng.sample(verts, rng.randint(lo, n - 1))
    return BoundaryGraph.build(verts, edges, bnd, potential)
