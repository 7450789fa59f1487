"""Factor families of the deformed graph, their weights, and the Green's function.

A factor is a spanning subgraph ``H`` of the deformed graph (input edges plus
one self-loop per interior vertex).  In the *L* family every component either
is a tree holding exactly one boundary vertex or is a tree with exactly one
self-loop.  The *Q* family relaxes the second kind to any odd unicyclic
component, a self-loop counting as a cycle of length one.  Pair families for
interior vertices ``(l, m)`` additionally have one plain tree containing both
``l`` and ``m``.
"""

from __future__ import annotations

import math
from collections import Counter, deque
from dataclasses import dataclass, field
from typing import Iterator

from .algebra import ONE, ZERO, Poly, RationalFunction
from .graph import (
    BoundaryGraph,
    ClassificationError,
    ComponentKind,
    DeformedGraph,
    Factor,
    classify_component,
    components,
    deform,
    pi,
)

DEFAULT_CAP = 10**7
MODES = ("L", "Q")


class EnumerationCapError(RuntimeError):
    """The number of candidate edge subsets exceeds the configured cap."""

    def __init__(self, candidates: int, cap: int):
        self.candidates = candidates
        self.cap = cap
        super().__init__(f"{candidates} candidate subsets exceed the enumeration cap {cap}")


def _check_mode(mode: str) -> str:
    mode = mode.upper()
    if mode not in MODES:
        raise ValueError(f"mode must be 'L' or 'Q', not {mode!r}")
    return mode


@dataclass(frozen=True)
class EdgeWeightTable:
    """Per-edge weight polynomials over the deformed edge space (input edges first)."""

    mode: str
    weights: tuple[Poly, ...]

    def __getitem__(self, idx: int) -> Poly:
        return self.weights[idx]


def weight_table(g: BoundaryGraph, mode: str) -> EdgeWeightTable:
    """Edges get ``-w`` (L) or ``+w`` (Q); the loop at ``u`` gets ``-z + V(u) +- pi(u)``."""
    mode = _check_mode(mode)
    sign = -1 if mode == "L" else 1
    ws = [Poly.const(sign * e.w) for e in g.edges]
    for u in g.interior:
        ws.append(Poly.linear(-1, g.potential[u] - sign * pi(g, u)))
    return EdgeWeightTable(mode, tuple(ws))


def factor_weight(h: Factor, table: EdgeWeightTable) -> Poly:
    out = ONE
    for idx in h.edges:
        out = out * table[idx]
    return out


# ---------------------------------------------------------------------------
# Pruned subset search
# ---------------------------------------------------------------------------

_NONE, _LOOP, _ODD = 0, 1, 2


class _Search:
    """Depth-first choice of ``k`` edges with a parity union-find.

    Each root carries (boundary count, cycle state, marker count).  A partial
    edge set is abandoned as soon as it cannot extend to a valid factor.
    """

    def __init__(self, dg: DeformedGraph, mode: str, markers: tuple = ()):
        g = dg.base
        self.dg = dg
        self.mode = mode
        self.vidx = {x: i for i, x in enumerate(g.vertices)}
        self.n = len(g.vertices)
        self.ends = [tuple(self.vidx[x] for x in dg.endpoints(i)) for i in range(dg.size)]
        self.is_bnd = [x in g.boundary for x in g.vertices]
        self.markers = frozenset(self.vidx[x] for x in markers)

    def run(self, k: int) -> Iterator[tuple[int, ...]]:
        n = self.n
        parent = list(range(n))
        parity = [0] * n
        bnd = [int(b) for b in self.is_bnd]
        cyc = [_NONE] * n
        mark = [int(i in self.markers) for i in range(n)]
        chosen: list[int] = []
        size = self.dg.size
        ends = self.ends
        odd_ok = self.mode == "Q"

        def find(x):
            p = 0
            while parent[x] != x:
                p ^= parity[x]
                x = parent[x]
            return x, p

        def rec(start: int, remaining: int):
            if remaining == 0:
                if self._complete(parent, bnd, cyc, mark):
                    yield tuple(chosen)
                return
            for idx in range(start, size - remaining + 1):
                u, v = ends[idx]
                ru, pu = find(u)
                if u == v:
                    if bnd[ru] or cyc[ru] or mark[ru]:
                        continue
                    cyc[ru] = _LOOP
                    chosen.append(idx)
                    yield from rec(idx + 1, remaining - 1)
                    chosen.pop()
                    cyc[ru] = _NONE
                    continue
                rv, pv = find(v)
                if ru == rv:
                    if not odd_ok or bnd[ru] or cyc[ru] or mark[ru] or pu != pv:
                        continue
                    cyc[ru] = _ODD
                    chosen.append(idx)
                    yield from rec(idx + 1, remaining - 1)
                    chosen.pop()
                    cyc[ru] = _NONE
                    continue
                nb = bnd[ru] + bnd[rv]
                nm = mark[ru] + mark[rv]
                if nb > 1 or (cyc[ru] and cyc[rv]):
                    continue
                nc = cyc[ru] or cyc[rv]
                if (nc and (nb or nm)) or (nb and nm):
                    continue
                # attach ru under rv
                saved = (bnd[rv], cyc[rv], mark[rv])
                parent[ru] = rv
                parity[ru] = pu ^ pv ^ 1
                bnd[rv], cyc[rv], mark[rv] = nb, nc, nm
                chosen.append(idx)
                yield from rec(idx + 1, remaining - 1)
                chosen.pop()
                bnd[rv], cyc[rv], mark[rv] = saved
                parent[ru] = ru
                parity[ru] = 0

        yield from rec(0, k)

    def _complete(self, parent, bnd, cyc, mark) -> bool:
        nmark = len(self.markers)
        for r in range(self.n):
            if parent[r] != r or bnd[r]:
                continue
            if mark[r]:
                if mark[r] != nmark:
                    return False
            elif not cyc[r]:
                return False
        return True


def _tree_distance(dg: DeformedGraph, edges: tuple[int, ...], a, b) -> int:
    adj: dict = {}
    for idx in edges:
        if dg.is_loop(idx):
            continue
        u, v = dg.endpoints(idx)
        adj.setdefault(u, []).append(v)
        adj.setdefault(v, []).append(u)
    dist = {a: 0}
    queue = deque([a])
    while queue:
        x = queue.popleft()
        for y in adj.get(x, ()):
            if y not in dist:
                dist[y] = dist[x] + 1
                queue.append(y)
    if b not in dist:
        raise AssertionError(f"{a} and {b} are not connected in the factor")
    return dist[b]


def _make_factor(dg: DeformedGraph, mode: str, edges: tuple[int, ...], markers: tuple) -> Factor:
    comps = []
    expected_edges = 0
    for comp in components(dg, edges):
        kind = classify_component(dg, edges, comp)
        if markers and comp & set(markers):
            if kind is not ComponentKind.PURE_TREE or not set(markers) <= comp:
                raise ClassificationError("marker component must be a boundary-free tree holding both markers")
        elif kind is ComponentKind.PURE_TREE:
            raise ClassificationError("plain tree component without boundary")
        if mode == "L" and kind is ComponentKind.ODD_UNICYCLIC:
            raise ClassificationError("odd cycle in an L-family factor")
        expected_edges += len(comp) - (1 if kind.is_tree else 0)
        comps.append((comp, kind))
    # the component conditions alone fix the edge count
    assert expected_edges == len(edges), (expected_edges, edges)
    comps.sort(key=lambda ck: min(dg.base.index(x) for x in ck[0]))
    loops = tuple(i for i in edges if dg.is_loop(i))
    dist = None
    if markers:
        dist = _tree_distance(dg, edges, markers[0], markers[-1])
    return Factor(edges, tuple(comps), loops, dist)


def _guard(dg: DeformedGraph, k: int, cap: int | None) -> None:
    cap = DEFAULT_CAP if cap is None else cap
    candidates = math.comb(dg.size, k) if k >= 0 else 0
    if candidates > cap:
        raise EnumerationCapError(candidates, cap)


def _as_deformed(g) -> DeformedGraph:
    return g if isinstance(g, DeformedGraph) else deform(g)


def enumerate_H(g, mode: str, cap: int | None = None) -> Iterator[Factor]:
    """Factors of the L or Q family for the whole interior."""
    mode = _check_mode(mode)
    dg = _as_deformed(g)
    k = dg.base.n_interior
    _guard(dg, k, cap)
    for edges in _Search(dg, mode).run(k):
        yield _make_factor(dg, mode, edges, ())


def _check_pair(g: BoundaryGraph, l, m) -> None:
    for x in (l, m):
        g.index(x)
        if x in g.boundary:
            raise ValueError(f"vertex {x!r} is on the boundary; pair vertices must be interior")


def enumerate_H_pair(g, mode: str, l, m, cap: int | None = None) -> Iterator[Factor]:
    """Factors of the pair family for interior vertices ``l`` and ``m`` (may coincide)."""
    mode = _check_mode(mode)
    dg = _as_deformed(g)
    _check_pair(dg.base, l, m)
    k = dg.base.n_interior - 1
    _guard(dg, k, cap)
    markers = (l,) if l == m else (l, m)
    for edges in _Search(dg, mode, markers).run(k):
        yield _make_factor(dg, mode, edges, markers)


# ---------------------------------------------------------------------------
# Weighted sums
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class IotaResult:
    """A weighted factor sum with diagnostics.

    ``class_histogram`` counts factors by ``(omega, #loops, #odd cycles)``;
    ``term_classes`` counts them by the exact value of their summand.
    """

    value: Poly
    factor_count: int
    class_histogram: dict = field(default_factory=dict)
    term_classes: dict = field(default_factory=dict)

    @property
    def n_classes(self) -> int:
        return len(self.term_classes)


def factor_term(h: Factor, table: EdgeWeightTable) -> Poly:
    """Summand of a factor: plain weight in L mode; ``4^b1 (-1)^dist W`` in Q mode."""
    w = factor_weight(h, table)
    if table.mode == "Q":
        w = w.scale(4**h.b1_noloop)
        if h.dist is not None and h.dist % 2:
            w = -w
    return w


def _accumulate(factors, table: EdgeWeightTable) -> IotaResult:
    total = ZERO
    count = 0
    hist: Counter = Counter()
    terms: Counter = Counter()
    for h in factors:
        t = factor_term(h, table)
        total = total + t
        count += 1
        hist[(h.omega, h.n_loops, h.b1_noloop)] += 1
        terms[t] += 1
    return IotaResult(total, count, dict(hist), dict(terms))


def iota1(g: BoundaryGraph, mode: str, cap: int | None = None) -> IotaResult:
    """Denominator sum over the whole-interior family."""
    mode = _check_mode(mode)
    return _accumulate(enumerate_H(g, mode, cap), weight_table(g, mode))


def iota2(g: BoundaryGraph, mode: str, l, m, cap: int | None = None) -> IotaResult:
    """Numerator sum over the pair family of ``(l, m)``."""
    mode = _check_mode(mode)
    return _accumulate(enumerate_H_pair(g, mode, l, m, cap), weight_table(g, mode))


def greens_function_factors(g: BoundaryGraph, mode: str, cap: int | None = None) -> list[list[RationalFunction]]:
    """Green's function entries ``iota2(l, m) / iota1`` from factor enumeration."""
    mode = _check_mode(mode)
    den = iota1(g, mode, cap).value
    inner = g.interior
    n = len(inner)
    out = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            num = iota2(g, mode, inner[i], inner[j], cap).value
            out[i][j] = out[j][i] = RationalFunction(num, den)
    return out
