"""Independent reference computations used by the test suite.

Nothing here touches the package's search, classification or elimination
code: families are found by scanning every edge subset with networkx, and
inverses come from sympy.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import chain, combinations

import networkx as nx
import sympy

from graphgreen.graph import BoundaryGraph

z = sympy.Symbol("z")


def deformed_edges(g: BoundaryGraph) -> list[tuple]:
    """Edge list of the deformed graph: input edges, then one loop per interior vertex."""
    return [(e.u, e.v) for e in g.edges] + [(u, u) for u in g.interior]


def _multigraph(g: BoundaryGraph, subset, edges) -> nx.MultiGraph:
    h = nx.MultiGraph()
    h.add_nodes_from(g.vertices)
    for i in subset:
        h.add_edge(*edges[i], key=i)
    return h


def _cycle_info(sub: nx.MultiGraph):
    """(#independent cycles, length of the cycle if exactly one)."""
    n_edges = sub.number_of_edges()
    rank = n_edges - sub.number_of_nodes() + 1
    if rank != 1:
        return rank, None
    loops = list(nx.selfloop_edges(sub))
    if loops:
        return 1, 1
    simple = nx.Graph(sub)
    if simple.number_of_edges() < n_edges:
        return 1, 2  # a doubled edge
    return 1, len(nx.cycle_basis(simple)[0])


def _is_tree(sub: nx.MultiGraph) -> bool:
    return sub.number_of_edges() == sub.number_of_nodes() - 1 and not list(nx.selfloop_edges(sub))


def brute_force_family(g: BoundaryGraph, mode: str, pair=None) -> set[tuple[int, ...]]:
    """Every edge subset of the deformed graph meeting the factor conditions, any size."""
    edges = deformed_edges(g)
    n = len(edges)
    out = set()
    marks = set(pair or ())
    for subset in chain.from_iterable(combinations(range(n), k) for k in range(n + 1)):
        h = _multigraph(g, subset, edges)
        ok = True
        for comp in nx.connected_components(h):
            sub = h.subgraph(comp)
            hits = comp & g.boundary
            if pair is not None and comp & marks:
                ok = marks <= comp and not hits and _is_tree(sub)
            elif hits:
                ok = len(hits) == 1 and _is_tree(sub) and not (comp & marks)
            else:
                rank, length = _cycle_info(sub)
                if mode == "L":
                    ok = rank == 1 and length == 1
                else:
                    ok = rank == 1 and length % 2 == 1
            if not ok:
                break
        if ok:
            out.add(tuple(subset))
    return out


def sympy_theta(g: BoundaryGraph) -> sympy.Matrix:
    inner = list(g.interior)
    n = len(inner)
    m = sympy.zeros(n, n)
    for i, x in enumerate(inner):
        m[i, i] = sympy.Rational(g.potential[x].numerator, g.potential[x].denominator) - z
    for e in g.edges:
        if e.u in inner and e.v in inner:
            i, j = inner.index(e.u), inner.index(e.v)
            w = sympy.Rational(e.w.numerator, e.w.denominator)
            m[i, j] += w
            m[j, i] += w
    return m


def sympy_greens(g: BoundaryGraph) -> list[list[tuple[list[Fraction], list[Fraction]]]]:
    """Inverse of theta via sympy, as (num coeffs, monic den coeffs) low to high."""
    inv = sympy_theta(g).inv(method="LU")
    out = []
    for i in range(inv.rows):
        row = []
        for j in range(inv.cols):
            num, den = sympy.fraction(sympy.cancel(sympy.together(inv[i, j])))
            pn, pd = sympy.Poly(num, z), sympy.Poly(den, z)
            lc = pd.LC()
            pn, pd = pn * (1 / lc), pd * (1 / lc)
            row.append((_coeffs(pn), _coeffs(pd)))
        out.append(row)
    return out


def _coeffs(p) -> list[Fraction]:
    cs = [Fraction(int(c.p), int(c.q)) for c in reversed(sympy.Poly(p, z).all_coeffs())]
    while cs and cs[-1] == 0:
        cs.pop()
    return cs


def sympy_det(g: BoundaryGraph) -> list[Fraction]:
    return _coeffs(sympy.expand(sympy_theta(g).det(method="berkowitz")))


def count_forests_nx(g: BoundaryGraph, pair=None) -> int:
    """Boundary-rooted spanning forests, by scanning all subsets of E."""
    edges = [(e.u, e.v) for e in g.edges]
    marks = set(pair or ())
    count = 0
    for k in range(len(edges) + 1):
        for subset in combinations(range(len(edges)), k):
            h = _multigraph(g, subset, edges)
            if not nx.is_forest(h):
                continue
            comps = list(nx.connected_components(h))
            want = len(g.boundary) + (1 if pair is not None else 0)
            if len(comps) != want:
                continue
            ok = True
            for comp in comps:
                hits = comp & g.boundary
                if hits:
                    ok = len(hits) == 1 and not (comp & marks)
                else:
                    ok = pair is not None and marks <= comp
                if not ok:
                    break
            count += ok
    return count


def oucf_and_forests_nx(g: BoundaryGraph):
    """(sum of 4^omega over odd-unicyclic spanning subgraphs, forest component sizes).

    Scans every subset of E.  A subset counts as odd-unicyclic when every
    component (isolated vertices included) has exactly one cycle, of odd length.
    """
    edges = [(e.u, e.v) for e in g.edges]
    oucf = 0
    forests = []
    for k in range(len(edges) + 1):
        for subset in combinations(range(len(edges)), k):
            h = _multigraph(g, subset, edges)
            comps = [h.subgraph(c) for c in nx.connected_components(h)]
            if nx.is_forest(h):
                forests.append([c.number_of_nodes() for c in comps])
            infos = [_cycle_info(c) for c in comps]
            if all(r == 1 and ln % 2 == 1 for r, ln in infos):
                oucf += 4 ** len(comps)
    return oucf, forests
