"""Graphs with boundary, their self-loop deformation and component classes."""

from __future__ import annotations

import enum
import json
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Hashable, Iterable, Mapping, Sequence

from .algebra import format_rational, parse_rational

Vertex = Hashable


class GraphError(ValueError):
    """Invalid graph data: bad file, self-loop, zero weight, disconnected, ..."""


class ClassificationError(ValueError):
    """A component that cannot occur in a valid factor."""


@dataclass(frozen=True)
class Edge:
    u: Vertex
    v: Vertex
    w: Fraction = Fraction(1)


@dataclass(frozen=True)
class BoundaryGraph:
    """Finite connected multigraph with boundary, edge weights and a potential.

    ``vertices`` is always stored interior-first: the interior vertices keep
    their input order and occupy positions ``0 .. n_interior-1``; boundary
    vertices follow.  Use :meth:`build` rather than the raw constructor.
    """

    vertices: tuple
    edges: tuple[Edge, ...]
    boundary: frozenset
    potential: Mapping[Vertex, Fraction] = field(default_factory=dict)

    @classmethod
    def build(
        cls,
        vertices: Iterable[Vertex],
        edges: Iterable,
        boundary: Iterable[Vertex] = (),
        potential: Mapping[Vertex, object] | None = None,
    ) -> BoundaryGraph:
        verts = list(vertices)
        if len(set(verts)) != len(verts):
            raise GraphError("duplicate vertex ids")
        if not verts:
            raise GraphError("graph has no vertices")
        vset = set(verts)
        bnd = frozenset(boundary)
        if not bnd <= vset:
            raise GraphError(f"boundary vertices not in graph: {sorted(map(str, bnd - vset))}")
        if bnd == vset:
            raise GraphError("boundary must be a proper subset of the vertices")

        elist = []
        for e in edges:
            if isinstance(e, Edge):
                u, v, w = e.u, e.v, e.w
            elif len(e) == 2:
                (u, v), w = e, 1
            else:
                u, v, w = e
            w = parse_rational(w)
            if u not in vset or v not in vset:
                raise GraphError(f"edge ({u}, {v}) has an unknown endpoint")
            if u == v:
                raise GraphError(f"self-loop at {u} is not allowed in the input graph")
            if w == 0:
                raise GraphError(f"edge ({u}, {v}) has zero weight")
            elist.append(Edge(u, v, w))

        pot = {}
        for x, val in (potential or {}).items():
            if x not in vset:
                raise GraphError(f"potential given for unknown vertex {x}")
            pot[x] = parse_rational(val)
        pot = {x: pot.get(x, Fraction(0)) for x in verts}

        ordered = tuple([x for x in verts if x not in bnd] + [x for x in verts if x in bnd])
        g = cls(ordered, tuple(elist), bnd, pot)
        if not g.is_connected():
            raise GraphError("graph is not connected")
        return g

    # -- structure ----------------------------------------------------
    @property
    def interior(self) -> tuple:
        return self.vertices[: self.n_interior]

    @property
    def n_interior(self) -> int:
        return len(self.vertices) - len(self.boundary)

    def index(self, x: Vertex) -> int:
        """0-based position of ``x`` in the interior-first ordering."""
        try:
            return self.vertices.index(x)
        except ValueError:
            raise GraphError(f"unknown vertex {x!r}") from None

    def is_connected(self) -> bool:
        adj = {x: set() for x in self.vertices}
        for e in self.edges:
            adj[e.u].add(e.v)
            adj[e.v].add(e.u)
        seen = {self.vertices[0]}
        stack = [self.vertices[0]]
        while stack:
            x = stack.pop()
            for y in adj[x] - seen:
                seen.add(y)
                stack.append(y)
        return len(seen) == len(self.vertices)

    def degree(self, x: Vertex) -> int:
        self.index(x)
        return sum((e.u == x) + (e.v == x) for e in self.edges)

    def regularity(self) -> int | None:
        """Common degree if the graph is regular, else None."""
        degs = {self.degree(x) for x in self.vertices}
        return degs.pop() if len(degs) == 1 else None

    def is_bipartite(self) -> bool:
        color = {self.vertices[0]: 0}
        stack = [self.vertices[0]]
        adj = {x: [] for x in self.vertices}
        for e in self.edges:
            adj[e.u].append(e.v)
            adj[e.v].append(e.u)
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in color:
                    color[y] = 1 - color[x]
                    stack.append(y)
                elif color[y] == color[x]:
                    return False
        return True

    # -- derived graphs -----------------------------------------------
    def with_weights(self, weights: Sequence | object) -> BoundaryGraph:
        """Copy with new edge weights (one per edge, or a single value for all)."""
        if isinstance(weights, (list, tuple)):
            ws = list(weights)
        else:
            ws = [weights] * len(self.edges)
        return BoundaryGraph.build(
            self.vertices,
            [(e.u, e.v, w) for e, w in zip(self.edges, ws, strict=True)],
            self.boundary,
            self.potential,
        )

    def with_potential(self, potential: Mapping[Vertex, object]) -> BoundaryGraph:
        return BoundaryGraph.build(
            self.vertices, self.edges, self.boundary, potential
        )

    def with_boundary(self, boundary: Iterable[Vertex]) -> BoundaryGraph:
        return BoundaryGraph.build(self.vertices, self.edges, boundary, self.potential)

    def relabel(self, mapping: Mapping[Vertex, Vertex], order: Sequence[Vertex] | None = None) -> BoundaryGraph:
        """Rename vertices through ``mapping``; ``order`` fixes the new vertex order."""
        verts = list(order) if order is not None else [mapping[x] for x in self.vertices]
        return BoundaryGraph.build(
            verts,
            [(mapping[e.u], mapping[e.v], e.w) for e in self.edges],
            [mapping[x] for x in self.boundary],
            {mapping[x]: v for x, v in self.potential.items()},
        )

    def reversed_edges(self) -> BoundaryGraph:
        """Same graph with every edge's endpoints swapped."""
        return BoundaryGraph.build(
            self.vertices,
            [(e.v, e.u, e.w) for e in self.edges],
            self.boundary,
            self.potential,
        )

    # -- (de)serialization --------------------------------------------
    def to_json(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "edges": [{"u": e.u, "v": e.v, "w": format_rational(e.w)} for e in self.edges],
            "boundary": [x for x in self.vertices if x in self.boundary],
            "potential": {str(x): format_rational(v) for x, v in self.potential.items()},
        }

    @classmethod
    def from_json(cls, data: Mapping) -> BoundaryGraph:
        try:
            verts = list(data["vertices"])
            raw_edges = data["edges"]
        except (KeyError, TypeError) as exc:
            raise GraphError(f"graph JSON needs 'vertices' and 'edges': {exc}") from None
        by_name = {str(x): x for x in verts}

        def lookup(x):
            if x in by_name.values() and not isinstance(x, bool):
                return x
            try:
                return by_name[str(x)]
            except KeyError:
                raise GraphError(f"unknown vertex {x!r}") from None

        try:
            edges = [(lookup(e["u"]), lookup(e["v"]), e.get("w", "1")) for e in raw_edges]
        except (KeyError, TypeError, AttributeError) as exc:
            raise GraphError(f"malformed edge entry: {exc}") from None
        boundary = [lookup(x) for x in data.get("boundary", [])]
        potential = {lookup(k): v for k, v in (data.get("potential") or {}).items()}
        try:
            return cls.build(verts, edges, boundary, potential)
        except ValueError as exc:
            if isinstance(exc, GraphError):
                raise
            raise GraphError(str(exc)) from None


def load_graph(path: str | Path) -> BoundaryGraph:
    try:
        data = json.loads(Path(path).read_text())
    except OSError as exc:
        raise GraphError(f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise GraphError(f"{path}: invalid JSON: {exc}") from None
    return BoundaryGraph.from_json(data)


def pi(g: BoundaryGraph, u: Vertex) -> Fraction:
    """Total weight of the edges incident to ``u``."""
    g.index(u)
    return sum((e.w for e in g.edges if u in (e.u, e.v)), Fraction(0))


# ---------------------------------------------------------------------------
# Deformed graph: input edges followed by one self-loop per interior vertex.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DeformedGraph:
    base: BoundaryGraph

    @property
    def n_edges(self) -> int:
        return len(self.base.edges)

    @property
    def loops(self) -> tuple:
        """Anchor vertices of the self-loops, in interior order."""
        return self.base.interior

    @property
    def size(self) -> int:
        return self.n_edges + len(self.loops)

    def is_loop(self, idx: int) -> bool:
        return idx >= self.n_edges

    def loop_index(self, u: Vertex) -> int:
        return self.n_edges + self.base.interior.index(u)

    def endpoints(self, idx: int) -> tuple:
        if idx < self.n_edges:
            e = self.base.edges[idx]
            return e.u, e.v
        u = self.loops[idx - self.n_edges]
        return u, u

    def label(self, idx: int) -> str:
        u, v = self.endpoints(idx)
        return f"loop@{u}" if self.is_loop(idx) else f"{u}-{v}"


def deform(g: BoundaryGraph) -> DeformedGraph:
    return DeformedGraph(g)


class ComponentKind(enum.Enum):
    TREE_WITH_BOUNDARY = "tree-with-one-boundary"
    PURE_TREE = "pure-tree"
    TREE_WITH_LOOP = "tree-with-one-self-loop"
    ODD_UNICYCLIC = "odd-unicyclic"

    @property
    def is_tree(self) -> bool:
        return self in (ComponentKind.TREE_WITH_BOUNDARY, ComponentKind.PURE_TREE)


def components(dg: DeformedGraph, edge_subset: Iterable[int]) -> list[frozenset]:
    """Connected components of the spanning subgraph ``(X, edge_subset)``."""
    parent = {x: x for x in dg.base.vertices}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for idx in edge_subset:
        u, v = dg.endpoints(idx)
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
    groups: dict = {}
    for x in dg.base.vertices:
        groups.setdefault(find(x), []).append(x)
    return [frozenset(vs) for vs in groups.values()]


def _odd_cycle_length_parity(dg: DeformedGraph, edges: list[int], comp: frozenset) -> int:
    """Length of the unique cycle of a unicyclic edge set, modulo 2 via 2-colouring."""
    adj = {x: [] for x in comp}
    for idx in edges:
        u, v = dg.endpoints(idx)
        adj[u].append(v)
        if u != v:
            adj[v].append(u)
    start = next(iter(comp))
    color = {start: 0}
    stack = [start]
    conflict = False
    while stack:
        x = stack.pop()
        for y in adj[x]:
            if y not in color:
                color[y] = 1 - color[x]
                stack.append(y)
            elif color[y] == color[x]:
                conflict = True
    return 1 if conflict else 0


def classify_component(dg: DeformedGraph, edge_subset: Iterable[int], comp: Iterable[Vertex]) -> ComponentKind:
    """Kind of the component ``comp`` of ``(X, edge_subset)``.

    Raises ClassificationError for anything outside the four valid kinds:
    more than one independent cycle, an even cycle, a cycle touching the
    boundary, or two boundary vertices in one component.
    """
    comp = frozenset(comp)
    edges = [i for i in edge_subset if dg.endpoints(i)[0] in comp]
    n_bnd = len(comp & dg.base.boundary)
    excess = len(edges) - len(comp)
    if n_bnd > 1:
        raise ClassificationError(f"component {sorted(map(str, comp))} holds {n_bnd} boundary vertices")
    if excess == -1:
        return ComponentKind.TREE_WITH_BOUNDARY if n_bnd else ComponentKind.PURE_TREE
    if excess != 0:
        raise ClassificationError(f"component {sorted(map(str, comp))} has {excess + 1} independent cycles")
    if n_bnd:
        raise ClassificationError("cycle in a component that touches the boundary")
    n_loops = sum(dg.is_loop(i) for i in edges)
    if n_loops == 1:
        return ComponentKind.TREE_WITH_LOOP
    if _odd_cycle_length_parity(dg, edges, comp):
        return ComponentKind.ODD_UNICYCLIC
    raise ClassificationError("even cycle")


@dataclass(frozen=True)
class Factor:
    """A spanning subgraph of the deformed graph with its component data."""

    edges: tuple[int, ...]
    components: tuple[tuple[frozenset, ComponentKind], ...]
    loops: tuple[int, ...]
    dist: int | None = None

    @property
    def omega(self) -> int:
        return len(self.components)

    @property
    def b1_noloop(self) -> int:
        return sum(k is ComponentKind.ODD_UNICYCLIC for _, k in self.components)

    @property
    def n_loops(self) -> int:
        return len(self.loops)

    def kind_counts(self) -> Counter:
        return Counter(k for _, k in self.components)

    def to_json(self, dg: DeformedGraph | None = None) -> dict:
        out = {
            "edges": list(self.edges),
            "components": [
                {"vertices": sorted(vs, key=str), "kind": k.value} for vs, k in self.components
            ],
            "omega": self.omega,
            "loops": len(self.loops),
            "b1": self.b1_noloop,
        }
        if self.dist is not None:
            out["dist"] = self.dist
        if dg is not None:
            out["labels"] = [dg.label(i) for i in self.edges]
        return out
