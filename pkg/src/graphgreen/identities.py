"""Determinant and counting identities checked by comparing independent routes.

Each check returns an :class:`IdentityReport` carrying both sides, so a
failure can be displayed rather than just detected.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import prod
from typing import Callable

from .algebra import ZERO, Poly, RationalFunction
from .factors import (
    enumerate_H,
    enumerate_H_pair,
    factor_term,
    greens_function_factors,
    iota1,
    iota2,
    weight_table,
)
from .graph import BoundaryGraph, components, deform
from .operators import PolyMatrix, build_incidence, build_theta, det_fraction_free, greens_function_linear_algebra, minor


class PreconditionError(ValueError):
    """The graph does not satisfy the hypotheses of the requested identity."""


@dataclass(frozen=True)
class IdentityReport:
    id: str
    left: object
    right: object
    holds: bool
    detail: str = ""
    parts: tuple[IdentityReport, ...] = ()

    @classmethod
    def compare(cls, id: str, left, right, detail: str = "") -> IdentityReport:
        return cls(id, left, right, left == right, detail)

    @classmethod
    def combine(cls, id: str, parts: list[IdentityReport], detail: str = "") -> IdentityReport:
        head = parts[0] if parts else None
        return cls(
            id,
            head.left if head else None,
            head.right if head else None,
            all(p.holds for p in parts),
            detail,
            tuple(parts),
        )

    def failures(self) -> list[IdentityReport]:
        if not self.parts:
            return [] if self.holds else [self]
        return [f for p in self.parts for f in p.failures()]

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "holds": self.holds,
            "left": _jsonable(self.left),
            "right": _jsonable(self.right),
            "detail": self.detail,
            "parts": [p.to_json() for p in self.parts],
        }


def _jsonable(x):
    if isinstance(x, (Poly, RationalFunction, PolyMatrix)):
        return x.to_json()
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, (list, tuple)):
        return [_jsonable(y) for y in x]
    return x


# ---------------------------------------------------------------------------
# Spanning-forest census
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ForestCensus:
    n_boundary: int
    n_pair: dict = field(default_factory=dict)


def _forest_components(g: BoundaryGraph, subset) -> list[frozenset] | None:
    """Components of ``(X, subset)`` or None if the subset has a cycle."""
    comps = components(deform(g), subset)
    if len(subset) != len(g.vertices) - len(comps):
        return None
    return comps


def count_boundary_forests(g: BoundaryGraph, pair: tuple | None = None) -> int:
    """Spanning forests with one boundary vertex per component.

    With ``pair=(l, m)`` there is one extra boundary-free component, and it
    holds both ``l`` and ``m``; boundary components must avoid them.
    """
    if not g.boundary:
        raise PreconditionError("forest census needs a nonempty boundary")
    if pair is not None:
        for x in pair:
            g.index(x)
            if x in g.boundary:
                raise ValueError(f"pair vertex {x!r} is on the boundary")
    nb = len(g.boundary)
    k = len(g.vertices) - nb - (0 if pair is None else 1)
    marked = set(pair or ())
    count = 0
    for subset in combinations(range(len(g.edges)), k):
        comps = _forest_components(g, subset)
        if comps is None:
            continue
        ok = True
        for w in comps:
            hits = len(w & g.boundary)
            if hits > 1 or (hits == 1 and w & marked):
                ok = False
            elif hits == 0 and not (pair is not None and marked <= w):
                ok = False
            if not ok:
                break
        count += ok
    return count


def forest_census(g: BoundaryGraph) -> ForestCensus:
    inner = g.interior
    pairs = {
        (inner[i], inner[j]): count_boundary_forests(g, (inner[i], inner[j]))
        for i in range(len(inner))
        for j in range(i, len(inner))
    }
    return ForestCensus(count_boundary_forests(g), pairs)


def spanning_forests(g: BoundaryGraph):
    """All acyclic edge subsets, each yielded with its component list."""
    for k in range(len(g.vertices)):
        for subset in combinations(range(len(g.edges)), k):
            comps = _forest_components(g, subset)
            if comps is not None:
                yield subset, comps


# ---------------------------------------------------------------------------
# Checks
# ---------------------------------------------------------------------------


def check_greens_routes(g: BoundaryGraph, cap: int | None = None) -> IdentityReport:
    """Linear algebra vs. L-factors vs. Q-factors, entrywise."""
    ref = greens_function_linear_algebra(g)
    parts = []
    for mode in ("L", "Q"):
        got = greens_function_factors(g, mode, cap)
        parts.append(IdentityReport.compare(f"greens[{mode}]", got, ref, f"{mode}-factors vs cofactors"))
    return IdentityReport.combine("greens-routes", parts)


def check_prop_iota_equality(g: BoundaryGraph, cap: int | None = None) -> IdentityReport:
    theta = build_theta(g)
    det = det_fraction_free(theta)
    i1 = {mode: iota1(g, mode, cap).value for mode in ("L", "Q")}
    parts = [
        IdentityReport.compare("iota1[L]=det", i1["L"], det),
        IdentityReport.compare("iota1[Q]=det", i1["Q"], det),
    ]
    inner = g.interior
    for a in range(len(inner)):
        for b in range(a, len(inner)):
            cof = det_fraction_free(minor(theta, a, b))
            if (a + b) % 2:
                cof = -cof
            for mode in ("L", "Q"):
                val = iota2(g, mode, inner[a], inner[b], cap).value
                parts.append(IdentityReport.compare(f"iota2[{mode}]({inner[a]},{inner[b]})", val, cof))
    return IdentityReport.combine("iota-equality", parts, f"common denominator {det}")


def check_incidence_factorization(g: BoundaryGraph) -> IdentityReport:
    theta = build_theta(g)
    parts = [
        IdentityReport.compare(f"BDB*[{form}]", build_incidence(g, form).product(), theta)
        for form in ("L", "Q")
    ]
    return IdentityReport.combine("incidence", parts)


def _require_regular(g: BoundaryGraph) -> int:
    kappa = g.regularity()
    if kappa is None:
        raise PreconditionError("graph is not regular")
    return kappa


def laplacian_setup(g: BoundaryGraph) -> BoundaryGraph:
    """Weights -1 and potential deg(u): the operator becomes the Laplacian at z=0."""
    unit = g.with_weights(-1)
    return unit.with_potential({x: g.degree(x) for x in g.vertices})


def _q_forest_sum(g: BoundaryGraph, kappa: int, pair: tuple | None, cap) -> int:
    """Signed Q-family count with powers of 4 and (-2 kappa)."""
    nb = len(g.boundary)
    extra = 0 if pair is None else 1
    total = 0
    factors = enumerate_H(g, "Q", cap) if pair is None else enumerate_H_pair(g, "Q", *pair, cap=cap)
    for h in factors:
        e4 = h.omega - h.n_loops - nb - extra
        assert e4 >= 0 and e4 == h.b1_noloop, (e4, h)
        term = 4**e4 * (-2 * kappa) ** h.n_loops
        if h.dist is not None and h.dist % 2:
            term = -term
        total += term
    sign = (-1) ** (len(g.vertices) - nb - extra)
    return sign * total


def check_cor_forest_determinant(g: BoundaryGraph, cap: int | None = None) -> IdentityReport:
    """Boundary-rooted forest counts vs. grounded Laplacian minors vs. Q-family sums.

    For pairs the Q-family summand carries ``(-1)^dist(l, m)``; without it
    the pair identity fails already on a triangle.
    """
    kappa = _require_regular(g)
    if not g.boundary:
        raise PreconditionError("forest identity needs a nonempty boundary")
    lap = laplacian_setup(g)
    theta = build_theta(lap)
    det0 = det_fraction_free(theta)(0)
    n_forests = count_boundary_forests(g)
    qsum = _q_forest_sum(g, kappa, None, cap)
    parts = [
        IdentityReport.compare("forests=det", n_forests, det0),
        IdentityReport.compare("det=Q-sum", det0, qsum),
    ]
    inner = g.interior
    for a in range(len(inner)):
        for b in range(a, len(inner)):
            pair = (inner[a], inner[b])
            cof = det_fraction_free(minor(theta, a, b))(0) * (-1) ** (a + b)
            n_pair = count_boundary_forests(g, pair)
            parts.append(IdentityReport.compare(f"forests{pair}=minor", n_pair, cof))
            parts.append(IdentityReport.compare(f"minor{pair}=Q-sum", cof, _q_forest_sum(g, kappa, pair, cap)))
    return IdentityReport.combine("forest-determinant", parts, f"{kappa}-regular, |N| = {n_forests}")


def check_prop_delta_T(g: BoundaryGraph, cap: int | None = None) -> IdentityReport:
    """Excess of the Q family over the L family, as a difference of two determinants."""
    n = g.n_interior
    d_plus = det_fraction_free(build_theta(g))
    neg = g.with_potential({x: -v for x, v in g.potential.items()})
    # det(chi M_{-V} chi* + z I) is det(theta_{-V}) at -z
    d_minus = det_fraction_free(build_theta(neg)).negate_variable()
    left = d_plus - (d_minus if n % 2 == 0 else -d_minus)
    table = weight_table(g, "Q")
    right = ZERO
    count = 0
    for h in enumerate_H(g, "Q", cap):
        if h.b1_noloop:
            right = right + factor_term(h, table)
            count += 1
    return IdentityReport.compare("odd-cycle-excess", left, right, f"{count} factors with an odd cycle")


def check_cor_oucf(g: BoundaryGraph, cap: int | None = None) -> IdentityReport:
    """Odd-unicyclic factors weighted by 4^omega vs. signed spanning-forest sum."""
    kappa = _require_regular(g)
    if g.boundary:
        raise PreconditionError("odd-unicyclic factor identity needs an empty boundary")
    unit = g.with_weights(1)
    left = sum(4**h.omega for h in enumerate_H(unit, "Q", cap) if not h.n_loops)
    right = sum((-2 * kappa) ** len(comps) * prod(len(c) for c in comps) for _, comps in spanning_forests(g))
    right *= (-1) ** len(g.vertices)
    # the signless Laplacian determinant is a third witness
    signless = unit.with_potential({x: kappa for x in g.vertices})
    det_q = det_fraction_free(build_theta(signless))(0)
    parts = [
        IdentityReport.compare("oucf=forests", left, right),
        IdentityReport.compare("oucf=det(signless)", left, det_q),
    ]
    note = "bipartite" if g.is_bipartite() else "non-bipartite"
    return IdentityReport.combine("oucf-forest", parts, f"{kappa}-regular, {note}")


# id -> (check, applicability test returning a reason or None)
CHECKS: dict[str, tuple[Callable, Callable]] = {
    "greens-routes": (check_greens_routes, lambda g: None),
    "iota-equality": (check_prop_iota_equality, lambda g: None),
    "incidence": (lambda g, cap=None: check_incidence_factorization(g), lambda g: None),
    "odd-cycle-excess": (check_prop_delta_T, lambda g: None),
    "forest-determinant": (
        check_cor_forest_determinant,
        lambda g: "needs a regular graph" if g.regularity() is None
        else ("needs a nonempty boundary" if not g.boundary else None),
    ),
    "oucf-forest": (
        check_cor_oucf,
        lambda g: "needs a regular graph" if g.regularity() is None
        else ("needs an empty boundary" if g.boundary else None),
    ),
}


def run_checks(g: BoundaryGraph, ids=None, cap: int | None = None) -> tuple[list[IdentityReport], dict]:
    """Run the named checks (all applicable ones by default).

    Returns ``(reports, skipped)`` where ``skipped`` maps id to reason.
    Explicitly requested checks whose hypotheses fail raise PreconditionError.
    """
    explicit = ids is not None
    ids = list(CHECKS) if ids is None else list(ids)
    reports, skipped = [], {}
    for cid in ids:
        if cid not in CHECKS:
            raise KeyError(f"unknown check {cid!r}; choose from {', '.join(CHECKS)}")
        fn, why_not = CHECKS[cid]
        reason = why_not(g)
        if reason:
            if explicit:
                raise PreconditionError(f"{cid}: {reason}")
            skipped[cid] = reason
            continue
        reports.append(fn(g, cap=cap))
    return reports, skipped
