"""Exact Green's functions of discrete Schroedinger operators on graphs with boundary.

The resolvent of the grounded operator ``chi (M + V) chi* - z`` is computed
three ways: cofactor linear algebra over Q[z], and two factor enumerations
over the graph with one self-loop added at each interior vertex.
"""

from .algebra import Poly, PoleError, RationalFunction, evaluate, poly_gcd, ratfun_reduce
from .factors import (
    EnumerationCapError,
    enumerate_H,
    enumerate_H_pair,
    factor_weight,
    greens_function_factors,
    iota1,
    iota2,
    weight_table,
)
from .graph import (
    BoundaryGraph,
    ClassificationError,
    ComponentKind,
    DeformedGraph,
    Factor,
    GraphError,
    classify_component,
    deform,
    load_graph,
    pi,
)
from .graphs import named_graph, random_graph
from .identities import (
    IdentityReport,
    check_cor_forest_determinant,
    check_cor_oucf,
    check_prop_delta_T,
    check_prop_iota_equality,
    count_boundary_forests,
    run_checks,
)
from .operators import (
    PolyMatrix,
    build_incidence,
    build_theta,
    det_fraction_free,
    greens_function_linear_algebra,
    minor,
)

__version__ = "0.1.0"
