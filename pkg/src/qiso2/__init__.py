"""Exact and numeric toolkit for the two-parameter deformations of the 1+1D
Euclidean, Galilei and Poincare algebras: ordered-monomial Hopf structure,
duality pairing, the nonlinear rotation flow on the deformed translation
group, orbit stratification, co-space / coregular / induced / local
representations, and the deformed Casimir difference operator."""

from .flow import (
    FlowParams,
    OrbitClass,
    Point2,
    Stratum,
    casimir_value,
    classify_orbit,
    flow,
    flow_coordinate_jets,
    flow_domain,
    group_inverse,
    group_law,
    integrate_ode,
    invariant_h,
    vector_field,
)
from .hopf import (
    AlgebraElement,
    OperatorExpr,
    RewriteSystem,
    UnsupportedStarError,
    adjoint,
    antipode,
    coaction_K,
    coaction_Lstar,
    coproduct,
    counit,
    der_op,
    element_from_json,
    element_to_json,
    mul_op,
    multiply,
    normal_order,
    pairing,
    star,
    tensor,
)
from .reps import (
    Character,
    InducedState,
    PolyA,
    casimir_apply,
    casimir_apply_fn,
    coregular_left,
    coregular_right,
    cospace_act,
    induced_act,
    local_act,
    plane_wave_eigenvalue,
    poly_from_json,
    poly_to_json,
)
from .scalars import (
    DEFAULT_JET_ORDER,
    CKParams,
    DomainError,
    Jet,
    Rational,
    ck_cos,
    ck_series,
    ck_sin,
    jet_apply_elementary,
    parse_rational,
)

__version__ = "0.1.0"
