"""The nonlinear rotation flow on the deformed translation group T_{lam,2}.

The one-parameter group generated by the rotation sector acts on points
(alpha1, alpha2) through the ODE system

    alpha1' = -[(1 - exp(-2 lam alpha2))/(2 lam) + (lam w / 2) alpha1^2],
    alpha2' = w alpha1,

whose closed-form flow, conserved quantities, maximal domain and orbit
stratification are implemented here, together with an independent
fixed-step RK4 oracle.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .scalars import DomainError, Jet, ck_cos, ck_sin

__all__ = [
    "FlowParams",
    "OrbitClass",
    "Point2",
    "Stratum",
    "casimir_value",
    "classify_orbit",
    "flow",
    "flow_coordinate_jets",
    "flow_domain",
    "group_inverse",
    "group_law",
    "integrate_ode",
    "invariant_h",
    "vector_field",
]

_BLOWUP = 1e12
_SEPARATRIX_TOL = 1e-9


@dataclass(frozen=True)
class Point2:
    alpha1: float
    alpha2: float

    def __post_init__(self):
        for v in (self.alpha1, self.alpha2):
            if not math.isfinite(v):
                raise DomainError("point coordinates must be finite", offending=v)

    def as_tuple(self) -> tuple[float, float]:
        return (self.alpha1, self.alpha2)


@dataclass(frozen=True)
class FlowParams:
    omega: float
    lam: float

    def __post_init__(self):
        for v in (self.omega, self.lam):
            if not math.isfinite(v):
                raise DomainError("flow parameters must be finite", offending=v)


class OrbitClass(enum.Enum):
    ORIGIN_FIXED_POINT = "OriginFixedPoint"
    FIXED_LINE = "FixedLine"
    SEPARATRIX_ORBIT = "SeparatrixOrbit"
    GENERIC_HYPERBOLIC = "GenericHyperbolic"
    GENERIC_CIRCLE = "GenericCircle"
    GENERIC_PARABOLIC = "GenericParabolic"


@dataclass(frozen=True)
class Stratum:
    tag: OrbitClass
    conserved_value: float


def _phi_lam(x: float, lam: float) -> float:
    """(1 - exp(-2 lam x))/(2 lam) with the analytic lam = 0 limit."""
    if lam == 0.0:
        return x
    return -math.expm1(-2.0 * lam * x) / (2.0 * lam)


def vector_field(p: Point2, params: FlowParams) -> tuple[float, float]:
    w, lam = params.omega, params.lam
    a1, a2 = p.alpha1, p.alpha2
    return (-(_phi_lam(a2, lam) + 0.5 * lam * w * a1 * a1), w * a1)


def _log_argument_data(p: Point2, params: FlowParams) -> tuple[float, float, float]:
    """Coefficients (h, q, r) of L(t) = h + q C_w(t) + r w S_w(t) ... in the
    cosh/sinh normal form h + q*C_w(t) + r*S_w(t)-slope; see `flow`."""
    w, lam = params.omega, params.lam
    a1, a2 = p.alpha1, p.alpha2
    e = math.exp(lam * a2)
    half_term = 0.5 * w * lam * lam * a1 * a1 * e
    h = math.cosh(lam * a2) + half_term
    q = math.sinh(lam * a2) - half_term
    r = w * lam * a1 * e
    return h, q, r


def flow(t: float, p: Point2, params: FlowParams) -> Point2:
    """Closed-form flow at time t; raises DomainError outside the maximal
    interval (the offending log argument is attached to the exception)."""
    if not math.isfinite(t):
        raise DomainError("flow time must be finite", offending=t)
    w, lam = params.omega, params.lam
    a1, a2 = p.alpha1, p.alpha2
    c, s = ck_cos(w, t), ck_sin(w, t)
    if lam == 0.0:
        return Point2(c * a1 - s * a2, w * s * a1 + c * a2)
    h, q, r = _log_argument_data(p, params)
    L = h + q * c + r * s
    if L <= 0.0:
        raise DomainError(
            f"time {t} is outside the maximal flow interval (log argument {L})",
            offending=L,
        )
    e = math.exp(lam * a2)
    num = 2.0 * lam * a1 * e * c + (w * lam * lam * a1 * a1 * e - 2.0 * math.sinh(lam * a2)) * s
    return Point2(num / (2.0 * lam * L), math.log(L) / lam)


def invariant_h(p: Point2, params: FlowParams) -> float:
    w, lam = params.omega, params.lam
    return 0.5 * w * lam * lam * p.alpha1**2 * math.exp(lam * p.alpha2) + math.cosh(
        lam * p.alpha2
    )


def casimir_value(p: Point2, params: FlowParams) -> float:
    w, lam = params.omega, params.lam
    if lam == 0.0:
        return w * p.alpha1**2 + p.alpha2**2
    sh = math.sinh(0.5 * lam * p.alpha2)
    return w * p.alpha1**2 * math.exp(lam * p.alpha2) + 4.0 * sh * sh / (lam * lam)


def _bisect_to(f, t_in: float, t_out: float, tol: float = 1e-12) -> float:
    """Bisection for the domain boundary: f(t_in) > 0 >= f(t_out)."""
    a, b = t_in, t_out
    fa = f(a)
    for _ in range(200):
        if abs(b - a) <= tol * max(1.0, abs(a), abs(b)):
            break
        m = 0.5 * (a + b)
        fm = f(m)
        if (fm > 0.0) == (fa > 0.0):
            a, fa = m, fm
        else:
            b = m
    return 0.5 * (a + b)


def flow_domain(p: Point2, params: FlowParams) -> tuple[float, float]:
    """Maximal open t-interval around 0 on which the flow is defined.

    The whole line for w >= 0.  For w < 0 the boundary is the zero of the
    logarithm argument L(t) = h + q cosh(mu t) + r sinh(mu t); substituting
    z = exp(mu t) turns L = 0 into the exact quadratic
    (q+r) z^2 + 2 h z + (q-r) = 0 with roots z = (+-1 - h)/(q+r) (the flow
    data satisfy h^2 - q^2 + r^2 = 1), which bracket a bisection polish.
    """
    w, lam = params.omega, params.lam
    if w >= 0.0 or lam == 0.0:
        return (-math.inf, math.inf)
    mu = math.sqrt(-w)
    h, q, r = _log_argument_data(p, params)
    rs = r / mu  # sinh coefficient: S_w(t) = sinh(mu t)/mu

    roots = []
    if q + rs != 0.0:
        for sgn in (1.0, -1.0):
            z = (sgn - h) / (q + rs)
            if z > 0.0:
                roots.append(math.log(z) / mu)
    elif h != 0.0:
        z = (rs - q) / (2.0 * h)
        if z > 0.0:
            roots.append(math.log(z) / mu)

    lo = max((t for t in roots if t < 0.0), default=-math.inf)
    hi = min((t for t in roots if t > 0.0), default=math.inf)

    def L(t):
        return h + q * math.cosh(mu * t) + rs * math.sinh(mu * t)

    if math.isfinite(hi):
        hi = _bisect_to(L, 0.0, hi * (1.0 + 1e-6) + 1e-9)
    if math.isfinite(lo):
        lo = _bisect_to(L, 0.0, lo * (1.0 + 1e-6) - 1e-9)
    return (lo, hi)


def integrate_ode(t: float, p: Point2, params: FlowParams, step: float) -> Point2:
    """Classical fixed-step RK4 for the flow ODE; independent of `flow`."""
    if step <= 0.0:
        raise ValueError("step must be positive")
    if t == 0.0:
        return p
    n = max(1, math.ceil(abs(t) / step))
    h = t / n
    w, lam = params.omega, params.lam
    a1, a2 = p.alpha1, p.alpha2

    def f(x1, x2):
        return (-(_phi_lam(x2, lam) + 0.5 * lam * w * x1 * x1), w * x1)

    for _ in range(n):
        k1 = f(a1, a2)
        k2 = f(a1 + 0.5 * h * k1[0], a2 + 0.5 * h * k1[1])
        k3 = f(a1 + 0.5 * h * k2[0], a2 + 0.5 * h * k2[1])
        k4 = f(a1 + h * k3[0], a2 + h * k3[1])
        a1 += h * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0]) / 6.0
        a2 += h * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1]) / 6.0
        if abs(a1) > _BLOWUP or abs(a2) > _BLOWUP:
            raise DomainError("trajectory blow-up detected", offending=(a1, a2))
    return Point2(a1, a2)


def classify_orbit(p: Point2, params: FlowParams) -> Stratum:
    """Stratum of the rotation-group orbit through p.

    For w < 0 the four separatrix orbits are exactly the nonzero locus of
    vanishing Casimir (the seeds (+-(1 - e^{-+lam})/(lam sqrt(-w)), +-1) all
    sit on it); membership is tested by |C| within 1e-9 off the origin.
    """
    w = params.omega
    c = casimir_value(p, params)
    at_origin = p.alpha1 == 0.0 and p.alpha2 == 0.0
    if w > 0.0:
        tag = OrbitClass.ORIGIN_FIXED_POINT if at_origin else OrbitClass.GENERIC_CIRCLE
    elif w == 0.0:
        tag = OrbitClass.FIXED_LINE if p.alpha2 == 0.0 else OrbitClass.GENERIC_PARABOLIC
    else:
        if at_origin:
            tag = OrbitClass.ORIGIN_FIXED_POINT
        elif abs(c) <= _SEPARATRIX_TOL:
            tag = OrbitClass.SEPARATRIX_ORBIT
        else:
            tag = OrbitClass.GENERIC_HYPERBOLIC
    return Stratum(tag, c)


def group_law(alpha_prime: Point2, alpha: Point2, lam: float) -> Point2:
    """Composition law of T_{lam,2}: (a'1 + e^{-lam a'2} a1, a'2 + a2)."""
    return Point2(
        alpha_prime.alpha1 + math.exp(-lam * alpha_prime.alpha2) * alpha.alpha1,
        alpha_prime.alpha2 + alpha.alpha2,
    )


def group_inverse(alpha: Point2, lam: float) -> Point2:
    return Point2(-math.exp(lam * alpha.alpha2) * alpha.alpha1, -alpha.alpha2)


def flow_coordinate_jets(
    phi0: float, order: int, p: Point2, params: FlowParams
) -> tuple[Jet, Jet]:
    """Taylor jets at phi0 of both coordinates of t -> Phi^t(p).

    Pushes the closed form through jet arithmetic; one code path serves all
    parameter regimes (the lam = 0 limit takes the linear branch).
    """
    w, lam = params.omega, params.lam
    t = Jet.identity(phi0, order)
    c, s = t.ck_cos(w), t.ck_sin(w)
    a1, a2 = p.alpha1, p.alpha2
    if lam == 0.0:
        return (c * a1 - s * a2, (s * a1).scale(w) + c * a2)
    h, q, r = _log_argument_data(p, params)
    L = c.scale(q) + s.scale(r) + h
    if L.coeffs[0] <= 0.0:
        raise DomainError(
            "jet base point lies outside the maximal flow interval",
            offending=L.coeffs[0],
        )
    e = math.exp(lam * a2)
    num = c.scale(2.0 * lam * a1 * e) + s.scale(
        w * lam * lam * a1 * a1 * e - 2.0 * math.sinh(lam * a2)
    )
    return (num / L.scale(2.0 * lam), L.log().scale(1.0 / lam))
