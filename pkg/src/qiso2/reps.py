"""Representations: co-space and local actions on polynomials, the left and
right coregular actions, induced representations on jets, and the deformed
Casimir difference operator with its plane-wave eigenvalue.

The shift operators exp(c*lam*d/da2) appearing in the rotation action are
realized as exact polynomial substitutions a2 -> a2 + c*lam with rational
coefficients, so the whole polynomial layer is exact.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction

from .flow import FlowParams, Point2, flow_coordinate_jets
from .hopf import AlgebraElement, RewriteSystem
from .scalars import CKParams, Jet

__all__ = [
    "Character",
    "InducedState",
    "PolyA",
    "casimir_apply",
    "casimir_apply_fn",
    "coregular_left",
    "coregular_right",
    "cospace_act",
    "induced_act",
    "local_act",
    "plane_wave_eigenvalue",
    "poly_from_json",
    "poly_to_json",
]

_GENS = ("J", "P1", "P2")


class PolyA:
    """Exact polynomial sum(c_rs * a1^r a2^s) over the rationals."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        clean = {}
        for (r, s), c in (terms or {}).items():
            if r < 0 or s < 0:
                raise ValueError("exponents must be non-negative")
            c = Fraction(c)
            if c:
                clean[(int(r), int(s))] = c
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):  # pragma: no cover - immutability guard
        raise AttributeError("PolyA is immutable")

    @classmethod
    def monomial(cls, r: int, s: int, coef=1) -> "PolyA":
        return cls({(r, s): Fraction(coef)})

    @classmethod
    def one(cls) -> "PolyA":
        return cls.monomial(0, 0)

    def __eq__(self, other):
        return isinstance(other, PolyA) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other: "PolyA") -> "PolyA":
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, 0) + c
        return PolyA(out)

    def __sub__(self, other: "PolyA") -> "PolyA":
        return self + other.scale(-1)

    def scale(self, c) -> "PolyA":
        c = Fraction(c)
        return PolyA({k: c * v for k, v in self.terms.items()})

    def __rmul__(self, c):
        return self.scale(c)

    def bump(self, which: int) -> "PolyA":
        """Formal multiplication by a1 (which=0) or a2 (which=1)."""
        out = {}
        for (r, s), c in self.terms.items():
            key = (r + 1, s) if which == 0 else (r, s + 1)
            out[key] = c
        return PolyA(out)

    def deriv(self, which: int) -> "PolyA":
        out = {}
        for (r, s), c in self.terms.items():
            e = r if which == 0 else s
            if e:
                key = (r - 1, s) if which == 0 else (r, s - 1)
                out[key] = out.get(key, 0) + e * c
        return PolyA(out)

    def shift_a2(self, c) -> "PolyA":
        """Exact substitution a2 -> a2 + c (binomial expansion)."""
        c = Fraction(c)
        if not c:
            return self
        out = {}
        for (r, s), coef in self.terms.items():
            for k in range(s + 1):
                key = (r, k)
                out[key] = out.get(key, 0) + coef * math.comb(s, k) * c ** (s - k)
        return PolyA(out)

    def __call__(self, a1, a2):
        return sum(float(c) * a1**r * a2**s for (r, s), c in self.terms.items())

    def is_zero(self) -> bool:
        return not self.terms

    def __repr__(self):
        if not self.terms:
            return "0"

        def fmt(r, s):
            parts = []
            if r:
                parts.append(f"a1^{r}" if r > 1 else "a1")
            if s:
                parts.append(f"a2^{s}" if s > 1 else "a2")
            return "*".join(parts) if parts else "1"

        return " + ".join(f"({self.terms[k]})*{fmt(*k)}" for k in sorted(self.terms))


@dataclass(frozen=True)
class Character:
    """A one-dimensional module: a point of the translation group (kind "L")
    or a scalar on the rotation sector (kind "K")."""

    kind: str
    point: tuple[float, float] | None = None
    scalar: float | None = None

    def __post_init__(self):
        if self.kind == "L":
            if self.point is None:
                raise ValueError("an L-character needs a point (alpha1, alpha2)")
        elif self.kind == "K":
            if self.scalar is None:
                raise ValueError("a K-character needs a scalar")
        else:
            raise ValueError("character kind must be 'L' or 'K'")


@dataclass(frozen=True)
class InducedState:
    """A function of the angle coordinate (as a jet) in the module induced by
    a translation character."""

    jet: Jet
    alpha1: float
    alpha2: float
    params: CKParams

    def __post_init__(self):
        if self.jet.order < 2:
            raise ValueError("induced states need jets of order >= 2")

    def flow_params(self) -> FlowParams:
        w, lam = self.params.as_floats()
        return FlowParams(w, lam)


# ---------------------------------------------------------------------------
# co-space and local actions on PolyA
# ---------------------------------------------------------------------------


def _rotation_operator(psi: PolyA, params: CKParams) -> PolyA:
    """-a1bar (1 - T_{-2 lam})/(2 lam) psi + w a2bar d1 psi - (lam w/2) a1bar d1^2 psi."""
    w, lam = params.omega, params.lam
    if lam:
        diff = (psi - psi.shift_a2(-2 * lam)).scale(Fraction(1, 2) / lam)
    else:
        diff = psi.deriv(1)
    out = diff.bump(0).scale(-1)
    if w:
        out = out + psi.deriv(0).bump(1).scale(w)
        if lam:
            out = out + psi.deriv(0).deriv(0).bump(0).scale(-lam * w / 2)
    return out


def cospace_act(gen: str, psi: PolyA, params: CKParams) -> PolyA:
    """Action of a generator on the noncommutative-plane sector: P_i act as
    derivations, the rotation by the exact shift-difference operator."""
    if gen == "P1":
        return psi.deriv(0)
    if gen == "P2":
        return psi.deriv(1)
    if gen == "J":
        return _rotation_operator(psi, params)
    raise ValueError(f"unknown generator {gen!r}")


def local_act(gen: str, psi: PolyA, c, params: CKParams) -> PolyA:
    """Local representation with rotation character c: the co-space action
    plus c times the identity on the rotation generator."""
    if gen == "J":
        return psi.scale(c) + cospace_act("J", psi, params)
    return cospace_act(gen, psi, params)


def casimir_apply(f: PolyA, params: CKParams) -> PolyA:
    """The central element as a shift-difference operator, exact on PolyA."""
    w, lam = params.omega, params.lam
    if lam:
        up, down = f.shift_a2(lam), f.shift_a2(-lam)
        out = (up + down - f.scale(2)).scale(Fraction(1) / lam**2)
        if w:
            out = out + up.deriv(0).deriv(0).scale(w)
        return out
    out = f.deriv(1).deriv(1)
    if w:
        out = out + f.deriv(0).deriv(0).scale(w)
    return out


def casimir_apply_fn(f, params: CKParams | FlowParams, d2_a1=None):
    """Same operator on a sampled function.

    `f(a1, a2) -> float`; shifts are evaluated exactly at shifted points.
    The a1-second-derivative uses the exact evaluator `d2_a1` when given and
    a 4th-order central difference otherwise.
    """
    if isinstance(params, FlowParams):
        w, lam = params.omega, params.lam
    else:
        w, lam = params.as_floats()

    def second_derivative(g, a1, a2, h=1e-2):
        if d2_a1 is not None:
            return d2_a1(a1, a2)
        return (
            -g(a1 + 2 * h, a2)
            + 16 * g(a1 + h, a2)
            - 30 * g(a1, a2)
            + 16 * g(a1 - h, a2)
            - g(a1 - 2 * h, a2)
        ) / (12 * h * h)

    if lam == 0.0:

        def out0(a1, a2, h=1e-2):
            d2a2 = (
                -f(a1, a2 + 2 * h)
                + 16 * f(a1, a2 + h)
                - 30 * f(a1, a2)
                + 16 * f(a1, a2 - h)
                - f(a1, a2 - 2 * h)
            ) / (12 * h * h)
            return w * second_derivative(f, a1, a2) + d2a2

        return out0

    def out(a1, a2):
        diff = (f(a1, a2 + lam) + f(a1, a2 - lam) - 2.0 * f(a1, a2)) / (lam * lam)
        return w * second_derivative(f, a1, a2 + lam) + diff

    return out


def plane_wave_eigenvalue(alpha: Point2, params: CKParams | FlowParams) -> float:
    """Casimir eigenvalue on the exponential plane wave labelled by alpha."""
    if isinstance(params, FlowParams):
        w, lam = params.omega, params.lam
    else:
        w, lam = params.as_floats()
    from .flow import casimir_value

    return casimir_value(alpha, FlowParams(w, lam))


# ---------------------------------------------------------------------------
# coregular actions on the dual function algebra
# ---------------------------------------------------------------------------


def coregular_left(h: AlgebraElement, f: AlgebraElement, D: int | None = None) -> AlgebraElement:
    """Left coregular action of a U element on an F element.

    Generators act by the operator dictionary d/dphi, derivations d/da_i and
    the exact a2-exponent shift; extended to products contravariantly along
    h's monomials (h1 h2 acting = h1 acting after h2).
    """
    if h.alg != "U" or f.alg != "F" or h.legs != 1 or f.legs != 1:
        raise ValueError("coregular_left takes a U element acting on an F element")
    system = f.system
    out = system.zero("F")
    for (m, n, p), c in h.terms.items():
        cur = f
        for _ in range(p):
            cur = _coregular_left_gen("P2", cur)
        for _ in range(n):
            cur = _coregular_left_gen("P1", cur)
        for _ in range(m):
            cur = _coregular_left_gen("J", cur)
        out = out + cur.scale(c)
    return out


def _coregular_left_gen(gen: str, f: AlgebraElement) -> AlgebraElement:
    system = f.system
    w, lam = system.params.omega, system.params.lam
    out: dict = {}

    def add(key, c):
        if c:
            acc = out.get(key, 0) + c
            if acc:
                out[key] = acc
            elif key in out:
                del out[key]

    for (q, r, s), c in f.terms.items():
        if gen == "P1":
            if r:
                add((q, r - 1, s), r * c)
        elif gen == "P2":
            if s:
                add((q, r, s - 1), s * c)
        else:
            if q:
                add((q - 1, r, s), q * c)
            # -a1bar (1 - T_{-2 lam})/(2 lam) on the a2 exponent
            if lam:
                half = Fraction(1, 2) / lam
                add((q, r + 1, s), -half * c)
                for k in range(s + 1):
                    add((q, r + 1, k), half * c * math.comb(s, k) * (-2 * lam) ** (s - k))
            else:
                if s:
                    add((q, r + 1, s - 1), -s * c)
            if w and r:
                add((q, r - 1, s + 1), w * r * c)
                if lam and r >= 2:
                    add((q, r - 1, s), -lam * w / 2 * r * (r - 1) * c)
    return AlgebraElement(system, "F", out)


def coregular_right(f: AlgebraElement, h: AlgebraElement, D: int | None = None) -> AlgebraElement:
    """Right coregular action computed through duality: the coefficient of
    the basis monomial z in f < h is <h * u_z, f> / (q! r! s!) with u_z the
    dual basis monomial of z."""
    if f.alg != "F" or h.alg != "U" or f.legs != 1 or h.legs != 1:
        raise ValueError("coregular_right takes an F element acted on by a U element")
    system = f.system
    if D is None:
        D = system.trunc
    if not f.terms or not h.terms:
        return system.zero("F")
    # the a-exponents of f < h never exceed those of f (no rewrite rule and no
    # coproduct leg creates a-letters), while the phi-exponent is only bounded
    # by the truncation: J-annihilation feeds arbitrarily high rotation powers
    deg_h = max(sum(k) for k in h.terms)
    rmax = max(k[1] for k in f.terms) + deg_h
    smax = max(k[2] for k in f.terms) + deg_h
    out = {}
    for r in range(rmax + 1):
        for s in range(smax + 1):
            for q in range(D + 1):
                # the result monomial and its dual must both be representable
                if q + r > D or r + s > D:
                    continue
                u_z = system.monomial("U", (q, r, s))
                coef = system.pairing(system.multiply(h, u_z), f)
                if coef:
                    norm = (
                        math.factorial(q) * math.factorial(r) * math.factorial(s)
                    )
                    out[(q, r, s)] = coef / norm
    return AlgebraElement(system, "F", out)


# ---------------------------------------------------------------------------
# induced representation on jets
# ---------------------------------------------------------------------------


def induced_act(gen: str, state: InducedState) -> InducedState:
    """Right action on the induced module: the rotation generator
    differentiates the jet, translations multiply by the jets of the flow
    coordinates through the character point at the jet's base."""
    if gen == "J":
        new = state.jet.deriv(pad=True)
    elif gen in ("P1", "P2"):
        m1, m2 = flow_coordinate_jets(
            state.jet.base,
            state.jet.order,
            Point2(state.alpha1, state.alpha2),
            state.flow_params(),
        )
        new = state.jet * (m1 if gen == "P1" else m2)
    else:
        raise ValueError(f"unknown generator {gen!r}")
    return InducedState(new, state.alpha1, state.alpha2, state.params)


# ---------------------------------------------------------------------------
# JSON forms
# ---------------------------------------------------------------------------


def poly_to_json(psi: PolyA) -> str:
    items = [
        {"r": r, "s": s, "coef": str(psi.terms[(r, s)])}
        for r, s in sorted(psi.terms)
    ]
    return json.dumps({"terms": items}, separators=(",", ":"))


def poly_from_json(text: str) -> PolyA:
    data = json.loads(text)
    return PolyA(
        {(item["r"], item["s"]): Fraction(item["coef"]) for item in data["terms"]}
    )
