"""Named verification suites behind the `verify` CLI command.

Each suite runs a list of checks at the configured parameters and reports
name, tolerance and observed error per check.  Exact rational checks use
tolerance 0 and report the number of mismatches; float checks report the
maximum absolute error seen.  All randomness is drawn from a seeded
generator, so a fixed seed reproduces every report byte for byte.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction

from .flow import (
    FlowParams,
    OrbitClass,
    Point2,
    casimir_value,
    classify_orbit,
    flow,
    flow_domain,
    group_inverse,
    group_law,
    integrate_ode,
    invariant_h,
    vector_field,
)
from . import hopf as hp
from . import reps as rp
from .scalars import CKParams, DomainError, Jet, ck_cos, ck_sin

__all__ = ["CheckResult", "SUITES", "run_suite"]


@dataclass(frozen=True)
class CheckResult:
    name: str
    tolerance: float
    observed: float
    passed: bool


def _exact(name: str, mismatches: int) -> CheckResult:
    return CheckResult(name, 0.0, float(mismatches), mismatches == 0)


def _within(name: str, tol: float, err: float) -> CheckResult:
    return CheckResult(name, tol, err, err < tol)


def _monomials_upto(deg):
    return [
        (m, n, p)
        for m in range(deg + 1)
        for n in range(deg + 1 - m)
        for p in range(deg + 1 - m - n)
    ]


# ---------------------------------------------------------------------------
# hopf suite
# ---------------------------------------------------------------------------


def suite_hopf(omega, lam, trunc=8, jet_order=8, seed=0) -> list[CheckResult]:
    system = hp.RewriteSystem(CKParams(omega, lam), trunc)
    rng = random.Random(seed)
    results = []

    coassoc = counit_ax = antipode_ax = 0
    for alg in ("U", "F"):
        for mono in _monomials_upto(4):
            x = system.monomial(alg, mono)
            dx = system.coproduct(x)
            if system.coproduct_leg(dx, 0) != system.coproduct_leg(dx, 1):
                coassoc += 1
            for leg in (0, 1):
                collapsed = system.zero(alg)
                for (k1, k2), c in dx.terms.items():
                    passive, active = (k2, k1) if leg == 0 else (k1, k2)
                    if active == (0, 0, 0):
                        collapsed = collapsed + system.monomial(alg, passive, c)
                if collapsed != x:
                    counit_ax += 1
            eps = system.one(alg).scale(system.counit(x))
            for leg in (0, 1):
                if system.multiply_legs(system.map_leg(dx, leg, system.antipode)) != eps:
                    antipode_ax += 1
    results.append(_exact("coassociativity_deg4", coassoc))
    results.append(_exact("counit_axiom_deg4", counit_ax))
    results.append(_exact("antipode_axiom_deg4", antipode_ax))

    morphism = 0
    monos2 = _monomials_upto(2)
    for alg in ("U", "F"):
        for _ in range(6):
            x = system.monomial(alg, rng.choice(monos2))
            y = system.monomial(alg, rng.choice(monos2))
            if system.coproduct(system.multiply(x, y)) != system.multiply(
                system.coproduct(x), system.coproduct(y)
            ):
                morphism += 1
    results.append(_exact("coproduct_is_algebra_morphism", morphism))

    confluence = 0
    for alg in ("U", "F"):
        gens = [system.monomial(alg, m) for m in ((1, 0, 0), (0, 1, 0), (0, 0, 1))]
        for _ in range(6):
            letters = [rng.choice(gens) for _ in range(5)]
            left = letters[0]
            for g in letters[1:]:
                left = system.multiply(left, g)
            right = letters[-1]
            for g in reversed(letters[:-1]):
                right = system.multiply(g, right)
            split = system.multiply(
                system.multiply(letters[0], letters[1]),
                system.multiply(letters[2], system.multiply(letters[3], letters[4])),
            )
            if not (left == right == split):
                confluence += 1
    results.append(_exact("normal_order_confluence_5letter", confluence))

    if Fraction(lam) == 0:
        classical = 0
        for name in ("J", "P1", "P2"):
            g = system.generator("U", name)
            primitive = system.tensor(g, system.one("U")) + system.tensor(
                system.one("U"), g
            )
            if system.coproduct(g) != primitive or system.antipode(g) != g.scale(-1):
                classical += 1
        results.append(_exact("classical_limit_structure", classical))

    canonical = 0
    for alg in ("U", "F"):
        names = ("J", "P1", "P2") if alg == "U" else ("phi", "a1", "a2")
        for _ in range(25):
            x = system.element(
                alg,
                {
                    (rng.randint(0, 2), rng.randint(0, 2), rng.randint(0, 2)): Fraction(
                        rng.randint(-3, 3)
                    )
                    for _ in range(3)
                },
            )
            for i, ni in enumerate(names):
                for j, nj in enumerate(names):
                    d, m = hp.der_op(alg, ni), hp.mul_op(alg, nj)
                    want = x if i == j else system.zero(alg)
                    if (d * m - m * d).apply(x) != want:
                        canonical += 1
    results.append(_exact("formal_operator_commutators", canonical))

    roundtrip = 0
    for alg, word in (("U", ["P1", "J", "P2"]), ("F", ["a2", "a1", "phi"])):
        x = hp.normal_order(system, alg, word)
        text = hp.element_to_json(x)
        if hp.element_from_json(system, text) != x or hp.element_to_json(
            hp.element_from_json(system, text)
        ) != text:
            roundtrip += 1
    results.append(_exact("json_round_trip", roundtrip))
    return results


# ---------------------------------------------------------------------------
# pairing suite
# ---------------------------------------------------------------------------


def suite_pairing(omega, lam, trunc=8, jet_order=8, seed=0) -> list[CheckResult]:
    system = hp.RewriteSystem(CKParams(omega, lam), trunc)
    rng = random.Random(seed)
    results = []

    delta = 0
    for mu in _monomials_upto(3):
        for mf in _monomials_upto(3):
            want = (
                math.factorial(mu[0]) * math.factorial(mu[1]) * math.factorial(mu[2])
                if mu == mf
                else 0
            )
            if system.pairing(system.monomial("U", mu), system.monomial("F", mf)) != want:
                delta += 1
    results.append(_exact("pairing_delta_formula_deg3", delta))

    axiom1 = axiom2 = 0
    monos3 = _monomials_upto(3)
    small = [m for m in monos3 if sum(m) <= 2]
    for mx in small:
        for my in small:
            if sum(mx) + sum(my) > 3:
                continue
            x, y = system.monomial("U", mx), system.monomial("U", my)
            xy = system.multiply(x, y)
            xt = system.tensor(x, y)
            for mf in monos3:
                f = system.monomial("F", mf)
                if system.pairing(xy, f) != system.pairing(xt, system.coproduct(f)):
                    axiom1 += 1
    for mf in small:
        for mg in small:
            if sum(mf) + sum(mg) > 3:
                continue
            f, g = system.monomial("F", mf), system.monomial("F", mg)
            fg = system.multiply(f, g)
            ft = system.tensor(f, g)
            for mx in monos3:
                x = system.monomial("U", mx)
                if system.pairing(system.coproduct(x), ft) != system.pairing(x, fg):
                    axiom2 += 1
    results.append(_exact("pairing_product_coproduct_axiom", axiom1))
    results.append(_exact("pairing_coproduct_product_axiom", axiom2))

    anti = 0
    for mu in _monomials_upto(3):
        for mf in _monomials_upto(3):
            u, f = system.monomial("U", mu), system.monomial("F", mf)
            if system.pairing(system.antipode(u), f) != system.pairing(
                u, system.antipode(f)
            ):
                anti += 1
    results.append(_exact("antipode_intertwines_pairing", anti))

    adj = 0
    atoms = [hp.mul_op("U", g) for g in ("J", "P1", "P2")] + [
        hp.der_op("U", g) for g in ("J", "P1", "P2")
    ]
    for _ in range(25):
        op = atoms[rng.randrange(6)] * atoms[rng.randrange(6)]
        h = system.element(
            "U",
            {
                (rng.randint(0, 2), rng.randint(0, 2), rng.randint(0, 2)): Fraction(
                    rng.randint(-4, 4)
                )
                for _ in range(3)
            },
        )
        f = system.element(
            "F",
            {
                (rng.randint(0, 3), rng.randint(0, 3), rng.randint(0, 2)): Fraction(
                    rng.randint(-4, 4)
                )
                for _ in range(3)
            },
        )
        if system.pairing(op.apply(h), f) != system.pairing(h, hp.adjoint(op).apply(f)):
            adj += 1
    results.append(_exact("adjoint_operators_vs_pairing", adj))

    strg = 0
    for _ in range(10):
        terms = {
            (0, rng.randint(0, 3), rng.randint(0, 3)): Fraction(rng.randint(-5, 5))
            for _ in range(4)
        }
        x = system.element("U", terms)
        if hp.star(hp.star(x)) != x:
            strg += 1
    results.append(_exact("star_involution_translation_sector", strg))
    return results


# ---------------------------------------------------------------------------
# flow suite
# ---------------------------------------------------------------------------


def _admissible_time(rng, p, params, span=1.0):
    lo, hi = flow_domain(p, params)
    lo, hi = max(lo, -span), min(hi, span)
    if hi <= lo:
        return None
    return 0.9 * rng.uniform(lo, hi)


def suite_flow(omega, lam, trunc=8, jet_order=8, seed=0) -> list[CheckResult]:
    params = FlowParams(float(omega), float(lam))
    rng = random.Random(seed)
    results = []

    err = 0.0
    checked = 0
    while checked < 500:
        p = Point2(rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5))
        s = _admissible_time(rng, p, params)
        t = _admissible_time(rng, p, params)
        if s is None or t is None:
            continue
        lo, hi = flow_domain(p, params)
        if not (lo < s + t < hi):
            continue
        try:
            two = flow(s, flow(t, p, params), params)
            one = flow(s + t, p, params)
        except DomainError:
            continue
        err = max(err, abs(two.alpha1 - one.alpha1), abs(two.alpha2 - one.alpha2))
        checked += 1
    results.append(_within("flow_group_law_500", 1e-9, err))

    err = 0.0
    for p in (Point2(0.3, -0.2), Point2(-0.6, 0.4)):
        lo, hi = flow_domain(p, params)
        for t in (-1.2, 0.7, 1.9):
            if not (lo < t < hi):
                t = 0.8 * (hi if t > 0 else lo)
            exact = flow(t, p, params)
            approx = integrate_ode(t, p, params, step=1e-4)
            err = max(err, abs(exact.alpha1 - approx.alpha1), abs(exact.alpha2 - approx.alpha2))
    results.append(_within("flow_matches_rk4_1e-4", 1e-6, err))

    err = 0.0
    checked = 0
    while checked < 40:
        p = Point2(rng.uniform(-1.2, 1.2), rng.uniform(-1.2, 1.2))
        t = _admissible_time(rng, p, params)
        if t is None:
            continue
        q = flow(t, p, params)
        err = max(
            err,
            abs(invariant_h(q, params) - invariant_h(p, params)),
            abs(casimir_value(q, params) - casimir_value(p, params)),
        )
        checked += 1
    p = Point2(0.3, 0.5)
    for t in (0.4, 0.9):
        q = integrate_ode(t, p, params, step=1e-4)
        err = max(
            err,
            abs(invariant_h(q, params) - invariant_h(p, params)),
            abs(casimir_value(q, params) - casimir_value(p, params)),
        )
    results.append(_within("conserved_h_and_casimir", 1e-8, err))

    err = 0.0
    h = 1e-5
    for _ in range(30):
        p = Point2(rng.uniform(-1, 1), rng.uniform(-1, 1))
        try:
            plus, minus = flow(h, p, params), flow(-h, p, params)
        except DomainError:
            continue
        v = vector_field(p, params)
        err = max(
            err,
            abs((plus.alpha1 - minus.alpha1) / (2 * h) - v[0]),
            abs((plus.alpha2 - minus.alpha2) / (2 * h) - v[1]),
        )
    results.append(_within("tangent_matches_vector_field", 1e-6, err))

    err = 0.0
    zero = FlowParams(params.omega, 0.0)
    for _ in range(25):
        p = Point2(rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5))
        t = rng.uniform(-1.5, 1.5)
        got = flow(t, p, zero)
        c, s = ck_cos(params.omega, t), ck_sin(params.omega, t)
        err = max(
            err,
            abs(got.alpha1 - (c * p.alpha1 - s * p.alpha2)),
            abs(got.alpha2 - (params.omega * s * p.alpha1 + c * p.alpha2)),
        )
    results.append(_within("lambda_zero_linear_flow", 1e-10, err))

    bound = math.acosh(1 / math.tanh(1.0))
    lo, hi = flow_domain(Point2(0, -1), FlowParams(-1, 1))
    results.append(
        _within("domain_bound_arccosh_coth1", 1e-9, max(abs(hi - bound), abs(lo + bound)))
    )

    mismatches = 0
    n = 101
    for i in range(n):
        for j in range(n):
            p = Point2(-2 + 4 * i / (n - 1), -2 + 4 * j / (n - 1))
            fixed = vector_field(p, params) == (0.0, 0.0)
            tag = classify_orbit(p, params).tag
            if fixed != (
                tag in (OrbitClass.ORIGIN_FIXED_POINT, OrbitClass.FIXED_LINE)
            ):
                mismatches += 1
    results.append(_exact("fixed_strata_match_vector_field", mismatches))

    err = 0.0
    for _ in range(30):
        la = rng.uniform(-0.8, 0.8)
        p = Point2(rng.uniform(-2, 2), rng.uniform(-2, 2))
        e = group_law(p, group_inverse(p, la), la)
        err = max(err, abs(e.alpha1), abs(e.alpha2))
    results.append(_within("group_inverse_identity", 1e-12, err))
    return results


# ---------------------------------------------------------------------------
# reps suite
# ---------------------------------------------------------------------------


def suite_reps(omega, lam, trunc=8, jet_order=8, seed=0) -> list[CheckResult]:
    ck = CKParams(omega, lam)
    rng = random.Random(seed)
    results = []

    def bracket_rho(psi):
        w, la = ck.omega, ck.lam
        if la:
            out = (psi - psi.shift_a2(-2 * la)).scale(Fraction(1, 2) / la)
            out = out + psi.deriv(0).deriv(0).scale(la * w / 2)
        else:
            out = psi.deriv(1)
        return out

    rep = 0
    for r in range(9):
        for s in range(9 - r):
            psi = rp.PolyA.monomial(r, s)
            J = lambda f: rp.cospace_act("J", f, ck)
            P1 = lambda f: rp.cospace_act("P1", f, ck)
            P2 = lambda f: rp.cospace_act("P2", f, ck)
            if J(P1(psi)) - P1(J(psi)) != bracket_rho(psi):
                rep += 1
            if J(P2(psi)) - P2(J(psi)) != P1(psi).scale(-ck.omega):
                rep += 1
            if P1(P2(psi)) != P2(P1(psi)):
                rep += 1
    results.append(_exact("cospace_representation_property", rep))

    central = 0
    for r in range(9):
        for s in range(9 - r):
            psi = rp.PolyA.monomial(r, s)
            for gen in ("J", "P1", "P2"):
                if rp.casimir_apply(rp.cospace_act(gen, psi, ck), ck) != rp.cospace_act(
                    gen, rp.casimir_apply(psi, ck), ck
                ):
                    central += 1
    results.append(_exact("casimir_centrality", central))

    samples = 0
    if rp.casimir_apply(rp.PolyA.monomial(0, 2), ck) != rp.PolyA.one().scale(2):
        samples += 1
    if rp.casimir_apply(rp.PolyA.monomial(2, 0), ck) != rp.PolyA.one().scale(
        2 * ck.omega
    ):
        samples += 1
    if rp.cospace_act("J", rp.PolyA.monomial(0, 1), ck) != rp.PolyA.monomial(1, 0, -1):
        samples += 1
    results.append(_exact("casimir_and_rotation_samples", samples))

    local = 0
    for _ in range(100):
        psi = rp.PolyA(
            {
                (rng.randint(0, 4), rng.randint(0, 4)): Fraction(rng.randint(-5, 5))
                for _ in range(4)
            }
        )
        for gen in ("J", "P1", "P2"):
            if rp.local_act(gen, psi, 0, ck) != rp.cospace_act(gen, psi, ck):
                local += 1
    results.append(_exact("local_action_counit_character", local))

    w, la = ck.as_floats()
    err = 0.0
    for _ in range(10):
        alpha = (rng.uniform(-0.8, 0.8), rng.uniform(-0.8, 0.8))
        jet = Jet(0.0, [rng.uniform(-1, 1) for _ in range(jet_order + 1)])
        state = rp.InducedState(jet, alpha[0], alpha[1], ck)
        a = rp.induced_act("J", rp.induced_act("P2", state)).jet
        b = rp.induced_act("P2", rp.induced_act("J", state)).jet
        c = rp.induced_act("P1", state).jet.scale(w)
        err = max(err, max(abs(x) for x in (a - b - c).coeffs[:-1]))
    results.append(_within("induced_rotation_translation_bracket", 1e-8, err))

    err = 0.0
    for _ in range(10):
        alpha = (rng.uniform(-0.6, 0.6), rng.uniform(-0.6, 0.6))
        jet = Jet(0.0, [rng.uniform(-1, 1) for _ in range(jet_order + 1)])
        state = rp.InducedState(jet, alpha[0], alpha[1], ck)
        ab = rp.induced_act("P1", rp.induced_act("P2", state)).jet
        ba = rp.induced_act("P2", rp.induced_act("P1", state)).jet
        err = max(err, max(abs(x - y) for x, y in zip(ab.coeffs, ba.coeffs)))
    results.append(_within("induced_translations_commute", 1e-9, err))

    state = rp.InducedState(Jet.constant(1.0, 0.0, jet_order), 1.0, 0.0, CKParams(1, 0))
    got = rp.induced_act("P1", state).jet
    err = 0.0
    for k in range(jet_order + 1):
        want = (-1.0) ** (k // 2) / math.factorial(k) if k % 2 == 0 else 0.0
        err = max(err, abs(got.coeffs[k] - want))
    results.append(_within("induced_cosine_multiplier", 1e-12, err))

    err = 0.0
    eq_omega = float(omega) if float(omega) >= 0 else 1.0
    fp = FlowParams(eq_omega, la)
    alpha = Point2(0.4, -0.3)
    s = 0.37
    moved = flow(s, alpha, fp)
    for gen in ("P1", "P2"):
        a = rp.induced_act(
            gen,
            rp.InducedState(
                Jet.constant(1.0, 0.2, jet_order), moved.alpha1, moved.alpha2, CKParams(eq_omega, lam)
            ),
        ).jet
        b = rp.induced_act(
            gen,
            rp.InducedState(
                Jet.constant(1.0, 0.2 + s, jet_order), alpha.alpha1, alpha.alpha2, CKParams(eq_omega, lam)
            ),
        ).jet
        err = max(err, max(abs(x - y) for x, y in zip(a.coeffs, b.coeffs)))
    results.append(_within("induced_character_equivalence", 1e-8, err))

    err = 0.0
    for _ in range(10):
        a1c, a2c = rng.uniform(-1, 1), rng.uniform(-1, 1)
        wr, lr = rng.uniform(-2, 2), rng.uniform(0.25, 1.0)
        f = lambda x, y: math.exp(a1c * x + a2c * y)
        d2 = lambda x, y: a1c * a1c * math.exp(a1c * x + a2c * y)
        op = rp.casimir_apply_fn(f, FlowParams(wr, lr), d2_a1=d2)
        ev = rp.plane_wave_eigenvalue(Point2(a1c, a2c), FlowParams(wr, lr))
        for _ in range(20):
            x, y = rng.uniform(-1, 1), rng.uniform(-1, 1)
            err = max(err, abs(op(x, y) - ev * f(x, y)))
    results.append(_within("plane_wave_eigenfunction", 1e-9, err))

    err = 0.0
    for _ in range(5):
        a1c, a2c = rng.uniform(-0.05, 0.05), rng.uniform(-0.05, 0.05)
        wr = rng.uniform(-2, 2)
        got = rp.plane_wave_eigenvalue(Point2(a1c, a2c), FlowParams(wr, 1e-6))
        err = max(err, abs(got - (wr * a1c**2 + a2c**2)))
    results.append(_within("plane_wave_small_lambda_limit", 1e-9, err))

    system = hp.RewriteSystem(ck, trunc)
    coreg = 0
    f = system.monomial("F", (2, 1, 0))
    if rp.coregular_right(f, system.generator("U", "J")) != system.monomial(
        "F", (1, 1, 0), 2
    ):
        coreg += 1
    if rp.coregular_left(
        system.generator("U", "J"), system.generator("F", "phi")
    ) != system.one("F"):
        coreg += 1
    monos = [
        (a, b, c)
        for a in range(3)
        for b in range(3)
        for c in range(3)
        if a + b + c <= 3
    ]
    for _ in range(10):
        u = system.monomial("U", rng.choice(monos))
        h = system.monomial("U", rng.choice([m for m in monos if sum(m) <= 2]))
        ff = system.monomial("F", rng.choice(monos))
        if system.pairing(u, rp.coregular_right(ff, h)) != system.pairing(
            system.multiply(h, u), ff
        ):
            coreg += 1
        if system.pairing(u, rp.coregular_left(h, ff)) != system.pairing(
            system.multiply(u, h), ff
        ):
            coreg += 1
    results.append(_exact("coregular_actions_duality", coreg))
    return results


SUITES = {
    "hopf": suite_hopf,
    "pairing": suite_pairing,
    "flow": suite_flow,
    "reps": suite_reps,
}


def run_suite(name: str, omega, lam, trunc=8, jet_order=8, seed=0) -> list[CheckResult]:
    if name == "all":
        out = []
        for key in ("hopf", "pairing", "flow", "reps"):
            for check in SUITES[key](omega, lam, trunc=trunc, jet_order=jet_order, seed=seed):
                out.append(CheckResult(f"{key}.{check.name}", check.tolerance, check.observed, check.passed))
        return out
    if name not in SUITES:
        raise KeyError(name)
    return SUITES[name](omega, lam, trunc=trunc, jet_order=jet_order, seed=seed)
