import math
import random

import pytest

from qiso2.flow import (
    FlowParams,
    OrbitClass,
    Point2,
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
from qiso2.scalars import DomainError


def rand_params(rng, omegas=(-1.0, 0.0, 1.0)):
    return FlowParams(rng.choice(omegas) * rng.uniform(0.5, 1.5), rng.uniform(0.0, 0.6))


def admissible_time(p, params, rng, span=1.0):
    lo, hi = flow_domain(p, params)
    lo, hi = max(lo, -span), min(hi, span)
    if hi <= lo:
        return None
    t = rng.uniform(lo, hi)
    return 0.9 * t


# -- vector field ------------------------------------------------------------


def test_vector_field_fixed_point_origin():
    for params in (FlowParams(1, 0.5), FlowParams(-1, 0.25), FlowParams(0, 1)):
        assert vector_field(Point2(0, 0), params) == (0.0, 0.0)


def test_vector_field_direct_substitution():
    got = vector_field(Point2(1, 0), FlowParams(1, 0.5))
    assert abs(got[0] + 0.25) < 1e-15
    assert got[1] == 1.0
    got = vector_field(Point2(0, 1), FlowParams(0, 1))
    assert abs(got[0] + (1 - math.exp(-2)) / 2) < 1e-15
    assert got[1] == 0.0


def test_vector_field_lambda_zero_limit():
    got = vector_field(Point2(0.7, -1.2), FlowParams(2.0, 0.0))
    assert got == (1.2, 1.4)


# -- flow ----------------------------------------------------------------------


def test_flow_identity_at_zero():
    rng = random.Random(41)
    for _ in range(200):
        params = rand_params(rng)
        p = Point2(rng.uniform(-2, 2), rng.uniform(-2, 2))
        q = flow(0.0, p, params)
        assert q.alpha1 == pytest.approx(p.alpha1, abs=1e-12)
        assert q.alpha2 == pytest.approx(p.alpha2, abs=1e-12)


def test_flow_linear_limit_quarter_turn():
    q = flow(math.pi / 2, Point2(1, 0), FlowParams(1, 0))
    assert abs(q.alpha1) < 1e-12
    assert abs(q.alpha2 - 1) < 1e-12


def test_flow_matches_rk4():
    params = FlowParams(1, 0.5)
    p = Point2(0.3, -0.2)
    exact = flow(0.7, p, params)
    approx = integrate_ode(0.7, p, params, step=1e-4)
    assert abs(exact.alpha1 - approx.alpha1) < 1e-6
    assert abs(exact.alpha2 - approx.alpha2) < 1e-6


def test_flow_rk4_agreement_grid():
    for w in (-1.0, 0.0, 1.0):
        for lam in (0.0, 0.25, 0.5):
            params = FlowParams(w, lam)
            for p in (Point2(0.3, -0.2), Point2(-0.6, 0.4)):
                lo, hi = flow_domain(p, params)
                for t in (-1.2, 0.7, 1.9):
                    if not (lo < t < hi):
                        t = 0.8 * (hi if t > 0 else lo)
                    exact = flow(t, p, params)
                    approx = integrate_ode(t, p, params, step=1e-3)
                    assert abs(exact.alpha1 - approx.alpha1) < 1e-6
                    assert abs(exact.alpha2 - approx.alpha2) < 1e-6


def test_flow_group_property():
    rng = random.Random(42)
    checked = 0
    while checked < 150:
        params = rand_params(rng)
        p = Point2(rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5))
        s = admissible_time(p, params, rng)
        t = admissible_time(p, params, rng)
        if s is None or t is None:
            continue
        lo, hi = flow_domain(p, params)
        if not (lo < s + t < hi):
            continue
        try:
            pt = flow(t, p, params)
            ps_t = flow(s, pt, params)
            pst = flow(s + t, p, params)
        except DomainError:
            continue
        assert abs(ps_t.alpha1 - pst.alpha1) < 1e-9
        assert abs(ps_t.alpha2 - pst.alpha2) < 1e-9
        checked += 1


def test_flow_tangent_is_vector_field():
    rng = random.Random(43)
    h = 1e-5
    for _ in range(40):
        params = rand_params(rng)
        p = Point2(rng.uniform(-1, 1), rng.uniform(-1, 1))
        plus, minus = flow(h, p, params), flow(-h, p, params)
        v = vector_field(p, params)
        assert abs((plus.alpha1 - minus.alpha1) / (2 * h) - v[0]) < 1e-6
        assert abs((plus.alpha2 - minus.alpha2) / (2 * h) - v[1]) < 1e-6


def test_lambda_continuity_linear_rate():
    p = Point2(0.4, 0.7)
    t = 0.9
    for w in (-1.0, 0.0, 1.0):
        base = flow(t, p, FlowParams(w, 0.0))
        lam = 1e-3

        def gap(la):
            q = flow(t, p, FlowParams(w, la))
            return math.hypot(q.alpha1 - base.alpha1, q.alpha2 - base.alpha2)

        ratio = gap(lam) / gap(lam / 2)
        assert abs(ratio - 2.0) < 0.2


# -- conserved quantities ----------------------------------------------------------


def test_invariants_at_origin():
    params = FlowParams(1, 0.5)
    assert invariant_h(Point2(0, 0), params) == 1.0
    assert casimir_value(Point2(0, 0), params) == 0.0


def test_casimir_small_lambda_limit():
    # the deviation from the undeformed value is O(lam * w * a1^2 * a2), so a
    # 1e-9 absolute agreement at lam = 1e-6 needs moderate points
    for w in (-1.0, 0.5, 2.0):
        p = Point2(0.05, -0.04)
        got = casimir_value(p, FlowParams(w, 1e-6))
        assert abs(got - (w * p.alpha1**2 + p.alpha2**2)) < 1e-9
    # and the rate of convergence is linear in lam at generic points
    p = Point2(0.8, -1.1)
    w = 2.0
    gap = lambda la: abs(
        casimir_value(p, FlowParams(w, la)) - (w * p.alpha1**2 + p.alpha2**2)
    )
    assert abs(gap(1e-4) / gap(5e-5) - 2.0) < 0.01


def test_invariants_conserved_along_flow():
    rng = random.Random(44)
    checked = 0
    while checked < 60:
        params = rand_params(rng)
        p = Point2(rng.uniform(-1.2, 1.2), rng.uniform(-1.2, 1.2))
        t = admissible_time(p, params, rng)
        if t is None:
            continue
        q = flow(t, p, params)
        assert abs(invariant_h(q, params) - invariant_h(p, params)) < 1e-9
        assert abs(casimir_value(q, params) - casimir_value(p, params)) < 1e-8
        checked += 1


def test_invariants_conserved_along_rk4():
    params = FlowParams(-1, 0.25)
    p = Point2(0.3, 0.5)
    for t in (0.4, 0.8, 1.2):
        q = integrate_ode(t, p, params, step=1e-4)
        assert abs(casimir_value(q, params) - casimir_value(p, params)) < 1e-8
        assert abs(invariant_h(q, params) - invariant_h(p, params)) < 1e-8


def test_h_and_casimir_consistency():
    # C = 2 (h - 1) / lam^2 for lam != 0
    rng = random.Random(45)
    for _ in range(30):
        params = FlowParams(rng.uniform(-2, 2), rng.uniform(0.1, 1.0))
        p = Point2(rng.uniform(-1, 1), rng.uniform(-1, 1))
        h = invariant_h(p, params)
        c = casimir_value(p, params)
        assert abs(c - 2 * (h - 1) / params.lam**2) < 1e-9


# -- domain ---------------------------------------------------------------------


def test_domain_global_for_nonneg_omega():
    assert flow_domain(Point2(3, -2), FlowParams(1, 0.5)) == (-math.inf, math.inf)
    assert flow_domain(Point2(3, -2), FlowParams(0, 0.5)) == (-math.inf, math.inf)


def test_domain_bound_matches_arccosh_form():
    # for p = (0, alpha2) with lam*alpha2 < 0 the bound is C^-1(-coth(lam a2))
    bound = math.acosh(1 / math.tanh(1.0))
    lo, hi = flow_domain(Point2(0, -1), FlowParams(-1, 1))
    assert abs(hi - bound) < 1e-9
    assert abs(lo + bound) < 1e-9
    with pytest.raises(DomainError):
        flow(hi + 1e-6, Point2(0, -1), FlowParams(-1, 1))
    q = flow(hi - 1e-3, Point2(0, -1), FlowParams(-1, 1))
    assert math.isfinite(q.alpha1)


def test_domain_fixed_point_unbounded():
    assert flow_domain(Point2(0, 0), FlowParams(-1, 1)) == (-math.inf, math.inf)


def test_domain_edges_consistent_with_flow():
    rng = random.Random(46)
    for _ in range(40):
        params = FlowParams(rng.uniform(-2, -0.2), rng.uniform(0.1, 0.8))
        p = Point2(rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5))
        lo, hi = flow_domain(p, params)
        for edge, inside in ((hi, hi - 1e-4), (lo, lo + 1e-4)):
            if math.isfinite(edge):
                flow(inside, p, params)  # must not raise
                with pytest.raises(DomainError):
                    flow(edge + math.copysign(1e-4, edge), p, params)


# -- RK4 oracle --------------------------------------------------------------------


def test_rk4_identity_at_zero():
    p = Point2(0.3, 0.4)
    assert integrate_ode(0.0, p, FlowParams(1, 0.5), 1e-3) == p


def test_rk4_convergence_order():
    params = FlowParams(1, 0.5)
    p = Point2(0.3, -0.2)
    t = 0.7
    exact = flow(t, p, params)

    def err(step):
        q = integrate_ode(t, p, params, step)
        return math.hypot(q.alpha1 - exact.alpha1, q.alpha2 - exact.alpha2)

    ratio = err(2e-2) / err(1e-2)
    assert 10 < ratio < 24  # ~16 for a 4th-order method


def test_rk4_parabolic_closed_form():
    got = integrate_ode(2.0, Point2(1, 1), FlowParams(0, 0), step=1e-3)
    assert abs(got.alpha1 + 1) < 1e-8
    assert abs(got.alpha2 - 1) < 1e-8


def test_rk4_rejects_bad_step():
    with pytest.raises(ValueError):
        integrate_ode(1.0, Point2(0, 0), FlowParams(1, 0.5), step=0.0)


# -- orbits -------------------------------------------------------------------------


def test_orbit_separatrix_seeds():
    lam = 1.0
    for w in (-1.0, -2.0):
        rt = math.sqrt(-w)
        seeds = [
            Point2((1 - math.exp(-lam)) / (lam * rt), 1),
            Point2((1 - math.exp(lam)) / (lam * rt), -1),
            Point2(-(1 - math.exp(-lam)) / (lam * rt), 1),
            Point2(-(1 - math.exp(lam)) / (lam * rt), -1),
        ]
        for seed in seeds:
            s = classify_orbit(seed, FlowParams(w, lam))
            assert s.tag is OrbitClass.SEPARATRIX_ORBIT
            assert abs(s.conserved_value) < 1e-9


def test_orbit_examples():
    assert classify_orbit(Point2(5, 0), FlowParams(0, 1)).tag is OrbitClass.FIXED_LINE
    assert classify_orbit(Point2(1, 0), FlowParams(1, 0.5)).tag is OrbitClass.GENERIC_CIRCLE
    assert (
        classify_orbit(Point2(0, 0), FlowParams(-1, 1)).tag is OrbitClass.ORIGIN_FIXED_POINT
    )
    assert (
        classify_orbit(Point2(0.4, 0.7), FlowParams(-1, 0.5)).tag
        is OrbitClass.GENERIC_HYPERBOLIC
    )
    assert (
        classify_orbit(Point2(1, 2), FlowParams(0, 0.5)).tag is OrbitClass.GENERIC_PARABOLIC
    )


def test_fixed_strata_are_exact_zeros_of_vector_field():
    for w, lam in ((-1.0, 0.5), (0.0, 0.5), (1.0, 0.25)):
        params = FlowParams(w, lam)
        n = 101
        for i in range(n):
            for j in range(n):
                p = Point2(-2 + 4 * i / (n - 1), -2 + 4 * j / (n - 1))
                fixed = vector_field(p, params) == (0.0, 0.0)
                tag = classify_orbit(p, params).tag
                expected_fixed = tag in (
                    OrbitClass.ORIGIN_FIXED_POINT,
                    OrbitClass.FIXED_LINE,
                )
                assert fixed == expected_fixed


def test_stratum_types_match_undeformed():
    # deformation does not change the stratum types: probing the origin, a
    # separatrix seed and generic points yields the same tag set for lam = 0
    # and lam != 0
    def probe_tags(w, lam):
        params = FlowParams(w, lam)
        pts = [Point2(0, 0), Point2(0.37, 0.91), Point2(1.3, 0), Point2(0, -0.8)]
        if w < 0:
            rt = math.sqrt(-w)
            if lam == 0.0:
                pts.append(Point2(1 / rt, 1))
            else:
                pts.append(Point2((1 - math.exp(-lam)) / (lam * rt), 1))
        return frozenset(classify_orbit(p, params).tag for p in pts)

    for w in (-1.0, 0.0, 1.0):
        assert probe_tags(w, 0.0) == probe_tags(w, 0.4)


# -- T_{lam,2} group law --------------------------------------------------------------


def test_group_identity():
    p = Point2(0.3, -0.8)
    q = group_law(Point2(0, 0), p, 0.7)
    assert q == p
    q = group_law(p, Point2(0, 0), 0.7)
    assert q == p


def test_group_abelian_limit():
    p, q = Point2(0.3, -0.8), Point2(1.1, 0.2)
    got = group_law(p, q, 0.0)
    assert got == Point2(p.alpha1 + q.alpha1, p.alpha2 + q.alpha2)


def test_group_inverse_random():
    rng = random.Random(47)
    for _ in range(50):
        lam = rng.uniform(-1, 1)
        p = Point2(rng.uniform(-2, 2), rng.uniform(-2, 2))
        e = group_law(p, group_inverse(p, lam), lam)
        assert abs(e.alpha1) < 1e-12 and abs(e.alpha2) < 1e-12
        e = group_law(group_inverse(p, lam), p, lam)
        assert abs(e.alpha1) < 1e-12 and abs(e.alpha2) < 1e-12


def test_group_associative():
    rng = random.Random(48)
    for _ in range(30):
        lam = rng.uniform(-0.8, 0.8)
        a, b, c = (Point2(rng.uniform(-1, 1), rng.uniform(-1, 1)) for _ in range(3))
        lhs = group_law(group_law(a, b, lam), c, lam)
        rhs = group_law(a, group_law(b, c, lam), lam)
        assert abs(lhs.alpha1 - rhs.alpha1) < 1e-12
        assert abs(lhs.alpha2 - rhs.alpha2) < 1e-12


# -- flow jets -------------------------------------------------------------------------


def test_flow_jets_match_flow_values():
    rng = random.Random(49)
    for _ in range(25):
        params = rand_params(rng)
        p = Point2(rng.uniform(-1, 1), rng.uniform(-1, 1))
        lo, hi = flow_domain(p, params)
        phi0 = 0.3 * min(1.0, hi if math.isfinite(hi) else 1.0)
        if not (lo < phi0 < hi):
            continue
        m1, m2 = flow_coordinate_jets(phi0, 8, p, params)
        for dt in (0.0, 0.02, -0.02):
            q = flow(phi0 + dt, p, params)
            assert abs(m1(phi0 + dt) - q.alpha1) < 1e-9
            assert abs(m2(phi0 + dt) - q.alpha2) < 1e-9


def test_flow_jets_domain_error():
    params = FlowParams(-1, 1)
    _, hi = flow_domain(Point2(0, -1), params)
    with pytest.raises(DomainError):
        flow_coordinate_jets(hi + 0.1, 8, Point2(0, -1), params)
