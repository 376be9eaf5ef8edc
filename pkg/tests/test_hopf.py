import json
import math
import random
from fractions import Fraction

import pytest

from qiso2.hopf import (
    AlgebraElement,
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
from qiso2.scalars import CKParams

HALF = Fraction(1, 2)


def system(omega=1, lam=HALF, trunc=8):
    return RewriteSystem(CKParams(omega, lam), trunc)


def exp_series_oracle(c, order):
    # independent expansion of exp(c*t): c^k/k!
    return [Fraction(c) ** k / math.factorial(k) for k in range(order + 1)]


def bracket_series_oracle(lam, order):
    # (1 - exp(-2*lam*t))/(2*lam) expanded independently of the engine
    lam = Fraction(lam)
    if lam == 0:
        return [Fraction(0), Fraction(1)] + [Fraction(0)] * (order - 1)
    e = exp_series_oracle(-2 * lam, order)
    return [(Fraction(k == 0) - e[k]) / (2 * lam) for k in range(order + 1)]


def monomials_upto(deg):
    out = []
    for m in range(deg + 1):
        for n in range(deg + 1 - m):
            for p in range(deg + 1 - m - n):
                out.append((m, n, p))
    return out


# -- normal ordering ---------------------------------------------------------


def test_p2_j_swap():
    sys_ = system()
    got = normal_order(sys_, "U", ["P2", "J"])
    assert got.coefficient((1, 0, 1)) == 1
    assert got.coefficient((0, 1, 0)) == 1  # omega = 1
    assert len(got.terms) == 2


def test_p1_p2_already_ordered():
    sys_ = system()
    got = normal_order(sys_, "U", ["P1", "P2"])
    assert got.terms == {(0, 1, 1): Fraction(1)}


def test_p1_j_expansion_matches_series_oracle():
    lam, w = HALF, Fraction(1)
    sys_ = system(w, lam, trunc=3)
    got = normal_order(sys_, "U", ["P1", "J"])
    ser = bracket_series_oracle(lam, 3)
    assert got.coefficient((1, 1, 0)) == 1  # J P1
    for k in range(1, 4):
        assert got.coefficient((0, 0, k)) == -ser[k]
    assert got.coefficient((0, 2, 0)) == -lam * w / 2
    # spec display at D=3: J P1 - P2 + lam P2^2 - (lam w / 2) P1^2 + ...
    assert got.coefficient((0, 0, 1)) == -1
    assert got.coefficient((0, 0, 2)) == lam


def test_a2_phi_expansion():
    lam, w = HALF, Fraction(1)
    sys_ = system(w, lam, trunc=3)
    got = normal_order(sys_, "F", ["a2", "phi"])
    assert got.coefficient((1, 0, 1)) == 1  # phi a2
    assert got.coefficient((1, 0, 0)) == -lam
    assert got.coefficient((3, 0, 0)) == lam * w / 6


def test_lambda_zero_rules_are_analytic_limits():
    sys_ = system(1, 0)
    got = normal_order(sys_, "U", ["P1", "J"])
    assert got.terms == {(1, 1, 0): Fraction(1), (0, 0, 1): Fraction(-1)}
    gotf = normal_order(sys_, "F", ["a2", "phi"])
    assert gotf.terms == {(1, 0, 1): Fraction(1)}
    gota = normal_order(sys_, "F", ["a2", "a1"])
    assert gota.terms == {(0, 1, 1): Fraction(1)}


def test_unknown_generator_rejected():
    with pytest.raises(ValueError):
        normal_order(system(), "U", ["Q"])


# -- multiplication -----------------------------------------------------------


def test_multiply_unit():
    sys_ = system()
    x = sys_.element("U", {(1, 2, 0): Fraction(3, 7), (0, 0, 2): 1})
    assert multiply(sys_.one("U"), x) == x
    assert multiply(x, sys_.one("U")) == x


def test_commutator_j_p2():
    for w in (Fraction(1), Fraction(-1), Fraction(0), Fraction(3, 2)):
        sys_ = system(w, HALF)
        J, P1, P2 = (sys_.generator("U", g) for g in ("J", "P1", "P2"))
        comm = multiply(J, P2) - multiply(P2, J)
        assert comm == P1.scale(-w)


def test_associativity_triple_exact():
    sys_ = system(1, HALF, trunc=6)
    J, P1, P2 = (sys_.generator("U", g) for g in ("J", "P1", "P2"))
    assert multiply(multiply(J, P1), P2) == multiply(J, multiply(P1, P2))


def test_confluence_random_bracketings():
    rng = random.Random(7)
    for alg in ("U", "F"):
        sys_ = system(Fraction(-1), Fraction(1, 3), trunc=8)
        gens = [sys_.generator(alg, g) for g in ("J", "P1", "P2")] if alg == "U" else [
            sys_.generator(alg, g) for g in ("phi", "a1", "a2")
        ]
        for _ in range(8):
            letters = [rng.choice(gens) for _ in range(5)]

            def fold_left(items):
                acc = items[0]
                for it in items[1:]:
                    acc = multiply(acc, it)
                return acc

            def fold_right(items):
                acc = items[-1]
                for it in reversed(items[:-1]):
                    acc = multiply(it, acc)
                return acc

            mid = multiply(fold_left(letters[:2]), fold_right(letters[2:]))
            assert fold_left(letters) == fold_right(letters) == mid


def test_tag_mismatch_rejected():
    sys_ = system()
    with pytest.raises(ValueError):
        multiply(sys_.generator("U", "J"), sys_.generator("F", "phi"))


# -- coproduct / counit / antipode ---------------------------------------------


def test_coproduct_p2_primitive():
    sys_ = system()
    got = coproduct(sys_.generator("U", "P2"))
    assert got.terms == {
        ((0, 0, 1), (0, 0, 0)): Fraction(1),
        ((0, 0, 0), (0, 0, 1)): Fraction(1),
    }


def test_coproduct_unit_grouplike():
    sys_ = system()
    assert coproduct(sys_.one("U")) == sys_.one("U", legs=2)


def test_coproduct_a2_truncated():
    w = Fraction(1)
    sys_ = system(w, HALF, trunc=2)
    got = coproduct(sys_.generator("F", "a2"))
    assert got.coefficient(((0, 1, 0), (1, 0, 0))) == -1  # -a1 (x) phi
    assert got.coefficient(((0, 0, 1), (0, 0, 0))) == 1  # a2 (x) 1
    assert got.coefficient(((0, 0, 0), (0, 0, 1))) == 1  # 1 (x) a2
    # O(phi^2) leg of a2 (x) C_w(phi)
    assert got.coefficient(((0, 0, 1), (2, 0, 0))) == -w / 2


def test_counit_values():
    sys_ = system()
    assert counit(sys_.generator("U", "J")) == 0
    assert counit(sys_.one("U")) == 1
    assert counit(sys_.generator("F", "a1")) == 0


def test_antipode_p2():
    sys_ = system()
    assert antipode(sys_.generator("U", "P2")) == sys_.monomial("U", (0, 0, 1), -1)


def test_antipode_p1_truncated():
    sys_ = system(1, HALF, trunc=2)
    got = antipode(sys_.generator("U", "P1"))
    assert got.coefficient((0, 1, 0)) == -1
    assert got.coefficient((0, 1, 1)) == -HALF
    assert all(sum(k) <= 2 for k in got.terms)


def collapse_counit_leg(x, leg):
    sys_ = x.system
    out = sys_.zero(x.alg)
    for (k1, k2), c in x.terms.items():
        passive, active = (k2, k1) if leg == 0 else (k1, k2)
        if active == (0, 0, 0):
            out = out + sys_.monomial(x.alg, passive, c)
    return out


PARAM_GRID = [
    (Fraction(1), HALF),
    (Fraction(0), HALF),
    (Fraction(-1), Fraction(1, 3)),
    (Fraction(1), Fraction(0)),
]


def test_hopf_axioms_exact_small():
    # degree <= 3 here; the acceptance suite runs the full degree <= 4 grid
    for w, lam in PARAM_GRID[:2]:
        sys_ = RewriteSystem(CKParams(w, lam), 8)
        for alg in ("U", "F"):
            for mono in monomials_upto(3):
                x = sys_.monomial(alg, mono)
                dx = coproduct(x)
                assert sys_.coproduct_leg(dx, 0) == sys_.coproduct_leg(dx, 1)
                assert collapse_counit_leg(dx, 0) == x
                assert collapse_counit_leg(dx, 1) == x
                lhs = sys_.multiply_legs(sys_.map_leg(dx, 0, sys_.antipode))
                rhs = sys_.one(alg).scale(counit(x))
                assert lhs == rhs
                lhs2 = sys_.multiply_legs(sys_.map_leg(dx, 1, sys_.antipode))
                assert lhs2 == rhs


def test_coproduct_is_algebra_morphism_samples():
    sys_ = RewriteSystem(CKParams(Fraction(-1), Fraction(1, 3)), 8)
    rng = random.Random(17)
    for alg in ("U", "F"):
        monos = monomials_upto(2)
        for _ in range(6):
            x = sys_.monomial(alg, rng.choice(monos))
            y = sys_.monomial(alg, rng.choice(monos))
            assert coproduct(multiply(x, y)) == multiply(coproduct(x), coproduct(y))


def test_classical_limit_structure_maps():
    # lam -> 0 gives the classical enveloping algebra: primitive coproducts
    # and S = -id on the generators of U
    sys_ = RewriteSystem(CKParams(Fraction(1), 0), 8)
    for name in ("J", "P1", "P2"):
        g = sys_.generator("U", name)
        got = coproduct(g)
        assert got == sys_.tensor(g, sys_.one("U")) + sys_.tensor(sys_.one("U"), g)
        assert antipode(g) == g.scale(-1)
    # the dual side becomes the commutative function algebra: all commutators
    # vanish while the group-law coproduct survives
    for x in ("phi", "a1", "a2"):
        for y in ("phi", "a1", "a2"):
            gx, gy = sys_.generator("F", x), sys_.generator("F", y)
            assert multiply(gx, gy) == multiply(gy, gx)
    phi = sys_.generator("F", "phi")
    assert coproduct(phi) == sys_.tensor(phi, sys_.one("F")) + sys_.tensor(
        sys_.one("F"), phi
    )
    assert antipode(phi) == phi.scale(-1)


# -- coactions -----------------------------------------------------------------


def test_coaction_K_truncated():
    sys_ = system(1, HALF, trunc=1)
    got = coaction_K(sys_.generator("U", "J"))
    assert got.terms == {
        ((0, 0, 0), (1, 0, 0)): Fraction(1),
        ((0, 0, 1), (1, 0, 0)): -HALF,
    }


def test_coaction_K_lambda_zero():
    sys_ = system(1, 0, trunc=4)
    got = coaction_K(sys_.generator("U", "J"))
    assert got.terms == {((0, 0, 0), (1, 0, 0)): Fraction(1)}


def test_coaction_Lstar_a2():
    sys_ = system(1, HALF, trunc=1)
    got = coaction_Lstar(sys_, "a2")
    assert got.terms == {
        ((0, 1, 0), (1, 0, 0)): Fraction(-1),
        ((0, 0, 1), (0, 0, 0)): Fraction(1),
    }


# -- pairing --------------------------------------------------------------------


def test_pairing_delta_formula():
    sys_ = system()
    u = sys_.monomial("U", (1, 1, 0))
    f = sys_.monomial("F", (1, 1, 0))
    assert pairing(u, f) == 1
    assert pairing(sys_.monomial("U", (2, 0, 0)), sys_.monomial("F", (2, 0, 0))) == 2
    assert pairing(sys_.one("U"), sys_.one("F")) == 1
    assert pairing(sys_.generator("U", "J"), sys_.generator("F", "a1")) == 0


def test_pairing_duality_axioms_small():
    for w, lam in (PARAM_GRID[0], PARAM_GRID[2]):
        sys_ = RewriteSystem(CKParams(w, lam), 8)
        monos = monomials_upto(3)
        small = [m for m in monos if sum(m) <= 2]
        for mx in small:
            for my in small:
                if sum(mx) + sum(my) > 3:
                    continue
                x, y = sys_.monomial("U", mx), sys_.monomial("U", my)
                for mf in monos:
                    f = sys_.monomial("F", mf)
                    assert pairing(multiply(x, y), f) == sys_.pairing(
                        tensor(x, y), coproduct(f)
                    )
        for mf in small:
            for mg in small:
                if sum(mf) + sum(mg) > 3:
                    continue
                f, g = sys_.monomial("F", mf), sys_.monomial("F", mg)
                for mx in monos:
                    x = sys_.monomial("U", mx)
                    assert sys_.pairing(coproduct(x), tensor(f, g)) == pairing(
                        x, multiply(f, g)
                    )


def test_antipodes_intertwine_through_pairing():
    sys_ = RewriteSystem(CKParams(Fraction(-1), Fraction(1, 3)), 8)
    for mu in monomials_upto(3):
        for mf in monomials_upto(3):
            u = sys_.monomial("U", mu)
            f = sys_.monomial("F", mf)
            assert pairing(antipode(u), f) == pairing(u, antipode(f))


# -- star ------------------------------------------------------------------------


def test_star_fixes_translation_sector():
    sys_ = system()
    x = multiply(sys_.generator("U", "P1"), sys_.generator("U", "P2"))
    assert star(x) == x
    assert star(sys_.monomial("U", (0, 1, 0), HALF)) == sys_.monomial("U", (0, 1, 0), HALF)


def test_star_involution_random():
    sys_ = system()
    rng = random.Random(23)
    for _ in range(20):
        terms = {
            (0, rng.randint(0, 3), rng.randint(0, 3)): Fraction(rng.randint(-5, 5))
            for _ in range(4)
        }
        x = sys_.element("U", terms)
        assert star(star(x)) == x


def test_star_rejects_rotation_generator():
    sys_ = system()
    with pytest.raises(UnsupportedStarError):
        star(sys_.generator("U", "J"))


# -- operators and adjoints -------------------------------------------------------


def test_adjoint_table():
    jbar = mul_op("U", "J")
    assert jbar.adjoint().terms == der_op("F", "phi").terms
    dp1 = der_op("U", "P1")
    assert dp1.adjoint().terms == mul_op("F", "a1").terms


def test_adjoint_pairing_identity_example():
    sys_ = system()
    jbar = mul_op("U", "J")
    J = sys_.generator("U", "J")
    f = sys_.monomial("F", (2, 0, 0))
    lhs = pairing(jbar.apply(J), f)
    rhs = pairing(J, adjoint(jbar).apply(f))
    assert lhs == rhs == 2


def test_adjoint_pairing_identity_random():
    sys_ = system()
    rng = random.Random(31)
    atoms = [mul_op("U", g) for g in ("J", "P1", "P2")] + [
        der_op("U", g) for g in ("J", "P1", "P2")
    ]
    for _ in range(25):
        op = atoms[rng.randrange(6)] * atoms[rng.randrange(6)]
        h = sys_.element(
            "U",
            {
                (rng.randint(0, 2), rng.randint(0, 2), rng.randint(0, 2)): Fraction(
                    rng.randint(-4, 4)
                )
                for _ in range(3)
            },
        )
        f = sys_.element(
            "F",
            {
                (rng.randint(0, 3), rng.randint(0, 3), rng.randint(0, 2)): Fraction(
                    rng.randint(-4, 4)
                )
                for _ in range(3)
            },
        )
        assert pairing(op.apply(h), f) == pairing(h, adjoint(op).apply(f))


def test_canonical_commutation_of_formal_operators():
    sys_ = system()
    rng = random.Random(37)
    for alg in ("U", "F"):
        names = ("J", "P1", "P2") if alg == "U" else ("phi", "a1", "a2")
        for _ in range(25):
            x = sys_.element(
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
                    d, mb = der_op(alg, ni), mul_op(alg, nj)
                    got = (d * mb - mb * d).apply(x)
                    want = x if i == j else sys_.zero(alg)
                    assert got == want


# -- serialization ------------------------------------------------------------------


def test_json_round_trip_bit_exact():
    sys_ = system(Fraction(-1), Fraction(1, 3))
    x = normal_order(sys_, "U", ["P1", "J", "P2"])
    text = element_to_json(x)
    back = element_from_json(sys_, text)
    assert back == x
    assert element_to_json(back) == text
    data = json.loads(text)
    assert data["algebra"] == "U" and data["trunc"] == 8
    f = normal_order(sys_, "F", ["a2", "a1", "phi"])
    textf = element_to_json(f)
    assert element_to_json(element_from_json(sys_, textf)) == textf


def test_json_rejects_mismatched_trunc():
    sys_ = system()
    other = RewriteSystem(CKParams(1, HALF), 5)
    text = element_to_json(sys_.generator("U", "J"))
    with pytest.raises(ValueError):
        element_from_json(other, text)
