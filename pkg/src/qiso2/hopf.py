"""Ordered-monomial engine for the deformed algebra pair U/F and its Hopf maps.

U is generated by J, P1, P2 (basis J^m P1^n P2^p) with

    [J, P1] = (1 - exp(-2*lam*P2))/(2*lam) + (lam*w/2) P1^2,
    [J, P2] = -w P1,            [P1, P2] = 0,

and F by phi, a1, a2 (basis phi^q a1^r a2^s) with

    [a1, phi] = -lam (1 - C_w(phi)),   [a2, phi] = -lam S_w(phi),
    [a1, a2]  = lam a1,

the unique structure dual to U under <J^m P1^n P2^p, phi^q a1^r a2^s> =
m! n! p! delta delta delta.  All brackets inject formal series, so elements
are truncated: a term is carried iff its *effective* degree (total degree
minus its J-exponent in U, minus its a2-exponent in F) is at most the
truncation bound D.  Effective degree never decreases under rewriting and is
additive under products, so every operation here is exact modulo effective
degree > D and identities compose exactly.
"""

from __future__ import annotations

import json
import math
from fractions import Fraction

from .scalars import CKParams, ck_series

__all__ = [
    "AlgebraElement",
    "OperatorExpr",
    "RewriteSystem",
    "UnsupportedStarError",
    "adjoint",
    "antipode",
    "coaction_K",
    "coaction_Lstar",
    "coproduct",
    "counit",
    "der_op",
    "element_from_json",
    "element_to_json",
    "mul_op",
    "multiply",
    "normal_order",
    "pairing",
    "star",
    "tensor",
]

GENERATORS = {"U": ("J", "P1", "P2"), "F": ("phi", "a1", "a2")}

# effective-degree weight of each generator: the annihilable letter (J in U,
# a2 in F) weighs 0, everything else 1
_EFF_WEIGHT = {"U": (0, 1, 1), "F": (1, 1, 0)}

_ZERO = (0, 0, 0)


class UnsupportedStarError(ValueError):
    """star() applied to an element containing the rotation generator."""


def _eff_mono(alg: str, exps) -> int:
    w = _EFF_WEIGHT[alg]
    return w[0] * exps[0] + w[1] * exps[1] + w[2] * exps[2]


def _eff_key(alg: str, key, legs: int) -> int:
    if legs == 1:
        return _eff_mono(alg, key)
    return sum(_eff_mono(alg, leg) for leg in key)


def _word_of(exps) -> tuple[int, ...]:
    return (0,) * exps[0] + (1,) * exps[1] + (2,) * exps[2]


class RewriteSystem:
    """Immutable normal-ordering context: parameters, truncation and caches.

    Instances are safe to share; every cache is append-only and all public
    operations are pure functions of their arguments.
    """

    def __init__(self, params: CKParams, trunc: int):
        if trunc < 0:
            raise ValueError("truncation bound must be >= 0")
        self.params = params
        self.trunc = int(trunc)
        self._swap_rules = {"U": self._build_swaps("U"), "F": self._build_swaps("F")}
        self._nf_cache: dict[tuple[str, tuple[int, ...]], dict] = {}
        self._mono_mul_cache: dict = {}
        self._delta_pow: dict = {}
        self._s_pow: dict = {}

    # -- construction of elements --------------------------------------------

    def element(self, alg: str, terms, legs: int = 1) -> "AlgebraElement":
        return AlgebraElement(self, alg, dict(terms), legs=legs)

    def zero(self, alg: str, legs: int = 1) -> "AlgebraElement":
        return AlgebraElement(self, alg, {}, legs=legs)

    def one(self, alg: str, legs: int = 1) -> "AlgebraElement":
        key = _ZERO if legs == 1 else (_ZERO,) * legs
        return AlgebraElement(self, alg, {key: Fraction(1)}, legs=legs)

    def monomial(self, alg: str, exps, coef=1) -> "AlgebraElement":
        return AlgebraElement(self, alg, {tuple(exps): Fraction(coef)})

    def generator(self, alg: str, name: str) -> "AlgebraElement":
        idx = GENERATORS[alg].index(name)
        exps = [0, 0, 0]
        exps[idx] = 1
        return self.monomial(alg, exps)

    def series_element(self, alg: str, gen_idx: int, coeffs) -> "AlgebraElement":
        terms = {}
        for k, c in enumerate(coeffs):
            if c == 0:
                continue
            exps = [0, 0, 0]
            exps[gen_idx] = k
            terms[tuple(exps)] = Fraction(c)
        return AlgebraElement(self, alg, terms)

    def exp_p2(self, coef: Fraction) -> "AlgebraElement":
        """The series exp(coef * P2) truncated to the system bound."""
        coef = Fraction(coef)
        coeffs = [coef**k / math.factorial(k) for k in range(self.trunc + 1)]
        return self.series_element("U", 2, coeffs)

    def ck_cos_phi(self) -> "AlgebraElement":
        return self.series_element("F", 0, ck_series(self.params.omega, "C", self.trunc))

    def ck_sin_phi(self) -> "AlgebraElement":
        return self.series_element("F", 0, ck_series(self.params.omega, "S", self.trunc))

    # -- rewrite rules ---------------------------------------------------------

    def _build_swaps(self, alg: str):
        """Replacement terms for each out-of-order adjacent pair (x, y).

        Every entry maps a descent (x, y) to [(coef, word, eff)] with
        x*y = sum coef * word; series are expanded up to effective degree D,
        with the lam = 0 limits emerging from the closed-form coefficients
        (never a division by lam).
        """
        w = self.params.omega
        lam = self.params.lam
        D = self.trunc
        rules = {}
        if alg == "U":
            p1j = [(Fraction(1), (0, 1), 1)]
            for k in range(1, D + 1):
                c_k = Fraction((-1) ** (k + 1)) * (2 * lam) ** (k - 1) / math.factorial(k)
                if c_k:
                    p1j.append((-c_k, (2,) * k, k))
            half = -lam * w / 2
            if half:
                p1j.append((half, (1, 1), 2))
            rules[(1, 0)] = p1j
            p2j = [(Fraction(1), (0, 2), 1)]
            if w:
                p2j.append((Fraction(w), (1,), 1))
            rules[(2, 0)] = p2j
            rules[(2, 1)] = [(Fraction(1), (1, 2), 2)]
        else:
            a1phi = [(Fraction(1), (0, 1), 2)]
            for j in range(1, D // 2 + 1):
                c = lam * (-w) ** j / math.factorial(2 * j)
                if c:
                    a1phi.append((c, (0,) * (2 * j), 2 * j))
            rules[(1, 0)] = a1phi
            a2phi = [(Fraction(1), (0, 2), 1)]
            for j in range(0, (D + 1) // 2):
                c = -lam * (-w) ** j / math.factorial(2 * j + 1)
                if c:
                    a2phi.append((c, (0,) * (2 * j + 1), 2 * j + 1))
            rules[(2, 0)] = a2phi
            a2a1 = [(Fraction(1), (1, 2), 1)]
            if lam:
                a2a1.append((-lam, (1,), 1))
            rules[(2, 1)] = a2a1
        return rules

    # -- normal ordering ---------------------------------------------------------

    def normal_form(self, alg: str, word) -> dict:
        """Normal ordering of a generator word, exact modulo eff degree > D."""
        word = tuple(word)
        weights = _EFF_WEIGHT[alg]
        if sum(weights[g] for g in word) > self.trunc:
            return {}
        return self._nf(alg, word)

    def _nf(self, alg: str, word: tuple[int, ...]) -> dict:
        key = (alg, word)
        cached = self._nf_cache.get(key)
        if cached is not None:
            return cached
        weights = _EFF_WEIGHT[alg]
        pos = -1
        for i in range(len(word) - 1):
            if word[i] > word[i + 1]:
                pos = i
                break
        if pos < 0:
            mono = (word.count(0), word.count(1), word.count(2))
            result = {mono: Fraction(1)}
            self._nf_cache[key] = result
            return result
        x, y = word[pos], word[pos + 1]
        rest_eff = sum(weights[g] for g in word) - weights[x] - weights[y]
        budget = self.trunc - rest_eff
        out: dict = {}
        for coef, repl, repl_eff in self._swap_rules[alg][(x, y)]:
            if repl_eff > budget:
                continue
            sub = self._nf(alg, word[:pos] + repl + word[pos + 2 :])
            for mono, c in sub.items():
                acc = out.get(mono, 0) + coef * c
                if acc:
                    out[mono] = acc
                elif mono in out:
                    del out[mono]
        self._nf_cache[key] = out
        return out

    def _mono_letter(self, alg: str, m: tuple, g: int) -> dict:
        key = (alg, m, g)
        cached = self._mono_mul_cache.get(key)
        if cached is None:
            cached = self.normal_form(alg, _word_of(m) + (g,))
            self._mono_mul_cache[key] = cached
        return cached

    def _mono_mul(self, alg: str, m: tuple, n: tuple) -> dict:
        key = (alg, m, n)
        cached = self._mono_mul_cache.get(key)
        if cached is not None:
            return cached
        cur = {m: Fraction(1)}
        for g in _word_of(n):
            nxt: dict = {}
            for mono, c in cur.items():
                for mono2, c2 in self._mono_letter(alg, mono, g).items():
                    acc = nxt.get(mono2, 0) + c * c2
                    if acc:
                        nxt[mono2] = acc
                    elif mono2 in nxt:
                        del nxt[mono2]
            cur = nxt
        self._mono_mul_cache[key] = cur
        return cur

    # -- algebra operations ---------------------------------------------------

    def multiply(self, x: "AlgebraElement", y: "AlgebraElement") -> "AlgebraElement":
        if x.system is not y.system and (x.system.params, x.system.trunc) != (
            y.system.params,
            y.system.trunc,
        ):
            raise ValueError("operands come from different rewrite systems")
        if x.alg != y.alg or x.legs != y.legs:
            raise ValueError("algebra tag mismatch")
        D = self.trunc
        alg = x.alg
        out: dict = {}
        if x.legs == 1:
            for m, cm in x.terms.items():
                for n, cn in y.terms.items():
                    c = cm * cn
                    for mono, ck in self._mono_mul(alg, m, n).items():
                        acc = out.get(mono, 0) + c * ck
                        if acc:
                            out[mono] = acc
                        elif mono in out:
                            del out[mono]
        else:
            for mk, cm in x.terms.items():
                for nk, cn in y.terms.items():
                    c = cm * cn
                    legs = [self._mono_mul(alg, a, b) for a, b in zip(mk, nk)]
                    self._accumulate_tensor(alg, out, legs, c, D)
        return AlgebraElement(self, alg, out, legs=x.legs)

    def _accumulate_tensor(self, alg, out, leg_dicts, coef, D):
        effs = [{m: _eff_mono(alg, m) for m in d} for d in leg_dicts]
        if len(leg_dicts) == 2:
            d1, d2 = leg_dicts
            for m1, c1 in d1.items():
                e1 = effs[0][m1]
                if e1 > D:
                    continue
                for m2, c2 in d2.items():
                    if e1 + effs[1][m2] > D:
                        continue
                    key = (m1, m2)
                    acc = out.get(key, 0) + coef * c1 * c2
                    if acc:
                        out[key] = acc
                    elif key in out:
                        del out[key]
        else:
            d1, d2, d3 = leg_dicts
            for m1, c1 in d1.items():
                e1 = effs[0][m1]
                for m2, c2 in d2.items():
                    e12 = e1 + effs[1][m2]
                    if e12 > D:
                        continue
                    c12 = coef * c1 * c2
                    for m3, c3 in d3.items():
                        if e12 + effs[2][m3] > D:
                            continue
                        key = (m1, m2, m3)
                        acc = out.get(key, 0) + c12 * c3
                        if acc:
                            out[key] = acc
                        elif key in out:
                            del out[key]

    # -- coalgebra -------------------------------------------------------------

    def _delta_gen(self, alg: str, idx: int) -> "AlgebraElement":
        key = ("delta", alg, idx)
        cached = self._delta_pow.get(key)
        if cached is not None:
            return cached
        lam = self.params.lam
        w = self.params.omega
        one, gen = _ZERO, [0, 0, 0]
        gen[idx] = 1
        gen = tuple(gen)
        terms: dict = {}

        def put(k1, k2, c):
            if c and _eff_mono(alg, k1) + _eff_mono(alg, k2) <= self.trunc:
                terms[(k1, k2)] = terms.get((k1, k2), 0) + c

        if alg == "U":
            if idx == 2:  # P2 primitive
                put(gen, one, Fraction(1))
                put(one, gen, Fraction(1))
            else:  # J and P1 share the exp(-lam P2) dressing
                put(gen, one, Fraction(1))
                for k in range(self.trunc + 1):
                    c = (-lam) ** k / Fraction(math.factorial(k))
                    put((0, 0, k), gen, c)
        else:
            if idx == 0:  # phi primitive
                put(gen, one, Fraction(1))
                put(one, gen, Fraction(1))
            else:
                cser = ck_series(w, "C", self.trunc)
                sser = ck_series(w, "S", self.trunc)
                a1, a2 = (0, 1, 0), (0, 0, 1)
                put(one, gen, Fraction(1))
                if idx == 1:  # a1 -> a1 (x) C + a2 (x) w S + 1 (x) a1
                    for k, c in enumerate(cser):
                        put(a1, (k, 0, 0), c)
                    for k, c in enumerate(sser):
                        put(a2, (k, 0, 0), w * c)
                else:  # a2 -> -a1 (x) S + a2 (x) C + 1 (x) a2
                    for k, c in enumerate(sser):
                        put(a1, (k, 0, 0), -c)
                    for k, c in enumerate(cser):
                        put(a2, (k, 0, 0), c)
        elem = AlgebraElement(self, alg, terms, legs=2)
        self._delta_pow[key] = elem
        return elem

    def _delta_gen_pow(self, alg: str, idx: int, k: int) -> "AlgebraElement":
        key = (alg, idx, k)
        cached = self._delta_pow.get(key)
        if cached is None:
            if k == 0:
                cached = self.one(alg, legs=2)
            else:
                cached = self.multiply(self._delta_gen_pow(alg, idx, k - 1), self._delta_gen(alg, idx))
            self._delta_pow[key] = cached
        return cached

    def coproduct_mono(self, alg: str, exps) -> "AlgebraElement":
        out = self._delta_gen_pow(alg, 0, exps[0])
        for idx in (1, 2):
            if exps[idx]:
                out = self.multiply(out, self._delta_gen_pow(alg, idx, exps[idx]))
        return out

    def coproduct(self, x: "AlgebraElement") -> "AlgebraElement":
        if x.legs != 1:
            raise ValueError("coproduct acts on single-leg elements; use coproduct_leg")
        out = self.zero(x.alg, legs=2)
        for mono, c in x.terms.items():
            out = out + self.coproduct_mono(x.alg, mono).scale(c)
        return out

    def coproduct_leg(self, x: "AlgebraElement", leg: int) -> "AlgebraElement":
        """Apply the coproduct to one leg of a two-leg element (result: 3 legs)."""
        if x.legs != 2 or leg not in (0, 1):
            raise ValueError("coproduct_leg expects a two-leg element and leg 0 or 1")
        D = self.trunc
        out: dict = {}
        for (k1, k2), c in x.terms.items():
            target, passive = (k1, k2) if leg == 0 else (k2, k1)
            expanded = self.coproduct_mono(x.alg, target)
            pe = _eff_mono(x.alg, passive)
            for (m1, m2), cc in expanded.terms.items():
                if _eff_mono(x.alg, m1) + _eff_mono(x.alg, m2) + pe > D:
                    continue
                key = (m1, m2, passive) if leg == 0 else (passive, m1, m2)
                acc = out.get(key, 0) + c * cc
                if acc:
                    out[key] = acc
                elif key in out:
                    del out[key]
        return AlgebraElement(self, x.alg, out, legs=3)

    def counit(self, x: "AlgebraElement") -> Fraction:
        key = _ZERO if x.legs == 1 else (_ZERO,) * x.legs
        return Fraction(x.terms.get(key, 0))

    # -- antipode ---------------------------------------------------------------

    def _s_gen(self, alg: str, idx: int) -> "AlgebraElement":
        key = ("s", alg, idx)
        cached = self._s_pow.get(key)
        if cached is not None:
            return cached
        lam = self.params.lam
        w = self.params.omega
        if alg == "U":
            if idx == 2:
                elem = self.monomial("U", (0, 0, 1), -1)
            else:
                gen = self.monomial("U", (1, 0, 0) if idx == 0 else (0, 1, 0), -1)
                elem = self.multiply(self.exp_p2(lam), gen)
        else:
            if idx == 0:
                elem = self.monomial("F", (1, 0, 0), -1)
            else:
                a1 = self.monomial("F", (0, 1, 0))
                a2 = self.monomial("F", (0, 0, 1))
                cser, sser = self.ck_cos_phi(), self.ck_sin_phi()
                if idx == 1:  # S(a1) = -a1 C + w a2 S
                    elem = self.multiply(a1, cser).scale(-1) + self.multiply(a2, sser).scale(w)
                else:  # S(a2) = -a1 S - a2 C
                    elem = self.multiply(a1, sser).scale(-1) + self.multiply(a2, cser).scale(-1)
        self._s_pow[key] = elem
        return elem

    def _s_gen_pow(self, alg: str, idx: int, k: int) -> "AlgebraElement":
        key = (alg, idx, k)
        cached = self._s_pow.get(key)
        if cached is None:
            if k == 0:
                cached = self.one(alg)
            else:
                cached = self.multiply(self._s_gen_pow(alg, idx, k - 1), self._s_gen(alg, idx))
            self._s_pow[key] = cached
        return cached

    def antipode(self, x: "AlgebraElement") -> "AlgebraElement":
        if x.legs != 1:
            raise ValueError("antipode acts on single-leg elements")
        out = self.zero(x.alg)
        for (e0, e1, e2), c in x.terms.items():
            term = self._s_gen_pow(x.alg, 2, e2)
            if e1:
                term = self.multiply(term, self._s_gen_pow(x.alg, 1, e1))
            if e0:
                term = self.multiply(term, self._s_gen_pow(x.alg, 0, e0))
            out = out + term.scale(c)
        return out

    # -- coactions ---------------------------------------------------------------

    def coaction_K(self, x: "AlgebraElement") -> "AlgebraElement":
        """Left coaction of the translation sector on the rotation sector.

        Defined on the J-sector of U: J^m maps to (exp(-lam P2) (x) J)^m.
        """
        if x.alg != "U" or x.legs != 1:
            raise ValueError("coaction_K expects a single-leg U element")
        if any(e1 or e2 for (_, e1, e2) in x.terms):
            raise ValueError("coaction_K is defined on the J-sector only")
        lam = self.params.lam
        seed: dict = {}
        for k in range(self.trunc + 1):
            c = (-lam) ** k / Fraction(math.factorial(k))
            seed[((0, 0, k), (1, 0, 0))] = c
        block = AlgebraElement(self, "U", seed, legs=2)
        powers = {0: self.one("U", legs=2)}
        out = self.zero("U", legs=2)
        for (m, _, _), c in x.terms.items():
            if m not in powers:
                top = max(powers)
                for k in range(top + 1, m + 1):
                    powers[k] = self.multiply(powers[k - 1], block)
            out = out + powers[m].scale(c)
        return out

    def coaction_Lstar(self, gen_name: str) -> "AlgebraElement":
        """Right coaction of the angle sector on a translation generator of F.

        The trigonometric legs are expanded to series order D; every stored
        coefficient is exact (no term of the closed form is partial).
        """
        w = self.params.omega
        cser = ck_series(w, "C", self.trunc)
        sser = ck_series(w, "S", self.trunc)
        a1, a2 = (0, 1, 0), (0, 0, 1)
        terms: dict = {}

        def put(k1, k2, c):
            if c:
                terms[(k1, k2)] = c

        if gen_name == "a1":
            for k, c in enumerate(cser):
                put(a1, (k, 0, 0), c)
            for k, c in enumerate(sser):
                put(a2, (k, 0, 0), w * c)
        elif gen_name == "a2":
            for k, c in enumerate(sser):
                put(a1, (k, 0, 0), -c)
            for k, c in enumerate(cser):
                put(a2, (k, 0, 0), c)
        else:
            raise ValueError("coaction_Lstar is defined on a1 and a2")
        return AlgebraElement(self, "F", terms, legs=2, _prune=False)

    # -- pairing and star ----------------------------------------------------------

    def tensor(self, x: "AlgebraElement", y: "AlgebraElement") -> "AlgebraElement":
        """Outer tensor product of two single-leg elements of the same algebra."""
        if x.alg != y.alg or x.legs != 1 or y.legs != 1:
            raise ValueError("tensor takes two single-leg elements of one algebra")
        D = self.trunc
        out: dict = {}
        for m1, c1 in x.terms.items():
            e1 = _eff_mono(x.alg, m1)
            for m2, c2 in y.terms.items():
                if e1 + _eff_mono(x.alg, m2) > D:
                    continue
                out[(m1, m2)] = c1 * c2
        return AlgebraElement(self, x.alg, out, legs=2)

    def multiply_legs(self, x: "AlgebraElement") -> "AlgebraElement":
        """Collapse a two-leg element by multiplying its legs together."""
        if x.legs != 2:
            raise ValueError("multiply_legs expects a two-leg element")
        out = self.zero(x.alg)
        for (k1, k2), c in x.terms.items():
            out = out + self.element(
                x.alg, {m: c * v for m, v in self._mono_mul(x.alg, k1, k2).items()}
            )
        return out

    def map_leg(self, x: "AlgebraElement", leg: int, fn) -> "AlgebraElement":
        """Apply a linear map (single-leg element -> element) to one tensor leg."""
        if x.legs != 2 or leg not in (0, 1):
            raise ValueError("map_leg expects a two-leg element and leg 0 or 1")
        D = self.trunc
        out: dict = {}
        for (k1, k2), c in x.terms.items():
            target, passive = (k1, k2) if leg == 0 else (k2, k1)
            image = fn(self.monomial(x.alg, target))
            pe = _eff_mono(x.alg, passive)
            for m, cm in image.terms.items():
                if _eff_mono(x.alg, m) + pe > D:
                    continue
                key = (m, passive) if leg == 0 else (passive, m)
                acc = out.get(key, 0) + c * cm
                if acc:
                    out[key] = acc
                elif key in out:
                    del out[key]
        return AlgebraElement(self, x.alg, out, legs=2)

    def pairing(self, u: "AlgebraElement", f: "AlgebraElement") -> Fraction:
        if u.alg != "U" or f.alg != "F" or u.legs != f.legs:
            raise ValueError("pairing takes a U element and an F element of equal rank")
        total = Fraction(0)
        for key, cu in u.terms.items():
            cf = f.terms.get(key)
            if cf is None:
                continue
            legs = (key,) if u.legs == 1 else key
            weight = 1
            for leg in legs:
                weight *= math.factorial(leg[0]) * math.factorial(leg[1]) * math.factorial(leg[2])
            total += cu * cf * weight
        return total

    def star(self, x: "AlgebraElement") -> "AlgebraElement":
        if x.alg != "U" or x.legs != 1:
            raise ValueError("star is defined on single-leg U elements")
        for (m, _, _) in x.terms:
            if m:
                raise UnsupportedStarError(
                    "star is not defined on elements containing J"
                )
        # the translation sector is commutative and fixed pointwise; with real
        # rational coefficients the anti-involution acts as the identity
        return AlgebraElement(self, "U", dict(x.terms))


class AlgebraElement:
    """Finite linear combination of ordered monomials, with truncation bound.

    `terms` maps exponent keys to nonzero Fractions; keys are (m, n, p)
    triples for single elements or tuples of triples for tensor legs.  Terms
    whose effective degree exceeds the system bound are dropped on
    construction.
    """

    __slots__ = ("system", "alg", "legs", "terms")

    def __init__(
        self, system: RewriteSystem, alg: str, terms: dict, legs: int = 1, _prune: bool = True
    ):
        if alg not in GENERATORS:
            raise ValueError(f"unknown algebra tag {alg!r}")
        clean = {}
        D = system.trunc
        for key, c in terms.items():
            c = Fraction(c)
            if not c:
                continue
            if _prune and _eff_key(alg, key, legs) > D:
                continue
            clean[key] = c
        self.system = system
        self.alg = alg
        self.legs = legs
        self.terms = clean

    # -- linear structure -------------------------------------------------------

    def _check_compatible(self, other: "AlgebraElement"):
        if self.alg != other.alg or self.legs != other.legs:
            raise ValueError("algebra tag mismatch")
        if self.system is not other.system and (
            self.system.params,
            self.system.trunc,
        ) != (other.system.params, other.system.trunc):
            raise ValueError("operands come from different rewrite systems")

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        self._check_compatible(other)
        out = dict(self.terms)
        for key, c in other.terms.items():
            acc = out.get(key, 0) + c
            if acc:
                out[key] = acc
            elif key in out:
                del out[key]
        return AlgebraElement(self.system, self.alg, out, legs=self.legs)

    def __sub__(self, other: "AlgebraElement") -> "AlgebraElement":
        return self + other.scale(-1)

    def scale(self, c) -> "AlgebraElement":
        c = Fraction(c)
        return AlgebraElement(
            self.system, self.alg, {k: c * v for k, v in self.terms.items()}, legs=self.legs
        )

    def __rmul__(self, c):
        return self.scale(c)

    def __neg__(self):
        return self.scale(-1)

    def __mul__(self, other):
        if isinstance(other, AlgebraElement):
            return self.system.multiply(self, other)
        return self.scale(other)

    def rebased(self, system: "RewriteSystem") -> "AlgebraElement":
        """The same element carried into another system (its bound re-prunes)."""
        if system.params != self.system.params:
            raise ValueError("target system has different parameters")
        return AlgebraElement(system, self.alg, dict(self.terms), legs=self.legs)

    def coefficient(self, key) -> Fraction:
        if self.legs == 1:
            key = tuple(key)
        else:
            key = tuple(tuple(k) for k in key)
        return Fraction(self.terms.get(key, 0))

    def is_zero(self) -> bool:
        return not self.terms

    def max_degree(self) -> int:
        if not self.terms:
            return 0
        if self.legs == 1:
            return max(sum(k) for k in self.terms)
        return max(sum(sum(leg) for leg in k) for k in self.terms)

    def __eq__(self, other):
        return (
            isinstance(other, AlgebraElement)
            and self.alg == other.alg
            and self.legs == other.legs
            and self.system.params == other.system.params
            and self.system.trunc == other.system.trunc
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.alg, self.legs, frozenset(self.terms.items())))

    def __repr__(self):
        names = GENERATORS[self.alg]

        def fmt_mono(exps):
            parts = [
                f"{names[i]}^{e}" if e > 1 else names[i]
                for i, e in enumerate(exps)
                if e
            ]
            return "*".join(parts) if parts else "1"

        def fmt_key(key):
            if self.legs == 1:
                return fmt_mono(key)
            return " (x) ".join(fmt_mono(leg) for leg in key)

        if not self.terms:
            return "0"
        keys = sorted(self.terms)
        return " + ".join(f"({self.terms[k]})*{fmt_key(k)}" for k in keys)


# ---------------------------------------------------------------------------
# formal multiplication / derivation operators and adjoints
# ---------------------------------------------------------------------------


class OperatorExpr:
    """Linear combination of composites of formal operators h-bar_i, d/dh_i.

    Atoms are ("mul"|"der", alg, index); a term's atom tuple is applied
    right-to-left (operator composition).  The formal operators act on
    exponents of the ordered basis: they satisfy [d_i, mul_j] = delta_ij,
    [mul_i, mul_j] = [d_i, d_j] = 0 on every element.
    """

    __slots__ = ("terms",)

    def __init__(self, terms):
        self.terms = tuple((Fraction(c), tuple(atoms)) for c, atoms in terms)

    @property
    def alg(self) -> str | None:
        for _, atoms in self.terms:
            for _, alg, _ in atoms:
                return alg
        return None

    def __add__(self, other: "OperatorExpr") -> "OperatorExpr":
        return OperatorExpr(self.terms + other.terms)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c) -> "OperatorExpr":
        c = Fraction(c)
        return OperatorExpr([(c * c0, atoms) for c0, atoms in self.terms])

    def __rmul__(self, c):
        return self.scale(c)

    def __mul__(self, other):
        if not isinstance(other, OperatorExpr):
            return self.scale(other)
        return OperatorExpr(
            [
                (c1 * c2, a1 + a2)
                for c1, a1 in self.terms
                for c2, a2 in other.terms
            ]
        )

    def apply(self, x: AlgebraElement) -> AlgebraElement:
        if x.legs != 1:
            raise ValueError("operators act on single-leg elements")
        system = x.system
        out = system.zero(x.alg)
        for coef, atoms in self.terms:
            cur = {k: coef * v for k, v in x.terms.items()}
            for kind, alg, idx in reversed(atoms):
                if alg != x.alg:
                    raise ValueError("operator algebra does not match the element")
                nxt: dict = {}
                for exps, c in cur.items():
                    if kind == "mul":
                        key = exps[:idx] + (exps[idx] + 1,) + exps[idx + 1 :]
                        nxt[key] = nxt.get(key, 0) + c
                    else:
                        e = exps[idx]
                        if e:
                            key = exps[:idx] + (e - 1,) + exps[idx + 1 :]
                            nxt[key] = nxt.get(key, 0) + e * c
                cur = nxt
            out = out + AlgebraElement(system, x.alg, cur)
        return out

    def adjoint(self) -> "OperatorExpr":
        """Adjoint with respect to the duality pairing: mul_i <-> d of the dual."""

        def flip(atom):
            kind, alg, idx = atom
            other = "F" if alg == "U" else "U"
            return ("der" if kind == "mul" else "mul", other, idx)

        return OperatorExpr(
            [(c, tuple(flip(a) for a in reversed(atoms))) for c, atoms in self.terms]
        )

    def __repr__(self):
        def fmt(atom):
            kind, alg, idx = atom
            name = GENERATORS[alg][idx]
            return f"{name}_bar" if kind == "mul" else f"d_{name}"

        if not self.terms:
            return "0"
        return " + ".join(
            "({})*{}".format(c, "*".join(fmt(a) for a in atoms) if atoms else "id")
            for c, atoms in self.terms
        )


def mul_op(alg: str, name: str) -> OperatorExpr:
    idx = GENERATORS[alg].index(name)
    return OperatorExpr([(Fraction(1), (("mul", alg, idx),))])


def der_op(alg: str, name: str) -> OperatorExpr:
    idx = GENERATORS[alg].index(name)
    return OperatorExpr([(Fraction(1), (("der", alg, idx),))])


def adjoint(op: OperatorExpr) -> OperatorExpr:
    return op.adjoint()


# ---------------------------------------------------------------------------
# free-function façade
# ---------------------------------------------------------------------------


def normal_order(system: RewriteSystem, alg: str, word) -> AlgebraElement:
    """Normal ordering of a word of generator names, e.g. ["P2", "J"]."""
    names = GENERATORS[alg]
    indices = tuple(names.index(g) for g in word)
    return AlgebraElement(system, alg, system.normal_form(alg, indices))


def multiply(x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
    return x.system.multiply(x, y)


def coproduct(x: AlgebraElement) -> AlgebraElement:
    return x.system.coproduct(x)


def counit(x: AlgebraElement) -> Fraction:
    return x.system.counit(x)


def antipode(x: AlgebraElement) -> AlgebraElement:
    return x.system.antipode(x)


def coaction_K(x: AlgebraElement) -> AlgebraElement:
    return x.system.coaction_K(x)


def coaction_Lstar(system: RewriteSystem, gen_name: str) -> AlgebraElement:
    return system.coaction_Lstar(gen_name)


def pairing(u: AlgebraElement, f: AlgebraElement) -> Fraction:
    return u.system.pairing(u, f)


def tensor(x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
    return x.system.tensor(x, y)


def star(x: AlgebraElement) -> AlgebraElement:
    return x.system.star(x)


# ---------------------------------------------------------------------------
# canonical JSON serialization
# ---------------------------------------------------------------------------

_TAG_TO_PARTS = {
    "U": ("U", 1),
    "F": ("F", 1),
    "U⊗U": ("U", 2),
    "F⊗F": ("F", 2),
}
_PARTS_TO_TAG = {v: k for k, v in _TAG_TO_PARTS.items()}


def element_to_json(x: AlgebraElement) -> str:
    tag = _PARTS_TO_TAG.get((x.alg, x.legs))
    if tag is None:
        raise ValueError("only single and two-leg elements serialize")
    items = []
    for key in sorted(x.terms):
        exp = list(key) if x.legs == 1 else [list(leg) for leg in key]
        items.append({"exp": exp, "coef": str(x.terms[key])})
    return json.dumps(
        {"algebra": tag, "terms": items, "trunc": x.system.trunc},
        separators=(",", ":"),
        ensure_ascii=False,
    )


def element_from_json(system: RewriteSystem, text: str) -> AlgebraElement:
    data = json.loads(text)
    tag = data["algebra"]
    if tag not in _TAG_TO_PARTS:
        raise ValueError(f"unknown algebra tag {tag!r}")
    alg, legs = _TAG_TO_PARTS[tag]
    if int(data["trunc"]) != system.trunc:
        raise ValueError("truncation bound does not match the rewrite system")
    terms = {}
    for item in data["terms"]:
        exp = item["exp"]
        key = tuple(exp) if legs == 1 else tuple(tuple(leg) for leg in exp)
        terms[key] = Fraction(item["coef"])
    return AlgebraElement(system, alg, terms, legs=legs)
