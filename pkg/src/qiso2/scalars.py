"""Exact rational scalars, Cayley-Klein trigonometric functions and Taylor jets.

The Cayley-Klein functions C_w, S_w interpolate between the circular
(w > 0), parabolic (w = 0) and hyperbolic (w < 0) regimes and satisfy

    C_w(x)^2 + w*S_w(x)^2 = 1,   C_w' = -w*S_w,   S_w' = C_w.

They are provided in three forms: double-precision (`ck_cos`, `ck_sin`),
exact rational Taylor coefficients at 0 (`ck_series`) and truncated Taylor
jets (`Jet.ck_cos`, `Jet.ck_sin`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

__all__ = [
    "DEFAULT_JET_ORDER",
    "CKParams",
    "DomainError",
    "Jet",
    "Rational",
    "ck_cos",
    "ck_series",
    "ck_sin",
    "jet_apply_elementary",
    "parse_rational",
]

Rational = Fraction

DEFAULT_JET_ORDER = 8

# Below this value of |w|*x^2 the series form is used for C_w/S_w; it guards
# the 1/sqrt(-w) cancellation in S_w near w = 0.
_SERIES_GUARD = 1e-8


class DomainError(ValueError):
    """Input outside the mathematical domain of an operation."""

    def __init__(self, message, offending=None):
        super().__init__(message)
        self.offending = offending


def parse_rational(text: str | int | Fraction) -> Fraction:
    """Parse "num/den", integer or decimal strings into an exact Fraction."""
    if isinstance(text, Fraction):
        return text
    return Fraction(str(text))


@dataclass(frozen=True)
class CKParams:
    """The deformation parameter pair (omega, lambda), kept exact."""

    omega: Fraction
    lam: Fraction

    def __post_init__(self):
        object.__setattr__(self, "omega", Fraction(self.omega))
        object.__setattr__(self, "lam", Fraction(self.lam))

    def as_floats(self) -> tuple[float, float]:
        return float(self.omega), float(self.lam)


def _check_finite(x: float) -> float:
    x = float(x)
    if not math.isfinite(x):
        raise DomainError("non-finite argument", offending=x)
    return x


def _ck_cos_sin(omega: float, x: float) -> tuple[float, float]:
    if omega == 0.0:
        return 1.0, x
    if abs(omega) * x * x < _SERIES_GUARD:
        w2 = omega * x * x
        c = 1.0 - w2 / 2.0 + w2 * w2 / 24.0
        s = x * (1.0 - w2 / 6.0 + w2 * w2 / 120.0)
        return c, s
    if omega > 0.0:
        rt = math.sqrt(omega)
        return math.cos(rt * x), math.sin(rt * x) / rt
    rt = math.sqrt(-omega)
    return math.cosh(rt * x), math.sinh(rt * x) / rt


def ck_cos(omega: float, x: float) -> float:
    """C_w(x), evaluated branch-wise and continuously in w at 0."""
    return _ck_cos_sin(float(omega), _check_finite(x))[0]


def ck_sin(omega: float, x: float) -> float:
    """S_w(x), evaluated branch-wise and continuously in w at 0."""
    return _ck_cos_sin(float(omega), _check_finite(x))[1]


def ck_series(omega: Fraction | int, kind: str, order: int) -> list[Fraction]:
    """Exact Taylor coefficients of C_w ("C") or S_w ("S") at 0 up to `order`.

    Coefficient k is (-w)^(k/2)/k! for even k of C, (-w)^((k-1)/2)/k! for odd
    k of S, zero otherwise.
    """
    if order < 0:
        raise ValueError("order must be >= 0")
    if kind not in ("C", "S"):
        raise ValueError("kind must be 'C' or 'S'")
    w = Fraction(omega)
    out = [Fraction(0)] * (order + 1)
    parity = 0 if kind == "C" else 1
    for k in range(parity, order + 1, 2):
        out[k] = (-w) ** ((k - parity) // 2) / math.factorial(k)
    return out


# ---------------------------------------------------------------------------
# Taylor jets
# ---------------------------------------------------------------------------


class Jet:
    """Truncated Taylor expansion sum(c_k * (t - base)^k, k=0..order).

    Immutable; arithmetic truncates exactly at the smaller operand order.
    """

    __slots__ = ("base", "coeffs")

    def __init__(self, base: float, coeffs):
        object.__setattr__(self, "base", float(base))
        object.__setattr__(self, "coeffs", tuple(float(c) for c in coeffs))
        if not self.coeffs:
            raise ValueError("a jet needs at least the constant coefficient")

    def __setattr__(self, name, value):  # pragma: no cover - immutability guard
        raise AttributeError("Jet is immutable")

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def constant(cls, value: float, base: float = 0.0, order: int = DEFAULT_JET_ORDER) -> "Jet":
        return cls(base, (float(value),) + (0.0,) * order)

    @classmethod
    def identity(cls, base: float = 0.0, order: int = DEFAULT_JET_ORDER) -> "Jet":
        coeffs = [base, 1.0] + [0.0] * (order - 1)
        return cls(base, coeffs[: order + 1])

    def __repr__(self):
        return f"Jet(base={self.base!r}, coeffs={list(self.coeffs)!r})"

    def __eq__(self, other):
        return (
            isinstance(other, Jet)
            and self.base == other.base
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.base, self.coeffs))

    # -- helpers ------------------------------------------------------------

    def _align(self, other) -> tuple["Jet", "Jet"]:
        if not isinstance(other, Jet):
            other = Jet.constant(other, self.base, self.order)
        if other.base != self.base:
            raise ValueError("jets must share the same base point")
        k = min(self.order, other.order)
        return self.truncate(k), other.truncate(k)

    def truncate(self, order: int) -> "Jet":
        if order >= self.order:
            return self
        return Jet(self.base, self.coeffs[: order + 1])

    # -- ring operations ------------------------------------------------------

    def __add__(self, other):
        a, b = self._align(other)
        return Jet(a.base, tuple(x + y for x, y in zip(a.coeffs, b.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return Jet(self.base, tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        a, b = self._align(other)
        return Jet(a.base, tuple(x - y for x, y in zip(a.coeffs, b.coeffs)))

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        if not isinstance(other, Jet):
            return self.scale(other)
        a, b = self._align(other)
        n = a.order
        out = [0.0] * (n + 1)
        for i, ai in enumerate(a.coeffs):
            if ai == 0.0:
                continue
            for j in range(n + 1 - i):
                out[i + j] += ai * b.coeffs[j]
        return Jet(a.base, out)

    __rmul__ = __mul__

    def scale(self, c: float) -> "Jet":
        c = float(c)
        return Jet(self.base, tuple(c * x for x in self.coeffs))

    def reciprocal(self) -> "Jet":
        a0 = self.coeffs[0]
        if a0 == 0.0:
            raise DomainError("reciprocal of a jet with zero constant term", offending=a0)
        n = self.order
        out = [0.0] * (n + 1)
        out[0] = 1.0 / a0
        for k in range(1, n + 1):
            out[k] = -sum(self.coeffs[j] * out[k - j] for j in range(1, k + 1)) / a0
        return Jet(self.base, out)

    def __truediv__(self, other):
        if not isinstance(other, Jet):
            return self.scale(1.0 / float(other))
        a, b = self._align(other)
        return a * b.reciprocal()

    def __rtruediv__(self, other):
        return self.reciprocal().scale(other)

    # -- calculus -------------------------------------------------------------

    def deriv(self, pad: bool = True) -> "Jet":
        """Derivative jet; `pad` keeps the order by zero-filling the top."""
        out = [k * c for k, c in enumerate(self.coeffs)][1:]
        if not out:
            out = [0.0]
        elif pad:
            out.append(0.0)
        return Jet(self.base, out)

    def __call__(self, x: float) -> float:
        acc = 0.0
        dx = float(x) - self.base
        for c in reversed(self.coeffs):
            acc = acc * dx + c
        return acc

    def compose(self, inner: "Jet") -> "Jet":
        """Jet of self(inner(t)); inner's constant term must equal self.base."""
        if inner.coeffs[0] != self.base:
            raise DomainError(
                "inner constant term must equal the outer base point",
                offending=inner.coeffs[0],
            )
        k = min(self.order, inner.order)
        u = Jet(inner.base, (0.0,) + inner.coeffs[1 : k + 1])
        return _poly_in(self.coeffs[: k + 1], u)

    # -- elementary functions --------------------------------------------------

    def exp(self) -> "Jet":
        return self._compose_series(_taylor_exp(self.coeffs[0], self.order))

    def log(self) -> "Jet":
        if self.coeffs[0] <= 0.0:
            raise DomainError("log of a jet with non-positive constant term", offending=self.coeffs[0])
        return self._compose_series(_taylor_log(self.coeffs[0], self.order))

    def sinh(self) -> "Jet":
        return self._compose_series(_taylor_sinh_cosh(self.coeffs[0], self.order, start_sinh=True))

    def cosh(self) -> "Jet":
        return self._compose_series(_taylor_sinh_cosh(self.coeffs[0], self.order, start_sinh=False))

    def ck_cos(self, omega: float) -> "Jet":
        return self._compose_series(_taylor_ck(float(omega), self.coeffs[0], self.order, kind="C"))

    def ck_sin(self, omega: float) -> "Jet":
        return self._compose_series(_taylor_ck(float(omega), self.coeffs[0], self.order, kind="S"))

    def _compose_series(self, series) -> "Jet":
        u = Jet(self.base, (0.0,) + self.coeffs[1:])
        return _poly_in(series, u)


def _poly_in(series, u: Jet) -> Jet:
    acc = Jet.constant(0.0, u.base, u.order)
    for c in reversed(series):
        acc = acc * u + c
    return acc


def _taylor_exp(c0: float, order: int):
    e = math.exp(c0)
    return [e / math.factorial(k) for k in range(order + 1)]


def _taylor_log(c0: float, order: int):
    out = [math.log(c0)]
    for k in range(1, order + 1):
        out.append((-1.0) ** (k + 1) / (k * c0**k))
    return out


def _taylor_sinh_cosh(c0: float, order: int, start_sinh: bool):
    s, c = math.sinh(c0), math.cosh(c0)
    pair = (s, c) if start_sinh else (c, s)
    return [pair[k % 2] / math.factorial(k) for k in range(order + 1)]


def _taylor_ck(omega: float, c0: float, order: int, kind: str):
    c, s = _ck_cos_sin(omega, c0)
    out = []
    for k in range(order + 1):
        j, odd = divmod(k, 2)
        if kind == "C":
            d = ((-omega) ** (j + 1)) * s if odd else ((-omega) ** j) * c
        else:
            d = ((-omega) ** j) * c if odd else ((-omega) ** j) * s
        out.append(d / math.factorial(k))
    return out


_ELEMENTARY = ("exp", "log", "sinh", "cosh", "ck_cos", "ck_sin")


def jet_apply_elementary(name: str, j: Jet, omega: float | None = None) -> Jet:
    """Apply an elementary function to a jet by exact Taylor composition."""
    if name not in _ELEMENTARY:
        raise ValueError(f"unknown elementary function {name!r}")
    if name in ("ck_cos", "ck_sin"):
        if omega is None:
            raise ValueError(f"{name} needs the omega parameter")
        return getattr(j, name)(omega)
    return getattr(j, name)()
