"""Closed expression language for the functions the library reasons about.

Every node is exactly evaluable at rational points and carries an exact
Taylor expansion at any rational non-pole point, which is how first (and
higher) derivatives are obtained.  A float forward-mode path (value and
first derivative on numpy arrays) exists for search guidance only.

Nodes: :class:`~monotone_gap.exactpoly.Poly`, :class:`Affine`,
:class:`Mobius`, :class:`Compose`, :class:`Mul`, :class:`BendatSherman`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import TYPE_CHECKING, Optional

import numpy as np

from .errors import DomainError, InvalidArgument
from .interval import INF, Interval, as_rational

if TYPE_CHECKING:
    from .exactpoly import Poly

Series = list  # list[Fraction]; index k is the coefficient of u**k


def series_mul(a: Series, b: Series, order: int) -> Series:
    out = [Fraction(0)] * (order + 1)
    for i, ai in enumerate(a[: order + 1]):
        if ai:
            for j, bj in enumerate(b[: order + 1 - i]):
                out[i + j] += ai * bj
    return out


def series_div(a: Series, b: Series, order: int) -> Series:
    if not b or b[0] == 0:
        raise DomainError("series division by a series vanishing at the expansion point")
    out = []
    for k in range(order + 1):
        acc = a[k] if k < len(a) else Fraction(0)
        for j in range(1, min(k, len(b) - 1) + 1):
            acc -= b[j] * out[k - j]
        out.append(acc / b[0])
    return out


def series_compose(outer: Series, inner: Series, order: int) -> Series:
    """Coefficients of ``outer(inner(u) - inner(0))`` up to ``u**order``."""
    shifted = [Fraction(0)] + list(inner[1 : order + 1])
    shifted += [Fraction(0)] * (order + 1 - len(shifted))
    out = [Fraction(0)] * (order + 1)
    power = [Fraction(1)] + [Fraction(0)] * order
    for j, oj in enumerate(outer[: order + 1]):
        if j:
            power = series_mul(power, shifted, order)
        if oj:
            for k in range(order + 1):
                out[k] += oj * power[k]
    return out


class FunctionExpr:
    """Base class of the expression tree."""

    def __call__(self, t) -> Fraction:
        raise NotImplementedError

    def taylor(self, t, order: int) -> Series:
        """Exact ``[f(t), f'(t), f''(t)/2!, ..., f^(order)(t)/order!]``."""
        raise NotImplementedError

    def derivative_at(self, t, k: int = 1) -> Fraction:
        return self.taylor(as_rational(t), k)[k] * factorial(k)

    def evalf(self, t: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Float value and first derivative, elementwise."""
        raise NotImplementedError

    def image(self, interval: Optional[Interval]) -> Optional[Interval]:
        """Interval hull of f(interval), or None when not computable."""
        return None

    def check_domain(self, interval: Optional[Interval]) -> None:
        """Raise DomainError if f has a pole inside ``interval``."""

    def as_poly(self) -> Optional["Poly"]:
        return None

    def to_spec(self) -> str:
        raise NotImplementedError

    def __str__(self) -> str:
        return self.to_spec()


@dataclass(frozen=True, eq=True)
class Affine(FunctionExpr):
    """t -> c*t + d."""

    c: Fraction
    d: Fraction

    def __post_init__(self):
        object.__setattr__(self, "c", as_rational(self.c))
        object.__setattr__(self, "d", as_rational(self.d))

    def __call__(self, t) -> Fraction:
        return self.c * as_rational(t) + self.d

    def taylor(self, t, order):
        out = [self(t), self.c] + [Fraction(0)] * max(order - 1, 0)
        return out[: order + 1]

    def evalf(self, t):
        t = np.asarray(t, dtype=float)
        return float(self.c) * t + float(self.d), np.full_like(t, float(self.c))

    def image(self, interval):
        if interval is None:
            return None
        if self.c == 0:
            return None
        lo = _affine_end(self.c, self.d, interval.lo)
        hi = _affine_end(self.c, self.d, interval.hi)
        if self.c > 0:
            return Interval(lo, hi, interval.lo_closed, interval.hi_closed)
        return Interval(hi, lo, interval.hi_closed, interval.lo_closed)

    def as_poly(self):
        from .exactpoly import Poly

        return Poly([self.d, self.c])

    def inverse(self) -> "Affine":
        if self.c == 0:
            raise InvalidArgument("constant affine map has no inverse")
        return Affine(1 / self.c, -self.d / self.c)

    def to_spec(self):
        return f"affine({self.c},{self.d})"


def _affine_end(c, d, x):
    if isinstance(x, float):  # infinite
        return x if c > 0 else -x
    return c * x + d


@dataclass(frozen=True, eq=True)
class Mobius(FunctionExpr):
    """t -> (a*t + b) / (c*t + d) with a*d - b*c != 0.

    Coefficients are normalised to coprime integers with ``c > 0``, or
    ``c == 0`` and ``d > 0``, so equal maps compare equal.
    """

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        coeffs = [as_rational(x) for x in (self.a, self.b, self.c, self.d)]
        a, b, c, d = coeffs
        if a * d - b * c == 0:
            raise InvalidArgument("degenerate Mobius map: a*d - b*c = 0")
        lcm = 1
        for x in coeffs:
            lcm = lcm * x.denominator // math.gcd(lcm, x.denominator)
        ints = [int(x * lcm) for x in coeffs]
        g = 0
        for x in ints:
            g = math.gcd(g, x)
        ints = [x // g for x in ints]
        if ints[2] < 0 or (ints[2] == 0 and ints[3] < 0):
            ints = [-x for x in ints]
        for name, value in zip("abcd", ints):
            object.__setattr__(self, name, value)

    @classmethod
    def from_matrix(cls, m) -> FunctionExpr:
        """Canonical node for the map of ``((a, b), (c, d))``; Affine when c = 0."""
        (a, b), (c, d) = m
        a, b, c, d = (as_rational(x) for x in (a, b, c, d))
        if c == 0:
            return Affine(a / d, b / d)
        return cls(a, b, c, d)

    @property
    def matrix(self):
        return ((Fraction(self.a), Fraction(self.b)), (Fraction(self.c), Fraction(self.d)))

    @property
    def det(self) -> int:
        return self.a * self.d - self.b * self.c

    @property
    def pole(self) -> Optional[Fraction]:
        return Fraction(-self.d, self.c) if self.c else None

    def __call__(self, t) -> Fraction:
        t = as_rational(t)
        den = self.c * t + self.d
        if den == 0:
            raise DomainError(f"{self.to_spec()} has a pole at t = {t}")
        return (self.a * t + self.b) / den

    def taylor(self, t, order):
        t = as_rational(t)
        num = [self.a * t + self.b, Fraction(self.a)]
        den = [self.c * t + self.d, Fraction(self.c)]
        if den[0] == 0:
            raise DomainError(f"{self.to_spec()} has a pole at t = {t}")
        return series_div(num + [Fraction(0)] * order, den + [Fraction(0)] * order, order)

    def evalf(self, t):
        t = np.asarray(t, dtype=float)
        den = self.c * t + self.d
        return (self.a * t + self.b) / den, self.det / den**2

    def check_domain(self, interval):
        if interval is None or self.pole is None:
            return
        if self.pole in interval:
            raise DomainError(f"{self.to_spec()} has a pole at {self.pole}, inside {interval}")

    def image(self, interval):
        if interval is None:
            return None
        self.check_domain(interval)
        increasing = self.det > 0
        lo = self._limit(interval.lo, from_right=True, increasing=increasing)
        hi = self._limit(interval.hi, from_right=False, increasing=increasing)
        lo_closed = interval.lo_closed and not isinstance(lo, float)
        hi_closed = interval.hi_closed and not isinstance(hi, float)
        if increasing:
            return Interval(lo, hi, lo_closed, hi_closed)
        return Interval(hi, lo, hi_closed, lo_closed)

    def _limit(self, x, from_right, increasing):
        if isinstance(x, float):
            if self.c == 0:
                sign = 1 if x > 0 else -1
                sign = sign if increasing else -sign
                return INF * sign
            return Fraction(self.a, self.c)
        if self.c and x == self.pole:
            # approaching the vertical asymptote from inside the interval
            up = increasing != from_right
            return INF if up else -INF
        return self(x)

    def inverse(self) -> "Mobius":
        return Mobius(self.d, -self.b, -self.c, self.a)

    def to_spec(self):
        return f"mobius({self.a},{self.b},{self.c},{self.d})"


@dataclass(frozen=True, eq=True)
class Compose(FunctionExpr):
    """t -> outer(inner(t))."""

    outer: FunctionExpr
    inner: FunctionExpr

    def __call__(self, t):
        return self.outer(self.inner(t))

    def taylor(self, t, order):
        inner = self.inner.taylor(t, order)
        outer = self.outer.taylor(inner[0], order)
        return series_compose(outer, inner, order)

    def evalf(self, t):
        v, dv = self.inner.evalf(t)
        w, dw = self.outer.evalf(v)
        return w, dw * dv

    def image(self, interval):
        return self.outer.image(self.inner.image(interval))

    def check_domain(self, interval):
        self.inner.check_domain(interval)
        self.outer.check_domain(self.inner.image(interval))

    def as_poly(self):
        outer, inner = self.outer.as_poly(), self.inner.as_poly()
        if outer is None or inner is None:
            return None
        return outer.compose(inner)

    def to_spec(self):
        return f"compose({self.outer.to_spec()}, {self.inner.to_spec()})"


@dataclass(frozen=True, eq=True)
class Mul(FunctionExpr):
    """Pointwise product t -> left(t) * right(t)."""

    left: FunctionExpr
    right: FunctionExpr

    def __call__(self, t):
        return self.left(t) * self.right(t)

    def taylor(self, t, order):
        return series_mul(self.left.taylor(t, order), self.right.taylor(t, order), order)

    def evalf(self, t):
        u, du = self.left.evalf(t)
        v, dv = self.right.evalf(t)
        return u * v, du * v + u * dv

    def check_domain(self, interval):
        self.left.check_domain(interval)
        self.right.check_domain(interval)

    def as_poly(self):
        left, right = self.left.as_poly(), self.right.as_poly()
        if left is None or right is None:
            return None
        return left * right

    def to_spec(self):
        return f"mul({self.left.to_spec()}, {self.right.to_spec()})"


@dataclass(frozen=True, eq=True)
class BendatSherman(FunctionExpr):
    """t -> (f(t) - f(t0)) / (t - t0), extended by f'(t0) at t0."""

    f: FunctionExpr
    t0: Fraction

    def __post_init__(self):
        object.__setattr__(self, "t0", as_rational(self.t0))
        self.f(self.t0)  # raises DomainError at a pole

    def __call__(self, t):
        t = as_rational(t)
        if t == self.t0:
            return self.f.taylor(self.t0, 1)[1]
        return (self.f(t) - self.f(self.t0)) / (t - self.t0)

    def taylor(self, t, order):
        t = as_rational(t)
        if t == self.t0:
            return list(self.f.taylor(t, order + 1)[1:])
        fs = list(self.f.taylor(t, order))
        fs[0] -= self.f(self.t0)
        return series_div(fs, [t - self.t0, Fraction(1)] + [Fraction(0)] * order, order)

    def evalf(self, t):
        t = np.asarray(t, dtype=float)
        t0 = float(self.t0)
        fv, dfv = self.f.evalf(t)
        f0 = float(self.f(self.t0))
        h = t - t0
        near = np.abs(h) < 1e-6 * (1.0 + abs(t0))
        safe = np.where(near, 1.0, h)
        val = (fv - f0) / safe
        der = (dfv * safe - (fv - f0)) / safe**2
        if near.any():
            c = [float(x) for x in self.f.taylor(self.t0, 3)]
            hn = np.where(near, h, 0.0)
            val = np.where(near, c[1] + c[2] * hn + c[3] * hn * hn, val)
            der = np.where(near, c[2] + 2 * c[3] * hn, der)
        return val, der

    def check_domain(self, interval):
        self.f.check_domain(interval)

    def as_poly(self):
        p = self.f.as_poly()
        if p is None:
            return None
        from .exactpoly import synthetic_quotient

        return synthetic_quotient(p, self.t0)

    def to_spec(self):
        return f"bendat({self.f.to_spec()}, {self.t0})"
