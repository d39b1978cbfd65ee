"""Exact univariate polynomials over the rationals.

Scalars are :class:`fractions.Fraction`, which is always reduced with a
positive denominator.  Real roots are isolated with Sturm sequences built
from primitive integer remainders, so every sign decision is exact and
floats only appear when a root is finally refined for display.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from fractions import Fraction
from math import comb, factorial
from typing import Iterable, Optional

import numpy as np

from .errors import InternalError, InvalidArgument
from .expr import FunctionExpr
from .interval import Interval, as_rational


class Poly(FunctionExpr):
    """Polynomial with ``coeffs[k]`` the coefficient of ``t**k``.

    The zero polynomial has an empty coefficient tuple and degree -1.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [as_rational(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    @classmethod
    def constant(cls, c) -> "Poly":
        return cls([c])

    @classmethod
    def monomial(cls, k: int, c=1) -> "Poly":
        return cls([0] * k + [c])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == Poly([other]).coeffs
        return NotImplemented

    def __hash__(self):
        return hash(("Poly", self.coeffs))

    def __repr__(self):
        return f"Poly([{', '.join(str(c) for c in self.coeffs)}])"

    # ring operations
    def __add__(self, other):
        other = _lift(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = other.coeffs + (Fraction(0),) * (n - len(other.coeffs))
        return Poly(x + y for x, y in zip(a, b))

    __radd__ = __add__

    def __neg__(self):
        return Poly(-c for c in self.coeffs)

    def __sub__(self, other):
        return self + (-_lift(other))

    def __rsub__(self, other):
        return _lift(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Poly(c * other for c in self.coeffs)
        if not isinstance(other, Poly):
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return Poly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = Poly([1])
        for _ in range(k):
            out = out * self
        return out

    def __divmod__(self, other: "Poly"):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = other.degree
        lead = other.leading
        quot = [Fraction(0)] * max(len(rem) - dq, 0)
        for k in range(len(rem) - 1, dq - 1, -1):
            c = rem[k] / lead
            if c:
                quot[k - dq] = c
                for j, b in enumerate(other.coeffs):
                    rem[k - dq + j] -= c * b
        return Poly(quot), Poly(rem[:dq] if dq > 0 else [])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def divexact(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (1 / Fraction(other))
        q, r = divmod(self, other)
        if not r.is_zero():
            raise InternalError("inexact polynomial division")
        return q

    def __truediv__(self, other):
        return self.divexact(other)

    # function-expression interface
    def __call__(self, t) -> Fraction:
        t = as_rational(t)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * t + c
        return acc

    def derivative(self, k: int = 1) -> "Poly":
        if k < 0:
            raise InvalidArgument("derivative order must be non-negative")
        return Poly(
            c * (factorial(m) // factorial(m - k)) for m, c in enumerate(self.coeffs) if m >= k
        )

    def taylor(self, t, order):
        t = as_rational(t)
        return [self._shift_coeff(t, j) for j in range(order + 1)]

    def _shift_coeff(self, t: Fraction, j: int) -> Fraction:
        # coefficient of u**j in p(t + u)
        acc = Fraction(0)
        for m in range(len(self.coeffs) - 1, j - 1, -1):
            acc = acc * t + comb(m, j) * self.coeffs[m]
        return acc

    def shift(self, t) -> "Poly":
        """The polynomial u -> p(t + u)."""
        t = as_rational(t)
        return Poly(self._shift_coeff(t, j) for j in range(len(self.coeffs)))

    def compose(self, inner: "Poly") -> "Poly":
        out = Poly()
        for c in reversed(self.coeffs):
            out = out * inner + c
        return out

    def evalf(self, t):
        t = np.asarray(t, dtype=float)
        cs = [float(c) for c in self.coeffs] or [0.0]
        ds = [float(c) for c in self.derivative().coeffs] or [0.0]
        return np.polynomial.polynomial.polyval(t, cs), np.polynomial.polynomial.polyval(t, ds)

    def as_poly(self):
        return self

    def image(self, interval):
        if interval is None:
            return None
        return poly_range(self, interval)

    def to_spec(self):
        for n in _gn_candidates(self):
            if self == gn_poly(n):
                return f"g({n})"
        if self.coeffs and self.leading == 1 and all(c == 0 for c in self.coeffs[:-1]):
            return f"pow({self.degree})"
        return "poly(" + ",".join(str(c) for c in self.coeffs or (0,)) + ")"


def _lift(x) -> Poly:
    if isinstance(x, Poly):
        return x
    return Poly([x])


def _gn_candidates(p: Poly):
    if p.degree >= 1 and p.degree % 2 == 1:
        yield (p.degree + 1) // 2


def gn_poly(n: int) -> Poly:
    """t + t**3/3 + ... + t**(2n-1)/(2n-1)."""
    if not isinstance(n, int) or n < 1:
        raise InvalidArgument(f"g_n needs a positive integer n, got {n!r}")
    coeffs = [Fraction(0)] * (2 * n)
    for k in range(1, n + 1):
        coeffs[2 * k - 1] = Fraction(1, 2 * k - 1)
    return Poly(coeffs)


def derivative(p: Poly, k: int = 1) -> Poly:
    return p.derivative(k)


def evaluate(p: Poly, t) -> Fraction:
    return p(t)


def divided_difference(f: FunctionExpr, x, y) -> Fraction:
    """First divided difference; the derivative when the nodes coincide."""
    x, y = as_rational(x), as_rational(y)
    if x == y:
        return f.taylor(x, 1)[1]
    return (f(x) - f(y)) / (x - y)


def synthetic_quotient(p: Poly, t0) -> Poly:
    """(p(t) - p(t0)) / (t - t0) by synthetic division."""
    t0 = as_rational(t0)
    if p.degree < 1:
        return Poly()
    out = []
    acc = Fraction(0)
    for c in reversed(p.coeffs[1:]):
        acc = acc * t0 + c
        out.append(acc)
    return Poly(reversed(out))


def poly_gcd(a: Poly, b: Poly) -> Poly:
    while not b.is_zero():
        a, b = b, a % b
    if a.is_zero():
        return a
    return a * (1 / a.leading)


def squarefree_part(p: Poly) -> Poly:
    if p.degree < 1:
        return p
    g = poly_gcd(p, p.derivative())
    return p.divexact(g) if g.degree >= 1 else p


def cauchy_bound(p: Poly) -> Fraction:
    """1 + max |a_k / a_deg|; every real root lies strictly inside (-B, B)."""
    lead = abs(p.leading)
    return 1 + max((abs(c) / lead for c in p.coeffs[:-1]), default=Fraction(0))


# ---------------------------------------------------------------------------
# Sturm sequences on primitive integer polynomials

def _primitive_ints(p: Poly) -> tuple[int, ...]:
    """Positive multiple of p with coprime integer coefficients."""
    lcm = 1
    for c in p.coeffs:
        lcm = lcm * c.denominator // math.gcd(lcm, c.denominator)
    ints = [int(c * lcm) for c in p.coeffs]
    g = 0
    for x in ints:
        g = math.gcd(g, x)
    return tuple(x // g for x in ints) if g else ()


def _sign_at(ints: tuple[int, ...], x) -> int:
    """Exact sign of sum ints[k] x**k; x rational or +-inf."""
    if not ints:
        return 0
    if isinstance(x, float):
        lead = ints[-1]
        if x > 0 or (len(ints) - 1) % 2 == 0:
            return (lead > 0) - (lead < 0)
        return (lead < 0) - (lead > 0)
    num, den = x.numerator, x.denominator
    acc = 0
    dpow = 1
    # homogeneous Horner: sum c_k num**k den**(n-k)
    for c in reversed(ints):
        acc = acc * num + c * dpow
        dpow *= den
    return (acc > 0) - (acc < 0)


class SturmChain:
    """Sturm sequence of the square-free part of a polynomial."""

    def __init__(self, p: Poly):
        if p.is_zero():
            raise InvalidArgument("Sturm sequence of the zero polynomial")
        self.poly = p
        self.squarefree = squarefree_part(p)
        q = self.squarefree
        seq = [q, q.derivative()]
        while seq[-1].degree >= 1:
            r = seq[-2] % seq[-1]
            if r.is_zero():
                break
            seq.append(-r)
        # rescale each member by a positive factor to primitive integers
        self.chain = [_primitive_ints(s) for s in seq if not s.is_zero()]
        self.q_ints = self.chain[0]

    def sign(self, x) -> int:
        return _sign_at(self.q_ints, x)

    def variations(self, x) -> int:
        count, last = 0, 0
        for s in self.chain:
            sg = _sign_at(s, x)
            if sg:
                if last and sg != last:
                    count += 1
                last = sg
        return count

    def count(self, a, b) -> int:
        """Number of distinct real roots in (a, b]."""
        return self.variations(a) - self.variations(b)


@dataclass(frozen=True)
class RootBracket:
    """Open interval (lo, hi) holding exactly one real root.

    The endpoints are never roots; ``sign_change`` tells whether the
    polynomial itself (not just its square-free part) changes sign.
    """

    lo: Fraction
    hi: Fraction
    sign_change: bool

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2


@lru_cache(maxsize=512)
def sturm_chain(p: Poly) -> SturmChain:
    return SturmChain(p)


def _non_root_split(chain: SturmChain, a: Fraction, b: Fraction) -> Fraction:
    for k in (2, 3, 5, 7, 11, 13):
        for j in range(1, k):
            m = a + (b - a) * Fraction(j, k)
            if chain.sign(m) != 0:
                return m
    raise InternalError("no non-root split point found")  # pragma: no cover


def _inward_from(chain: SturmChain, x: Fraction, toward: Fraction) -> Fraction:
    """Point strictly between x and ``toward``, not a root, no root in between."""
    step = toward - x
    for _ in range(2000):
        step /= 2
        y = x + step
        lo, hi = (x, y) if step > 0 else (y, x)
        # roots in the open gap, i.e. (lo, hi] minus a possible root at x
        n = chain.count(lo, hi) - (1 if step < 0 and chain.sign(x) == 0 else 0)
        if n == 0 and chain.sign(y) != 0:
            return y
    raise InternalError("could not move off a root")  # pragma: no cover


def _isolate(chain: SturmChain, a, b) -> list[RootBracket]:
    """Brackets for the roots in the open interval (a, b); a, b may be infinite."""
    q = chain.squarefree
    if q.degree < 1:
        return []
    bound = cauchy_bound(q)
    a = -bound if isinstance(a, float) else Fraction(a)
    b = bound if isinstance(b, float) else Fraction(b)
    if a >= b:
        return []
    if chain.sign(a) == 0:
        a = _inward_from(chain, a, b)
    if chain.sign(b) == 0:
        b = _inward_from(chain, b, a)
    out = []
    stack = [(a, b)]
    while stack:
        lo, hi = stack.pop()
        n = chain.count(lo, hi)
        if n == 0:
            continue
        if n == 1:
            out.append(RootBracket(lo, hi, _sign_change(chain.poly, lo, hi)))
            continue
        m = _non_root_split(chain, lo, hi)
        stack.append((m, hi))
        stack.append((lo, m))
    out.sort(key=lambda br: br.lo)
    return out


def _sign_change(p: Poly, lo, hi) -> bool:
    return p(lo) * p(hi) < 0


def isolate_positive_roots(p: Poly) -> list[RootBracket]:
    """Disjoint brackets, one per distinct positive real root of p."""
    if p.is_zero():
        raise InvalidArgument("cannot isolate the roots of the zero polynomial")
    if p.degree < 1:
        return []
    return _isolate(sturm_chain(p), Fraction(0), math.inf)


def isolate_real_roots(p: Poly, lo=-math.inf, hi=math.inf) -> list[RootBracket]:
    """Brackets for the distinct real roots of p in the open interval (lo, hi)."""
    if p.is_zero():
        raise InvalidArgument("cannot isolate the roots of the zero polynomial")
    if p.degree < 1:
        return []
    return _isolate(sturm_chain(p), lo, hi)


def count_roots(p: Poly, lo, hi) -> int:
    """Distinct real roots in (lo, hi]; endpoints rational or infinite."""
    return sturm_chain(p).count(lo, hi)


def refine_bracket(p: Poly, bracket: RootBracket, width) -> RootBracket:
    q_ints = sturm_chain(p).q_ints
    lo, hi = bracket.lo, bracket.hi
    s_lo, s_hi = _sign_at(q_ints, lo), _sign_at(q_ints, hi)
    if s_lo == 0 or s_hi == 0 or s_lo == s_hi:
        raise InternalError(f"inconsistent root bracket ({lo}, {hi})")
    width = as_rational(width)
    while hi - lo > width:
        m = (lo + hi) / 2
        s_m = _sign_at(q_ints, m)
        if s_m == 0:
            # exact rational root: shrink symmetrically around it
            eps = min(width, hi - lo) / 4
            lo, hi = m - eps, m + eps
            while _sign_at(q_ints, lo) == 0 or _sign_at(q_ints, hi) == 0:
                eps /= 3
                lo, hi = m - eps, m + eps
            break
        if s_m == s_lo:
            lo = m
        else:
            hi = m
    return RootBracket(lo, hi, bracket.sign_change)


def refine_root(p: Poly, bracket: RootBracket, tol: float) -> float:
    """Root inside ``bracket`` to within ``tol`` (bisection on exact signs)."""
    if not tol > 0:
        raise InvalidArgument("tol must be positive")
    b = refine_bracket(p, bracket, Fraction(tol))
    return float(b.midpoint)


# ---------------------------------------------------------------------------
# sign questions on intervals

@dataclass(frozen=True)
class NonnegResult:
    holds: bool
    witness: Optional[Fraction] = None

    def __bool__(self):
        return self.holds


def poly_nonneg_on(p: Poly, interval: Interval) -> NonnegResult:
    """Decide p >= 0 on ``interval`` exactly; a negative point is returned if not."""
    if p.is_zero():
        return NonnegResult(True)
    samples = []
    for end, closed in ((interval.lo, interval.lo_closed), (interval.hi, interval.hi_closed)):
        if closed:
            samples.append(end)
    if p.degree < 1:
        samples.append(interval.interior_point())
    else:
        chain = sturm_chain(p)
        brackets = _isolate(chain, interval.lo, interval.hi)
        if not brackets:
            samples.append(interval.interior_point())
        else:
            # one point in every root-free component of the open interval
            first = brackets[0]
            if not isinstance(interval.lo, float) and first.lo <= interval.lo:
                first = _tighten_left(p, first, interval.lo)
            last = brackets[-1]
            if len(brackets) == 1:
                last = first
            if not isinstance(interval.hi, float) and last.hi >= interval.hi:
                last = _tighten_right(p, last, interval.hi)
            samples.append(first.lo)
            for br in brackets[:-1]:
                samples.append(br.hi)
            samples.append(last.hi)
    for s in samples:
        if p(s) < 0:
            return NonnegResult(False, s)
    return NonnegResult(True)


def _tighten_left(p: Poly, br: RootBracket, bound) -> RootBracket:
    while br.lo <= bound:
        br = refine_bracket(p, br, br.width / 2)
    return br


def _tighten_right(p: Poly, br: RootBracket, bound) -> RootBracket:
    while br.hi >= bound:
        br = refine_bracket(p, br, br.width / 2)
    return br


def poly_range(p: Poly, interval: Interval) -> Interval:
    """Closed outer enclosure of p(interval); unbounded where p is."""
    if p.degree < 1:
        c = p(0)
        return Interval(c - 1, c + 1, False, False)
    lo_inf, hi_inf = isinstance(interval.lo, float), isinstance(interval.hi, float)
    values = []
    up = down = False
    lead_pos = p.leading > 0
    if hi_inf:
        up, down = (up or lead_pos), (down or not lead_pos)
    else:
        values.append(p(interval.hi))
    if lo_inf:
        even = p.degree % 2 == 0
        pos = lead_pos if even else not lead_pos
        up, down = up or pos, down or not pos
    else:
        values.append(p(interval.lo))
    crit = p.derivative()
    if crit.degree >= 1:
        for br in isolate_real_roots(crit, interval.lo, interval.hi):
            br = refine_bracket(crit, br, Fraction(1, 2**20))
            values.extend(_interval_horner(p, br.lo, br.hi))
    lo = -math.inf if down else min(values)
    hi = math.inf if up else max(values)
    if lo == hi:
        return Interval(lo - Fraction(1, 2**30), hi + Fraction(1, 2**30), True, True)
    return Interval(lo, hi, True, True)


def _interval_horner(p: Poly, a: Fraction, b: Fraction) -> tuple[Fraction, Fraction]:
    lo = hi = Fraction(0)
    for c in reversed(p.coeffs):
        prods = (lo * a, lo * b, hi * a, hi * b)
        lo, hi = min(prods) + c, max(prods) + c
    return lo, hi
