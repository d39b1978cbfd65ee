"""Dobsch matrices M_n(f; t) and the exact gap certificate for g_n.

M_n(f; t) has entries f^(i+j-1)(t) / (i+j-1)!, i, j = 1..n.  For the odd
polynomial g_n it specialises at t = 0 to the Hankel matrix of the moments
of the uniform probability measure on [-1, 1].
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Optional

from .errors import InternalError, InvalidArgument
from .exactpoly import (
    Poly,
    RootBracket,
    count_roots,
    gn_poly,
    isolate_positive_roots,
    poly_nonneg_on,
    refine_bracket,
)
from .interval import Interval, as_rational
from .psdcert import PsdVerdict, SymMatrix, det_exact, is_pd, is_psd, leading_minors


def moment_b(k: int) -> Fraction:
    """(1/2) * integral of t**k over [-1, 1]."""
    if k < 0:
        raise InvalidArgument("moment index must be non-negative")
    return Fraction(1, k + 1) if k % 2 == 0 else Fraction(0)


def hankel_at_zero(n: int) -> SymMatrix:
    if n < 1:
        raise InvalidArgument("order must be positive")
    return SymMatrix([[moment_b(i + j) for j in range(n)] for i in range(n)], check=False)


@dataclass(frozen=True)
class DobschMatrix:
    n: int
    f: Poly
    entries: SymMatrix

    def at(self, t) -> SymMatrix:
        return self.entries.at(t)

    def leading_minor_polys(self) -> tuple[Poly, ...]:
        return _leading_minor_polys(self.f, self.n)


def dobsch_matrix(f: Poly, n: int) -> DobschMatrix:
    if not isinstance(n, int) or n < 1:
        raise InvalidArgument(f"Dobsch matrix order must be a positive integer, got {n!r}")
    scaled = [f.derivative(m) * Fraction(1, factorial(m)) for m in range(2 * n)]
    rows = [[scaled[i + j + 1] for j in range(n)] for i in range(n)]
    return DobschMatrix(n, f, SymMatrix(rows, check=False))


def _zmul(a: list[int], b: list[int]) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _zsub(a: list[int], b: list[int]) -> list[int]:
    out = [x - y for x, y in zip(a, b)]
    out += a[len(b):] + [-y for y in b[len(a):]]
    while out and out[-1] == 0:
        out.pop()
    return out


def _zdivexact(a: list[int], b: list[int]) -> list[int]:
    a = list(a)
    q = [0] * max(len(a) - len(b) + 1, 0)
    lead = b[-1]
    for k in range(len(q) - 1, -1, -1):
        c, r = divmod(a[k + len(b) - 1], lead)
        if r:
            raise InternalError("inexact division in Z[t] elimination")
        q[k] = c
        if c:
            for j, y in enumerate(b):
                a[k + j] -= c * y
    if any(a):
        raise InternalError("inexact division in Z[t] elimination")
    while q and q[-1] == 0:
        q.pop()
    return q


@lru_cache(maxsize=None)
def _leading_minor_polys(f: Poly, n: int) -> tuple[Poly, ...]:
    """Leading minors of M_n(f; t) by Bareiss elimination over Z[t].

    Entries are scaled by a common denominator L first, so the k-th minor
    comes out multiplied by L**k.  Falls back to Q[t] on a zero pivot.
    """
    m = dobsch_matrix(f, n).entries
    lcm = 1
    for row in m.entries:
        for p in row:
            for c in p.coeffs:
                lcm = lcm * c.denominator // math.gcd(lcm, c.denominator)
    a = [[[int(c * lcm) for c in p.coeffs] for p in row] for row in m.entries]
    out = []
    prev = [1]
    for k in range(n):
        pivot = a[k][k]
        if not pivot:
            return tuple(leading_minors(m))
        out.append(Poly([Fraction(c, lcm ** (k + 1)) for c in pivot]))
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = _zdivexact(_zsub(_zmul(a[i][j], pivot), _zmul(a[i][k], a[k][j])), prev)
        prev = pivot
    return tuple(out)


def trailing_block(n: int) -> SymMatrix:
    """The 3x3 principal block of M_{n+1}(g_n; t) on its last three indices."""
    if not isinstance(n, int) or n < 2:
        raise InvalidArgument("the trailing block needs n >= 2")
    m = dobsch_matrix(gn_poly(n), n + 1).entries
    return m.principal((n - 2, n - 1, n))


def trailing_block_det(n: int) -> Poly:
    det = det_exact(trailing_block(n))
    expected = Poly([Fraction(-1, (2 * n - 1) ** 3)])
    if det != expected:
        raise InternalError(f"trailing block determinant {det!r} differs from {expected!r}")
    return det


@dataclass(frozen=True)
class AlphaEstimate:
    """Radius where some leading minor of M_n(g_n; t) first vanishes."""

    n: int
    value: float  # math.inf when no minor has a positive root
    bracket: Optional[RootBracket] = None
    minor: Optional[int] = None  # 1-based size of the minor that vanishes first
    tol: float = 0.0

    @property
    def finite(self) -> bool:
        return math.isfinite(self.value)


def alpha_dobsch(n: int, tol: float = 1e-8) -> AlphaEstimate:
    if not isinstance(n, int) or n < 1:
        raise InvalidArgument("order must be a positive integer")
    if not tol > 0:
        raise InvalidArgument("tol must be positive")
    width = Fraction(tol)
    best = None
    for k, minor in enumerate(_leading_minor_polys(gn_poly(n), n), start=1):
        roots = isolate_positive_roots(minor)
        if not roots:
            continue
        br = refine_bracket(minor, roots[0], width)
        if best is None or br.midpoint < best[1].midpoint:
            best = (k, br)
    if best is None:
        return AlphaEstimate(n, math.inf, tol=tol)
    k, br = best
    return AlphaEstimate(n, float(br.midpoint), br, k, tol)


def alpha_rat_is_certified(n: int, alpha_rat) -> bool:
    """True iff every leading minor of M_n(g_n; t) is > 0 on [0, alpha_rat)."""
    alpha_rat = as_rational(alpha_rat)
    if alpha_rat <= 0:
        return False
    for minor in _leading_minor_polys(gn_poly(n), n):
        if minor(0) <= 0:
            return False
        inside = count_roots(minor, Fraction(0), alpha_rat)
        if minor(alpha_rat) == 0:
            inside -= 1
        if inside:
            return False
    return True


def default_alpha_rat(estimate: AlphaEstimate) -> Optional[Fraction]:
    """Largest k/64 (finer grid if needed) below alpha - tol; None if alpha is infinite."""
    if not estimate.finite:
        return None
    target = estimate.bracket.lo - Fraction(estimate.tol)
    den = 64
    while True:
        k = math.floor(target * den)
        if Fraction(k, den) >= target:
            k -= 1
        if k >= 1:
            return Fraction(k, den)
        den *= 2


@dataclass
class GapCertificate:
    n: int
    hankel_pd: PsdVerdict
    alpha: AlphaEstimate
    alpha_rat: Optional[Fraction]
    trailing_det: Optional[Poly] = None
    trailing_not_psd: Optional[PsdVerdict] = None
    hypothesis_check: bool = False
    hypothesis_detail: dict = field(default_factory=dict)
    order_n_plus_1: object = None  # loewner witness or Exhausted, only for n = 1
    failures: list = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return not self.failures


def _hypothesis(n: int, alpha_rat: Optional[Fraction]):
    p = gn_poly(n).derivative(2 * n - 3)
    interval = Interval.open(0, alpha_rat) if alpha_rat is not None else Interval(0, math.inf, False)
    positive = poly_nonneg_on(p, interval)
    convex = poly_nonneg_on(p.derivative(2), interval)
    return positive.holds and convex.holds, {
        "derivative_order": 2 * n - 3,
        "interval": str(interval),
        "positive": positive,
        "convex": convex,
    }


def gap_certificate(n: int, tol: float = 1e-8, *, budget: int = 1000, seed: int = 0) -> GapCertificate:
    """Exact certificate that g_n is order-n monotone near 0 but nowhere order n+1.

    ``budget`` and ``seed`` only matter for n = 1, where the order-2 part is
    delegated to the Loewner counterexample search.
    """
    if not isinstance(n, int) or n < 1:
        raise InvalidArgument("order must be a positive integer")
    hankel = is_pd(hankel_at_zero(n))
    alpha = alpha_dobsch(n, tol)
    alpha_rat = default_alpha_rat(alpha)
    cert = GapCertificate(n, hankel, alpha, alpha_rat)
    if not hankel.is_pd:
        cert.failures.append("hankel_pd")
    if alpha_rat is not None and not alpha_rat_is_certified(n, alpha_rat):
        cert.failures.append("alpha_rat")

    if n >= 2:
        block = trailing_block(n)
        det = det_exact(block)
        cert.trailing_det = det
        if det != Poly([Fraction(-1, (2 * n - 1) ** 3)]):
            cert.failures.append("trailing_det")
        cert.trailing_not_psd = is_psd(block.at(0))
        if not cert.trailing_not_psd.not_psd:
            cert.failures.append("trailing_not_psd")
        cert.hypothesis_check, cert.hypothesis_detail = _hypothesis(n, alpha_rat)
        if not cert.hypothesis_check:
            cert.failures.append("hypothesis_check")
    else:
        from .loewner import Exhausted, find_violation

        domain = Interval.closed_unbounded(0)
        found = find_violation(gn_poly(1), 2, domain, budget, seed)
        cert.order_n_plus_1 = found
        # g_1 = t needs no hypothesis: its first derivative is the constant 1
        cert.hypothesis_check = True
        if isinstance(found, Exhausted):
            cert.failures.append("order_n_plus_1")
    return cert
