"""Exact definiteness certificates for small dense symmetric matrices."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Optional, Sequence, Union

import numpy as np

from .errors import InternalError, InvalidArgument
from .exactpoly import Poly
from .interval import as_rational

Scalar = Union[Fraction, Poly]


class SymMatrix:
    """Symmetric matrix with all-Fraction or all-Poly entries."""

    __slots__ = ("entries",)

    def __init__(self, rows: Sequence[Sequence], check: bool = True):
        rows = [list(r) for r in rows]
        n = len(rows)
        if n == 0 or any(len(r) != n for r in rows):
            raise InvalidArgument("a symmetric matrix must be square and non-empty")
        poly = any(isinstance(x, Poly) for r in rows for x in r)
        if poly:
            rows = [[x if isinstance(x, Poly) else Poly([x]) for x in r] for r in rows]
        else:
            rows = [[as_rational(x) for x in r] for r in rows]
        if check:
            for i in range(n):
                for j in range(i):
                    if rows[i][j] != rows[j][i]:
                        raise InvalidArgument(f"matrix is not symmetric at ({i}, {j})")
        object.__setattr__(self, "entries", tuple(tuple(r) for r in rows))

    def __setattr__(self, name, value):
        raise AttributeError("SymMatrix is immutable")

    @property
    def order(self) -> int:
        return len(self.entries)

    @property
    def is_poly(self) -> bool:
        return isinstance(self.entries[0][0], Poly)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def __eq__(self, other):
        return isinstance(other, SymMatrix) and self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def __repr__(self):
        rows = ", ".join("[" + ", ".join(str(x) for x in r) + "]" for r in self.entries)
        return f"SymMatrix([{rows}])"

    def principal(self, index: Sequence[int]) -> "SymMatrix":
        return SymMatrix([[self.entries[i][j] for j in index] for i in index], check=False)

    def leading(self, k: int) -> "SymMatrix":
        return self.principal(range(k))

    def at(self, t) -> "SymMatrix":
        """Specialise polynomial entries at a rational t."""
        if not self.is_poly:
            return self
        t = as_rational(t)
        return SymMatrix([[x(t) for x in r] for r in self.entries], check=False)

    def hadamard(self, other: "SymMatrix") -> "SymMatrix":
        return SymMatrix(
            [[a * b for a, b in zip(r, s)] for r, s in zip(self.entries, other.entries)],
            check=False,
        )

    def quadratic_form(self, v: Sequence) -> Scalar:
        v = [as_rational(x) for x in v]
        total = Fraction(0)
        for i, vi in enumerate(v):
            if vi:
                for j, vj in enumerate(v):
                    total += vi * self.entries[i][j] * vj
        return total

    def to_float(self) -> np.ndarray:
        if self.is_poly:
            raise InvalidArgument("polynomial matrix has no float value; specialise first")
        return np.array([[float(x) for x in r] for r in self.entries])


class Verdict(enum.Enum):
    POSITIVE_DEFINITE = "PositiveDefinite"
    PSD_SINGULAR = "PositiveSemidefiniteSingular"
    NOT_PSD = "NotPsd"
    # only from is_pd: some leading minor <= 0 but PSD status not decided
    NOT_PD = "NotPositiveDefinite"


@dataclass(frozen=True)
class PsdVerdict:
    verdict: Verdict
    minor_index: Optional[tuple[int, ...]] = None
    minor_det: Optional[Fraction] = None
    vector: Optional[tuple[Fraction, ...]] = None
    leading_minors: tuple[Fraction, ...] = field(default=())

    @property
    def is_psd(self) -> bool:
        return self.verdict in (Verdict.POSITIVE_DEFINITE, Verdict.PSD_SINGULAR)

    @property
    def is_pd(self) -> bool:
        return self.verdict is Verdict.POSITIVE_DEFINITE

    @property
    def not_psd(self) -> bool:
        return self.verdict is Verdict.NOT_PSD

    def witness_value(self, m: SymMatrix) -> Optional[Fraction]:
        """Recompute the witness on ``m``; negative for a genuine NotPsd."""
        if self.minor_index is not None:
            return det_exact(m.principal(self.minor_index))
        if self.vector is not None:
            return m.quadratic_form(self.vector)
        return None


def _exact_div(a, b):
    if isinstance(a, Poly):
        return a.divexact(b)
    return a / b


def det_exact(m: SymMatrix) -> Scalar:
    """Determinant by fraction-free (Bareiss) elimination with row pivoting."""
    n = m.order
    a = [list(r) for r in m.entries]
    zero = a[0][0] * 0
    one = zero + 1
    sign = 1
    prev = one
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k] != 0:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return zero
        pivot = a[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = _exact_div(a[i][j] * pivot - a[i][k] * a[k][j], prev)
        prev = pivot
    det = a[n - 1][n - 1]
    return det if sign > 0 else -det


def leading_minors(m: SymMatrix) -> list[Scalar]:
    """det of the k x k leading blocks, k = 1..order.

    One Bareiss pass: the k-th pivot is the k-th leading minor as long as
    no earlier pivot vanishes (identically, for Poly entries).
    """
    n = m.order
    a = [list(r) for r in m.entries]
    out = []
    prev = a[0][0] * 0 + 1
    for k in range(n):
        pivot = a[k][k]
        out.append(pivot)
        if pivot == 0:
            out.extend(det_exact(m.leading(j)) for j in range(k + 2, n + 1))
            return out
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = _exact_div(a[i][j] * pivot - a[i][k] * a[k][j], prev)
        prev = pivot
    return out


def char_poly(m: SymMatrix) -> Poly:
    """det(lambda*I - M) by the Faddeev-LeVerrier recurrence."""
    if m.is_poly:
        raise InvalidArgument("characteristic polynomial needs rational entries")
    n = m.order
    a = [list(r) for r in m.entries]
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    mk = [[Fraction(0)] * n for _ in range(n)]
    for k in range(1, n + 1):
        c_prev = coeffs[n - k + 1]
        # M_k = A M_{k-1} + c_{n-k+1} I
        mk = [
            [sum((a[i][l] * mk[l][j] for l in range(n) if mk[l][j]), Fraction(0)) for j in range(n)]
            for i in range(n)
        ]
        for i in range(n):
            mk[i][i] += c_prev
        trace = sum(
            (a[i][l] * mk[l][i] for i in range(n) for l in range(n) if mk[l][i]), Fraction(0)
        )
        coeffs[n - k] = -trace / k
    return Poly(coeffs)


def elementary_symmetric(m: SymMatrix) -> list[Fraction]:
    """[e_1, ..., e_n] of the eigenvalues, read off the characteristic polynomial."""
    cp = char_poly(m)
    n = m.order
    cs = list(cp.coeffs) + [Fraction(0)] * (n + 1 - len(cp.coeffs))
    return [(-1) ** k * cs[n - k] for k in range(1, n + 1)]


def is_pd(m: SymMatrix) -> PsdVerdict:
    """Sylvester's criterion on exact leading minors."""
    minors = tuple(leading_minors(m))
    for k, d in enumerate(minors):
        if d <= 0:
            return PsdVerdict(
                Verdict.NOT_PD, minor_index=tuple(range(k + 1)), minor_det=d, leading_minors=minors
            )
    return PsdVerdict(Verdict.POSITIVE_DEFINITE, leading_minors=minors)


def is_psd(m: SymMatrix) -> PsdVerdict:
    """PSD test from the signs of the characteristic-polynomial coefficients.

    A NotPsd verdict carries the smallest principal minor with negative
    determinant.
    """
    e = elementary_symmetric(m)
    negative = [k for k, ek in enumerate(e, start=1) if ek < 0]
    if not negative:
        if e[-1] > 0:
            return PsdVerdict(Verdict.POSITIVE_DEFINITE, minor_det=e[-1])
        return PsdVerdict(Verdict.PSD_SINGULAR, minor_det=e[-1])
    limit = negative[0]
    for size in range(1, limit + 1):
        for index in combinations(range(m.order), size):
            d = det_exact(m.principal(index))
            if d < 0:
                return PsdVerdict(Verdict.NOT_PSD, minor_index=index, minor_det=d)
    # e_k is the sum of the k x k principal minors, so this is unreachable
    v = _vector_witness(m)
    if v is None:
        raise InternalError("negative elementary symmetric function without a witness")
    return PsdVerdict(Verdict.NOT_PSD, vector=v, minor_det=m.quadratic_form(v))


def _vector_witness(m: SymMatrix) -> Optional[tuple[Fraction, ...]]:
    a = m.to_float()
    lam, vecs = np.linalg.eigh(a)
    v = vecs[:, 0]
    for denom in (2**10, 2**20, 2**40):
        cand = tuple(Fraction(round(x * denom), denom) for x in v)
        if m.quadratic_form(cand) < 0:
            return cand
    return None


def negative_vector(m: SymMatrix, index: Sequence[int]) -> tuple[Fraction, ...]:
    """A rational vector supported on ``index`` with v^T M v < 0.

    Used to turn a negative principal-minor witness into a direction.
    """
    sub = m.principal(index)
    lam, vecs = np.linalg.eigh(sub.to_float())
    v = vecs[:, 0]
    for denom in (2**8, 2**16, 2**32, 2**52):
        cand = [Fraction(round(x * denom), denom) for x in v]
        if sub.quadratic_form(cand) < 0:
            full = [Fraction(0)] * m.order
            for pos, i in enumerate(index):
                full[i] = cand[pos]
            return tuple(full)
    raise InternalError("could not round a negative direction to rationals")
