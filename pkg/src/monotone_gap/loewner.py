"""Loewner matrices and exact counterexamples to order-k monotonicity.

A Loewner matrix ``[f(x_i) - f(x_j)] / (x_i - x_j)`` (``f'(x_i)`` on repeated
nodes) that is not PSD disproves order-k monotonicity on every interval
holding the k nodes.  Floating point is used only to rank candidate node
tuples; every reported witness is re-derived in exact rational arithmetic.
A search that finds nothing returns :class:`Exhausted`, which is never a
claim of monotonicity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Optional, Sequence, Union

import numpy as np

from .errors import DomainError, InvalidArgument
from .exactpoly import gn_poly
from .expr import FunctionExpr
from .interval import Interval, as_rational
from .psdcert import PsdVerdict, SymMatrix, det_exact, is_psd

GENERATOR = "PCG64"


@dataclass(frozen=True)
class LoewnerMatrix:
    nodes: tuple[Fraction, ...]
    entries: SymMatrix


def loewner_matrix(f: FunctionExpr, nodes: Sequence) -> LoewnerMatrix:
    nodes = tuple(as_rational(x) for x in nodes)
    if not nodes:
        raise InvalidArgument("a Loewner matrix needs at least one node")
    values = [f(x) for x in nodes]
    slopes = {}
    rows = []
    for i, xi in enumerate(nodes):
        row = []
        for j, xj in enumerate(nodes):
            if j < i:
                row.append(rows[j][i])
            elif xi == xj:
                if xi not in slopes:
                    slopes[xi] = f.taylor(xi, 1)[1]
                row.append(slopes[xi])
            else:
                row.append((values[i] - values[j]) / (xi - xj))
        rows.append(row)
    return LoewnerMatrix(nodes, SymMatrix(rows, check=False))


def order_test(f: FunctionExpr, nodes: Sequence) -> PsdVerdict:
    """Exact PSD verdict on the Loewner matrix; NotPsd disproves order len(nodes)."""
    return is_psd(loewner_matrix(f, nodes).entries)


@dataclass(frozen=True)
class LoewnerWitness:
    function: FunctionExpr
    nodes: tuple[Fraction, ...]
    verdict: PsdVerdict
    evaluated: int = 0  # tuples examined before this one was found

    @property
    def minor_det(self) -> Fraction:
        return self.verdict.minor_det

    def verify(self) -> bool:
        """Rebuild the matrix, rerun the PSD test and recompute the negative minor."""
        m = loewner_matrix(self.function, self.nodes).entries
        again = is_psd(m)
        if not again.not_psd:
            return False
        value = self.verdict.witness_value(m)
        return value is not None and value < 0 and value == self.verdict.minor_det


@dataclass(frozen=True)
class Exhausted:
    """Search budget spent without a counterexample (inconclusive)."""

    budget: int
    seed: int
    evaluated: int


class _UnitMap:
    """Rational bijection from [0, 1) (or [0, 1]) onto the interval."""

    def __init__(self, interval: Interval):
        self.interval = interval
        self.lo_inf = isinstance(interval.lo, float)
        self.hi_inf = isinstance(interval.hi, float)

    def point(self, u: Fraction) -> Fraction:
        iv = self.interval
        if not self.lo_inf and not self.hi_inf:
            return iv.lo + u * (iv.hi - iv.lo)
        if self.lo_inf and self.hi_inf:
            return (2 * u - 1) / (u * (1 - u)) if 0 < u < 1 else Fraction(0)
        stretch = u / (1 - u)
        return iv.lo + stretch if self.hi_inf else iv.hi - stretch

    def points_f(self, u: np.ndarray) -> np.ndarray:
        iv = self.interval
        if not self.lo_inf and not self.hi_inf:
            return float(iv.lo) + u * float(iv.hi - iv.lo)
        if self.lo_inf and self.hi_inf:
            return (2 * u - 1) / (u * (1 - u))
        stretch = u / (1 - u)
        return float(iv.lo) + stretch if self.hi_inf else float(iv.hi) - stretch


def _loewner_batch(f: FunctionExpr, nodes: np.ndarray) -> np.ndarray:
    """Float Loewner matrices for a (batch, k) array of nodes."""
    vals, ders = f.evalf(nodes)
    diff = nodes[:, :, None] - nodes[:, None, :]
    scale = 1.0 + np.abs(nodes[:, :, None]) + np.abs(nodes[:, None, :])
    close = np.abs(diff) <= 1e-9 * scale
    safe = np.where(close, 1.0, diff)
    dd = (vals[:, :, None] - vals[:, None, :]) / safe
    slope = 0.5 * (ders[:, :, None] + ders[:, None, :])
    return np.where(close, slope, dd)


def _scores(mats: np.ndarray) -> np.ndarray:
    """Smallest eigenvalue relative to the largest entry; NaN-safe."""
    finite = np.isfinite(mats).all(axis=(1, 2))
    mats = np.where(finite[:, None, None], mats, 0.0)
    lam = np.linalg.eigvalsh(mats)[:, 0]
    norm = np.abs(mats).max(axis=(1, 2))
    out = lam / np.where(norm > 0, norm, 1.0)
    return np.where(finite, out, np.inf)


class _Search:
    SPACINGS = (3, 6, 10, 16, 24, 34, 46)
    BATCH = 4096
    EXACT_PER_BATCH = 4
    FLOAT_THRESHOLD = -1e-12

    def __init__(self, f, order, interval, budget, seed):
        self.f = f
        self.order = order
        self.interval = interval
        self.budget = budget
        self.seed = seed
        self.used = 0
        self.umap = _UnitMap(interval)
        self.rng = np.random.Generator(np.random.PCG64(seed))
        self.best = None  # (score, nodes) from float screening

    # exact stage -----------------------------------------------------------
    def exact(self, nodes) -> Optional[LoewnerWitness]:
        if self.used >= self.budget:
            return None
        self.used += 1
        nodes = tuple(sorted(as_rational(x) for x in nodes))
        if any(x not in self.interval for x in nodes):
            return None
        try:
            verdict = order_test(self.f, nodes)
        except (DomainError, ZeroDivisionError):
            return None
        if verdict.not_psd:
            return LoewnerWitness(self.f, nodes, verdict, self.used)
        return None

    # clustered probes: near-coincident nodes see the Dobsch matrix ---------
    def clustered(self) -> Iterator[tuple[Fraction, ...]]:
        iv = self.interval
        k = self.order
        width = iv.width if iv.bounded else Fraction(1)
        anchors = []
        if not isinstance(iv.hi, float):
            start = iv.hi if iv.hi_closed else None
            anchors.append(("right", iv.hi, start))
        if not isinstance(iv.lo, float):
            anchors.append(("left", iv.lo, iv.lo if iv.lo_closed else None))
        for m in range(1, 5):
            for odd in range(1, 2**m, 2):
                anchors.append(("mid", self.umap.point(Fraction(odd, 2**m)), None))
        for side, a, _ in anchors:
            for s in self.SPACINGS:
                h = width / 2**s
                if side == "right":
                    offs = range(0 if iv.hi_closed else 1, k + (0 if iv.hi_closed else 1))
                    yield tuple(a - j * h for j in offs)
                elif side == "left":
                    offs = range(0 if iv.lo_closed else 1, k + (0 if iv.lo_closed else 1))
                    yield tuple(a + j * h for j in offs)
                else:
                    yield tuple(a + j * h for j in range(k))

    # float-screened dyadic sweep -------------------------------------------
    def sweep_batch(self, level: int, size: int):
        grid = 2**level
        idx = np.sort(self.rng.integers(1, grid, size=(size, self.order)), axis=1)
        u = idx / grid
        pts = self.umap.points_f(u)
        scores = _scores(_loewner_batch(self.f, pts))
        return idx, grid, scores

    def screen(self, idx, grid, scores) -> Optional[LoewnerWitness]:
        order = np.argsort(scores, kind="stable")
        top = order[0]
        if self.best is None or scores[top] < self.best[0]:
            self.best = (float(scores[top]), tuple(self.umap.point(Fraction(int(j), grid)) for j in idx[top]))
        for pos in order[: self.EXACT_PER_BATCH]:
            if not scores[pos] < self.FLOAT_THRESHOLD:
                break
            nodes = tuple(self.umap.point(Fraction(int(j), grid)) for j in idx[pos])
            found = self.exact(nodes)
            if found:
                return found
        return None

    # coordinate-wise perturbation around the best float candidate ----------
    def perturb(self) -> Optional[LoewnerWitness]:
        if self.best is None:
            return None
        score, nodes = self.best
        nodes = list(nodes)
        width = self.interval.width if self.interval.bounded else Fraction(1)
        step = width / 8
        ratio = Fraction(34, 55)  # golden-ratio-like contraction
        while self.used < self.budget and step > width / 2**60:
            improved = False
            cands = []
            for i in range(self.order):
                for sgn in (1, -1):
                    trial = list(nodes)
                    trial[i] = trial[i] + sgn * step
                    if trial[i] in self.interval:
                        cands.append(tuple(sorted(trial)))
            if not cands:
                step *= ratio
                continue
            remaining = self.budget - self.used
            cands = cands[:remaining]
            pts = np.array([[float(x) for x in c] for c in cands])
            sc = _scores(_loewner_batch(self.f, pts))
            self.used += len(cands)
            j = int(np.argmin(sc))
            if sc[j] < score:
                score, nodes, improved = float(sc[j]), list(cands[j]), True
                if score < self.FLOAT_THRESHOLD:
                    found = self.exact(nodes)
                    if found:
                        return found
            if not improved:
                step *= ratio
        return None

    def run(self, proposals: Iterable = ()) -> Union[LoewnerWitness, Exhausted]:
        for nodes in proposals:
            found = self.exact(nodes)
            if found:
                return found
        clustered_cap = max(1, self.budget // 2)
        for nodes in self.clustered():
            if self.used >= clustered_cap:
                break
            found = self.exact(nodes)
            if found:
                return found
        level = 3
        while self.used < self.budget - max(1, self.budget // 10):
            size = min(self.BATCH, self.budget - self.used)
            idx, grid, scores = self.sweep_batch(level, size)
            self.used += size
            found = self.screen(idx, grid, scores)
            if found:
                return found
            level = level + 1 if level < 30 else 3
        found = self.perturb()
        if found:
            return found
        return Exhausted(self.budget, self.seed, self.used)


def find_violation(
    f: FunctionExpr,
    order: int,
    interval: Interval,
    budget: int,
    seed: int = 0,
    proposals: Iterable = (),
) -> Union[LoewnerWitness, Exhausted]:
    """Search node tuples of size ``order`` in ``interval`` for a non-PSD Loewner matrix.

    Deterministic in (f, order, interval, budget, seed).  Candidate tuples in
    ``proposals`` are checked exactly before the search starts.
    """
    if not isinstance(order, int) or order < 1:
        raise InvalidArgument("order must be a positive integer")
    if budget < 1:
        raise InvalidArgument("budget must be at least 1")
    if interval is None:
        raise InvalidArgument("empty interval")
    f.check_domain(interval)
    return _Search(f, order, interval, budget, seed).run(proposals)


@dataclass(frozen=True)
class LoewnerBound:
    """Upper bound on the order-n radius of g_n from an exact violation."""

    n: int
    value: float  # math.inf if no violation was found anywhere
    witness: Optional[LoewnerWitness]
    largest_clean: float  # largest radius searched without finding a violation
    tol: float
    budget: int
    seed: int


def alpha_loewner(n: int, tol: float = 1e-4, budget: int = 10**5, seed: int = 0) -> LoewnerBound:
    """Smallest c (to ``tol``) such that a violation is found on [0, c)."""
    if not isinstance(n, int) or n < 1:
        raise InvalidArgument("order must be a positive integer")
    if not tol > 0:
        raise InvalidArgument("tol must be positive")
    if n == 1:
        return LoewnerBound(1, math.inf, None, math.inf, tol, budget, seed)
    f = gn_poly(n)

    def probe(c: Fraction):
        return find_violation(f, n, Interval.closed_open(0, c), budget, seed)

    hi = Fraction(1)
    found = probe(hi)
    while isinstance(found, Exhausted):
        if hi >= 2**10:
            return LoewnerBound(n, math.inf, None, float(hi), tol, budget, seed)
        hi *= 2
        found = probe(hi)
    lo = Fraction(0)
    witness = found
    step = Fraction(tol)
    while hi - lo > step:
        mid = (lo + hi) / 2
        found = probe(mid)
        if isinstance(found, Exhausted):
            lo = mid
        else:
            hi, witness = mid, found
    return LoewnerBound(n, float(hi), witness, float(lo), tol, budget, seed)


# the classic order-2 counterexample for g_2 inside [0, 1)
CANONICAL_G2_NODES = (Fraction(13, 20), Fraction(17, 20))


def canonical_g2_witness() -> LoewnerWitness:
    verdict = order_test(gn_poly(2), CANONICAL_G2_NODES)
    return LoewnerWitness(gn_poly(2), CANONICAL_G2_NODES, verdict)


def hadamard_composition(f: FunctionExpr, h: FunctionExpr, nodes: Sequence) -> SymMatrix:
    """L(f, h(nodes)) o L(h, nodes): equals L(f o h, nodes) by the chain rule."""
    nodes = [as_rational(x) for x in nodes]
    outer = loewner_matrix(f, [h(x) for x in nodes]).entries
    inner = loewner_matrix(h, nodes).entries
    return outer.hadamard(inner)


def minor_determinant(f: FunctionExpr, nodes: Sequence, index: Sequence[int]) -> Fraction:
    return det_exact(loewner_matrix(f, nodes).entries.principal(index))
