"""Direct matrix-pair falsifier for order-n monotonicity.

Samples real symmetric x <= y with spectra in an interval, evaluates f(x)
and f(y) through the spectral decomposition, and reports the first pair
with f(y) - f(x) not PSD.  Real symmetric matrices are used throughout;
complex Hermitian pairs are not sampled.

Randomness comes from numpy's PCG64.  Trials are grouped in fixed-size
chunks and chunk ``c`` draws from ``SeedSequence(seed, spawn_key=(c,))``,
so results do not depend on the number of worker threads.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from .errors import ConversionFailed, DomainError, InvalidArgument, SamplingExhausted
from .expr import FunctionExpr
from .interval import Interval
from .loewner import Exhausted, LoewnerWitness

GENERATOR = "PCG64"
CHUNK = 256

ORDER_TOL = 1e-12        # y - x >= -ORDER_TOL
VIOLATION_TOL = 1e-8     # f(y) - f(x) min eigenvalue < -VIOLATION_TOL * (1 + |f(y)|)
REVALIDATION_FACTOR = 10.0
SPECTRUM_TOL = 1e-12


def as_symmetric(a) -> np.ndarray:
    a = np.array(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise InvalidArgument("expected a square matrix")
    if not np.isfinite(a).all():
        raise InvalidArgument("matrix has non-finite entries")
    return 0.5 * (a + a.T)


def sym_eig(m, tol: float = 1e-14, max_sweeps: int = 30) -> tuple[np.ndarray, np.ndarray]:
    """Cyclic Jacobi eigensolver; returns (Q, eigenvalues) with M = Q diag(lam) Q^T."""
    a = as_symmetric(m)
    n = a.shape[0]
    q = np.eye(n)
    norm = np.linalg.norm(a)
    if norm == 0 or n == 1:
        return q, np.diag(a).copy()
    threshold = tol * norm
    for _ in range(max_sweeps):
        off = np.abs(a - np.diag(np.diag(a))).max()
        if off < threshold:
            break
        for p in range(n - 1):
            for r in range(p + 1, n):
                apr = a[p, r]
                if abs(apr) < threshold:
                    continue
                theta = (a[r, r] - a[p, p]) / (2.0 * apr)
                t = math.copysign(1.0, theta) / (abs(theta) + math.hypot(1.0, theta))
                c = 1.0 / math.hypot(1.0, t)
                s = t * c
                rot = np.eye(n)
                rot[p, p] = rot[r, r] = c
                rot[p, r] = s
                rot[r, p] = -s
                a = rot.T @ a @ rot
                a[p, r] = a[r, p] = 0.0
                q = q @ rot
    lam = np.diag(a).copy()
    order = np.argsort(lam)
    return q[:, order], lam[order]


def min_eig(m) -> float:
    return float(sym_eig(m)[1][0])


def matrix_apply(f: FunctionExpr, x, interval: Optional[Interval] = None, tol: float = 1e-9) -> np.ndarray:
    """f(x) = Q diag(f(lam)) Q^T."""
    q, lam = sym_eig(x)
    if interval is not None:
        scale = 1.0 + np.abs(lam).max()
        bad = [v for v in lam if not interval.contains_float(float(v), tol * scale)]
        if bad:
            raise DomainError(f"eigenvalues {bad} lie outside {interval}")
    vals, _ = f.evalf(lam)
    if not np.isfinite(vals).all():
        raise DomainError("function is not finite on the spectrum")
    return (q * vals) @ q.T


def _apply_batch(f: FunctionExpr, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    lam, q = np.linalg.eigh(x)
    vals, _ = f.evalf(lam)
    return np.einsum("bij,bj,bkj->bik", q, vals, q), lam


@dataclass(frozen=True)
class PairWitness:
    x: np.ndarray
    y: np.ndarray
    function: FunctionExpr
    min_eig_order: float
    min_eig_gap: float
    spectra_x: tuple
    spectra_y: tuple
    seed: Optional[int]
    trial_index: Optional[int]

    def revalidate(self, interval: Optional[Interval] = None) -> "PairCheck":
        return validate_pair(self.function, self.x, self.y, interval)


@dataclass(frozen=True)
class PairCheck:
    min_eig_order: float
    min_eig_gap: float
    fy_norm: float
    spectra_x: tuple
    spectra_y: tuple

    @property
    def threshold(self) -> float:
        return VIOLATION_TOL * (1.0 + self.fy_norm)

    @property
    def ordered(self) -> bool:
        return self.min_eig_order >= -ORDER_TOL * (1.0 + max(map(abs, self.spectra_y)))

    @property
    def violation(self) -> bool:
        return self.ordered and self.min_eig_gap < -self.threshold

    @property
    def strong_violation(self) -> bool:
        return self.ordered and self.min_eig_gap < -REVALIDATION_FACTOR * self.threshold


def validate_pair(f: FunctionExpr, x, y, interval: Optional[Interval] = None) -> PairCheck:
    """Recompute every quantity of a candidate pair with the Jacobi solver alone."""
    x, y = as_symmetric(x), as_symmetric(y)
    fx = matrix_apply(f, x, interval)
    fy = matrix_apply(f, y, interval)
    _, lx = sym_eig(x)
    _, ly = sym_eig(y)
    _, lfy = sym_eig(fy)
    return PairCheck(
        min_eig_order=min_eig(y - x),
        min_eig_gap=min_eig(fy - fx),
        fy_norm=float(np.abs(lfy).max()),
        spectra_x=tuple(float(v) for v in lx),
        spectra_y=tuple(float(v) for v in ly),
    )


def _eigen_box(interval: Interval) -> tuple[float, float]:
    """Central 90% of the interval; unbounded sides get a width-10 box."""
    lo, hi = interval.lo, interval.hi
    if isinstance(lo, float) and isinstance(hi, float):
        lo, hi = -5.0, 5.0
    elif isinstance(hi, float):
        lo, hi = float(lo), float(lo) + 10.0
    elif isinstance(lo, float):
        lo, hi = float(hi) - 10.0, float(hi)
    else:
        lo, hi = float(lo), float(hi)
    margin = 0.05 * (hi - lo)
    return lo + margin, hi - margin


def _random_orthogonal(rng, dim: int, batch: int) -> np.ndarray:
    g = rng.standard_normal((batch, dim, dim))
    q, r = np.linalg.qr(g)
    signs = np.sign(np.diagonal(r, axis1=1, axis2=2))
    signs[signs == 0] = 1.0
    return q * signs[:, None, :]


def _sample_batch(interval: Interval, dim: int, rng, batch: int):
    lo, hi = _eigen_box(interval)
    width = hi - lo
    lam = rng.uniform(lo, hi, size=(batch, dim))
    q = _random_orthogonal(rng, dim, batch)
    x = np.einsum("bij,bj,bkj->bik", q, lam, q)
    # rank 1..dim with weights 2^-r, favouring rank-one perturbations
    weights = 0.5 ** np.arange(1, dim + 1)
    ranks = rng.choice(np.arange(1, dim + 1), size=batch, p=weights / weights.sum())
    v = rng.standard_normal((batch, dim, dim))
    v /= np.linalg.norm(v, axis=1, keepdims=True)
    s = rng.uniform(0.0, 0.1 * width, size=(batch, dim)) * rng.uniform(0, 1, size=(batch, 1)) ** 2
    s[np.arange(dim)[None, :] >= ranks[:, None]] = 0.0
    y = x + np.einsum("bij,bj,bkj->bik", v, s, v)
    return 0.5 * (x + x.transpose(0, 2, 1)), 0.5 * (y + y.transpose(0, 2, 1))


def _in_interval(lam: np.ndarray, interval: Interval) -> np.ndarray:
    scale = 1.0 + np.abs(lam)
    tol = SPECTRUM_TOL * scale
    ok = np.ones(lam.shape, dtype=bool)
    if not isinstance(interval.lo, float):
        ok &= lam >= float(interval.lo) - tol
    if not isinstance(interval.hi, float):
        ok &= lam <= float(interval.hi) + tol
    return ok.all(axis=-1)


def sample_ordered_pair(interval: Interval, dim: int, rng, max_rejections: int = 100):
    """One pair x <= y with both spectra inside ``interval``."""
    if dim < 1:
        raise InvalidArgument("dim must be at least 1")
    for _ in range(max_rejections):
        x, y = _sample_batch(interval, dim, rng, 1)
        ly = np.linalg.eigvalsh(y)
        if _in_interval(ly, interval)[0]:
            return x[0], y[0]
    raise SamplingExhausted(f"no admissible pair in {interval} after {max_rejections} draws")


def chunk_rng(seed: int, chunk: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(chunk,))))


def _run_chunk(f, dim, interval, seed, chunk, count):
    """First violating trial index in this chunk, with its matrices, or None."""
    rng = chunk_rng(seed, chunk)
    x, y = _sample_batch(interval, dim, rng, count)
    ly = np.linalg.eigvalsh(y)
    ok = _in_interval(ly, interval)
    # rejected trials are redrawn from the same stream, in trial order
    for _ in range(100):
        bad = np.flatnonzero(~ok)
        if not bad.size:
            break
        xr, yr = _sample_batch(interval, dim, rng, bad.size)
        okr = _in_interval(np.linalg.eigvalsh(yr), interval)
        x[bad], y[bad] = xr, yr
        ok[bad] = okr
    if not ok.all():
        raise SamplingExhausted(f"interval {interval} too small for the perturbation scale")
    with np.errstate(all="ignore"):
        fx, _ = _apply_batch(f, x)
        fy, lfy = _apply_batch(f, y)
        gap = np.linalg.eigvalsh(fy - fx)[:, 0]
        norm = np.abs(np.linalg.eigvalsh(fy)).max(axis=1)
    hits = np.flatnonzero(np.isfinite(gap) & (gap < -VIOLATION_TOL * (1.0 + norm)))
    return [(int(i), x[i], y[i]) for i in hits]


def falsify(
    f: FunctionExpr,
    dim: int,
    interval: Interval,
    trials: int,
    seed: int = 0,
    threads: int = 1,
) -> Union[PairWitness, Exhausted]:
    """Random search for x <= y with f(x) not <= f(y); deterministic in ``seed``."""
    if dim < 1:
        raise InvalidArgument("dim must be at least 1")
    if trials < 1:
        raise InvalidArgument("trials must be at least 1")
    f.check_domain(interval)
    n_chunks = -(-trials // CHUNK)
    sizes = [min(CHUNK, trials - c * CHUNK) for c in range(n_chunks)]
    threads = max(1, int(threads))

    def work(c):
        return c, _run_chunk(f, dim, interval, seed, c, sizes[c])

    pool = ThreadPoolExecutor(threads) if threads > 1 else None
    try:
        for start in range(0, n_chunks, threads):
            wave = range(start, min(start + threads, n_chunks))
            results = list(pool.map(work, wave)) if pool else [work(c) for c in wave]
            for c, hits in sorted(results, key=lambda r: r[0]):
                for i, x, y in hits:
                    check = validate_pair(f, x, y)
                    if check.strong_violation:
                        return PairWitness(
                            x=x,
                            y=y,
                            function=f,
                            min_eig_order=check.min_eig_order,
                            min_eig_gap=check.min_eig_gap,
                            spectra_x=check.spectra_x,
                            spectra_y=check.spectra_y,
                            seed=seed,
                            trial_index=c * CHUNK + i,
                        )
    finally:
        if pool:
            pool.shutdown()
    return Exhausted(trials, seed, trials)


def witness_from_loewner(w: LoewnerWitness, f: Optional[FunctionExpr] = None) -> PairWitness:
    """Turn an exact Loewner failure into a concrete pair x = diag(nodes), y = x + eps u u^T.

    With u the indicator of the failing principal block, the first-order
    change of f(x) along u u^T is the Loewner matrix restricted to that
    block, which is not PSD; a geometric line search picks eps.
    """
    f = f if f is not None else w.function
    if not w.verdict.not_psd:
        raise InvalidArgument("the Loewner witness does not certify a violation")
    nodes = np.array([float(v) for v in w.nodes])
    dim = len(nodes)
    u = np.zeros(dim)
    if w.verdict.minor_index is not None:
        u[list(w.verdict.minor_index)] = 1.0
    else:
        u[:] = [1.0 if v else 0.0 for v in w.verdict.vector]
    x = np.diag(nodes)
    spread = max(float(np.ptp(nodes)), 1e-3 * (1.0 + float(np.abs(nodes).max())))
    for k in range(2, 40):
        eps = spread * 2.0 ** (-k)
        y = x + eps * np.outer(u, u)
        try:
            check = validate_pair(f, x, y)
        except DomainError:
            continue
        if check.strong_violation:
            return PairWitness(
                x=x,
                y=y,
                function=f,
                min_eig_order=check.min_eig_order,
                min_eig_gap=check.min_eig_gap,
                spectra_x=check.spectra_x,
                spectra_y=check.spectra_y,
                seed=None,
                trial_index=None,
            )
    raise ConversionFailed("no step size produced a validated matrix pair")
