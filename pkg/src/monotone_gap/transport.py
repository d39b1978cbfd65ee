"""Moving gap functions to other intervals, and from monotone to convex.

Interval bijections are built only from operator monotone atoms: affine
maps with positive slope, h(t) = t/(1+t) with inverse t/(1-t), and
g(t) = 1/(1-t) with inverse 1 - 1/t.  Composing such atoms is closed in
the Mobius group, so every bijection is stored as a single canonical
Mobius (or Affine) node and stays exactly evaluable.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import InternalError, InvalidArgument, UnsupportedIntervalPair
from .exactpoly import Poly, gn_poly, synthetic_quotient
from .expr import Affine, BendatSherman, Compose, FunctionExpr, Mobius, Mul
from .interval import LEFT_CLOSED_FAMILY, RIGHT_CLOSED_FAMILY, Interval, as_rational

WHOLE_LINE_OBSTRUCTION = (
    "an operator monotone function on the whole real line is affine, so no "
    "bijection with operator monotone inverse reaches or leaves the real line"
)

# 2x2 matrices of the atoms, acting as t -> (a t + b) / (c t + d)
H = ((1, 0), (1, 1))       # t/(1+t): [0, inf) -> [0, 1)
H_INV = ((1, 0), (-1, 1))  # t/(1-t): [0, 1) -> [0, inf)
G = ((0, 1), (-1, 1))      # 1/(1-t): (-inf, 0] -> (0, 1]
G_INV = ((1, -1), (1, 0))  # 1 - 1/t: (0, 1] -> (-inf, 0]
IDENTITY = ((1, 0), (0, 1))


def _mat_mul(m, n):
    return tuple(
        tuple(sum(Fraction(m[i][k]) * n[k][j] for k in range(2)) for j in range(2))
        for i in range(2)
    )


def _affine(c, d):
    return ((Fraction(c), Fraction(d)), (Fraction(0), Fraction(1)))


def _compose(*mats):
    """Matrix of mats[0] o mats[1] o ... (rightmost applied first)."""
    out = IDENTITY
    for m in mats:
        out = _mat_mul(out, m)
    return out


def _to_standard(iv: Interval):
    """Map onto [0,1), [0,inf), (0,1] or (-inf,0]; returns (matrix, standard kind)."""
    kind = iv.kind
    if kind == "closed-open":
        w = iv.hi - iv.lo
        return _affine(1 / w, -iv.lo / w), "unit"
    if kind == "closed-unbounded":
        return _affine(1, -iv.lo), "half-line"
    if kind == "open-closed":
        w = iv.hi - iv.lo
        return _affine(1 / w, -iv.lo / w), "unit"
    if kind == "unbounded-closed":
        return _affine(1, -iv.hi), "half-line"
    raise UnsupportedIntervalPair(f"unsupported interval kind {kind!r} for {iv}")


def _invert(m):
    (a, b), (c, d) = m
    return ((d, -b), (-c, a))


@dataclass(frozen=True)
class BijectionPair:
    forward: FunctionExpr
    inverse: FunctionExpr
    src: Interval
    dst: Interval

    def verify(self, probes: int = 20) -> bool:
        for p in self.src.probe_points(probes):
            if self.inverse(self.forward(p)) != p or self.forward(p) not in self.dst:
                return False
        for q in self.dst.probe_points(probes):
            if self.forward(self.inverse(q)) != q or self.inverse(q) not in self.src:
                return False
        return True


def interval_bijection(src: Interval, dst: Interval) -> BijectionPair:
    """Operator monotone bijection src -> dst with operator monotone inverse."""
    for iv in (src, dst):
        if iv.kind == "line":
            raise UnsupportedIntervalPair(WHOLE_LINE_OBSTRUCTION)
    if src.kind in LEFT_CLOSED_FAMILY and dst.kind in LEFT_CLOSED_FAMILY:
        bridge_up, bridge_down = H_INV, H  # unit -> half-line, half-line -> unit
    elif src.kind in RIGHT_CLOSED_FAMILY and dst.kind in RIGHT_CLOSED_FAMILY:
        bridge_up, bridge_down = G_INV, G
    else:
        raise UnsupportedIntervalPair(
            f"no operator monotone bijection between {src} ({src.kind}) and {dst} ({dst.kind}); "
            "both intervals must be closed on the same side. " + WHOLE_LINE_OBSTRUCTION
        )
    to_std, s_kind = _to_standard(src)
    from_std, d_kind = _to_standard(dst)
    from_std = _invert(from_std)
    if s_kind == d_kind:
        bridge = IDENTITY
    elif s_kind == "unit":
        bridge = bridge_up
    else:
        bridge = bridge_down
    fwd = _compose(from_std, bridge, to_std)
    pair = BijectionPair(Mobius.from_matrix(fwd), Mobius.from_matrix(_invert(fwd)), src, dst)
    if not pair.verify():
        raise InternalError(f"bijection {pair.forward} does not map {src} onto {dst}")
    return pair


def gap_function(n: int, interval: Interval, alpha_rat, *, check_alpha: bool = True) -> FunctionExpr:
    """g_n pulled back to ``interval``: order-n monotone there, nowhere order n+1.

    ``alpha_rat`` must be a rational in (0, alpha_n] where alpha_n is the
    Dobsch radius of g_n; with ``check_alpha`` this is certified exactly.
    """
    alpha_rat = as_rational(alpha_rat)
    if interval.kind not in LEFT_CLOSED_FAMILY:
        raise UnsupportedIntervalPair(
            f"gap functions are built on [a,b) or [a,inf), not {interval} ({interval.kind}): "
            "they are pulled back from [0, alpha), and an operator monotone bijection with "
            "operator monotone inverse preserves the closed end; " + WHOLE_LINE_OBSTRUCTION
        )
    if alpha_rat <= 0:
        raise InvalidArgument("alpha_rat must be positive")
    if check_alpha:
        from .dobsch import alpha_rat_is_certified

        if not alpha_rat_is_certified(n, alpha_rat):
            raise InvalidArgument(f"alpha_rat = {alpha_rat} exceeds the Dobsch radius of g_{n}")
    pair = interval_bijection(Interval.closed_open(0, alpha_rat), interval)
    inner = pair.inverse
    if inner == Affine(1, 0):
        return gn_poly(n)
    return Compose(gn_poly(n), inner)


def bendat_sherman(f: FunctionExpr, t0) -> FunctionExpr:
    """F(t) = (f(t) - f(t0)) / (t - t0), with F(t0) = f'(t0)."""
    t0 = as_rational(t0)
    f(t0)  # DomainError at a pole
    p = f.as_poly()
    if p is not None:
        return synthetic_quotient(p, t0)
    return BendatSherman(f, t0)


def convex_gap_function(n: int, interval: Interval, alpha_rat, *, check_alpha: bool = True) -> FunctionExpr:
    """(t - a) * F(t) with F the gap function on [a, ...): order-n convex, nowhere n+1."""
    monotone = gap_function(n, interval, alpha_rat, check_alpha=check_alpha)
    t0 = interval.lo
    factor = Affine(1, -t0)
    p = monotone.as_poly()
    if p is not None:
        return p * Poly([-t0, 1])
    return Mul(factor, monotone)


def default_samples(interval: Interval, count: int = 10) -> list[Fraction]:
    if interval.bounded:
        return [interval.lo + interval.width * Fraction(k, count) for k in range(count)]
    if interval.kind == "closed-unbounded":
        return [interval.lo + k for k in range(count)]
    if interval.kind == "unbounded-closed":
        return [interval.hi - k for k in range(count)]
    return interval.probe_points(count)
