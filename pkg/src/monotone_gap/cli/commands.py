"""Subcommand implementations; each returns (report, exit_code)."""

from __future__ import annotations

import math
from fractions import Fraction

from .. import dobsch, loewner, numfalsify, transport
from ..errors import InvalidArgument
from ..exactpoly import Poly
from ..interval import Interval
from ..psdcert import PsdVerdict, det_exact, is_psd
from .report import make_report

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DOMAIN = 3
EXIT_INVALID = 4

PAPER_NOTE_N2 = (
    "alpha_2 = 1 is too large: the exact Loewner matrix of g_2 at nodes 13/20, 17/20 "
    "inside [0, 1) has determinant -71/45000; the true order-2 radius is 1/sqrt(2), "
    "where 1 - 2t^2 vanishes"
)


def _verdict(v: PsdVerdict) -> dict:
    out = {"verdict": v.verdict.value}
    if v.minor_index is not None:
        out["minor_index"] = list(v.minor_index)
    if v.minor_det is not None:
        out["minor_det"] = v.minor_det
    if v.vector is not None:
        out["vector"] = list(v.vector)
    if v.leading_minors:
        out["leading_minors"] = list(v.leading_minors)
    return out


def _constant(p: Poly):
    return p(0) if p.degree <= 0 else p


def _loewner_witness(w: loewner.LoewnerWitness) -> dict:
    return {
        "kind": "witness",
        "function": w.function,
        "nodes": list(w.nodes),
        "verdict": _verdict(w.verdict),
        "minor_det": w.minor_det,
        "verified": w.verify(),
        "evaluated": w.evaluated,
    }


def _exhausted(e) -> dict:
    return {"kind": "exhausted", "budget": e.budget, "evaluated": e.evaluated}


def _alpha_estimate(a: dobsch.AlphaEstimate) -> dict:
    out = {"value": a.value, "tol": a.tol}
    if a.bracket is not None:
        out["bracket"] = [a.bracket.lo, a.bracket.hi]
        out["minor"] = a.minor
    return out


def cmd_certify(args):
    if args.n < 1:
        raise InvalidArgument("--n must be at least 1")
    cert = dobsch.gap_certificate(args.n, args.tol, budget=args.budget, seed=args.seed)
    result = {
        "status": "VALID" if cert.valid else "INVALID",
        "failures": list(cert.failures),
        "hankel_pd": _verdict(cert.hankel_pd),
        "alpha": _alpha_estimate(cert.alpha),
        "alpha_rat": cert.alpha_rat,
        "hypothesis_check": cert.hypothesis_check,
    }
    if cert.trailing_det is not None:
        result["trailing_det"] = _constant(cert.trailing_det)
        result["trailing_block_at_0"] = _verdict(cert.trailing_not_psd)
    if cert.hypothesis_detail:
        d = cert.hypothesis_detail
        result["hypothesis_detail"] = {
            "derivative_order": d["derivative_order"],
            "interval": d["interval"],
            "derivative_nonneg": d["positive"].holds,
            "second_derivative_nonneg": d["convex"].holds,
        }
    if cert.order_n_plus_1 is not None:
        found = cert.order_n_plus_1
        result["order_n_plus_1"] = (
            _exhausted(found) if isinstance(found, loewner.Exhausted) else _loewner_witness(found)
        )
    seed = args.seed if args.n == 1 else None  # only n = 1 runs a search
    report = make_report("certify", {"n": args.n, "tol": args.tol}, result, seed, loewner.GENERATOR)
    return report, EXIT_OK if cert.valid else EXIT_INVALID


def cmd_alpha(args):
    if args.n < 1:
        raise InvalidArgument("--n must be at least 1")
    d_tol = args.tol if args.tol is not None else 1e-8
    l_tol = args.tol if args.tol is not None else 1e-4
    result = {"method": args.method}
    lower = upper = None
    if args.method in ("dobsch", "both"):
        est = dobsch.alpha_dobsch(args.n, d_tol)
        result["dobsch"] = _alpha_estimate(est)
        result["dobsch"]["alpha_rat"] = dobsch.default_alpha_rat(est)
        lower = est.value
    randomized = args.method in ("loewner", "both")
    if randomized:
        bound = loewner.alpha_loewner(args.n, l_tol, args.budget, args.seed)
        result["loewner"] = {
            "value": bound.value,
            "largest_clean": bound.largest_clean,
            "tol": l_tol,
            "budget": args.budget,
            "witness": _loewner_witness(bound.witness) if bound.witness else None,
        }
        upper = bound.value
    if args.n == 2 and randomized:
        w = loewner.canonical_g2_witness()
        canon = _loewner_witness(w)
        canon["upper_bound"] = max(w.nodes)
        result["canonical_witness"] = canon
        upper = min(upper, float(max(w.nodes)))
    if lower is not None and upper is not None:
        result["bracket"] = [lower, upper]
        both_inf = math.isinf(lower) and math.isinf(upper)
        gap = 0.0 if both_inf else abs(upper - lower)
        result["discrepancy"] = bool(gap > 10 * l_tol)
    if args.n == 2:
        result["paper_note"] = PAPER_NOTE_N2
    inputs = {"n": args.n, "method": args.method, "tol": args.tol, "budget": args.budget}
    seed = args.seed if randomized else None
    return make_report("alpha", inputs, result, seed, loewner.GENERATOR), EXIT_OK


def _matrix(a) -> list:
    return [[float(v) for v in row] for row in a]


def _pair_witness(w: numfalsify.PairWitness, interval) -> dict:
    check = w.revalidate(interval)
    return {
        "kind": "witness",
        "x": _matrix(w.x),
        "y": _matrix(w.y),
        "min_eig_order": w.min_eig_order,
        "min_eig_gap": w.min_eig_gap,
        "spectra_x": list(w.spectra_x),
        "spectra_y": list(w.spectra_y),
        "trial_index": w.trial_index,
        "revalidated": {
            "min_eig_order": check.min_eig_order,
            "min_eig_gap": check.min_eig_gap,
            "threshold": check.threshold,
            "violation": check.violation,
        },
    }


def cmd_falsify(args):
    f = args.fn
    dim = args.dim if args.dim is not None else args.order
    if args.order < 1 or dim < 1:
        raise InvalidArgument("--order and --dim must be at least 1")
    if args.trials < 1:
        raise InvalidArgument("--trials must be at least 1")
    found = numfalsify.falsify(f, dim, args.interval, args.trials, args.seed, args.threads)
    if isinstance(found, numfalsify.PairWitness):
        result = _pair_witness(found, args.interval)
    else:
        result = _exhausted(found)
    inputs = {
        "fn": f,
        "order": args.order,
        "dim": dim,
        "interval": args.interval,
        "trials": args.trials,
    }
    return make_report("falsify", inputs, result, args.seed, numfalsify.GENERATOR), EXIT_OK


def cmd_loewner(args):
    f = args.fn
    if args.interval is not None:
        f.check_domain(args.interval)
        for x in args.nodes:
            if x not in args.interval:
                raise InvalidArgument(f"node {x} lies outside {args.interval}")
    m = loewner.loewner_matrix(f, args.nodes).entries
    v = is_psd(m)
    result = {
        "matrix": [list(r) for r in m.entries],
        "det": det_exact(m),
        **_verdict(v),
    }
    inputs = {"fn": f, "nodes": list(args.nodes), "interval": args.interval}
    return make_report("loewner", inputs, result), EXIT_OK


def _transport_alpha(n: int, alpha):
    if alpha is not None:
        return alpha
    est = dobsch.alpha_dobsch(n)
    return dobsch.default_alpha_rat(est) or Fraction(1)


def _transport(args, convex: bool):
    if args.n < 1:
        raise InvalidArgument("--n must be at least 1")
    alpha = _transport_alpha(args.n, args.alpha)
    build = transport.convex_gap_function if convex else transport.gap_function
    f = build(args.n, args.target, alpha)
    pair = transport.interval_bijection(Interval.closed_open(0, alpha), args.target)
    samples = transport.default_samples(args.target, 10)
    result = {
        "expression": f.to_spec(),
        "alpha_rat": alpha,
        "bijection": {"forward": pair.forward, "inverse": pair.inverse, "round_trip": pair.verify()},
        "samples": [{"t": t, "value": f(t)} for t in samples],
    }
    p = f.as_poly()
    if p is not None:
        result["degree"] = p.degree
    name = "convex" if convex else "transport"
    inputs = {"n": args.n, "target": args.target, "alpha": args.alpha}
    return make_report(name, inputs, result), EXIT_OK


def cmd_transport(args):
    return _transport(args, convex=False)


def cmd_convex(args):
    return _transport(args, convex=True)
