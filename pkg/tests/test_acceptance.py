"""Acceptance criteria, one test each, at their stated tolerances.

Each test prints a single ``[PASS]`` / ``[FAIL]`` line; the lines are also
repeated in the pytest terminal summary.  Run this file directly
(``python3 tests/test_acceptance.py``) for the summary alone.
"""

from __future__ import annotations

import json
import math
import random
import sys
import time
from fractions import Fraction as F

import numpy as np

from monotone_gap.cli import run
from monotone_gap.cli.parser import parse_function
from monotone_gap.dobsch import (
    _leading_minor_polys,
    alpha_dobsch,
    default_alpha_rat,
    dobsch_matrix,
    trailing_block_det,
)
from monotone_gap.exactpoly import Poly, gn_poly, poly_nonneg_on
from monotone_gap.expr import Affine, Compose, Mobius
from monotone_gap.interval import Interval
from monotone_gap.loewner import (
    LoewnerWitness,
    alpha_loewner,
    find_violation,
    hadamard_composition,
    loewner_matrix,
)
from monotone_gap.numfalsify import Exhausted, falsify, min_eig, validate_pair
from monotone_gap.psdcert import is_pd
from monotone_gap.transport import bendat_sherman, gap_function, interval_bijection

RESULTS: list[str] = []


def record(number: int, title: str, ok: bool, detail: str, seconds: float) -> None:
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number:>2}: {title} ({detail}; {seconds:.2f} s)"
    RESULTS.append(line)
    print(line)
    assert ok, line


def cli(argv):
    text, code, err = run(argv, {})
    return text, (json.loads(text) if text else None), code


def frac(d) -> F:
    return F(int(d["num"]), int(d["den"]))


def test_criterion_01_hankel_pd():
    start = time.perf_counter()
    ok, minors3 = True, None
    for n in range(1, 9):
        _, rep, _ = cli(["certify", "--n", str(n)])
        hankel = rep["result"]["hankel_pd"]
        minors = [frac(m) for m in hankel["leading_minors"]]
        ok &= hankel["verdict"] == "PositiveDefinite" and len(minors) == n and all(m > 0 for m in minors)
        if n == 3:
            minors3 = minors
    elapsed = time.perf_counter() - start
    ok &= minors3 == [1, F(1, 3), F(4, 135)] and elapsed < 1.0
    record(1, "M_n(g_n;0) positive definite, n=1..8", ok, f"n=3 minors {[str(m) for m in minors3]}", elapsed)


def test_criterion_02_trailing_det():
    start = time.perf_counter()
    dets = {n: trailing_block_det(n) for n in range(2, 9)}
    elapsed = time.perf_counter() - start
    ok = all(d.degree == 0 and d.coeffs[0] == F(-1, (2 * n - 1) ** 3) for n, d in dets.items())
    ok &= elapsed < 1.0
    shown = ", ".join(str(d.coeffs[0]) for d in dets.values())
    record(2, "trailing 3x3 determinant is -(2n-1)^-3, n=2..8", ok, shown, elapsed)


def test_criterion_03_hypothesis():
    start = time.perf_counter()
    ok = True
    for n in range(2, 9):
        alpha_rat = default_alpha_rat(alpha_dobsch(n))
        iv = Interval.open(0, alpha_rat)
        p = gn_poly(n).derivative(2 * n - 3)
        ok &= poly_nonneg_on(p, iv).holds and poly_nonneg_on(p.derivative(2), iv).holds
    record(3, "g_n^(2n-3) and its second derivative nonneg on (0, alpha_rat)", ok, "n=2..8",
           time.perf_counter() - start)


def test_criterion_04_radius_n2():
    start = time.perf_counter()
    _, rep, code = cli(["alpha", "--n", "2", "--method", "both"])
    elapsed = time.perf_counter() - start
    res = rep["result"]
    lower = res["dobsch"]["value"]
    canon = res["canonical_witness"]
    nodes = [frac(x) for x in canon["nodes"]]
    # independent recomputation of the 2x2 Loewner determinant
    g = gn_poly(2)
    x, y = nodes
    dd = (g(y) - g(x)) / (y - x)
    det = g.derivative()(x) * g.derivative()(y) - dd * dd
    upper = min(res["bracket"][1], float(frac(canon["upper_bound"])))
    ok = code == 0
    ok &= abs(lower - 0.70710678) <= 1e-7 and abs(lower - 1 / math.sqrt(2)) <= 1e-7
    ok &= nodes == [F(13, 20), F(17, 20)] and det == F(-71, 45000) == frac(canon["minor_det"])
    ok &= upper <= 0.85 and canon["verified"]
    ok &= "paper_note" in res and "alpha_2 = 1" in res["paper_note"]
    ok &= elapsed < 5.0
    record(4, "radius bracket for g_2", ok, f"lower {lower:.9f}, upper {upper:.6f}, det {det}", elapsed)


def test_criterion_05_radius_n3_n4():
    start = time.perf_counter()
    ok = True
    shown = []
    for n in (3, 4):
        low = alpha_dobsch(n, 1e-4)
        up = alpha_loewner(n, 1e-4, 10**5, 0)
        ok &= low.value <= up.value + 2e-4
        ok &= up.witness is not None and up.witness.verify()
        ok &= max(up.witness.nodes) <= F(up.value)
        minors = _leading_minor_polys(gn_poly(n), n)
        below = [low.bracket.lo * F(k, 8) for k in range(8)] + [low.bracket.lo - F(1, 10**4)]
        ok &= all(m(t) > 0 for t in below for m in minors)
        for t in (low.bracket.hi + F(1, 10**4), low.bracket.hi + F(1, 10**3)):
            ok &= any(m(t) < 0 for m in minors)
        shown.append(f"n={n} [{low.value:.6f}, {up.value:.6f}]")
    elapsed = time.perf_counter() - start
    ok &= elapsed < 300
    record(5, "radius brackets for g_3, g_4", ok, "; ".join(shown), elapsed)


def test_criterion_06_falsifier_soundness():
    start = time.perf_counter()
    _, rep, code = cli(["falsify", "--fn", "pow(2)", "--order", "2", "--interval", "0,inf",
                        "--trials", "10000", "--seed", "1"])
    res = rep["result"]
    ok = code == 0 and res["kind"] == "witness"
    x, y = np.array(res["x"]), np.array(res["y"])
    f = parse_function("pow(2)")
    # re-validation from the stored matrices: Jacobi route and direct matrix products
    check = validate_pair(f, x, y)
    direct_gap = float(np.linalg.eigvalsh(y @ y - x @ x)[0])
    ok &= check.min_eig_order >= -1e-12 and check.min_eig_gap <= -1e-8
    ok &= min_eig(y - x) >= -1e-12 and direct_gap <= -1e-8
    canon = validate_pair(f, [[1, 1], [1, 1]], [[2, 1], [1, 1]])
    ok &= abs(canon.min_eig_gap - (3 - math.sqrt(13)) / 2) <= 1e-10
    elapsed = time.perf_counter() - start
    ok &= elapsed < 10
    record(6, "falsifier soundness", ok,
           f"trial {res.get('trial_index')}, gap {check.min_eig_gap:.3e}, canonical {canon.min_eig_gap:.12f}", elapsed)


def test_criterion_07_no_false_positive():
    start = time.perf_counter()
    h = Mobius(1, 0, 1, 1)
    family = [
        Affine(1, 0),
        Affine(F(3, 2), 0),
        h,
        Compose(h, Affine(F(3, 2), 0)),
        Compose(Affine(F(3, 2), 0), h),
        Compose(h, h),
    ]
    iv = Interval.closed_unbounded(0)
    ok = True
    for f in family:
        for dim in range(2, 6):
            ok &= isinstance(falsify(f, dim, iv, 10**4, 0), Exhausted)
    elapsed = time.perf_counter() - start
    ok &= elapsed < 120
    record(7, "no false positives on operator monotone functions", ok,
           f"{len(family)} functions x dims 2..5 x 1e4 trials", elapsed)


def test_criterion_08_cross_oracle():
    start = time.perf_counter()
    rng = random.Random(8)
    ok = True
    for n in (2, 3):
        top = F(alpha_dobsch(n).bracket.lo) - F(1, 1000)
        m = dobsch_matrix(gn_poly(n), n)
        for _ in range(100):
            t = top * F(rng.randrange(0, 10**6 + 1), 10**6)
            ok &= is_pd(m.at(t)).is_pd
    for _ in range(50):
        n = rng.choice((2, 3))
        while True:
            a, b, c, d = (rng.randint(-9, 9) for _ in range(4))
            if a * d - b * c > 0 and c >= 0:
                break
        h = Mobius(a, b, c, d)
        nodes = []
        while len(nodes) < rng.randint(1, 4):
            x = F(rng.randint(0, 40), rng.randint(1, 10))
            if h.pole is None or x != h.pole:
                nodes.append(x)
        lhs = loewner_matrix(Compose(gn_poly(n), h), nodes).entries
        ok &= lhs == hadamard_composition(gn_poly(n), h, nodes)
    elapsed = time.perf_counter() - start
    ok &= elapsed < 60
    record(8, "Dobsch PD below the radius and Loewner composition law", ok,
           "200 PD checks, 50 Hadamard identities", elapsed)


def test_criterion_09_transport():
    start = time.perf_counter()
    ok = True
    pairs = [
        (Interval.closed_open(0, F(7, 10)), Interval.closed_unbounded(0)),
        (Interval.closed_open(0, 1), Interval.closed_open(F(-3, 2), 4)),
        (Interval.closed_unbounded(2), Interval.closed_open(0, 1)),
        (Interval.closed_unbounded(-1), Interval.closed_unbounded(F(5, 3))),
        (Interval.open_closed(0, 1), Interval.unbounded_closed(0)),
        (Interval.unbounded_closed(0), Interval.open_closed(0, 1)),
        (Interval.open_closed(-2, 3), Interval.open_closed(F(1, 7), 1)),
        (Interval.unbounded_closed(4), Interval.unbounded_closed(-4)),
    ]
    kinds = set()
    for src, dst in pairs:
        p = interval_bijection(src, dst)
        kinds |= {src.kind, dst.kind}
        for q in src.probe_points(50):
            ok &= p.inverse(p.forward(q)) == q and p.forward(q) in dst
        for q in dst.probe_points(50):
            ok &= p.forward(p.inverse(q)) == q and p.inverse(q) in src
    ok &= kinds == {"closed-open", "closed-unbounded", "open-closed", "unbounded-closed"}
    _, rep, code = cli(["transport", "--n", "2", "--target", "[0,inf)", "--alpha", "7/10"])
    at_one = [frac(s["value"]) for s in rep["result"]["samples"] if frac(s["t"]) == 1]
    ok &= code == 0 and at_one == [F(8743, 24000)]
    f = gap_function(2, Interval.closed_unbounded(0), F(7, 10))
    ok &= f(1) == F(8743, 24000)
    w = find_violation(f, 3, Interval.closed_unbounded(0), 10**5, 0)
    ok &= isinstance(w, LoewnerWitness) and w.verify()
    elapsed = time.perf_counter() - start
    ok &= elapsed < 120
    record(9, "transport round trips and transported gap function", ok,
           f"f_2(1) = {at_one[0] if at_one else None}, order-3 witness at {[str(x) for x in w.nodes]}", elapsed)


def test_criterion_10_bendat_sherman():
    start = time.perf_counter()
    ok = bendat_sherman(Poly([0, 0, 0, 1]), 1) == Poly([1, 1, 1])
    rng = random.Random(10)
    for _ in range(50):
        n = rng.randint(1, 5)
        f = gn_poly(n)
        t0 = F(rng.randint(-20, 20), rng.randint(1, 9))
        t = t0
        while t == t0:
            t = F(rng.randint(-50, 50), rng.randint(1, 9))
        b = bendat_sherman(f, t0)
        ok &= b(t) * (t - t0) + f(t0) == f(t)
    elapsed = time.perf_counter() - start
    ok &= elapsed < 1.0
    record(10, "Bendat-Sherman transform", ok, "t^3 at 1 gives t^2+t+1; 50 exact identities", elapsed)


def test_criterion_11_determinism():
    start = time.perf_counter()
    commands = [
        ["falsify", "--fn", "pow(2)", "--order", "2", "--interval", "0,inf", "--trials", "10000", "--seed", "1"],
        ["falsify", "--fn", "g(2)", "--order", "3", "--interval", "0,3/2", "--trials", "20000", "--seed", "3",
         "--threads", "2"],
        ["falsify", "--fn", "mobius(1,0,1,1)", "--order", "3", "--trials", "3000", "--seed", "2"],
        ["alpha", "--n", "2", "--method", "both", "--seed", "4"],
        ["alpha", "--n", "3", "--method", "loewner", "--budget", "5000", "--seed", "9"],
        ["certify", "--n", "1", "--seed", "6"],
    ]
    ok = True
    for argv in commands:
        first, second = run(argv, {})[0], run(argv, {})[0]
        ok &= first is not None and first == second
    elapsed = time.perf_counter() - start
    record(11, "byte-identical reports for repeated seeded runs", ok, f"{len(commands)} commands", elapsed)


if __name__ == "__main__":
    failures = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                failures += 1
    sys.exit(1 if failures else 0)
