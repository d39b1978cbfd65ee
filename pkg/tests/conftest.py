import sys
from fractions import Fraction

from hypothesis import settings, strategies as st

from monotone_gap.exactpoly import Poly

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


def rationals(max_num=50, max_den=20, min_value=None, max_value=None):
    s = st.builds(
        Fraction,
        st.integers(-max_num, max_num),
        st.integers(1, max_den),
    )
    if min_value is not None:
        s = s.filter(lambda q: q >= min_value)
    if max_value is not None:
        s = s.filter(lambda q: q <= max_value)
    return s


def polys(max_degree=6, **kw):
    return st.lists(rationals(**kw), min_size=0, max_size=max_degree + 1).map(Poly)


def sym_matrices(max_order=5, **kw):
    @st.composite
    def build(draw):
        n = draw(st.integers(1, max_order))
        upper = {(i, j): draw(rationals(**kw)) for i in range(n) for j in range(i, n)}
        return [[upper[min(i, j), max(i, j)] for j in range(n)] for i in range(n)]

    return build()


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
