"""Real intervals with rational (or infinite) endpoints."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .errors import InvalidArgument, ParseError

Endpoint = Union[Fraction, float]  # float only for +-inf

INF = math.inf

KINDS = (
    "closed-open",       # [a, b)
    "open-closed",       # (a, b]
    "closed-unbounded",  # [a, inf)
    "unbounded-closed",  # (-inf, b]
    # auxiliary kinds, used internally for open neighbourhoods and images
    "open",
    "closed",
    "open-unbounded",
    "unbounded-open",
    "line",
)

LEFT_CLOSED_FAMILY = ("closed-open", "closed-unbounded")
RIGHT_CLOSED_FAMILY = ("open-closed", "unbounded-closed")


def as_rational(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        if not math.isfinite(value):
            raise InvalidArgument(f"not a finite number: {value}")
        return Fraction(value)
    return Fraction(value)


def _endpoint(value) -> Endpoint:
    if isinstance(value, float) and math.isinf(value):
        return value
    if isinstance(value, str) and value.strip().lstrip("+-") in ("inf", "oo"):
        return -INF if value.strip().startswith("-") else INF
    return as_rational(value)


@dataclass(frozen=True)
class Interval:
    lo: Endpoint
    hi: Endpoint
    lo_closed: bool = True
    hi_closed: bool = False

    def __post_init__(self):
        lo, hi = _endpoint(self.lo), _endpoint(self.hi)
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)
        if lo == INF or hi == -INF:
            raise InvalidArgument("interval endpoints out of order")
        if math.isinf(lo):
            object.__setattr__(self, "lo_closed", False)
        if math.isinf(hi):
            object.__setattr__(self, "hi_closed", False)
        if not lo < hi:
            if lo == hi and self.lo_closed and self.hi_closed:
                raise InvalidArgument("degenerate interval [a, a] is not supported")
            raise InvalidArgument(f"empty interval: lo={lo}, hi={hi}")

    # constructors for the four kinds
    @classmethod
    def closed_open(cls, a, b) -> "Interval":
        return cls(a, b, True, False)

    @classmethod
    def open_closed(cls, a, b) -> "Interval":
        return cls(a, b, False, True)

    @classmethod
    def closed_unbounded(cls, a) -> "Interval":
        return cls(a, INF, True, False)

    @classmethod
    def unbounded_closed(cls, b) -> "Interval":
        return cls(-INF, b, False, True)

    @classmethod
    def open(cls, a, b) -> "Interval":
        return cls(a, b, False, False)

    @property
    def kind(self) -> str:
        lo_inf, hi_inf = math.isinf(self.lo), math.isinf(self.hi)
        if lo_inf and hi_inf:
            return "line"
        if hi_inf:
            return "closed-unbounded" if self.lo_closed else "open-unbounded"
        if lo_inf:
            return "unbounded-closed" if self.hi_closed else "unbounded-open"
        return {
            (True, False): "closed-open",
            (False, True): "open-closed",
            (True, True): "closed",
            (False, False): "open",
        }[(self.lo_closed, self.hi_closed)]

    @property
    def bounded(self) -> bool:
        return not (math.isinf(self.lo) or math.isinf(self.hi))

    @property
    def width(self) -> Endpoint:
        return self.hi - self.lo if self.bounded else INF

    def __contains__(self, t) -> bool:
        if self.lo_closed:
            if t < self.lo:
                return False
        elif t <= self.lo:
            return False
        if self.hi_closed:
            return t <= self.hi
        return t < self.hi

    def contains_float(self, t: float, tol: float = 0.0) -> bool:
        return float(self.lo) - tol <= t <= float(self.hi) + tol

    def interior_point(self) -> Fraction:
        """A rational point strictly inside the interval."""
        if self.bounded:
            return (self.lo + self.hi) / 2
        if math.isinf(self.lo) and math.isinf(self.hi):
            return Fraction(0)
        if math.isinf(self.hi):
            return self.lo + 1
        return self.hi - 1

    def probe_points(self, count: int) -> list[Fraction]:
        """`count` distinct rational points of the interval, deterministic."""
        pts = []
        for k in range(count):
            if self.bounded:
                frac = Fraction(k + (0 if self.lo_closed else 1), count + 1)
                pts.append(self.lo + frac * self.width)
            elif math.isinf(self.hi) and not math.isinf(self.lo):
                off = Fraction(k * k + k, 3) + (0 if self.lo_closed else Fraction(1, 7))
                pts.append(self.lo + off)
            elif math.isinf(self.lo) and not math.isinf(self.hi):
                off = Fraction(k * k + k, 3) + (0 if self.hi_closed else Fraction(1, 7))
                pts.append(self.hi - off)
            else:
                pts.append(Fraction(k - count // 2, 3))
        return pts

    def __str__(self) -> str:
        left = "[" if self.lo_closed else "("
        right = "]" if self.hi_closed else ")"
        return f"{left}{_fmt(self.lo)},{_fmt(self.hi)}{right}"


def _fmt(x: Endpoint) -> str:
    if isinstance(x, float):
        return "inf" if x > 0 else "-inf"
    return str(x)


_BRACKETED = re.compile(r"^\s*([\[(])\s*([^,]+?)\s*,\s*([^,]+?)\s*([\])])\s*$")
_BARE = re.compile(r"^\s*([^,\[\]()]+?)\s*,\s*([^,\[\]()]+?)\s*$")


def parse_interval(text: str) -> Interval:
    """Parse ``[lo,hi)``, ``[lo,inf)``, ``(lo,hi]``, ``(-inf,hi]``.

    The bare form ``lo,hi`` (or ``lo,inf``) means ``[lo,hi)``.
    """
    m = _BRACKETED.match(text)
    if m:
        left, lo, hi, right = m.groups()
        lo_closed, hi_closed = left == "[", right == "]"
    else:
        m = _BARE.match(text)
        if not m:
            raise ParseError(f"cannot parse interval {text!r}")
        lo, hi = m.groups()
        lo_closed, hi_closed = True, False
    try:
        lo_v, hi_v = _endpoint(lo), _endpoint(hi)
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad interval endpoint in {text!r}: {exc}") from None
    if isinstance(lo_v, float) and lo_closed or isinstance(hi_v, float) and hi_closed:
        raise ParseError(f"an infinite endpoint cannot be closed: {text!r}")
    return Interval(lo_v, hi_v, lo_closed, hi_closed)
