"""Thin helpers around :class:`flint.arb` midpoint-radius balls.

Every analytic quantity in the package is an ``arb``.  Arithmetic on ``arb``
is outward rounded, and comparisons return ``True`` only when they hold for
every point of both balls, which is exactly the one-sided semantics the bound
checks need.  Working precision in flint is a process-wide setting, so all
changes go through :func:`workprec`.
"""
from __future__ import annotations

import re
from contextlib import contextmanager
from fractions import Fraction
from typing import Iterator, Union

from flint import arb, ctx

BallReal = arb

DEFAULT_BITS = 128
MAX_BITS = 16384

Number = Union[int, Fraction, str, arb]

_DECIMAL = re.compile(r"^[+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?$")


@contextmanager
def workprec(bits: int) -> Iterator[int]:
    old = ctx.prec
    ctx.prec = int(bits)
    try:
        yield ctx.prec
    finally:
        ctx.prec = old


def ball(x: Number) -> arb:
    """Convert an exact input to a ball at the current precision.

    Decimal strings are parsed by flint, so ``"0.3654"`` becomes a tight
    enclosure of the decimal number rather than of its nearest double.
    Floats are refused on purpose.
    """
    if isinstance(x, arb):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a number here")
    if isinstance(x, int):
        return arb(x)
    if isinstance(x, Fraction):
        return arb(x.numerator) / arb(x.denominator)
    if isinstance(x, str):
        s = x.strip()
        if "/" in s:
            return ball(Fraction(s))
        if not _DECIMAL.match(s):
            raise ValueError(f"not a decimal number: {x!r}")
        return arb(s)
    raise TypeError(f"cannot make a ball from {type(x).__name__}")


def interval(lo: arb, hi: arb) -> arb:
    """Smallest ball (at current precision) containing both balls."""
    return lo.union(hi)


def certainly_le(a: arb, b: arb) -> bool:
    return bool(a <= b)


def certainly_lt(a: arb, b: arb) -> bool:
    return bool(a < b)


def width(x: arb) -> arb:
    return 2 * x.rad()


def const_e() -> arb:
    return arb.const_e()


def log_int(n: int) -> arb:
    """Natural log of a positive integer, fine for integers with 10^5 digits."""
    if n <= 0:
        raise ValueError("log of non-positive integer")
    return arb(n).log()


def fmt(x: arb, digits: int = 20) -> str:
    """Render only the digits the radius certifies, then ``± radius``.

    The output is a pure function of the ball and ``digits``, so it is
    byte-stable across runs.
    """
    s = x.str(digits)
    if s.startswith("["):
        body = s[1:-1]
        if body.startswith("+/-"):
            return "0 ± " + body[3:].strip()
        mid, _, rad = body.partition("+/-")
        return f"{_trim(mid.strip())} ± {rad.strip()}"
    return _trim(s)


def _trim(num: str) -> str:
    """Drop trailing zeros of the mantissa: 3.2500e+5 -> 3.25e+5."""
    mant, e, exp = num.partition("e")
    if "." in mant:
        mant = mant.rstrip("0").rstrip(".")
    return mant + e + exp


def lower_str(x: arb, digits: int = 20) -> str:
    """Decimal string that is a certified lower bound for every point of ``x``."""
    return _endpoint_str(x, digits, lower=True)


def upper_str(x: arb, digits: int = 20) -> str:
    return _endpoint_str(x, digits, lower=False)


def _endpoint_str(x: arb, digits: int, lower: bool) -> str:
    end = x.lower() if lower else x.upper()
    # the endpoint lies in [mid - rad, mid + rad] * 10^exp10
    mid, rad, exp10 = end.mid_rad_10exp(digits)
    val = int(mid) - int(rad) if lower else int(mid) + int(rad)
    return _scaled_int_str(val, int(exp10))


def _scaled_int_str(val: int, exp10: int) -> str:
    if val == 0:
        return "0"
    sign = "-" if val < 0 else ""
    digits = str(abs(val))
    e = exp10 + len(digits) - 1
    lead = digits[0]
    rest = digits[1:].rstrip("0")
    mant = lead + ("." + rest if rest else "")
    return f"{sign}{mant}e{e:+d}"
