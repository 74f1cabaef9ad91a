"""Exact scalar arithmetic.

Weights are nonnegative `fractions.Fraction` values everywhere; no floats enter
any computation. The one extension is a single +infinity point (`INF`) used for
diverging total mass, with the usual semiring rules on the nonnegative extended
rationals: a + INF = INF, a * INF = INF for a > 0, and 0 * INF = 0.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Union

from .errors import InvalidWeight

_WEIGHT_RE = re.compile(r"^(\d+)(?:/(\d+))?$")


class Infinity:
    """The +infinity point. Use the module-level singleton ``INF``."""

    __slots__ = ()

    def __repr__(self) -> str:
        return "INF"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Infinity)

    def __hash__(self) -> int:
        return hash("redip.INF")

    def _check(self, other: object) -> None:
        if isinstance(other, Infinity):
            return
        if isinstance(other, (int, Fraction)):
            if other < 0:
                raise InvalidWeight("arithmetic with INF is defined on nonnegative values only")
            return
        raise TypeError(f"cannot combine INF with {type(other).__name__}")

    def __add__(self, other: object) -> "Infinity":
        self._check(other)
        return self

    __radd__ = __add__

    def __mul__(self, other: object) -> "ExtRational":
        self._check(other)
        if not isinstance(other, Infinity) and other == 0:
            return Fraction(0)
        return self

    __rmul__ = __mul__

    def __lt__(self, other: object) -> bool:
        self._check(other)
        return False

    def __le__(self, other: object) -> bool:
        self._check(other)
        return isinstance(other, Infinity)

    def __gt__(self, other: object) -> bool:
        self._check(other)
        return not isinstance(other, Infinity)

    def __ge__(self, other: object) -> bool:
        self._check(other)
        return True


INF = Infinity()

ExtRational = Union[Fraction, Infinity]


def is_finite(value: ExtRational) -> bool:
    return not isinstance(value, Infinity)


def parse_weight(text: str) -> Fraction:
    """Parse a nonnegative rational from its canonical string form.

    Accepted forms are a decimal-free natural number ("3") or a ratio of two
    naturals ("9/10"). Anything else (signs, floats, whitespace) is rejected.
    """
    if not isinstance(text, str):
        raise InvalidWeight(f"weight must be a string, got {type(text).__name__}")
    m = _WEIGHT_RE.match(text)
    if m is None:
        raise InvalidWeight(f"malformed weight {text!r} (expected 'n' or 'n/d')")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise InvalidWeight(f"zero denominator in weight {text!r}")
    return Fraction(num, den)


def format_weight(value: Fraction) -> str:
    """Inverse of parse_weight: "3" for integers, "9/10" otherwise."""
    if value < 0:
        raise InvalidWeight(f"negative weight {value}")
    return str(value)


def _floor_log10(num: int, den: int) -> int:
    """floor(log10(num/den)) for positive integers, by exact comparison."""
    e = len(str(num)) - len(str(den))
    while not _ge_pow10(num, den, e):
        e -= 1
    while _ge_pow10(num, den, e + 1):
        e += 1
    return e


def _ge_pow10(num: int, den: int, e: int) -> bool:
    if e >= 0:
        return num >= den * 10**e
    return num * 10**-e >= den


def decimal_str(value: Fraction, digits: int = 6) -> str:
    """Render a rational to `digits` significant decimal digits, exactly.

    Rounding is half-even and done in integer arithmetic; no float is involved.
    Trailing zeros after the point are stripped. Very small or large magnitudes
    fall back to scientific notation.
    """
    if digits < 1:
        raise ValueError("digits must be >= 1")
    if value == 0:
        return "0"
    sign = "-" if value < 0 else ""
    num, den = abs(value.numerator), value.denominator
    e = _floor_log10(num, den)
    shift = digits - 1 - e
    if shift >= 0:
        top, bot = num * 10**shift, den
    else:
        top, bot = num, den * 10**-shift
    q, r = divmod(top, bot)
    if 2 * r > bot or (2 * r == bot and q % 2 == 1):
        q += 1
    if q == 10**digits:
        q //= 10
        e += 1
    mantissa = str(q)
    if e < -4 or e > 12:
        frac_part = mantissa[1:].rstrip("0")
        body = mantissa[0] + ("." + frac_part if frac_part else "")
        return f"{sign}{body}e{'+' if e >= 0 else '-'}{abs(e)}"
    if e >= digits - 1:
        return sign + mantissa + "0" * (e - digits + 1)
    if e >= 0:
        int_part = mantissa[: e + 1]
        frac_part = mantissa[e + 1 :].rstrip("0")
        return sign + int_part + ("." + frac_part if frac_part else "")
    body = "0" * (-e - 1) + mantissa
    return f"{sign}0.{body}".rstrip("0")


def format_ext(value: ExtRational) -> str:
    return "inf" if isinstance(value, Infinity) else format_weight(value)
