"""Arbitrary-precision scalar layer.

Everything numerical in this package runs on mpmath reals.  Precision is
never ambient state smuggled across module boundaries: every public
function that computes takes an explicit decimal digit count and wraps
its own work in a local precision context.  This module holds the shared
pieces: the context helper, exact conversions between mpf and Fraction,
a forward-mode dual number carrying energy and parameter tangents, and a
round-half-even significant-digit formatter used for all printed values.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from mpmath import mp, mpf

from .errors import InputError, PrecisionError

#: No computation in this package is meaningful below this many digits.
MIN_PRECISION = 20

_RATIONAL_RE = re.compile(
    r"""^\s*
    (?P<sign>[+-]?)
    (?P<int>\d+)?
    (?:\.(?P<frac>\d*))?
    (?:[eE](?P<exp>[+-]?\d+))?
    (?:/(?P<den>\d+))?
    \s*$""",
    re.VERBOSE,
)


def require_precision(prec: int) -> int:
    """Validate a decimal digit count, returning it unchanged."""
    if not isinstance(prec, int) or prec < MIN_PRECISION:
        raise PrecisionError(
            f"working precision must be an int >= {MIN_PRECISION}, got {prec!r}"
        )
    return prec


def default_precision(dimension: int) -> int:
    """Baseline working precision for a dimension-``D`` determinant.

    Grows linearly with the matrix dimension; empirically generous for the
    small-dimension regime and a sane starting point for the escalation
    loop at large dimension, where cancellation inside the determinant
    eats digits roughly in proportion to the size of the largest series
    coefficients involved.
    """
    return max(40, 4 * dimension + 20)


def parse_rational(text: str) -> Fraction:
    """Parse an exact rational from ``n/d``, integer, or decimal notation.

    Decimals (optionally with an exponent) are read exactly, e.g.
    ``"0.1"`` becomes 1/10, never a binary float.  Anything else raises
    :class:`InputError`.
    """
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int):
        return Fraction(text)
    if not isinstance(text, str):
        raise InputError(f"expected a rational literal, got {type(text).__name__}")
    m = _RATIONAL_RE.match(text)
    if not m or (m.group("int") is None and not m.group("frac")):
        raise InputError(f"not a rational literal: {text!r}")
    if m.group("den") is not None and (m.group("frac") is not None or m.group("exp")):
        raise InputError(f"mixed fraction and decimal notation: {text!r}")
    ipart = m.group("int") or "0"
    fpart = m.group("frac") or ""
    value = Fraction(int(ipart + fpart), 10 ** len(fpart))
    if m.group("exp"):
        e = int(m.group("exp"))
        value *= Fraction(10) ** e
    if m.group("den") is not None:
        den = int(m.group("den"))
        if den == 0:
            raise InputError(f"zero denominator: {text!r}")
        value /= den
    if m.group("sign") == "-":
        value = -value
    return value


def to_mpf(x, prec: int) -> mpf:
    """Convert ``x`` (mpf, Fraction, int, or decimal/rational string) to an
    mpf evaluated at ``prec`` decimal digits."""
    require_precision(prec)
    with mp.workdps(prec):
        if isinstance(x, mpf):
            return +x
        if isinstance(x, int):
            return mpf(x)
        if isinstance(x, str):
            x = parse_rational(x)
        if isinstance(x, Fraction):
            return mpf(x.numerator) / x.denominator
    raise InputError(f"cannot convert {type(x).__name__} to a real")


def to_fraction(x) -> Fraction:
    """Exact rational value of a finite mpf (or int/Fraction passthrough)."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if not isinstance(x, mpf):
        raise InputError(f"cannot convert {type(x).__name__} to Fraction")
    sign, man, exp, _ = x._mpf_
    man = int(man)
    if man == 0:
        if x == 0:
            return Fraction(0)
        raise InputError("cannot convert a non-finite value to Fraction")
    value = Fraction(man) * Fraction(2) ** int(exp)
    return -value if sign else value


def agreement_digits(a, b, scale=None) -> int:
    """Decimal digits to which ``a`` and ``b`` agree, relative to ``scale``
    (default: the larger magnitude of the two).  Exact agreement returns
    the current working precision."""
    a = mpf(a) if not isinstance(a, mpf) else a
    b = mpf(b) if not isinstance(b, mpf) else b
    diff = abs(a - b)
    ref = mpf(scale) if scale is not None else max(abs(a), abs(b))
    if diff == 0:
        return mp.dps
    if ref == 0:
        return 0
    rel = diff / ref
    if rel >= 1:
        return 0
    return int(mp.floor(-mp.log10(rel)))


class DualReal:
    """First-order dual number with two independent tangent slots.

    ``value`` is the point, ``d_energy`` the derivative with respect to
    the trial energy, ``d_param`` the derivative with respect to one
    potential parameter.  Propagating both at once is what lets a single
    determinant evaluation yield dH/dE and dH/dbeta together.  Arithmetic
    runs at the ambient mpmath precision; callers wrap computations in
    ``mp.workdps``.
    """

    __slots__ = ("value", "d_energy", "d_param")

    def __init__(self, value, d_energy=0, d_param=0):
        self.value = self._lift(value)
        self.d_energy = self._lift(d_energy)
        self.d_param = self._lift(d_param)

    @staticmethod
    def _lift(x) -> mpf:
        if isinstance(x, mpf):
            return x
        if isinstance(x, int):
            return mpf(x)
        if isinstance(x, Fraction):
            return mpf(x.numerator) / x.denominator
        raise InputError(f"cannot use {type(x).__name__} in dual arithmetic")

    @classmethod
    def energy(cls, value) -> "DualReal":
        """The trial energy itself: unit energy tangent."""
        return cls(value, 1, 0)

    @classmethod
    def constant(cls, value) -> "DualReal":
        return cls(value, 0, 0)

    def _coerce(self, other):
        if isinstance(other, DualReal):
            return other
        if isinstance(other, (int, Fraction, mpf)):
            return DualReal(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return DualReal(
            self.value + o.value,
            self.d_energy + o.d_energy,
            self.d_param + o.d_param,
        )

    __radd__ = __add__

    def __neg__(self):
        return DualReal(-self.value, -self.d_energy, -self.d_param)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return DualReal(
            self.value * o.value,
            self.d_energy * o.value + self.value * o.d_energy,
            self.d_param * o.value + self.value * o.d_param,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        v = self.value / o.value
        return DualReal(
            v,
            (self.d_energy - v * o.d_energy) / o.value,
            (self.d_param - v * o.d_param) / o.value,
        )

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    @property
    def magnitude(self) -> mpf:
        return abs(self.value)

    def __repr__(self):
        return f"DualReal({self.value!r}, dE={self.d_energy!r}, dP={self.d_param!r})"


@dataclass(frozen=True)
class _Decimal:
    """Sign, digit string, and exponent of a rounded decimal."""

    negative: bool
    digits: str
    exponent: int  # value = 0.digits * 10**(exponent+1), leading digit nonzero


def _round_sig_fraction(q: Fraction, digits: int) -> _Decimal:
    negative = q < 0
    q = -q if negative else q
    n, d = q.numerator, q.denominator
    # Decimal exponent e with 10**e <= q < 10**(e+1).
    e = len(str(n)) - len(str(d))
    while (n >= d * 10 ** (e + 1)) if e + 1 >= 0 else (n * 10 ** (-e - 1) >= d):
        e += 1
    while (n < d * 10**e) if e >= 0 else (n * 10 ** (-e) < d):
        e -= 1
    # Scale so the first `digits` significant digits land in the integer
    # part, then round half to even on the integer quotient.
    shift = digits - 1 - e
    if shift >= 0:
        num, den = n * 10**shift, d
    else:
        num, den = n, d * 10 ** (-shift)
    m, r = divmod(num, den)
    if 2 * r > den or (2 * r == den and m % 2 == 1):
        m += 1
    if m == 10**digits:
        m //= 10
        e += 1
    return _Decimal(negative, str(m).rjust(digits, "0"), e)


def format_significant(x, digits: int) -> str:
    """Decimal string of ``x`` rounded half-to-even to ``digits``
    significant digits, trailing zeros kept.

    Accepts mpf, Fraction, int, or an exact decimal/rational string.  The
    rounding is performed in exact integer arithmetic on the rational
    value of ``x``, so the output never depends on ambient float state.
    """
    if digits < 1:
        raise InputError(f"need at least one significant digit, got {digits}")
    if isinstance(x, str):
        x = parse_rational(x)
    if isinstance(x, mpf):
        x = to_fraction(x)
    if isinstance(x, int):
        x = Fraction(x)
    if not isinstance(x, Fraction):
        raise InputError(f"cannot format {type(x).__name__}")
    if x == 0:
        return "0." + "0" * (digits - 1) if digits > 1 else "0"
    dec = _round_sig_fraction(x, digits)
    s, e = dec.digits, dec.exponent
    if 0 <= e < digits:
        head, tail = s[: e + 1], s[e + 1 :]
        text = head + "." + tail if tail else head
    elif e < 0:
        text = "0." + "0" * (-e - 1) + s
    else:
        text = s + "0" * (e - digits + 1)
    return "-" + text if dec.negative else text
