"""Exact dense polynomials over the rationals.

The symbolic side of this package works in Q[E] and Q[param][E]: small
determinants expanded exactly so their factor structure can be inspected.
A :class:`Poly` stores ascending coefficients that are either Fraction or
(for the bivariate case) nested Poly in the parameter.  Arithmetic is
exact; nothing here touches floating point.

Kept deliberately minimal: just what fraction-free elimination and the
closed-form checks need (ring operations, exact division, derivatives,
evaluation, a display formatter).  For anything heavier use a CAS.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import InputError

NEG_INF = float("-inf")


def _is_zero_coeff(c) -> bool:
    if isinstance(c, Poly):
        return c.is_zero
    return c == 0


def _wrap(c):
    if isinstance(c, Poly):
        return c
    if isinstance(c, int):
        return Fraction(c)
    if isinstance(c, Fraction):
        return c
    raise InputError(f"bad polynomial coefficient of type {type(c).__name__}")


class Poly:
    """Dense univariate polynomial, coefficients ascending by degree.

    Coefficients are Fractions, or Polys in a second variable; the two
    kinds are not mixed within one polynomial.  Instances are immutable.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        cs = [_wrap(c) for c in coeffs]
        while cs and _is_zero_coeff(cs[-1]):
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    # -- structure ----------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self):
        """Degree as an int, or -inf for the zero polynomial."""
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    @property
    def leading_coefficient(self):
        if not self.coeffs:
            return Fraction(0)
        return self.coeffs[-1]

    def coefficient(self, k: int):
        """Coefficient of degree ``k`` (zero beyond the stored length)."""
        if k < 0:
            raise InputError(f"negative degree {k}")
        if k >= len(self.coeffs):
            return Fraction(0)
        return self.coeffs[k]

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly([other])
        if not isinstance(other, Poly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __bool__(self):
        return not self.is_zero

    # -- ring operations ----------------------------------------------

    def _scalar(self, other):
        if isinstance(other, (int, Fraction)):
            return Poly([other])
        return None

    def __add__(self, other):
        o = self._scalar(other)
        if o is None:
            o = other
        if not isinstance(o, Poly):
            return NotImplemented
        a, b = self.coeffs, o.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return Poly(out)

    __radd__ = __add__

    def __neg__(self):
        return Poly([-c for c in self.coeffs])

    def __sub__(self, other):
        o = self._scalar(other)
        if o is None:
            o = other
        if not isinstance(o, Poly):
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._scalar(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Poly([c * other for c in self.coeffs])
        if not isinstance(other, Poly):
            return NotImplemented
        if self.is_zero or other.is_zero:
            return Poly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if _is_zero_coeff(a):
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return Poly(out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        """Division by an exact scalar only; use exact_div for polynomials."""
        if isinstance(other, int):
            other = Fraction(other)
        if isinstance(other, Fraction):
            if other == 0:
                raise ZeroDivisionError("polynomial divided by zero scalar")
            return self * (1 / other)
        return NotImplemented

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise InputError(f"polynomial power must be a nonnegative int, got {n!r}")
        result = Poly([1])
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- division and calculus ------------------------------------------

    def divmod_exact(self, other: "Poly"):
        """Long division ``self = q*other + r`` with exact coefficient
        arithmetic; coefficient divisions that do not come out exact raise
        ValueError (nested-Poly leading coefficients must divide exactly).
        """
        if not isinstance(other, Poly) or other.is_zero:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dlead = other.leading_coefficient
        dn = len(other.coeffs)
        if len(rem) < dn:
            return Poly(), self
        q = [Fraction(0)] * (len(rem) - dn + 1)
        for k in range(len(rem) - dn, -1, -1):
            top = rem[k + dn - 1]
            if _is_zero_coeff(top):
                continue
            if isinstance(dlead, Poly):
                c = dlead.exact_div_into(top)
            else:
                c = top / dlead
            q[k] = c
            for i, d in enumerate(other.coeffs):
                rem[k + i] = rem[k + i] - c * d
        return Poly(q), Poly(rem)

    def exact_div_into(self, numerator):
        """Divide ``numerator`` (coefficient value) by this polynomial,
        requiring exactness.  Helper for nested-coefficient division."""
        if not isinstance(numerator, Poly):
            numerator = Poly([numerator])
        q, r = numerator.divmod_exact(self)
        if not r.is_zero:
            raise ValueError("inexact nested polynomial division")
        return q

    def exact_div(self, other: "Poly") -> "Poly":
        """Exact quotient; raises ValueError if the division leaves a
        remainder.  This is the workhorse of fraction-free elimination,
        where every such division is exact by construction."""
        q, r = self.divmod_exact(other)
        if not r.is_zero:
            raise ValueError("inexact polynomial division")
        return q

    def derivative(self) -> "Poly":
        """Derivative in the outer variable."""
        return Poly([k * c for k, c in enumerate(self.coeffs)][1:])

    def derivative_inner(self) -> "Poly":
        """Derivative in the nested variable (coefficients must be Polys)."""
        out = []
        for c in self.coeffs:
            if not isinstance(c, Poly):
                c = Poly([c])
            out.append(c.derivative())
        return Poly(out)

    # -- evaluation and display -----------------------------------------

    def evaluate(self, x, param=None):
        """Horner evaluation at ``x``; nested coefficients are first
        evaluated at ``param``.  Works for Fraction, mpf, and dual-number
        arguments alike, since it only uses ring operations."""
        acc = None
        for c in reversed(self.coeffs):
            if isinstance(c, Poly):
                if param is None:
                    raise InputError(
                        "this polynomial has a nested parameter; pass param="
                    )
                c = c.evaluate(param)
            acc = c if acc is None else acc * x + c
        if acc is None:
            return Fraction(0)
        return acc

    def monic(self) -> "Poly":
        """Same roots, leading coefficient one.  Defined only when the
        leading coefficient is a nonzero rational constant (possibly a
        degree-zero nested polynomial)."""
        lead = self.leading_coefficient
        if isinstance(lead, Poly):
            if lead.degree != 0:
                raise InputError(
                    "cannot normalize: leading coefficient depends on the parameter"
                )
            lead = lead.coefficient(0)
        if lead == 0:
            raise InputError("cannot normalize the zero polynomial")
        return self * (1 / Fraction(lead))

    def terms(self):
        """(degree, coefficient) pairs, descending, zero terms skipped."""
        for k in range(len(self.coeffs) - 1, -1, -1):
            if not _is_zero_coeff(self.coeffs[k]):
                yield k, self.coeffs[k]

    def __repr__(self):
        return f"Poly({list(self.coeffs)!r})"


def bisect_root(p: Poly, lo, hi, digits: int = 15) -> Fraction:
    """A root of ``p`` in (lo, hi) by exact bisection.

    Everything stays in Fraction arithmetic, so the sign tests are never
    wrong; the answer is the midpoint of a bracket narrower than
    10^(-digits) * max(1, |midpoint|).  The endpoints must straddle a
    sign change (an endpoint landing exactly on a root is returned
    as-is).
    """
    if not isinstance(p, Poly) or any(isinstance(c, Poly) for c in p.coeffs):
        raise InputError("bisection works on univariate rational polynomials")
    if not isinstance(digits, int) or digits < 1:
        raise InputError(f"digits must be a positive int, got {digits!r}")
    a, b = Fraction(lo), Fraction(hi)
    if a >= b:
        raise InputError(f"need lo < hi, got {lo!r} >= {hi!r}")
    fa, fb = p.evaluate(a), p.evaluate(b)
    if fa == 0:
        return a
    if fb == 0:
        return b
    if (fa > 0) == (fb > 0):
        raise InputError(f"no sign change on [{lo!r}, {hi!r}]")
    tol = Fraction(1, 10**digits)
    while True:
        mid = (a + b) / 2
        if b - a < tol * max(Fraction(1), abs(mid)):
            return mid
        fm = p.evaluate(mid)
        if fm == 0:
            return mid
        if (fm > 0) == (fa > 0):
            a, fa = mid, fm
        else:
            b = mid


def _format_coeff(c, inner_var):
    """Render a coefficient; returns (sign, body) with body never signed."""
    if isinstance(c, Poly):
        nterms = sum(1 for _ in c.terms())
        if nterms == 0:
            return "+", "0"
        text = format_poly(c, inner_var)
        if nterms > 1:
            return "+", "(" + text + ")"
        if text.startswith("-"):
            return "-", text[1:]
        return "+", text
    if c < 0:
        return "-", _format_coeff(-c, inner_var)[1]
    if c.denominator == 1:
        return "+", str(c.numerator)
    return "+", f"{c.numerator}/{c.denominator}"


def format_poly(p: Poly, var: str, inner_var: str | None = None) -> str:
    """Human-readable form, highest degree first, e.g.
    ``E^6 - 27*E^4 + 162*E^3*lambda + ...``."""
    if p.is_zero:
        return "0"
    pieces = []
    for k, c in p.terms():
        sign, body = _format_coeff(c, inner_var)
        if k == 0:
            mono = ""
        elif k == 1:
            mono = var
        else:
            mono = f"{var}^{k}"
        if mono and body == "1":
            term = mono
        elif mono:
            term = f"{body}*{mono}"
        else:
            term = body
        pieces.append((sign, term))
    sign0, term0 = pieces[0]
    out = ("-" if sign0 == "-" else "") + term0
    for sign, term in pieces[1:]:
        out += f" {'-' if sign == '-' else '+'} {term}"
    return out
