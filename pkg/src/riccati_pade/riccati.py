"""Series coefficients of the regularized logarithmic derivative.

For H = -d^2/dx^2 + V(x) with V symmetric and v0 = 0, write the trial
solution's logarithmic derivative as f(x) = s/x - psi'/psi with s = 0 for
even states and s = 1 for odd ones.  f is odd in x and analytic at the
origin, f(x) = x * sum_n f_n(E) z^n with z = x^2, and the coefficients
obey the quadratic recurrence

    f_0 = E / (2s + 1)
    f_n = ( sum_{j=0}^{n-1} f_j f_{n-1-j} - V_n ) / (2n + 2s + 1),  n >= 1.

Each f_n is a polynomial in E of degree n + 1 over the rationals (and
over the potential's parameter when one is live).

The same recurrence runs in three coefficient arithmetics:

* numeric  -- mpf values at an explicit decimal precision;
* dual     -- forward-mode duals carrying d/dE and d/d(param) tangents;
* symbolic -- exact polynomials in E (optionally bivariate in a
  parameter with affine coefficient dependence).

Results come back as a :class:`CoeffSequence`.  Prefixes are memoized per
(potential, s, energy, precision, mode): asking for a longer prefix
extends the stored one in place instead of recomputing it.
"""

from __future__ import annotations

from collections import OrderedDict
from dataclasses import dataclass
from fractions import Fraction

from mpmath import mp

from .errors import InputError
from .numerics import DualReal, require_precision, to_mpf
from .polynomials import Poly
from .potential import PotentialSpec, affine_coefficient_polys

_CACHE_SLOTS = 64


def _check_common(spec: PotentialSpec, s: int, n_max: int) -> None:
    if not isinstance(spec, PotentialSpec):
        raise InputError(f"expected a PotentialSpec, got {type(spec).__name__}")
    if spec.v0 != 0:
        raise InputError(
            "the constant term must be removed first; apply shift_constant "
            "and add the shift back to every eigenvalue"
        )
    if s not in (0, 1):
        raise InputError(f"parity index s must be 0 (even) or 1 (odd), got {s!r}")
    if not isinstance(n_max, int) or n_max < 0:
        raise InputError(f"n_max must be an int >= 0, got {n_max!r}")
    if n_max >= 1:
        spec.coefficient(n_max)  # fail loudly before any work


@dataclass(frozen=True)
class CoeffSequence:
    """A computed prefix f_0..f_{n_max} in one coefficient arithmetic."""

    spec: PotentialSpec
    s: int
    mode: str  # "numeric" | "dual" | "symbolic"
    entries: tuple
    prec: int | None = None
    param: str | None = None

    def __len__(self) -> int:
        return len(self.entries)

    def __getitem__(self, n: int):
        return self.entries[n]

    @property
    def n_max(self) -> int:
        return len(self.entries) - 1


class _PrefixStore:
    """Bounded FIFO of extendable coefficient prefixes."""

    def __init__(self, slots: int = _CACHE_SLOTS):
        self._data: OrderedDict = OrderedDict()
        self._slots = slots

    def get(self, key) -> list:
        if key in self._data:
            self._data.move_to_end(key)
            return self._data[key]
        entries: list = []
        self._data[key] = entries
        while len(self._data) > self._slots:
            self._data.popitem(last=False)
        return entries

    def clear(self) -> None:
        self._data.clear()


_numeric_store = _PrefixStore()
_dual_store = _PrefixStore()
_symbolic_store = _PrefixStore(slots=16)


def clear_caches() -> None:
    """Drop all memoized prefixes (mainly for tests and memory control)."""
    _numeric_store.clear()
    _dual_store.clear()
    _symbolic_store.clear()


def _extend(entries: list, spec: PotentialSpec, s: int, n_max: int, e0, vterm):
    """Run the recurrence in whatever arithmetic the seeds live in.

    ``e0`` is the trial energy (mpf, DualReal, or Poly in E) and
    ``vterm(n)`` yields V_n in the same arithmetic's coefficient domain.
    Appends to ``entries`` until f_{n_max} exists.
    """
    if not entries:
        entries.append(e0 / (2 * s + 1))
    while len(entries) <= n_max:
        n = len(entries)
        acc = None
        for j in range(n):
            term = entries[j] * entries[n - 1 - j]
            acc = term if acc is None else acc + term
        acc = acc - vterm(n)
        entries.append(acc / (2 * n + 2 * s + 1))


def coeffs_numeric(spec, s: int, energy, n_max: int, prec: int) -> CoeffSequence:
    """f_0..f_{n_max} as mpf values at ``prec`` decimal digits."""
    _check_common(spec, s, n_max)
    require_precision(prec)
    energy = to_mpf(energy, prec)
    key = (spec, s, energy._mpf_, prec)
    entries = _numeric_store.get(key)
    if len(entries) <= n_max:
        with mp.workdps(prec):
            vals = {}

            def vterm(n):
                if n not in vals:
                    c = spec.coefficient(n)
                    vals[n] = mp.mpf(c.numerator) / c.denominator
                return vals[n]

            _extend(entries, spec, s, n_max, energy, vterm)
    return CoeffSequence(spec, s, "numeric", tuple(entries[: n_max + 1]), prec=prec)


def coeffs_dual(spec, s: int, energy, n_max: int, prec: int, param: str | None = None) -> CoeffSequence:
    """f_0..f_{n_max} as duals: value, d/dE, and (if ``param`` is given)
    d/d(param) at the potential's stored parameter value."""
    _check_common(spec, s, n_max)
    require_precision(prec)
    if param is not None:
        spec.slope(1, param)  # validate the name loudly
    energy = to_mpf(energy, prec)
    key = (spec, s, energy._mpf_, prec, param)
    entries = _dual_store.get(key)
    if len(entries) <= n_max:
        with mp.workdps(prec):
            e0 = DualReal.energy(energy)

            def vterm(n):
                c = spec.coefficient(n)
                slope = spec.slope(n, param) if param is not None else 0
                return DualReal(c, 0, slope)

            _extend(entries, spec, s, n_max, e0, vterm)
    return CoeffSequence(
        spec, s, "dual", tuple(entries[: n_max + 1]), prec=prec, param=param
    )


def coeffs_symbolic(spec, s: int, n_max: int, param: str | None = None) -> CoeffSequence:
    """f_0..f_{n_max} as exact polynomials in E.

    With ``param`` given, coefficients are polynomials in that parameter
    (requires affine dependence, e.g. the x^2 coefficient of the
    double well); without it they are plain rationals at the stored
    parameter values.
    """
    _check_common(spec, s, n_max)
    if param is None:
        key = (spec, s, None)
        entries = _symbolic_store.get(key)
        if len(entries) <= n_max:
            e0 = Poly([0, 1])

            def vterm(n):
                return Poly([spec.coefficient(n)])

            _extend(entries, spec, s, n_max, e0, vterm)
        return CoeffSequence(spec, s, "symbolic", tuple(entries[: n_max + 1]))

    vpolys = affine_coefficient_polys(spec, param)  # validates affineness
    key = (spec, s, param)
    entries = _symbolic_store.get(key)
    if len(entries) <= n_max:
        one = Poly([Fraction(1)])
        e0 = Poly([Poly(), one])  # E, with nested-in-param coefficients

        def vterm(n):
            if n - 1 < len(vpolys):
                return Poly([vpolys[n - 1]])
            spec.coefficient(n)  # raises unless the tail is exactly zero
            return Poly()

        _extend(entries, spec, s, n_max, e0, vterm)
    return CoeffSequence(
        spec, s, "symbolic", tuple(entries[: n_max + 1]), param=param
    )
