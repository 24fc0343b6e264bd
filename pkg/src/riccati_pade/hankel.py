"""Hankel determinants of the series coefficients.

The quantization condition: arrange consecutive series coefficients into
the D x D Hankel matrix whose (i, j) entry is f_{d+1+i+j} (zero-based
i, j) and take its determinant H.  Real roots of H(E) = 0, followed
through increasing D, converge to the bound-state eigenvalues; the
displacement d selects the flavor (d = 0 roots approach even/odd state
energies from below, d = 1 from above, so consecutive-d pairs bracket).

Numeric evaluation is LU elimination with partial pivoting on mpf or
dual-number entries at an explicit precision, optionally guarded: the
guard re-evaluates with extra digits and certifies how many digits the
two runs share.  Exact evaluation (small D) is fraction-free Bareiss
elimination over Q[E] or Q[param][E], whose intermediate divisions are
exact by construction, keeping coefficient growth polynomial.
"""

from __future__ import annotations

from dataclasses import dataclass

from mpmath import mp

from .errors import InputError, PrecisionError, SymbolicOverflowError
from .numerics import DualReal, agreement_digits, require_precision, to_mpf
from .polynomials import Poly
from .riccati import CoeffSequence, coeffs_dual, coeffs_numeric, coeffs_symbolic

#: Extra digits used by a guarded re-evaluation.
GUARD_PAD = 20


@dataclass(frozen=True)
class HankelSpec:
    """Which determinant: dimension D, displacement d, parity s."""

    dimension: int
    displacement: int
    parity: int

    def __post_init__(self):
        if not isinstance(self.dimension, int) or self.dimension < 1:
            raise InputError(f"dimension must be an int >= 1, got {self.dimension!r}")
        if not isinstance(self.displacement, int) or self.displacement < 0:
            raise InputError(
                f"displacement must be an int >= 0, got {self.displacement!r}"
            )
        if self.parity not in (0, 1):
            raise InputError(f"parity must be 0 or 1, got {self.parity!r}")

    @property
    def max_series_index(self) -> int:
        """Largest coefficient index the matrix touches: d + 2D - 1."""
        return self.displacement + 2 * self.dimension - 1


def hankel_matrix(coeffs, spec: HankelSpec) -> list[list]:
    """The D x D matrix with entry (i, j) = f_{d+1+i+j}.

    ``coeffs`` is a :class:`CoeffSequence` or plain sequence holding at
    least f_0..f_{d+2D-1}.
    """
    entries = coeffs.entries if isinstance(coeffs, CoeffSequence) else tuple(coeffs)
    need = spec.max_series_index
    if len(entries) <= need:
        raise InputError(
            f"need series coefficients through f_{need}, got only "
            f"{len(entries)} entries"
        )
    d, n = spec.displacement, spec.dimension
    return [[entries[d + 1 + i + j] for j in range(n)] for i in range(n)]


def _abs_value(x):
    return abs(x.value) if isinstance(x, DualReal) else abs(x)


def _det_inexact(rows: list[list]):
    """LU with partial pivoting; works for mpf and DualReal entries."""
    n = len(rows)
    m = [list(r) for r in rows]
    sign = 1
    for k in range(n):
        pivot_row = max(range(k, n), key=lambda r: _abs_value(m[r][k]))
        if _abs_value(m[pivot_row][k]) == 0:
            return _det_singular_block(m, k, sign)
        if pivot_row != k:
            m[k], m[pivot_row] = m[pivot_row], m[k]
            sign = -sign
        pk = m[k][k]
        for i in range(k + 1, n):
            factor = m[i][k] / pk
            for j in range(k + 1, n):
                m[i][j] = m[i][j] - factor * m[k][j]
    det = m[0][0]
    for k in range(1, n):
        det = det * m[k][k]
    return det if sign == 1 else -det


def _det_singular_block(m, k, sign):
    """Finish the determinant once every pivot candidate in column k of
    the reduced block has value zero.

    The value is then an exact zero and plain numbers stop here.  Dual
    entries still carry first-order information: cofactor expansion of
    the block along its zero-valued column pairs each entry's tangent
    with a value-only minor, so the tangents survive even though the
    value does not.  (If the tangents vanish too the zero is at least
    double and a zero dual is the honest answer.)
    """
    n = len(m)
    zero = m[k][k] * 0
    if not isinstance(zero, DualReal):
        return zero
    d_energy = mp.mpf(0)
    d_param = mp.mpf(0)
    for i in range(k, n):
        entry = m[i][k]
        if entry.d_energy == 0 and entry.d_param == 0:
            continue
        minor = _det_inexact(
            [
                [m[r][c].value for c in range(k + 1, n)]
                for r in range(k, n)
                if r != i
            ]
        ) if n - k > 1 else mp.mpf(1)
        term_sign = 1 if (i - k) % 2 == 0 else -1
        d_energy += term_sign * entry.d_energy * minor
        d_param += term_sign * entry.d_param * minor
    block = DualReal(mp.mpf(0), d_energy, d_param)
    for i in range(k):
        block = block * m[i][i]
    return block if sign == 1 else -block


def det_numeric(pot, energy, spec: HankelSpec, prec: int, guard: int | None = None):
    """H(E) as an mpf at ``prec`` digits.

    With ``guard=g`` the determinant is evaluated again with
    ``GUARD_PAD`` extra digits; if the two runs agree to fewer than ``g``
    digits a :class:`PrecisionError` asks the caller to escalate.  The
    guarded value returned is the higher-precision one.
    """
    require_precision(prec)
    value = _eval_numeric(pot, energy, spec, prec)
    if guard is None:
        return value
    hi = _eval_numeric(pot, energy, spec, prec + GUARD_PAD)
    agreed = agreement_digits(value, hi)
    if agreed < guard:
        raise PrecisionError(
            f"determinant certified only {agreed} digits at {prec} working "
            f"digits (wanted {guard}); escalate the working precision"
        )
    return hi


def _eval_numeric(pot, energy, spec, prec):
    c = coeffs_numeric(pot, spec.parity, energy, spec.max_series_index, prec)
    with mp.workdps(prec):
        return _det_inexact(hankel_matrix(c, spec))


def det_dual(pot, energy, spec: HankelSpec, prec: int, param: str | None = None) -> DualReal:
    """H(E) with exact forward-mode tangents dH/dE and, when ``param``
    names a potential parameter, dH/d(param)."""
    require_precision(prec)
    c = coeffs_dual(pot, spec.parity, energy, spec.max_series_index, prec, param=param)
    with mp.workdps(prec):
        return _det_inexact(hankel_matrix(c, spec))


def det_dual_pair(
    pot, energy, spec: HankelSpec, prec: int, param: str | None = None, pad: int = GUARD_PAD
) -> tuple[DualReal, DualReal]:
    """The dual determinant at ``prec + pad`` and ``prec`` digits, in that
    order.  The difference between the two is an honest noise estimate
    for value and tangents alike; root certification is built on it."""
    lo = det_dual(pot, energy, spec, prec, param=param)
    hi = det_dual(pot, energy, spec, prec + pad, param=param)
    return hi, lo


def _term_count(p: Poly) -> int:
    total = 0
    for c in p.coeffs:
        total += _term_count(c) if isinstance(c, Poly) else 1
    return total


def det_symbolic(
    pot, spec: HankelSpec, param: str | None = None, term_limit: int = 200_000
) -> Poly:
    """H as an exact polynomial in E (bivariate in ``param`` if given).

    Fraction-free elimination: the Bareiss update
    ``m[i][j] <- (m[k][k] m[i][j] - m[i][k] m[k][j]) / previous_pivot``
    divides exactly at every step, so intermediate polynomials stay the
    size of genuine minors instead of exploding.  The raw determinant is
    returned; use ``.monic()`` for the normalized display form.
    """
    c = coeffs_symbolic(pot, spec.parity, spec.max_series_index, param=param)
    m = hankel_matrix(c, spec)
    n = spec.dimension
    sign = 1
    prev = Poly([1])
    for k in range(n - 1):
        if m[k][k].is_zero:
            swap = next((r for r in range(k + 1, n) if not m[r][k].is_zero), None)
            if swap is None:
                return Poly()
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        pivot = m[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (pivot * m[i][j] - m[i][k] * m[k][j]).exact_div(prev)
            m[i][k] = Poly()
        prev = pivot
        budget = sum(_term_count(m[i][j]) for i in range(k + 1, n) for j in range(k + 1, n))
        if budget > term_limit:
            raise SymbolicOverflowError(
                f"exact determinant exceeded {term_limit} coefficient terms at "
                f"elimination step {k + 1}; use the numeric path for this size"
            )
    det = m[n - 1][n - 1]
    return det if sign == 1 else -det


def residual_scale(pot, energy, spec: HankelSpec, prec: int, offset="1/10"):
    """max(|H(E - delta)|, |H(E + delta)|): the natural scale against
    which a root's residual |H(root)| should be judged."""
    e = to_mpf(energy, prec)
    delta = to_mpf(offset, prec)
    with mp.workdps(prec):
        left = det_numeric(pot, e - delta, spec, prec)
        right = det_numeric(pot, e + delta, spec, prec)
        return max(abs(left), abs(right))
