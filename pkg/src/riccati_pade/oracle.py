"""Independent eigenvalue solver for cross-validation and seeding.

Deliberately shares nothing with the determinant machinery: second-order
finite differences on a real-space grid, diagonalized as a symmetric
tridiagonal matrix, refined once by Richardson extrapolation (the scheme
error is O(h^2), so (4 E_{h/2} - E_h)/3 removes the leading term).  Good
for about ten digits, which is all a seed or a sanity check needs.

Parity is handled on the half line: even states satisfy psi'(0) = 0,
implemented by reflecting the grid point at -h onto +h and symmetrizing
the first row with a sqrt(2) scaling (a similarity transform, so the
spectrum is untouched); odd states satisfy psi(0) = 0, a plain Dirichlet
condition.  The box edge is placed beyond the classical turning point by
an adaptive margin and both the box and the mesh are validated by
re-solving at the next resolution and measuring the drift.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .errors import InputError, NumericalError
from .potential import PotentialSpec

#: Relative eigenvalue accuracy the oracle promises.
TARGET = 1e-8


@dataclass(frozen=True)
class OracleResult:
    """Eigenvalues with the evidence behind them.

    ``drift`` is the largest relative change between the two finest
    resolutions (after extrapolation); ``residual`` the largest Rayleigh
    residual of the discrete eigenpairs at the finest grid.  Both are
    part of the result on purpose: an oracle without error bars is just
    another opinion.
    """

    eigenvalues: tuple[float, ...]
    parities: tuple[int, ...]
    method: str
    box: float
    points: int
    drift: float
    residual: float


def _tridiagonal(spec: PotentialSpec, s: int, box: float, n: int):
    """Diagonal and off-diagonal of the half-line operator at mesh box/n."""
    h = box / n
    inv = 1.0 / (h * h)
    if s == 0:
        xs = h * np.arange(0, n)
        diag = 2.0 * inv + np.array([spec.evaluate_float(float(x)) for x in xs])
        off = np.full(n - 1, -inv)
        off[0] = -math.sqrt(2.0) * inv
    else:
        xs = h * np.arange(1, n)
        diag = 2.0 * inv + np.array([spec.evaluate_float(float(x)) for x in xs])
        off = np.full(len(xs) - 1, -inv)
    return diag, off


def _sector_eigs(spec, s, count, box, n, want_residual=False):
    diag, off = _tridiagonal(spec, s, box, n)
    if count > len(diag):
        raise InputError(f"grid too coarse for {count} eigenvalues")
    if want_residual:
        vals, vecs = eigh_tridiagonal(diag, off, select="i", select_range=(0, count - 1))
        resid = 0.0
        for j in range(vals.shape[0]):
            v = vecs[:, j]
            tv = diag * v
            tv[:-1] += off * v[1:]
            tv[1:] += off * v[:-1]
            resid = max(resid, float(np.linalg.norm(tv - vals[j] * v)))
        return vals, resid
    vals = eigh_tridiagonal(
        diag, off, select="i", select_range=(0, count - 1), eigvals_only=True
    )
    return vals, None


def _sector_refined(spec, s, count, box, n):
    """Richardson-extrapolated eigenvalues plus drift and residual.

    Three grids give two extrapolated values; their disagreement is an
    honest error estimate for the finer one (comparing an extrapolated
    value against a raw grid would only re-measure the grid's own O(h^2)
    error)."""
    e1, _ = _sector_eigs(spec, s, count, box, n)
    e2, _ = _sector_eigs(spec, s, count, box, 2 * n)
    e4, resid = _sector_eigs(spec, s, count, box, 4 * n, want_residual=True)
    rich_a = (4.0 * e2 - e1) / 3.0
    rich_b = (4.0 * e4 - e2) / 3.0
    scale = np.maximum(1.0, np.abs(rich_b))
    drift = float(np.max(np.abs(rich_b - rich_a) / scale))
    return rich_b, drift, resid


def _choose_box(spec, s, count, start=6.0):
    """Push the wall out until the highest wanted state is deep in the
    forbidden region: decay exponent kappa * (box - turning point) must
    be comfortably large.  Works for unbounded wells and for wells with
    a flat tail (where kappa comes from the binding energy)."""
    box = start
    while True:
        vals, _ = _sector_eigs(spec, s, count, box, 1200)
        top = float(vals[-1])
        grid = np.linspace(0.0, box, 400)
        v = np.array([spec.evaluate_float(float(x)) for x in grid])
        allowed = grid[v <= top]
        turning = float(allowed[-1]) if allowed.size else 0.0
        kappa = math.sqrt(max(spec.evaluate_float(box) - top, -top, 0.25))
        if kappa * (box - turning) >= 35.0 and turning < 0.8 * box:
            return box
        if box > 120.0:
            raise NumericalError(
                "could not place the box wall deep enough into the "
                "classically forbidden region; is the potential confining?"
            )
        box *= 1.3


def oracle_eigenvalues(
    spec: PotentialSpec,
    parity: int | None = None,
    k_max: int = 0,
    resolution: tuple[float, int] | None = None,
) -> OracleResult:
    """Lowest eigenvalues of -psi'' + V psi = E psi with decaying ends.

    ``parity`` 0 or 1 restricts to one symmetry sector; None merges both
    in ascending order.  ``k_max`` is the index of the highest eigenvalue
    wanted within the selection.  ``resolution`` optionally pins
    (box, points) instead of the adaptive choice; the two-resolution
    drift check runs either way and failure raises, never degrades
    silently.
    """
    if parity not in (None, 0, 1):
        raise InputError(f"parity must be 0, 1, or None, got {parity!r}")
    if not isinstance(k_max, int) or k_max < 0:
        raise InputError(f"k_max must be an int >= 0, got {k_max!r}")
    sectors = (0, 1) if parity is None else (parity,)
    # parity strictly alternates up the symmetric spectrum, so a merged
    # list of k_max + 1 states never needs more than half per sector;
    # asking for more can push past the last bound state of a shallow well
    per_sector = k_max + 1 if parity is not None else k_max // 2 + 1
    results = {}
    box_used = 0.0
    points_used = 0
    drift = 0.0
    residual = 0.0
    for s in sectors:
        if resolution is None:
            box = _choose_box(spec, s, per_sector)
            n = max(1500, int(box / 0.005))
        else:
            box, n = resolution
            if box <= 0 or not isinstance(n, int) or n < 100:
                raise InputError(f"bad resolution {resolution!r}")
        vals, d, r = _sector_refined(spec, s, per_sector, box, n)
        for attempt in range(2):
            if d <= TARGET:
                break
            n *= 2
            vals, d, r = _sector_refined(spec, s, per_sector, box, n)
        if d > TARGET:
            raise NumericalError(
                f"eigenvalues still drift {d:.2e} (> {TARGET}) between the two "
                f"finest grids; box {box}, points {n}"
            )
        results[s] = vals
        box_used = max(box_used, box)
        points_used = max(points_used, 4 * n)
        drift = max(drift, d)
        residual = max(residual, r)
    merged = sorted(
        (float(e), s) for s in sectors for e in results[s]
    )[: k_max + 1]
    values = tuple(e for e, _ in merged)
    parities = tuple(s for _, s in merged)
    if any(b <= a for a, b in zip(values, values[1:])):
        raise NumericalError("merged eigenvalues are not strictly increasing")
    return OracleResult(
        eigenvalues=values,
        parities=parities,
        method="fd-richardson",
        box=box_used,
        points=points_used,
        drift=drift,
        residual=residual,
    )


def full_line_eigenvalues(spec: PotentialSpec, k_max: int, box: float, n: int) -> tuple[float, ...]:
    """Plain full-line Dirichlet diagonalization (both parities mixed),
    kept separate as a consistency check on the half-line reduction."""
    h = 2.0 * box / n
    inv = 1.0 / (h * h)
    xs = -box + h * np.arange(1, n)
    diag = 2.0 * inv + np.array([spec.evaluate_float(float(x)) for x in xs])
    off = np.full(len(xs) - 1, -inv)
    coarse = eigh_tridiagonal(diag, off, select="i", select_range=(0, k_max), eigvals_only=True)
    h2 = h / 2.0
    inv2 = 1.0 / (h2 * h2)
    xs2 = -box + h2 * np.arange(1, 2 * n)
    diag2 = 2.0 * inv2 + np.array([spec.evaluate_float(float(x)) for x in xs2])
    off2 = np.full(len(xs2) - 1, -inv2)
    fine = eigh_tridiagonal(diag2, off2, select="i", select_range=(0, k_max), eigvals_only=True)
    return tuple(float(x) for x in (4.0 * fine - coarse) / 3.0)
