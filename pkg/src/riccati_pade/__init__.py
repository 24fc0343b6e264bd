"""Bound states of -psi'' + V(x) psi = E psi for symmetric potentials.

The method: expand the regularized logarithmic derivative of psi in a
power series around the origin, force a rational (Padé) structure on it,
and read eigenvalues off the roots of Hankel determinants built from the
series coefficients.  Root sequences in the determinant dimension D
converge to eigenvalues exponentially fast and, displaced by d = 0 or
d = 1, bracket them from below and above.

The public surface mirrors the pipeline: potentials as exact series
(:mod:`~riccati_pade.potential`), series coefficients in numeric, dual,
or exact-polynomial arithmetic (:mod:`~riccati_pade.riccati`),
determinants (:mod:`~riccati_pade.hankel`), root tracking and bounds
(:mod:`~riccati_pade.solver`), expectation values
(:mod:`~riccati_pade.observables`), eigenfunction reconstruction
(:mod:`~riccati_pade.wavefunction`), and an independent cross-check
solver (:mod:`~riccati_pade.oracle`).
"""

from importlib import metadata as _metadata

from .errors import (
    ContinuationLostError,
    ConvergenceError,
    IndeterminateError,
    InputError,
    MissingCoefficientError,
    NumericalError,
    PoleError,
    PrecisionError,
    RpmError,
    SymbolicOverflowError,
)
from .hankel import (
    HankelSpec,
    det_dual,
    det_numeric,
    det_symbolic,
    hankel_matrix,
)
from .numerics import DualReal, format_significant, parse_rational
from .observables import ExpectationValue, energy_slope_scan, expectation
from .oracle import OracleResult, oracle_eigenvalues
from .polynomials import Poly, bisect_root, format_poly
from .potential import (
    PotentialSpec,
    parse_potential,
    perturbed,
    series_coefficients,
    shift_constant,
)
from .riccati import CoeffSequence, coeffs_dual, coeffs_numeric, coeffs_symbolic
from .solver import (
    BoundsResult,
    RateFit,
    RootRecord,
    RootSequence,
    SolveOptions,
    bounds,
    find_root_near,
    fit_rate,
    scaling_limit,
    scan_roots,
    track_sequence,
    track_sequences_in_window,
)
from .wavefunction import (
    PadeApproximant,
    default_orders,
    eigenfunction_eval,
    pade_from_coeffs,
    residual_profile,
    taylor_of_pade,
)

try:
    __version__ = _metadata.version("riccati-pade")
except _metadata.PackageNotFoundError:
    __version__ = "0.0.0"

__all__ = [
    "BoundsResult",
    "CoeffSequence",
    "ContinuationLostError",
    "ConvergenceError",
    "DualReal",
    "ExpectationValue",
    "HankelSpec",
    "IndeterminateError",
    "InputError",
    "MissingCoefficientError",
    "NumericalError",
    "OracleResult",
    "PadeApproximant",
    "PoleError",
    "Poly",
    "PotentialSpec",
    "PrecisionError",
    "RateFit",
    "RootRecord",
    "RootSequence",
    "RpmError",
    "SolveOptions",
    "SymbolicOverflowError",
    "bisect_root",
    "bounds",
    "coeffs_dual",
    "coeffs_numeric",
    "coeffs_symbolic",
    "default_orders",
    "det_dual",
    "det_numeric",
    "det_symbolic",
    "eigenfunction_eval",
    "energy_slope_scan",
    "expectation",
    "find_root_near",
    "fit_rate",
    "format_poly",
    "format_significant",
    "hankel_matrix",
    "oracle_eigenvalues",
    "pade_from_coeffs",
    "parse_potential",
    "parse_rational",
    "perturbed",
    "residual_profile",
    "scaling_limit",
    "scan_roots",
    "series_coefficients",
    "shift_constant",
    "taylor_of_pade",
    "track_sequence",
    "track_sequences_in_window",
    "__version__",
]
