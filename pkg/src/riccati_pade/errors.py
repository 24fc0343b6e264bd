"""Exception hierarchy.

Two broad families: input problems (the caller handed us something
malformed or out of range) and numerical problems (the computation itself
could not be carried to the requested quality).  The CLI maps the first
family to exit code 3 and the second to exit code 2.
"""


class RpmError(Exception):
    """Base class for every error raised by this package."""


class InputError(RpmError):
    """Malformed or out-of-range input: bad model name, bad parameter,
    non-rational coefficient, unusable matrix size, and so on."""


class MissingCoefficientError(InputError):
    """A series coefficient beyond the generated order was requested for a
    potential whose tail is not exactly zero."""

    def __init__(self, j: int, jmax: int, name: str):
        self.j = j
        self.jmax = jmax
        super().__init__(
            f"coefficient V_{j} of {name!r} was never generated "
            f"(have up to V_{jmax}); regenerate the potential with a "
            f"larger order"
        )


class NumericalError(RpmError):
    """Base class for failures of the computation itself."""


class PrecisionError(NumericalError):
    """Working precision is below the supported floor, or a guarded
    evaluation could not certify the requested number of digits even at
    the precision cap."""


class ConvergenceError(NumericalError):
    """Root refinement did not converge (iteration budget exhausted,
    derivative indistinguishable from zero with no bracket, or the
    iterates escaped the search region)."""


class ContinuationLostError(NumericalError):
    """While tracking a root across matrix dimensions the chain broke:
    the next dimension produced no root within the continuation window."""


class IndeterminateError(NumericalError):
    """A quantity is 0/0 at working precision, e.g. an expectation value
    at a determinant root of multiplicity above one."""


class SymbolicOverflowError(NumericalError):
    """An exact determinant expansion exceeded the configured term
    budget."""


class PoleError(NumericalError):
    """A rational approximant was evaluated at or beyond a real pole of
    its denominator."""
