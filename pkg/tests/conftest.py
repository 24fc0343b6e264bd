"""Shared fixtures.

The expensive objects (tracked root chains, oracle eigenvalues) are
session-scoped: several test modules and the acceptance suite reuse the
same quartic ground-state bracket, so computing it once keeps the whole
run fast without loosening any tolerance.
"""

from fractions import Fraction

import pytest

from riccati_pade import (
    SolveOptions,
    bounds,
    oracle_eigenvalues,
    parse_potential,
    track_sequence,
)


@pytest.fixture(scope="session")
def quartic():
    return parse_potential("quartic")


@pytest.fixture(scope="session")
def quartic_e0_oracle(quartic):
    return oracle_eigenvalues(quartic, parity=0, k_max=0)


@pytest.fixture(scope="session")
def quartic_bounds(quartic, quartic_e0_oracle):
    """Ground-state bracket D = 2..12 at 24 target digits."""
    seed = Fraction(quartic_e0_oracle.eigenvalues[0])
    return bounds(quartic, 0, range(2, 13), seed, SolveOptions(target_digits=24))


@pytest.fixture(scope="session")
def quartic_n2_chain(quartic):
    """Second even state, d = 0, D = 3..13."""
    seed = Fraction(oracle_eigenvalues(quartic, parity=0, k_max=1).eigenvalues[1])
    return track_sequence(quartic, 0, 0, range(3, 14), seed, SolveOptions(target_digits=24))


@pytest.fixture(scope="session")
def quartic_n2_bounds(quartic):
    seed = Fraction(oracle_eigenvalues(quartic, parity=0, k_max=1).eigenvalues[1])
    return bounds(quartic, 0, range(3, 13), seed, SolveOptions(target_digits=24))
