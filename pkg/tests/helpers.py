"""Shared construction helpers for the test suite."""

import numpy as np

from eprsignal import (
    EntangledState,
    PureState,
    Scenario,
    build_entangled,
    haar_unitary,
    power,
    quadratic,
    random_pure,
)

SQRT_HALF = 1.0 / np.sqrt(2.0)

E0 = np.array([1.0, 0.0], dtype=complex)
E1 = np.array([0.0, 1.0], dtype=complex)
PLUS = np.array([SQRT_HALF, SQRT_HALF], dtype=complex)
MINUS = np.array([SQRT_HALF, -SQRT_HALF], dtype=complex)

PROJ0_2 = np.array([[1.0, 0.0], [0.0, 0.0]], dtype=complex)


def random_hermitian(d: int, rng: np.random.Generator) -> np.ndarray:
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return (g + g.conj().T) / 2.0


def random_entangled(
    rng: np.random.Generator, dim_a: int, dim_b: int, branches: int
) -> EntangledState:
    alphas = rng.standard_normal(branches) + 1j * rng.standard_normal(branches)
    alphas /= np.linalg.norm(alphas)
    rotation = haar_unitary(dim_a, rng)
    alice = [rotation[:, i] for i in range(branches)]
    bob = [random_pure(dim_b, rng) for _ in range(branches)]
    return build_entangled(alphas, alice, bob)


def rotated_alice_basis(state: EntangledState, rng: np.random.Generator):
    """A fresh orthonormal basis of the state's A-side span."""
    span = np.array([s.vec for s in state.alice_basis])
    mix = haar_unitary(state.branches, rng)
    return tuple(PureState(v) for v in mix @ span)


def bell_state() -> EntangledState:
    return build_entangled([SQRT_HALF, SQRT_HALF], [E0, E1], [E0, E1])


def bell_power_scenario() -> Scenario:
    return Scenario(
        state=bell_state(),
        basis_a=(PureState(E0), PureState(E1)),
        basis_a_prime=(PureState(PLUS), PureState(MINUS)),
        observable=power(PROJ0_2, 2),
    )


def bell_quadratic_scenario() -> Scenario:
    return Scenario(
        state=bell_state(),
        basis_a=(PureState(E0), PureState(E1)),
        basis_a_prime=(PureState(PLUS), PureState(MINUS)),
        observable=quadratic(PROJ0_2),
    )


def projector_matrix(dim: int, index: int = 0) -> np.ndarray:
    m = np.zeros((dim, dim), dtype=complex)
    m[index, index] = 1.0
    return m
