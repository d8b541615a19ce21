import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pccsolve.conditioning import (
    Chain,
    MeasurementEvent,
    born,
    chain_conditional,
    clamp_probability,
    conditional,
    luders,
)
from pccsolve.errors import DegenerateCondition, DimensionMismatch, NotNormalized, NumericalFault, UnknownOutcome
from pccsolve.numerics import random_hermitian, random_state
from pccsolve.observables import diagonal, from_matrix, lift_local

from helpers import unit


def test_born_on_known_state(dim4):
    A, B = dim4
    psi = np.array([0, 0.6, 0.8, 0])
    assert born(A, 1, psi) == pytest.approx(0.36)
    assert born(B, -1, psi) == pytest.approx(0.36)
    with pytest.raises(NotNormalized):
        born(A, 1, [1, 1, 0, 0])
    with pytest.raises(DimensionMismatch):
        born(A, 1, [1, 0, 0])


def test_luders_update(dim4):
    A, _ = dim4
    psi = np.array([0.6, 0, 0.8, 0])
    np.testing.assert_allclose(luders(A, 1, psi), unit(1, 4))
    with pytest.raises(DegenerateCondition):
        luders(A, -1, unit(1, 4))


def test_conditional_matches_hand_computation(dim4):
    A, B = dim4
    psi = np.array([1, 1, 1, 0]) / np.sqrt(3)
    # after A=+ the state is (e1+e2)/sqrt2; B=+ keeps e1
    assert conditional(B, 1, A, 1, psi) == pytest.approx(0.5)
    with pytest.raises(DegenerateCondition):
        conditional(B, 1, A, -1, unit(1, 4))


def test_clamp_probability():
    assert clamp_probability(1 + 1e-12) == 1.0
    assert clamp_probability(-1e-12) == 0.0
    with pytest.raises(NumericalFault):
        clamp_probability(1.1)


def test_chain_on_ghz():
    z = diagonal([1, -1])
    A, B, C = (lift_local(z, k, (2, 2, 2)) for k in range(3))
    ghz = (unit(1, 8) + unit(8, 8)) / np.sqrt(2)
    assert chain_conditional([(A, 1), (B, 1)], (C, 1), ghz) == pytest.approx(1.0)
    assert chain_conditional(Chain([(A, -1)]), MeasurementEvent(C, -1), ghz) == pytest.approx(1.0)
    with pytest.raises(DegenerateCondition):
        chain_conditional([(A, 1), (B, -1)], (C, 1), ghz)
    with pytest.raises(UnknownOutcome):
        MeasurementEvent(A, 0)


def test_chain_operator_order():
    a, b = diagonal([1, -1]), from_matrix([[0, 1], [1, 0]])
    ch = Chain([(a, 1), (b, 1)])
    np.testing.assert_allclose(ch.operator(), b.projector(1) @ a.projector(1))


@settings(max_examples=50, deadline=None)
@given(st.integers(2, 6), st.integers(0, 2**32 - 1))
def test_conditional_probabilities_sum_to_one(n, seed):
    rng = np.random.default_rng(seed)
    A, B = from_matrix(random_hermitian(n, rng)), from_matrix(random_hermitian(n, rng))
    psi = random_state(n, rng)
    for alpha in A.values:
        if born(A, alpha, psi) < 1e-9:
            continue
        total = sum(conditional(B, beta, A, alpha, psi) for beta in B.values)
        assert total == pytest.approx(1.0, abs=1e-9)


@settings(max_examples=50, deadline=None)
@given(st.integers(2, 6), st.integers(0, 2**32 - 1))
def test_luders_idempotent(n, seed):
    rng = np.random.default_rng(seed)
    A = from_matrix(np.diag(rng.integers(-1, 2, n).astype(float)))
    psi = random_state(n, rng)
    for alpha in A.values:
        if born(A, alpha, psi) < 1e-9:
            continue
        once = luders(A, alpha, psi)
        np.testing.assert_allclose(luders(A, alpha, once), once, atol=1e-12)
        assert born(A, alpha, once) == pytest.approx(1.0, abs=1e-12)
