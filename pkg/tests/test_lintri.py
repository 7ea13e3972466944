"""Tridiagonal eigensolver, propagators, and Gram-Schmidt layer."""

import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from dekrylov.errors import ArgumentError, LinearDependenceError
from dekrylov.lintri import (
    KrylovState,
    TridiagonalOperator,
    eig_tridiag,
    expm_action,
    expm_e0_scaled,
    expm_from_eig,
    orthonormalize,
)


def tridiagonals(max_dim=10):
    """Random well-scaled symmetric tridiagonal operators."""

    def build(dim):
        return st.tuples(
            st.lists(st.floats(-4.0, 4.0), min_size=dim, max_size=dim),
            st.lists(st.floats(0.05, 4.0), min_size=dim - 1, max_size=dim - 1),
        ).map(
            lambda pair: TridiagonalOperator(
                diag=np.asarray(pair[0]), offdiag=np.asarray(pair[1])
            )
        )

    return st.integers(2, max_dim).flatmap(build)


# ---------------------------------------------------------------- containers


def test_tridiagonal_operator_validates_shapes():
    with pytest.raises(ArgumentError):
        TridiagonalOperator(diag=np.zeros(3), offdiag=np.ones(3))
    with pytest.raises(ArgumentError):
        TridiagonalOperator(diag=np.zeros(3), offdiag=np.array([1.0, 0.0]))
    # dim 1 is legal: it represents a Krylov space that terminated immediately
    assert TridiagonalOperator(diag=np.zeros(1), offdiag=np.zeros(0)).dim == 1


def test_to_dense_and_matvec_agree():
    op = TridiagonalOperator(diag=np.array([1.0, -2.0, 0.5]), offdiag=np.array([0.3, 1.1]))
    dense = op.to_dense()
    assert_allclose(dense, dense.T)
    v = np.array([0.2, -1.0, 0.7])
    assert_allclose(op.matvec(v), dense @ v, atol=1e-15)


def test_krylov_state_requires_unit_norm():
    with pytest.raises(ArgumentError):
        KrylovState(tau=0.0, psi=np.array([1.0, 1.0]))
    state = KrylovState(tau=0.0, psi=np.array([1.0, 0.0]))
    assert state.tau == 0.0


# --------------------------------------------------------------- eigensolver


def test_two_site_hopping_spectrum():
    """T = [[0,1],[1,0]] has eigenvalues -1, +1."""
    dec = eig_tridiag(TridiagonalOperator(diag=np.zeros(2), offdiag=np.ones(1)))
    assert_allclose(dec.values, [-1.0, 1.0], atol=1e-15)
    assert_allclose(dec.vectors.T @ dec.vectors, np.eye(2), atol=1e-14)


def test_binomial_chain_spectrum_is_integer_ladder():
    """offdiag sqrt(n(L-n)) at L=4 gives the ladder -3,-1,1,3."""
    op = TridiagonalOperator(
        diag=np.zeros(4), offdiag=np.sqrt([3.0, 4.0, 3.0])
    )
    dec = eig_tridiag(op)
    assert_allclose(dec.values, [-3.0, -1.0, 1.0, 3.0], atol=1e-13)


@given(tridiagonals())
@settings(max_examples=60)
def test_eig_matches_scipy_and_reconstructs(op):
    dec = eig_tridiag(op)
    ref = scipy.linalg.eigh_tridiagonal(op.diag, op.offdiag, eigvals_only=True)
    assert np.all(np.diff(dec.values) >= -1e-12)
    scale = 1.0 + np.max(np.abs(ref))
    assert_allclose(dec.values, ref, atol=1e-10 * scale)
    gram = dec.vectors.T @ dec.vectors
    assert_allclose(gram, np.eye(op.dim), atol=1e-10)
    recon = dec.vectors @ (dec.values[:, None] * dec.vectors.T)
    assert_allclose(recon, op.to_dense(), atol=1e-9 * scale)


# --------------------------------------------------------------- propagators


def test_two_site_propagator_closed_form():
    """exp(-tau X) e0 normalizes to (cosh tau, -sinh tau)/sqrt(cosh 2 tau)."""
    op = TridiagonalOperator(diag=np.zeros(2), offdiag=np.ones(1))
    for tau in (0.0, 0.3, 1.0, 4.0):
        state = expm_action(op, tau)
        expected = np.array([np.cosh(tau), -np.sinh(tau)]) / np.sqrt(np.cosh(2 * tau))
        assert_allclose(state.psi, expected, atol=1e-14)


@given(tridiagonals(max_dim=8), st.floats(0.0, 3.0))
@settings(max_examples=60)
def test_expm_action_matches_dense_expm(op, tau):
    state = expm_action(op, tau)
    dense = scipy.linalg.expm(-tau * op.to_dense())[:, 0]
    assert_allclose(state.psi, dense / np.linalg.norm(dense), atol=1e-11)
    assert_allclose(np.linalg.norm(state.psi), 1.0, atol=1e-12)


@given(tridiagonals(max_dim=8), st.floats(0.0, 3.0), st.floats(-5.0, 5.0))
@settings(max_examples=60)
def test_normalized_propagation_is_shift_invariant(op, tau, shift):
    shifted = TridiagonalOperator(diag=op.diag + shift, offdiag=op.offdiag)
    assert_allclose(expm_action(op, tau).psi, expm_action(shifted, tau).psi, atol=1e-12)


@given(tridiagonals(max_dim=8), st.floats(0.0, 3.0))
@settings(max_examples=50)
def test_eig_route_equals_direct_route(op, tau):
    assert_allclose(
        expm_from_eig(eig_tridiag(op), tau).psi, expm_action(op, tau).psi, atol=1e-12
    )


def test_scaled_propagation_splits_scale():
    op = TridiagonalOperator(diag=np.array([-3.0, 2.0]), offdiag=np.array([0.7]))
    for tau in (0.0, 0.5, 2.0):
        vec, log_scale = expm_e0_scaled(op, tau)
        full = scipy.linalg.expm(-tau * op.to_dense())[:, 0]
        assert_allclose(np.exp(log_scale) * vec, full, rtol=1e-12, atol=1e-14)
        assert np.max(np.abs(vec)) <= 1.0 + 1e-12


@given(tridiagonals(max_dim=6), st.floats(0.1, 2.0))
@settings(max_examples=40)
def test_propagation_satisfies_imaginary_time_ode(op, tau):
    """Central difference of exp(-tau T) e0 equals -T exp(-tau T) e0."""
    h = 1e-4
    states = [expm_e0_scaled(op, t) for t in (tau - h, tau, tau + h)]
    base = states[1][1]
    g = [np.exp(ls - base) * vec for vec, ls in states]
    deriv = (g[2] - g[0]) / (2 * h)
    rhs = -op.matvec(g[1])
    norm = 1.0 + np.linalg.norm(op.to_dense(), ord=2)
    assert np.linalg.norm(deriv - rhs) <= 1e-4 * norm * np.linalg.norm(g[1])


# -------------------------------------------------------------- Gram-Schmidt


def test_orthonormalize_plain_basis():
    vecs = orthonormalize([np.array([3.0, 0.0]), np.array([1.0, 1.0])])
    assert_allclose(vecs[0], [1.0, 0.0], atol=1e-15)
    assert_allclose(vecs[1], [0.0, 1.0], atol=1e-15)


@given(st.integers(2, 6), st.integers(0, 2**31 - 1))
@settings(max_examples=40)
def test_orthonormalize_produces_orthonormal_set(dim, seed):
    rng = np.random.default_rng(seed)
    vecs = list(rng.standard_normal((dim, dim)) + np.eye(dim) * dim)
    basis = orthonormalize(vecs)
    gram = np.array(basis) @ np.array(basis).T
    assert_allclose(gram, np.eye(dim), atol=1e-12)
    # the leading vector only gets rescaled
    assert_allclose(basis[0], vecs[0] / np.linalg.norm(vecs[0]), atol=1e-14)


def test_orthonormalize_flags_dependent_vector():
    with pytest.raises(LinearDependenceError) as info:
        orthonormalize([np.array([1.0, 0.0]), np.array([1.0, 1e-15])])
    assert info.value.index == 1
