"""Antiunitary/conjugation core tests: involution checks, eigenvector phase
behaviour, real-subspace frames, named constructions, spin-flip-sum detection,
Wigner canonical form, tensor-product classification of conjugations."""

import numpy as np
import pytest

from conjlab import (
    Antiunitary,
    Conjugation,
    DimensionError,
    SymmetryError,
    anticommutator_defect,
    build_named,
    candidate_conjugation,
    collective_spin_flip,
    conjugate_swap,
    conjugation_invariance_defect,
    cz_conjugation,
    dagger,
    haar_unitary,
    is_eigenframe,
    is_eigenvector,
    is_product_vector,
    is_spin_flip_sum,
    kron_all,
    matrix_exp_i_hermitian,
    oneway_conjugation,
    product_conjugation,
    product_factors,
    real_subspace_basis,
    spin_flip,
    wigner_canonical_form,
)
from helpers import random_conjugation, random_state

SQ2 = np.sqrt(2.0)


# ------------------------------------------------------------- structure ---


def test_conjugation_requires_symmetric_unitary():
    with pytest.raises(SymmetryError):
        Conjugation(np.array([[0.0, 1.0], [-1.0, 0.0]]))  # antisymmetric
    with pytest.raises(SymmetryError):
        Conjugation(np.diag([1.0, 2.0]))  # not unitary
    c = Conjugation(np.eye(2))
    assert c.is_conjugation()


def test_conjugation_squares_to_identity():
    rng = np.random.default_rng(0)
    for dims in [(2,), (3,), (2, 2), (2, 3)]:
        theta = random_conjugation(dims, rng)
        v = random_state(theta.dim, rng)
        np.testing.assert_allclose(
            theta.apply(theta.apply(v)), v, atol=1e-10)
        np.testing.assert_allclose(
            theta.squared_matrix(), np.eye(theta.dim), atol=1e-10)


def test_spin_flip_squares_to_minus_identity():
    f = spin_flip()
    np.testing.assert_allclose(f.squared_matrix(), -np.eye(2), atol=1e-14)
    assert not f.is_conjugation()
    v = random_state(2, np.random.default_rng(1))
    # no eigenvectors at all: θ² = −1 forbids them
    assert is_eigenvector(f, v) is None


def test_antiunitary_apply_is_antilinear():
    rng = np.random.default_rng(2)
    theta = random_conjugation((2, 2), rng)
    v = random_state(4, rng)
    w = random_state(4, rng)
    a, b = 0.3 + 0.4j, -1.1 + 0.2j
    lhs = theta.apply(a * v + b * w)
    rhs = np.conj(a) * theta.apply(v) + np.conj(b) * theta.apply(w)
    np.testing.assert_allclose(lhs, rhs, atol=1e-12)


def test_eigenvector_phase_squares():
    # If θψ = zψ then θ(cψ) = conj(c)z(cψ)/c·c... : the eigenvalue transforms
    # as z → conj(c)²z/|c|², so rephasing ψ by e^{iφ} rotates z by e^{-2iφ}.
    theta = Conjugation(np.eye(2))
    psi = np.array([1.0, 0.0], dtype=complex)
    z0 = is_eigenvector(theta, psi)
    assert z0 is not None and abs(z0 - 1.0) < 1e-12
    phi = 0.7
    z1 = is_eigenvector(theta, np.exp(1j * phi) * psi)
    assert z1 is not None
    np.testing.assert_allclose(z1, np.exp(-2j * phi) * z0, atol=1e-12)


def test_tensor_of_conjugations():
    rng = np.random.default_rng(3)
    a = random_conjugation((2,), rng)
    b = random_conjugation((3,), rng)
    t = a.tensor(b)
    assert t.dims == (2, 3)
    assert Conjugation(t.matrix, t.dims).is_conjugation()


# --------------------------------------------------------- real subspace ---


def test_real_subspace_basis_is_fixed_pointwise():
    rng = np.random.default_rng(4)
    for dims in [(2,), (2, 2), (3,)]:
        theta = random_conjugation(dims, rng)
        frame = real_subspace_basis(theta)
        assert frame.vectors.shape == (theta.dim, theta.dim)
        assert frame.completeness_defect() < 1e-9
        ok, phases = is_eigenframe(theta, frame)
        assert ok
        np.testing.assert_allclose(phases, np.ones(theta.dim), atol=1e-8)


def test_real_subspace_of_identity_is_real():
    frame = real_subspace_basis(Conjugation(np.eye(3)))
    assert np.max(np.abs(frame.vectors.imag)) < 1e-12


# --------------------------------------------------- named constructions ---


def test_collective_spin_flip_matrix_frozen():
    # (iσ_Y) ⊗ (iσ_Y) acts on |11⟩,|10⟩,|01⟩,|00⟩ with signs +,−,−,+
    u = collective_spin_flip().matrix
    expect = np.zeros((4, 4))
    expect[0, 3] = expect[3, 0] = 1.0
    expect[1, 2] = expect[2, 1] = -1.0
    np.testing.assert_allclose(u, expect, atol=1e-14)


def test_conjugate_swap_matrix():
    u = conjugate_swap(2).matrix
    np.testing.assert_allclose(u, np.eye(4)[[0, 2, 1, 3]], atol=1e-14)
    u3 = conjugate_swap(3).matrix
    np.testing.assert_allclose(u3 @ u3, np.eye(9), atol=1e-14)  # swap² = 1
    assert Conjugation(u3, (3, 3)).is_conjugation()


def test_cz_conjugation_matrix():
    np.testing.assert_allclose(
        cz_conjugation().matrix, np.diag([1, 1, 1, -1]), atol=1e-14)


def test_product_conjugation_tensor_matrix():
    rng = np.random.default_rng(5)
    from conjlab import random_symmetric_unitary
    f1 = random_symmetric_unitary(2, rng)
    f2 = random_symmetric_unitary(3, rng)
    theta = product_conjugation([f1, f2])
    assert theta.dims == (2, 3)
    np.testing.assert_allclose(theta.matrix, np.kron(f1, f2), atol=1e-12)
    assert theta.is_conjugation()


def test_product_factors_of_vectors():
    rng = np.random.default_rng(5)
    a = random_state(2, rng)
    b = random_state(3, rng)
    got = product_factors(np.kron(a, b), (2, 3))
    assert got is not None
    np.testing.assert_allclose(kron_all(got), np.kron(a, b), atol=1e-9)
    bell = np.array([1, 0, 0, 1]) / SQ2
    assert product_factors(bell, (2, 2)) is None


def test_is_product_vector():
    a = np.kron([1.0, 2.0j], [0.5, 1.0, -1.0])
    assert is_product_vector(a, (2, 3))
    bell = np.array([1, 0, 0, 1]) / SQ2
    assert not is_product_vector(bell, (2, 2))


def test_candidate_conjugation_from_basis_and_phases():
    # U = Σ e^{iφ_j} ψ_j ψ_jᵀ over an orthonormal product basis.
    rng = np.random.default_rng(6)
    la = haar_unitary(2, rng).T  # local bases as rows
    lb = haar_unitary(2, rng).T
    basis = np.array([np.kron(la[i], lb[j]) for i in range(2) for j in range(2)])
    phases = rng.uniform(0, 2 * np.pi, size=4)
    theta = candidate_conjugation(basis, phases, (2, 2))
    assert theta.is_conjugation()
    expect = sum(np.exp(1j * p) * np.outer(b, b)
                 for p, b in zip(phases, basis))
    np.testing.assert_allclose(theta.matrix, expect, atol=1e-12)
    # each basis vector is an eigenvector with eigenvalue e^{iφ_j}
    for p, b in zip(phases, basis):
        z = is_eigenvector(theta, b)
        assert z is not None
        np.testing.assert_allclose(z, np.exp(1j * p), atol=1e-9)


def test_candidate_conjugation_rejects_bad_bases():
    from conjlab import FrameError
    repeated = np.array([[1, 0, 0, 0], [1, 0, 0, 0],
                         [0, 0, 1, 0], [0, 0, 0, 1]], dtype=complex)
    with pytest.raises(FrameError):
        candidate_conjugation(repeated, np.zeros(4), (2, 2))
    bell_basis = np.array([[1, 0, 0, 1], [1, 0, 0, -1],
                           [0, 1, 1, 0], [0, 1, -1, 0]], dtype=complex) / SQ2
    with pytest.raises(FrameError):  # entangled vectors are not admissible
        candidate_conjugation(bell_basis, np.zeros(4), (2, 2))


def test_oneway_conjugation_blocks():
    sx = np.array([[0, 1], [1, 0]], dtype=complex)
    theta = oneway_conjugation([sx, np.eye(2), np.diag([1.0, 1j])])
    assert theta.dims == (3, 2)
    expect = np.zeros((6, 6), dtype=complex)
    expect[0:2, 0:2] = sx
    expect[2:4, 2:4] = np.eye(2)
    expect[4:6, 4:6] = np.diag([1.0, 1j])
    np.testing.assert_allclose(theta.matrix, expect, atol=1e-14)


def test_build_named_dispatch():
    t = build_named("conjugate_swap", d=2)
    np.testing.assert_allclose(t.matrix, conjugate_swap(2).matrix, atol=0)
    with pytest.raises(Exception):
        build_named("no_such_kind")


# ---------------------------------------------------------- defect tools ---


def test_anticommutator_defect():
    sx = np.array([[0, 1], [1, 0]], dtype=complex)
    sz = np.diag([1.0, -1.0]).astype(complex)
    theta = Conjugation(sx)  # σ_X · conj anticommutes with σ_Z generator
    assert anticommutator_defect(theta, sz) < 1e-14
    assert anticommutator_defect(theta, sx) > 1.0  # commutes instead


def test_conjugation_invariance_under_protected_evolution():
    # θ anticommuting with H ⟹ e^{iHt} θ e^{iHt}... leaves θ invariant.
    sx = np.array([[0, 1], [1, 0]], dtype=complex)
    sz = np.diag([1.0, -1.0]).astype(complex)
    theta = Conjugation(sx)
    for t in (0.1, 0.9, 2.4):
        u = matrix_exp_i_hermitian(sz, t)
        assert conjugation_invariance_defect(theta, u) < 1e-12


# ---------------------------------------------- spin-flip sums / Wigner ---


def _flip_sum(k, rng):
    """W J Wᵀ with J = ⊕_k [[0,1],[-1,0]]: canonical antiunitary squaring to −1."""
    blocks = np.zeros((2 * k, 2 * k))
    for i in range(k):
        blocks[2 * i, 2 * i + 1] = 1.0
        blocks[2 * i + 1, 2 * i] = -1.0
    w = haar_unitary(2 * k, rng)
    return w @ blocks @ w.T


def test_is_spin_flip_sum():
    rng = np.random.default_rng(7)
    assert is_spin_flip_sum(Antiunitary(_flip_sum(1, rng)))
    assert is_spin_flip_sum(Antiunitary(_flip_sum(2, rng)))
    assert not is_spin_flip_sum(Conjugation(np.eye(2)))
    # generic antiunitary: neither ±1 square
    g = Antiunitary(haar_unitary(3, rng))
    assert not is_spin_flip_sum(g)


def test_flip_sum_squares_to_minus_one():
    rng = np.random.default_rng(8)
    for k in (1, 2, 3):
        op = Antiunitary(_flip_sum(k, rng))
        np.testing.assert_allclose(
            op.squared_matrix(), -np.eye(2 * k), atol=1e-10)


def test_tensor_flip_sums_is_conjugation():
    rng = np.random.default_rng(9)
    a = _flip_sum(1, rng)
    b = _flip_sum(2, rng)
    t = Antiunitary(np.kron(a, b), (2, 4))
    assert t.is_conjugation()  # (−1)·(−1) = +1


def test_tensor_mixed_is_not_conjugation():
    rng = np.random.default_rng(10)
    conj_factor = random_conjugation((2,), rng).matrix
    flip_factor = _flip_sum(1, rng)
    t = Antiunitary(np.kron(conj_factor, flip_factor), (2, 2))
    assert not t.is_conjugation()


def test_wigner_form_of_conjugation_all_identity():
    rng = np.random.default_rng(11)
    theta = random_conjugation((4,), rng)
    form = wigner_canonical_form(theta)
    assert form.identity_block_size == 4
    assert len(form.omegas) == 0
    assert form.reconstruction_error(theta.matrix) < 1e-8


def test_wigner_form_of_flip_sum_all_rotation_blocks():
    rng = np.random.default_rng(12)
    op = Antiunitary(_flip_sum(2, rng))
    form = wigner_canonical_form(op)
    assert form.identity_block_size == 0
    np.testing.assert_allclose(form.omegas, [-1.0, -1.0], atol=1e-8)
    assert form.reconstruction_error(op.matrix) < 1e-8


def test_wigner_form_mixed_planted_blocks():
    # plant 1 ⊕ [[0, e^{iω/2}], [e^{-iω/2}, 0]]: the squared antiunitary on
    # that block rotates by e^{±iω}, so the canonical invariant is e^{iω}.
    om = 2.0
    a = np.array([[0.0, np.exp(1j * om / 2)], [np.exp(-1j * om / 2), 0.0]])
    u0 = np.zeros((3, 3), dtype=complex)
    u0[0, 0] = 1.0
    u0[1:, 1:] = a
    rng = np.random.default_rng(13)
    w = haar_unitary(3, rng)
    op = Antiunitary(w @ u0 @ w.T)
    form = wigner_canonical_form(op)
    assert form.identity_block_size == 1
    np.testing.assert_allclose(form.omegas, [np.exp(1j * om)], atol=1e-8)
    assert form.reconstruction_error(op.matrix) < 1e-8
    # w·U·wᵀ lands exactly on the canonical block matrix
    np.testing.assert_allclose(
        form.w @ op.matrix @ form.w.T, form.canonical_matrix(), atol=1e-8)
