"""Two-qubit magic-basis machinery: spectra, LU equivalence, classification,
concurrence, eigenframe bounds, tetrahedral measurement family.

Reference spectra frozen from an independent numpy eigendecomposition of
M† U M* for the explicitly written 4×4 operators."""

import numpy as np
import pytest

from conjlab import (
    Conjugation,
    SymmetryError,
    average_concurrence,
    canonical_local_unitaries,
    classify,
    collective_spin_flip,
    concurrence,
    conjugate_swap,
    cz_conjugation,
    dagger,
    ejm_conjugation,
    ejm_frame,
    entanglement_entropy,
    haar_unitary,
    hadamard_eigenframe,
    is_eigenframe,
    kron_all,
    lu_equivalent,
    magic_matrix,
    magic_representation,
    magic_spectrum,
    min_average_concurrence,
    random_real_orthogonal,
    spectra_equivalent,
    stiefel_eigenframe,
    tetrahedron_directions,
)
from conjlab.twoqubit import direction_moment_defects
from helpers import random_conjugation, random_local_scramble, random_state

SQ2 = np.sqrt(2.0)


def _sorted(values):
    return np.sort_complex(np.round(np.asarray(values, dtype=complex), 10))


# ----------------------------------------------------------- magic basis ---


def test_magic_matrix_is_unitary_and_frozen():
    m = magic_matrix()
    np.testing.assert_allclose(dagger(m) @ m, np.eye(4), atol=1e-14)
    expect = np.array([[1, 1j, 0, 0], [0, 0, 1j, 1],
                       [0, 0, 1j, -1], [1, -1j, 0, 0]]) / SQ2
    np.testing.assert_allclose(m, expect, atol=1e-14)


def test_magic_representation_turns_locals_orthogonal():
    # (a ⊗ b) with det-1 locals becomes real orthogonal in the magic basis
    rng = np.random.default_rng(0)
    m = magic_matrix()
    locals_ = [haar_unitary(2, rng) for _ in range(2)]
    locals_ = [u / np.sqrt(np.linalg.det(u)) for u in locals_]
    c = kron_all(locals_)
    o = dagger(m) @ c @ m
    assert np.max(np.abs(o.imag)) < 1e-10
    np.testing.assert_allclose(np.real(o) @ np.real(o).T, np.eye(4), atol=1e-10)


def test_magic_representation_is_symmetric_unitary():
    rng = np.random.default_rng(1)
    theta = random_conjugation((2, 2), rng)
    mu = magic_representation(theta)
    np.testing.assert_allclose(mu, mu.T, atol=1e-10)
    np.testing.assert_allclose(mu @ dagger(mu), np.eye(4), atol=1e-10)


# ----------------------------------------------------- reference spectra ---


def test_collective_spin_flip_spectrum():
    s = magic_spectrum(collective_spin_flip())
    np.testing.assert_allclose(_sorted(s.values), [1, 1, 1, 1], atol=1e-9)


def test_conjugate_swap_spectrum():
    s = magic_spectrum(conjugate_swap(2))
    np.testing.assert_allclose(_sorted(s.values), [-1, -1, -1, 1], atol=1e-9)


def test_transposition_spectrum():
    # plain entrywise conjugation (identity matrix part): {1, −1, −1, 1}
    s = magic_spectrum(Conjugation(np.eye(4), (2, 2)))
    np.testing.assert_allclose(_sorted(s.values), [-1, -1, 1, 1], atol=1e-9)


def test_cz_spectrum_against_eig_oracle():
    theta = cz_conjugation()
    s = magic_spectrum(theta)
    # independent oracle: plain eigendecomposition of the magic-basis matrix
    oracle = np.linalg.eigvals(magic_representation(theta))
    np.testing.assert_allclose(
        _sorted(s.values), _sorted(oracle), atol=1e-9)
    np.testing.assert_allclose(
        _sorted(s.values), [-1, -1j, 1j, 1], atol=1e-9)


def test_spectrum_trace_and_canonical_phases():
    s = magic_spectrum(cz_conjugation())
    assert abs(s.trace()) < 1e-9
    np.testing.assert_allclose(
        s.canonical_phases(), [0.0, np.pi / 2, np.pi, 3 * np.pi / 2], atol=1e-9)


def test_spectrum_is_lu_invariant():
    rng = np.random.default_rng(2)
    for _ in range(5):
        theta = random_conjugation((2, 2), rng)
        scrambled = random_local_scramble(theta, rng)
        assert spectra_equivalent(magic_spectrum(theta),
                                  magic_spectrum(scrambled), tol=1e-7)


def test_spectra_equivalent_global_phase_and_order():
    s = np.array([1, -1, 1j, -1j])
    z = np.exp(0.37j)
    assert spectra_equivalent(s, z * s[::-1])
    assert not spectra_equivalent(s, np.array([1, 1, -1, -1]))


def test_lu_equivalent_reference_pairs():
    assert not lu_equivalent(collective_spin_flip(), conjugate_swap(2))
    assert not lu_equivalent(cz_conjugation(), conjugate_swap(2))
    assert lu_equivalent(Conjugation(np.eye(4), (2, 2)),
                         Conjugation(np.eye(4), (2, 2)))
    rng = np.random.default_rng(3)
    theta = random_conjugation((2, 2), rng)
    assert lu_equivalent(theta, random_local_scramble(theta, rng), tol=1e-7)


# ------------------------------------------------- canonical local gates ---


def test_canonical_local_unitaries_diagonalize():
    rng = np.random.default_rng(4)
    m = magic_matrix()
    for _ in range(10):
        theta = random_conjugation((2, 2), rng)
        target = magic_spectrum(theta).values
        u_hat, v = canonical_local_unitaries(theta, target)
        c = kron_all([u_hat, v])
        mu = dagger(m) @ (c @ theta.matrix @ c.T) @ np.conj(m)
        np.testing.assert_allclose(mu, np.diag(target), atol=1e-8)


def test_canonical_local_unitaries_rejects_wrong_target():
    from conjlab import SpectrumError
    theta = cz_conjugation()
    with pytest.raises(SpectrumError):
        canonical_local_unitaries(theta, np.array([1, 1, 1, 1]))


# ---------------------------------------------------------- concurrence ---


def test_concurrence_reference_states():
    bell = np.array([1, 0, 0, 1]) / SQ2
    assert abs(concurrence(bell) - 1.0) < 1e-12
    prod = np.kron([1, 0], [0.6, 0.8])
    assert abs(concurrence(prod)) < 1e-12
    # |ψ⟩ = √0.9|00⟩ + √0.1|11⟩: C = 2√(0.9·0.1) = 0.6
    psi = np.array([np.sqrt(0.9), 0, 0, np.sqrt(0.1)])
    assert abs(concurrence(psi) - 0.6) < 1e-12


def test_entanglement_entropy_matches_binary_entropy():
    psi = np.array([np.sqrt(0.9), 0, 0, np.sqrt(0.1)])
    lam = (1 + np.sqrt(1 - 0.36)) / 2
    h = -lam * np.log2(lam) - (1 - lam) * np.log2(1 - lam)
    assert abs(entanglement_entropy(psi) - h) < 1e-10
    bell = np.array([1, 0, 0, 1]) / SQ2
    assert abs(entanglement_entropy(bell) - 1.0) < 1e-12


def test_min_average_concurrence_reference_values():
    assert abs(min_average_concurrence(collective_spin_flip()) - 4.0) < 1e-9
    assert abs(min_average_concurrence(conjugate_swap(2)) - 2.0) < 1e-9
    assert abs(min_average_concurrence(Conjugation(np.eye(4), (2, 2)))) < 1e-9
    assert abs(min_average_concurrence(cz_conjugation())) < 1e-9


# ------------------------------------------------------- classification ---


def test_classify_reference_conjugations():
    assert classify(collective_spin_flip()).tag == "SepUnmeasurable"
    assert classify(conjugate_swap(2)).tag == "SepUnmeasurable"
    assert classify(Conjugation(np.eye(4), (2, 2))).tag == "Product"
    assert classify(cz_conjugation()).tag == "ProdMeasurable"


def test_classify_witness_is_valid_product_eigenframe():
    from conjlab import Frame, is_product_vector, sep_witness_check
    cls = classify(cz_conjugation())
    assert cls.witness is not None
    frame = cls.witness
    assert sep_witness_check(cz_conjugation(), frame)
    for v in frame.vectors:
        assert is_product_vector(v, (2, 2))


def test_classify_zero_min_concurrence_iff_measurable():
    rng = np.random.default_rng(5)
    for _ in range(20):
        theta = random_conjugation((2, 2), rng)
        cls = classify(theta)
        mc = min_average_concurrence(theta)
        if cls.tag == "SepUnmeasurable":
            assert mc > 1e-7
        else:
            assert mc < 1e-7


def test_classify_scrambled_product_still_measurable():
    rng = np.random.default_rng(6)
    theta = random_local_scramble(Conjugation(np.eye(4), (2, 2)), rng)
    assert classify(theta, degeneracy_tol=1e-7).tag == "Product"


# ------------------------------------------------------------ eigenframes ---


def test_hadamard_eigenframe_attains_minimum():
    rng = np.random.default_rng(7)
    for theta in [collective_spin_flip(), conjugate_swap(2),
                  random_conjugation((2, 2), rng)]:
        frame = hadamard_eigenframe(theta)
        assert frame.completeness_defect() < 1e-9
        ok, _ = is_eigenframe(theta, frame, tol=1e-7)
        assert ok
        np.testing.assert_allclose(
            average_concurrence(frame), min_average_concurrence(theta),
            atol=1e-9)


def test_stiefel_eigenframe_respects_bound():
    rng = np.random.default_rng(8)
    theta = conjugate_swap(2)
    bound = min_average_concurrence(theta)
    for n in (4, 6, 9):
        r = np.linalg.qr(rng.normal(size=(n, 4)))[0]
        frame = stiefel_eigenframe(theta, r)
        assert frame.completeness_defect() < 1e-9
        ok, _ = is_eigenframe(theta, frame, tol=1e-7)
        assert ok
        assert average_concurrence(frame) >= bound - 1e-9


def test_stiefel_eigenframe_rejects_non_isometry():
    with pytest.raises(Exception):
        stiefel_eigenframe(conjugate_swap(2), np.ones((4, 4)))


# ------------------------------------------------- tetrahedral frames ---


def test_tetrahedron_directions_moments():
    dirs = tetrahedron_directions()
    defects = direction_moment_defects(dirs, np.ones(4))
    assert defects["weight_sum"] < 1e-12
    assert defects["first_moment"] < 1e-12
    assert defects["second_moment"] < 1e-12


def test_ejm_conjugation_spectrum_and_min_concurrence():
    for alpha in np.linspace(0.0, np.pi / 2, 7):
        theta = ejm_conjugation(alpha)
        # spectrum {−1,−1,−1,e^{2iα}} ≅ {1,1,1,−e^{2iα}} up to global phase
        assert spectra_equivalent(
            magic_spectrum(theta).values,
            np.array([1, 1, 1, -np.exp(2j * alpha)]), tol=1e-9)
        np.testing.assert_allclose(
            min_average_concurrence(theta),
            abs(3 - np.exp(2j * alpha)), atol=1e-9)
        np.testing.assert_allclose(
            min_average_concurrence(theta),
            2 * np.sqrt(1 + 3 * np.sin(alpha) ** 2), atol=1e-9)


def test_ejm_frame_eigenvectors_and_concurrence():
    for alpha in (0.0, 0.4, np.pi / 2):
        frame = ejm_frame(alpha)
        theta = ejm_conjugation(alpha)
        assert frame.completeness_defect() < 1e-9
        ok, phases = is_eigenframe(theta, frame, tol=1e-7)
        assert ok
        np.testing.assert_allclose(phases, np.ones(4), atol=1e-8)
        want = np.sqrt(1 + 3 * np.sin(alpha) ** 2) / 2
        for v in frame.vectors:
            w = v / np.linalg.norm(v)
            assert abs(concurrence(w) - want) < 1e-9


def test_ejm_alpha_zero_matches_conjugate_swap():
    # at α = 0 the tetrahedral frame consists of θ_swp eigenvectors
    frame = ejm_frame(0.0)
    ok, phases = is_eigenframe(conjugate_swap(2), frame, tol=1e-7)
    assert ok
    np.testing.assert_allclose(phases, np.ones(4), atol=1e-9)


def test_ejm_alpha_half_pi_bell_weight():
    # α = π/2: every frame vector is maximally entangled
    frame = ejm_frame(np.pi / 2)
    for v in frame.vectors:
        w = v / np.linalg.norm(v)
        assert abs(concurrence(w) - 1.0) < 1e-9
