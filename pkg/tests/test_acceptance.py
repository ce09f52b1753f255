"""Acceptance gate: end-to-end checks of the quantitative claims the library
is built around, each at its stated tolerance and runtime budget.  Every
criterion prints one [PASS]/[FAIL] line on the real terminal."""

import time
from contextlib import contextmanager

import numpy as np
import pytest

from conjlab import (
    POVM,
    Antiunitary,
    Conjugation,
    antiparallel_model,
    average_concurrence,
    candidate_conjugation,
    canonical_local_unitaries,
    classify,
    collective_spin_flip,
    concurrence,
    conjugate_swap,
    dagger,
    ejm_conjugation,
    ejm_frame,
    fisher_matrices,
    hadamard_eigenframe,
    haar_unitary,
    is_eigenframe,
    kron_all,
    lu_equivalent,
    magic_frame,
    magic_matrix,
    magic_spectrum,
    magnetometry_model,
    min_average_concurrence,
    prod_eigenbasis_search,
    product_protected_frame,
    qcrb_saturation_gap,
    quantum_fisher_pure,
    random_symmetric_unitary,
    sep_witness_check,
    spectra_equivalent,
    stiefel_eigenframe,
    tetrahedron_directions,
    total_normality,
    wigner_canonical_form,
)
from conjlab.twoqubit import direction_moment_defects
from helpers import random_conjugation, random_local_scramble

SQ2 = np.sqrt(2.0)
SX = np.array([[0, 1], [1, 0]], dtype=complex)


@pytest.fixture()
def criterion(capsys):
    """Print one [PASS]/[FAIL] line per criterion on the real terminal."""

    @contextmanager
    def run(num, description, budget_seconds=None):
        start = time.perf_counter()
        try:
            yield
        except BaseException:
            with capsys.disabled():
                print(f"[FAIL] criterion {num}: {description}")
            raise
        elapsed = time.perf_counter() - start
        if budget_seconds is not None and elapsed >= budget_seconds:
            with capsys.disabled():
                print(f"[FAIL] criterion {num}: {description} "
                      f"(runtime {elapsed:.2f}s over {budget_seconds}s budget)")
            raise AssertionError(
                f"criterion {num} runtime {elapsed:.2f}s exceeds "
                f"{budget_seconds}s")
        with capsys.disabled():
            print(f"[PASS] criterion {num}: {description} ({elapsed:.2f}s)")

    return run


def _match_multiset(values, targets, tol):
    """Each target matched by exactly one computed value within tol."""
    values = list(values)
    for t in targets:
        hit = min(range(len(values)), key=lambda k: abs(values[k] - t))
        assert abs(values[hit] - t) < tol, (values, targets)
        values.pop(hit)
    assert not values


def test_criterion_1_reference_table(criterion):
    with criterion(1, "reference spectra and measurability tags", 1.0):
        cases = [
            (collective_spin_flip(), [1, 1, 1, 1], "SepUnmeasurable"),
            (conjugate_swap(2), [1, -1, -1, -1], "SepUnmeasurable"),
            (Conjugation(np.eye(4), (2, 2)), [1, -1, -1, 1], "Product"),
        ]
        for theta, spectrum, tag in cases:
            got = magic_spectrum(theta).values
            _match_multiset(got, spectrum, 1e-9)
            assert classify(theta).tag == tag
        # display tags: Product ⇒ Prod-measurable, else Sep-unmeasurable
        from conjlab.io import table1_rows
        tags = [r["tag"] for r in table1_rows()]
        assert tags.count("Sep-unmeasurable") == 2
        assert tags.count("Prod-measurable") == 1


def test_criterion_2_canonical_locals_and_lu_equivalence(criterion):
    rng = np.random.default_rng(2024)
    m = magic_matrix()
    with criterion(2, "canonical local unitaries + LU equivalence x500", 30.0):
        previous = None
        for _ in range(500):
            theta = random_conjugation((2, 2), rng)
            target = magic_spectrum(theta).values
            u_hat, v = canonical_local_unitaries(theta, target)
            c = kron_all([u_hat, v])
            mu = dagger(m) @ (c @ theta.matrix @ c.T) @ np.conj(m)
            assert np.max(np.abs(mu - np.diag(target))) < 1e-8
            scrambled = random_local_scramble(theta, rng)
            assert lu_equivalent(theta, scrambled, tol=1e-7)
            if previous is not None and not spectra_equivalent(
                    target, magic_spectrum(previous).values, tol=1e-6):
                assert not lu_equivalent(theta, previous, tol=1e-7)
            previous = theta


def test_criterion_3_concurrence_landscape_and_eigenframe_bound(criterion):
    m = magic_matrix()
    with criterion(3, "minimum-concurrence landscape + eigenframe bound"):
        # 64×64 grid of spectra {1, 1, e^{iφ₂}, e^{iφ₃}}
        grid = 2 * np.pi * np.arange(64) / 64
        for p2 in grid:
            for p3 in grid:
                spec = np.array([1, 1, np.exp(1j * p2), np.exp(1j * p3)])
                theta = Conjugation(m @ np.diag(spec) @ m.T, (2, 2))
                val = min_average_concurrence(theta)
                expect = abs(2 + np.exp(1j * p2) + np.exp(1j * p3))
                assert abs(val - expect) < 1e-12
                if abs(p2 - np.pi) < 1e-12 and abs(p3 - np.pi) < 1e-12:
                    assert val < 1e-12
                else:
                    assert val > 1e-3  # zero is grid-resolved at (π, π)
        # randomized eigenframes never beat the bound; Hadamard attains it
        rng = np.random.default_rng(3033)
        for _ in range(10):
            theta = random_conjugation((2, 2), rng)
            bound = min_average_concurrence(theta)
            had = average_concurrence(hadamard_eigenframe(theta))
            assert abs(had - bound) < 1e-9
            for _ in range(500):
                n = int(rng.integers(4, 9))
                r = np.linalg.qr(rng.normal(size=(n, 4)))[0]
                frame = stiefel_eigenframe(theta, r)
                assert average_concurrence(frame) >= bound - 1e-9


def test_criterion_4_measurability_hierarchy(criterion):
    plus = np.array([1, 1], dtype=complex) / SQ2
    minus = np.array([1, -1], dtype=complex) / SQ2
    e2 = np.eye(2, dtype=complex)
    e3 = np.eye(3, dtype=complex)
    basis32 = np.array([
        np.kron(e3[0], plus), np.kron(e3[0], minus),
        np.kron(e3[1], e2[0]), np.kron(e3[1], e2[1]),
        np.kron(e3[2], e2[0]), np.kron(e3[2], e2[1]),
    ])
    basis22 = np.array([
        np.kron(e2[0], plus), np.kron(e2[0], minus),
        np.kron(e2[1], e2[0]), np.kron(e2[1], e2[1]),
    ])
    with criterion(4, "hybrid-basis measurability hierarchy", 60.0):
        # 3×2 instance with phases (0, π, 0, 0, 0, π/2): fails total
        # normality yet its defining basis is a separable eigenframe.
        phases = np.array([0, np.pi, 0, 0, 0, np.pi / 2])
        witness_theta = candidate_conjugation(basis32, phases, (3, 2))
        ok, reason = total_normality(witness_theta)
        assert not ok and reason == "NonNormalX"
        report = prod_eigenbasis_search(witness_theta, seed=4)
        assert report.verdict == "NotProdMeasurable"
        from conjlab import Frame
        frame = Frame(basis32, (3, 2))
        assert sep_witness_check(witness_theta, frame)
        # 2×2 family: always product-measurable, any phases
        rng = np.random.default_rng(4044)
        for _ in range(200):
            theta = candidate_conjugation(
                basis22, rng.uniform(0, 2 * np.pi, size=4), (2, 2))
            report = prod_eigenbasis_search(theta, seed=5)
            assert report.verdict == "ProdMeasurable"
            assert classify(theta).tag in ("ProdMeasurable", "Product")


def test_criterion_5_tetrahedral_measurement_family(criterion):
    with criterion(5, "tetrahedral eigenframe family"):
        frame = ejm_frame(0.0, tetrahedron_directions())
        assert frame.completeness_defect() < 1e-9
        ok, phases = is_eigenframe(conjugate_swap(2), frame, tol=1e-7)
        assert ok
        np.testing.assert_allclose(phases, np.ones(4), atol=1e-9)
        for v in frame.vectors:
            w = v / np.linalg.norm(v)
            assert abs(concurrence(w) - 0.5) < 1e-9
        defects = direction_moment_defects(
            tetrahedron_directions(), np.ones(4))
        assert max(defects.values()) < 1e-9
        for alpha in np.linspace(0.0, np.pi, 32):
            want = 2.0 * np.sqrt(1.0 + 3.0 * np.sin(alpha) ** 2)
            got = min_average_concurrence(ejm_conjugation(alpha))
            assert abs(got - want) < 1e-9


def test_criterion_6_qcrb_saturation(criterion):
    rng = np.random.default_rng(6066)
    with criterion(6, "conjugation-protected frames saturate the QCRB", 120.0):
        # 1D field, GHZ_Z probes, product frame of (σ_X·conj)^{⊗N}
        for n in (2, 3, 4):
            model = magnetometry_model(1, n)
            frame = product_protected_frame([Conjugation(SX)] * n)
            povm = POVM.from_frame(frame)
            for _ in range(20):
                x = np.array([rng.uniform(0.02, 0.35)])
                fm = fisher_matrices(povm, model, x)
                assert abs(fm.quantum[0, 0] - 4.0 * n * n) < 1e-6
                assert abs(fm.classical[0, 0] - 4.0 * n * n) < 1e-6
        # 3D field, two qubits, superposed initial state, magic frame
        model = magnetometry_model(3, 2, initial="superposed")
        povm = POVM.from_frame(magic_frame(1))
        for _ in range(10):
            x = rng.uniform(0.05, 0.30, size=3)
            gap, saturated = qcrb_saturation_gap(povm, model, x)
            assert saturated
            assert np.max(np.abs(gap)) < 1e-6


def test_criterion_7_antiparallel_doubling(criterion):
    rng = np.random.default_rng(7077)
    with criterion(7, "antiparallel-pair Fisher doubling and saturation"):
        theta = Conjugation(np.kron(random_symmetric_unitary(2, rng),
                                    random_symmetric_unitary(2, rng)), (2, 2))
        base = magnetometry_model(1, 2)
        anti = antiparallel_model(base, theta)
        frame = anti.node_product_frame()
        povm = POVM.from_frame(frame)
        for _ in range(10):
            x = np.array([rng.uniform(0.02, 0.35)])
            fq_base = quantum_fisher_pure(base, x)
            fq_doubled = quantum_fisher_pure(anti.model, x)
            assert np.max(np.abs(fq_doubled - 2.0 * fq_base)) < 1e-6
            gap, saturated = qcrb_saturation_gap(povm, anti.model, x)
            assert saturated
            assert np.max(np.abs(gap)) < 1e-6


def _random_flip_sum(d, rng):
    assert d % 2 == 0
    j = np.zeros((d, d))
    for i in range(d // 2):
        j[2 * i, 2 * i + 1] = 1.0
        j[2 * i + 1, 2 * i] = -1.0
    w = haar_unitary(d, rng)
    return w @ j @ w.T


def _random_generic(d, rng):
    """Antiunitary with a non-scalar square: neither a conjugation (θ² = 1)
    nor a spin-flip sum (θ² = −1), and no tensor partner can repair it."""
    while True:
        u = haar_unitary(d, rng)
        eig = np.linalg.eigvals(u @ u.conj())
        if np.max(np.abs(eig - eig[0])) > 0.1:
            return u


def test_criterion_8_tensor_conjugation_rules(criterion):
    rng = np.random.default_rng(8088)
    with criterion(8, "tensor-factor conjugation rules + canonical form"):
        even = [2, 4, 6]
        alldims = [2, 3, 4, 5, 6]
        for k in range(200):
            case = k % 3
            if case == 0:  # flip-sum ⊗ flip-sum ⇒ conjugation
                d1, d2 = rng.choice(even, size=2)
                a = _random_flip_sum(int(d1), rng)
                b = _random_flip_sum(int(d2), rng)
                op = Antiunitary(np.kron(a, b), (int(d1), int(d2)))
                assert op.is_conjugation()
            elif case == 1:  # flip-sum ⊗ generic ⇒ not a conjugation
                d1 = int(rng.choice(even))
                d2 = int(rng.choice(alldims))
                a = _random_flip_sum(d1, rng)
                b = _random_generic(d2, rng)
                op = Antiunitary(np.kron(a, b), (d1, d2))
                assert not op.is_conjugation()
            else:  # generic ⊗ generic (non-matching squares) ⇒ not
                d1 = int(rng.choice(alldims))
                d2 = int(rng.choice(alldims))
                a = _random_generic(d1, rng)
                b = _random_generic(d2, rng)
                op = Antiunitary(np.kron(a, b), (d1, d2))
                assert not op.is_conjugation()
            if k % 10 == 0:
                form = wigner_canonical_form(op)
                assert form.reconstruction_error(op.matrix) < 1e-8
        # canonical-form reconstruction across the standalone families too
        for d in (3, 4, 5):
            theta = random_conjugation((d,), rng)
            assert wigner_canonical_form(theta).reconstruction_error(
                theta.matrix) < 1e-8
        for d in (2, 4, 6):
            op = Antiunitary(_random_flip_sum(d, rng))
            assert wigner_canonical_form(op).reconstruction_error(
                op.matrix) < 1e-8
