"""Cross-module invariant suite.

Every check is a named, seeded, self-contained verification of a structural
property the library promises (spectral invariance, variational bounds,
measurability certificates, Fisher-information inequalities, canonical-form
round trips).  ``run_checks`` executes them deterministically for a given
seed; the CLI ``verify`` verb and the service expose the same registry.
"""
from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import metrology as met
from .conjugation import (
    Antiunitary,
    Conjugation,
    Frame,
    candidate_conjugation,
    collective_spin_flip,
    conjugate_swap,
    conjugation_invariance_defect,
    is_eigenframe,
    is_eigenvector,
    is_spin_flip_sum,
    product_conjugation,
    real_subspace_basis,
    wigner_canonical_form,
)
from .linalg import (
    DEFAULT_TOL,
    dagger,
    haar_unitary,
    kron_all,
    matrix_exp_i_hermitian,
    partial_trace_keep,
    permute_subsystems,
    random_real_orthogonal,
    random_symmetric_unitary,
    subsystem_permutation_matrix,
    takagi,
)
from .measurability import (
    VERDICT_PROD,
    prod_eigenbasis_search,
    sep_witness_check,
    total_normality,
)
from .twoqubit import (
    TAG_SEP_UNMEASURABLE,
    average_concurrence,
    canonical_local_unitaries,
    classify,
    concurrence,
    ejm_conjugation,
    ejm_frame,
    direction_moment_defects,
    hadamard_eigenframe,
    lu_equivalent,
    magic_representation,
    magic_spectrum,
    min_average_concurrence,
    spectra_equivalent,
    stiefel_eigenframe,
    tetrahedron_directions,
)

_CHECKS: dict[str, Callable[[np.random.Generator], None]] = {}


def _check(name: str):
    def register(fn):
        _CHECKS[name] = fn
        return fn
    return register


@dataclass(frozen=True)
class CheckResult:
    name: str
    ok: bool
    detail: str
    seconds: float


def available_checks() -> tuple[str, ...]:
    return tuple(_CHECKS)


def run_checks(names=None, *, seed: int = 0) -> list[CheckResult]:
    """Run the named checks (all by default), each on its own child seed."""
    if names is None:
        names = list(_CHECKS)
    unknown = [n for n in names if n not in _CHECKS]
    if unknown:
        raise KeyError(f"unknown invariant checks: {', '.join(unknown)}")
    results = []
    base = np.random.SeedSequence(seed)
    for name, child in zip(names, base.spawn(len(names))):
        rng = np.random.default_rng(child)
        start = time.perf_counter()
        try:
            _CHECKS[name](rng)
            results.append(CheckResult(name, True, "ok",
                                       time.perf_counter() - start))
        except AssertionError as exc:
            results.append(CheckResult(name, False, str(exc) or "assertion failed",
                                       time.perf_counter() - start))
        except Exception as exc:  # noqa: BLE001 - suite must report, not crash
            results.append(CheckResult(name, False, f"{type(exc).__name__}: {exc}",
                                       time.perf_counter() - start))
    return results


def _random_conjugation(dims, rng) -> Conjugation:
    d = 1
    for x in dims:
        d *= x
    return Conjugation(random_symmetric_unitary(d, rng), dims)


def _random_two_qubit(rng) -> Conjugation:
    return _random_conjugation((2, 2), rng)


# ---------------------------------------------------------------------------
# core structure
# ---------------------------------------------------------------------------

@_check("conjugation-squares-to-identity")
def _conjugation_squares(rng):
    for dims in [(2,), (3,), (2, 2), (2, 3), (4,), (2, 2, 2)]:
        theta = _random_conjugation(dims, rng)
        defect = float(np.max(np.abs(theta.squared_matrix() - np.eye(theta.dim))))
        assert defect < 1e-10, f"θ² − 1 defect {defect:.2e} on dims {dims}"
        assert theta.is_conjugation(), f"is_conjugation rejected dims {dims}"


@_check("takagi-reconstruction")
def _takagi_reconstruction(rng):
    for n in range(2, 9):
        g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        cases = [g + g.T, random_symmetric_unitary(n, rng)]
        w = haar_unitary(n, rng)
        cases.append(w @ w.T)  # fully degenerate Takagi values (all 1)
        for a in cases:
            res = takagi(a)
            scale = max(1.0, float(np.max(np.abs(a))))
            err = res.reconstruction_error(a)
            assert err < 1e-8 * scale, f"n={n}: reconstruction error {err:.2e}"
            assert np.all(np.diff(res.values) <= 1e-12), f"n={n}: values not sorted"
            assert np.all(res.values >= -1e-12), f"n={n}: negative Takagi value"
            unit = float(np.max(np.abs(dagger(res.v) @ res.v - np.eye(n))))
            assert unit < 1e-9, f"n={n}: V not unitary ({unit:.2e})"


@_check("matrix-exp-additivity")
def _exp_additivity(rng):
    for n in (2, 4, 6):
        g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        h = 0.5 * (g + dagger(g))
        s, t = rng.uniform(-2, 2, size=2)
        lhs = matrix_exp_i_hermitian(h, s) @ matrix_exp_i_hermitian(h, t)
        rhs = matrix_exp_i_hermitian(h, s + t)
        defect = float(np.max(np.abs(lhs - rhs)))
        assert defect < 1e-9, f"n={n}: e^{{isH}}e^{{itH}} ≠ e^{{i(s+t)H}} ({defect:.2e})"


@_check("partial-trace-consistency")
def _partial_trace(rng):
    dims = (2, 3, 2)
    d = 12
    a = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    b = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    x, y = rng.standard_normal(2)
    for p in (1, 2, 3):
        lin = partial_trace_keep(x * a + y * b, dims, p) \
            - x * partial_trace_keep(a, dims, p) - y * partial_trace_keep(b, dims, p)
        assert float(np.max(np.abs(lin))) < 1e-10, f"p={p}: linearity"
        tr = partial_trace_keep(a, dims, p).trace() - a.trace()
        assert abs(tr) < 1e-9, f"p={p}: trace compatibility"
    fs = [rng.standard_normal((k, k)) + 1j * rng.standard_normal((k, k))
          for k in dims]
    full = kron_all(fs)
    for p in (1, 2, 3):
        others = 1.0
        for q, f in enumerate(fs):
            if q != p - 1:
                others *= f.trace()
        got = partial_trace_keep(full, dims, p)
        assert float(np.max(np.abs(got - others * fs[p - 1]))) < 1e-9, \
            f"p={p}: product rule"


@_check("subsystem-permutation-roundtrip")
def _permutation(rng):
    dims = (2, 3, 2)
    perm = (2, 0, 1)
    v = rng.standard_normal(12) + 1j * rng.standard_normal(12)
    direct = permute_subsystems(v, dims, perm)
    pmat = subsystem_permutation_matrix(dims, perm)
    assert float(np.max(np.abs(direct - pmat @ v))) < 1e-12, "matrix mismatch"
    unit = float(np.max(np.abs(pmat @ pmat.T - np.eye(12))))
    assert unit < 1e-12, "permutation matrix not orthogonal"


# ---------------------------------------------------------------------------
# two-qubit spectra and frames
# ---------------------------------------------------------------------------

@_check("magic-spectrum-lu-invariance")
def _lu_invariance(rng):
    for _ in range(10):
        theta = _random_two_qubit(rng)
        w = np.kron(haar_unitary(2, rng), haar_unitary(2, rng))
        scrambled = Conjugation(w @ theta.matrix @ w.T, (2, 2))
        assert lu_equivalent(theta, scrambled), "LU-scrambled copy declared inequivalent"
        other = _random_two_qubit(rng)
        s1, s2 = magic_spectrum(theta), magic_spectrum(other)
        if not spectra_equivalent(s1, s2):
            assert not lu_equivalent(theta, other), \
                "spectrum-inequivalent pair declared equivalent"


@_check("canonical-local-unitaries-diagonalize")
def _canonical_diagonalization(rng):
    for _ in range(10):
        theta = _random_two_qubit(rng)
        target = magic_spectrum(theta).values
        u, v = canonical_local_unitaries(theta, target)
        w = np.kron(u, v)
        rotated = Conjugation(w @ theta.matrix @ w.T, (2, 2))
        rep = magic_representation(rotated)
        defect = float(np.max(np.abs(rep - np.diag(np.asarray(target)))))
        assert defect < 1e-8, f"diagonalization defect {defect:.2e}"


@_check("eigenframe-bound-and-hadamard")
def _theorem6(rng):
    for _ in range(6):
        theta = _random_two_qubit(rng)
        bound = min_average_concurrence(theta)
        had = hadamard_eigenframe(theta)
        ok, _ = is_eigenframe(theta, had, tol=1e-7)
        assert ok, "Hadamard frame is not an eigenframe"
        attain = average_concurrence(had)
        assert abs(attain - bound) < 1e-9, \
            f"Hadamard frame misses the bound ({attain:.12f} vs {bound:.12f})"
        for n in (4, 6, 8):
            g = rng.standard_normal((n, 4))
            q, _ = np.linalg.qr(g)
            frame = stiefel_eigenframe(theta, q[:, :4] if n > 4 else q)
            ave = average_concurrence(frame)
            assert ave >= bound - 1e-9, \
                f"random eigenframe beats the bound ({ave:.12f} < {bound:.12f})"


@_check("zero-min-concurrence-iff-measurable")
def _zero_iff_measurable(rng):
    for _ in range(6):
        theta = _random_two_qubit(rng)
        zero = min_average_concurrence(theta) < 1e-9
        tag = classify(theta).tag
        assert zero == (tag != TAG_SEP_UNMEASURABLE), \
            f"min C_ave ↔ tag mismatch (zero={zero}, tag={tag})"
        # explicitly measurable instance: antipodal spectrum (a, −a, b, −b)
        phases = rng.uniform(0, 2 * np.pi, size=2)
        o = random_real_orthogonal(4, rng)
        diag = np.exp(1j * np.array([phases[0], phases[0] + np.pi,
                                     phases[1], phases[1] + np.pi]))
        from .twoqubit import MAGIC
        u = MAGIC @ (o @ np.diag(diag) @ o.T) @ MAGIC.T
        meas = Conjugation(u, (2, 2))
        assert min_average_concurrence(meas) < 1e-9, "antipodal spectrum has min > 0"
        assert classify(meas).tag != TAG_SEP_UNMEASURABLE, \
            "antipodal spectrum classified Sep-unmeasurable"


@_check("eigenvector-phase-square")
def _eigenvector_phase(rng):
    theta = _random_two_qubit(rng)
    basis = real_subspace_basis(theta)
    coeffs = rng.standard_normal(4)
    psi = coeffs @ basis.vectors
    psi /= np.linalg.norm(psi)
    for _ in range(5):
        z = np.exp(1j * rng.uniform(0, 2 * np.pi))
        lam = is_eigenvector(theta, z * psi, tol=1e-8)
        assert lam is not None, "scaled real vector not recognized as eigenvector"
        assert abs(lam - np.conj(z) ** 2) < 1e-8, \
            f"eigenvalue {lam} differs from conj(z)² = {np.conj(z) ** 2}"


# ---------------------------------------------------------------------------
# measurability
# ---------------------------------------------------------------------------

_E2 = np.eye(2, dtype=complex)
_PLUS2 = np.array([1.0, 1.0], dtype=complex) / np.sqrt(2.0)
_MINUS2 = np.array([1.0, -1.0], dtype=complex) / np.sqrt(2.0)
_BASIS22 = [np.kron(_E2[0], _PLUS2), np.kron(_E2[0], _MINUS2),
            np.kron(_E2[1], _E2[0]), np.kron(_E2[1], _E2[1])]


@_check("hybrid-basis-always-prod-measurable")
def _basis22(rng):
    for _ in range(10):
        phases = tuple(rng.uniform(0, 2 * np.pi, size=4))
        theta = candidate_conjugation(_BASIS22, phases, (2, 2))
        assert classify(theta).tag != TAG_SEP_UNMEASURABLE, \
            f"phases {phases}: classified Sep-unmeasurable"
        report = prod_eigenbasis_search(theta, seed=int(rng.integers(1 << 31)))
        assert report.verdict == VERDICT_PROD, \
            f"phases {phases}: pipeline verdict {report.verdict}"
        assert report.witness is not None and \
            sep_witness_check(theta, report.witness), "witness fails verification"


@_check("product-congruence-passes-normality")
def _c3_necessity(rng):
    for dims in [(2, 2), (2, 3)]:
        d = dims[0] * dims[1]
        c = np.kron(haar_unitary(dims[0], rng), haar_unitary(dims[1], rng))
        phases = np.exp(1j * rng.uniform(0, 2 * np.pi, size=d))
        theta = Conjugation(c @ np.diag(phases) @ c.T, dims)
        ok, failed = total_normality(theta)
        assert ok, f"dims {dims}: product-diagonalizable θ failed {failed}"
        report = prod_eigenbasis_search(theta, seed=int(rng.integers(1 << 31)))
        assert report.verdict == VERDICT_PROD, \
            f"dims {dims}: verdict {report.verdict}"
        if dims == (2, 2):
            assert classify(theta).tag != TAG_SEP_UNMEASURABLE, \
                "product-diagonalizable 2-qubit θ classified Sep-unmeasurable"


@_check("nondegenerate-congruence-conclusive")
def _c4_sufficiency(rng):
    hits = 0
    for _ in range(8):
        c = np.kron(haar_unitary(2, rng), haar_unitary(3, rng))
        phases = np.exp(1j * rng.uniform(0, 2 * np.pi, size=6))
        theta = Conjugation(c @ np.diag(phases) @ c.T, (2, 3))
        report = prod_eigenbasis_search(theta, seed=int(rng.integers(1 << 31)))
        assert report.verdict == VERDICT_PROD, f"verdict {report.verdict}"
        if not report.degeneracy_flag and report.budget_used == 0:
            hits += 1
    assert hits >= 4, f"deterministic congruence succeeded only {hits}/8 times"


@_check("frame-completeness-weights")
def _frame_weights(rng):
    theta = _random_two_qubit(rng)
    for frame in (real_subspace_basis(theta), hadamard_eigenframe(theta)):
        assert frame.completeness_defect() < 1e-9, "frame incomplete"
        total = float(np.sum(frame.weights()))
        assert abs(total - frame.dim) < 1e-9, \
            f"frame weights sum {total} ≠ dimension {frame.dim}"


# ---------------------------------------------------------------------------
# elegant joint measurement family
# ---------------------------------------------------------------------------

@_check("tetrahedral-frame-family")
def _ejm_family(rng):
    dirs = tetrahedron_directions()
    for alpha in np.linspace(0.0, np.pi, 8):
        theta = ejm_conjugation(alpha)
        frame = ejm_frame(alpha)
        assert frame.completeness_defect() < 1e-9, f"α={alpha:.3f}: incomplete"
        ok, phases = is_eigenframe(theta, frame, tol=1e-8)
        assert ok, f"α={alpha:.3f}: not an eigenframe"
        expected = np.sqrt(1.0 + 3.0 * np.sin(alpha) ** 2)
        for v in frame.vectors:
            c = concurrence(v)
            assert abs(c - expected / 2.0) < 1e-9, \
                f"α={alpha:.3f}: member concurrence {c:.9f} ≠ {expected / 2:.9f}"
        mac = min_average_concurrence(theta)
        assert abs(mac - 2.0 * expected) < 1e-9, \
            f"α={alpha:.3f}: min C_ave {mac:.9f} ≠ {2 * expected:.9f}"
        norms = np.sqrt(frame.weights())
        moments = direction_moment_defects(dirs, norms)
        for key, val in moments.items():
            assert val < 1e-9, f"α={alpha:.3f}: {key} defect {val:.2e}"
    swap = conjugate_swap(2)
    fr0 = ejm_frame(0.0)
    ok, phases = is_eigenframe(swap, fr0, tol=1e-8)
    assert ok and all(abs(z - 1.0) < 1e-8 for z in phases), \
        "α=0 frame is not a fixed-point frame of the conjugate swap"


# ---------------------------------------------------------------------------
# metrology
# ---------------------------------------------------------------------------

def _random_model(d: int, n_params: int, rng) -> met.PureStateModel:
    gens = []
    for _ in range(n_params):
        g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        gens.append(0.5 * (g + dagger(g)))
    psi0 = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    psi0 /= np.linalg.norm(psi0)

    def state_fn(x):
        h = sum(x[a] * gens[a] for a in range(n_params))
        return matrix_exp_i_hermitian(h) @ psi0

    return met.PureStateModel(state_fn=state_fn, n_params=n_params, dims=(d,))


@_check("qcrb-inequality-psd")
def _qcrb_psd(rng):
    worst = 0.0
    for _ in range(200):
        d = int(rng.integers(2, 5))
        n_params = int(rng.integers(1, 3))
        model = _random_model(d, n_params, rng)
        frame = Frame(vectors=haar_unitary(d, rng).T.copy(), dims=(d,))
        povm = met.POVM.from_frame(frame)
        x = rng.uniform(-1.0, 1.0, size=n_params)
        pair = met.fisher_matrices(povm, model, x)
        low = float(np.min(np.linalg.eigvalsh(pair.gap)))
        worst = min(worst, low)
    assert worst > -DEFAULT_TOL.fisher_tol, \
        f"QCRB violated: min gap eigenvalue {worst:.2e}"


@_check("qfi-matches-fidelity-oracle")
def _qfi_oracle(rng):
    delta = 1e-4
    for _ in range(5):
        model = _random_model(4, 1, rng)
        x = rng.uniform(-1.0, 1.0, size=1)
        fq = float(met.quantum_fisher_pure(model, x)[0, 0])
        overlap = abs(np.vdot(model.state(x), model.state(x + delta)))
        oracle = 8.0 * (1.0 - overlap) / delta ** 2
        assert abs(fq - oracle) < 1e-3 * max(1.0, abs(fq)), \
            f"QFI {fq:.6f} vs fidelity oracle {oracle:.6f}"


@_check("anticommutation-certificates")
def _certificates(rng):
    for field_dim, n_nodes in [(1, 1), (1, 3), (2, 2), (3, 2), (3, 4)]:
        alpha = float(rng.uniform(0, np.pi))
        net = met.magnetometry_network_conjugation(field_dim, n_nodes, alpha=alpha)
        cert = met.anticommutation_certificate(net, n_nodes, field_dim)
        for axis, defect in cert.items():
            assert defect < 1e-9, \
                f"field_dim={field_dim}, N={n_nodes}, axis {axis}: defect {defect:.2e}"


@_check("evolution-conjugation-invariance")
def _evolution_invariance(rng):
    for field_dim, n_nodes in [(1, 2), (1, 4), (3, 2), (3, 4)]:
        alpha = float(rng.uniform(0, np.pi))
        net = met.magnetometry_network_conjugation(field_dim, n_nodes, alpha=alpha)
        axes = met.field_axes(field_dim)
        phi = rng.uniform(-1.0, 1.0, size=len(axes))
        h = sum(phi[a] * met.collective_generator(n_nodes, ax)
                for a, ax in enumerate(axes))
        u = matrix_exp_i_hermitian(h)
        defect = conjugation_invariance_defect(net, u)
        assert defect < 1e-9, \
            f"field_dim={field_dim}, N={n_nodes}: ΘÛΘ − Û defect {defect:.2e}"


@_check("protected-frame-saturates")
def _protected_saturation(rng):
    model = met.magnetometry_model(1, 2)
    blocks = [met.magnetometry_conjugation(1)] * 2
    povm = met.POVM.from_frame(met.product_protected_frame(blocks))
    for _ in range(5):
        x = rng.uniform(0.02, 0.35, size=1)
        gap, sat = met.qcrb_saturation_gap(povm, model, x)
        assert sat, f"1D N=2 gap {np.max(np.abs(gap)):.2e} at {x}"
    model3 = met.magnetometry_model(3, 2, "superposed", weights=(1.0, 0.4, 0.2))
    alpha = float(rng.uniform(0, np.pi))
    povm3 = met.POVM.from_frame(met.protected_frame(met.magnetometry_conjugation(3, alpha)))
    for _ in range(4):
        x = rng.uniform(0.02, 0.35, size=3)
        gap, sat = met.qcrb_saturation_gap(povm3, model3, x)
        assert sat, f"3D N=2 α={alpha:.3f} gap {np.max(np.abs(gap)):.2e} at {x}"


@_check("antiparallel-doubling-and-saturation")
def _antiparallel(rng):
    theta = Conjugation(np.kron(random_symmetric_unitary(2, rng),
                                random_symmetric_unitary(2, rng)), (2, 2))
    base = _random_model(4, 2, rng)
    base = met.PureStateModel(state_fn=base.state_fn, n_params=2, dims=(2, 2))
    ap = met.antiparallel_model(base, theta)
    povm = met.POVM.from_frame(ap.node_product_frame())
    for _ in range(4):
        x = rng.uniform(-1.0, 1.0, size=2)
        f_base = met.quantum_fisher_pure(base, x)
        f_doubled = met.quantum_fisher_pure(ap.model, x)
        defect = float(np.max(np.abs(f_doubled - 2.0 * f_base)))
        assert defect < 1e-6, f"doubling defect {defect:.2e} at {x}"
        assert is_eigenvector(ap.symmetry, ap.model.state(x), tol=1e-7) is not None, \
            "doubled state is not a symmetry eigenvector"
        gap, sat = met.qcrb_saturation_gap(povm, ap.model, x)
        assert sat, f"cross-node frame gap {np.max(np.abs(gap)):.2e} at {x}"


# ---------------------------------------------------------------------------
# antiunitary canonical forms
# ---------------------------------------------------------------------------

def _random_spin_flip_sum(d: int, rng) -> np.ndarray:
    if d % 2 != 0:
        raise ValueError("spin-flip sums need even dimension")
    isy = np.array([[0.0, 1.0], [-1.0, 0.0]])
    blocks = np.zeros((d, d), dtype=complex)
    for k in range(d // 2):
        blocks[2 * k:2 * k + 2, 2 * k:2 * k + 2] = isy
    w = haar_unitary(d, rng)
    return w @ blocks @ w.T


@_check("tensor-conjugation-classification")
def _theorem11(rng):
    for _ in range(6):
        da = int(rng.choice([2, 3, 4])); db = int(rng.choice([2, 3, 4]))
        a = Antiunitary(random_symmetric_unitary(da, rng), (da,))
        b = Antiunitary(random_symmetric_unitary(db, rng), (db,))
        assert a.tensor(b).is_conjugation(), "conj ⊗ conj is not a conjugation"
        ea = 2 * int(rng.choice([1, 2, 3])); eb = 2 * int(rng.choice([1, 2]))
        fa = Antiunitary(_random_spin_flip_sum(ea, rng), (ea,))
        fb = Antiunitary(_random_spin_flip_sum(eb, rng), (eb,))
        assert is_spin_flip_sum(fa) and is_spin_flip_sum(fb), \
            "generator failed to produce spin-flip sums"
        assert fa.tensor(fb).is_conjugation(), "flip-sum ⊗ flip-sum is not a conjugation"
        assert not a.tensor(fb).is_conjugation(), "conj ⊗ flip-sum passed as conjugation"
        assert not fa.tensor(b).is_conjugation(), "flip-sum ⊗ conj passed as conjugation"
        # a factor that is neither: the square has a generic (non ±1) spectrum
        general = Antiunitary(haar_unitary(ea, rng), (ea,))
        sq = general.squared_matrix()
        if np.max(np.abs(sq - np.eye(ea))) > 1e-6 and np.max(np.abs(sq + np.eye(ea))) > 1e-6:
            assert not general.tensor(b).is_conjugation(), \
                "generic ⊗ conj passed as conjugation"
            assert not general.tensor(fb).is_conjugation(), \
                "generic ⊗ flip-sum passed as conjugation"


@_check("odd-flip-sum-triple-never-conjugation")
def _corollary5(rng):
    for _ in range(4):
        dims = [2 * int(rng.choice([1, 2])) for _ in range(3)]
        ops = [Antiunitary(_random_spin_flip_sum(d, rng), (d,)) for d in dims]
        triple = ops[0].tensor(ops[1]).tensor(ops[2])
        assert not triple.is_conjugation(), \
            "triple tensor of flip-sums squared to +1"
        sq = triple.squared_matrix()
        assert float(np.max(np.abs(sq + np.eye(triple.dim)))) < 1e-9, \
            "triple tensor square is not −1"


@_check("wigner-form-roundtrip")
def _wigner_roundtrip(rng):
    for d, kind in [(3, "conj"), (4, "conj"), (4, "flip"), (6, "flip"), (5, "general")]:
        if kind == "conj":
            u = random_symmetric_unitary(d, rng)
        elif kind == "flip":
            u = _random_spin_flip_sum(d, rng)
        else:
            # antiunitary with mixed Wigner blocks: 1 ⊕ A_ω
            omega = np.exp(1j * rng.uniform(0.4, 2.7))
            canon = np.eye(d, dtype=complex)
            canon[d - 2:, d - 2:] = np.array([[0.0, 1.0], [omega, 0.0]])
            w = haar_unitary(d, rng)
            u = w @ canon @ w.T
        op = Antiunitary(u, (d,))
        form = wigner_canonical_form(op)
        err = form.reconstruction_error(u)
        assert err < 1e-8, f"d={d} ({kind}): reconstruction error {err:.2e}"
        if kind == "conj":
            assert form.identity_block_size == d, "conjugation has non-identity blocks"
        if kind == "flip":
            assert form.identity_block_size == 0 and \
                all(abs(om + 1.0) < 1e-8 for om in form.omegas), \
                "flip sum has non-(−1) blocks"


@_check("reference-conjugations-table")
def _table1(rng):
    del rng
    expected = {
        "collective_spin_flip": (np.array([1, 1, 1, 1], dtype=complex),
                                 TAG_SEP_UNMEASURABLE),
        "conjugate_swap": (np.array([1, -1, -1, -1], dtype=complex),
                           TAG_SEP_UNMEASURABLE),
        "product": (np.array([1, -1, -1, 1], dtype=complex), None),
    }
    builders = {
        "collective_spin_flip": collective_spin_flip(),
        "conjugate_swap": conjugate_swap(2),
        "product": product_conjugation([np.eye(2), np.eye(2)]),
    }
    for name, (target, tag) in expected.items():
        theta = builders[name]
        spec = magic_spectrum(theta)
        assert spectra_equivalent(spec, target, tol=1e-9), f"{name}: wrong spectrum"
        got = classify(theta).tag
        if tag is None:
            assert got != TAG_SEP_UNMEASURABLE, f"{name}: tagged Sep-unmeasurable"
        else:
            assert got == tag, f"{name}: tag {got} ≠ {tag}"
