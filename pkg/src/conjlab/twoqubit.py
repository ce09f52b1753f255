"""Two-qubit conjugations: magic-basis spectra and their consequences.

The magic basis μ₁ = Ψ₊, μ₂ = iΨ₋, μ₃ = iΦ₊, μ₄ = Φ₋ (with Ψ± = (|00⟩±|11⟩)/√2
and Φ± = (|01⟩±|10⟩)/√2) turns every two-qubit conjugation into a symmetric
unitary matrix [θ]^μ = M†[θ]^ι M*.  Its eigenvalue multiset, up to one global
phase, is a complete invariant for local-unitary equivalence, decides whether
the conjugation admits a product eigenbasis, and its trace modulus equals the
minimum average concurrence over eigenframes.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations

import numpy as np

from .conjugation import Antiunitary, Conjugation, Frame, ISY, is_eigenvector
from .errors import DimensionError, SpectrumError, SymmetryError
from .linalg import DEFAULT_TOL, as_complex, dagger, joint_eigh_commuting

_SQRT2 = np.sqrt(2.0)

#: Columns are the magic-basis vectors in computational coordinates.
MAGIC = np.array(
    [[1.0, 1.0j, 0.0, 0.0],
     [0.0, 0.0, 1.0j, 1.0],
     [0.0, 0.0, 1.0j, -1.0],
     [1.0, -1.0j, 0.0, 0.0]], dtype=complex) / _SQRT2

#: Real 4×4 Hadamard matrix (entries ±1), used for balanced eigenframes.
HADAMARD4 = np.array(
    [[1, 1, 1, 1],
     [1, -1, 1, -1],
     [1, 1, -1, -1],
     [1, -1, -1, 1]], dtype=float)

#: Matrix part of the two-qubit collective spin flip, (iσ_Y)⊗(iσ_Y).
SPIN_FLIP_2 = np.kron(ISY, ISY).real

TAG_PRODUCT = "Product"
TAG_PROD_MEASURABLE = "ProdMeasurable"
TAG_SEP_UNMEASURABLE = "SepUnmeasurable"


def magic_matrix() -> np.ndarray:
    return MAGIC.copy()


def _require_two_qubits(theta: Antiunitary) -> None:
    if theta.dims != (2, 2):
        raise DimensionError(f"two-qubit operation needs dims (2, 2), got {theta.dims}")


def magic_representation(theta: Antiunitary) -> np.ndarray:
    """[θ]^μ = M† [θ]^ι M* (congruence transform of the antiunitary matrix part)."""
    _require_two_qubits(theta)
    return dagger(MAGIC) @ theta.matrix @ MAGIC.conj()


@dataclass(frozen=True)
class MagicSpectrum:
    """Eigenvalue multiset of [θ]^μ; equality is up to one global phase."""

    values: tuple[complex, complex, complex, complex]

    def canonical_phases(self) -> tuple[float, ...]:
        """Deterministic representative: rotate the multiset so some value is 1,
        choosing the rotation with the lexicographically smallest ascending
        phase list in [0, 2π)."""
        best = None
        vals = np.array(self.values)
        for z in vals:
            rotated = vals * (np.conj(z) / abs(z))
            phases = np.sort(np.mod(np.angle(rotated), 2.0 * np.pi))
            phases[2.0 * np.pi - phases < 1e-12] = 0.0
            phases = np.sort(phases)
            key = tuple(phases)
            if best is None or key < best:
                best = key
        return best

    def trace(self) -> complex:
        return complex(np.sum(np.array(self.values)))


def magic_spectrum(theta: Conjugation, *,
                   degeneracy_tol: float = DEFAULT_TOL.degeneracy_tol) -> MagicSpectrum:
    """Magic-basis spectrum of a two-qubit conjugation."""
    _, z = _magic_diagonalization(theta, degeneracy_tol)
    return MagicSpectrum(values=tuple(complex(v) for v in z))


def _magic_diagonalization(theta: Conjugation, degeneracy_tol: float):
    """Real orthogonal O_cols and unimodular z with O_colsᵀ [θ]^μ O_cols = diag(z).

    [θ]^μ is symmetric unitary, so its real and imaginary parts commute and
    share a real orthogonal eigenbasis.
    """
    s = magic_representation(theta)
    if not np.max(np.abs(s - s.T)) < 1e-8:
        raise SymmetryError("magic representation of a conjugation must be symmetric")
    o_cols = joint_eigh_commuting(s.real.copy(), s.imag.copy(), degeneracy_tol)
    z = np.diag(o_cols.T @ s @ o_cols).copy()
    z = z / np.abs(z)
    return o_cols, z


def _multiset_match(a: np.ndarray, b: np.ndarray) -> float:
    """Smallest max-distance pairing between two 4-value multisets."""
    best = np.inf
    idx = range(len(a))
    for perm in permutations(idx):
        d = max(abs(a[p] - b[j]) for j, p in enumerate(perm))
        if d < best:
            best = d
    return best


def spectra_equivalent(s1, s2, *, tol: float = DEFAULT_TOL.eq_tol) -> bool:
    """Equality of spectra up to one global phase (multiset matching)."""
    a = np.array(s1.values if isinstance(s1, MagicSpectrum) else s1, dtype=complex)
    b = np.array(s2.values if isinstance(s2, MagicSpectrum) else s2, dtype=complex)
    if a.shape != b.shape:
        raise DimensionError("spectra must have equal cardinality")
    for za in a:
        for zb in b:
            r = zb / za
            r /= abs(r)
            if _multiset_match(r * a, b) < tol:
                return True
    return False


def lu_equivalent(t1: Conjugation, t2: Conjugation, *,
                  tol: float = DEFAULT_TOL.eq_tol,
                  degeneracy_tol: float = DEFAULT_TOL.degeneracy_tol) -> bool:
    """Local-unitary equivalence of two-qubit conjugations (complete invariant)."""
    return spectra_equivalent(magic_spectrum(t1, degeneracy_tol=degeneracy_tol),
                              magic_spectrum(t2, degeneracy_tol=degeneracy_tol), tol=tol)


def so4_to_su2_pair(o, *, tol: float = DEFAULT_TOL.eq_tol):
    """Split O ∈ SO(4) into (U, V) ∈ SU(2)×SU(2) with M O M† = U ⊗ V.

    Rejects determinant −1 input: O(4)\\SO(4) corresponds to local unitaries
    composed with the swap, not to U⊗V.
    """
    o = as_complex(o, "orthogonal matrix")
    if o.shape != (4, 4):
        raise DimensionError("so4_to_su2_pair needs a 4×4 matrix")
    if np.max(np.abs(o.imag)) > tol or np.max(np.abs(o.real @ o.real.T - np.eye(4))) > 1e-8:
        raise SymmetryError("input must be real orthogonal")
    det = np.linalg.det(o.real)
    if det < 0:
        raise SymmetryError("determinant −1 orthogonal matrices are not in the SU(2)⊗SU(2) image")
    p = MAGIC @ o @ dagger(MAGIC)
    # p = u ⊗ v: read v off the largest 2×2 block, then project u entrywise
    blocks = [(i, j, p[2 * i:2 * i + 2, 2 * j:2 * j + 2]) for i in range(2) for j in range(2)]
    _, _, b = max(blocks, key=lambda t: np.linalg.norm(t[2]))
    detb = np.linalg.det(b)
    if abs(detb) < 1e-12:
        raise SymmetryError("degenerate block in SU(2)⊗SU(2) factor extraction")
    v = b / np.sqrt(detb)
    u = np.zeros((2, 2), dtype=complex)
    for i in range(2):
        for j in range(2):
            u[i, j] = np.trace(dagger(v) @ p[2 * i:2 * i + 2, 2 * j:2 * j + 2]) / 2.0
    detu = np.linalg.det(u)
    u = u / np.sqrt(detu)
    if np.max(np.abs(np.kron(u, v) - p)) > max(100 * tol, 1e-7):
        raise SymmetryError("matrix is not of the form M (U⊗V) M†")
    # fix the (−u, −v) ambiguity deterministically
    k = int(np.argmax(np.abs(u)))
    z = u.flat[k]
    if z.real < 0 or (abs(z.real) < 1e-14 and z.imag < 0):
        u, v = -u, -v
    return u, v


def canonical_local_unitaries(theta: Conjugation, target, *,
                              tol: float = DEFAULT_TOL.eq_tol,
                              degeneracy_tol: float = DEFAULT_TOL.degeneracy_tol,
                              match_tol: float | None = None):
    """Local unitaries (U, V) with [(U⊗V) θ (U⊗V)†]^μ = diag(target).

    ``target`` must be a 4-value spectrum equivalent (up to one global phase)
    to the magic-basis spectrum of θ; otherwise SpectrumError is raised.
    Constructive: diagonalize [θ]^μ with a real orthogonal matrix, permute,
    repair the determinant with diag(−1,1,1,1), split SO(4) → SU(2)⊗SU(2),
    and absorb the half global phase into U.
    """
    if match_tol is None:
        match_tol = degeneracy_tol
    target = np.asarray(target, dtype=complex)
    if target.shape != (4,):
        raise DimensionError("target spectrum must have exactly 4 values")
    if np.max(np.abs(np.abs(target) - 1.0)) > 1e-6:
        raise SpectrumError("target spectrum values must be unimodular")

    o_cols, z = _magic_diagonalization(theta, degeneracy_tol)

    found = None
    for zk in z:
        for tl in target:
            r = tl / zk
            r /= abs(r)
            rotated = r * z
            for perm in permutations(range(4)):
                if all(abs(rotated[perm[j]] - target[j]) <= match_tol for j in range(4)):
                    found = (r, perm)
                    break
            if found:
                break
        if found:
            break
    if not found:
        raise SpectrumError("target spectrum is not equivalent to the conjugation's spectrum")
    r, perm = found

    o = o_cols.T  # o @ s @ o.T = diag(z)
    p = np.zeros((4, 4))
    for j in range(4):
        p[j, perm[j]] = 1.0
    o_prime = p @ o  # rows reordered: diag entries now z[perm[j]]
    if np.linalg.det(o_prime) < 0:
        o_prime = np.diag([-1.0, 1.0, 1.0, 1.0]) @ o_prime
    u, v = so4_to_su2_pair(o_prime, tol=tol)
    u_hat = np.exp(0.5j * np.angle(r)) * u
    return u_hat, v


@dataclass(frozen=True)
class TwoQubitClass:
    """Measurability class of a two-qubit conjugation with optional witness."""

    tag: str
    spectrum: MagicSpectrum
    witness: Frame | None
    witness_phases: tuple[complex, ...] | None


def _antipodal_pairing(z: np.ndarray, tol: float):
    """Split 4 unimodular values into two antipodal pairs, or None."""
    pairings = (((0, 1), (2, 3)), ((0, 2), (1, 3)), ((0, 3), (1, 2)))
    best = None
    for (i, j), (k, l) in pairings:
        defect = max(abs(z[i] + z[j]), abs(z[k] + z[l]))
        if defect <= tol and (best is None or defect < best[0]):
            best = (defect, ((i, j), (k, l)))
    return None if best is None else best[1]


def classify(theta: Conjugation, *, tol: float = DEFAULT_TOL.eq_tol,
             degeneracy_tol: float = DEFAULT_TOL.degeneracy_tol) -> TwoQubitClass:
    """Classify a two-qubit conjugation by its magic-basis spectrum.

    Product           ⟺ spectrum ~ {1, 1, −1, −1}
    ProdMeasurable    ⟺ spectrum ~ {1, −1, z, −z}  (two antipodal pairs)
    SepUnmeasurable   otherwise (no separable eigenbasis exists at all).

    For the measurable tags a product eigenbasis witness is constructed from
    the canonical local unitaries: ordering the spectrum as (a, −a, b, −b)
    makes [θ']^ι = diag(a, −b, −b, a), so the rotated computational basis is
    a product eigenbasis.
    """
    spec = magic_spectrum(theta, degeneracy_tol=degeneracy_tol)
    z = np.array(spec.values)
    pairing = _antipodal_pairing(z, degeneracy_tol)
    if pairing is None:
        return TwoQubitClass(TAG_SEP_UNMEASURABLE, spec, None, None)
    (i, j), (k, l) = pairing
    a = (z[i] - z[j]) / 2.0
    a /= abs(a)
    b = (z[k] - z[l]) / 2.0
    b /= abs(b)
    target = np.array([a, -a, b, -b])
    u, v = canonical_local_unitaries(theta, target, tol=tol, degeneracy_tol=degeneracy_tol)
    w = np.kron(u, v)
    witness = Frame(vectors=w.conj(), dims=(2, 2))  # rows of conj(w) = columns of (U⊗V)†
    phases = []
    for vec in witness.vectors:
        zval = is_eigenvector(theta, vec, tol=max(tol * 100, 1e-7))
        if zval is None:
            raise SpectrumError("constructed witness failed the eigenvector check")
        phases.append(complex(zval))
    tag = TAG_PRODUCT if spectra_equivalent(
        z, np.array([1.0, 1.0, -1.0, -1.0]), tol=degeneracy_tol) else TAG_PROD_MEASURABLE
    return TwoQubitClass(tag, spec, witness, tuple(phases))


# ---------------------------------------------------------------------------
# Concurrence and minimum-entanglement eigenframes
# ---------------------------------------------------------------------------

def concurrence(psi) -> float:
    """C(ψ) = |⟨ψ|Θ_f⊗Θ_f ψ⟩| / ⟨ψ|ψ⟩ for a two-qubit state."""
    psi = as_complex(psi, "state vector")
    if psi.shape != (4,):
        raise DimensionError("concurrence is defined for two-qubit vectors")
    norm2 = float(np.real(np.vdot(psi, psi)))
    if norm2 <= 0.0:
        raise DimensionError("zero vector has no concurrence")
    return float(abs(np.vdot(psi, SPIN_FLIP_2 @ psi.conj())) / norm2)


def entanglement_entropy(psi) -> float:
    """Entanglement entropy in bits, h((1+√(1−C²))/2) with binary entropy h."""
    c = concurrence(psi)
    x = 0.5 * (1.0 + np.sqrt(max(0.0, 1.0 - c * c)))
    out = 0.0
    for p in (x, 1.0 - x):
        if p > 0.0:
            out -= p * np.log2(p)
    return float(out)


def min_average_concurrence(theta: Conjugation) -> float:
    """Minimum of Σ_j q_j C(v_j) over eigenframes of θ: equals |Tr [θ]^μ|."""
    return float(abs(np.trace(magic_representation(theta))))


def average_concurrence(frame: Frame) -> float:
    """Σ_j ⟨v_j|v_j⟩ · C(v_j) over the frame (weights sum to 4 when complete)."""
    if frame.dim != 4:
        raise DimensionError("average concurrence is defined for two-qubit frames")
    total = 0.0
    for v in frame.vectors:
        w = float(np.real(np.vdot(v, v)))
        if w > 0.0:
            total += w * concurrence(v)
    return float(total)


def _eigenbasis_and_phases(theta: Conjugation, degeneracy_tol: float):
    """Orthonormal θ-eigenbasis f_j (θf_j = z_j f_j) in computational coords."""
    o_cols, z = _magic_diagonalization(theta, degeneracy_tol)
    f_cols = MAGIC @ o_cols
    return f_cols, z


def hadamard_eigenframe(theta: Conjugation, *,
                        degeneracy_tol: float = DEFAULT_TOL.degeneracy_tol) -> Frame:
    """Eigenframe attaining the minimum average concurrence |Tr [θ]^μ|.

    Balances the eigenphases over a real Hadamard matrix:
    |v_k⟩ = Σ_j (H_{jk}/2) e^{iφ_j/2} |f_j⟩, each an eigenvector with
    eigenvalue 1 and concurrence |Σ_j e^{iφ_j}|/4.
    """
    f_cols, z = _eigenbasis_and_phases(theta, degeneracy_tol)
    half = np.exp(0.5j * np.angle(z))
    cols = (f_cols * half[np.newaxis, :]) @ (HADAMARD4 / 2.0)
    return Frame(vectors=cols.T.copy(), dims=(2, 2))


def stiefel_eigenframe(theta: Conjugation, r, *,
                       degeneracy_tol: float = DEFAULT_TOL.degeneracy_tol) -> Frame:
    """Eigenframe from a real n×4 matrix with RᵀR = 1₄.

    Every eigenframe of a two-qubit conjugation arises this way over the
    reference basis x_j = e^{iφ_j/2} f_j: the frame {y_k = Σ_j R_{kj} x_j}
    is complete and consists of θ-eigenvectors with eigenvalue 1.
    """
    r = np.asarray(r, dtype=float)
    if r.ndim != 2 or r.shape[1] != 4:
        raise DimensionError("stiefel matrix must be n×4")
    if np.max(np.abs(r.T @ r - np.eye(4))) > 1e-9:
        raise DimensionError("stiefel matrix must satisfy RᵀR = 1")
    f_cols, z = _eigenbasis_and_phases(theta, degeneracy_tol)
    x = f_cols * np.exp(0.5j * np.angle(z))[np.newaxis, :]
    return Frame(vectors=(x @ r.T).T.copy(), dims=(2, 2))


# ---------------------------------------------------------------------------
# Elegant-joint-measurement frames
# ---------------------------------------------------------------------------

def tetrahedron_directions() -> np.ndarray:
    """A regular tetrahedron on the Bloch sphere (rows are unit vectors)."""
    return np.array([[1.0, 1.0, 1.0],
                     [1.0, -1.0, -1.0],
                     [-1.0, 1.0, -1.0],
                     [-1.0, -1.0, 1.0]]) / np.sqrt(3.0)


def bloch_state(n) -> np.ndarray:
    """|n⟩ = cos(ϑ/2)|0⟩ + e^{iφ} sin(ϑ/2)|1⟩ for a unit Bloch vector n."""
    n = np.asarray(n, dtype=float)
    if n.shape != (3,) or abs(np.linalg.norm(n) - 1.0) > 1e-9:
        raise DimensionError("Bloch direction must be a 3-d unit vector")
    th = np.arccos(np.clip(n[2], -1.0, 1.0))
    ph = np.arctan2(n[1], n[0])
    return np.array([np.cos(th / 2.0), np.exp(1j * ph) * np.sin(th / 2.0)])


def ejm_conjugation(alpha: float) -> Conjugation:
    """Swap-frame conjugation family whose eigenframes generalize the elegant
    joint measurement; α = 0 gives exactly the conjugate swap."""
    ca, sa = np.cos(alpha), np.sin(alpha)
    ea = np.exp(1j * alpha)
    m = np.array([[ea * ca, 0.0, 0.0, 1j * ea * sa],
                  [0.0, 0.0, 1.0, 0.0],
                  [0.0, 1.0, 0.0, 0.0],
                  [1j * ea * sa, 0.0, 0.0, ea * ca]], dtype=complex)
    return Conjugation(m, (2, 2))


def ejm_frame(alpha: float, directions=None, *,
              tol: float = DEFAULT_TOL.eq_tol) -> Frame:
    """Iso-entangled eigenframe over a Bloch tetrahedron.

    |Ψ_n(α)⟩ = ((√3+e^{iα})/(2√2)) |n, n*⟩ − ((√3−e^{iα})/(2√2)) (iσ_Y⊗iσ_Y)|n*, n⟩.

    At α = 0 this is the elegant joint measurement basis: each vector is an
    eigenvector of the conjugate swap with eigenvalue 1 and concurrence 1/2.
    For general α the four vectors form the eigenframe of ejm_conjugation(α),
    with per-vector concurrence min_average_concurrence/4.
    """
    if directions is None:
        directions = tetrahedron_directions()
    dirs = np.asarray(directions, dtype=float)
    if dirs.shape != (4, 3):
        raise DimensionError("need exactly 4 Bloch directions")
    for n in dirs:
        if abs(np.linalg.norm(n) - 1.0) > tol * 10:
            raise DimensionError("Bloch directions must be unit vectors")
    dots = dirs @ dirs.T
    off = dots[~np.eye(4, dtype=bool)]
    if np.max(np.abs(off + 1.0 / 3.0)) > 1e-6:
        raise DimensionError("directions must form a regular tetrahedron (n_j·n_k = −1/3)")
    a = (np.sqrt(3.0) + np.exp(1j * alpha)) / (2.0 * _SQRT2)
    b = (np.exp(1j * alpha) - np.sqrt(3.0)) / (2.0 * _SQRT2)
    vecs = []
    for n in dirs:
        ket = bloch_state(n)
        v = a * np.kron(ket, ket.conj()) + b * (SPIN_FLIP_2 @ np.kron(ket.conj(), ket))
        vecs.append(v)
    return Frame(vectors=np.array(vecs), dims=(2, 2))


def direction_moment_defects(directions, weights) -> dict[str, float]:
    """Defects of the frame-direction moment conditions for m weighted Bloch
    directions: Σr_j² = 4, Σr_j² n_j = 0, Σr_j² n_jⁿn_jᵐ = (4/3)δ_{nm}."""
    dirs = np.asarray(directions, dtype=float)
    r2 = np.asarray(weights, dtype=float) ** 2
    second = np.einsum("j,jn,jm->nm", r2, dirs, dirs)
    return {
        "weight_sum": float(abs(np.sum(r2) - 4.0)),
        "first_moment": float(np.max(np.abs(np.einsum("j,jn->n", r2, dirs)))),
        "second_moment": float(np.max(np.abs(second - (4.0 / 3.0) * np.eye(3)))),
    }
