"""Antiunitary operators on multipartite systems.

An antiunitary Θ is stored through its unitary matrix part ``U`` acting as
Θψ = U·conj(ψ) in the computational basis.  Under a basis change
|ψ_k⟩ = Σ_j V_{jk}|η_j⟩ the matrix transforms by congruence,
[Θ]^η = V [Θ]^ψ Vᵀ, not by similarity.

A conjugation is a Hermitian antiunitary: its matrix part is symmetric
unitary, equivalently Θ² = 1.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DimensionError, FrameError, SymmetryError
from .linalg import (
    DEFAULT_TOL,
    as_complex,
    check_dims,
    check_square,
    dagger,
    is_symmetric,
    is_unitary,
    joint_eigh_commuting,
    kron_all,
    subsystem_permutation_matrix,
    takagi,
)

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
ISY = 1j * SIGMA_Y  # [[0, 1], [-1, 0]]


class Antiunitary:
    """Antiunitary operator ψ ↦ matrix · conj(ψ) on a tensor-product space."""

    def __init__(self, matrix, dims=None, *, tol: float = DEFAULT_TOL.eq_tol):
        m = as_complex(matrix, "antiunitary matrix")
        n = check_square(m, "antiunitary matrix")
        if dims is None:
            dims = (n,)
        self.dims = check_dims(dims, n)
        if not is_unitary(m, tol):
            raise SymmetryError("antiunitary matrix part must be unitary")
        m.setflags(write=False)
        self.matrix = m

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def apply(self, psi) -> np.ndarray:
        """Θψ = U conj(ψ)."""
        psi = as_complex(psi, "state vector")
        if psi.shape != (self.dim,):
            raise DimensionError(
                f"state has shape {psi.shape}, operator dimension is {self.dim}")
        return self.matrix @ psi.conj()

    def squared_matrix(self) -> np.ndarray:
        """Matrix of the linear operator Θ² = U conj(U)."""
        return self.matrix @ self.matrix.conj()

    def is_conjugation(self, tol: float = DEFAULT_TOL.eq_tol) -> bool:
        return is_symmetric(self.matrix, tol)

    def tensor(self, other: "Antiunitary") -> "Antiunitary":
        """Tensor product Θ₁⊗Θ₂; yields a Conjugation when both factors are."""
        m = np.kron(self.matrix, other.matrix)
        dims = self.dims + other.dims
        if isinstance(self, Conjugation) and isinstance(other, Conjugation):
            return Conjugation(m, dims)
        return Antiunitary(m, dims)

    def __repr__(self) -> str:  # pragma: no cover - debug aid
        return f"{type(self).__name__}(dim={self.dim}, dims={self.dims})"


class Conjugation(Antiunitary):
    """Hermitian antiunitary: symmetric unitary matrix part, Θ² = 1."""

    def __init__(self, matrix, dims=None, *, tol: float = DEFAULT_TOL.eq_tol):
        super().__init__(matrix, dims, tol=tol)
        if not is_symmetric(self.matrix, tol):
            raise SymmetryError("conjugation matrix part must be symmetric")
        n = self.dim
        if np.max(np.abs(self.squared_matrix() - np.eye(n))) > max(tol, 1e-12) * 10:
            raise SymmetryError("conjugation must square to the identity")


@dataclass(frozen=True)
class Frame:
    """Finite family of vectors; complete when Σ_j |v_j⟩⟨v_j| = 1."""

    vectors: np.ndarray  # shape (k, d): one vector per row
    dims: tuple[int, ...]

    def __post_init__(self):
        v = as_complex(self.vectors, "frame vectors")
        if v.ndim != 2:
            raise DimensionError("frame vectors must form a 2-d array")
        object.__setattr__(self, "vectors", v)
        object.__setattr__(self, "dims", check_dims(self.dims, v.shape[1]))

    def __len__(self) -> int:
        return self.vectors.shape[0]

    @property
    def dim(self) -> int:
        return self.vectors.shape[1]

    def weights(self) -> np.ndarray:
        return np.real(np.sum(self.vectors * self.vectors.conj(), axis=1))

    def completeness_defect(self) -> float:
        acc = self.vectors.T @ self.vectors.conj()
        return float(np.max(np.abs(acc - np.eye(self.dim))))

    def require_complete(self, tol: float = DEFAULT_TOL.eq_tol) -> None:
        defect = self.completeness_defect()
        if defect > tol:
            raise FrameError(
                f"frame is incomplete: completeness defect {defect:.3e} exceeds {tol:.1e}")


def is_eigenvector(theta: Antiunitary, psi, *, tol: float = DEFAULT_TOL.eq_tol):
    """Eigenvalue of ψ under Θ, or None.

    Uses z = ⟨ψ|Θψ⟩/⟨ψ|ψ⟩ and accepts iff ‖Θψ − zψ‖ < tol·‖ψ‖.  Accepted
    eigenvalues of an antiunitary are automatically unimodular.
    """
    psi = as_complex(psi, "state vector")
    norm2 = float(np.real(np.vdot(psi, psi)))
    if norm2 <= 0.0:
        raise DimensionError("zero vector has no eigenvalue")
    phi = theta.apply(psi)
    z = complex(np.vdot(psi, phi) / norm2)
    defect = float(np.linalg.norm(phi - z * psi))
    if defect < tol * np.sqrt(norm2):
        return z
    return None


def is_eigenframe(theta: Antiunitary, frame: Frame, *, tol: float = DEFAULT_TOL.eq_tol):
    """(all-eigenvectors flag, per-vector eigenphases) for a complete frame.

    Raises FrameError when the frame is not complete: eigenframe status is
    only defined relative to a resolution of the identity.
    """
    frame.require_complete(tol)
    phases = []
    ok = True
    for v in frame.vectors:
        z = is_eigenvector(theta, v, tol=tol)
        phases.append(z)
        if z is None:
            ok = False
    return ok, phases


def real_subspace_basis(theta: Conjugation, *, tol: float = DEFAULT_TOL.eq_tol,
                        degeneracy_tol: float = DEFAULT_TOL.degeneracy_tol) -> Frame:
    """Orthonormal basis of the fixed-point set R_Θ = {ψ : Θψ = ψ}.

    The Takagi vectors of the symmetric unitary matrix part are exactly such
    a basis: U = VVᵀ gives U conj(V e_j) = V e_j.  The returned frame has
    real Gram matrix (orthonormal) and cardinality equal to the dimension.
    """
    res = takagi(theta.matrix, tol=tol, degeneracy_tol=degeneracy_tol)
    if np.max(np.abs(res.values - 1.0)) > max(tol, 1e-10) * 10:
        raise SymmetryError("conjugation Takagi values deviate from 1")
    return Frame(vectors=res.v.T.copy(), dims=theta.dims)


# ---------------------------------------------------------------------------
# Named constructors
# ---------------------------------------------------------------------------

def spin_flip() -> Antiunitary:
    """Single-qubit spin flip Θ_f: ψ ↦ iσ_Y conj(ψ).  Θ_f² = −1."""
    return Antiunitary(ISY, (2,))


def collective_spin_flip() -> Conjugation:
    """Two-qubit collective spin flip Θ_f⊗Θ_f (a conjugation)."""
    return Conjugation(np.kron(ISY, ISY), (2, 2))


def conjugate_swap(d: int = 2) -> Conjugation:
    """θ_swp = S·ϑ on C^d ⊗ C^d: swap composed with entrywise conjugation."""
    if d < 1:
        raise DimensionError("local dimension must be >= 1")
    s = subsystem_permutation_matrix((d, d), (1, 0))
    return Conjugation(s, (d, d))


def cz_conjugation() -> Conjugation:
    """CZ·ϑ on two qubits: diagonal matrix part (1, 1, 1, −1)."""
    return Conjugation(np.diag([1.0, 1.0, 1.0, -1.0]).astype(complex), (2, 2))


def product_conjugation(factors, dims=None) -> Conjugation:
    """⊗_p θ_p from local conjugation matrix parts (each symmetric unitary)."""
    mats = [as_complex(f, "factor") for f in factors]
    for f in mats:
        check_square(f, "factor")
        if not is_symmetric(f, DEFAULT_TOL.eq_tol) or not is_unitary(f, DEFAULT_TOL.eq_tol):
            raise SymmetryError("product factors must be symmetric unitaries")
    if dims is None:
        dims = tuple(f.shape[0] for f in mats)
    return Conjugation(kron_all(mats), dims)


def product_factors(psi, dims, *, tol: float = DEFAULT_TOL.eq_tol):
    """Tensor factors of a product vector, or None if entangled.

    Acceptance per bipartition: largest Schmidt coefficient ≥ (1 − tol)·norm.
    """
    psi = as_complex(psi, "state vector")
    dims = check_dims(dims, psi.shape[0])
    norm = float(np.linalg.norm(psi))
    if norm <= 0.0:
        raise DimensionError("zero vector is not a product state")
    factors = []
    rest = psi
    for k, d in enumerate(dims[:-1]):
        tail = int(np.prod(dims[k + 1:]))
        m = rest.reshape(d, tail)
        u, s, vh = np.linalg.svd(m, full_matrices=False)
        if s[0] < (1.0 - tol) * np.linalg.norm(s):
            return None
        factors.append(u[:, 0])
        rest = s[0] * vh[0]
    factors.append(rest)
    return factors


def is_product_vector(psi, dims, *, tol: float = DEFAULT_TOL.eq_tol) -> bool:
    return product_factors(psi, dims, tol=tol) is not None


def candidate_conjugation(basis, phases, dims, *, tol: float = DEFAULT_TOL.eq_tol) -> Conjugation:
    """Conjugation with a prescribed product eigenbasis and eigenphases.

    θ = (Σ_j e^{iφ_j} |ψ_j⟩⟨ψ_j*|)·ϑ, i.e. matrix part Σ_j e^{iφ_j} ψ_j ψ_jᵀ.
    The ψ_j must form an orthonormal basis of full tensor products over
    ``dims``; then θψ_j = e^{iφ_j}ψ_j exactly.
    """
    vecs = as_complex(basis, "basis")
    if vecs.ndim != 2:
        raise DimensionError("basis must be a 2-d array of row vectors")
    k, n = vecs.shape
    dims = check_dims(dims, n)
    if k != n:
        raise FrameError(f"candidate basis must have {n} vectors, got {k}")
    gram = vecs.conj() @ vecs.T
    if np.max(np.abs(gram - np.eye(n))) > tol:
        raise FrameError("candidate basis is not orthonormal")
    for v in vecs:
        if not is_product_vector(v, dims, tol=tol):
            raise FrameError("candidate basis vectors must be tensor products")
    phases = np.asarray(phases, dtype=float)
    if phases.shape != (k,):
        raise DimensionError(f"need {k} phases, got shape {phases.shape}")
    u = np.zeros((n, n), dtype=complex)
    for phi, v in zip(phases, vecs):
        u += np.exp(1j * phi) * np.outer(v, v)
    return Conjugation(u, dims)


def build_named(kind: str, **params) -> Antiunitary:
    """Dispatch to the named constructors.

    Kinds: conjugate_swap(d), collective_spin_flip, spin_flip, cz,
    product(factors[, dims]), candidate(basis, phases, dims),
    oneway(blocks).  ``spin_flip`` returns a plain Antiunitary; every other
    kind returns a Conjugation.
    """
    builders = {
        "conjugate_swap": lambda: conjugate_swap(int(params.get("d", 2))),
        "collective_spin_flip": collective_spin_flip,
        "spin_flip": spin_flip,
        "cz": cz_conjugation,
        "product": lambda: product_conjugation(params["factors"], params.get("dims")),
        "candidate": lambda: candidate_conjugation(
            params["basis"], params["phases"], params["dims"]),
        "oneway": lambda: oneway_conjugation(params["blocks"]),
    }
    if kind not in builders:
        raise ConfigError(f"unknown named conjugation kind {kind!r}")
    try:
        return builders[kind]()
    except KeyError as exc:
        raise ConfigError(f"kind {kind!r} is missing required parameter {exc}") from exc


def oneway_conjugation(blocks) -> Conjugation:
    """θ_{d→d'} with block-diagonal matrix part diag(U_1, …, U_d).

    Each U_j must be a symmetric d'×d' unitary; the result is a conjugation
    on C^d ⊗ C^{d'}.
    """
    mats = [as_complex(b, "block") for b in blocks]
    if not mats:
        raise DimensionError("oneway conjugation needs at least one block")
    dp = check_square(mats[0], "block")
    for b in mats:
        if check_square(b, "block") != dp:
            raise DimensionError("oneway blocks must share one dimension")
        if not is_symmetric(b, DEFAULT_TOL.eq_tol):
            raise SymmetryError("oneway blocks must be symmetric")
        if not is_unitary(b, DEFAULT_TOL.eq_tol):
            raise SymmetryError("oneway blocks must be unitary")
    d = len(mats)
    u = np.zeros((d * dp, d * dp), dtype=complex)
    for j, b in enumerate(mats):
        u[j * dp:(j + 1) * dp, j * dp:(j + 1) * dp] = b
    return Conjugation(u, (d, dp))


# ---------------------------------------------------------------------------
# Wigner canonical form
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class WignerForm:
    """Canonical form of an antiunitary under unitary congruence.

    w · U · wᵀ = 1_k ⊕ A_{ω_1} ⊕ … ⊕ A_{ω_m} with A_ω = [[0, 1], [ω, 0]],
    ω ≠ 1 unimodular and reported with Im(ω) ≥ 0; k = identity_block_size and
    k + 2m equals the dimension.
    """

    identity_block_size: int
    omegas: tuple[complex, ...]
    w: np.ndarray

    @property
    def dim(self) -> int:
        return self.identity_block_size + 2 * len(self.omegas)

    def canonical_matrix(self) -> np.ndarray:
        d = self.dim
        out = np.zeros((d, d), dtype=complex)
        k = self.identity_block_size
        out[:k, :k] = np.eye(k)
        for j, om in enumerate(self.omegas):
            a = k + 2 * j
            out[a, a + 1] = 1.0
            out[a + 1, a] = om
        return out

    def reconstruction_error(self, matrix: np.ndarray) -> float:
        lhs = self.w @ as_complex(matrix) @ self.w.T
        return float(np.max(np.abs(lhs - self.canonical_matrix())))


def _cluster_unimodular(lams: np.ndarray, tol: float):
    """Cluster unimodular values by chaining gaps below tol (wrap-aware)."""
    order = np.argsort(np.angle(lams))
    groups = []
    current = [int(order[0])]
    for idx in order[1:]:
        idx = int(idx)
        if abs(lams[idx] - lams[current[-1]]) <= tol:
            current.append(idx)
        else:
            groups.append(current)
            current = [idx]
    groups.append(current)
    # wrap-around: first and last clusters may meet across the angle cut
    if len(groups) > 1 and abs(lams[groups[0][0]] - lams[groups[-1][-1]]) <= tol:
        groups[0] = groups.pop() + groups[0]
    return groups


def _antisymmetric_pairs(msub: np.ndarray, tol: float):
    """Pair basis (v_i, u_i) for an antisymmetric unitary block, Θu = v, Θv = −u."""
    k = msub.shape[0]
    if k % 2 != 0:
        raise SymmetryError("antisymmetric block has odd dimension")
    span = np.eye(k, dtype=complex)
    pairs = []
    while span.shape[1] > 0:
        u = span[:, 0]
        v = msub @ u.conj()
        # v lies in the remaining invariant subspace and is orthogonal to u
        v = span @ (dagger(span) @ v)
        v = v - u * np.vdot(u, v)
        nrm = np.linalg.norm(v)
        if nrm < 0.5:
            raise SymmetryError("failed to extract an antisymmetric pair")
        v = v / nrm
        pairs.append((v, u))
        # shrink the invariant subspace by the extracted pair
        proj = span - np.outer(u, np.conj(u) @ span) - np.outer(v, np.conj(v) @ span)
        if span.shape[1] > 2:
            uu, ss, _ = np.linalg.svd(proj, full_matrices=False)
            span = uu[:, ss > 0.5]
        else:
            span = np.zeros((k, 0), dtype=complex)
        if span.shape[1] != k - 2 * len(pairs):
            raise SymmetryError("antisymmetric pair extraction lost rank")
    return pairs


def wigner_canonical_form(op: Antiunitary, *, tol: float = DEFAULT_TOL.eq_tol,
                          degeneracy_tol: float = DEFAULT_TOL.degeneracy_tol) -> WignerForm:
    """Canonical block form of an antiunitary under unitary congruence.

    The spectrum of the linear part Θ² = U·conj(U) determines the blocks:
    eigenvalue 1 carries the identity block (Θ restricts to a conjugation
    there), and eigenvalue pairs {ω, conj(ω)} each carry one A_ω block.
    """
    u = op.matrix
    d = op.dim
    lmat = u @ u.conj()
    h1 = 0.5 * (lmat + dagger(lmat))
    h2 = (lmat - dagger(lmat)) / 2j
    q = joint_eigh_commuting(h1, h2, degeneracy_tol)
    lams = np.diag(dagger(q) @ lmat @ q).copy()
    lams = lams / np.abs(lams)

    identity_cols = []
    minus_cols = []
    pos_clusters = []  # (mean eigenvalue, indices)
    neg_clusters = []
    for grp in _cluster_unimodular(lams, degeneracy_tol):
        rep = np.mean(lams[grp])
        rep = rep / abs(rep)
        if abs(rep - 1.0) <= degeneracy_tol:
            identity_cols.extend(grp)
        elif abs(rep + 1.0) <= degeneracy_tol:
            minus_cols.extend(grp)
        elif rep.imag > 0:
            pos_clusters.append((rep, grp))
        else:
            neg_clusters.append((rep, grp))

    frame_cols = []
    omegas = []

    if identity_cols:
        qc = q[:, identity_cols]
        msub = dagger(qc) @ u @ qc.conj()
        msub = 0.5 * (msub + msub.T)
        res = takagi(msub, tol=max(tol, 1e-8), degeneracy_tol=degeneracy_tol)
        fixed = qc @ res.v
        for j in range(fixed.shape[1]):
            frame_cols.append(fixed[:, j])
    identity_block_size = len(identity_cols)

    pair_cols = []

    for rep, grp in pos_clusters:
        # partner cluster at conj(rep) must exist with the same multiplicity
        best = None
        for i, (nrep, ngrp) in enumerate(neg_clusters):
            dist = abs(np.conj(rep) - nrep)
            if best is None or dist < best[0]:
                best = (dist, i)
        if best is None or best[0] > 10 * degeneracy_tol:
            raise SymmetryError("unpaired eigenvalue cluster in U·conj(U)")
        _, i = best
        ngrp = neg_clusters.pop(i)[1]
        if len(ngrp) != len(grp):
            raise SymmetryError("conjugate eigenvalue clusters of unequal size")
        for col in grp:
            uvec = q[:, col]
            vvec = u @ uvec.conj()
            om = lams[col]
            pair_cols.append((float(np.angle(om)), vvec, uvec, complex(om)))
    if neg_clusters:
        raise SymmetryError("unpaired eigenvalue cluster in U·conj(U)")

    if minus_cols:
        qc = q[:, minus_cols]
        msub = dagger(qc) @ u @ qc.conj()
        msub = 0.5 * (msub - msub.T)
        for v, uvec in _antisymmetric_pairs(msub, tol):
            pair_cols.append((float(np.pi), qc @ v, qc @ uvec, complex(-1.0)))

    pair_cols.sort(key=lambda t: t[0])
    for _, vvec, uvec, om in pair_cols:
        frame_cols.append(vvec)
        frame_cols.append(uvec)
        omegas.append(om)

    f = np.column_stack(frame_cols) if frame_cols else np.zeros((d, 0), dtype=complex)
    if f.shape != (d, d):
        raise SymmetryError("canonical basis extraction produced wrong count")
    defect = float(np.max(np.abs(dagger(f) @ f - np.eye(d))))
    if defect > 1e-7:
        raise SymmetryError(f"canonical basis not orthonormal (defect {defect:.2e})")
    w = dagger(f)
    return WignerForm(identity_block_size=identity_block_size,
                      omegas=tuple(omegas), w=w)


def is_spin_flip_sum(op: Antiunitary, *, tol: float = DEFAULT_TOL.eq_tol,
                     degeneracy_tol: float = DEFAULT_TOL.degeneracy_tol) -> bool:
    """True iff the antiunitary is unitarily congruent to a direct sum of spin
    flips: no identity block and every canonical ω equal to −1."""
    form = wigner_canonical_form(op, tol=tol, degeneracy_tol=degeneracy_tol)
    if form.identity_block_size != 0:
        return False
    return all(abs(om + 1.0) < max(tol, 1e-8) for om in form.omegas)


def anticommutator_defect(theta: Antiunitary, h) -> float:
    """‖ΘĤ + ĤΘ‖_max for a linear operator Ĥ, as matrices: U conj(H) + H U."""
    h = as_complex(h, "generator")
    check_square(h, "generator")
    return float(np.max(np.abs(theta.matrix @ h.conj() + h @ theta.matrix)))


def conjugation_invariance_defect(theta: Conjugation, umat) -> float:
    """‖ΘÛΘ − Û‖_max for a linear operator Û (Θ a conjugation, Θ² = 1)."""
    umat = as_complex(umat, "unitary")
    check_square(umat, "unitary")
    sandwich = theta.matrix @ umat.conj() @ theta.matrix.conj()
    return float(np.max(np.abs(sandwich - umat)))
