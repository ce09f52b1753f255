"""Fisher information and conjugation-certified QCRB saturation.

A pure-state model x ↦ ψ(x) that stays inside the fixed-point set of a
conjugation θ (an *imaginarity-free* model) saturates the quantum
Cramér–Rao bound with any projective measurement onto a θ-eigenframe: the
state's coefficients in such a basis are real up to per-vector phases, so
the classical Fisher matrix of the basis measurement equals the quantum one.

For field sensing, anticommutation {θ, H} = 0 between the conjugation and
every field generator makes the evolution e^{iφ·H} commute with θ, so an
imaginarity-free initial state remains imaginarity-free for every field
value.  When no anticommuting conjugation exists, antiparallel encoding
ψ ⊗ θψ restores saturation at the cost of doubling the probe.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .conjugation import (
    Antiunitary,
    Conjugation,
    Frame,
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    anticommutator_defect,
    is_eigenvector,
    real_subspace_basis,
)
from .errors import ConfigError, DimensionError, SymmetryError
from .linalg import (
    DEFAULT_TOL,
    as_complex,
    dagger,
    kron_all,
    matrix_exp_i_hermitian,
    subsystem_permutation_matrix,
)
from .twoqubit import MAGIC

PAULI = {"x": SIGMA_X, "y": SIGMA_Y, "z": SIGMA_Z}

DEFAULT_STEP = 1e-5
PROB_FLOOR = 1e-12


@dataclass(frozen=True)
class PureStateModel:
    """Differentiable family of pure states x ∈ R^n ↦ ψ(x) ∈ C^d.

    ``state_fn`` must return a normalized vector.  Derivatives come from
    ``deriv_fn`` when provided, otherwise from central finite differences
    with step ``step``.
    """

    state_fn: Callable[[np.ndarray], np.ndarray]
    n_params: int
    dims: tuple[int, ...]
    deriv_fn: Callable[[np.ndarray], np.ndarray] | None = None
    step: float = DEFAULT_STEP

    @property
    def dim(self) -> int:
        out = 1
        for d in self.dims:
            out *= d
        return out

    def _coerce_x(self, x) -> np.ndarray:
        x = np.atleast_1d(np.asarray(x, dtype=float))
        if x.shape != (self.n_params,):
            raise DimensionError(
                f"parameter point must have shape ({self.n_params},), got {x.shape}")
        return x

    def state(self, x) -> np.ndarray:
        x = self._coerce_x(x)
        psi = as_complex(self.state_fn(x), "model state")
        if psi.shape != (self.dim,):
            raise DimensionError("state_fn returned a vector of the wrong dimension")
        norm = float(np.linalg.norm(psi))
        if abs(norm - 1.0) > 1e-8:
            raise ConfigError(f"model state is not normalized (‖ψ‖ = {norm:.6f})")
        return psi

    def derivatives(self, x) -> np.ndarray:
        """Array of shape (n_params, d): row i is ∂ψ/∂x_i."""
        x = self._coerce_x(x)
        if self.deriv_fn is not None:
            d = as_complex(self.deriv_fn(x), "model derivative")
            if d.shape != (self.n_params, self.dim):
                raise DimensionError("deriv_fn returned the wrong shape")
            return d
        out = np.zeros((self.n_params, self.dim), dtype=complex)
        for i in range(self.n_params):
            xp, xm = x.copy(), x.copy()
            xp[i] += self.step
            xm[i] -= self.step
            out[i] = (self.state(xp) - self.state(xm)) / (2.0 * self.step)
        return out


class POVM:
    """Finite positive-operator-valued measure: E_ω ⪰ 0 with Σ_ω E_ω = 1.

    ``rank1_vectors`` carries the defining frame when the POVM was built
    from rank-one projectors, and is None otherwise.
    """

    def __init__(self, elements, *, rank1_vectors: Frame | None = None,
                 tol: float = 1e-8):
        self.elements = [as_complex(e, "POVM element") for e in elements]
        if not self.elements:
            raise ConfigError("POVM needs at least one element")
        d = self.elements[0].shape[0]
        total = np.zeros((d, d), dtype=complex)
        for e in self.elements:
            if e.shape != (d, d):
                raise DimensionError("POVM elements must share one square shape")
            if np.max(np.abs(e - dagger(e))) > tol:
                raise SymmetryError("POVM elements must be Hermitian")
            if np.min(np.linalg.eigvalsh(0.5 * (e + dagger(e)))) < -tol:
                raise SymmetryError("POVM elements must be positive semidefinite")
            total += e
        if np.max(np.abs(total - np.eye(d))) > tol:
            raise SymmetryError("POVM elements must sum to the identity")
        self.dim = d
        self.rank1_vectors = rank1_vectors

    @classmethod
    def from_frame(cls, frame: Frame, *, tol: float = 1e-8) -> "POVM":
        """Rank-one POVM {|v_j⟩⟨v_j|}; the frame must be complete."""
        frame.require_complete(max(tol, 1e-8))
        return cls([np.outer(v, v.conj()) for v in frame.vectors],
                   rank1_vectors=frame, tol=tol)

    def probabilities(self, psi: np.ndarray) -> np.ndarray:
        psi = as_complex(psi, "state")
        p = np.array([float(np.real(np.vdot(psi, e @ psi))) for e in self.elements])
        return np.clip(p, 0.0, None)


def classical_fisher(povm: POVM, model: PureStateModel, x, *,
                     prob_floor: float = PROB_FLOOR) -> np.ndarray:
    """Classical Fisher matrix F_C[i,j] = Σ_ω ∂_i p_ω ∂_j p_ω / p_ω.

    Outcomes with probability below ``prob_floor`` are skipped (their
    contribution is numerically indeterminate 0/0); a warning is issued
    when a skipped outcome carries a derivative larger than √prob_floor,
    since the true limiting contribution may then be nonzero.
    """
    psi = model.state(x)
    if povm.dim != model.dim:
        raise DimensionError("POVM and model dimensions differ")
    dpsi = model.derivatives(x)
    n = model.n_params
    f = np.zeros((n, n))
    for e in povm.elements:
        p = float(np.real(np.vdot(psi, e @ psi)))
        dp = np.array([2.0 * np.real(np.vdot(dpsi[i], e @ psi)) for i in range(n)])
        if p < prob_floor:
            if float(np.max(np.abs(dp))) > np.sqrt(prob_floor):
                warnings.warn(
                    "classical Fisher sum skipped an outcome with probability "
                    f"{p:.3e} but derivative magnitude {float(np.max(np.abs(dp))):.3e}; "
                    "the reported matrix may undercount the information",
                    RuntimeWarning, stacklevel=2)
            continue
        f += np.outer(dp, dp) / p
    return f


def quantum_fisher_pure(model: PureStateModel, x) -> np.ndarray:
    """Quantum Fisher matrix of a pure-state model:
    F_Q[i,j] = 4 Re(⟨∂_iψ|∂_jψ⟩ − ⟨∂_iψ|ψ⟩⟨ψ|∂_jψ⟩)."""
    psi = model.state(x)
    dpsi = model.derivatives(x)
    if not np.all(np.isfinite(dpsi)):
        raise ConfigError("model derivatives contain non-finite values")
    n = model.n_params
    overlaps = np.array([np.vdot(psi, dpsi[i]) for i in range(n)])
    f = np.zeros((n, n))
    for i in range(n):
        for j in range(n):
            val = np.vdot(dpsi[i], dpsi[j]) - np.conj(overlaps[i]) * overlaps[j]
            f[i, j] = 4.0 * float(np.real(val))
    return 0.5 * (f + f.T)


@dataclass(frozen=True)
class FisherMatrices:
    """Classical and quantum Fisher matrices at one parameter point."""

    classical: np.ndarray
    quantum: np.ndarray

    @property
    def gap(self) -> np.ndarray:
        """Information gap F_Q − F_C (PSD up to numerical tolerance)."""
        return self.quantum - self.classical

    def max_gap(self) -> float:
        return float(np.max(np.abs(self.gap)))

    def saturated(self, *, fisher_tol: float = DEFAULT_TOL.fisher_tol) -> bool:
        return self.max_gap() < fisher_tol


def fisher_matrices(povm: POVM, model: PureStateModel, x, *,
                    prob_floor: float = PROB_FLOOR) -> FisherMatrices:
    return FisherMatrices(classical=classical_fisher(povm, model, x, prob_floor=prob_floor),
                          quantum=quantum_fisher_pure(model, x))


def qcrb_saturation_gap(povm: POVM, model: PureStateModel, x, *,
                        prob_floor: float = PROB_FLOOR,
                        fisher_tol: float = DEFAULT_TOL.fisher_tol,
                        ) -> tuple[np.ndarray, bool]:
    """Gap matrix F_Q − F_C at x and whether the bound is saturated
    (max-norm of the gap below ``fisher_tol``)."""
    pair = fisher_matrices(povm, model, x, prob_floor=prob_floor)
    return pair.gap, pair.saturated(fisher_tol=fisher_tol)


def is_imaginarity_free(model: PureStateModel, theta: Antiunitary, sample_points, *,
                        tol: float = 1e-7) -> bool:
    """True when ψ(x) is a θ-eigenvector (up to phase) at every given point."""
    for x in sample_points:
        if is_eigenvector(theta, model.state(x), tol=tol) is None:
            return False
    return True


# ---------------------------------------------------------------------------
# Sensor-network magnetometry models
# ---------------------------------------------------------------------------

def field_axes(field_dim: int) -> tuple[str, ...]:
    """Pauli axes sensed by a field of the given dimension."""
    if field_dim == 1:
        return ("z",)
    if field_dim == 2:
        return ("z", "x")
    if field_dim == 3:
        return ("x", "y", "z")
    raise ConfigError("field dimension must be 1, 2 or 3")


def collective_generator(n_nodes: int, axis: str) -> np.ndarray:
    """H_K = Σ_p σ_K^{(p)}: one Pauli per node, summed over the network."""
    if axis not in PAULI:
        raise ConfigError(f"unknown Pauli axis {axis!r}")
    d = 2 ** n_nodes
    h = np.zeros((d, d), dtype=complex)
    for p in range(n_nodes):
        factors = [np.eye(2, dtype=complex)] * n_nodes
        factors[p] = PAULI[axis]
        h += kron_all(factors)
    return h


_PLUS = {
    "z": np.array([1.0, 0.0], dtype=complex),
    "x": np.array([1.0, 1.0], dtype=complex) / np.sqrt(2.0),
    "y": np.array([1.0, 1.0j], dtype=complex) / np.sqrt(2.0),
}
_MINUS = {
    "z": np.array([0.0, 1.0], dtype=complex),
    "x": np.array([1.0, -1.0], dtype=complex) / np.sqrt(2.0),
    "y": np.array([1.0j, 1.0], dtype=complex) / np.sqrt(2.0),
}


def ghz_state(n_nodes: int, axis: str = "z") -> np.ndarray:
    """GHZ_K = (|K₊⟩^⊗N + |K₋⟩^⊗N)/√2 over the given Pauli axis."""
    if n_nodes < 1:
        raise DimensionError("need at least one node")
    if axis not in _PLUS:
        raise ConfigError(f"unknown Pauli axis {axis!r}")
    plus = kron_all([_PLUS[axis]] * n_nodes)
    minus = kron_all([_MINUS[axis]] * n_nodes)
    psi = (plus + minus) / np.sqrt(2.0)
    return psi / np.linalg.norm(psi)


def superposed_ghz(n_nodes: int, weights=(1.0, 1.0, 1.0)) -> np.ndarray:
    """Normalized w_x GHZ_X + w_y GHZ_Y + w_z GHZ_Z (real weights)."""
    w = np.asarray(weights, dtype=float)
    if w.shape != (3,):
        raise ConfigError("superposed GHZ needs exactly 3 real weights (x, y, z)")
    psi = sum(w[k] * ghz_state(n_nodes, ax) for k, ax in enumerate(("x", "y", "z")))
    norm = float(np.linalg.norm(psi))
    if norm < 1e-12:
        raise ConfigError("superposed GHZ weights cancel to the zero vector")
    return psi / norm


def magnetometry_model(field_dim: int, n_qubits: int, initial="ghz_z", *,
                       weights=None, step: float = DEFAULT_STEP) -> PureStateModel:
    """Network field-sensing model ψ(φ) = e^{i Σ_a φ_a H_a} ψ₀.

    ``initial`` is "ghz_x" / "ghz_y" / "ghz_z" / "superposed" or an explicit
    normalized vector of dimension 2^N; ``weights`` feeds the superposed GHZ.
    """
    axes = field_axes(field_dim)
    gens = [collective_generator(n_qubits, a) for a in axes]
    d = 2 ** n_qubits
    if isinstance(initial, str):
        key = initial.lower()
        if key in ("ghz_x", "ghz_y", "ghz_z"):
            psi0 = ghz_state(n_qubits, key[-1])
        elif key == "superposed":
            psi0 = superposed_ghz(n_qubits, weights if weights is not None else (1.0, 1.0, 1.0))
        else:
            raise ConfigError(f"unknown initial state {initial!r}")
    else:
        psi0 = as_complex(initial, "initial state")
        if psi0.shape != (d,):
            raise DimensionError(f"initial state must have dimension {d}")
        n0 = float(np.linalg.norm(psi0))
        if n0 < 1e-12:
            raise ConfigError("initial state must be nonzero")
        psi0 = psi0 / n0

    def state_fn(phi: np.ndarray) -> np.ndarray:
        h = sum(phi[a] * gens[a] for a in range(len(gens)))
        return matrix_exp_i_hermitian(h) @ psi0

    return PureStateModel(state_fn=state_fn, n_params=field_dim,
                          dims=(2,) * n_qubits, step=step)


def pair_conjugation_matrix(alpha: float) -> np.ndarray:
    """Two-qubit symmetric unitary M diag(1, 1, 1, −e^{2iα}) Mᵀ.

    The resulting conjugation anticommutes with all three collective Pauli
    generators on two qubits for every α; its magic-basis spectrum is
    {1, 1, 1, −e^{2iα}}, so the magic basis itself is a protected eigenframe.
    """
    d = np.diag([1.0, 1.0, 1.0, -np.exp(2.0j * alpha)])
    return MAGIC @ d @ MAGIC.T


def magnetometry_conjugation(field_dim: int, alpha: float = 0.0) -> Conjugation:
    """Smallest conjugation block anticommuting with the sensed field generators.

    field_dim 1: single-qubit block σ_X; field_dim 2 or 3: the two-qubit
    α-family block (magic spectrum {1,1,1,−e^{2iα}}).  The anticommutation
    {θ, H_K} = 0 with every applicable collective generator is verified
    numerically before returning.
    """
    if field_dim == 1:
        theta = Conjugation(SIGMA_X.astype(complex), (2,))
        n_block = 1
    elif field_dim in (2, 3):
        theta = Conjugation(pair_conjugation_matrix(alpha), (2, 2))
        n_block = 2
    else:
        raise ConfigError("field dimension must be 1, 2 or 3")
    for axis in field_axes(field_dim):
        defect = anticommutator_defect(theta, collective_generator(n_block, axis))
        if defect > 1e-9:
            raise SymmetryError(
                f"anticommutation with the collective {axis} generator failed "
                f"(defect {defect:.3e})")
    return theta


def magnetometry_network_conjugation(field_dim: int, n_nodes: int, *,
                                     alpha: float = 0.0) -> Conjugation:
    """Network conjugation: tensor power of the magnetometry block.

    field_dim 1 works for any N ≥ 1 (σ_X per node); field_dim 2 or 3 pair
    the nodes with the two-qubit block, so N must be even — the single-node
    solutions square to −1 and cannot be completed on odd N.
    """
    if n_nodes < 1:
        raise DimensionError("need at least one node")
    block = magnetometry_conjugation(field_dim, alpha)
    if field_dim == 1:
        copies = n_nodes
    else:
        if n_nodes % 2 != 0:
            raise ConfigError(
                "multi-axis network conjugations require an even number of nodes")
        copies = n_nodes // 2
    u = kron_all([block.matrix] * copies)
    return Conjugation(u, (2,) * n_nodes)


def protected_frame(theta: Conjugation, *,
                    degeneracy_tol: float = DEFAULT_TOL.degeneracy_tol) -> Frame:
    """Orthonormal θ-real measurement basis (rank-one, QCRB-saturating for
    imaginarity-free models)."""
    return real_subspace_basis(theta, degeneracy_tol=degeneracy_tol)


def product_protected_frame(blocks, *,
                            degeneracy_tol: float = DEFAULT_TOL.degeneracy_tol) -> Frame:
    """Tensor product of per-block θ-real bases.

    For a network conjugation ⊗_p θ_p this yields a complete eigenframe
    whose every member is a product vector across the blocks — local
    measurements saturating the QCRB node by node.
    """
    blocks = list(blocks)
    if not blocks:
        raise DimensionError("need at least one conjugation block")
    frames = [real_subspace_basis(b, degeneracy_tol=degeneracy_tol) for b in blocks]
    vecs = frames[0].vectors
    dims: tuple[int, ...] = frames[0].dims
    for fr in frames[1:]:
        vecs = np.array([np.kron(a, b) for a in vecs for b in fr.vectors])
        dims = dims + fr.dims
    return Frame(vectors=vecs, dims=dims)


def magic_frame(n_pairs: int = 1) -> Frame:
    """Tensor powers of the magic basis: a protected eigenframe of every
    pair-block conjugation network."""
    if n_pairs < 1:
        raise DimensionError("need at least one pair")
    cols = MAGIC
    for _ in range(n_pairs - 1):
        cols = np.kron(cols, MAGIC)
    return Frame(vectors=cols.T.copy(), dims=(2,) * (2 * n_pairs))


def anticommutation_certificate(theta: Conjugation, n_nodes: int,
                                field_dim: int) -> dict[str, float]:
    """Anticommutator defects {θ, H_K} for every sensed collective generator."""
    return {a: anticommutator_defect(theta, collective_generator(n_nodes, a))
            for a in field_axes(field_dim)}


# ---------------------------------------------------------------------------
# Antiparallel encoding
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AntiparallelModel:
    """Doubled model Ψ(x) = ψ(x) ⊗ θψ(x) with its built-in symmetry.

    Whatever the base model does, Ψ(x) is an eigenvector of the swap-twisted
    conjugation θ_S = S(θ⊗θ) at every x, so a θ_S-eigenframe saturates the
    QCRB; the quantum Fisher matrix exactly doubles the base model's.
    """

    base: PureStateModel
    theta: Antiunitary
    model: PureStateModel = field(init=False)
    symmetry: Conjugation = field(init=False)

    def __post_init__(self):
        if self.theta.dims != self.base.dims:
            raise DimensionError("conjugation and model dimensions differ")
        d = self.base.dim
        u = self.theta.matrix
        swap = subsystem_permutation_matrix((d, d), (1, 0))
        u_s = swap @ np.kron(u, u)
        object.__setattr__(self, "symmetry", Conjugation(u_s, self.base.dims * 2))

        base = self.base

        def state_fn(x: np.ndarray) -> np.ndarray:
            psi = base.state(x)
            return np.kron(psi, u @ psi.conj())

        object.__setattr__(self, "model", PureStateModel(
            state_fn=state_fn, n_params=base.n_params,
            dims=base.dims * 2, step=base.step))

    def node_product_frame(self, *, degeneracy_tol: float = DEFAULT_TOL.degeneracy_tol) -> Frame:
        """θ_S-real basis that is product across network nodes.

        Requires the base conjugation to factor over the nodes.  Each node p
        measures its antiparallel pair in a real basis of S_p(θ_p ⊗ θ_p);
        tensoring and reordering the subsystems from (p₁,p₁′,…) to
        (p₁,…,p_N,p₁′,…,p_N′) gives a complete θ_S-real product frame.
        """
        dims = self.base.dims
        n = len(dims)
        u = self.theta.matrix
        # factor the node conjugations out of the product matrix part
        factors = _product_factor_matrices(u, dims)
        frames = []
        for p, up in enumerate(factors):
            dp = dims[p]
            swap_p = subsystem_permutation_matrix((dp, dp), (1, 0))
            pair = Conjugation(swap_p @ np.kron(up, up), (dp, dp))
            frames.append(real_subspace_basis(pair, degeneracy_tol=degeneracy_tol))
        # tensor the per-node frames: ordering (p1, p1', p2, p2', ...)
        vecs = frames[0].vectors
        for fr in frames[1:]:
            vecs = np.array([np.kron(a, b) for a in vecs for b in fr.vectors])
        # reorder subsystems to (p1..pN, p1'..pN')
        interleaved = []
        for p in range(n):
            interleaved.extend([dims[p], dims[p]])
        perm = [2 * p for p in range(n)] + [2 * p + 1 for p in range(n)]
        pmat = subsystem_permutation_matrix(tuple(interleaved), tuple(perm))
        return Frame(vectors=vecs @ pmat.T, dims=dims * 2)


def antiparallel_model(model: PureStateModel, theta: Antiunitary) -> AntiparallelModel:
    """Antiparallel encoding Ψ(x) = ψ(x) ⊗ θψ(x).

    The returned object exposes the doubled ``model``, its ``symmetry``
    conjugation θ_S = S(θ⊗θ), and — when θ factors over the network nodes —
    a node-by-node product eigenframe via ``node_product_frame()``.
    """
    return AntiparallelModel(base=model, theta=theta)


def _product_factor_matrices(u: np.ndarray, dims: tuple[int, ...]) -> list[np.ndarray]:
    """Split a product matrix part U = ⊗_p U_p into its factors.

    Uses iterated partial traces against the leading block; raises when U is
    not a tensor product over the given node split."""
    if len(dims) == 1:
        return [u.copy()]
    factors: list[np.ndarray] = []
    rest = u
    rest_dims = list(dims)
    while len(rest_dims) > 1:
        d0 = rest_dims[0]
        dr = 1
        for d in rest_dims[1:]:
            dr *= d
        blocks = rest.reshape(d0, dr, d0, dr)
        # find the strongest block to normalize against
        norms = np.linalg.norm(blocks, axis=(1, 3))
        i0, j0 = np.unravel_index(int(np.argmax(norms)), norms.shape)
        tail = blocks[i0, :, j0, :]
        scale = np.linalg.norm(tail) / np.sqrt(dr)
        if scale < 1e-12:
            raise SymmetryError("matrix part does not factor over the nodes")
        tail = tail / scale
        # make the tail unitary-phase canonical: largest entry real positive
        k = int(np.argmax(np.abs(tail)))
        ph = tail.flat[k]
        tail = tail * (np.conj(ph) / abs(ph))
        head = np.zeros((d0, d0), dtype=complex)
        for i in range(d0):
            for j in range(d0):
                head[i, j] = np.trace(dagger(tail) @ blocks[i, :, j, :]) / dr
        if np.max(np.abs(rest - np.kron(head, tail))) > 1e-8:
            raise SymmetryError("matrix part does not factor over the nodes")
        factors.append(head)
        rest = tail
        rest_dims = rest_dims[1:]
    factors.append(rest)
    return factors
