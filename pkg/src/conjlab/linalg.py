"""Dense complex linear algebra kernels shared across the package.

Matrices are plain ``numpy`` arrays of ``complex128``; composite systems are
described by a tuple ``dims`` of subsystem dimensions whose product is the
ambient dimension, ordered to match the Kronecker-product ordering of the
array indices.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, SymmetryError


@dataclass(frozen=True)
class Tolerances:
    """Numerical acceptance thresholds used across the package.

    eq_tol: entrywise equality / validation tolerance.
    degeneracy_tol: absolute gap below which spectrum values are treated as
        degenerate (eigenvalue clustering, antipodal-pair detection).
    fisher_tol: entrywise tolerance for Fisher-information comparisons.
    """

    eq_tol: float = 1e-9
    degeneracy_tol: float = 1e-7
    fisher_tol: float = 1e-6

    def __post_init__(self) -> None:
        for name in ("eq_tol", "degeneracy_tol", "fisher_tol"):
            if not getattr(self, name) > 0:
                raise DimensionError(f"{name} must be positive")


DEFAULT_TOL = Tolerances()


def as_complex(a, name: str = "array") -> np.ndarray:
    """Coerce to a fresh complex128 ndarray."""
    arr = np.array(a, dtype=np.complex128, order="C")
    if not (np.all(np.isfinite(arr.real)) and np.all(np.isfinite(arr.imag))):
        raise DimensionError(f"{name} contains non-finite entries")
    return arr


def check_square(a: np.ndarray, name: str = "matrix") -> int:
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionError(f"{name} must be square, got shape {a.shape}")
    return a.shape[0]


def check_dims(dims, total: int) -> tuple[int, ...]:
    """Validate a subsystem-dimension tuple against the ambient dimension."""
    dims = tuple(int(d) for d in dims)
    if not dims or any(d < 1 for d in dims):
        raise DimensionError(f"invalid dims {dims}")
    prod = 1
    for d in dims:
        prod *= d
    if prod != total:
        raise DimensionError(f"dims {dims} do not multiply to dimension {total}")
    return dims


def kron_all(factors) -> np.ndarray:
    """Kronecker product of a sequence of matrices (left factor most significant)."""
    factors = list(factors)
    if not factors:
        raise DimensionError("kron_all needs at least one factor")
    out = as_complex(factors[0])
    for f in factors[1:]:
        out = np.kron(out, as_complex(f))
    return out


def permute_subsystems(vec: np.ndarray, dims, perm) -> np.ndarray:
    """Reorder tensor factors of a state vector.

    Output subsystem ``k`` is input subsystem ``perm[k]`` (0-based here; this
    is an internal layout helper, not the public 1-based trace interface).
    """
    dims = tuple(dims)
    perm = tuple(perm)
    if sorted(perm) != list(range(len(dims))):
        raise DimensionError(f"perm {perm} is not a permutation of 0..{len(dims) - 1}")
    return np.ascontiguousarray(vec.reshape(dims).transpose(perm).reshape(-1))


def subsystem_permutation_matrix(dims, perm) -> np.ndarray:
    """Unitary permutation matrix P with P(v_1 ⊗ ... ⊗ v_N) reordered by perm."""
    total = int(np.prod(dims))
    idx = np.arange(total).reshape(tuple(dims)).transpose(tuple(perm)).reshape(-1)
    return np.eye(total)[idx].astype(np.complex128)


def partial_trace_keep(m: np.ndarray, dims, p: int) -> np.ndarray:
    """Trace out every subsystem except subsystem ``p`` (1-based, as 1 <= p <= N).

    ``m`` is a square matrix on the full tensor-product space with subsystem
    dimensions ``dims``.
    """
    m = as_complex(m)
    n = check_square(m)
    dims = check_dims(dims, n)
    nsys = len(dims)
    if not 1 <= p <= nsys:
        raise DimensionError(f"subsystem index {p} out of range 1..{nsys}")
    k = p - 1
    t = m.reshape(dims + dims)
    # Trace paired axes for every subsystem other than k, innermost first so
    # axis numbers stay valid.
    for j in reversed(range(nsys)):
        if j == k:
            continue
        t = np.trace(t, axis1=j, axis2=j + t.ndim // 2)
    return np.ascontiguousarray(t)


def dagger(a: np.ndarray) -> np.ndarray:
    return a.conj().T


def is_unitary(a: np.ndarray, tol: float) -> bool:
    n = check_square(a)
    return bool(np.max(np.abs(a @ dagger(a) - np.eye(n))) < tol)


def is_symmetric(a: np.ndarray, tol: float) -> bool:
    check_square(a)
    return bool(np.max(np.abs(a - a.T)) < tol)


def is_hermitian(a: np.ndarray, tol: float) -> bool:
    check_square(a)
    return bool(np.max(np.abs(a - dagger(a))) < tol)


def _group_consecutive(values: np.ndarray, tol: float):
    """Split indices of a monotone 1-d array into runs with gaps <= tol."""
    groups = []
    start = 0
    for i in range(1, len(values) + 1):
        if i == len(values) or abs(values[i] - values[i - 1]) > tol:
            groups.append(list(range(start, i)))
            start = i
    return groups


def joint_eigh_commuting(a: np.ndarray, b: np.ndarray, cluster_tol: float) -> np.ndarray:
    """Simultaneously diagonalize two commuting Hermitian matrices.

    Returns a unitary Q (real orthogonal when both inputs are real) such that
    Q† a Q and Q† b Q are diagonal up to numerical error.  Eigenvalues of
    ``a`` closer than ``cluster_tol`` are treated as one degenerate block and
    split by diagonalizing ``b`` restricted to that block.
    """
    n = check_square(a)
    if b.shape != a.shape:
        raise DimensionError("joint diagonalization needs same-shape matrices")
    w, q = np.linalg.eigh(a)
    q = np.array(q)
    for grp in _group_consecutive(w, cluster_tol):
        if len(grp) == 1:
            continue
        cols = q[:, grp]
        sub = dagger(cols) @ b @ cols
        sub = 0.5 * (sub + dagger(sub))
        _, qs = np.linalg.eigh(sub)
        q[:, grp] = cols @ qs
    return q


@dataclass(frozen=True)
class TakagiResult:
    """Factorization a = v @ diag(values) @ v.T with unitary v, values >= 0 descending."""

    values: np.ndarray
    v: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return self.v @ np.diag(self.values) @ self.v.T

    def reconstruction_error(self, a: np.ndarray) -> float:
        return float(np.max(np.abs(self.reconstruct() - as_complex(a))))


def _canonicalize_column_signs(v: np.ndarray) -> np.ndarray:
    """Fix the +-1 freedom of each column: largest-magnitude entry gets a
    positive real part (positive imaginary part as tie-break)."""
    v = np.array(v)
    for j in range(v.shape[1]):
        col = v[:, j]
        k = int(np.argmax(np.abs(col)))
        z = col[k]
        if z.real < 0 or (abs(z.real) < 1e-14 * max(1.0, abs(z)) and z.imag < 0):
            v[:, j] = -col
    return v


def _takagi_symmetric_unitary(s: np.ndarray, cluster_tol: float) -> np.ndarray:
    """Takagi vectors of a symmetric unitary block.

    Re(s) and Im(s) are commuting real symmetric matrices, so they share a
    real orthogonal eigenbasis; the Takagi vectors are that basis with each
    column rotated by half the eigenphase.
    """
    q = joint_eigh_commuting(s.real.copy(), s.imag.copy(), cluster_tol)
    z = np.diag(q.T @ s @ q)
    half = np.exp(0.5j * np.angle(z))
    return q.astype(np.complex128) * half[np.newaxis, :]


def takagi(a, *, tol: float = DEFAULT_TOL.eq_tol,
           degeneracy_tol: float = DEFAULT_TOL.degeneracy_tol) -> TakagiResult:
    """Symmetric (Autonne–Takagi) factorization a = v diag(values) vᵀ.

    ``a`` must be complex symmetric within ``tol``.  Values are the singular
    values, sorted descending.  Degenerate singular-value blocks (absolute gap
    below ``degeneracy_tol``) are re-factorized internally so the result is a
    valid congruence diagonalization also in the degenerate case.
    """
    a = as_complex(a)
    n = check_square(a)
    if not is_symmetric(a, tol):
        raise SymmetryError("takagi requires a complex symmetric matrix")
    a = 0.5 * (a + a.T)
    if n == 0:
        return TakagiResult(values=np.zeros(0), v=np.zeros((0, 0), dtype=complex))

    u, s, _ = np.linalg.svd(a)
    # d = u† a u* is block diagonal over degenerate singular-value groups and
    # each nonzero block is (up to scale) symmetric unitary.
    d = dagger(u) @ a @ u.conj()
    v = u.astype(np.complex128).copy()
    values = s.copy()
    for grp in _group_consecutive(s, degeneracy_tol):
        sigma = float(np.mean(s[grp]))
        if sigma <= tol:
            continue  # numerically null block: any orthonormal columns do
        block = d[np.ix_(grp, grp)]
        block = 0.5 * (block + block.T)
        if len(grp) == 1:
            z = block[0, 0]
            v[:, grp[0]] *= np.exp(0.5j * np.angle(z))
            values[grp[0]] = abs(z)
        else:
            unit = block / sigma
            vb = _takagi_symmetric_unitary(unit, degeneracy_tol)
            v[:, grp] = v[:, grp] @ vb
            # block = vb diag(w) vbᵀ  =>  w = vb† block vb*
            values[grp] = np.abs(np.diag(dagger(vb) @ block @ vb.conj()))
    order = np.argsort(-values, kind="stable")
    values = values[order]
    v = v[:, order]
    v = _canonicalize_column_signs(v)
    return TakagiResult(values=values, v=v)


def matrix_exp_i_hermitian(h, t: float = 1.0, *, tol: float = DEFAULT_TOL.eq_tol) -> np.ndarray:
    """exp(i t h) for Hermitian h, via the spectral decomposition."""
    h = as_complex(h)
    check_square(h)
    if not is_hermitian(h, tol):
        raise SymmetryError("matrix_exp_i_hermitian requires a Hermitian matrix")
    w, q = np.linalg.eigh(0.5 * (h + dagger(h)))
    return (q * np.exp(1j * t * w)[np.newaxis, :]) @ dagger(q)


def haar_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unitary from the QR decomposition of a Ginibre matrix."""
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    q, r = np.linalg.qr(g)
    phases = np.diag(r).copy()
    phases /= np.abs(phases)
    return q * phases[np.newaxis, :]


def random_symmetric_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    """Random symmetric unitary w wᵀ (w Haar): the generic conjugation matrix."""
    w = haar_unitary(d, rng)
    return w @ w.T


def random_real_orthogonal(d: int, rng: np.random.Generator) -> np.ndarray:
    g = rng.standard_normal((d, d))
    q, r = np.linalg.qr(g)
    signs = np.sign(np.diag(r))
    signs[signs == 0] = 1.0
    return q * signs[np.newaxis, :]
