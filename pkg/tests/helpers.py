"""Shared builders for the test suite: seeded random operators and models."""

from __future__ import annotations

import numpy as np

from conjlab import Conjugation, haar_unitary, kron_all, random_symmetric_unitary


def random_conjugation(dims, rng) -> Conjugation:
    """Haar-flavoured random conjugation on the given subsystem dimensions."""
    d = int(np.prod(dims))
    return Conjugation(random_symmetric_unitary(d, rng), tuple(dims))


def random_product_conjugation(dims, rng) -> Conjugation:
    """Tensor product of independent random single-subsystem conjugations."""
    u = kron_all([random_symmetric_unitary(d, rng) for d in dims])
    return Conjugation(u, tuple(dims))


def random_local_scramble(theta: Conjugation, rng) -> Conjugation:
    """(a ⊗ b) U (a ⊗ b)ᵀ for Haar-random locals: same non-local structure."""
    locals_ = [haar_unitary(d, rng) for d in theta.dims]
    c = kron_all(locals_)
    return Conjugation(c @ theta.matrix @ c.T, theta.dims)


def random_state(d, rng) -> np.ndarray:
    v = rng.normal(size=d) + 1j * rng.normal(size=d)
    return v / np.linalg.norm(v)
