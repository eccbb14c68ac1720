"""Tolerance-aware dense linear algebra over real and complex scalars.

Vectors are 1-D arrays; a "list of vectors" is a 2-D array whose rows are
the vectors.  The inner product is linear in its first argument,
``<x, y> = sum(x * conj(y))``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ContractError, DimensionError

_ORTHONORMAL_ATOL = 1e-8


@dataclass(frozen=True)
class Tolerance:
    """Relative epsilon plus an absolute floor used for every numerical decision."""

    rel_eps: float = 1e-10
    abs_floor: float = 1e-12

    def __post_init__(self):
        if not (self.rel_eps > 0 and self.abs_floor > 0):
            raise ValueError("tolerances must be positive")

    def threshold(self, scale: float) -> float:
        return max(self.rel_eps * scale, self.abs_floor)


DEFAULT_TOL = Tolerance()


def _tol(tol):
    return DEFAULT_TOL if tol is None else tol


def as_matrix(m) -> np.ndarray:
    a = np.asarray(m)
    if a.ndim != 2 or a.shape[0] == 0 or a.shape[1] == 0:
        raise DimensionError(f"expected a nonempty 2-D matrix, got shape {a.shape}")
    if np.iscomplexobj(a):
        return a.astype(complex)
    return a.astype(float)


def as_vectors(vectors, n: int) -> np.ndarray:
    """Stack ``vectors`` into a (m, n) array; an empty sequence gives shape (0, n)."""
    if isinstance(vectors, np.ndarray) and vectors.ndim == 2:
        a = vectors
    else:
        rows = [np.asarray(v) for v in vectors]
        if not rows:
            return np.zeros((0, n))
        if any(r.ndim != 1 for r in rows):
            raise DimensionError("every vector must be one-dimensional")
        lengths = {r.shape[0] for r in rows}
        if len(lengths) != 1:
            raise DimensionError(f"mismatched vector lengths {sorted(lengths)}")
        a = np.vstack(rows)
    if a.shape[1] != n and a.shape[0] > 0:
        raise DimensionError(f"vectors have length {a.shape[1]}, expected {n}")
    if np.iscomplexobj(a):
        return a.astype(complex)
    return a.astype(float)


def rank_threshold(singular_values, shape, tol=None) -> float:
    tol = _tol(tol)
    smax = float(singular_values[0]) if len(singular_values) else 0.0
    return tol.threshold(smax * max(shape))


def rank(m, tol=None) -> int:
    a = as_matrix(m)
    s = np.linalg.svd(a, compute_uv=False)
    return int(np.sum(s > rank_threshold(s, a.shape, tol)))


def _normalize_phase(v: np.ndarray, tol: Tolerance) -> np.ndarray:
    # first coordinate that is clearly nonzero becomes positive real
    idx = np.flatnonzero(np.abs(v) > tol.threshold(np.abs(v).max()))
    if idx.size:
        x = v[idx[0]]
        v = v * (np.conj(x) / abs(x))
    return v


def null_space_basis(m, tol=None) -> np.ndarray:
    """Orthonormal basis of the numerical null space, one vector per row."""
    tol = _tol(tol)
    a = as_matrix(m)
    _, s, vh = np.linalg.svd(a, full_matrices=True)
    r = int(np.sum(s > rank_threshold(s, a.shape, tol)))
    basis = vh[r:].conj()
    if not np.iscomplexobj(a):
        basis = basis.real
    return np.array([_normalize_phase(v, tol) for v in basis]).reshape(len(basis), a.shape[1])


def spans(vectors, n: int, tol=None) -> bool:
    """True iff the vectors span the n-dimensional space."""
    a = as_vectors(vectors, n)
    if a.shape[0] == 0:
        return False
    return rank(a, tol) == n


def orthogonal_complement_basis(vectors, n: int, tol=None) -> np.ndarray:
    """Orthonormal basis (rows) of the orthogonal complement of span(vectors)."""
    tol = _tol(tol)
    a = as_vectors(vectors, n)
    if a.shape[0] == 0:
        return np.eye(n, dtype=a.dtype)
    # y is orthogonal to f iff f^* y = 0
    return null_space_basis(a.conj(), tol)


def is_hermitian(m, tol=None) -> bool:
    tol = _tol(tol)
    a = as_matrix(m)
    if a.shape[0] != a.shape[1]:
        return False
    return np.linalg.norm(a - a.conj().T) <= tol.threshold(np.linalg.norm(a))


def hermitian_eigenvalues(m, tol=None) -> np.ndarray:
    """All eigenvalues of a Hermitian matrix, sorted descending."""
    a = as_matrix(m)
    if not is_hermitian(a, tol):
        raise ContractError("matrix is not Hermitian within tolerance")
    w = np.linalg.eigvalsh((a + a.conj().T) / 2)
    return w[::-1].copy()


def is_orthonormal(basis, atol: float = _ORTHONORMAL_ATOL) -> bool:
    b = np.atleast_2d(np.asarray(basis))
    if b.size == 0:
        return True
    gram = b.conj() @ b.T
    return bool(np.allclose(gram, np.eye(b.shape[0]), atol=atol, rtol=0))


def project(onto_basis, x) -> np.ndarray:
    """Orthogonal projection of x onto the span of an orthonormal basis."""
    x = np.asarray(x)
    b = np.asarray(onto_basis)
    if b.size == 0:
        return np.zeros_like(x, dtype=np.result_type(x, float))
    b = np.atleast_2d(b)
    if b.shape[1] != x.shape[0]:
        raise DimensionError("basis vectors and x have different lengths")
    if not is_orthonormal(b):
        raise ContractError("projection basis is not orthonormal")
    coeffs = b.conj() @ x
    return coeffs @ b
