"""Frames, their four canonical operators, diagram vectors and tightness tests."""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Optional

import numpy as np

from .errors import ContractError, DimensionError
from .numerics import DEFAULT_TOL, Tolerance, hermitian_eigenvalues, rank, spans

FIELDS = ("real", "complex")
CONDITIONS = ("direct", "rank_and_G2", "spectrum", "diagram_sum", "ones_in_null")


@dataclass(frozen=True, eq=False)
class Frame:
    """An ordered sequence of k vectors in R^n or C^n, stored as a (k, n) array.

    ``field`` defaults to "complex" when the data is complex and "real"
    otherwise.  The vectors need not span; use :func:`is_frame` to check.
    """

    vectors: np.ndarray
    field: Optional[str] = None

    def __post_init__(self):
        raw = np.asarray(self.vectors)
        if raw.ndim == 1 and raw.size:
            raise DimensionError("frame vectors must be given as a (k, n) array")
        if raw.ndim != 2 or raw.shape[0] == 0 or raw.shape[1] == 0:
            raise DimensionError(f"a frame needs k >= 1 vectors of length n >= 1, got shape {raw.shape}")
        fld = self.field
        if fld is None:
            fld = "complex" if np.iscomplexobj(raw) else "real"
        if fld not in FIELDS:
            raise ValueError(f"field must be one of {FIELDS}, got {fld!r}")
        if fld == "real":
            if np.iscomplexobj(raw):
                if np.any(raw.imag != 0):
                    raise ContractError("real frame has complex entries")
                raw = raw.real
            vecs = np.array(raw, dtype=float)
        else:
            vecs = np.array(raw, dtype=complex)
        vecs.setflags(write=False)
        object.__setattr__(self, "vectors", vecs)
        object.__setattr__(self, "field", fld)

    @property
    def k(self) -> int:
        return self.vectors.shape[0]

    @property
    def n(self) -> int:
        return self.vectors.shape[1]

    def __len__(self):
        return self.k

    def __repr__(self):
        return f"Frame(k={self.k}, n={self.n}, field={self.field!r})"

    def subframe(self, indices) -> "Frame":
        return Frame(self.vectors[list(indices)], self.field)


def as_frame(obj, field=None) -> Frame:
    """Validate ``obj`` into a :class:`Frame` (frames pass through unchanged)."""
    if isinstance(obj, Frame):
        return obj
    return Frame(np.asarray(obj), field)


def is_frame(F, tol=None) -> bool:
    F = as_frame(F)
    return spans(F.vectors, F.n, tol)


def analysis_operator(F) -> np.ndarray:
    """k x n matrix whose i-th row is f_i^*."""
    return as_frame(F).vectors.conj()


def synthesis_operator(F) -> np.ndarray:
    """n x k matrix whose i-th column is f_i."""
    return as_frame(F).vectors.T.copy()


def frame_operator(F) -> np.ndarray:
    v = as_frame(F).vectors
    return v.T @ v.conj()


def gramian(F) -> np.ndarray:
    """G[i, j] = <f_j, f_i>."""
    v = as_frame(F).vectors
    return v.conj() @ v.T


def norms(F) -> np.ndarray:
    return np.linalg.norm(as_frame(F).vectors, axis=1)


def is_unit_norm(F, tol=None) -> bool:
    tol = tol or DEFAULT_TOL
    return bool(np.all(np.abs(norms(F) - 1.0) <= tol.threshold(1.0)))


def diagram_vector(f, field: str = "real") -> np.ndarray:
    """Diagram vector of f; length n(n-1) over R and 3n(n-1)/2 over C."""
    f = np.asarray(f)
    if f.ndim != 1:
        raise DimensionError("diagram_vector expects a single vector")
    n = f.shape[0]
    if n < 2:
        raise DimensionError("diagram vectors need n >= 2")
    i, j = np.triu_indices(n, k=1)
    if field == "real":
        if np.iscomplexobj(f):
            if np.any(f.imag != 0):
                raise ContractError("real diagram vector of a complex vector")
            f = f.real
        f = f.astype(float)
        diffs = f[i] ** 2 - f[j] ** 2
        prods = np.sqrt(2 * n) * f[i] * f[j]
        out = np.concatenate([diffs, prods])
    elif field == "complex":
        f = f.astype(complex)
        sq = (f * f.conj()).real
        diffs = (sq[i] - sq[j]).astype(complex)
        pairs = np.empty(2 * len(i), dtype=complex)
        pairs[0::2] = np.sqrt(n) * f[i] * f[j].conj()
        pairs[1::2] = np.sqrt(n) * f[i].conj() * f[j]
        out = np.concatenate([diffs, pairs])
    else:
        raise ValueError(f"unknown field {field!r}")
    return out / np.sqrt(n - 1)


def diagram_vectors(F) -> np.ndarray:
    F = as_frame(F)
    return np.array([diagram_vector(f, F.field) for f in F.vectors])


@dataclass(frozen=True, eq=False)
class DiagramSystem:
    diagram_vectors: np.ndarray
    diagram_gramian: np.ndarray


def diagram_system(F) -> DiagramSystem:
    d = diagram_vectors(F)
    return DiagramSystem(d, d.conj() @ d.T)


@dataclass
class TightnessReport:
    is_tight: bool
    lam: Optional[float]
    per_condition: dict = dc_field(default_factory=dict)

    @property
    def consistent(self) -> bool:
        return len(set(self.per_condition.values())) <= 1


def tight_bound(F) -> float:
    """Candidate tight bound trace(S)/n = sum of squared norms / n."""
    F = as_frame(F)
    return float(np.sum(np.abs(F.vectors) ** 2) / F.n)


def _check_preconditions(F, condition):
    if condition not in CONDITIONS:
        raise ValueError(f"unknown condition {condition!r}; expected one of {CONDITIONS}")
    if F.k < F.n:
        raise ContractError(f"tightness conditions need k >= n (k={F.k}, n={F.n})")
    if not np.any(F.vectors):
        raise ContractError("all frame vectors are zero")
    if condition in ("diagram_sum", "ones_in_null") and F.n < 2:
        raise ContractError("diagram-vector conditions need n >= 2")


def check_tight(F, condition: str = "direct", tol: Tolerance = None) -> bool:
    """Evaluate one of the five equivalent tightness conditions.

    Every condition is measured against lambda = trace(S)/n.
    """
    F = as_frame(F)
    tol = tol or DEFAULT_TOL
    _check_preconditions(F, condition)
    n, k = F.n, F.k
    lam = tight_bound(F)

    if condition == "direct":
        S = frame_operator(F)
        return bool(np.linalg.norm(S - lam * np.eye(n)) <= tol.threshold(lam * np.sqrt(n)))

    if condition == "rank_and_G2":
        G = gramian(F)
        if rank(G, tol) != n:
            return False
        return bool(np.linalg.norm(G @ G - lam * G) <= tol.threshold(lam * np.linalg.norm(G)))

    if condition == "spectrum":
        G = gramian(F)
        sigma = hermitian_eigenvalues(G, tol)
        expected = np.concatenate([np.full(n, lam), np.zeros(k - n)])
        return bool(np.max(np.abs(sigma - expected)) <= tol.threshold(lam))

    d = diagram_vectors(F)
    if condition == "diagram_sum":
        energy = np.sqrt(np.sum(np.abs(d) ** 2))
        return bool(np.linalg.norm(d.sum(axis=0)) <= tol.threshold(energy))

    gt = d.conj() @ d.T
    return bool(np.linalg.norm(gt @ np.ones(k)) <= tol.threshold(np.linalg.norm(gt) * np.sqrt(k)))


def tightness_report(F, tol: Tolerance = None) -> TightnessReport:
    """Run every applicable condition; ``is_tight`` follows the direct test."""
    F = as_frame(F)
    conditions = CONDITIONS if F.n >= 2 else ("direct",)
    per = {c: check_tight(F, c, tol) for c in conditions}
    tight = per["direct"]
    return TightnessReport(tight, tight_bound(F) if tight else None, per)
