"""Tight subframes and (p, q)-surgery on frames."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Optional

import numpy as np

from .errors import ContractError, ResourceLimitError
from .frame import Frame, as_frame, check_tight, diagram_vectors, frame_operator, is_unit_norm
from .numerics import DEFAULT_TOL, Tolerance, hermitian_eigenvalues, spans

DEFAULT_SUBSET_CAP = 20
_CHUNK = 1 << 15


def _check_cap(k, cap, what):
    if k > cap:
        raise ResourceLimitError(f"{what} over k={k} vectors exceeds cap {cap}")


@dataclass
class SubframeResult:
    """Tight subframes as (index set, tight bound) pairs in lexicographic order."""

    subframes: list

    @property
    def index_sets(self) -> list:
        return [s for s, _ in self.subframes]

    def __len__(self):
        return len(self.subframes)


def _diagram_sum_is_zero(d: np.ndarray, tol: Tolerance) -> bool:
    energy = np.sqrt(np.sum(np.abs(d) ** 2))
    return bool(np.linalg.norm(d.sum(axis=0)) <= tol.threshold(energy))


def is_tight_subframe(F, indices, tol: Tolerance = None) -> bool:
    """Diagram vectors of the subset sum to zero and the subset spans."""
    F = as_frame(F)
    tol = tol or DEFAULT_TOL
    idx = list(indices)
    if not idx:
        return False
    sub = F.vectors[idx]
    return _diagram_sum_is_zero(diagram_vectors(F)[idx], tol) and spans(sub, F.n, tol)


def tight_subframes(F, tol: Tolerance = None, cap: int = DEFAULT_SUBSET_CAP) -> SubframeResult:
    """Every proper nonempty index set whose vectors form a tight frame."""
    F = as_frame(F)
    tol = tol or DEFAULT_TOL
    if F.n < 2:
        raise ContractError("tight subframe search uses diagram vectors and needs n >= 2")
    k = F.k
    _check_cap(k, cap, "tight subframe search")
    d = diagram_vectors(F)
    energy = np.sum(np.abs(d) ** 2, axis=1)
    bits = 1 << np.arange(k)
    found = []
    full = (1 << k) - 1
    for start in range(1, full, _CHUNK):
        masks = np.arange(start, min(start + _CHUNK, full))
        sel = ((masks[:, None] & bits) != 0).astype(float)
        sums = np.linalg.norm(sel @ d, axis=1)
        limits = np.maximum(tol.rel_eps * np.sqrt(sel @ energy), tol.abs_floor)
        for mask in masks[sums <= limits]:
            idx = tuple(np.flatnonzero(int(mask) & bits).tolist())
            if len(idx) >= F.n and spans(F.vectors[list(idx)], F.n, tol):
                lam = float(np.sum(np.abs(F.vectors[list(idx)]) ** 2) / F.n)
                found.append((idx, lam))
    found.sort()
    return SubframeResult(found)


def _require_tight(F, tol):
    if F.k < F.n or not np.any(F.vectors) or not check_tight(F, "direct", tol):
        raise ContractError("operation requires a tight frame")


def subframe_complement_check(F, indices, tol: Tolerance = None) -> bool:
    """For a tight F, the complement of a tight subframe is again tight."""
    F = as_frame(F)
    tol = tol or DEFAULT_TOL
    _require_tight(F, tol)
    rest = sorted(set(range(F.k)).difference(indices))
    return is_tight_subframe(F, rest, tol)


def unit_norm_subframe_rowsum_check(F, indices, tol: Tolerance = None) -> bool:
    """Every row of the diagram Gramian of the subset sums to zero (and it spans)."""
    F = as_frame(F)
    tol = tol or DEFAULT_TOL
    if not is_unit_norm(F, tol):
        raise ContractError("row-sum criterion applies to unit-norm frames")
    idx = list(indices)
    if not idx:
        raise ContractError("index set must be nonempty")
    d = diagram_vectors(F)[idx]
    rowsums = (d.conj() @ d.T).sum(axis=1)
    if np.max(np.abs(rowsums)) > tol.threshold(np.sqrt(len(idx))):
        return False
    return spans(F.vectors[idx], F.n, tol)


def pq_surgery_necessary(F, removed, q: int, tol: Tolerance = None) -> bool:
    """Necessary condition for unit-norm (p, q)-surgery on a unit-norm tight frame.

    The entries of the diagram Gramian of the remaining vectors must sum to
    at most q^2.
    """
    F = as_frame(F)
    tol = tol or DEFAULT_TOL
    if not is_unit_norm(F, tol):
        raise ContractError("necessary condition applies to unit-norm tight frames")
    _require_tight(F, tol)
    removed = set(removed)
    if not removed <= set(range(F.k)):
        raise ContractError("removed indices out of range")
    keep = [i for i in range(F.k) if i not in removed]
    if not keep:
        return True
    d = diagram_vectors(F)[keep]
    total = float(np.real((d.conj() @ d.T).sum()))
    return total <= q * q + tol.threshold(len(keep) ** 2)


@dataclass(frozen=True, eq=False)
class SurgeryWitness:
    """Removing ``removed`` and appending ``added`` leaves a ``lam``-tight frame."""

    removed: tuple
    added: np.ndarray
    lam: float

    @property
    def p(self) -> int:
        return len(self.removed)

    @property
    def q(self) -> int:
        return len(self.added)

    def apply(self, F) -> Frame:
        F = as_frame(F)
        keep = [i for i in range(F.k) if i not in set(self.removed)]
        rows = [F.vectors[keep]]
        if self.q:
            rows.append(self.added)
        return Frame(np.vstack(rows), F.field)


def _rank_one_terms(m: np.ndarray, q: int, tol: Tolerance) -> Optional[np.ndarray]:
    """Write a PSD matrix as q nonzero rank-one terms g g^*, or None if impossible."""
    w, u = np.linalg.eigh((m + m.conj().T) / 2)
    scale = max(np.abs(w).max(), 1.0)
    keep = w > tol.threshold(scale * len(w))
    vecs = [np.sqrt(w[j]) * u[:, j] for j in np.flatnonzero(keep)[::-1]]
    if len(vecs) > q or (q and not vecs):
        return None
    extra = q - len(vecs)
    if extra:
        last = vecs.pop()
        vecs += [last / np.sqrt(extra + 1)] * (extra + 1)
    return np.array(vecs).reshape(q, m.shape[0])


def _completion(S: np.ndarray, q: int, nonzero: bool, tol: Tolerance):
    """Vectors to add so that S plus their outer products is a positive multiple of I."""
    n = S.shape[0]
    w = hermitian_eigenvalues(S, tol)
    top = w[0]
    if top <= tol.threshold(max(np.abs(w).max(), 1.0)):
        if q < n:
            return None
        return 1.0, _rank_one_terms(np.eye(n) - S, q, tol)
    deficiency = int(np.sum(top - w > tol.threshold(top * n)))
    if deficiency == 0 and q > 0:
        if not nonzero:
            return top, np.zeros((q, n), dtype=S.dtype)
        if q < n:
            return None
        lam = 2 * top
        return lam, _rank_one_terms(lam * np.eye(n) - S, q, tol)
    if deficiency > q:
        return None
    return top, _rank_one_terms(top * np.eye(n) - S, q, tol)


def pq_surgery_feasible_unrestricted(F, p: int, q: int, tol: Tolerance = None,
                                     cap: int = DEFAULT_SUBSET_CAP, nonzero: bool = False):
    """Decide (p, q)-surgery with added vectors of arbitrary norm.

    A remaining set with frame operator S can be completed by q vectors iff
    fewer than q + 1 eigenvalues of S fall short of its largest one.  With
    ``nonzero=True`` every added vector must be nonzero.  Returns
    ``(feasible, witness)``; the witness is re-verified as a tight frame.
    """
    F = as_frame(F)
    tol = tol or DEFAULT_TOL
    if p < 0 or q < 0 or F.k - p < 1:
        raise ContractError("need 0 <= p < k and q >= 0")
    _check_cap(F.k, cap, "surgery search")
    for removed in combinations(range(F.k), p):
        keep = [i for i in range(F.k) if i not in removed]
        S = frame_operator(F.subframe(keep))
        done = _completion(S, q, nonzero, tol)
        if done is None or done[1] is None:
            continue
        lam, added = done
        if not np.iscomplexobj(F.vectors):
            added = np.real(added)
        witness = SurgeryWitness(tuple(removed), added, float(lam))
        if check_tight(witness.apply(F), "direct", tol):
            return True, witness
    return False, None


def surgery_propagation_check(F, witness: SurgeryWitness, r: int, tol: Tolerance = None) -> bool:
    """Build the (r, r - p + q)-surgery implied by a (p, q) witness and test it.

    The r - p extra removals are the last kept vectors; they are added back
    together with the witness's q vectors.
    """
    F = as_frame(F)
    tol = tol or DEFAULT_TOL
    p, q = witness.p, witness.q
    if r <= p or r > F.k:
        raise ContractError(f"r must lie in {p + 1}..{F.k}")
    kept = [i for i in range(F.k) if i not in set(witness.removed)]
    extra = kept[len(kept) - (r - p):]
    removed = sorted(set(witness.removed) | set(extra))
    added = np.vstack([F.vectors[extra], witness.added]) if q else F.vectors[extra]
    result = SurgeryWitness(tuple(removed), added, witness.lam).apply(F)
    if len(removed) != r or len(added) != r - p + q:
        return False
    return check_tight(result, "direct", tol)


def unit_norm_surgery_search(F, p: int, q: int, seed=0, restarts: int = 8,
                             tol: Tolerance = None, cap: int = DEFAULT_SUBSET_CAP):
    """Randomized search for unit-norm (p, q)-surgery.

    Returns ``("feasible", witness)`` when some removal set plus q unit
    vectors is found to be tight, else ``("unknown", None)``; failure to find
    a witness proves nothing.
    """
    from scipy.optimize import least_squares

    F = as_frame(F)
    tol = tol or DEFAULT_TOL
    if F.k - p < 0 or p < 0 or q < 0:
        raise ContractError("need 0 <= p <= k and q >= 0")
    _check_cap(F.k, cap, "surgery search")
    n = F.n
    cplx = F.field == "complex"
    rng = np.random.default_rng(seed)
    iu = np.triu_indices(n)

    for removed in combinations(range(F.k), p):
        keep = [i for i in range(F.k) if i not in removed]
        S = frame_operator(F.subframe(keep)) if keep else np.zeros((n, n))
        lam = (np.trace(S).real + q) / n
        if lam <= 0:
            continue

        def unpack(x):
            g = x.reshape(q, -1)
            g = g[:, :n] + 1j * g[:, n:] if cplx else g
            return g / np.linalg.norm(g, axis=1)[:, None]

        def residual(x):
            g = unpack(x)
            m = S + g.T @ g.conj() - lam * np.eye(n)
            r = m[iu]
            return np.concatenate([r.real, r.imag]) if cplx else r

        if q == 0:
            trials = [np.zeros(0)]
        else:
            trials = [rng.standard_normal(q * n * (2 if cplx else 1)) for _ in range(restarts)]
        for x0 in trials:
            if q:
                x = least_squares(residual, x0, xtol=1e-15, ftol=1e-15, gtol=1e-15).x
                added = unpack(x)
            else:
                added = np.zeros((0, n))
            witness = SurgeryWitness(tuple(removed), added, float(lam))
            out = witness.apply(F) if (keep or q) else None
            if out is not None and out.k >= n and check_tight(out, "direct", tol):
                return "feasible", witness
    return "unknown", None
