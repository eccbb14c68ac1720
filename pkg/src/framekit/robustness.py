"""Maximum robustness of a frame to erasures.

Three independent routes compute rob(F), the largest r such that deleting
any r vectors leaves a spanning set:

* :func:`rob_bruteforce` - the definition, checking every subset;
* :func:`rob_max_nonspanning` - k - 1 - (size of a largest non-spanning set),
  searched over hyperplanes spanned by frame vectors;
* :func:`rob_supports` - largest r accepted by :func:`robust_to`, which tests
  membership of complements in the null-space supports of the synthesis
  matrix.

Index sets are 0-based sorted tuples.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import floor

import numpy as np

from .errors import ContractError, NotAFrameError, ResourceLimitError
from .frame import Frame, as_frame, synthesis_operator
from .numerics import (
    DEFAULT_TOL,
    Tolerance,
    as_matrix,
    hermitian_eigenvalues,
    is_orthonormal,
    null_space_basis,
    orthogonal_complement_basis,
    rank,
    spans,
)

DEFAULT_ENUM_CAP = 24
DEFAULT_SUPPORT_CAP = 20


def _require_frame(F, tol):
    if not spans(F.vectors, F.n, tol):
        raise NotAFrameError(f"the {F.k} vectors do not span the {F.n}-dimensional space")


def _zero_mask(F, tol) -> np.ndarray:
    nrm = np.linalg.norm(F.vectors, axis=1)
    return nrm <= tol.threshold(nrm.max())


def strip_zeros(F, tol: Tolerance = None) -> Frame:
    """Drop zero vectors; robustness is unchanged by this."""
    F = as_frame(F)
    tol = tol or DEFAULT_TOL
    keep = ~_zero_mask(F, tol)
    if not keep.any():
        raise ContractError("every vector of the frame is zero")
    return F.subframe(np.flatnonzero(keep))


def rob_bruteforce(F, tol: Tolerance = None, cap: int = DEFAULT_ENUM_CAP) -> int:
    """Largest r such that every (k - r)-subset spans, by exhaustive search."""
    F = as_frame(F)
    tol = tol or DEFAULT_TOL
    _require_frame(F, tol)
    if F.k > cap:
        raise ResourceLimitError(f"brute force over k={F.k} vectors exceeds cap {cap}")
    k, n = F.k, F.n
    r = 0
    while r + 1 <= k - n:
        if all(spans(F.vectors[list(keep)], n, tol) for keep in combinations(range(k), k - r - 1)):
            r += 1
        else:
            break
    return r


def _hyperplanes(F, tol) -> dict:
    """Map each hyperplane spanned by frame vectors to a unit normal.

    Keys are the index sets of frame vectors lying in the hyperplane.
    """
    n = F.n
    nrm = np.linalg.norm(F.vectors, axis=1)
    nonzero = np.flatnonzero(~_zero_mask(F, tol))
    found = {}
    for combo in combinations(nonzero.tolist(), n - 1):
        sub = F.vectors[list(combo)]
        comp = orthogonal_complement_basis(sub, n, tol)
        if comp.shape[0] != 1:
            continue
        y = comp[0]
        inner = F.vectors @ y.conj()
        members = tuple(np.flatnonzero(np.abs(inner) <= tol.rel_eps * nrm).tolist())
        found.setdefault(members, y)
    return found


def _largest_hyperplane(planes: dict):
    best = max(len(m) for m in planes)
    return min(m for m in planes if len(m) == best)


def rob_max_nonspanning(F, tol: Tolerance = None):
    """Return ``(rob, I0)`` with I0 a largest non-spanning index set.

    A largest non-spanning set is the full set of frame vectors inside some
    hyperplane spanned by n - 1 frame vectors, so only C(k, n-1) candidates
    are examined.  Ties are broken by the lexicographically smallest set.
    """
    F = as_frame(F)
    tol = tol or DEFAULT_TOL
    _require_frame(F, tol)
    i0 = _largest_hyperplane(_hyperplanes(F, tol))
    return F.k - 1 - len(i0), i0


def _support_threshold(m: int, tol: Tolerance) -> float:
    # null vectors are unit-norm, so the entry cutoff is dimensionless
    return max(tol.rel_eps * max(m, 1), tol.abs_floor)


def is_null_support(a, cols, tol: Tolerance = None) -> bool:
    """True iff the null space of the column submatrix a[:, cols] has vectors
    whose supports cover every one of those columns."""
    tol = tol or DEFAULT_TOL
    cols = list(cols)
    if not cols:
        return True
    sub = as_matrix(a)[:, cols]
    basis = null_space_basis(sub, tol)
    if basis.shape[0] == 0:
        return False
    covered = np.any(np.abs(basis) > _support_threshold(len(cols), tol), axis=0)
    return bool(covered.all())


def null_space_supports(a, tol: Tolerance = None, cap: int = DEFAULT_SUPPORT_CAP) -> set:
    """All column sets M such that null(a[:, M]) has supports covering M.

    A recursion that includes or excludes one column at a time reaches
    every subset exactly once, so the subsets are enumerated directly.
    The empty set is always included.
    """
    tol = tol or DEFAULT_TOL
    a = as_matrix(a)
    m = a.shape[1]
    if m > cap:
        raise ResourceLimitError(f"support enumeration over {m} columns exceeds cap {cap}")
    out = set()
    for mask in range(1 << m):
        cols = tuple(j for j in range(m) if mask >> j & 1)
        if is_null_support(a, cols, tol):
            out.add(cols)
    return out


def robust_to(F, r: int, tol: Tolerance = None) -> bool:
    """Whether deleting any r vectors leaves a frame, via null-space supports.

    For r >= 1 this holds iff for every index set I with |I| = r - 1 the
    complement of I is the support of a vector in null(synthesis).
    """
    F = as_frame(F)
    tol = tol or DEFAULT_TOL
    if r < 0 or r > F.k:
        raise ContractError(f"erasure count r={r} outside 0..{F.k}")
    _require_frame(F, tol)
    if r == 0:
        return True
    a = synthesis_operator(F)
    everything = set(range(F.k))
    for erased in combinations(range(F.k), r - 1):
        if not is_null_support(a, sorted(everything.difference(erased)), tol):
            return False
    return True


def robust_to_one(F, tol: Tolerance = None) -> bool:
    """A frame survives one erasure iff some null vector of the synthesis
    matrix has no zero entries."""
    F = as_frame(F)
    return is_null_support(synthesis_operator(F), range(F.k), tol)


def rob_supports(F, tol: Tolerance = None) -> int:
    F = as_frame(F)
    r = 0
    while r < F.k and robust_to(F, r + 1, tol):
        r += 1
    return r


def nonzero_inner_products(F, y, tol: Tolerance = None) -> np.ndarray:
    """Mask of the i with <f_i, y> nonzero, relative to |f_i| |y|."""
    F = as_frame(F)
    tol = tol or DEFAULT_TOL
    nrm = np.linalg.norm(F.vectors, axis=1)
    inner = F.vectors @ np.conj(y)
    return np.abs(inner) > tol.rel_eps * nrm * np.linalg.norm(y)


def robustness_witness(F, tol: Tolerance = None) -> np.ndarray:
    """Unit y orthogonal to a largest non-spanning set.

    Exactly rob(F) + 1 of the inner products <f_i, y> are nonzero.
    """
    F = as_frame(F)
    tol = tol or DEFAULT_TOL
    _, i0 = rob_max_nonspanning(F, tol)
    comp = orthogonal_complement_basis(F.vectors[list(i0)], F.n, tol)
    return comp[0]


def spanning_subset_count(F, tol: Tolerance = None, cap: int = DEFAULT_ENUM_CAP):
    """Return ``(|S|, floor(log2 |S|))`` where S is the set of spanning index sets.

    Non-spanning sets are counted through their closures: every subset whose
    span is a proper subspace has a closure that is a flat of rank < n, and
    the number of subsets with closure exactly F is 2^|F| minus the counts of
    the flats strictly inside F.
    """
    F = as_frame(F)
    tol = tol or DEFAULT_TOL
    _require_frame(F, tol)
    if F.k > cap:
        raise ResourceLimitError(f"spanning-set count over k={F.k} vectors exceeds cap {cap}")
    k, n = F.k, F.n
    vecs = F.vectors
    nrm = np.linalg.norm(vecs, axis=1)
    nonzero = np.flatnonzero(~_zero_mask(F, tol)).tolist()

    flats = set()
    for size in range(n):
        for combo in combinations(nonzero, size):
            sub = vecs[list(combo)]
            if size and rank(sub, tol) < size:
                continue
            # closure of the subset: every vector with no component off its span
            perp = orthogonal_complement_basis(sub, n, tol)
            resid = np.linalg.norm(vecs @ perp.conj().T, axis=1)
            inside = np.flatnonzero(resid <= tol.rel_eps * nrm)
            flats.add(sum(1 << int(i) for i in inside))

    ordered = sorted(flats, key=lambda f: bin(f).count("1"))
    exact = {}
    for f in ordered:
        exact[f] = (1 << bin(f).count("1")) - sum(c for g, c in exact.items() if g != f and g & f == g)
    count = (1 << k) - sum(exact.values())
    return count, count.bit_length() - 1


def redundancy(F, x, tol: Tolerance = None) -> float:
    """Sum over i of |P_{span f_i} x|^2 for a unit vector x."""
    F = as_frame(F)
    tol = tol or DEFAULT_TOL
    x = np.asarray(x)
    if x.shape != (F.n,):
        raise ContractError(f"x must have length {F.n}")
    if abs(np.linalg.norm(x) - 1) > max(tol.rel_eps * 1e2, 1e-8):
        raise ContractError("redundancy is defined on unit vectors only")
    u = strip_zeros(F, tol).vectors
    u = u / np.linalg.norm(u, axis=1)[:, None]
    return float(np.sum(np.abs(u @ np.conj(x)) ** 2))


def redundancy_bounds(F, tol: Tolerance = None):
    """(lower, upper) redundancy: extreme eigenvalues of sum u_i u_i^*, u_i = f_i/|f_i|."""
    F = as_frame(F)
    tol = tol or DEFAULT_TOL
    u = strip_zeros(F, tol).vectors
    u = u / np.linalg.norm(u, axis=1)[:, None]
    w = hermitian_eigenvalues(u.T @ u.conj(), tol)
    return float(w[-1]), float(w[0])


def _floor_snapped(x: float, tol: Tolerance) -> int:
    nearest = round(x)
    if abs(x - nearest) <= tol.threshold(max(1.0, abs(x))) * 1e2:
        return int(nearest)
    return floor(x)


def rob_bounds(F, tol: Tolerance = None, cap: int = DEFAULT_ENUM_CAP):
    """``(lower, upper)`` with max(0, floor(R-) - 1) <= rob <= min(floor(log2|S|), k - n)."""
    F = as_frame(F)
    tol = tol or DEFAULT_TOL
    lower, log2_bound = _bounds_parts(F, tol, cap)
    return lower, min(log2_bound, F.k - F.n)


def _bounds_parts(F, tol, cap):
    r_minus, _ = redundancy_bounds(F, tol)
    _, log2_bound = spanning_subset_count(F, tol, cap)
    return max(0, _floor_snapped(r_minus, tol) - 1), log2_bound


@dataclass
class RobustnessReport:
    rob: int
    max_nonspanning: tuple
    witness_y: np.ndarray
    lower_bound: int
    upper_bounds: dict


def robustness_report(F, tol: Tolerance = None, cap: int = DEFAULT_ENUM_CAP) -> RobustnessReport:
    F = as_frame(F)
    tol = tol or DEFAULT_TOL
    rob, i0 = rob_max_nonspanning(F, tol)
    y = orthogonal_complement_basis(F.vectors[list(i0)], F.n, tol)[0]
    lower, log2_bound = _bounds_parts(F, tol, cap)
    return RobustnessReport(
        rob=rob,
        max_nonspanning=i0,
        witness_y=y,
        lower_bound=lower,
        upper_bounds={"log2_spanning": log2_bound, "k_minus_n": F.k - F.n},
    )


def witness_inner_products(F, y) -> np.ndarray:
    """<f_i, y> for every frame vector."""
    return as_frame(F).vectors @ np.conj(y)


def projection_preserves_rob(F, u_basis, tol: Tolerance = None) -> bool:
    """Whether projecting onto U = span(u_basis) keeps the maximum robustness.

    True iff some largest non-spanning set has its (one-dimensional)
    orthogonal complement inside U.
    """
    F = as_frame(F)
    tol = tol or DEFAULT_TOL
    b = np.asarray(u_basis)
    b = b.reshape(-1, F.n) if b.size else np.zeros((0, F.n))
    if not is_orthonormal(b):
        raise ContractError("u_basis must be orthonormal")
    _require_frame(F, tol)
    planes = _hyperplanes(F, tol)
    best = max(len(m) for m in planes)
    for members, y in planes.items():
        if len(members) != best:
            continue
        resid = y - (b.conj() @ y) @ b if b.shape[0] else y
        if np.linalg.norm(resid) <= max(tol.rel_eps * 1e2, 1e-8):
            return True
    return False


def project_frame(F, u_basis) -> Frame:
    """Coordinates of P f_i in the orthonormal basis of U, as a frame for U."""
    F = as_frame(F)
    b = np.atleast_2d(np.asarray(u_basis))
    coords = F.vectors @ b.conj().T
    field = "complex" if F.field == "complex" or np.iscomplexobj(b) else "real"
    return Frame(coords, field)
