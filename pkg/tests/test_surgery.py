import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from framekit import Frame, check_tight, diagram_vectors, is_unit_norm, spans
from framekit.construct import harmonic_frame, mercedes_benz, random_frame
from framekit.errors import ContractError, ResourceLimitError
from framekit.surgery import (
    SurgeryWitness,
    is_tight_subframe,
    pq_surgery_feasible_unrestricted,
    pq_surgery_necessary,
    subframe_complement_check,
    surgery_propagation_check,
    tight_subframes,
    unit_norm_subframe_rowsum_check,
    unit_norm_surgery_search,
)

from generators import random_tight_union


def test_tight_subframes_examples(doubled_basis, mb, onb2):
    res = tight_subframes(doubled_basis)
    assert res.index_sets == [(0, 1), (0, 3), (1, 2), (2, 3)]
    assert all(np.isclose(lam, 1) for _, lam in res.subframes)
    assert len(tight_subframes(mb)) == 0
    assert len(tight_subframes(onb2)) == 0


def test_tight_subframes_of_doubled_mercedes_benz(mb):
    F = Frame(np.vstack([mb.vectors, mb.vectors]))
    sets = tight_subframes(F).index_sets
    # one vector from each of the three directions: 2^3 choices
    assert len(sets) == 8
    assert all(sorted(i % 3 for i in s) == [0, 1, 2] for s in sets)


def test_tight_subframes_errors():
    with pytest.raises(ContractError):
        tight_subframes(Frame([[1.0], [2.0]]))
    with pytest.raises(ResourceLimitError):
        tight_subframes(random_frame(12, 2, rng=0), cap=10)


def test_subframe_complement_examples(doubled_basis, mb):
    assert subframe_complement_check(doubled_basis, [0, 1])
    assert subframe_complement_check(doubled_basis, [0, 3])
    assert subframe_complement_check(Frame(np.vstack([mb.vectors, mb.vectors])), [0, 1, 2])
    with pytest.raises(ContractError):
        subframe_complement_check(Frame([[3.0, 0.0], [0.0, 1.0]]), [0])


def test_rowsum_examples(doubled_basis, mb):
    assert unit_norm_subframe_rowsum_check(doubled_basis, [0, 1])
    assert not unit_norm_subframe_rowsum_check(doubled_basis, [0, 2])
    assert unit_norm_subframe_rowsum_check(mb, [0, 1, 2])
    with pytest.raises(ContractError):
        unit_norm_subframe_rowsum_check(Frame([[2.0, 0.0], [0.0, 1.0]]), [0, 1])
    with pytest.raises(ContractError):
        unit_norm_subframe_rowsum_check(mb, [])


def test_pq_necessary_examples(doubled_basis, mb):
    assert pq_surgery_necessary(doubled_basis, [0], 1)
    assert not pq_surgery_necessary(doubled_basis, [0], 0)
    assert pq_surgery_necessary(mb, [], 0)
    with pytest.raises(ContractError):
        pq_surgery_necessary(Frame([[2.0, 0.0], [0.0, 2.0]]), [], 0)
    with pytest.raises(ContractError):
        pq_surgery_necessary(Frame([[1.0, 0.0], [1.0, 0.0], [0.0, 1.0]]), [], 0)


def test_unrestricted_surgery_examples(onb2, mb):
    ok, w = pq_surgery_feasible_unrestricted(onb2, 1, 1)
    assert ok and w.removed == (0,)
    assert np.allclose(np.abs(w.added), [[1, 0]])
    assert check_tight(w.apply(onb2))
    ok, w = pq_surgery_feasible_unrestricted(mb, 0, 0)
    assert ok and w.p == 0 and w.q == 0
    assert pq_surgery_feasible_unrestricted(mb, 0, 1, nonzero=True) == (False, None)
    # a zero vector is a trivial addition
    ok, w = pq_surgery_feasible_unrestricted(mb, 0, 1)
    assert ok and not np.any(w.added)


def test_unrestricted_surgery_errors(mb):
    with pytest.raises(ContractError):
        pq_surgery_feasible_unrestricted(mb, 3, 1)
    with pytest.raises(ResourceLimitError):
        pq_surgery_feasible_unrestricted(random_frame(25, 2, rng=0), 1, 1)


def test_unrestricted_surgery_infeasible_case():
    # three distinct directions in R^3 plus a repeat: removing nothing, one added
    # vector cannot fix a frame operator with three distinct eigenvalues
    F = Frame(np.diag([1.0, 2.0, 3.0]))
    assert pq_surgery_feasible_unrestricted(F, 0, 1) == (False, None)
    ok, w = pq_surgery_feasible_unrestricted(F, 0, 2)
    assert ok and np.isclose(w.lam, 9)


def test_propagation_examples(doubled_basis, mb):
    ok, w = pq_surgery_feasible_unrestricted(doubled_basis, 1, 1)
    assert ok and surgery_propagation_check(doubled_basis, w, 2)
    trivial = SurgeryWitness((), np.zeros((0, 2)), 1.5)
    assert surgery_propagation_check(mb, trivial, 1)
    assert surgery_propagation_check(doubled_basis, w, doubled_basis.k)
    with pytest.raises(ContractError):
        surgery_propagation_check(doubled_basis, w, 1)
    with pytest.raises(ContractError):
        surgery_propagation_check(doubled_basis, w, 5)


def test_unit_norm_search(doubled_basis, mb):
    status, w = unit_norm_surgery_search(doubled_basis, 1, 1, seed=0)
    assert status == "feasible"
    assert np.allclose(np.linalg.norm(w.added, axis=1), 1)
    assert check_tight(w.apply(doubled_basis))
    assert pq_surgery_necessary(doubled_basis, w.removed, w.q)
    # one unit vector cannot rebalance a tight frame in R^2
    assert unit_norm_surgery_search(mb, 0, 1, seed=0, restarts=3) == ("unknown", None)


# properties ---------------------------------------------------------------

unions = st.builds(
    lambda n, field, seed, unit: random_tight_union(n, field, np.random.default_rng(seed), unit_norm=unit),
    st.integers(2, 3), st.sampled_from(["real", "complex"]), st.integers(0, 10**6), st.booleans(),
)


@given(unions)
@settings(max_examples=40, deadline=None)
def test_subframe_duality_and_size_law(F):
    sets = set(tight_subframes(F).index_sets)
    everything = set(range(F.k))
    for s in sets:
        assert tuple(sorted(everything - set(s))) in sets
        assert subframe_complement_check(F, s)
    if F.k < 2 * F.n:
        assert not sets


@given(unions)
@settings(max_examples=30, deadline=None)
def test_rowsum_matches_diagram_sum(F):
    if not is_unit_norm(F):
        return
    d = diagram_vectors(F)
    rng = np.random.default_rng(F.k)
    for mask in range(1, 1 << F.k):
        idx = [i for i in range(F.k) if mask >> i & 1]
        direct = np.linalg.norm(d[idx].sum(axis=0)) <= 1e-9 and spans(F.vectors[idx], F.n)
        assert unit_norm_subframe_rowsum_check(F, idx) == bool(direct)
        assert is_tight_subframe(F, idx) == bool(direct)
        if mask > 200 and rng.random() < 0.9:
            break


@given(st.integers(2, 3), st.sampled_from(["real", "complex"]), st.integers(0, 10**6),
       st.integers(0, 2), st.integers(0, 3))
@settings(max_examples=40, deadline=None)
def test_unrestricted_witness_propagates(n, field, seed, p, q):
    F = random_frame(n + 2, n, field, seed)
    ok, w = pq_surgery_feasible_unrestricted(F, p, q)
    if q >= n:
        assert ok
    if not ok:
        return
    out = w.apply(F)
    s = out.vectors.T @ out.vectors.conj()
    assert np.allclose(s, w.lam * np.eye(n), atol=1e-8 * max(1, w.lam))
    for r in range(p + 1, F.k + 1):
        assert surgery_propagation_check(F, w, r)


@given(st.integers(4, 6), st.integers(0, 10**6), st.integers(1, 2))
@settings(max_examples=10, deadline=None)
def test_necessity_on_found_witnesses(k, seed, p):
    F = harmonic_frame(k, 2, "real")
    status, w = unit_norm_surgery_search(F, p, p, seed=seed, restarts=3)
    if status == "feasible":
        assert pq_surgery_necessary(F, w.removed, w.q)
