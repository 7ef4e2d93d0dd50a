from __future__ import annotations

import random

import pytest
from hypothesis import given, settings, strategies as st

from outerspine import automorphisms as aut
from outerspine.errors import InvalidWitness
from outerspine.folds import (DegenerateEdge, FoldablePair, all_witnesses, apply_fold,
                              fold_to_rose, kn_endpoint_rose, local_injectivity_witness,
                              morphism_preserves_classes, same_point, subdivided_inverse_morphism,
                              verify_kn_path)
from outerspine.marked_graphs import Rose, roses_equal

RHO = Rose.from_text("ab,b")


def roses(n, max_factors=8):
    return st.tuples(st.integers(0, max_factors), st.integers(0, 2**32)).map(
        lambda p: Rose(aut.random_automorphism(n, p[0], random.Random(p[1]))))


def check_path(rho, path):
    assert verify_kn_path(path)
    assert verify_kn_path(path.reversed())
    assert roses_equal(kn_endpoint_rose(path), Rose.standard(rho.n))
    assert all(a > b for a, b in zip(path.edge_counts, path.edge_counts[1:]))
    assert same_point(path.points[0], rho.marked_graph())


def test_single_fold_example():
    path = fold_to_rose(RHO)
    assert [m.kind for m in path.moves] == ["Fold"]
    assert len(path.steps) == 2
    assert [d for d, _ in path.steps] == ["blowup", "collapse"]
    check_path(RHO, path)


def test_standard_rose_needs_no_folds():
    path = fold_to_rose(Rose.standard(3))
    assert path.moves == [] and path.steps == []
    assert verify_kn_path(path)


def test_subdivided_morphism_of_example():
    m = subdivided_inverse_morphism(RHO)
    # x1 -> x1 X2 subdivided once, x2 a single edge
    assert len(m.source) == 3 and len(m.source.vertices) == 2
    assert local_injectivity_witness(m) == FoldablePair(3, 4)
    assert all_witnesses(m) == [FoldablePair(3, 4)]


def test_invalid_witnesses_rejected():
    m = subdivided_inverse_morphism(RHO)
    with pytest.raises(InvalidWitness):
        apply_fold(m, FoldablePair(0, 2))
    with pytest.raises(InvalidWitness):
        apply_fold(m, DegenerateEdge(0))
    with pytest.raises(InvalidWitness):
        apply_fold(m, "nonsense")


def test_history_morphisms_preserve_classes():
    rho = Rose.from_text("aba,ab")
    path = fold_to_rose(rho, keep_history=True)
    for morphism, marking in path.history:
        assert morphism_preserves_classes(morphism, marking)


def test_same_point_distinguishes():
    assert not same_point(RHO.marked_graph(), Rose.standard(2).marked_graph())
    sigma = aut.signed_permutation([1, 0], [1, -1])
    assert same_point(RHO.marked_graph(), RHO.relabeled(sigma).marked_graph())


@settings(max_examples=40, deadline=None)
@given(roses(3))
def test_fold_path_properties(rho):
    check_path(rho, fold_to_rose(rho))


@settings(max_examples=40, deadline=None)
@given(roses(3), st.integers(0, 2**32))
def test_random_witness_order_still_connects(rho, seed):
    check_path(rho, fold_to_rose(rho, rng=random.Random(seed)))
