from __future__ import annotations

import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from outerspine import automorphisms as aut
from outerspine.errors import DegenerateSubset, HypothesesViolated, IncompatibleEdges, NotDisjoint
from outerspine.free_words import classes_up_to, cyclic_reduce
from outerspine.marked_graphs import Comparison, Rose, compare_norm, roses_equal
from outerspine.verify import sample_roses
from outerspine.whitehead import (IdealEdge, blowup_with_tree, collapse_petal, compatible,
                                  count_identity_check, crosses, dot, half_edge_name,
                                  half_edge_set, ideal_edges, ideal_trees, is_ideal,
                                  is_reductive_edge, is_reductive_tree,
                                  is_strictly_reductive_tree, key_lemma_check, key_lemma_gamma,
                                  margin_vector, max_reductive_edge, maximal_pairs, pair_for,
                                  pair_of, reductive_edges, reductive_pairs, size, star_graph,
                                  validate_tree, valence_vector, whitehead_reduce)

R0 = Rose.standard(2)
RHO = Rose.from_text("ab,b")


def roses(n, max_factors=8):
    return st.tuples(st.integers(0, max_factors), st.integers(0, 2**32)).map(
        lambda p: Rose(aut.random_automorphism(n, p[0], random.Random(p[1]))))


# oracles ---------------------------------------------------------------------------

def oracle_edge_sides(n):
    """Subsets of H up to complement that split some pair and have at
    least two half-edges on each side."""
    h = set(range(2 * n))
    out = set()
    for r in range(2, 2 * n - 1):
        for a in itertools.combinations(sorted(h), r):
            a = frozenset(a)
            b = frozenset(h - a)
            if len(b) < 2 or not any((x in a) != (x ^ 1 in a) for x in h):
                continue
            out.add(min(a, b, key=lambda s: (0 not in s, sorted(s))))
    return out


def oracle_compatible(a, b):
    return any(not (x & y) for x in a.sides for y in b.sides)


# star graphs and dot products ---------------------------------------------------------

def test_half_edge_names():
    assert pair_of(0) == 1 and pair_of(3) == 2
    assert [half_edge_name(h) for h in range(4)] == ["e1", "E1", "e2", "E2"]


def test_star_graph_of_generator():
    sg = star_graph(R0, (1,))
    assert sg.edges == ((0, 1),)
    assert sg.valences() == [1, 1, 0, 0]


def test_four_petal_example_valences():
    sg = star_graph(Rose.standard(4), (2, -4, 3, 3))
    v = sg.valences()
    assert sorted((v[2 * i] + v[2 * i + 1] for i in range(4)), reverse=True) == [4, 2, 2, 0]
    assert sum(v) == 8


def test_dot_and_size_errors():
    with pytest.raises(NotDisjoint):
        dot(RHO, {0, 1}, {1, 2})
    with pytest.raises(DegenerateSubset):
        size(RHO, set())
    with pytest.raises(DegenerateSubset):
        size(RHO, half_edge_set(2))
    with pytest.raises(ValueError):
        dot(RHO, {7}, {0})


def test_size_counts_crossings():
    # |{e1}| is the number of times the loop uses petal 1
    s = size(RHO, {0})
    for c in classes_up_to(2, 3):
        assert s[c] == valence_vector(RHO, 0)[c]


@settings(max_examples=80, deadline=None)
@given(roses(3), st.sets(st.integers(0, 5)), st.sets(st.integers(0, 5)))
def test_count_identity(rho, a, b):
    assert count_identity_check(rho, a, b, 3)


@settings(max_examples=60, deadline=None)
@given(roses(3), st.integers(1, 5), st.integers(0, 2**32))
def test_star_graph_valence_law(rho, k, seed):
    rng = random.Random(seed)
    w = tuple(rng.choice([1, -1]) * rng.randint(1, 3) for _ in range(k))
    w = cyclic_reduce(w)
    if not w:
        return
    sg = star_graph(rho, w)
    assert sum(sg.valences()) == 2 * rho.length(w)
    assert len(sg.edges) == rho.length(w)


# ideal edges and trees ----------------------------------------------------------------

@pytest.mark.parametrize("n, count", [(2, 2), (3, 22), (4, 112)])
def test_ideal_edge_counts(n, count):
    edges = ideal_edges(n)
    assert len(edges) == count
    assert {e.side for e in edges} == oracle_edge_sides(n)


def test_ideal_edge_normalizes_side():
    e = IdealEdge(2, {1, 2})
    assert e.side == frozenset({0, 3}) and e.complement == frozenset({1, 2})
    assert e == IdealEdge(2, {0, 3})
    assert e.separates(0) and str(e) == "{e1,E2|E1,e2}"
    assert not is_ideal({0, 1}, 2)
    with pytest.raises(ValueError):
        IdealEdge(2, set())


def test_compatibility_matches_oracle():
    edges = ideal_edges(3)
    for a, b in itertools.combinations(edges, 2):
        assert compatible(a, b) == oracle_compatible(a, b) == (not crosses(a, b))


def test_ideal_tree_counts_match_brute_force():
    assert len(ideal_trees(2)) == 2
    edges = ideal_edges(3)
    brute = set()
    for k in range(1, 5):
        for combo in itertools.combinations(edges, k):
            if all(oracle_compatible(a, b) for a, b in itertools.combinations(combo, 2)):
                brute.add(frozenset(combo))
    assert set(ideal_trees(3)) == brute
    assert len(brute) == 168
    assert max(len(t) for t in brute) == 3


def test_validate_tree_rejects_crossing():
    edges = ideal_edges(3)
    a, b = next((a, b) for a, b in itertools.combinations(edges, 2) if crosses(a, b))
    with pytest.raises(IncompatibleEdges):
        validate_tree([a, b])


@pytest.mark.parametrize("n", [2, 3])
def test_blowups_are_marked_graphs(n):
    rho = Rose(aut.random_automorphism(n, 5, random.Random(n)))
    for t in ideal_trees(n):
        b = blowup_with_tree(rho, t)
        m = b.marked.validate()
        assert len(m.graph) == n + len(t)
        assert len(b.tree) == len(t)
        assert roses_equal(m.collapse(b.tree).to_rose(), rho)


def test_collapse_petal_requires_separated_petal():
    e = IdealEdge(2, {0, 2})
    assert compare_norm(collapse_petal(R0, e, 0), R0) == Comparison.GREATER
    with pytest.raises(ValueError):
        collapse_petal(R0, IdealEdge(3, {0, 1, 2}), 0)


# reductive pairs ----------------------------------------------------------------------

def test_standard_rose_has_no_reductive_edges():
    for n in (2, 3):
        assert reductive_edges(Rose.standard(n)) == []
        assert max_reductive_edge(Rose.standard(n)) is None


def test_single_transvection_reduces():
    red = reductive_edges(RHO)
    assert len(red) == 1
    pairs = reductive_pairs(RHO, red[0])
    assert len(pairs) == 4
    assert all(compare_norm(p.collapsed, RHO) == Comparison.LESS for p in pairs)
    assert sum(roses_equal(p.collapsed, R0) for p in pairs) == 2
    # (A, a) and (H - A, a bar) collapse the same petal
    by_petal = {}
    for p in pairs:
        by_petal.setdefault(p.half_edge // 2, set()).add(p.collapsed.phi)
    assert all(len(v) == 1 for v in by_petal.values())
    assert pair_for(RHO, pairs[0].side, pairs[0].half_edge) == pairs[0]
    with pytest.raises(ValueError):
        pair_for(RHO, {0, 1}, 0)


@settings(max_examples=40, deadline=None)
@given(roses(3))
def test_margin_from_star_graphs_matches_collapse(rho):
    """|h| - |A| computed on star graphs equals ||rho|| - ||collapsed||."""
    for e in ideal_edges(3)[::3]:
        for side in e.sides:
            for h in sorted(side):
                if pair_of(h) in side:
                    continue
                v = margin_vector(rho, side, h)
                r = collapse_petal(rho, e, h)
                for c in classes_up_to(3, 3):
                    assert v[c] == rho.length(c) - r.length(c)


@settings(max_examples=25, deadline=None)
@given(roses(3))
def test_factorization(rho):
    for t in ideal_trees(3):
        if is_reductive_tree(rho, t):
            assert any(is_reductive_edge(rho, e) for e in t)
        if is_strictly_reductive_tree(rho, t):
            assert is_reductive_tree(rho, t)


def test_maximal_pairs_share_margin():
    rho = Rose.from_text("abc,bc,c")
    best = maximal_pairs(rho)
    assert best
    for p in best:
        assert compare_norm(p.collapsed, best[0].collapsed) == Comparison.EQUAL
    top = max_reductive_edge(rho)
    assert top == best[0]


# the Key Lemma ----------------------------------------------------------------------

def test_key_lemma_on_samples():
    instances = 0
    for rho in sample_roses(40, 3, (3,)):
        rep = key_lemma_check(rho)
        assert rep.ok, rep.as_dict()
        instances += rep.instances
    assert instances > 0


def test_key_lemma_rank_two_is_vacuous():
    for rho in sample_roses(40, 1, (2,)):
        assert key_lemma_check(rho).instances == 0


def test_key_lemma_gamma_hypotheses():
    rho = next(r for r in sample_roses(200, 3, (3,)) if key_lemma_check(r).instances)
    mp = max_reductive_edge(rho)
    red = reductive_edges(rho)
    alpha = next(a for a in red if crosses(a, mp.edge))
    gamma = key_lemma_gamma(rho, mp.edge, mp, alpha)
    assert is_reductive_edge(rho, gamma)
    assert compatible(gamma, alpha) and compatible(gamma, mp.edge)
    # the (M, m) form gives the same answer
    assert key_lemma_gamma(rho, mp.edge, (mp.side, mp.half_edge), alpha) == gamma
    with pytest.raises(HypothesesViolated):
        key_lemma_gamma(rho, mp.edge, mp, mp.edge)
    with pytest.raises(HypothesesViolated):
        key_lemma_gamma(rho, mp.edge, (mp.side, pair_of(mp.half_edge)), alpha)
    nonred = [a for a in ideal_edges(3) if a not in red and crosses(a, mp.edge)]
    if nonred:
        with pytest.raises(HypothesesViolated):
            key_lemma_gamma(rho, mp.edge, mp, nonred[0])


# descent -----------------------------------------------------------------------------

def test_descent_example():
    fixed, trace = whitehead_reduce(RHO)
    assert len(trace) == 1 and roses_equal(fixed, R0)
    assert trace[0].as_dict()["result"] == fixed.text()


@settings(max_examples=40, deadline=None)
@given(roses(2, 10))
def test_rank_two_descent_reaches_standard_rose(rho):
    fixed, trace = whitehead_reduce(rho)
    assert roses_equal(fixed, R0)
    for s in trace:
        assert compare_norm(s.after, s.before) == Comparison.LESS


@settings(max_examples=25, deadline=None)
@given(roses(3))
def test_rank_three_descent_stops_without_reductive_edges(rho):
    fixed, trace = whitehead_reduce(rho)
    assert reductive_edges(fixed) == []
    for a, b in zip(trace, trace[1:]):
        assert a.after == b.before
