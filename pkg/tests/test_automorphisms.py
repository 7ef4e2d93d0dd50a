from __future__ import annotations

import random

import pytest
from hypothesis import given, settings, strategies as st

from outerspine import automorphisms as aut
from outerspine.errors import NotInvertible


def auts(n, max_factors=8):
    return st.tuples(st.integers(0, max_factors), st.integers(0, 2**32)).map(
        lambda p: aut.random_automorphism(n, p[0], random.Random(p[1])))


def test_apply_and_compose():
    phi = ((1, 2), (2,))
    assert aut.apply(phi, (1, -2)) == (1,)
    psi = ((1, -2), (2,))
    assert aut.compose(phi, psi) == aut.identity(2)


def test_conjugation_is_inner():
    c = aut.conjugation(2, (2,))
    assert c == ((2, 1, -2), (2,))


def test_signed_permutation():
    sigma = aut.signed_permutation([1, 0], [1, -1])
    assert sigma == ((2,), (-1,))
    assert aut.is_signed_permutation(sigma)
    assert not aut.is_signed_permutation(((1, 2), (2,)))


def test_invert_examples():
    assert aut.invert(((1, 2), (2,))) == ((1, -2), (2,))
    assert aut.invert(aut.identity(3)) == aut.identity(3)


@pytest.mark.parametrize("phi", [((1, 1), (2,)), ((1, 2, -1), (2,)), ((1,), (1,)), ((2, 2), (1,))])
def test_non_automorphisms(phi):
    assert not aut.is_automorphism(phi)
    with pytest.raises(NotInvertible):
        aut.invert(phi)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_nielsen_factors_invertible(n):
    gens = aut.nielsen_factors(n)
    assert len(gens) == len(set(gens))
    assert all(aut.is_automorphism(g) for g in gens)


def test_random_automorphism_is_seeded():
    a = aut.random_automorphism(3, 10, random.Random(7))
    assert a == aut.random_automorphism(3, 10, random.Random(7))


@settings(max_examples=60, deadline=None)
@given(auts(3, 10))
def test_inverse_is_two_sided(phi):
    psi = aut.invert(phi)
    assert aut.compose(phi, psi) == aut.identity(3)
    assert aut.compose(psi, phi) == aut.identity(3)


@settings(max_examples=40, deadline=None)
@given(auts(2), auts(2), auts(2))
def test_compose_associative(a, b, c):
    assert aut.compose(aut.compose(a, b), c) == aut.compose(a, aut.compose(b, c))
