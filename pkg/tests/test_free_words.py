from __future__ import annotations

import itertools

import pytest
from hypothesis import given, strategies as st

from outerspine.errors import WordParseError
from outerspine.free_words import (ClassStream, canonical_class, classes_of_length, classes_up_to,
                                   cyclic_reduce, enumerate_classes, format_word, free_reduce,
                                   inverse, is_canonical, letter_key, parse_word, rotations,
                                   word_key)


def letters(n):
    return [x for i in range(1, n + 1) for x in (i, -i)]


def words(n, max_len=8):
    return st.lists(st.sampled_from(letters(n)), max_size=max_len).map(tuple)


# independent oracles ----------------------------------------------------------

def oracle_reduce(w):
    w = list(w)
    changed = True
    while changed:
        changed = False
        for i in range(len(w) - 1):
            if w[i] == -w[i + 1]:
                del w[i:i + 2]
                changed = True
                break
    return tuple(w)


def oracle_classes(n, max_len):
    """Brute force: every word, cyclically reduced by rotation search, then
    the smallest rotation of it or its inverse."""
    reps = set()
    for k in range(1, max_len + 1):
        for w in itertools.product(letters(n), repeat=k):
            w = oracle_reduce(w)
            while len(w) >= 2 and w[0] == -w[-1]:
                w = w[1:-1]
            if not w or len(w) != k:
                continue
            inv = tuple(-x for x in reversed(w))
            cands = [u[i:] + u[:i] for u in (w, inv) for i in range(len(u))]
            reps.add(min(cands, key=lambda u: [2 * (abs(x) - 1) + (x < 0) for x in u]))
    return sorted(reps, key=lambda u: (len(u), [2 * (abs(x) - 1) + (x < 0) for x in u]))


# examples ---------------------------------------------------------------------

def test_letter_order():
    assert sorted([2, -1, -2, 1], key=letter_key) == [1, -1, 2, -2]


def test_free_reduce_examples():
    assert free_reduce((1, 2, -2, -1, 1)) == (1,)
    assert free_reduce(()) == ()
    with pytest.raises(ValueError):
        free_reduce((1, 0))


def test_cyclic_reduce_examples():
    assert cyclic_reduce((1, 2)) == (1, 2)
    assert cyclic_reduce((2, 1, -2)) == (1,)
    assert cyclic_reduce((1, -1)) == ()


def test_canonical_rep_uses_rotation_and_inverse():
    assert canonical_class((2, 1)).rep == (1, 2)
    assert canonical_class((-2, -1)).rep == (1, 2)
    assert canonical_class((-1,)).rep == (1,)
    assert is_canonical((1, -2))
    assert not is_canonical((-2, 1))


def test_empty_class_rejected():
    with pytest.raises(ValueError):
        canonical_class((1, -1))


@pytest.mark.parametrize("n, max_len", [(2, 1), (2, 2), (2, 3), (2, 4), (3, 2), (3, 3)])
def test_enumeration_matches_brute_force(n, max_len):
    assert [c.rep for c in classes_up_to(n, max_len)] == oracle_classes(n, max_len)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_short_class_count(n):
    assert len(classes_up_to(n, 2)) == n + n * n


def test_w_order_prefix_rank2():
    got = [format_word(c.rep) for c in classes_up_to(2, 2)]
    assert got == ["a", "b", "aa", "ab", "aB", "bb"]


def test_stream_cursors_are_independent():
    s1, s2 = enumerate_classes(2), enumerate_classes(2)
    first = [next(s1) for _ in range(10)]
    assert [next(s2) for _ in range(10)] == first
    assert list(ClassStream(2, 2)) == classes_up_to(2, 2)


def test_stream_rank_check():
    with pytest.raises(ValueError):
        enumerate_classes(1)


def test_classes_of_length_sorted():
    layer = classes_of_length(3, 3)
    assert list(layer) == sorted(layer, key=lambda c: word_key(c.rep))


def test_parse_and_format():
    assert parse_word("abA") == (1, 2, -1)
    assert parse_word("1") == ()
    assert parse_word("aA") == ()
    assert format_word((1, -2, 3)) == "aBc"
    assert format_word(()) == "1"


def test_parse_error_reports_position():
    with pytest.raises(WordParseError) as info:
        parse_word("ab?b")
    assert info.value.position == 2
    with pytest.raises(WordParseError) as info:
        parse_word("abc", 2)
    assert info.value.position == 2


# properties -------------------------------------------------------------------

@given(words(3))
def test_free_reduce_matches_oracle(w):
    assert free_reduce(w) == oracle_reduce(w)


@given(words(3))
def test_reductions_idempotent_and_shortening(w):
    r = free_reduce(w)
    c = cyclic_reduce(w)
    assert free_reduce(r) == r and cyclic_reduce(c) == c
    assert len(c) <= len(r) <= len(w)
    assert not any(r[i] == -r[i + 1] for i in range(len(r) - 1))
    assert len(c) < 2 or c[0] != -c[-1]


@given(words(3), words(3))
def test_cyclic_reduce_is_conjugation_invariant(w, u):
    conj = free_reduce(u + w + inverse(u))
    a, b = cyclic_reduce(w), cyclic_reduce(conj)
    assert len(a) == len(b)
    if a:
        assert canonical_class(a) == canonical_class(b)


@given(words(3, 10))
def test_canonical_class_invariant_under_rotation_and_inverse(w):
    c = cyclic_reduce(w)
    if not c:
        return
    k = canonical_class(c)
    for r in rotations(c):
        assert canonical_class(r) == k
    assert canonical_class(inverse(c)) == k
    assert is_canonical(k.rep) and k.length == len(c)


@given(words(4))
def test_format_parse_round_trip(w):
    w = free_reduce(w)
    assert parse_word(format_word(w)) == w
