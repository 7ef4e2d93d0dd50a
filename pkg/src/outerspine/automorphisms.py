"""Endomorphisms of F_n given by generator images.

An automorphism is stored as a tuple ``phi`` of reduced words, ``phi[i-1]``
being the image of x_i.  Inversion runs a Stallings fold on the labelled
graph whose petals spell the images, carrying alongside each edge a word in
the source generators; when the folded graph is the standard rose the labels
on its petals spell the inverse.
"""
from __future__ import annotations

import random
from typing import Sequence

from .errors import NotInvertible
from .free_words import Word, free_reduce, inverse


def apply(phi: Sequence[Word], w: Sequence[int]) -> Word:
    out: list[int] = []
    for x in w:
        img = phi[x - 1] if x > 0 else inverse(phi[-x - 1])
        for y in img:
            if out and out[-1] == -y:
                out.pop()
            else:
                out.append(y)
    return tuple(out)


def compose(phi: Sequence[Word], psi: Sequence[Word]) -> tuple[Word, ...]:
    """The automorphism ``phi o psi`` (apply psi first)."""
    return tuple(apply(phi, w) for w in psi)


def identity(n: int) -> tuple[Word, ...]:
    return tuple((i,) for i in range(1, n + 1))


def conjugation(n: int, u: Sequence[int]) -> tuple[Word, ...]:
    """Inner automorphism x -> u x u^-1."""
    u = free_reduce(u)
    return tuple(free_reduce(u + (i,) + inverse(u)) for i in range(1, n + 1))


def signed_permutation(perm: Sequence[int], signs: Sequence[int]) -> tuple[Word, ...]:
    """x_i -> x_{perm[i]}^{signs[i]} with ``perm`` 0-based."""
    return tuple(((p + 1) * s,) for p, s in zip(perm, signs))


def is_signed_permutation(phi: Sequence[Word]) -> bool:
    n = len(phi)
    if any(len(w) != 1 for w in phi):
        return False
    return sorted(abs(w[0]) for w in phi) == list(range(1, n + 1))


def invert(phi: Sequence[Word]) -> tuple[Word, ...]:
    """Return ``psi`` with ``phi o psi = psi o phi = id``.

    Raises NotInvertible if ``phi`` is not an automorphism.
    """
    n = len(phi)
    phi = tuple(free_reduce(w) for w in phi)
    if any(not w for w in phi):
        raise NotInvertible("a generator maps to the identity")

    # edges: id -> [tail, head, letter, ylabel]; oriented so that traversing
    # tail->head reads ``letter`` in the target and ``ylabel`` in the source.
    edges: dict[int, list] = {}
    next_vertex = 1
    base = 0
    eid = 0
    for i, w in enumerate(phi, start=1):
        prev = base
        for k, x in enumerate(w):
            if k == len(w) - 1:
                nxt = base
            else:
                nxt = next_vertex
                next_vertex += 1
            edges[eid] = [prev, nxt, x, (i,) if k == 0 else ()]
            eid += 1
            prev = nxt

    def outgoing():
        # (vertex, letter) -> list of (edge id, forward?)
        table: dict[tuple[int, int], list[tuple[int, bool]]] = {}
        for e, (t, h, x, _) in edges.items():
            table.setdefault((t, x), []).append((e, True))
            table.setdefault((h, -x), []).append((e, False))
        return table

    while True:
        pair = None
        for key, lst in sorted(outgoing().items()):
            if len(lst) >= 2:
                pair = lst[0], lst[1]
                break
        if pair is None:
            break
        (e1, f1), (e2, f2) = pair

        def far(e, fwd):
            t, h, _, y = edges[e]
            return (h, y) if fwd else (t, inverse(y))

        u1, y1 = far(e1, f1)
        u2, y2 = far(e2, f2)
        if u1 == u2:
            # two distinct edge paths with the same label and endpoints
            raise NotInvertible("the images do not generate freely")
        if u1 == base:
            (e1, f1, u1, y1), (e2, f2, u2, y2) = (e2, f2, u2, y2), (e1, f1, u1, y1)
        # merge u1 into u2; edge e1 disappears into e2
        d = free_reduce(inverse(y1) + y2)  # label of u1 -> v -> u2
        dinv = inverse(d)
        del edges[e1]
        for e, rec in edges.items():
            t, h, x, y = rec
            if t == u1:
                y = free_reduce(dinv + y)
                t = u2
            if h == u1:
                y = free_reduce(y + d)
                h = u2
            edges[e] = [t, h, x, y]
        # prune valence-one vertices other than the base
        while True:
            val: dict[int, int] = {}
            for t, h, _, _ in edges.values():
                val[t] = val.get(t, 0) + 1
                val[h] = val.get(h, 0) + 1
            hanging = [e for e, (t, h, _, _) in edges.items()
                       if t != h and ((val[t] == 1 and t != base) or (val[h] == 1 and h != base))]
            if not hanging:
                break
            del edges[hanging[0]]

    vertices = {v for t, h, _, _ in edges.values() for v in (t, h)}
    if vertices != {base} or len(edges) != n:
        raise NotInvertible("the images do not generate F_n")
    psi: list[Word | None] = [None] * n
    for t, h, x, y in edges.values():
        if x > 0:
            psi[x - 1] = y
        else:
            psi[-x - 1] = inverse(y)
    if any(p is None for p in psi):
        raise NotInvertible("the images do not generate F_n")
    psi_t = tuple(free_reduce(p) for p in psi)
    if compose(phi, psi_t) != identity(n) or compose(psi_t, phi) != identity(n):
        raise NotInvertible("fold produced an inconsistent inverse")
    return psi_t


def is_automorphism(phi: Sequence[Word]) -> bool:
    try:
        invert(phi)
    except NotInvertible:
        return False
    return True


# -- random generation -----------------------------------------------------

def nielsen_factors(n: int) -> list[tuple[Word, ...]]:
    """Elementary Nielsen automorphisms: transvections, inversions, swaps."""
    out = []
    base = identity(n)
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if i == j:
                continue
            for s in (1, -1):
                right = list(base)
                right[i - 1] = (i, s * j)
                out.append(tuple(right))
                left = list(base)
                left[i - 1] = (s * j, i)
                out.append(tuple(left))
        inv = list(base)
        inv[i - 1] = (-i,)
        out.append(tuple(inv))
    for i in range(1, n):
        sw = list(base)
        sw[i - 1], sw[i] = (i + 1,), (i,)
        out.append(tuple(sw))
    return out


def random_automorphism(n: int, factors: int, rng: random.Random) -> tuple[Word, ...]:
    """Product of ``factors`` uniformly chosen elementary Nielsen moves."""
    gens = nielsen_factors(n)
    phi = identity(n)
    for _ in range(factors):
        phi = compose(phi, rng.choice(gens))
    return phi
