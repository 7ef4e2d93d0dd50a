"""Marked graphs, marked roses and the lexicographic norm on roses.

A marking is stored as one based edge loop per generator of F_n (the image
of the corresponding petal of the fixed rose R_n).  Two markings are only
ever compared through translation lengths, i.e. up to free homotopy.

A :class:`Rose` is the one-vertex case, stored as the automorphism ``phi``
whose images spell the petal loops: the edge of petal ``i`` has half-edges
``2(i-1)`` (traversed forwards) and ``2i - 1``.
"""
from __future__ import annotations

import enum
import os
import threading
from dataclasses import InitVar, dataclass
from functools import cached_property, lru_cache
from typing import Callable, Hashable, Iterable, Iterator, Sequence

from . import automorphisms as aut
from .errors import UndeterminedComparison
from .free_words import (ConjugacyClass, Word, canonical_class, classes_of_length,
                         cyclic_reduce, format_word, free_reduce, parse_word)
from .graphs import Graph, collapse_forest, is_core, maximal_trees, tree_path

DEFAULT_LMAX = 12


def default_lmax() -> int:
    """Cutoff for lexicographic streaming; ``OUTERSPINE_LMAX`` overrides it."""
    return int(os.environ.get("OUTERSPINE_LMAX", DEFAULT_LMAX))


class Comparison(enum.IntEnum):
    LESS = -1
    EQUAL = 0
    GREATER = 1


def rose_half_edge(letter: int) -> int:
    return 2 * (letter - 1) if letter > 0 else 2 * (-letter - 1) + 1


def half_edge_letter(h: int) -> int:
    return h // 2 + 1 if h % 2 == 0 else -(h // 2 + 1)


# -- paths ---------------------------------------------------------------------

def reduce_path(g: Graph, path: Iterable[int]) -> tuple[int, ...]:
    out: list[int] = []
    for h in path:
        if out and out[-1] == g.inv[h]:
            out.pop()
        else:
            out.append(h)
    return tuple(out)


def reverse_path(g: Graph, path: Sequence[int]) -> tuple[int, ...]:
    return tuple(g.inv[h] for h in reversed(path))


def cyclic_reduce_path(g: Graph, path: Iterable[int]) -> tuple[int, ...]:
    p = reduce_path(g, path)
    i, j = 0, len(p)
    while j - i >= 2 and p[j - 1] == g.inv[p[i]]:
        i += 1
        j -= 1
    return p[i:j]


# -- marked graphs -------------------------------------------------------------

@dataclass(frozen=True)
class MarkedGraph:
    graph: Graph
    basepoint: Hashable
    petals: tuple

    def __post_init__(self):
        object.__setattr__(self, "petals", tuple(tuple(p) for p in self.petals))

    @property
    def n(self) -> int:
        return len(self.petals)

    def path_of_word(self, w: Iterable[int]) -> tuple[int, ...]:
        g = self.graph
        out: list[int] = []
        for x in w:
            seg = self.petals[x - 1] if x > 0 else reverse_path(g, self.petals[-x - 1])
            out.extend(seg)
        return reduce_path(g, out)

    def tight_loop(self, w: ConjugacyClass | Iterable[int]) -> tuple[int, ...]:
        rep = w.rep if isinstance(w, ConjugacyClass) else tuple(w)
        return cyclic_reduce_path(self.graph, self.path_of_word(rep))

    def length(self, w) -> int:
        return len(self.tight_loop(w))

    def is_rose(self) -> bool:
        return len(self.graph.vertices) == 1

    def validate(self) -> "MarkedGraph":
        """Check closedness of petal loops, core-ness and that the marking is
        a homotopy equivalence (by collapsing a maximal tree to a rose)."""
        g = self.graph
        if not g.is_connected():
            raise ValueError("marked graphs must be connected")
        if not is_core(g):
            raise ValueError("marked graphs must have all valences >= 3")
        for p in self.petals:
            v = self.basepoint
            for h in p:
                if g.origin[h] != v:
                    raise ValueError("petal image is not an edge path")
                v = g.terminal(h)
            if v != self.basepoint:
                raise ValueError("petal image is not closed at the basepoint")
        tree = next(iter(maximal_trees(g)))
        self.collapse(tree).to_rose(check=True)
        return self

    def collapse(self, forest: Iterable[int]) -> "MarkedGraph":
        res = collapse_forest(self.graph, forest)
        dead = {h for e in res.collapsed for h in (e, self.graph.inv[e])}
        q = res.quotient
        petals = tuple(reduce_path(q, (h for h in p if h not in dead)) for p in self.petals)
        return MarkedGraph(q, res.vertex_image[self.basepoint], petals)

    def to_rose(self, check: bool = False) -> "Rose":
        if not self.is_rose():
            raise ValueError("not a rose")
        edges = self.graph.edges
        letter = {}
        for i, e in enumerate(edges, start=1):
            letter[e] = i
            letter[self.graph.inv[e]] = -i
        phi = tuple(free_reduce(letter[h] for h in p) for p in self.petals)
        return Rose(phi, check=check)

    def blowup(self, v, moved: Iterable[int]) -> tuple["MarkedGraph", int, int]:
        """Blow up vertex ``v`` moving ``moved`` to a new vertex; the marking
        is pushed along (inserting the new edge at the affected corners)."""
        from .graphs import blowup_vertex

        moved = set(moved)
        g2, hv, hw = blowup_vertex(self.graph, v, moved)
        g = self.graph
        base = self.basepoint

        def rewrite(path):
            out = []
            # the arrival end at the start is the basepoint, which stays put
            at_new = False
            cur = base
            for h in path:
                if g.origin[h] == v:
                    dep_new = h in moved
                    if at_new and not dep_new:
                        out.append(hw)
                    elif not at_new and dep_new:
                        out.append(hv)
                out.append(h)
                cur = g.terminal(h)
                at_new = cur == v and g.inv[h] in moved
            if cur == v and at_new:
                out.append(hw)
            return reduce_path(g2, out)

        petals = tuple(rewrite(p) for p in self.petals)
        return MarkedGraph(g2, base, petals), hv, hw

    def erase_bivalent(self) -> "MarkedGraph":
        """The spine vertex: merge the two edges at each bivalent vertex."""
        g = self.graph
        if all(g.valence(x) != 2 for x in g.vertices):
            return self
        base = self.basepoint
        petals = list(self.petals)
        if g.valence(base) == 2:
            target = next(x for x in g.vertices if g.valence(x) >= 3)
            tree = next(iter(maximal_trees(g)))
            p = tree_path(g, tree, base, target)
            rp = reverse_path(g, p)
            petals = [reduce_path(g, rp + tuple(q) + tuple(p)) for q in petals]
            base = target
        inv = dict(g.inv)
        origin = dict(g.origin)
        while True:
            star: dict = {}
            for h, o in origin.items():
                star.setdefault(o, []).append(h)
            biv = [x for x, hs in star.items() if len(hs) == 2 and x != base]
            if not biv:
                break
            x = min(biv, key=repr)
            h1, h2 = sorted(star[x])
            if inv[h1] == h2:
                raise ValueError("a circle component has no spine vertex")
            a, b = inv[h1], inv[h2]
            del inv[h1], inv[h2], origin[h1], origin[h2]
            inv[a], inv[b] = b, a
            petals = [tuple(h for h in q if h not in (h1, h2)) for q in petals]
        return MarkedGraph(Graph(inv, origin), base, tuple(petals))

    def invariants(self) -> tuple:
        g = self.graph
        return (len(g.vertices), len(g), tuple(sorted(g.valence(v) for v in g.vertices)))


# -- roses ---------------------------------------------------------------------

@dataclass(frozen=True)
class Rose:
    """Marked rose whose marking sends x_i to the loop spelled by ``phi[i-1]``."""

    phi: tuple
    check: InitVar[bool] = True

    def __post_init__(self, check):
        phi = tuple(free_reduce(w) for w in self.phi)
        object.__setattr__(self, "phi", phi)
        if len(phi) < 1:
            raise ValueError("a rose needs at least one petal")
        if check:
            inv = aut.invert(phi)
            self.__dict__["inverse"] = inv

    @classmethod
    def standard(cls, n: int) -> "Rose":
        return cls(aut.identity(n))

    @classmethod
    def from_text(cls, words: Sequence[str] | str, n: int | None = None) -> "Rose":
        if isinstance(words, str):
            words = [w for w in words.split(",")]
        if n is None:
            n = len(words)
        if len(words) != n:
            raise ValueError(f"expected {n} images, got {len(words)}")
        return cls(tuple(parse_word(w, n) for w in words))

    @property
    def n(self) -> int:
        return len(self.phi)

    @cached_property
    def inverse(self) -> tuple:
        return aut.invert(self.phi)

    def length(self, w) -> int:
        rep = w.rep if isinstance(w, ConjugacyClass) else tuple(w)
        return len(cyclic_reduce(aut.apply(self.phi, rep)))

    def tight_word(self, w) -> Word:
        rep = w.rep if isinstance(w, ConjugacyClass) else tuple(w)
        return cyclic_reduce(aut.apply(self.phi, rep))

    def marked_graph(self) -> MarkedGraph:
        petals = tuple(tuple(rose_half_edge(x) for x in w) for w in self.phi)
        return MarkedGraph(Graph.rose(self.n), 0, petals)

    def twisted(self, psi: Sequence[Word]) -> "Rose":
        """The rose with marking ``phi o psi``."""
        return Rose(aut.compose(self.phi, psi), check=False)

    def relabeled(self, sigma: Sequence[Word]) -> "Rose":
        """Same point of the spine with petals renamed by the signed
        permutation ``sigma``."""
        return Rose(aut.compose(sigma, self.phi), check=False)

    def text(self) -> list[str]:
        return [format_word(w) for w in self.phi]

    def __str__(self):
        return "Rose(" + ",".join(self.text()) + ")"


# -- lazy vectors --------------------------------------------------------------

class LazyVector:
    """An element of Z^W given coordinate by coordinate.

    ``difference_of=(a, b)`` records that the vector is ``||a|| - ||b||`` for
    roses ``a`` and ``b``, which makes its lexicographic sign decidable.
    Coordinates are memoized behind a lock.
    """

    def __init__(self, n: int, func: Callable[[ConjugacyClass], int], tag: str = "raw",
                 difference_of: tuple | None = None):
        self.n = n
        self._func = func
        self.tag = tag
        self.difference_of = difference_of
        self._memo: dict = {}
        self._lock = threading.Lock()

    def __getitem__(self, w) -> int:
        if not isinstance(w, ConjugacyClass):
            w = canonical_class(w)
        try:
            return self._memo[w]
        except KeyError:
            pass
        value = self._func(w)
        with self._lock:
            self._memo[w] = value
        return value

    def coords(self, max_length: int) -> Iterator[tuple[ConjugacyClass, int]]:
        for length in range(1, max_length + 1):
            for c in classes_of_length(self.n, length):
                yield c, self[c]

    def values(self, max_length: int) -> list[int]:
        return [v for _, v in self.coords(max_length)]

    def __add__(self, other: "LazyVector") -> "LazyVector":
        return LazyVector(self.n, lambda w: self[w] + other[w], "sum")

    def __sub__(self, other: "LazyVector") -> "LazyVector":
        return LazyVector(self.n, lambda w: self[w] - other[w], "difference")

    def __neg__(self) -> "LazyVector":
        return LazyVector(self.n, lambda w: -self[w], "negation")

    def sign(self, lmax: int | None = None) -> int:
        """Sign of the first nonzero coordinate in W-order."""
        if self.difference_of is not None:
            a, b = self.difference_of
            return int(compare_norm(a, b, lmax))
        first = first_difference(self, lmax)
        if first is None:
            raise UndeterminedComparison("all coordinates vanish up to the cutoff")
        return 1 if first[1] > 0 else -1

    def __repr__(self):
        head = ", ".join(str(v) for v in self.values(1))
        return f"LazyVector<{self.tag}>({head}, ...)"


def first_difference(v: LazyVector, lmax: int | None = None, start: int = 1):
    if lmax is None:
        lmax = default_lmax()
    for length in range(start, lmax + 1):
        for c in classes_of_length(v.n, length):
            x = v[c]
            if x:
                return c, x
    return None


# -- operations ----------------------------------------------------------------

def tight_loop(m: MarkedGraph | Rose, w: ConjugacyClass) -> tuple[int, ...]:
    if isinstance(m, Rose):
        return tuple(rose_half_edge(x) for x in m.tight_word(w))
    return m.tight_loop(w)


def translation_length(m: MarkedGraph | Rose, w) -> int:
    return m.length(w)


def norm(rho: Rose) -> LazyVector:
    return LazyVector(rho.n, rho.length, "norm")


def norm_difference(a: Rose, b: Rose) -> LazyVector:
    return LazyVector(a.n, lambda w: a.length(w) - b.length(w), "rose-norm-difference",
                      difference_of=(a, b))


def edge_crossings(m: MarkedGraph | Rose, e: int) -> LazyVector:
    g = m.graph if isinstance(m, MarkedGraph) else Graph.rose(m.n)
    ends = {e, g.inv[e]}
    return LazyVector(m.n, lambda w: sum(1 for h in tight_loop(m, w) if h in ends),
                      "crossings")


@dataclass(frozen=True)
class Fingerprint:
    """Translation lengths of the length <= 2 classes of an adapted basis.

    ``labels`` are the classes written in the adapted basis u_1..u_n.
    """

    labels: tuple
    values: tuple

    def as_dict(self) -> dict[str, int]:
        return {str(c): v for c, v in zip(self.labels, self.values)}


def fingerprint(rho: Rose, basis_source: Rose) -> Fingerprint:
    psi = basis_source.inverse
    labels = classes_of_length(rho.n, 1) + classes_of_length(rho.n, 2)
    values = tuple(rho.length(aut.apply(psi, c.rep)) for c in labels)
    return Fingerprint(labels, values)


def roses_equal(r1: Rose, r2: Rose) -> bool:
    """Same vertex of the spine, decided on the length <= 2 classes of the
    basis adapted to ``r1``."""
    if r1.n != r2.n:
        return False
    if r1.phi == r2.phi:
        return True
    psi = r1.inverse
    for length in (1, 2):
        for c in classes_of_length(r1.n, length):
            if r2.length(aut.apply(psi, c.rep)) != length:
                return False
    return True


@lru_cache(maxsize=200_000)
def _compare_cached(r1: Rose, r2: Rose, lmax: int) -> Comparison:
    if r1.phi == r2.phi:
        return Comparison.EQUAL
    # cheap early exit on the generator coordinates; the answer is unchanged
    for c in classes_of_length(r1.n, 1):
        d = r1.length(c) - r2.length(c)
        if d:
            return Comparison.LESS if d < 0 else Comparison.GREATER
    if roses_equal(r1, r2):
        return Comparison.EQUAL
    for length in range(2, lmax + 1):
        for c in classes_of_length(r1.n, length):
            d = r1.length(c) - r2.length(c)
            if d:
                return Comparison.LESS if d < 0 else Comparison.GREATER
    raise UndeterminedComparison(
        f"distinct roses {r1} and {r2} agree on all classes of length <= {lmax}")


def compare_norm(r1: Rose, r2: Rose, lmax: int | None = None) -> Comparison:
    if r1.n != r2.n:
        raise ValueError("roses of different rank")
    return _compare_cached(r1, r2, default_lmax() if lmax is None else lmax)


def collapse_marked(m: MarkedGraph, forest: Iterable[int]) -> MarkedGraph:
    return m.collapse(forest)


def _is_rotation(a: Sequence[int], b: Sequence[int]) -> bool:
    if len(a) != len(b):
        return False
    if not a:
        return True
    doubled = tuple(b) + tuple(b)
    a = tuple(a)
    k = len(a)
    return any(doubled[i:i + k] == a for i in range(k))


def find_marked_isomorphism(x: MarkedGraph, y: MarkedGraph, max_length: int = 3) -> dict | None:
    """A half-edge bijection ``x -> y`` that is a graph isomorphism carrying
    every tight loop of a class of length <= ``max_length`` onto a rotation
    of the corresponding tight loop of ``y``; ``None`` if there is none."""
    gx, gy = x.graph, y.graph
    if x.n != y.n or x.invariants() != y.invariants():
        return None
    from .free_words import classes_up_to

    classes = classes_up_to(x.n, max_length)
    loops_x = [x.tight_loop(c) for c in classes]
    loops_y = [y.tight_loop(c) for c in classes]
    if any(len(a) != len(b) for a, b in zip(loops_x, loops_y)):
        return None
    # visit half-edges so that each new one touches an already mapped vertex
    order = []
    remaining = set(gx.inv)
    frontier_v = [gx.vertices[0]]
    seen_v = {gx.vertices[0]}
    while remaining:
        if not frontier_v:
            frontier_v = [gx.origin[min(remaining)]]
            seen_v.add(frontier_v[0])
        v = frontier_v.pop()
        for h in gx.star(v):
            if h in remaining:
                order.append(h)
                remaining.discard(h)
                t = gx.terminal(h)
                if t not in seen_v:
                    seen_v.add(t)
                    frontier_v.append(t)
    ys = sorted(gy.inv)

    hmap: dict = {}
    vmap: dict = {}
    vinv: dict = {}

    def consistent(hx, hy):
        ox, oy = gx.origin[hx], gy.origin[hy]
        if vmap.get(ox, oy) != oy or vinv.get(oy, ox) != ox:
            return False
        tx, ty = gx.terminal(hx), gy.terminal(hy)
        if vmap.get(tx, ty) != ty or vinv.get(ty, tx) != tx:
            return False
        return (ox == tx) == (oy == ty)

    used = set()

    def search(i):
        if i == len(order):
            return all(_is_rotation(tuple(hmap[h] for h in a), b)
                       for a, b in zip(loops_x, loops_y))
        hx = order[i]
        if hx in hmap:
            return search(i + 1)
        for hy in ys:
            if hy in used or not consistent(hx, hy):
                continue
            ix, iy = gx.inv[hx], gy.inv[hy]
            if iy in used:
                continue
            added_v = []
            for a, b in ((gx.origin[hx], gy.origin[hy]), (gx.terminal(hx), gy.terminal(hy))):
                if a not in vmap:
                    vmap[a], vinv[b] = b, a
                    added_v.append(a)
            hmap[hx], hmap[ix] = hy, iy
            used.update((hy, iy))
            if search(i + 1):
                return True
            del hmap[hx], hmap[ix]
            used.difference_update((hy, iy))
            for a in added_v:
                del vinv[vmap.pop(a)]
        return False

    return dict(hmap) if search(0) else None
