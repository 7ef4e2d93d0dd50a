"""Stallings folds and the connectivity of the spine.

A marked rose is joined to the standard rose by folding a graph morphism
from its (subdivided) rose to R_n that represents a homotopy inverse of the
marking.  Bivalent vertices are allowed in the source while folding; spine
points are recovered by erasing them.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterable

from .errors import InvalidWitness, NotAForest, NotInvertible
from .free_words import canonical_class, classes_up_to, cyclic_reduce
from .graphs import Graph, collapse_forest, is_forest
from .marked_graphs import (MarkedGraph, Rose, find_marked_isomorphism, half_edge_letter,
                            reduce_path, reverse_path, rose_half_edge)


@dataclass(frozen=True)
class GraphMorphism:
    """Morphism from ``source`` to the rose ``target``.

    ``image[h]`` is a target half-edge, or ``None`` when the edge of ``h``
    is sent to the vertex.
    """

    source: Graph
    target: Graph
    image: dict

    def __post_init__(self):
        for h, hb in self.source.inv.items():
            a, b = self.image[h], self.image[hb]
            if (a is None) != (b is None):
                raise ValueError(f"degenerate status differs on the two ends of {h}")
            if a is not None and self.target.inv[a] != b:
                raise ValueError(f"image does not respect the involution at {h}")

    def map_path(self, path: Iterable[int]) -> tuple[int, ...]:
        return tuple(self.image[h] for h in path if self.image[h] is not None)

    def is_homeomorphism(self) -> bool:
        src = self.source
        if len(src.vertices) != 1 or len(src) != len(self.target):
            return False
        imgs = [self.image[h] for h in src.half_edges]
        return None not in imgs and sorted(imgs) == self.target.half_edges


@dataclass(frozen=True)
class DegenerateEdge:
    edge: int


@dataclass(frozen=True)
class FoldablePair:
    h1: int
    h2: int


@dataclass(frozen=True)
class FoldMove:
    kind: str  # "Fold" | "CollapseDegenerate" | "CollapseUnivalent"
    data: tuple
    kn_effect: dict | None = None


def subdivided_inverse_morphism(rho: Rose) -> GraphMorphism:
    return _subdivided(rho)[0]


def _subdivided(rho: Rose) -> tuple[GraphMorphism, MarkedGraph]:
    psi = rho.inverse
    inv, origin, image = {}, {}, {}
    chains: list[tuple[int, ...]] = []
    h = 0
    nxt = 1
    for word in psi:
        chain = []
        prev = 0
        for k, x in enumerate(word):
            end = 0 if k == len(word) - 1 else nxt
            if end:
                nxt += 1
            inv[h], inv[h + 1] = h + 1, h
            origin[h], origin[h + 1] = prev, end
            image[h] = rose_half_edge(x)
            image[h + 1] = rose_half_edge(-x)
            chain.append(h)
            h += 2
            prev = end
        chains.append(tuple(chain))
    src = Graph(inv, origin)
    morphism = GraphMorphism(src, Graph.rose(rho.n), image)
    petals = []
    for w in rho.phi:
        path: list[int] = []
        for x in w:
            path.extend(chains[x - 1] if x > 0 else reverse_path(src, chains[-x - 1]))
        petals.append(reduce_path(src, path))
    return morphism, MarkedGraph(src, 0, tuple(petals))


def all_witnesses(m: GraphMorphism) -> list:
    g = m.source
    out: list = [DegenerateEdge(e) for e in g.edges if m.image[e] is None]
    by_key: dict = {}
    for h in g.half_edges:
        img = m.image[h]
        if img is not None:
            by_key.setdefault((g.origin[h], img), []).append(h)
    for hs in by_key.values():
        for i in range(len(hs)):
            for j in range(i + 1, len(hs)):
                out.append(FoldablePair(hs[i], hs[j]))
    return out


def local_injectivity_witness(m: GraphMorphism):
    ws = all_witnesses(m)
    if not ws:
        return None
    degenerate = [w for w in ws if isinstance(w, DegenerateEdge)]
    if degenerate:
        return min(degenerate, key=lambda w: w.edge)
    return min(ws, key=lambda w: (w.h1, w.h2))


def apply_fold(m: GraphMorphism, w) -> tuple[GraphMorphism, FoldMove]:
    g = m.source
    if isinstance(w, DegenerateEdge):
        e = w.edge
        if e not in g.inv or m.image[e] is not None:
            raise InvalidWitness(f"edge {e} is not degenerate")
        if g.is_loop(e):
            raise NotInvertible("a loop is sent to a point")
        res = collapse_forest(g, [e])
        image = {h: m.image[h] for h in res.quotient.inv}
        return (GraphMorphism(res.quotient, m.target, image),
                FoldMove("CollapseDegenerate", (e,)))
    if isinstance(w, FoldablePair):
        h1, h2 = sorted((w.h1, w.h2))
        if (h1 not in g.inv or h2 not in g.inv or h1 == h2 or g.origin[h1] != g.origin[h2]
                or m.image[h1] is None or m.image[h1] != m.image[h2]):
            raise InvalidWitness(f"{h1}, {h2} are not a foldable pair")
        if g.inv[h1] == h2:
            raise InvalidWitness("cannot fold an edge with itself")
        u1, u2 = g.terminal(h1), g.terminal(h2)
        if u1 == u2:
            raise NotInvertible("folding would create a null-homotopic loop")
        new, rename = _fold_graph(g, h1, h2)
        image = {h: m.image[h] for h in new.inv}
        move = FoldMove("Fold", (h1, h2),
                        {"vertex": g.origin[h1], "moved": (h1, h2),
                         "loop": g.is_loop(g.edge_of(h1)) or g.is_loop(g.edge_of(h2))})
        return GraphMorphism(new, m.target, image), move
    raise InvalidWitness(f"unknown witness {w!r}")


def _fold_graph(g: Graph, h1: int, h2: int) -> tuple[Graph, dict]:
    u1, u2 = g.terminal(h1), g.terminal(h2)
    keep, drop = (u1, u2) if _vorder(u1) <= _vorder(u2) else (u2, u1)
    rename = {v: (keep if v == drop else v) for v in g.vertices}
    dead = {h2, g.inv[h2]}
    inv = {h: hb for h, hb in g.inv.items() if h not in dead}
    origin = {h: rename[g.origin[h]] for h in inv}
    return Graph(inv, origin), rename


def _vorder(v):
    return (0, v) if isinstance(v, int) else (1, repr(v))


def _push_fold(mg: MarkedGraph, h1: int, h2: int) -> MarkedGraph:
    g = mg.graph
    new, rename = _fold_graph(g, h1, h2)
    sub = {h2: h1, g.inv[h2]: g.inv[h1]}
    petals = tuple(reduce_path(new, (sub.get(h, h) for h in p)) for p in mg.petals)
    return MarkedGraph(new, rename[mg.basepoint], petals)


def univalent_edge(g: Graph):
    for v in g.vertices:
        star = g.star(v)
        if len(star) == 1:
            return g.edge_of(star[0])
    return None


# -- spine bookkeeping -------------------------------------------------------

def spine_with_pieces(mg: MarkedGraph) -> tuple[MarkedGraph, dict]:
    """Erase bivalent vertices; return the spine point and, for each spine
    edge, the set of subdivided edges it is made of."""
    g = mg.graph
    spine = mg.erase_bivalent()
    pieces = {e: {e} for e in g.edges}
    base = spine.basepoint
    inv, origin = dict(g.inv), dict(g.origin)
    while True:
        star: dict = {}
        for h, o in origin.items():
            star.setdefault(o, []).append(h)
        biv = [x for x, hs in star.items() if len(hs) == 2 and x != base]
        if not biv:
            break
        x = min(biv, key=repr)
        h1, h2 = sorted(star[x])
        a, b = inv[h1], inv[h2]
        merged = pieces.pop(min(h1, a)) | pieces.pop(min(h2, b))
        del inv[h1], inv[h2], origin[h1], origin[h2]
        inv[a], inv[b] = b, a
        pieces[min(a, b)] = merged
    if set(spine.graph.inv) != set(inv):
        raise AssertionError("spine bookkeeping diverged")
    return spine, pieces


def spine_forest(pieces: dict, forest: Iterable[int]) -> frozenset:
    f = set(forest)
    return frozenset(e for e, ps in pieces.items() if ps <= f)


@dataclass
class KnPath:
    """Points of the spine joined by forest collapses.

    ``steps[i] = ("collapse", F)`` means ``points[i+1]`` is ``points[i]``
    with ``F`` collapsed; ``("blowup", F)`` means ``points[i]`` is
    ``points[i+1]`` with ``F`` collapsed.
    """

    points: list
    steps: list
    moves: list = field(default_factory=list)
    edge_counts: list = field(default_factory=list)
    history: list = field(default_factory=list)

    def __len__(self):
        return len(self.steps)

    def reversed(self) -> "KnPath":
        flip = {"collapse": "blowup", "blowup": "collapse"}
        return KnPath(self.points[::-1], [(flip[d], f) for d, f in self.steps[::-1]])


def _record(path: KnPath, big: MarkedGraph, left: Iterable[int], right: Iterable[int]):
    spine, pieces = spine_with_pieces(big)
    fl = spine_forest(pieces, left)
    fr = spine_forest(pieces, right)
    if fl:
        path.points.append(spine)
        path.steps.append(("blowup", fl))
    elif fr:
        # spine(big) is the current point under other labels
        iso = find_marked_isomorphism(spine, path.points[-1])
        if iso is None:
            raise AssertionError("fold bookkeeping lost track of the spine point")
        translated = frozenset(path.points[-1].graph.edge_of(iso[e]) for e in fr)
        path.points.append(spine.collapse(fr))
        path.steps.append(("collapse", translated))
        return
    if fr:
        path.points.append(spine.collapse(fr))
        path.steps.append(("collapse", fr))


def fold_to_rose(rho: Rose, rng: random.Random | None = None, keep_history: bool = False) -> KnPath:
    """Fold the inverse morphism of ``rho`` until it is a homeomorphism.

    With ``rng`` the witness is chosen at random instead of by least ids.
    """
    morphism, marking = _subdivided(rho)
    path = KnPath([marking.erase_bivalent()], [])
    path.edge_counts.append(len(morphism.source))
    if keep_history:
        path.history.append((morphism, marking))
    limit = len(morphism.source) + 1
    while True:
        if rng is None:
            w = local_injectivity_witness(morphism)
        else:
            ws = all_witnesses(morphism)
            w = rng.choice(ws) if ws else None
        if w is None:
            break
        g = morphism.source
        new_m, move = apply_fold(morphism, w)
        if move.kind == "Fold":
            h1, h2 = move.data
            v = g.origin[h1]
            if g.valence(v) >= 3:
                big, hv, _ = marking.blowup(v, (h1, h2))
                _record(path, big, [big.graph.edge_of(hv)], [g.edge_of(h1), g.edge_of(h2)])
            else:
                _record(path, marking, [], [g.edge_of(h1), g.edge_of(h2)])
            marking = _push_fold(marking, h1, h2)
        else:
            (e,) = move.data
            _record(path, marking, [], [e])
            marking = marking.collapse([e])
        morphism = new_m
        path.moves.append(move)
        path.edge_counts.append(len(morphism.source))
        # a fold at a bivalent vertex leaves it univalent; collapse that edge
        while True:
            e = univalent_edge(morphism.source)
            if e is None:
                break
            res = collapse_forest(morphism.source, [e])
            morphism = GraphMorphism(res.quotient, morphism.target,
                                     {h: morphism.image[h] for h in res.quotient.inv})
            marking = marking.collapse([e])
            path.moves.append(FoldMove("CollapseUnivalent", (e,)))
            path.edge_counts.append(len(morphism.source))
        if keep_history:
            path.history.append((morphism, marking))
        if len(path.moves) > limit:
            raise NotInvertible("folding did not terminate")
    if not morphism.is_homeomorphism():
        raise NotInvertible("locally injective morphism is not a homeomorphism")
    return path


def same_point(a: MarkedGraph, b: MarkedGraph, max_length: int = 4) -> bool:
    """Equal invariants and equal translation lengths up to ``max_length``."""
    a, b = a.erase_bivalent(), b.erase_bivalent()
    if a.n != b.n or a.invariants() != b.invariants():
        return False
    if any(a.length(c) != b.length(c) for c in classes_up_to(a.n, max_length)):
        return False
    return find_marked_isomorphism(a, b) is not None


def verify_kn_path(p: KnPath, max_length: int = 4) -> bool:
    if len(p.points) != len(p.steps) + 1:
        return False
    for i, (direction, forest) in enumerate(p.steps):
        x, y = p.points[i], p.points[i + 1]
        big, small = (x, y) if direction == "collapse" else (y, x)
        if not forest or not is_forest(big.graph, forest):
            return False
        try:
            z = big.collapse(forest)
        except (NotAForest, KeyError):
            return False
        if not same_point(z, small, max_length):
            return False
    return True


def kn_endpoint_rose(p: KnPath) -> Rose:
    return p.points[-1].to_rose()


def morphism_preserves_classes(morphism: GraphMorphism, marking: MarkedGraph,
                               max_length: int = 4) -> bool:
    """Does ``s o g`` fix every conjugacy class up to ``max_length``?"""
    for c in classes_up_to(marking.n, max_length):
        loop = marking.tight_loop(c)
        word = cyclic_reduce(half_edge_letter(h) for h in morphism.map_path(loop))
        if not word or canonical_class(word) != c:
            return False
    return True
