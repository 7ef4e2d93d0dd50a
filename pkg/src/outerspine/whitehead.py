"""Ideal edges of a rose, star graphs, reductive pairs and norm descent.

Throughout, ``H`` is the set of half-edges ``0 .. 2n-1`` of the rose: half-edge
``2(i-1)`` is where petal ``i`` departs (e_i) and ``2i-1`` is where it arrives
(its reverse, written e_i bar).  A subset of ``H`` is a frozenset of ints.

The margin ``|a| - |A|`` of a pair ``(A, a)`` equals ``||rho|| - ||rho'||``
where ``rho'`` is the rose obtained by blowing up the ideal edge with side
``A`` and collapsing the petal of ``a``.  All lexicographic decisions about
margins go through that rose, so they reduce to :func:`compare_norm`.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Iterator

from .errors import (ConclusionFailed, DegenerateSubset, Defect, HypothesesViolated,
                     IncompatibleEdges, NotDisjoint)
from .free_words import ConjugacyClass, canonical_class, classes_up_to
from .graphs import maximal_trees
from .marked_graphs import (Comparison, LazyVector, MarkedGraph, Rose, compare_norm,
                            rose_half_edge)


def pair_of(h: int) -> int:
    """The other end of the petal of ``h``."""
    return h ^ 1


def half_edge_set(n: int) -> frozenset:
    return frozenset(range(2 * n))


def half_edge_name(h: int) -> str:
    i = h // 2 + 1
    return f"e{i}" if h % 2 == 0 else f"E{i}"


# -- star graphs ---------------------------------------------------------------

@dataclass(frozen=True)
class StarGraph:
    """Multigraph on ``H`` with one edge per turn of the tight loop of ``cls``."""

    rose: Rose
    cls: ConjugacyClass
    edges: tuple

    @property
    def vertices(self) -> tuple:
        return tuple(range(2 * self.rose.n))

    def valence(self, h: int) -> int:
        return sum((a == h) + (b == h) for a, b in self.edges)

    def valences(self) -> list[int]:
        out = [0] * (2 * self.rose.n)
        for a, b in self.edges:
            out[a] += 1
            out[b] += 1
        return out

    def cut(self, a: Iterable[int], b: Iterable[int]) -> int:
        a, b = set(a), set(b)
        return sum(1 for x, y in self.edges if (x in a and y in b) or (x in b and y in a))


def star_graph(rho: Rose, w) -> StarGraph:
    if not isinstance(w, ConjugacyClass):
        w = canonical_class(w)
    word = rho.tight_word(w)
    k = len(word)
    edges = []
    for j in range(k):
        arrive = rose_half_edge(-word[j])
        depart = rose_half_edge(word[(j + 1) % k])
        edges.append(tuple(sorted((arrive, depart))))
    return StarGraph(rho, w, tuple(edges))


@lru_cache(maxsize=100_000)
def _star_edges(rho: Rose, w: ConjugacyClass) -> tuple:
    return star_graph(rho, w).edges


def _subset(rho: Rose, s: Iterable[int]) -> frozenset:
    s = frozenset(s)
    if not s <= half_edge_set(rho.n):
        raise ValueError(f"{sorted(s)} is not a set of half-edges of a rank {rho.n} rose")
    return s


def dot(rho: Rose, a: Iterable[int], b: Iterable[int]) -> LazyVector:
    """Coordinate ``w``: number of edges of the star graph of ``w`` with one
    end in ``a`` and the other in ``b``."""
    a, b = _subset(rho, a), _subset(rho, b)
    if a & b:
        raise NotDisjoint(f"{sorted(a)} and {sorted(b)} overlap")

    def coord(w):
        return sum(1 for x, y in _star_edges(rho, w)
                   if (x in a and y in b) or (x in b and y in a))

    return LazyVector(rho.n, coord, "dot")


def size(rho: Rose, a: Iterable[int]) -> LazyVector:
    """``|A| = A . (H - A)``."""
    a = _subset(rho, a)
    if not a or a == half_edge_set(rho.n):
        raise DegenerateSubset("|A| needs a nonempty proper subset")
    return dot(rho, a, half_edge_set(rho.n) - a)


def valence_vector(rho: Rose, h: int) -> LazyVector:
    """``|e|``: the valence of ``h`` in each star graph."""
    return LazyVector(rho.n, lambda w: sum((x == h) + (y == h) for x, y in _star_edges(rho, w)),
                      "valence")


def count_identity_check(rho: Rose, a: Iterable[int], b: Iterable[int], max_length: int) -> bool:
    """Check |A| + |B| = |A n B| + |A u B| + 2 X.Y on every class up to
    ``max_length``, where X = A - B and Y = B - A.  Empty or full sets count 0."""
    h = half_edge_set(rho.n)
    a, b = _subset(rho, a), _subset(rho, b)
    x, y = a - b, b - a

    def cut(s, w):
        t = h - s
        return sum(1 for p, q in _star_edges(rho, w) if (p in s) != (q in s)) if s and t else 0

    def xy(w):
        return sum(1 for p, q in _star_edges(rho, w)
                   if (p in x and q in y) or (p in y and q in x))

    for w in classes_up_to(rho.n, max_length):
        lhs = cut(a, w) + cut(b, w)
        rhs = cut(a & b, w) + cut(a | b, w) + 2 * xy(w)
        if lhs != rhs:
            return False
    return True


# -- ideal edges ---------------------------------------------------------------

def is_ideal(a: Iterable[int], n: int) -> bool:
    """Both sides nonempty and some pair {e, e bar} is separated."""
    a = frozenset(a)
    h = half_edge_set(n)
    if not a or not a < h:
        return False
    return any((pair_of(x) in a) != (x in a) for x in h)


def is_trivial(a: Iterable[int], n: int) -> bool:
    a = frozenset(a)
    return len(a) == 1 or len(half_edge_set(n) - a) == 1


@dataclass(frozen=True, order=False)
class IdealEdge:
    """A bipartition of ``H``; ``side`` is the part containing half-edge 0."""

    n: int
    side: frozenset

    def __post_init__(self):
        side = frozenset(self.side)
        h = half_edge_set(self.n)
        if not side or not side < h:
            raise ValueError("both sides of an ideal edge must be nonempty")
        if 0 not in side:
            side = h - side
        object.__setattr__(self, "side", side)

    @classmethod
    def from_side(cls, n: int, side: Iterable[int]) -> "IdealEdge":
        return cls(n, frozenset(side))

    @property
    def complement(self) -> frozenset:
        return half_edge_set(self.n) - self.side

    @property
    def sides(self) -> tuple[frozenset, frozenset]:
        return self.side, self.complement

    def side_containing(self, h: int) -> frozenset:
        return self.side if h in self.side else self.complement

    def separates(self, h: int) -> bool:
        return (h in self.side) != (pair_of(h) in self.side)

    def is_ideal(self) -> bool:
        return is_ideal(self.side, self.n)

    def is_trivial(self) -> bool:
        return is_trivial(self.side, self.n)

    def key(self) -> tuple:
        return tuple(sorted(self.side))

    def __lt__(self, other: "IdealEdge") -> bool:
        return self.key() < other.key()

    def encode(self) -> list[int]:
        return sorted(self.side)

    def __str__(self):
        a = ",".join(half_edge_name(h) for h in sorted(self.side))
        b = ",".join(half_edge_name(h) for h in sorted(self.complement))
        return "{" + a + "|" + b + "}"


def compatible(alpha: IdealEdge, beta: IdealEdge) -> bool:
    """Some choice of sides is disjoint."""
    return any(not (a & b) for a in alpha.sides for b in beta.sides)


def crosses(alpha: IdealEdge, beta: IdealEdge) -> bool:
    return not compatible(alpha, beta)


@lru_cache(maxsize=None)
def ideal_edges(n: int) -> tuple[IdealEdge, ...]:
    """All nontrivial ideal edges for a rank ``n`` rose, in canonical order."""
    h = list(range(1, 2 * n))
    out = []
    for r in range(1, 2 * n - 2):
        for rest in itertools.combinations(h, r):
            side = frozenset((0,) + rest)
            if is_ideal(side, n) and not is_trivial(side, n):
                out.append(IdealEdge(n, side))
    return tuple(sorted(out))


IdealTree = frozenset  # frozenset[IdealEdge]


def tree_key(t: Iterable[IdealEdge]) -> tuple:
    return tuple(sorted(e.key() for e in t))


def validate_tree(t: Iterable[IdealEdge]) -> frozenset:
    t = frozenset(t)
    for e in t:
        if not e.is_ideal() or e.is_trivial():
            raise IncompatibleEdges(f"{e} is not a nontrivial ideal edge")
    for a, b in itertools.combinations(sorted(t), 2):
        if crosses(a, b):
            raise IncompatibleEdges(f"{a} and {b} cross")
    return t


@lru_cache(maxsize=None)
def ideal_trees(n: int) -> tuple[frozenset, ...]:
    """All nonempty ideal trees, by clique search over the compatibility graph."""
    edges = ideal_edges(n)
    ok = {(i, j): compatible(edges[i], edges[j])
          for i in range(len(edges)) for j in range(i + 1, len(edges))}
    out: list[frozenset] = []

    def grow(chosen: list[int], start: int):
        for j in range(start, len(edges)):
            if all(ok[(i, j)] for i in chosen):
                chosen.append(j)
                out.append(frozenset(edges[i] for i in chosen))
                grow(chosen, j + 1)
                chosen.pop()

    grow([], 0)
    return tuple(sorted(out, key=lambda t: (len(t), tree_key(t))))


# -- blowups -------------------------------------------------------------------

@dataclass(frozen=True)
class Blowup:
    marked: MarkedGraph
    tree_edges: dict = field(hash=False, compare=False)  # IdealEdge -> graph edge id

    @property
    def tree(self) -> frozenset:
        return frozenset(self.tree_edges.values())


def blowup_with_tree(rho: Rose, t: Iterable[IdealEdge]) -> Blowup:
    """Rebuild the graph of ideal tree ``t``: one tree edge per ideal edge,
    with the petal half-edges reattached at the leaves.  The basepoint stays
    at the vertex of half-edge 0."""
    t = validate_tree(t)
    for e in t:
        if e.n != rho.n:
            raise ValueError("ideal edge of the wrong rank")
    mg = rho.marked_graph()
    # sides avoiding half-edge 0 are nested or disjoint; split the biggest first
    tree_edges = {}
    for e in sorted(t, key=lambda e: (-len(e.complement), e.key())):
        s = e.complement
        g = mg.graph
        v = g.origin[next(iter(s))]
        if any(g.origin[h] != v for h in s):
            raise IncompatibleEdges(f"{e} is not nested in the tree built so far")
        mg, hv, _ = mg.blowup(v, s)
        tree_edges[e] = mg.graph.edge_of(hv)
    return Blowup(mg, tree_edges)


def blowup(rho: Rose, t: Iterable[IdealEdge]) -> MarkedGraph:
    return blowup_with_tree(rho, t).marked


@lru_cache(maxsize=200_000)
def collapse_petal(rho: Rose, alpha: IdealEdge, h: int) -> Rose:
    """Blow up ``alpha`` and collapse the petal edge of ``h`` instead."""
    if not alpha.separates(h):
        raise ValueError(f"{alpha} does not separate the petal of {half_edge_name(h)}")
    mg = blowup(rho, [alpha])
    return mg.collapse([mg.graph.edge_of(h)]).to_rose()


# -- reductive pairs -----------------------------------------------------------

@dataclass(frozen=True)
class ReductivePair:
    """``side`` is a side of ``edge`` containing ``half_edge`` but not its
    partner; ``collapsed`` is the rose whose norm is ||rho|| - margin."""

    rho: Rose
    edge: IdealEdge
    side: frozenset
    half_edge: int
    collapsed: Rose

    @property
    def margin(self) -> LazyVector:
        a, b = self.rho, self.collapsed
        return LazyVector(a.n, lambda w: a.length(w) - b.length(w), "margin",
                          difference_of=(a, b))

    def key(self) -> tuple:
        return (tuple(sorted(self.side)), self.half_edge)

    def __iter__(self) -> Iterator:
        return iter((self.edge, self.side, self.half_edge))

    def __str__(self):
        side = ",".join(half_edge_name(h) for h in sorted(self.side))
        return f"({{{side}}}, {half_edge_name(self.half_edge)}) on {self.edge}"


def margin_vector(rho: Rose, side: Iterable[int], h: int) -> LazyVector:
    """``|h| - |side|`` coordinate by coordinate, straight from star graphs."""
    v = valence_vector(rho, h)
    s = size(rho, side)
    return LazyVector(rho.n, lambda w: v[w] - s[w], "margin")


def pair_for(rho: Rose, side: Iterable[int], h: int) -> ReductivePair | None:
    """The pair ``(side, h)`` if it is reductive, else ``None``."""
    side = frozenset(side)
    if h not in side or pair_of(h) in side:
        raise ValueError("the half-edge must be in the side and its partner outside")
    edge = IdealEdge(rho.n, side)
    if edge.is_trivial():
        return None
    collapsed = collapse_petal(rho, edge, h)
    if compare_norm(collapsed, rho) == Comparison.LESS:
        return ReductivePair(rho, edge, side, h, collapsed)
    return None


def reductive_pairs(rho: Rose, alpha: IdealEdge) -> list[ReductivePair]:
    if not alpha.is_ideal() or alpha.is_trivial():
        raise ValueError(f"{alpha} is not a nontrivial ideal edge")
    out = []
    for side in alpha.sides:
        for h in sorted(side):
            if pair_of(h) not in side:
                p = pair_for(rho, side, h)
                if p is not None:
                    out.append(p)
    return sorted(out, key=ReductivePair.key)


@lru_cache(maxsize=50_000)
def is_reductive_edge(rho: Rose, alpha: IdealEdge) -> bool:
    # the two pairs through one petal give the same rose, so one side suffices
    for h in sorted(alpha.side):
        if alpha.separates(h):
            if compare_norm(collapse_petal(rho, alpha, h), rho) == Comparison.LESS:
                return True
    return False


def reductive_edges(rho: Rose) -> list[IdealEdge]:
    return [e for e in ideal_edges(rho.n) if is_reductive_edge(rho, e)]


def tree_collapses(rho: Rose, t: Iterable[IdealEdge]) -> Iterator[tuple[frozenset, Rose]]:
    """Every rose adjacent to the blowup of ``t``, with the maximal tree used."""
    mg = blowup(rho, t)
    for tree in maximal_trees(mg.graph):
        yield tree, mg.collapse(tree).to_rose()


def is_reductive_tree(rho: Rose, t: Iterable[IdealEdge]) -> bool:
    """Some maximal tree of the blowup collapses to a smaller rose."""
    t = frozenset(t)
    if not t:
        return False
    return any(compare_norm(r, rho) == Comparison.LESS for _, r in tree_collapses(rho, t))


def is_strictly_reductive_tree(rho: Rose, t: Iterable[IdealEdge]) -> bool:
    t = frozenset(t)
    return bool(t) and all(is_reductive_edge(rho, e) for e in t)


def all_reductive_pairs(rho: Rose) -> list[ReductivePair]:
    out = []
    for e in ideal_edges(rho.n):
        if is_reductive_edge(rho, e):
            out.extend(reductive_pairs(rho, e))
    return out


def compare_margins(p: ReductivePair, q: ReductivePair, lmax: int | None = None) -> Comparison:
    """Sign of margin(p) - margin(q); a bigger margin is a smaller collapsed rose."""
    return Comparison(-int(compare_norm(p.collapsed, q.collapsed, lmax)))


def maximal_pairs(rho: Rose) -> list[ReductivePair]:
    """All reductive pairs whose margin is maximal, in canonical order."""
    best: list[ReductivePair] = []
    for p in all_reductive_pairs(rho):
        if not best:
            best = [p]
            continue
        c = compare_margins(p, best[0])
        if c == Comparison.GREATER:
            best = [p]
        elif c == Comparison.EQUAL:
            best.append(p)
    return sorted(best, key=ReductivePair.key)


def max_reductive_edge(rho: Rose) -> ReductivePair | None:
    """A maximally reductive pair ``(mu, M, m)``; ties go to the least
    (sorted side, half-edge)."""
    best = maximal_pairs(rho)
    return best[0] if best else None


# -- the Key Lemma -------------------------------------------------------------

def _is_maximal(rho: Rose, pair: ReductivePair) -> bool:
    top = max_reductive_edge(rho)
    return top is not None and compare_margins(pair, top) == Comparison.EQUAL


def key_lemma_candidates(mu_pair: ReductivePair, alpha: IdealEdge) -> list[frozenset]:
    """``A u M`` and ``(H - A) n M`` for ``A`` the side of ``alpha`` holding m."""
    h = half_edge_set(alpha.n)
    m_side, m = mu_pair.side, mu_pair.half_edge
    a_side = alpha.side_containing(m)
    return [a_side | m_side, (h - a_side) & m_side]


def key_lemma_gamma(rho: Rose, mu: IdealEdge, mu_pair, alpha: IdealEdge,
                    check_maximal: bool = True) -> IdealEdge:
    """The reductive ideal edge with side A u M (preferred) or (H - A) n M."""
    if isinstance(mu_pair, ReductivePair):
        m_side, m = mu_pair.side, mu_pair.half_edge
    else:
        m_side, m = mu_pair
        m_side = frozenset(m_side)
        if m not in m_side or pair_of(m) in m_side:
            raise HypothesesViolated("(M, m) is not a pair: m must be in M and its partner not")
        p = pair_for(rho, m_side, m)
        if p is None:
            raise HypothesesViolated("(M, m) is not a reductive pair")
        mu_pair = p
    if IdealEdge(rho.n, m_side) != mu:
        raise HypothesesViolated("M is not a side of mu")
    if check_maximal and not _is_maximal(rho, mu_pair):
        raise HypothesesViolated("(M, m) is not a maximal reductive pair")
    if not is_reductive_edge(rho, alpha):
        raise HypothesesViolated(f"{alpha} is not reductive")
    if not crosses(alpha, mu):
        raise HypothesesViolated(f"{alpha} does not cross {mu}")
    for cand in key_lemma_candidates(mu_pair, alpha):
        if not is_ideal(cand, rho.n) or is_trivial(cand, rho.n):
            continue
        gamma = IdealEdge(rho.n, cand)
        if not is_reductive_edge(rho, gamma):
            continue
        if not (compatible(gamma, alpha) and compatible(gamma, mu)):
            raise ConclusionFailed(f"{gamma} crosses alpha or mu")
        return gamma
    raise ConclusionFailed(
        f"neither A u M nor (H - A) n M is a reductive ideal edge for alpha={alpha}, mu={mu}")


@dataclass
class KeyLemmaReport:
    roses: int = 0
    instances: int = 0
    violations: list = field(default_factory=list)
    census_instances: int = 0
    census_violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations and not self.census_violations

    def merge(self, other: "KeyLemmaReport") -> None:
        self.roses += other.roses
        self.instances += other.instances
        self.violations.extend(other.violations)
        self.census_instances += other.census_instances
        self.census_violations.extend(other.census_violations)

    def as_dict(self) -> dict:
        return {"roses": self.roses, "instances": self.instances,
                "violations": len(self.violations),
                "census_instances": self.census_instances,
                "census_violations": len(self.census_violations),
                "examples": [str(v) for v in (self.violations + self.census_violations)[:5]]}


def key_lemma_check(rho: Rose) -> KeyLemmaReport:
    """Run the Key Lemma on every maximal pair and every reductive edge
    crossing it; also check the four-sector inequality where it applies."""
    rep = KeyLemmaReport(roses=1)
    h = half_edge_set(rho.n)
    red = reductive_edges(rho)
    for mp in maximal_pairs(rho):
        mu, m_side, m = mp.edge, mp.side, mp.half_edge
        mbar = pair_of(m)
        for alpha in red:
            if not crosses(alpha, mu):
                continue
            rep.instances += 1
            try:
                key_lemma_gamma(rho, mu, mp, alpha, check_maximal=False)
            except ConclusionFailed as exc:
                rep.violations.append((str(rho), str(mp), str(alpha), str(exc)))
            a_side = alpha.side_containing(m)
            for p in reductive_pairs(rho, alpha):
                # orient the pair into the side holding m
                a = p.half_edge if p.side == a_side else pair_of(p.half_edge)
                abar = pair_of(a)
                if (a in a_side - m_side and abar in m_side - a_side
                        and mbar in h - a_side - m_side):
                    rep.census_instances += 1
                    union = pair_for(rho, a_side | m_side, m)
                    meet = pair_for(rho, (h - a_side) & m_side, abar)
                    if union is None and meet is None:
                        rep.census_violations.append((str(rho), str(mp), str(alpha), half_edge_name(a)))
    return rep


# -- descent -------------------------------------------------------------------

@dataclass(frozen=True)
class DescentStep:
    before: Rose
    pair: ReductivePair
    after: Rose

    def as_dict(self) -> dict:
        return {"rose": self.before.text(), "edge": self.pair.edge.encode(),
                "side": sorted(self.pair.side), "halfEdge": self.pair.half_edge,
                "result": self.after.text()}


def whitehead_reduce(rho: Rose, max_steps: int = 1000) -> tuple[Rose, list[DescentStep]]:
    """Follow maximally reductive pairs down until none is left."""
    trace: list[DescentStep] = []
    cur = rho
    while True:
        p = max_reductive_edge(cur)
        if p is None:
            return cur, trace
        trace.append(DescentStep(cur, p, p.collapsed))
        cur = p.collapsed
        if len(trace) > max_steps:
            raise Defect(f"descent did not stop within {max_steps} steps")
