"""Finite posets, order complexes and the retraction of the reductive
part of the star of a rose onto a point.

Posets keep, for every element, the bitmask of elements strictly above it;
antisymmetry and transitivity are checked on those masks when the poset is
built.  Homology is computed over GF(2) with rows stored as Python ints.
"""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, Mapping, Sequence

from .errors import DirectionViolated, NotMonotone, PipelineDefect, TooLarge
from .marked_graphs import Rose
from .whitehead import (IdealEdge, compatible, crosses, ideal_edges, ideal_trees,
                        is_reductive_edge, is_reductive_tree, is_trivial, key_lemma_gamma,
                        max_reductive_edge, tree_key)

MAX_SIMPLICES = 200_000


class Poset:
    """A finite poset on hashable elements.

    ``leq(x, y)`` must be a partial order; it is evaluated on all pairs once.
    """

    def __init__(self, elements: Iterable[Hashable], leq: Callable[[Hashable, Hashable], bool],
                 name: str = ""):
        self.elements = list(dict.fromkeys(elements))
        self.index = {x: i for i, x in enumerate(self.elements)}
        self.name = name
        self._leq = leq
        n = len(self.elements)
        up = [0] * n
        for i, x in enumerate(self.elements):
            for j, y in enumerate(self.elements):
                if i != j and leq(x, y):
                    up[i] |= 1 << j
        for i in range(n):
            for j in _bits(up[i]):
                if up[j] >> i & 1:
                    raise ValueError(f"relation is not antisymmetric at {self.elements[i]!r}")
                if up[j] & ~up[i]:
                    raise ValueError(f"relation is not transitive at {self.elements[i]!r}")
        self._up = up

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, x):
        return x in self.index

    def leq(self, x, y) -> bool:
        i, j = self.index[x], self.index[y]
        return i == j or bool(self._up[i] >> j & 1)

    def lt(self, x, y) -> bool:
        return x != y and self.leq(x, y)

    def above(self, x) -> list:
        return [self.elements[j] for j in _bits(self._up[self.index[x]])]

    def relations(self) -> list[tuple]:
        """All strict relations ``(x, y)`` with ``x < y``."""
        return [(self.elements[i], self.elements[j])
                for i in range(len(self)) for j in _bits(self._up[i])]

    def covers(self) -> list[tuple]:
        out = []
        for i in range(len(self)):
            up = self._up[i]
            for j in _bits(up):
                # j covers i unless something strictly between
                if not any(self._up[k] >> j & 1 for k in _bits(up)):
                    out.append((self.elements[i], self.elements[j]))
        return out

    def subposet(self, elements: Iterable[Hashable], name: str = "") -> "Poset":
        keep = set(elements)
        return Poset([x for x in self.elements if x in keep], self._leq, name or self.name)

    def chains(self) -> list[tuple]:
        """All nonempty chains, as tuples of element indices in increasing order."""
        out: list[tuple] = []

        def extend(chain: tuple, mask: int):
            out.append(chain)
            for j in _bits(mask):
                extend(chain + (j,), mask & self._up[j])

        for i in range(len(self)):
            extend((i,), self._up[i])
        return out

    def order_complex(self, max_simplices: int = MAX_SIMPLICES) -> "OrderComplex":
        count = self.count_chains()
        if count > max_simplices:
            raise TooLarge(f"order complex has {count} simplices (limit {max_simplices})")
        return OrderComplex(tuple(self.elements), tuple(self.chains()))

    def count_chains(self) -> int:
        memo: dict[int, int] = {}

        def ending_above(i):
            # chains starting at i
            if i not in memo:
                memo[i] = 1 + sum(ending_above(j) for j in _bits(self._up[i]))
            return memo[i]

        return sum(ending_above(i) for i in range(len(self)))

    def is_empty(self) -> bool:
        return not self.elements


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


# -- order complexes and homology ------------------------------------------------

@dataclass(frozen=True)
class OrderComplex:
    """Simplicial complex given by its vertex labels and all its simplices
    (tuples of vertex indices, sorted)."""

    vertices: tuple
    simplices: tuple

    @classmethod
    def from_facets(cls, facets: Iterable[Sequence[int]]) -> "OrderComplex":
        faces = set()
        for f in facets:
            f = tuple(sorted(set(f)))
            for k in range(1, len(f) + 1):
                faces.update(itertools.combinations(f, k))
        verts = sorted({v for f in faces for v in f})
        return cls(tuple(verts), tuple(sorted(faces, key=lambda s: (len(s), s))))

    @property
    def dimension(self) -> int:
        return max((len(s) for s in self.simplices), default=0) - 1

    def f_vector(self) -> list[int]:
        counts = [0] * (self.dimension + 1)
        for s in self.simplices:
            counts[len(s) - 1] += 1
        return counts

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * c for k, c in enumerate(self.f_vector()))


def _rank_f2(rows: list[int]) -> int:
    pivots: dict[int, int] = {}
    rank = 0
    for r in rows:
        while r:
            top = r.bit_length() - 1
            p = pivots.get(top)
            if p is None:
                pivots[top] = r
                rank += 1
                break
            r ^= p
    return rank


def homology_f2(c: OrderComplex, max_simplices: int = MAX_SIMPLICES) -> list[int]:
    """Betti numbers over GF(2), one per dimension 0..dim.  The empty
    complex gives ``[]``."""
    if len(c.simplices) > max_simplices:
        raise TooLarge(f"{len(c.simplices)} simplices (limit {max_simplices})")
    if not c.simplices:
        return []
    by_dim: list[list[tuple]] = [[] for _ in range(c.dimension + 1)]
    for s in c.simplices:
        by_dim[len(s) - 1].append(s)
    index = [{s: i for i, s in enumerate(layer)} for layer in by_dim]
    ranks = [0] * (len(by_dim) + 1)
    for k in range(1, len(by_dim)):
        rows = []
        for s in by_dim[k]:
            row = 0
            for j in range(len(s)):
                row |= 1 << index[k - 1][s[:j] + s[j + 1:]]
            rows.append(row)
        ranks[k] = _rank_f2(rows)
    betti = [len(by_dim[k]) - ranks[k] - ranks[k + 1] for k in range(len(by_dim))]
    if sum((-1) ** k * b for k, b in enumerate(betti)) != c.euler_characteristic():
        raise AssertionError("Euler characteristic mismatch")
    return betti


def is_acyclic_point(betti: Sequence[int]) -> bool:
    """Homology of a point: (1, 0, 0, ...)."""
    return bool(betti) and betti[0] == 1 and not any(betti[1:])


# -- poset maps and the Poset Lemma -----------------------------------------------

class Direction(enum.Enum):
    DECREASING = "decreasing"  # f(x) <= x
    INCREASING = "increasing"  # f(x) >= x


@dataclass(frozen=True)
class PosetMap:
    f: Mapping

    def __call__(self, x):
        return self.f[x]

    @classmethod
    def of(cls, p: Poset, func: Callable) -> "PosetMap":
        return cls({x: func(x) for x in p})


def quillen_retract(p: Poset, f: PosetMap | Callable, direction: Direction) -> Poset:
    """Check the hypotheses of the Poset Lemma and return the image of ``f``.

    ``f`` must map ``p`` into itself, be monotone, and move every element in
    the stated direction; then the realization of ``p`` deformation
    retracts onto that of the image.
    """
    if not isinstance(f, PosetMap):
        f = PosetMap.of(p, f)
    for x in p:
        if f(x) not in p:
            raise ValueError(f"{x!r} is sent outside the poset")
    for x, y in p.relations():
        if not p.leq(f(x), f(y)):
            raise NotMonotone(f"{x!r} <= {y!r} but their images are not ordered")
    for x in p:
        ok = p.leq(f(x), x) if direction is Direction.DECREASING else p.leq(x, f(x))
        if not ok:
            raise DirectionViolated(f"f moves {x!r} the wrong way for a {direction.value} map")
    image = {f(x) for x in p}
    return p.subposet([x for x in p if x in image])


# -- posets of ideal trees ---------------------------------------------------------

def _tree_sort(trees: Iterable[frozenset]) -> list[frozenset]:
    return sorted(trees, key=lambda t: (len(t), tree_key(t)))


def _subset_leq(a: frozenset, b: frozenset) -> bool:
    return a <= b


def star_poset(rho: Rose | int) -> Poset:
    """Nonempty ideal trees ordered by inclusion (the rose itself is the cone
    point and is left out)."""
    n = rho if isinstance(rho, int) else rho.n
    return Poset(ideal_trees(n), _subset_leq, "star")


def reductive_subposet(rho: Rose) -> Poset:
    return Poset([t for t in ideal_trees(rho.n) if is_reductive_tree(rho, t)],
                 _subset_leq, "reductive")


def partition_trees(n: int, include_empty: bool = True) -> list[frozenset]:
    """Sets of pairwise compatible nontrivial bipartitions of H, ideal or
    not.  These are the graphs near the rose that may have separating edges."""
    h = list(range(1, 2 * n))
    parts = []
    for r in range(1, 2 * n - 2):
        for rest in itertools.combinations(h, r):
            side = frozenset((0,) + rest)
            if not is_trivial(side, n):
                parts.append(IdealEdge(n, side))
    parts.sort()
    out: list[frozenset] = [frozenset()] if include_empty else []

    def grow(chosen: list[IdealEdge], start: int):
        for j in range(start, len(parts)):
            if all(compatible(parts[j], c) for c in chosen):
                chosen.append(parts[j])
                out.append(frozenset(chosen))
                grow(chosen, j + 1)
                chosen.pop()

    grow([], 0)
    return _tree_sort(out)


def separating_edge_retraction(n: int) -> tuple[Poset, Poset]:
    """Collapse the separating edges of every graph near the rose.

    Returns the poset of all compatible partition sets (with the rose as the
    empty set) and its image, which consists of the sets of ideal edges."""
    p = Poset(partition_trees(n), _subset_leq, "near-rose")

    def drop(t):
        return frozenset(e for e in t if e.is_ideal())

    return p, quillen_retract(p, drop, Direction.DECREASING)


# -- the retraction pipeline ----------------------------------------------------------

@dataclass
class RetractionStep:
    tag: str  # DropNonReductive | AddGamma | DropAlpha | ConeToMu | Collapse
    direction: Direction
    data: dict
    before: Poset
    after: Poset

    def as_dict(self) -> dict:
        return {"tag": self.tag, "direction": self.direction.value,
                "data": self.data, "before": len(self.before), "after": len(self.after),
                "elements": [encode_tree(t) for t in self.after]}


@dataclass
class RetractionTrace:
    start: Poset | None = None
    steps: list[RetractionStep] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {"start": [encode_tree(t) for t in self.start] if self.start is not None else [],
                "steps": [s.as_dict() for s in self.steps]}


class Verdict(enum.Enum):
    EMPTY = "EmptyComplex"
    CONTRACTIBLE = "Contractible"


@dataclass
class PipelineResult:
    verdict: Verdict
    trace: RetractionTrace
    mu: IdealEdge | None = None
    mu_side: frozenset | None = None
    mu_half_edge: int | None = None
    eliminated: list = field(default_factory=list)

    def as_dict(self) -> dict:
        out = {"verdict": self.verdict.value, "trace": self.trace.as_dict()}
        if self.mu is not None:
            out["mu"] = self.mu.encode()
            out["M"] = sorted(self.mu_side)
            out["m"] = self.mu_half_edge
            out["eliminated"] = [[a.encode(), g.encode()] for a, g in self.eliminated]
        return out


def encode_tree(t: Iterable[IdealEdge]) -> list[list[int]]:
    return [list(k) for k in tree_key(t)]


def _retract(trace: RetractionTrace, p: Poset, func: Callable, direction: Direction,
             tag: str, data: dict) -> Poset:
    try:
        image = quillen_retract(p, func, direction)
    except (NotMonotone, DirectionViolated, ValueError) as exc:
        raise PipelineDefect(f"{tag}: {exc}") from exc
    trace.steps.append(RetractionStep(tag, direction, data, p, image))
    return image


def side_condition(alpha: IdealEdge, m: int, m_side: frozenset, others: Iterable[IdealEdge]) -> bool:
    """Every ``beta`` compatible with ``alpha`` whose m-side contains the
    m-side of ``alpha`` has m-side containing ``M``."""
    a_side = alpha.side_containing(m)
    for beta in others:
        if beta == alpha or not compatible(alpha, beta):
            continue
        b_side = beta.side_containing(m)
        if a_side <= b_side and not m_side <= b_side:
            return False
    return True


def contractibility_pipeline(rho: Rose, max_iterations: int | None = None) -> PipelineResult:
    """Retract the poset of reductive ideal trees to a point, checking the
    Poset Lemma hypotheses at every step."""
    trace = RetractionTrace()
    p = reductive_subposet(rho)
    trace.start = p
    if p.is_empty():
        return PipelineResult(Verdict.EMPTY, trace)
    strict = {e for e in ideal_edges(rho.n) if is_reductive_edge(rho, e)}

    def drop_nonreductive(t):
        kept = frozenset(e for e in t if e in strict)
        if not kept:
            raise PipelineDefect(f"reductive tree {encode_tree(t)} has no reductive edge")
        return kept

    cur = _retract(trace, p, drop_nonreductive, Direction.DECREASING, "DropNonReductive", {})
    top = max_reductive_edge(rho)
    if top is None:
        raise PipelineDefect("nonempty reductive poset but no reductive pair")
    mu, m_side, m = top.edge, top.side, top.half_edge
    result = PipelineResult(Verdict.CONTRACTIBLE, trace, mu, m_side, m)
    cap = max_iterations if max_iterations is not None else 4 * len(ideal_edges(rho.n))
    for _ in range(cap + 1):
        alive = sorted({e for t in cur for e in t})
        crossing = [a for a in alive if crosses(a, mu)]
        if not crossing:
            break
        chosen = [a for a in crossing if side_condition(a, m, m_side, alive)]
        if not chosen:
            raise PipelineDefect("edges cross mu but none satisfies the side condition")
        alpha = chosen[0]
        gamma = key_lemma_gamma(rho, mu, top, alpha, check_maximal=False)
        data = {"alpha": alpha.encode(), "gamma": gamma.encode()}

        def add_gamma(t, alpha=alpha, gamma=gamma):
            return t | {gamma} if alpha in t else t

        cur = _retract(trace, cur, add_gamma, Direction.INCREASING, "AddGamma", data)

        def drop_alpha(t, alpha=alpha):
            return t - {alpha}

        cur = _retract(trace, cur, drop_alpha, Direction.DECREASING, "DropAlpha", data)
        if any(alpha in t for t in cur):
            raise PipelineDefect(f"{alpha} survived its elimination")
        result.eliminated.append((alpha, gamma))
    else:
        raise PipelineDefect(f"crossing edges remain after {cap} eliminations")
    cur = _retract(trace, cur, lambda t: t | {mu}, Direction.INCREASING, "ConeToMu",
                   {"mu": mu.encode()})
    cur = _retract(trace, cur, lambda t: frozenset({mu}), Direction.DECREASING, "Collapse",
                   {"mu": mu.encode()})
    if len(cur) != 1:
        raise PipelineDefect("the final image is not a single point")
    return result
