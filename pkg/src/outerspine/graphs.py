"""Finite graphs as half-edges with an involution and an origin map.

A half-edge ``h`` is an oriented edge leaving ``origin[h]``; ``inv[h]`` is
the same edge traversed backwards, so its terminal vertex is
``origin[inv[h]]``.  An edge is named by the smaller of its two half-edge
ids.  Graphs are treated as immutable values.
"""
from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Iterator, Mapping, Sequence

from .errors import Disconnected, NoMatching, NotAForest


class Graph:
    __slots__ = ("inv", "origin", "_vertices", "_hash")

    def __init__(self, inv: Mapping[int, int], origin: Mapping[int, Hashable],
                 vertices: Iterable[Hashable] | None = None):
        self.inv = dict(inv)
        self.origin = dict(origin)
        for h, hb in self.inv.items():
            if hb == h or self.inv.get(hb) != h:
                raise ValueError(f"involution is not fixed-point free at {h}")
        if set(self.inv) != set(self.origin):
            raise ValueError("every half-edge needs an origin")
        vs = set(self.origin.values())
        if vertices is not None:
            extra = set(vertices) - vs
            if extra:
                raise ValueError(f"vertices without half-edges: {sorted(map(str, extra))}")
        self._vertices = tuple(sorted(vs, key=_vkey))
        self._hash = None

    # -- basic structure ---------------------------------------------------
    @classmethod
    def from_edges(cls, edges: Sequence[tuple[Hashable, Hashable]]) -> "Graph":
        """Edge ``k`` runs from ``edges[k][0]`` to ``edges[k][1]`` via half-edge 2k."""
        inv, origin = {}, {}
        for k, (a, b) in enumerate(edges):
            inv[2 * k], inv[2 * k + 1] = 2 * k + 1, 2 * k
            origin[2 * k], origin[2 * k + 1] = a, b
        return cls(inv, origin)

    @classmethod
    def rose(cls, n: int) -> "Graph":
        return cls.from_edges([(0, 0)] * n)

    @property
    def half_edges(self) -> list[int]:
        return sorted(self.inv)

    @property
    def vertices(self) -> tuple:
        return self._vertices

    @property
    def edges(self) -> list[int]:
        return sorted(h for h, hb in self.inv.items() if h < hb)

    def edge_of(self, h: int) -> int:
        return min(h, self.inv[h])

    def endpoints(self, e: int) -> tuple:
        return self.origin[e], self.origin[self.inv[e]]

    def terminal(self, h: int):
        return self.origin[self.inv[h]]

    def star(self, v) -> list[int]:
        return sorted(h for h, o in self.origin.items() if o == v)

    def valence(self, v) -> int:
        return sum(1 for o in self.origin.values() if o == v)

    def is_loop(self, e: int) -> bool:
        a, b = self.endpoints(e)
        return a == b

    def __len__(self):
        return len(self.inv) // 2

    def __eq__(self, other):
        return isinstance(other, Graph) and self.inv == other.inv and self.origin == other.origin

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((tuple(sorted(self.inv.items())),
                               tuple(sorted(self.origin.items(), key=lambda kv: (kv[0], _vkey(kv[1]))))))
        return self._hash

    def __repr__(self):
        es = ", ".join(f"{e}:{self.origin[e]}->{self.terminal(e)}" for e in self.edges)
        return f"Graph({es})"

    # -- connectivity ------------------------------------------------------
    def components(self, removed: Iterable[int] = ()) -> list[set]:
        """Vertex sets of the components after deleting the ``removed`` edges."""
        dead = set()
        for e in removed:
            dead.add(e)
            dead.add(self.inv[e])
        adj = defaultdict(list)
        for h in self.inv:
            if h not in dead:
                adj[self.origin[h]].append(self.terminal(h))
        seen, comps = set(), []
        for v in self._vertices:
            if v in seen:
                continue
            comp, stack = {v}, [v]
            seen.add(v)
            while stack:
                x = stack.pop()
                for y in adj[x]:
                    if y not in seen:
                        seen.add(y)
                        comp.add(y)
                        stack.append(y)
            comps.append(comp)
        return comps

    def is_connected(self) -> bool:
        return len(self.components()) == 1


def _vkey(v):
    return (type(v).__name__, v) if isinstance(v, (int, str)) else (type(v).__name__, repr(v))


def rank(g: Graph) -> int:
    if not g.is_connected():
        raise Disconnected("rank is defined for connected graphs")
    return len(g) - len(g.vertices) + 1


def is_core(g: Graph) -> bool:
    return g.is_connected() and all(g.valence(v) >= 3 for v in g.vertices)


def separating_edges(g: Graph) -> set[int]:
    """Bridges of ``g``, found by a lowpoint DFS over half-edges."""
    if not g.is_connected():
        raise Disconnected("separating edges need a connected graph")
    order: dict = {}
    low: dict = {}
    bridges: set[int] = set()
    out = defaultdict(list)
    for h in g.half_edges:
        out[g.origin[h]].append(h)
    counter = itertools.count()
    root = g.vertices[0]
    order[root] = low[root] = next(counter)
    # stack of (vertex, half-edge used to enter it, iterator over its star)
    stack = [(root, None, iter(out[root]))]
    while stack:
        v, entry, it = stack[-1]
        advanced = False
        for h in it:
            if entry is not None and h == g.inv[entry]:
                continue
            w = g.terminal(h)
            if w not in order:
                order[w] = low[w] = next(counter)
                stack.append((w, h, iter(out[w])))
                advanced = True
                break
            low[v] = min(low[v], order[w])
        if advanced:
            continue
        stack.pop()
        if entry is not None:
            parent = g.origin[entry]
            low[parent] = min(low[parent], low[v])
            if low[v] > order[parent]:
                bridges.add(g.edge_of(entry))
    return bridges


def is_forest(g: Graph, edges: Iterable[int]) -> bool:
    parent: dict = {}

    def find(x):
        while parent.get(x, x) != x:
            parent[x] = parent.get(parent[x], parent[x])
            x = parent[x]
        return x

    for e in set(g.edge_of(h) for h in edges):
        a, b = (find(x) for x in g.endpoints(e))
        if a == b:
            return False
        parent[a] = b
    return True


@dataclass(frozen=True)
class CollapseResult:
    """Quotient of a forest collapse.

    Surviving half-edges keep their ids, so the edge map is the identity on
    non-forest edges; ``vertex_image`` sends each vertex to its tree's
    representative (the least vertex of the tree).
    """

    quotient: Graph
    collapsed: frozenset
    vertex_image: Mapping = field(default_factory=dict)

    def edge_image(self, e: int) -> int | None:
        return None if e in self.collapsed else e


def collapse_forest(g: Graph, forest: Iterable[int]) -> CollapseResult:
    f = {g.edge_of(h) for h in forest}
    if not f:
        return CollapseResult(g, frozenset(), {v: v for v in g.vertices})
    if not is_forest(g, f):
        raise NotAForest(f"edges {sorted(f)} contain a cycle")
    sub = Graph({h: g.inv[h] for e in f for h in (e, g.inv[e])},
                {h: g.origin[h] for e in f for h in (e, g.inv[e])})
    vimage = {v: v for v in g.vertices}
    for comp in sub.components():
        rep = min(comp, key=_vkey)
        for v in comp:
            vimage[v] = rep
    dead = {h for e in f for h in (e, g.inv[e])}
    inv = {h: hb for h, hb in g.inv.items() if h not in dead}
    origin = {h: vimage[g.origin[h]] for h in inv}
    q = Graph(inv, origin)
    if set(q.vertices) != set(vimage.values()):
        raise NotAForest("collapse would leave an isolated vertex")
    return CollapseResult(q, frozenset(f), vimage)


def maximal_trees(g: Graph) -> Iterator[frozenset]:
    """All spanning trees, as frozensets of edge ids, in lexicographic order."""
    if not g.is_connected():
        raise Disconnected("spanning trees need a connected graph")
    k = len(g.vertices) - 1
    nonloops = [e for e in g.edges if not g.is_loop(e)]
    for combo in itertools.combinations(nonloops, k):
        if is_forest(g, combo):
            yield frozenset(combo)


def tree_path(g: Graph, tree: Iterable[int], a, b) -> list[int]:
    """Half-edges of the unique path from ``a`` to ``b`` inside ``tree``."""
    t = {g.edge_of(h) for h in tree}
    out = defaultdict(list)
    for e in t:
        out[g.origin[e]].append(e)
        out[g.terminal(e)].append(g.inv[e])
    prev = {a: None}
    stack = [a]
    while stack:
        v = stack.pop()
        if v == b:
            break
        for h in out[v]:
            w = g.terminal(h)
            if w not in prev:
                prev[w] = h
                stack.append(w)
    if b not in prev:
        raise Disconnected(f"{a} and {b} are not joined in the tree")
    path = []
    v = b
    while prev[v] is not None:
        h = prev[v]
        path.append(h)
        v = g.origin[h]
    return path[::-1]


def exchange_matrix(g: Graph, phi: Sequence[int], f: Sequence[int]) -> list[list[int]]:
    """Signed incidence ``c[i][j]``: how the phi-path between the ends of
    ``f[j]`` traverses ``phi[i]`` (+1 forward, -1 backward, 0 not at all)."""
    c = [[0] * len(f) for _ in phi]
    index = {e: i for i, e in enumerate(phi)}
    for j, e in enumerate(f):
        for h in tree_path(g, phi, g.origin[e], g.terminal(e)):
            i = index[g.edge_of(h)]
            c[i][j] = 1 if h == phi[i] else -1
    return c


def tree_replacement_permutation(g: Graph, phi: Sequence[int], f: Sequence[int]) -> list[int]:
    """Bijection ``sigma`` (0-based) with ``f[sigma[i]]`` joining the two
    components of ``phi - phi[i]``, fixing indices of common edges.

    ``phi`` and ``f`` are maximal trees given as edge lists of equal length.
    Common edges are matched first; the rest is a perfect matching on the
    support of the exchange matrix, found by augmenting paths.
    """
    phi = [g.edge_of(e) for e in phi]
    f = [g.edge_of(e) for e in f]
    k = len(phi)
    if len(f) != k or len(set(phi)) != k or len(set(f)) != k:
        raise ValueError("trees must be edge lists of equal size")
    sigma: list[int | None] = [None] * k
    fpos = {e: j for j, e in enumerate(f)}
    for i, e in enumerate(phi):
        if e in fpos:
            sigma[i] = fpos[e]
    c = exchange_matrix(g, phi, f)
    rows = [i for i in range(k) if sigma[i] is None]
    used = {s for s in sigma if s is not None}
    cols = [j for j in range(k) if j not in used]
    match_col: dict[int, int] = {}

    def augment(i, seen):
        for j in cols:
            if c[i][j] and j not in seen:
                seen.add(j)
                if j not in match_col or augment(match_col[j], seen):
                    match_col[j] = i
                    return True
        return False

    for i in rows:
        if not augment(i, set()):
            raise NoMatching("no perfect matching on the exchange matrix support")
    for j, i in match_col.items():
        sigma[i] = j
    return sigma  # type: ignore[return-value]


def joins_components(g: Graph, tree: Iterable[int], removed: int, e: int) -> bool:
    """Does edge ``e`` join the two components of ``tree - removed``?"""
    t = {g.edge_of(h) for h in tree} - {g.edge_of(removed)}
    comps = _forest_components(g, t)
    a, b = g.endpoints(g.edge_of(e))
    return comps[a] != comps[b]


def _forest_components(g: Graph, t: set[int]) -> dict:
    parent = {v: v for v in g.vertices}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in t:
        a, b = (find(x) for x in g.endpoints(e))
        parent[a] = b
    return {v: find(v) for v in g.vertices}


def blowup_vertex(g: Graph, v, moved: Iterable[int], new_vertex=None) -> tuple[Graph, int, int]:
    """Split ``v``: the half-edges in ``moved`` go to a new vertex joined to
    ``v`` by a new edge.  Returns ``(graph, h_v, h_w)`` where ``h_v`` is the
    new half-edge at ``v`` (pointing to the new vertex) and ``h_w = inv(h_v)``.
    """
    moved = set(moved)
    if any(g.origin[h] != v for h in moved):
        raise ValueError("moved half-edges must start at the blown-up vertex")
    if new_vertex is None:
        ints = [x for x in g.vertices if isinstance(x, int)]
        new_vertex = max(ints, default=-1) + 1
    top = max(g.inv, default=-1)
    hv, hw = top + 1, top + 2
    inv = dict(g.inv)
    inv[hv], inv[hw] = hw, hv
    origin = {h: (new_vertex if h in moved else o) for h, o in g.origin.items()}
    origin[hv], origin[hw] = v, new_vertex
    return Graph(inv, origin), hv, hw


def canonical_edge_multiset(edges: Sequence[tuple[int, int]], nv: int) -> tuple:
    """Least sorted edge list over all vertex relabelings (isomorphism key)."""
    best = None
    for perm in itertools.permutations(range(nv)):
        key = tuple(sorted(tuple(sorted((perm[a], perm[b]))) for a, b in edges))
        if best is None or key < best:
            best = key
    return best


def core_graphs(max_edges: int, max_rank: int) -> list[Graph]:
    """Connected graphs with every valence >= 3, up to isomorphism."""
    found: dict[tuple, Graph] = {}
    for nv in range(1, 2 * max_rank - 1):
        pairs = [(a, b) for a in range(nv) for b in range(a, nv)]
        for ne in range(nv, max_edges + 1):
            if ne - nv + 1 > max_rank or ne - nv + 1 < 2:
                continue
            if 2 * ne < 3 * nv:
                continue
            for combo in itertools.combinations_with_replacement(pairs, ne):
                g = Graph.from_edges(combo)
                if set(g.vertices) != set(range(nv)) or not is_core(g):
                    continue
                key = (nv, canonical_edge_multiset(combo, nv))
                found.setdefault(key, g)
    return [found[k] for k in sorted(found)]
