"""Acceptance suites.

Each suite returns a :class:`CriterionResult`; the CLI ``verify`` command and
``tests/test_acceptance.py`` both run them.  Sample sizes and time limits
default to the acceptance targets; all randomness comes from ``seed``.
"""
from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass, field
from typing import Callable

from . import automorphisms as aut
from .complexes import (Verdict, contractibility_pipeline, homology_f2, is_acyclic_point)
from .folds import fold_to_rose, kn_endpoint_rose, verify_kn_path
from .free_words import canonical_class, classes_up_to, cyclic_reduce
from .graphs import core_graphs, joins_components, maximal_trees, tree_replacement_permutation
from .marked_graphs import Comparison, Rose, compare_norm, roses_equal
from .whitehead import (KeyLemmaReport, count_identity_check, dot, half_edge_set, ideal_trees,
                        is_reductive_edge, is_reductive_tree, key_lemma_check,
                        reductive_edges, star_graph, whitehead_reduce)


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    seconds: float = 0.0
    limit: float | None = None
    details: dict = field(default_factory=dict)

    @property
    def within_limit(self) -> bool:
        return self.limit is None or self.seconds <= self.limit

    def line(self) -> str:
        status = "PASS" if self.passed and self.within_limit else "FAIL"
        extra = ", ".join(f"{k}={v}" for k, v in self.details.items() if not isinstance(v, (list, dict)))
        limit = f" / {self.limit:.0f}s" if self.limit else ""
        return f"{status} [{self.number}] {self.name} ({self.seconds:.2f}s{limit}) {extra}"

    def as_dict(self) -> dict:
        return {"criterion": self.number, "name": self.name, "passed": self.passed,
                "withinTimeLimit": self.within_limit, "seconds": round(self.seconds, 3),
                "limit": self.limit, "details": self.details}


def sample_roses(count: int, seed: int, ranks=(2, 3), max_factors: int = 8) -> list[Rose]:
    """Roses marked by products of at most ``max_factors`` Nielsen moves."""
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        n = rng.choice(ranks)
        out.append(Rose(aut.random_automorphism(n, rng.randint(0, max_factors), rng)))
    return out


def _timed(number: int, name: str, limit: float | None, body: Callable[[], tuple[bool, dict]]):
    t0 = time.perf_counter()
    passed, details = body()
    return CriterionResult(number, name, passed, time.perf_counter() - t0, limit, details)


# 1 ----------------------------------------------------------------------------

def class_counts(ranks=(2, 3, 4), **_) -> CriterionResult:
    def body():
        counts = {n: len(classes_up_to(n, 2)) for n in ranks}
        return all(c == n + n * n for n, c in counts.items()), {"counts": counts}
    return _timed(1, "class-counts", 1.0, body)


# 2 ----------------------------------------------------------------------------

def star_graph_valence(samples: int = 500, seed: int = 0, ranks=(2, 3), **_) -> CriterionResult:
    def body():
        rng = random.Random(seed)
        roses = sample_roses(samples, seed, ranks)
        bad = 0
        for rho in roses:
            while True:
                w = cyclic_reduce(rng.choice([i, -i]) for i in
                                  (rng.randint(1, rho.n) for _ in range(rng.randint(1, 6))))
                if w:
                    break
            c = canonical_class(w)
            sg = star_graph(rho, c)
            ell = rho.length(c)
            if sum(sg.valences()) != 2 * ell or len(sg.edges) != ell:
                bad += 1
        fig = star_graph(Rose.standard(4), (2, -4, 3, 3))
        v = fig.valences()
        petals = [v[2 * i] + v[2 * i + 1] for i in range(4)]
        ok_fig = petals == [0, 2, 4, 2] and sum(v) == 8
        return bad == 0 and ok_fig, {"samples": samples, "violations": bad,
                                     "figure_petal_sums": petals}
    return _timed(2, "star-graph-valence", 10.0, body)


# 3 ----------------------------------------------------------------------------

def count_identity(samples: int = 200, seed: int = 0, ranks=(2, 3), max_length: int = 4,
                   **_) -> CriterionResult:
    def body():
        rng = random.Random(seed)
        bad = {"identity": 0, "symmetry": 0, "additivity": 0, "inequality": 0}
        for n in ranks:
            h = sorted(half_edge_set(n))
            roses = sample_roses(samples, seed + n, (n,))
            classes = classes_up_to(n, max_length)
            for rho in roses:
                a = frozenset(x for x in h if rng.random() < 0.5)
                b = frozenset(x for x in h if rng.random() < 0.5)
                if not count_identity_check(rho, a, b, max_length):
                    bad["identity"] += 1
                x, y = a - b, b - a
                w = frozenset(h) - a - b
                xy, yx = dot(rho, x, y), dot(rho, y, x)
                xw, x_yw = dot(rho, x, w), dot(rho, x, y | w)
                for c in classes:
                    if xy[c] != yx[c]:
                        bad["symmetry"] += 1
                    if x_yw[c] != xy[c] + xw[c]:
                        bad["additivity"] += 1

                def cut(s, c):
                    return dot(rho, s, frozenset(h) - s)[c] if s and len(s) < len(h) else 0

                for c in classes:
                    if cut(a & b, c) + cut(a | b, c) > cut(a, c) + cut(b, c):
                        bad["inequality"] += 1
        return not any(bad.values()), {"pairs_per_rank": samples, **bad}
    return _timed(3, "count-identity", 30.0, body)


# 4 ----------------------------------------------------------------------------

def fold_connectivity(samples: int = 200, seed: int = 0, ranks=(2, 3), **_) -> CriterionResult:
    def body():
        bad = []
        for rho in sample_roses(samples, seed, ranks):
            p = fold_to_rose(rho)
            decreasing = all(a > b for a, b in zip(p.edge_counts, p.edge_counts[1:]))
            endpoint = roses_equal(kn_endpoint_rose(p), Rose.standard(rho.n))
            if not (decreasing and endpoint and verify_kn_path(p)):
                bad.append(str(rho))
        return not bad, {"samples": samples, "failures": len(bad), "examples": bad[:3]}
    return _timed(4, "fold-connectivity", 60.0, body)


# 5 ----------------------------------------------------------------------------

def tree_replacement(max_edges: int = 6, max_rank: int = 3, **_) -> CriterionResult:
    def body():
        graphs = core_graphs(max_edges, max_rank)
        pairs = bad = 0
        for g in graphs:
            trees = [sorted(t) for t in maximal_trees(g)]
            for phi, f in itertools.product(trees, repeat=2):
                pairs += 1
                sigma = tree_replacement_permutation(g, phi, f)
                ok = sorted(sigma) == list(range(len(phi)))
                for i, e in enumerate(phi):
                    ok = ok and joins_components(g, phi, e, f[sigma[i]])
                    if e in f:
                        ok = ok and f[sigma[i]] == e
                bad += not ok
        return bad == 0, {"graphs": len(graphs), "tree_pairs": pairs, "violations": bad}
    return _timed(5, "tree-replacement", 60.0, body)


# 6 ----------------------------------------------------------------------------

def norm_comparison(samples: int = 100, seed: int = 0, ranks=(2, 3), **_) -> CriterionResult:
    def body():
        rng = random.Random(seed)
        bad = {"antisymmetry": 0, "equality": 0, "transitivity": 0, "invariance": 0}
        equal_pairs = 0
        by_rank: dict[int, list[Rose]] = {}
        for k in range(samples):
            n = rng.choice(ranks)
            a = Rose(aut.random_automorphism(n, rng.randint(0, 8), rng))
            if k % 4 == 0:
                # a second marking of the same point of the spine
                b = a.twisted(aut.conjugation(n, [rng.choice([1, -1]) * rng.randint(1, n)]))
                perm = list(range(n))
                rng.shuffle(perm)
                b = b.relabeled(aut.signed_permutation(perm, [rng.choice([1, -1]) for _ in perm]))
            else:
                b = Rose(aut.random_automorphism(n, rng.randint(0, 8), rng))
            by_rank.setdefault(n, []).extend([a, b])
            ab, ba = compare_norm(a, b), compare_norm(b, a)
            if ab != -ba:
                bad["antisymmetry"] += 1
            if (ab == Comparison.EQUAL) != roses_equal(a, b):
                bad["equality"] += 1
            equal_pairs += ab == Comparison.EQUAL
            # inner twists and petal relabelings do not move the point
            u = [rng.choice([1, -1]) * rng.randint(1, n) for _ in range(rng.randint(1, 3))]
            perm = list(range(n))
            rng.shuffle(perm)
            sigma = aut.signed_permutation(perm, [rng.choice([1, -1]) for _ in perm])
            a2 = a.twisted(aut.conjugation(n, u)).relabeled(sigma)
            if compare_norm(a, a2) != Comparison.EQUAL or compare_norm(a2, b) != ab:
                bad["invariance"] += 1
        for roses in by_rank.values():
            for _ in range(samples):
                x, y, z = (rng.choice(roses) for _ in range(3))
                if (compare_norm(x, y) <= 0 and compare_norm(y, z) <= 0
                        and compare_norm(x, z) > 0):
                    bad["transitivity"] += 1
        return not any(bad.values()), {"pairs": samples, "equal_pairs": equal_pairs, **bad}
    return _timed(6, "norm-comparison", 60.0, body)


# 7 ----------------------------------------------------------------------------

def factorization(samples: int = 50, seed: int = 0, ranks=(2, 3), **_) -> CriterionResult:
    def body():
        trees = bad = 0
        for rho in sample_roses(samples, seed, ranks):
            for t in ideal_trees(rho.n):
                if is_reductive_tree(rho, t):
                    trees += 1
                    if not any(is_reductive_edge(rho, e) for e in t):
                        bad += 1
        return bad == 0, {"roses": samples, "reductive_trees": trees, "counterexamples": bad}
    return _timed(7, "factorization", 300.0, body)


# 8 ----------------------------------------------------------------------------

def exhaustive_rank2_roses(depth: int = 4) -> list[Rose]:
    """Every rank 2 rose marked by a product of at most ``depth`` Nielsen moves."""
    gens = aut.nielsen_factors(2)
    seen = {aut.identity(2)}
    frontier = [aut.identity(2)]
    for _ in range(depth):
        nxt = []
        for phi in frontier:
            for g in gens:
                psi = aut.compose(phi, g)
                if psi not in seen:
                    seen.add(psi)
                    nxt.append(psi)
        frontier = nxt
    return [Rose(phi, check=False) for phi in sorted(seen)]


def key_lemma(samples: int = 200, seed: int = 0, depth: int = 4, ranks=(2, 3),
              **_) -> CriterionResult:
    def body():
        rep2, rep3 = KeyLemmaReport(), KeyLemmaReport()
        if 2 in ranks:
            for rho in exhaustive_rank2_roses(depth):
                rep2.merge(key_lemma_check(rho))
        for n in ranks:
            if n > 2:
                for rho in sample_roses(samples, seed, (n,)):
                    rep3.merge(key_lemma_check(rho))
        return rep2.ok and rep3.ok, {
            "n2_roses": rep2.roses, "n2_instances": rep2.instances,
            "n3_roses": rep3.roses, "n3_instances": rep3.instances,
            "violations": len(rep2.violations) + len(rep3.violations),
            "census_instances": rep2.census_instances + rep3.census_instances,
            "census_violations": len(rep2.census_violations) + len(rep3.census_violations)}
    return _timed(8, "key-lemma", 600.0, body)


# 9 ----------------------------------------------------------------------------

def contractibility(samples: int = 30, seed: int = 0, ranks=(2, 3), **_) -> CriterionResult:
    def body():
        rng = random.Random(seed)
        bad = []
        done = 0
        eliminations = 0
        while done < samples:
            n = rng.choice(ranks)
            rho = Rose(aut.random_automorphism(n, rng.randint(1, 8), rng))
            if roses_equal(rho, Rose.standard(n)):
                continue
            done += 1
            res = contractibility_pipeline(rho)
            betti = homology_f2(res.trace.start.order_complex())
            eliminations += len(res.eliminated)
            chi = sum((-1) ** k * b for k, b in enumerate(betti))
            if res.verdict is not Verdict.CONTRACTIBLE or not is_acyclic_point(betti) or chi != 1:
                bad.append((str(rho), res.verdict.value, betti))
        for n in ranks:
            rho0 = Rose.standard(n)
            if contractibility_pipeline(rho0).verdict is not Verdict.EMPTY or reductive_edges(rho0):
                bad.append((str(rho0), "standard rose", []))
        return not bad, {"roses": samples, "eliminations": eliminations, "failures": len(bad),
                         "examples": [str(b) for b in bad[:3]]}
    return _timed(9, "contractibility", 600.0, body)


# 10 ---------------------------------------------------------------------------

def descent(samples: int = 200, seed: int = 0, ranks=(2, 3), max_steps: int = 64,
            **_) -> CriterionResult:
    def body():
        bad = []
        longest = 0
        for rho in sample_roses(samples, seed, ranks):
            fixed, trace = whitehead_reduce(rho, max_steps=max_steps)
            longest = max(longest, len(trace))
            ok = all(compare_norm(s.after, s.before) == Comparison.LESS for s in trace)
            ok = ok and not reductive_edges(fixed)
            if rho.n == 2:
                ok = ok and roses_equal(fixed, Rose.standard(2))
            if not ok:
                bad.append(str(rho))
        return not bad, {"roses": samples, "longest_descent": longest, "failures": len(bad)}
    return _timed(10, "descent", 300.0, body)


SUITES: dict[str, Callable[..., CriterionResult]] = {
    "class-counts": class_counts,
    "star-graph-valence": star_graph_valence,
    "count-identity": count_identity,
    "fold-connectivity": fold_connectivity,
    "tree-replacement": tree_replacement,
    "norm-comparison": norm_comparison,
    "factorization": factorization,
    "key-lemma": key_lemma,
    "contractibility": contractibility,
    "descent": descent,
}


def run_suite(name: str, **kwargs) -> list[CriterionResult]:
    if name == "all":
        return [f(**kwargs) for f in SUITES.values()]
    if name not in SUITES:
        raise KeyError(name)
    return [SUITES[name](**kwargs)]
