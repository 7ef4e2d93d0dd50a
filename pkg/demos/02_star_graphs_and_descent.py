"""Star graphs, ideal edges and reductive pairs, ending in a descent to a
minimal rose.

Run: python demos/02_star_graphs_and_descent.py
"""
from __future__ import annotations

from outerspine import Rose, ideal_edges, star_graph, whitehead_reduce
from outerspine.whitehead import half_edge_name, reductive_edges, reductive_pairs, size

# the star graph of x2 x4^-1 x3 x3 on the standard four petal rose
sg = star_graph(Rose.standard(4), (2, -4, 3, 3))
print("turns of x2 X4 x3 x3:", [f"{half_edge_name(a)}-{half_edge_name(b)}" for a, b in sg.edges])
v = sg.valences()
print("valence per petal:", [v[2 * i] + v[2 * i + 1] for i in range(4)], "total", sum(v))

rho = Rose.from_text("bab,ab")
print(f"\nrose {rho}")
print(f"{len(ideal_edges(2))} nontrivial ideal edges in rank 2; reductive ones:")
for e in reductive_edges(rho):
    for p in reductive_pairs(rho, e):
        s = size(rho, p.side)
        print(f"  pair {p}: |A| on a, b, aa, ab = {[s[c] for c in [(1,), (2,), (1, 1), (1, 2)]]},"
              f" collapses to {p.collapsed}")

fixed, trace = whitehead_reduce(Rose.from_text("babab,bab,c"))
print("\ndescent of Rose(babab,bab,c):")
for step in trace:
    print(f"  {step.before} -> {step.after}")
print("minimal rose:", fixed, "with", len(reductive_edges(fixed)), "reductive edges")
