"""The star of the standard rose, the retraction removing separating
edges, and the retraction of the reductive trees of a rose to a point.

Run: python demos/03_contractibility.py
"""
from __future__ import annotations

import random

from outerspine import Rose, contractibility_pipeline, homology_f2, random_automorphism, star_poset
from outerspine.complexes import separating_edge_retraction

p = star_poset(3)
print(f"rank 3 star: {len(p)} ideal trees, {len(p.covers())} covering relations, "
      f"{p.count_chains()} simplices, GF(2) Betti numbers {homology_f2(p.order_complex())}")

near, image = separating_edge_retraction(3)
print(f"graphs near the rose: {len(near)} -> {len(image)} after collapsing separating edges")

rng = random.Random(11)
while True:
    rho = Rose(random_automorphism(3, rng.randint(3, 8), rng))
    res = contractibility_pipeline(rho)
    if res.eliminated:
        break
print(f"\nrose {rho}: {len(res.trace.start)} reductive trees, "
      f"Betti numbers {homology_f2(res.trace.start.order_complex())}")
print(f"maximally reductive edge {res.mu}")
for step in res.trace.steps:
    extra = f" alpha={step.data['alpha']} gamma={step.data['gamma']}" if "alpha" in step.data else ""
    print(f"  {step.tag:16} {step.direction.value:10} {len(step.before):3} -> {len(step.after):3}{extra}")
print("verdict:", res.verdict.value)
print("standard rose:", contractibility_pipeline(Rose.standard(3)).verdict.value)
