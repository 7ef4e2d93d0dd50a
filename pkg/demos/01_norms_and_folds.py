"""Translation lengths of a marked rose and a fold path back to the
standard rose.

Run: python demos/01_norms_and_folds.py
"""
from __future__ import annotations

from outerspine import Rose, classes_up_to, compare_norm, fold_to_rose, verify_kn_path
from outerspine.marked_graphs import fingerprint
from outerspine.serialization import kn_path_to_dot

rho = Rose.from_text("aba,ab")
rho0 = Rose.standard(2)
print(f"marking {rho}: x1 -> {rho.text()[0]}, x2 -> {rho.text()[1]}")

# the norm is the list of translation lengths in W-order
print("\nclass   length in rho   length in rho0")
for c in classes_up_to(2, 3):
    print(f"{str(c):7} {rho.length(c):>13} {rho0.length(c):>16}")
print("\ncomparison with the standard rose:", compare_norm(rho, rho0).name)
print("fingerprint in the basis adapted to rho0:", fingerprint(rho, rho0).as_dict())

# folding the inverse morphism walks through the spine to the standard rose
path = fold_to_rose(rho)
print(f"\n{len(path.moves)} moves, {len(path.steps)} spine steps, edge counts {path.edge_counts}")
for (direction, forest), point in zip(path.steps, path.points[1:]):
    g = point.graph
    print(f"  {direction:8} forest {sorted(forest)} -> {len(g.vertices)} vertices, {len(g)} edges")
print("every step is a forest collapse between the recorded points:", verify_kn_path(path))

dot = kn_path_to_dot(path)
print(f"\nDOT rendering has {dot.count('subgraph cluster_')} graphs; first lines:")
print("\n".join(dot.splitlines()[:6]))
