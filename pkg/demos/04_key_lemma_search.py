"""Search for failures of the Key Lemma: all rank 2 roses a few Nielsen
moves from the standard one, then random rank 3 roses.

Run: python demos/04_key_lemma_search.py [samples]
"""
from __future__ import annotations

import sys

from outerspine.verify import exhaustive_rank2_roses, sample_roses
from outerspine.whitehead import KeyLemmaReport, key_lemma_check

samples = int(sys.argv[1]) if len(sys.argv) > 1 else 300
for label, roses in [("rank 2, depth 4", exhaustive_rank2_roses(4)),
                     (f"rank 3, {samples} samples", sample_roses(samples, 0, (3,)))]:
    rep = KeyLemmaReport()
    for rho in roses:
        rep.merge(key_lemma_check(rho))
    d = rep.as_dict()
    print(f"{label}: {d['roses']} roses, {d['instances']} (mu, alpha) instances, "
          f"{d['violations']} violations; four-sector case seen {d['census_instances']} times")
# in rank 2 at most one ideal edge is reductive, so no instance ever arises
