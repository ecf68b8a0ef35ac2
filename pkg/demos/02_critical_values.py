"""Central values L(1/2, f x chi) against their prime-sum majorant.

The majorant drops an unspecified O(1), so the gap log|L| - majorant is
bounded above by a constant C0 that this script measures.

Run:  python demos/02_critical_values.py [q]
"""

import math
import sys

import numpy as np

from heckelab import CharacterGroup, l_twisted, log_l_majorant, shared_table

q = int(sys.argv[1]) if len(sys.argv) > 1 else 101
table = shared_table(20_000)

untwisted = l_twisted(0.5, None, table, method="afe")
print(f"L(1/2, Delta) = {untwisted.value.real:.15f}  (error estimate {untwisted.error:.1e})")

logs, majorants = [], []
for chi in CharacterGroup(q).primitive_characters():
    val = l_twisted(0.5, chi, table, method="afe").value
    logs.append(math.log(abs(val)))
    majorants.append(log_l_majorant(chi, 0.0, q, table).total)
logs, majorants = np.array(logs), np.array(majorants)

best = int(np.argmax(logs))
rank = (majorants <= majorants[best]).mean()
print(f"q = {q}: {len(logs)} primitive characters")
print(f"  largest log|L(1/2)| = {logs[best]:.3f}, its majorant sits at quantile {rank:.2f}")
print(f"  correlation(log|L|, majorant) = {np.corrcoef(logs, majorants)[0, 1]:.3f}")
print(f"  fitted C0 = max(log|L| - majorant) = {(logs - majorants).max():.3f}")
