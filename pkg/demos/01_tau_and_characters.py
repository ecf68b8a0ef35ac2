"""Ramanujan tau, normalized Hecke eigenvalues and a character group.

Run:  python demos/01_tau_and_characters.py
"""

import math

import numpy as np

from heckelab import CharacterGroup, gauss_sum, shared_table

table = shared_table(20_000)

# tau(n) is exact; lambda(n) = tau(n) / n^(11/2) obeys |lambda(n)| <= d(n)
print("n   tau(n)        lambda(n)")
for n in range(1, 11):
    print(f"{n:<3} {table.tau[n]:<13} {table.lam[n]: .6f}")

# the Hecke relation at p = 2: lambda(4) = lambda(2)^2 - 1
print("lambda(4) - (lambda(2)^2 - 1) =", table.lam[4] - (table.lam[2] ** 2 - 1))

# characters mod 45: conductors and Gauss sums of the primitive ones
group = CharacterGroup(45)
conductors = [chi.conductor for chi in group.characters()]
print("\ncharacters mod 45:", group.order, "with conductors", sorted(set(conductors)))
prim = group.primitive_characters()
sizes = np.array([abs(gauss_sum(chi)) for chi in prim])
print(f"{len(prim)} primitive, |tau(chi)| in [{sizes.min():.12f}, {sizes.max():.12f}], sqrt(45) = {math.sqrt(45):.12f}")
