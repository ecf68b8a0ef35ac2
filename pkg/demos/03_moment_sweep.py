"""Moment sums against their envelopes, and the fitted log-power exponent.

A fitted slope near or below 1 means the measured moments grow no faster
in log(modulus) than the envelope's power of log predicts.

Run:  python demos/03_moment_sweep.py
"""

from heckelab import fit_exponent, moment_fixed_mod, moment_quadratic, shared_table

table = shared_table(20_000)

print("fixed modulus, Y = q, m = 3")
fixed = [moment_fixed_mod(q, q, 3, table, threads=4) for q in (211, 401, 809, 1601, 3203)]
for r in fixed:
    print(f"  q = {r.modulus:<5} characters = {r.count:<5} ratio = {r.ratio:.4g}")
print("  fitted slope:", round(fit_exponent(fixed).slope, 3))

print("quadratic family, Y = X, m = 2")
quad = [moment_quadratic(X, X, 2, table, threads=4) for X in (1000, 3000, 10_000)]
for r in quad:
    print(f"  X = {r.modulus:<6} discriminants = {r.count:<5} ratio = {r.ratio:.4g}")
print("  fitted slope:", round(fit_exponent(quad).slope, 3))
