"""Compound-Poisson-type limits of bi-free max-convolution powers.

Thin the jump law nu by 1/n, mix it with a Dirac at p, convolve the result
with itself n times, and let n grow: the powers converge to the DF generated
by the exponent measure lam * nu.  With a single atom the identity is exact
at every n; with several atoms the O(1/n) remainder is visible and halves
as n doubles.
"""

from bifreemax import DiscreteMeasure, compound_poisson_limit

print("single-atom jump law (exact at every n)")
_, report = compound_poisson_limit(0.5, DiscreteMeasure([[1.0, 1.0]], [1.0]),
                                   (0.0, 0.0), ns=[2, 8, 64, 1024])
for n, d in zip(report.ns, report.distances):
    print(f"  n={n:5d}: {d:.3e}")

print()
print("three-atom jump law (O(1/n) remainder)")
nu = DiscreteMeasure([[1.0, 2.0], [2.0, 1.0], [0.5, 0.5]], [0.4, 0.4, 0.2])
limit, report = compound_poisson_limit(0.8, nu, (0.0, 0.0),
                                       ns=[2 ** k for k in range(1, 11)])
prev = None
for n, d in zip(report.ns, report.distances):
    rate = "" if prev is None or d == 0 else f"  (ratio {prev / d:.2f})"
    print(f"  n={n:5d}: {d:.3e}{rate}")
    prev = d
print("  eventually decreasing:", report.eventually_decreasing())
print("  limit lower corner:", limit.lower)

print()
print("rate above 1 clips the support: lam = 2")
nu2 = DiscreteMeasure([[1.0, 1.0], [2.0, 2.0]], [0.6, 0.4])
limit2, _ = compound_poisson_limit(2.0, nu2, (0.0, 0.0), ns=[4])
print("  lower corner of the limit:", limit2.lower)
print("  marginal at the corner:", limit2.marginal1.eval(limit2.lower[0]))
