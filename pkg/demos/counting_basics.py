"""Counting solutions of a weighted system of two forms in one variable.

Walks through the basic objects: a problem definition, an exact count at a
few radii, the agreement with the literal brute-force oracle, and the
decomposition of the count into per-annulus windows.
"""

import math

import numpy as np

from dioclt import (
    ApproximationProblem,
    SamplePoint,
    brute_force_delta,
    delta,
    validate,
    window_counts,
)

problem = validate(ApproximationProblem(
    m=2, n=1, thetas=(1.0, 1.0), weights=(0.5, 0.5)))

rng = np.random.default_rng(1)
sample = SamplePoint(u=rng.random((2, 1)), v=rng.random(2))
print("u =", sample.u.ravel(), " v =", sample.v)

print("\ncounts Delta_T(u, v) as the radius grows:")
for T in (5, 20, 100, 500):
    res = delta(problem, sample, T)
    print(f"  T = {T:4d}: {res.total:6d} solutions over {res.q_enumerated} vectors q")

T = 30.0
fast = delta(problem, sample, T).total
slow = brute_force_delta(problem, sample, T).total
print(f"\nclosed-form count vs literal scan at T = {T}: {fast} == {slow}")

M = 6
series = window_counts(problem, sample, M)
print(f"\nwindow decomposition over e^s <= ||q|| < e^(s+1), M = {M}:")
for s, c in enumerate(series.counts):
    print(f"  s = {s}: {int(c):6d}")
print(f"  sum = {series.total} "
      f"(equals the count at T = e^{M} = {math.exp(M):.1f}: "
      f"{delta(problem, sample, math.exp(M)).total})")
