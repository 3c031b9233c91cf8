"""The closed-form constants of the counting limit laws.

Prints the mean constant and both variance candidates for a few problems,
and the number-theoretic ingredients (restricted zeta values and the residue
double sum) that enter the congruence-constrained variance.
"""

import math

from dioclt import (
    ApproximationProblem,
    NormSpec,
    constants_for,
    residue_double_sum,
    validate,
    zeta,
    zeta_N,
)


def show(label, problem):
    c = constants_for(validate(problem))
    print(f"{label}:")
    print(f"  c_mean               = {c.c_mean:.12g}")
    print(f"  sigma2 (theorem)     = {c.sigma2_theorem:.12g}")
    print(f"  sigma2 (proof form)  = {c.sigma2_proof_variant:.12g}")
    print(f"  omega_n              = {c.omega_n:.12g}")
    if c.zeta_n_value is not None:
        print(f"  zeta_N(m+n)          = {c.zeta_n_value:.12g}")
        print(f"  residue double sum   = {c.residue_double_sum:.12g}")
    print()


show("two forms, one variable, sup norm",
     ApproximationProblem(m=2, n=1, thetas=(1.0, 1.0), weights=(0.5, 0.5)))

show("same system, Euclidean norm in q",
     ApproximationProblem(m=2, n=1, thetas=(1.0, 1.0), weights=(0.5, 0.5),
                          norm=NormSpec.euclidean()))

show("congruence-constrained mod 2 (odd solutions only)",
     ApproximationProblem(m=2, n=1, thetas=(1.0, 1.0), weights=(0.5, 0.5),
                          mode="congruence", modulus=2, residues=(1, 1, 1)))

print("number-theoretic ingredients with certified truncation error:")
v, b = zeta(3.0)
print(f"  zeta(3)     = {v:.15f}  (bound {b:.1e})")
v, b = zeta_N(2.0, 2)
print(f"  zeta_2(2)   = {v:.15f}  (= pi^2/8 = {math.pi ** 2 / 8:.15f})")
v, b = residue_double_sum(2, 1, 1)
print(f"  S_1 (d = 3) = {v:.15f}  (= zeta(2) - zeta(3))")
