"""Closed-form constants of the counting limit laws, with certified truncation error.

The headline mean is C = 2^m theta_1...theta_m omega_n (divided by N^{m+n} in
congruence mode).  Two variance candidates are computed and reported side by
side, because the source formulas disagree:

  * sigma2_theorem  -- the headline statement: sigma^2 = C in the inhomogeneous
    case; in the congruence case the 2^{m+1}/N^{m+n} expression with the
    zeta_N-normalized residue double sum.
  * sigma2_proof_variant -- the value stated inside the proofs,
    2^m theta_1...theta_m omega_n, for both cases.

Neither is silently preferred; the simulation layer reports both against the
empirical variance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .model import ApproximationProblem, validate
from .norms import omega_n

DEFAULT_TOL = 1e-10


class DivergentSeries(ValueError):
    pass


def _prime_factors(N: int) -> list:
    out = []
    x = N
    p = 2
    while p * p <= x:
        if x % p == 0:
            out.append(p)
            while x % p == 0:
                x //= p
        p += 1
    if x > 1:
        out.append(x)
    return out


def zeta(r: float, tol: float = DEFAULT_TOL):
    """Riemann zeta for real r > 1 by direct series plus Euler-Maclaurin tail.

    Returns (value, bound) with |value - zeta(r)| <= bound <= tol.  The tail
    from a = K+1 keeps the Euler-Maclaurin corrections through the B_4 term;
    the summand is completely monotone, so the remainder is bounded by (and
    comparable to) the first omitted B_6 term, reported with a safety factor 2.
    """
    if not r > 1:
        raise DivergentSeries(f"zeta requires r > 1, got {r}")

    def b6_bound(a: float) -> float:
        return 2.0 * r * (r + 1) * (r + 2) * (r + 3) * (r + 4) * a ** (-r - 5) / 30240.0

    K = 64
    while b6_bound(float(K + 1)) > tol / 2 and K < 1 << 22:
        K *= 2
    ks = np.arange(1, K + 1, dtype=float)
    head = float(np.sum(ks ** (-r)))
    a = float(K + 1)
    tail = (
        a ** (1.0 - r) / (r - 1.0)
        + 0.5 * a ** (-r)
        + r * a ** (-r - 1.0) / 12.0
        - r * (r + 1) * (r + 2) * a ** (-r - 3.0) / 720.0
    )
    value = head + tail
    # pairwise-summation roundoff allowance on top of the truncation bound
    roundoff = 64.0 * np.finfo(float).eps * (abs(value) + 1.0)
    return value, b6_bound(a) + roundoff


def zeta_N(r: float, N: int, tol: float = DEFAULT_TOL):
    """zeta restricted to k coprime to N: zeta(r) * prod_{p | N} (1 - p^{-r}).

    Returns (value, bound) with absolute error <= bound <= tol.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    z, zb = zeta(r, tol)
    factor = 1.0
    for p in _prime_factors(N):
        factor *= 1.0 - float(p) ** (-r)
    return z * factor, zb * factor


def residue_set(N: int) -> list:
    """S_N: residues in [0, N) coprime to N; S_1 = [0]."""
    if N < 1:
        raise ValueError("N must be >= 1")
    if N == 1:
        return [0]
    return [i for i in range(N) if math.gcd(i, N) == 1]


def residue_double_sum(m: int, n: int, N: int, tol: float = DEFAULT_TOL):
    """sum over r in S_N, q >= 1 of (q-1)/(Nq+r)^{m+n}, with error <= tol.

    For N=1 this telescopes to zeta(d-1) - zeta(d) with d = m+n.  Partial sums
    to q <= Q are completed with an Euler-Maclaurin tail through the B_4 term
    (the summand g(x) = (x-1)(Nx+r)^{-d} has closed-form derivatives); the
    reported bound is the first omitted B_6-order term with a safety factor 2.
    """
    d = m + n
    if d < 3:
        raise DivergentSeries(f"residue double sum needs m+n >= 3, got {d}")
    residues = residue_set(N)

    def falling(k: int) -> float:  # d (d+1) ... (d+k-1)
        out = 1.0
        for j in range(k):
            out *= d + j
        return out

    def g5_bound(a: float, r: int) -> float:
        A = N * a + r
        return 2.0 * (
            (a - 1.0) * falling(5) * N ** 5 * A ** (-d - 5)
            + 5.0 * falling(4) * N ** 4 * A ** (-d - 4)
        ) / 30240.0

    Q = 64
    while len(residues) * g5_bound(float(Q + 1), 0) > tol / 2 and Q < 1 << 22:
        Q *= 2

    qs = np.arange(1, Q + 1, dtype=float)
    total = 0.0
    total_bound = 0.0
    a = float(Q + 1)
    for r in residues:
        u = N * qs + r
        total += float(np.sum((qs - 1.0) / u ** d))
        A = N * a + r
        # integral_a^inf (x-1)(Nx+r)^{-d} dx via t = Nx+r
        integral = (A ** (2 - d) / (d - 2) - (r + N) * A ** (1 - d) / (d - 1)) / N ** 2
        g = (a - 1.0) * A ** (-d)
        gp = A ** (-d) - d * N * (a - 1.0) * A ** (-d - 1)
        g3 = 3.0 * falling(2) * N ** 2 * A ** (-d - 2) - falling(3) * N ** 3 * (a - 1.0) * A ** (-d - 3)
        total += integral + 0.5 * g - gp / 12.0 + g3 / 720.0
        total_bound += g5_bound(a, r)
    total_bound += 64.0 * np.finfo(float).eps * (abs(total) + 1.0)
    return total, total_bound


@dataclass(frozen=True)
class TheoreticalConstants:
    c_mean: float
    sigma2_theorem: float
    sigma2_proof_variant: float
    omega_n: float
    tolerance: float
    zeta_n_value: Optional[float] = None
    zeta_n_bound: Optional[float] = None
    residue_double_sum: Optional[float] = None
    residue_double_sum_bound: Optional[float] = None


def constants_for(problem: ApproximationProblem, tol: float = DEFAULT_TOL) -> TheoreticalConstants:
    """All limit-law constants for a validated problem."""
    problem = validate(problem)
    w = omega_n(problem.norm, problem.n)
    theta_prod = 1.0
    for t in problem.thetas:
        theta_prod *= t
    base = 2.0 ** problem.m * theta_prod * w  # 2^m theta_1...theta_m omega_n

    if not problem.is_congruence:
        return TheoreticalConstants(
            c_mean=base,
            sigma2_theorem=base,
            sigma2_proof_variant=base,
            omega_n=w,
            tolerance=tol,
        )

    N = problem.modulus
    d = problem.m + problem.n
    s, s_bound = residue_double_sum(problem.m, problem.n, N, tol)
    z, z_bound = zeta_N(d, N, tol)
    sigma2 = (2.0 ** (problem.m + 1) / N ** d) * theta_prod * w * (1.0 + 2.0 * s / z)
    return TheoreticalConstants(
        c_mean=base / N ** d,
        sigma2_theorem=sigma2,
        sigma2_proof_variant=base,
        omega_n=w,
        tolerance=tol,
        zeta_n_value=z,
        zeta_n_bound=z_bound,
        residue_double_sum=s,
        residue_double_sum_bound=s_bound,
    )
