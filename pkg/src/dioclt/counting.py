"""Exact solution counting for the weighted approximation inequalities.

The count for a bound T enumerates the integer vectors q with ||q|| < T and,
for each q, multiplies closed-form counts of the integers p_i falling in the
open interval |p_i + c_i| < theta_i ||q||^{-w_i}.  All interval counts are pure
floor/ceil arithmetic; there is no scan over p.  A literal brute-force oracle
is provided for testing.

Boundary policy: every threshold comparison is strict ('<'), evaluated in
double precision with no epsilon nudging; the brute-force oracle applies the
identical predicate, so oracle-equivalence tests are exact.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .model import (
    ApproximationProblem,
    Q_LOWER_INCLUSIVE1,
    SamplePoint,
    SIGN_ANY,
    SIGN_NEGATIVE,
    SIGN_NONNEGATIVE,
    SIGN_NONPOSITIVE,
    SIGN_POSITIVE,
    validate,
    validate_sample,
)

# enumeration guard: refuse q-boxes larger than this many candidate points
DEFAULT_Q_BUDGET = 80_000_000


class ResourceBudgetError(RuntimeError):
    """The q enumeration would exceed the configured budget."""


class CountOverflow(RuntimeError):
    """The total count would not fit the 64-bit accumulator."""


@dataclass(frozen=True)
class CountResult:
    total: int
    q_enumerated: int
    T: float


@dataclass
class WindowSeries:
    """Per-annulus counts chi(a^s Lambda) for s = 0..M-1; their sum is the
    count over 1 <= ||q|| < e^M."""

    M: int
    counts: np.ndarray  # int64, length M
    sample: SamplePoint

    @property
    def total(self) -> int:
        return int(self.counts.sum())


def _progression_count(lo, hi, lo_open: bool, hi_open: bool, residue: int, modulus: int):
    """Number of integers p = modulus*k + residue in the interval (lo, hi),
    with either endpoint optionally closed.  Works on scalars and arrays."""
    a = (np.asarray(lo, dtype=float) - residue) / modulus
    b = (np.asarray(hi, dtype=float) - residue) / modulus
    kmin = np.floor(a) + 1.0 if lo_open else np.ceil(a)
    kmax = np.ceil(b) - 1.0 if hi_open else np.floor(b)
    return np.maximum(kmax - kmin + 1.0, 0.0)


def count_interval(c: float, h: float) -> int:
    """Exact number of integers p with |p + c| < h."""
    if not h > 0:
        raise ValueError("h must be positive")
    return int(_progression_count(-c - h, -c + h, True, True, 0, 1))


def count_residue_interval(c: float, h: float, r: int, N: int) -> int:
    """Exact number of integers p = r (mod N) with |p + c| < h."""
    if not h > 0:
        raise ValueError("h must be positive")
    if N < 1:
        raise ValueError("N must be >= 1")
    return int(_progression_count(-c - h, -c + h, True, True, r % N, N))


# per-coordinate sign region intersected with (-h, h), as (lo, hi, lo_open, hi_open)
# expressed as multiples of h
_SIGN_REGION = {
    SIGN_ANY: (-1.0, 1.0, True, True),
    SIGN_POSITIVE: (0.0, 1.0, True, True),
    SIGN_NONNEGATIVE: (0.0, 1.0, False, True),
    SIGN_NEGATIVE: (-1.0, 0.0, True, True),
    SIGN_NONPOSITIVE: (-1.0, 0.0, True, False),
}


@dataclass
class PreparedCount:
    """q enumeration shared by every sample at a fixed (problem, T):
    the candidate vectors, their norms, and the thresholds h_i(q)."""

    problem: ApproximationProblem
    T: float
    Q: np.ndarray  # (K, n) float64, the candidate integer vectors
    norms: np.ndarray  # (K,)
    H: np.ndarray  # (m, K) thresholds theta_i * ||q||^{-w_i}


def _q_sign_ok(qcol: np.ndarray, sign: str) -> np.ndarray:
    if sign == SIGN_POSITIVE:
        return qcol > 0
    if sign == SIGN_NONNEGATIVE:
        return qcol >= 0
    if sign == SIGN_NEGATIVE:
        return qcol < 0
    if sign == SIGN_NONPOSITIVE:
        return qcol <= 0
    return np.ones(len(qcol), dtype=bool)


def prepare(problem: ApproximationProblem, T: float, q_budget: int = DEFAULT_Q_BUDGET) -> PreparedCount:
    """Enumerate the q candidates for ||q|| < T and precompute sample-independent data.

    For integer vectors and any p-norm the sets {0 < ||q|| < T} and
    {1 <= ||q|| < T} coincide (nonzero integer vectors have norm >= 1), so both
    q_lower conventions yield the same enumeration.
    """
    if not T > 1:
        raise ValueError("T must be > 1")
    from .norms import _norms_of_rows

    problem = validate(problem)
    n = problem.n
    box = int(math.ceil(T)) - 1  # largest coordinate magnitude compatible with ||q|| < T

    if problem.is_congruence:
        N = problem.modulus
        axes = []
        for j in range(n):
            r = problem.q_residues[j]
            kmin = math.ceil((-box - r) / N)
            kmax = math.floor((box - r) / N)
            axes.append(np.arange(kmin, kmax + 1, dtype=np.int64) * N + r)
    else:
        axes = [np.arange(-box, box + 1, dtype=np.int64)] * n

    size = 1
    for ax in axes:
        size *= len(ax)
    if size > q_budget:
        raise ResourceBudgetError(f"q box has {size} candidates, budget is {q_budget}")

    grids = np.meshgrid(*axes, indexing="ij")
    Q = np.stack([g.reshape(-1) for g in grids], axis=-1).astype(np.float64)

    keep = ~np.all(Q == 0, axis=1)
    if problem.orthant is not None:
        for j in range(n):
            keep &= _q_sign_ok(Q[:, j], problem.orthant[problem.m + j])
    Q = Q[keep]

    norms = _norms_of_rows(problem.norm, Q)
    inside = norms < T  # >= 1 is automatic for nonzero integer q
    Q = Q[inside]
    norms = norms[inside]

    H = np.empty((problem.m, len(Q)))
    for i in range(problem.m):
        H[i] = problem.thetas[i] * norms ** (-problem.weights[i])
    return PreparedCount(problem=problem, T=float(T), Q=Q, norms=norms, H=H)


def _per_q_products(prep: PreparedCount, u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """For each enumerated q, the product over i of the per-coordinate counts."""
    problem = prep.problem
    N = problem.modulus if problem.is_congruence else 1
    prod = None
    for i in range(problem.m):
        c = prep.Q @ u[i] + v[i]
        h = prep.H[i]
        sign = problem.orthant[i] if problem.orthant is not None else SIGN_ANY
        lo_m, hi_m, lo_open, hi_open = _SIGN_REGION[sign]
        r = problem.p_residues[i] if problem.is_congruence else 0
        cnt = _progression_count(lo_m * h - c, hi_m * h - c, lo_open, hi_open, r, N)
        prod = cnt if prod is None else prod * cnt
    return prod


def delta_prepared(prep: PreparedCount, sample: SamplePoint) -> CountResult:
    """Count using a prepared enumeration (the Monte Carlo hot path)."""
    sample = validate_sample(prep.problem, sample)
    prod = _per_q_products(prep, sample.u, sample.v)
    total_f = float(prod.sum())
    if total_f >= 2.0 ** 62:
        raise CountOverflow(f"count near {total_f:.3e} exceeds the 64-bit accumulator")
    total = int(prod.astype(np.int64).sum())
    return CountResult(total=total, q_enumerated=len(prep.Q), T=prep.T)


def delta(problem: ApproximationProblem, sample: SamplePoint, T: float,
          q_budget: int = DEFAULT_Q_BUDGET) -> CountResult:
    """Number of solutions (p, q) with ||q|| < T (per q_lower) and all m
    inequalities |p_i + <u_i, q> + v_i| < theta_i ||q||^{-w_i}, restricted to
    the residue class / orthant when the problem carries one."""
    return delta_prepared(prepare(problem, T, q_budget), sample)


def orthant_count(problem: ApproximationProblem, sample: SamplePoint, T: float) -> CountResult:
    """delta() for a problem carrying an orthant restriction."""
    if problem.orthant is None:
        raise ValueError("problem has no orthant restriction")
    return delta(problem, sample, T)


def window_counts(problem: ApproximationProblem, sample: SamplePoint, M: int,
                  q_budget: int = DEFAULT_Q_BUDGET) -> WindowSeries:
    """Per-annulus counts over e^s <= ||q|| < e^{s+1}, s = 0..M-1.

    Their sum telescopes to the full count over 1 <= ||q|| < e^M.
    """
    if not (isinstance(M, int) and M >= 1):
        raise ValueError("M must be a positive integer")
    problem = validate(problem)
    prep = prepare(problem, math.exp(M), q_budget)
    sample = validate_sample(problem, sample)
    prod = _per_q_products(prep, sample.u, sample.v).astype(np.int64)
    bounds = np.exp(np.arange(1, M))  # annulus s covers [e^s, e^{s+1})
    s_idx = np.searchsorted(bounds, prep.norms, side="right")
    counts = np.zeros(M, dtype=np.int64)
    np.add.at(counts, s_idx, prod)
    return WindowSeries(M=M, counts=counts, sample=sample)


def brute_force_delta(problem: ApproximationProblem, sample: SamplePoint, T: float,
                      p_box: int | None = None) -> CountResult:
    """Independent oracle: literal loops over (p, q) testing the defining
    inequalities, the congruences, and the orthant signs one point at a time.

    When p_box is given, p_i is scanned over [-p_box, p_box]; it must cover all
    solutions (p_box >= max_i theta_i + n*T*u_max + 1 suffices).  Otherwise a
    per-q safe window derived from the interval bounds is scanned.
    """
    if not T > 1:
        raise ValueError("T must be > 1")
    from .norms import norm_value

    problem = validate(problem)
    sample = validate_sample(problem, sample)
    m, n = problem.m, problem.n
    N = problem.modulus if problem.is_congruence else 1
    box = int(math.ceil(T)) - 1
    want_inclusive = problem.q_lower == Q_LOWER_INCLUSIVE1

    total = 0
    visited = 0
    for q in itertools.product(range(-box, box + 1), repeat=n):
        if all(qi == 0 for qi in q):
            continue
        if problem.is_congruence and any(q[j] % N != problem.q_residues[j] for j in range(n)):
            continue
        if problem.orthant is not None:
            ok = True
            for j in range(n):
                s = problem.orthant[m + j]
                x = q[j]
                if s == SIGN_POSITIVE and not x > 0:
                    ok = False
                elif s == SIGN_NEGATIVE and not x < 0:
                    ok = False
                elif s == SIGN_NONNEGATIVE and not x >= 0:
                    ok = False
                elif s == SIGN_NONPOSITIVE and not x <= 0:
                    ok = False
            if not ok:
                continue
        r = norm_value(problem.norm, np.array(q, dtype=float))
        if not (r < T):
            continue
        if want_inclusive and not r >= 1.0:
            continue
        visited += 1

        q_count = 1
        for i in range(m):
            h = problem.thetas[i] * r ** (-problem.weights[i])
            c = float(np.dot(sample.u[i], np.array(q, dtype=float))) + float(sample.v[i])
            if p_box is not None:
                lo, hi = -p_box, p_box
            else:
                lo = math.floor(-c - h) - 2
                hi = math.ceil(-c + h) + 2
            cnt = 0
            for p in range(lo, hi + 1):
                x = p + c
                if not (abs(x) < h):
                    continue
                if problem.is_congruence and p % N != problem.p_residues[i]:
                    continue
                if problem.orthant is not None:
                    s = problem.orthant[i]
                    if s == SIGN_POSITIVE and not x > 0:
                        continue
                    if s == SIGN_NEGATIVE and not x < 0:
                        continue
                    if s == SIGN_NONNEGATIVE and not x >= 0:
                        continue
                    if s == SIGN_NONPOSITIVE and not x <= 0:
                        continue
                cnt += 1
            q_count *= cnt
            if q_count == 0:
                break
        total += q_count
    return CountResult(total=total, q_enumerated=visited, T=float(T))
