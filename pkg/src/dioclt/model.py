"""Domain types and validation shared by the counting, constants and simulation code."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

MODE_INHOMOGENEOUS = "inhomogeneous"
MODE_CONGRUENCE = "congruence"
MODES = (MODE_INHOMOGENEOUS, MODE_CONGRUENCE)

Q_LOWER_EXCLUSIVE0 = "exclusive0"  # 0 < ||q||
Q_LOWER_INCLUSIVE1 = "inclusive1"  # 1 <= ||q||  (required by window decompositions)
Q_LOWERS = (Q_LOWER_EXCLUSIVE0, Q_LOWER_INCLUSIVE1)

# per-coordinate sign requirements for orthant restrictions
SIGN_ANY = "any"
SIGN_POSITIVE = "pos"
SIGN_NEGATIVE = "neg"
SIGN_NONNEGATIVE = "nonneg"
SIGN_NONPOSITIVE = "nonpos"
SIGNS = (SIGN_ANY, SIGN_POSITIVE, SIGN_NEGATIVE, SIGN_NONNEGATIVE, SIGN_NONPOSITIVE)

WEIGHT_SUM_TOL = 1e-12


class ValidationError(ValueError):
    """Base class for problem validation failures."""


class WeightSumMismatch(ValidationError):
    pass


class WeightRange(ValidationError):
    pass


class NonPositiveTheta(ValidationError):
    pass


class BadResidue(ValidationError):
    pass


class GcdViolation(ValidationError):
    pass


class BadNorm(ValidationError):
    pass


class BadOrthant(ValidationError):
    pass


class BadSample(ValidationError):
    pass


@dataclass(frozen=True)
class NormSpec:
    """A p-norm on R^n.  kind is one of 'sup', 'euclidean', 'p' (with exponent p >= 1)."""

    kind: str = "sup"
    p: Optional[float] = None

    @staticmethod
    def sup() -> "NormSpec":
        return NormSpec("sup")

    @staticmethod
    def euclidean() -> "NormSpec":
        return NormSpec("euclidean")

    @staticmethod
    def lp(p: float) -> "NormSpec":
        """General p-norm; p=2 and p=inf canonicalize to euclidean / sup."""
        if math.isinf(p):
            return NormSpec("sup")
        if p == 2:
            return NormSpec("euclidean")
        if not p >= 1:
            raise BadNorm(f"p-norm exponent must be >= 1, got {p}")
        return NormSpec("p", float(p))


def canonical_norm(norm: NormSpec) -> NormSpec:
    if norm.kind == "sup":
        return NormSpec("sup")
    if norm.kind == "euclidean":
        return NormSpec("euclidean")
    if norm.kind == "p":
        if norm.p is None:
            raise BadNorm("p-norm requires an exponent")
        return NormSpec.lp(norm.p)
    raise BadNorm(f"unknown norm kind {norm.kind!r}")


@dataclass(frozen=True)
class ApproximationProblem:
    """A weighted system of m (affine or congruence-constrained) forms in n variables.

    thetas are the approximation thresholds, weights the shrinking exponents
    (summing to n).  In congruence mode, residues holds the m+n target residues
    (p-part first, then q-part) modulo `modulus`.
    """

    m: int
    n: int
    thetas: tuple
    weights: tuple
    norm: NormSpec = NormSpec("sup")
    mode: str = MODE_INHOMOGENEOUS
    residues: Optional[tuple] = None
    modulus: int = 1
    orthant: Optional[tuple] = None
    q_lower: str = Q_LOWER_EXCLUSIVE0

    @property
    def is_congruence(self) -> bool:
        return self.mode == MODE_CONGRUENCE

    @property
    def p_residues(self) -> tuple:
        return self.residues[: self.m]

    @property
    def q_residues(self) -> tuple:
        return self.residues[self.m :]


@dataclass
class SamplePoint:
    """A form matrix u (m x n) and shift vector v (length m).

    Inhomogeneous mode draws u, v uniformly on [0,1).  Congruence mode ignores v
    (zero) and draws u uniformly on [0,N): the torus carrying the uniform measure
    has side N there, and the exact-mean identities only hold for that measure.
    """

    u: np.ndarray
    v: np.ndarray


def validate(problem: ApproximationProblem, strict: bool = False) -> ApproximationProblem:
    """Check all invariants; returns a normalized copy (canonical norm, residues in [0,N)).

    Idempotent: validating an already-normalized problem returns an equal problem.
    With strict=True, congruence mode additionally requires gcd(residues, N) = 1.
    """
    m, n = problem.m, problem.n
    if not (isinstance(m, int) and m >= 1):
        raise ValidationError(f"m must be a positive integer, got {m!r}")
    if not (isinstance(n, int) and n >= 1):
        raise ValidationError(f"n must be a positive integer, got {n!r}")

    thetas = tuple(float(t) for t in problem.thetas)
    if len(thetas) != m:
        raise NonPositiveTheta(f"expected {m} thresholds, got {len(thetas)}")
    if any(t <= 0 for t in thetas):
        raise NonPositiveTheta(f"thresholds must be positive: {thetas}")

    weights = tuple(float(w) for w in problem.weights)
    if len(weights) != m:
        raise WeightRange(f"expected {m} weights, got {len(weights)}")
    if any(w <= 0 for w in weights):
        raise WeightRange(f"weights must be positive: {weights}")
    # the strict upper bound w_i < n is vacuous for m = 1, where the sum rule forces w_1 = n
    if m >= 2 and any(w >= n for w in weights):
        raise WeightRange(f"weights must be < n = {n}: {weights}")
    if abs(sum(weights) - n) > WEIGHT_SUM_TOL:
        raise WeightSumMismatch(f"weights sum to {sum(weights)!r}, expected n = {n}")

    norm = canonical_norm(problem.norm)

    if problem.mode not in MODES:
        raise ValidationError(f"unknown mode {problem.mode!r}")
    residues = problem.residues
    modulus = problem.modulus
    if problem.mode == MODE_CONGRUENCE:
        if not (isinstance(modulus, int) and modulus >= 1):
            raise BadResidue(f"modulus must be a positive integer, got {modulus!r}")
        if residues is None or len(residues) != m + n:
            raise BadResidue(f"congruence mode needs {m + n} residues")
        residues = tuple(int(r) % modulus for r in residues)
        if strict and math.gcd(*residues, modulus) != 1:
            raise GcdViolation(f"gcd(residues, {modulus}) != 1: {residues}")
    else:
        residues = None
        modulus = 1

    orthant = problem.orthant
    if orthant is not None:
        orthant = tuple(orthant)
        if len(orthant) != m + n:
            raise BadOrthant(f"orthant restriction needs {m + n} sign codes")
        if any(s not in SIGNS for s in orthant):
            raise BadOrthant(f"unknown sign codes in {orthant}")
        if all(s == SIGN_ANY for s in orthant):
            raise BadOrthant("all-'any' restriction must be represented as absent")

    if problem.q_lower not in Q_LOWERS:
        raise ValidationError(f"unknown q_lower {problem.q_lower!r}")

    return replace(
        problem,
        thetas=thetas,
        weights=weights,
        norm=norm,
        residues=residues,
        modulus=modulus,
        orthant=orthant,
    )


def validate_sample(problem: ApproximationProblem, sample: SamplePoint) -> SamplePoint:
    """Check shapes and ranges of a sample point against the problem."""
    u = np.asarray(sample.u, dtype=float).reshape(problem.m, problem.n)
    v = np.asarray(sample.v, dtype=float).reshape(problem.m)
    u_hi = float(problem.modulus) if problem.is_congruence else 1.0
    if np.any(u < 0) or np.any(u >= u_hi):
        raise BadSample(f"u entries must lie in [0, {u_hi})")
    if np.any(v < 0) or np.any(v >= 1):
        raise BadSample("v entries must lie in [0, 1)")
    if problem.is_congruence and np.any(v != 0):
        raise BadSample("congruence mode has no real shift; v must be zero")
    return SamplePoint(u=u, v=v)
