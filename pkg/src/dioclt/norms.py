"""Norm evaluation and the geometric constant omega_n = n * vol(unit ball).

omega_n is the constant in the annulus-integral identity
    integral over {1 <= ||y|| < e^M} of ||y||^{-n} dy  =  omega_n * M,
which pins down the surface measure implicitly: for any symmetric p-norm the
identity forces omega_n = n * vol({||.|| <= 1}).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import BadNorm, NormSpec, canonical_norm


def norm_value(norm: NormSpec, x) -> float:
    """||x|| for a single vector."""
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise ValueError("norm_value expects a single vector")
    return float(_norms_of_rows(norm, x.reshape(1, -1))[0])


def _norms_of_rows(norm: NormSpec, X: np.ndarray) -> np.ndarray:
    """Row-wise norms of a (K, n) array; the counting hot path uses this."""
    norm = canonical_norm(norm)
    a = np.abs(X)
    if norm.kind == "sup":
        return a.max(axis=1)
    if norm.kind == "euclidean":
        return np.sqrt((a * a).sum(axis=1))
    return (a ** norm.p).sum(axis=1) ** (1.0 / norm.p)


@dataclass(frozen=True)
class BallVolume:
    value: float
    method: str  # "closed_form" | "monte_carlo"
    std_error: float = 0.0
    samples: int = 0
    seed: int = 0


def unit_ball_volume(norm: NormSpec, n: int) -> BallVolume:
    """Closed-form volume of {x in R^n : ||x|| <= 1}.

    sup: 2^n; euclidean: pi^{n/2}/Gamma(n/2+1); p: (2 Gamma(1+1/p))^n / Gamma(1+n/p).
    """
    norm = canonical_norm(norm)
    if n < 1:
        raise ValueError("dimension must be >= 1")
    if norm.kind == "sup":
        value = 2.0 ** n
    elif norm.kind == "euclidean":
        value = math.pi ** (n / 2.0) / math.gamma(n / 2.0 + 1.0)
    else:
        p = norm.p
        value = (2.0 * math.gamma(1.0 + 1.0 / p)) ** n / math.gamma(1.0 + n / p)
    return BallVolume(value=value, method="closed_form")


def unit_ball_volume_mc(norm: NormSpec, n: int, samples: int = 200_000, seed: int = 0) -> BallVolume:
    """Monte Carlo cross-check of the closed forms: hit rate in [-1,1]^n times 2^n."""
    if samples < 1:
        raise ValueError("samples must be >= 1")
    rng = np.random.Generator(np.random.Philox(key=seed))
    hits = 0
    chunk = 1 << 16
    left = samples
    while left > 0:
        k = min(chunk, left)
        pts = rng.uniform(-1.0, 1.0, size=(k, n))
        hits += int(np.count_nonzero(_norms_of_rows(norm, pts) <= 1.0))
        left -= k
    rate = hits / samples
    box = 2.0 ** n
    value = box * rate
    se = box * math.sqrt(max(rate * (1.0 - rate), 1e-300) / samples)
    return BallVolume(value=value, method="monte_carlo", std_error=se, samples=samples, seed=seed)


def omega_n(norm: NormSpec, n: int) -> float:
    """The cone-measure constant: omega_n = n * vol(unit ball)."""
    return n * unit_ball_volume(norm, n).value


def annulus_integral_grid(norm: NormSpec, n: int, big_m: int = 2, h: float = 0.01) -> float:
    """Midpoint-grid evaluation of integral_{1 <= ||y|| < e^M} ||y||^{-n} dy.

    Independent numeric check of omega_n * M; exploits coordinate symmetry by
    integrating over the positive orthant only.  Accuracy is O(h) from cells
    straddling the two boundary surfaces.
    """
    norm = canonical_norm(norm)
    radius = math.exp(big_m)
    k = int(math.ceil(radius / h))
    xs = (np.arange(k) + 0.5) * h
    if n == 1:
        r = xs
        f = np.where((r >= 1.0) & (r < radius), r ** (-1.0), 0.0)
        return 2.0 * float(f.sum()) * h
    if n == 2:
        grid = np.stack(np.meshgrid(xs, xs, indexing="ij"), axis=-1).reshape(-1, 2)
        r = _norms_of_rows(norm, grid)
        f = np.where((r >= 1.0) & (r < radius), r ** (-2.0), 0.0)
        return 4.0 * float(f.sum()) * h * h
    if n == 3:
        plane = np.stack(np.meshgrid(xs, xs, indexing="ij"), axis=-1).reshape(-1, 2)
        total = 0.0
        for z in xs:  # slab loop keeps memory flat
            pts = np.column_stack([plane, np.full(len(plane), z)])
            r = _norms_of_rows(norm, pts)
            f = np.where((r >= 1.0) & (r < radius), r ** (-3.0), 0.0)
            total += float(f.sum())
        return 8.0 * total * h ** 3
    raise BadNorm("grid cross-check implemented for n <= 3 only")
