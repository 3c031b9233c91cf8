import math

import numpy as np
import pytest

from dioclt.constants import (
    DivergentSeries,
    constants_for,
    residue_double_sum,
    residue_set,
    zeta,
    zeta_N,
)
from dioclt.model import ApproximationProblem, NormSpec


def make(m=2, n=1, thetas=(1.0, 1.0), weights=(0.5, 0.5), **kw):
    return ApproximationProblem(m=m, n=n, thetas=thetas, weights=weights, **kw)


def test_zeta_known_values():
    for r, exact in [(2.0, math.pi ** 2 / 6),
                     (4.0, math.pi ** 4 / 90),
                     (3.0, 1.2020569031595942854)]:  # Apery's constant
        v, b = zeta(r)
        assert b <= 1e-10
        assert abs(v - exact) <= b


def test_zeta_divergent():
    with pytest.raises(DivergentSeries):
        zeta(1.0)


def test_zeta_N_values():
    v, b = zeta_N(2.0, 2)
    assert abs(v - math.pi ** 2 / 8) <= b <= 1e-10
    # N=6 strips the p=2 and p=3 Euler factors
    v6, b6 = zeta_N(2.0, 6)
    assert abs(v6 - (math.pi ** 2 / 6) * (1 - 0.25) * (1 - 1 / 9)) <= b6 <= 1e-10
    v1, _ = zeta_N(3.0, 1)
    assert v1 == pytest.approx(zeta(3.0)[0], abs=1e-14)


def test_residue_set():
    assert residue_set(1) == [0]
    assert residue_set(2) == [1]
    assert residue_set(6) == [1, 5]
    assert len(residue_set(12)) == 4


@pytest.mark.parametrize("d", [3, 4, 5])
def test_residue_double_sum_n1_telescopes(d):
    v, b = residue_double_sum(d - 1, 1, 1)
    exact = zeta(d - 1.0)[0] - zeta(float(d))[0]
    assert b <= 1e-10
    assert abs(v - exact) <= 1e-10


def test_residue_double_sum_against_direct_partial_sum():
    # slow reference: direct summation to Q=2_000_000 undershoots the value by
    # less than the integral tail bound sum_r int_Q^inf x (Nx)^{-d} dx
    m, n, N = 2, 1, 3
    d = m + n
    v, b = residue_double_sum(m, n, N)
    Q = 2_000_000
    qs = np.arange(1, Q + 1, dtype=float)
    direct = sum(float(np.sum((qs - 1.0) / (N * qs + r) ** d)) for r in residue_set(N))
    tail_hi = len(residue_set(N)) * Q ** (2 - d) / ((d - 2) * N ** d) * N
    assert direct <= v + b
    assert v - b <= direct + tail_hi


def test_residue_double_sum_divergent():
    with pytest.raises(DivergentSeries):
        residue_double_sum(1, 1, 2)


def test_constants_inhomogeneous_reference_case():
    c = constants_for(make())
    assert c.c_mean == pytest.approx(8.0, abs=1e-12)
    assert c.sigma2_theorem == pytest.approx(8.0, abs=1e-12)
    assert c.sigma2_proof_variant == pytest.approx(8.0, abs=1e-12)
    assert c.omega_n == 2.0


def test_constants_scale_with_theta_and_norm():
    c = constants_for(make(n=2, weights=(1.0, 1.0), thetas=(0.5, 3.0),
                           norm=NormSpec.euclidean()))
    assert c.omega_n == pytest.approx(2 * math.pi)
    assert c.c_mean == pytest.approx(4 * 0.5 * 3.0 * 2 * math.pi)


def test_constants_congruence_reference_case():
    p = make(mode="congruence", modulus=2, residues=(1, 1, 1))
    c = constants_for(p)
    assert c.c_mean == pytest.approx(1.0, abs=1e-12)  # 8 / 2^{m+n}
    # theorem candidate: (2^{m+1}/N^{m+n}) omega_n (1 + 2 S / zeta_N(m+n))
    s, _ = residue_double_sum(2, 1, 2)
    z, _ = zeta_N(3.0, 2)
    assert c.sigma2_theorem == pytest.approx(2.0 * (1 + 2 * s / z), abs=1e-10)
    assert c.sigma2_proof_variant == pytest.approx(8.0, abs=1e-12)
    assert c.zeta_n_value == pytest.approx(z)
    assert c.residue_double_sum == pytest.approx(s)


def test_constants_congruence_n1_matches_inhomogeneous():
    # modulus 1 collapses the congruence constants onto the inhomogeneous ones
    p = make(mode="congruence", modulus=1, residues=(0, 0, 0))
    c = constants_for(p)
    assert c.c_mean == pytest.approx(8.0, abs=1e-10)
