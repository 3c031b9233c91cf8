"""Weighted Diophantine counting functions, their limit-law constants, and
reproducible Monte Carlo experiments against the central limit behaviour."""

from .constants import TheoreticalConstants, constants_for, residue_double_sum, residue_set, zeta, zeta_N
from .counting import (
    CountResult,
    WindowSeries,
    brute_force_delta,
    count_interval,
    count_residue_interval,
    delta,
    orthant_count,
    window_counts,
)
from .model import ApproximationProblem, NormSpec, SamplePoint, validate
from .montecarlo import (
    SimulationConfig,
    SimulationSummary,
    exact_mean_oracle,
    normalized_statistic,
    run_simulation,
    sample_point,
)
from .norms import BallVolume, norm_value, omega_n, unit_ball_volume, unit_ball_volume_mc
from .stats import GoodnessOfFit, ad_test, ks_test, mean_slope, normal_cdf

__version__ = "0.1.0"
