"""Throughput scaling laws for underwater acoustic networks.

The channel attenuation A(r, f) = c0 r^alpha a(f)^r couples distance and
frequency, which reshapes the classical capacity-scaling picture.  This
package computes the resulting cut-set upper bounds, simulates the
nearest-neighbour multihop TDMA scheme that matches them, and ships a
verification harness that re-derives every order law numerically.
"""

from .channel import (ChannelGain, PhysicalParams, absorption_coeff,
                      absorption_db_per_km, attenuation, frequency_for_regime,
                      log_absorption_coeff, log_attenuation, make_rng,
                      noise_psd, params_for_absorption,
                      pseudocovariance_estimate, regime_params, sample_gain,
                      with_params)
from .cutset import (BoundKind, CovarianceCheckResult, DensePowerConstants,
                     Regime, ThroughputBound, classify_regime,
                     cutset_upper_dense, cutset_upper_extended,
                     dense_closed_form_upper, diagonal_covariance_check,
                     extended_power_constant, miso_hadamard_bound,
                     power_profile, received_power_bounds_dense,
                     received_power_exact, received_power_upper_extended)
from .harness import (CheckResult, FitResult, OrderRatioResult, SweepSpec,
                      SweepTable, VerifyReport, fit_exponent,
                      occupancy_passes, order_ratio_check, run_sweep,
                      verify_all, worst_case_interference)
from .routing import (MhConfig, MhMode, MhReport, Route, RoutingError,
                      build_route, dense_closed_form_lower,
                      dense_power_log_scale, interference_exact,
                      interference_upper_dense,
                      interference_upper_extended, mh_throughput,
                      mh_throughput_random, per_hop_rate, tx_power)
from .topology import (CutPartition, Density, DisplacedLayout, NodeGrid,
                       SdMatching, build_grid, build_random, cut,
                       dense_split, dest_columns, displace_to_vertices,
                       grid_from_csv, grid_to_csv, random_matching,
                       unit_square_occupancy)

__version__ = "0.1.0"

__all__ = [
    "ChannelGain", "PhysicalParams", "absorption_coeff",
    "absorption_db_per_km", "attenuation", "frequency_for_regime",
    "log_absorption_coeff", "log_attenuation", "make_rng", "noise_psd",
    "params_for_absorption", "pseudocovariance_estimate", "regime_params",
    "sample_gain", "with_params",
    "BoundKind", "CovarianceCheckResult", "DensePowerConstants", "Regime",
    "ThroughputBound", "classify_regime", "cutset_upper_dense",
    "cutset_upper_extended", "dense_closed_form_upper",
    "diagonal_covariance_check", "extended_power_constant",
    "miso_hadamard_bound", "power_profile", "received_power_bounds_dense",
    "received_power_exact", "received_power_upper_extended",
    "CheckResult", "FitResult", "OrderRatioResult", "SweepSpec", "SweepTable",
    "VerifyReport", "fit_exponent", "occupancy_passes",
    "order_ratio_check", "run_sweep", "verify_all",
    "worst_case_interference",
    "MhConfig", "MhMode", "MhReport", "Route", "RoutingError", "build_route",
    "dense_closed_form_lower", "dense_power_log_scale", "interference_exact",
    "interference_upper_dense", "interference_upper_extended",
    "mh_throughput", "mh_throughput_random", "per_hop_rate", "tx_power",
    "CutPartition", "Density", "DisplacedLayout", "NodeGrid", "SdMatching",
    "build_grid", "build_random", "cut", "dense_split", "dest_columns",
    "displace_to_vertices", "grid_from_csv", "grid_to_csv",
    "random_matching", "unit_square_occupancy",
    "__version__",
]
