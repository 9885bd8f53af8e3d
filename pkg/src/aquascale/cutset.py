"""Cut-set upper bounds on aggregate throughput.

The chain goes: MIMO cut capacity -> diagonal input covariance -> generalized
Hadamard inequality -> total received-power bound.  Everything here reports
rates in bits per channel use (log base 2) and powers in linear units.

The extended-network closed forms carry constants derived from the ring
layering argument (sources grouped by distance shells around a destination);
the dense-network forms carry constants calibrated once at a small reference
size and then frozen (see :mod:`aquascale.harness`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .channel import (PhysicalParams, log_absorption_coeff, log_attenuation,
                      make_rng, noise_psd)
from .topology import CutPartition, Density, NodeGrid, dest_columns


class Regime(Enum):
    BANDWIDTH = "Bandwidth"
    BANDWIDTH_AND_POWER = "BandwidthAndPower"
    POWER = "Power"


class BoundKind(Enum):
    EXACT_SNR_SUM = "ExactSnrSum"
    CLOSED_FORM_UPPER = "ClosedFormUpper"
    HYBRID_DENSE_UPPER = "HybridDenseUpper"
    MH_LOWER = "MhLower"
    MH_RANDOM_LOWER = "MhRandomLower"


@dataclass(frozen=True)
class ThroughputBound:
    """One bound value with its provenance tags."""

    value: float
    kind: BoundKind
    regime: Regime
    meta: dict = field(default_factory=dict)


def classify_regime(beta: float) -> Regime:
    """Operating regime of the growth exponent beta (total for beta >= 0)."""
    if beta < 0.0:
        raise ValueError(f"beta must be >= 0, got {beta}")
    if beta == 0.0:
        return Regime.BANDWIDTH
    if beta <= 0.5:
        return Regime.BANDWIDTH_AND_POWER
    return Regime.POWER


def _received_power_from(src_pos: np.ndarray, dest_pos: np.ndarray,
                         ln_a: float, p: PhysicalParams) -> np.ndarray:
    """(P/c0) * sum_i r_i**(-alpha) * a**(-r_i) for each destination row.

    Uses the log form of the absorption factor so that huge a(f) underflows
    to zero term-wise instead of overflowing.
    """
    diff = dest_pos[:, None, :] - src_pos[None, :, :]
    r = np.hypot(diff[..., 0], diff[..., 1])
    with np.errstate(under="ignore"):
        terms = np.exp(-ln_a * r) * r ** (-p.alpha)
    return p.tx_power / p.c0 * terms.sum(axis=1)


def power_profile(grid: NodeGrid, cut_: CutPartition, f: float,
                  p: PhysicalParams, dest_ids: np.ndarray | None = None,
                  block: int = 256) -> np.ndarray:
    """Received power P_L^(k) for each destination (cut.right order).

    Vectorised in blocks of destinations; the inner reduction is numpy's
    pairwise sum over all n/2 sources.
    """
    ln_a = log_absorption_coeff(f, p)
    src = grid.positions[cut_.left]
    ids = cut_.right if dest_ids is None else np.asarray(dest_ids)
    dest = grid.positions[ids]
    out = np.empty(len(ids))
    for lo in range(0, len(ids), block):
        hi = min(lo + block, len(ids))
        out[lo:hi] = _received_power_from(src, dest[lo:hi], ln_a, p)
    return out


def received_power_exact(grid: NodeGrid, cut_: CutPartition, f: float,
                         k: int, p: PhysicalParams) -> float:
    """Total power received at destination node k from every cut source."""
    if k not in cut_.right:
        raise ValueError(f"node {k} is not a destination of the cut")
    return float(power_profile(grid, cut_, f, p, dest_ids=np.array([k]))[0])


def extended_power_constant(f: float, p: PhysicalParams,
                            k_max: int = 64) -> float:
    """Frozen constant of the extended received-power bound.

    Majorizes the half-plane lattice sum: for every column offset k_x the
    infinite source population (dx >= k_x, dy in Z) satisfies
    (P/c0) * sum r**(-alpha) a**(-r) <= C * k_x**(1 - alpha) * a**(-k_x),
    and every finite grid sums a subset of those terms.  C is the largest
    normalized half-plane sum over k_x = 1..k_max (the ratio decays like
    k_x**(-1/2) beyond its early peak, so k_max = 64 covers every sweep).
    """
    ln_a = log_absorption_coeff(f, p)
    if not ln_a > 0.0:
        raise ValueError("absorption coefficient must exceed 1")
    # window wide enough that dropped terms are < exp(-46) of the bound
    reach = int(math.ceil(46.0 / ln_a)) + 2
    dx = np.arange(1, k_max + reach + 1, dtype=float)
    dy_max = int(math.ceil(math.sqrt(reach ** 2 + 2.0 * k_max * reach))) + 2
    dy = np.arange(-dy_max, dy_max + 1, dtype=float)
    r = np.hypot(dx[:, None], dy[None, :])
    with np.errstate(under="ignore"):
        cols = (np.exp(-ln_a * r) * r ** (-p.alpha)).sum(axis=1)
    suffix = np.cumsum(cols[::-1])[::-1]
    k = np.arange(1, k_max + 1, dtype=float)
    with np.errstate(over="ignore"):
        ratios = suffix[:k_max] * k ** (p.alpha - 1.0) * np.exp(ln_a * k)
    return float(p.tx_power / p.c0 * ratios.max())


def received_power_upper_extended(k_x: int, f: float, p: PhysicalParams,
                                  constant: float | None = None) -> float:
    """Closed-form extended bound C * k_x**(1 - alpha) * a(f)**(-k_x)."""
    if k_x < 1:
        raise ValueError(f"column offset k_x must be >= 1, got {k_x}")
    if constant is None:
        constant = extended_power_constant(f, p)
    ln_a = log_absorption_coeff(f, p)
    with np.errstate(under="ignore"):
        return constant * k_x ** (1.0 - p.alpha) * math.exp(-ln_a * k_x)


@dataclass(frozen=True)
class DensePowerConstants:
    """Calibrated prefactors of the dense received-power sandwich."""

    near_upper: float = 1.0
    near_lower: float = 1.0
    far_upper: float = 1.0
    far_lower: float = 1.0


def received_power_bounds_dense(k_x: int, n: int, p: PhysicalParams,
                                beta: float, eps0: float, eps: float = 0.01,
                                constants: DensePowerConstants | None = None,
                                ) -> tuple[float, float]:
    """(upper, lower) closed-form dense received power at column k_x.

    Columns nearer the cut than n**(1/2 - beta + eps) follow the
    polynomial branch (Theta(n) up to a log factor); farther columns decay
    like (1 + eps0)**(-k_x * n**(beta - 1/2)).
    """
    if k_x < 1:
        raise ValueError(f"column offset k_x must be >= 1, got {k_x}")
    if constants is None:
        constants = DensePowerConstants()
    scale = p.tx_power / p.c0
    decay = math.log1p(eps0) * n ** (beta - 0.5)   # per-column log decay
    if k_x < n ** (0.5 - beta + eps):
        if p.alpha == 2.0:
            upper = constants.near_upper * scale * n * math.log2(n)
        else:
            upper = constants.near_upper * scale * n
        lower = (constants.near_lower * scale *
                 n ** (p.alpha / 2.0 - eps) / k_x ** (p.alpha - 1.0))
    else:
        tail = math.exp(-decay * k_x)
        upper = (constants.far_upper * scale * n ** (p.alpha / 2.0) *
                 tail * max(1.0, n ** (0.5 - beta)))
        lower = (constants.far_lower * scale * tail *
                 max(1.0, n ** (0.5 - beta) * math.exp(-decay)))
    return upper, lower


def cutset_upper_extended(grid: NodeGrid, cut_: CutPartition, f: float,
                          p: PhysicalParams, c2: float = 1.0,
                          ) -> tuple[ThroughputBound, ThroughputBound]:
    """(exact, closed-form) cut-set throughput bounds, extended network.

    exact  = (1/N(f)) * sum_k P_L^(k)   (total-SNR form of the cut bound)
    closed = c2 * sqrt(n) / (a(f) N(f))
    """
    if grid.density is not Density.EXTENDED:
        raise ValueError("extended cut-set bound needs an extended layout")
    nf = noise_psd(f, p)
    exact = float(power_profile(grid, cut_, f, p).sum() / nf)
    ln_a = log_absorption_coeff(f, p)
    with np.errstate(under="ignore"):
        closed = c2 * math.sqrt(grid.n) * math.exp(-ln_a) / nf
    meta = {"n": grid.n, "f_khz": f, "alpha": p.alpha}
    return (ThroughputBound(exact, BoundKind.EXACT_SNR_SUM, Regime.POWER, meta),
            ThroughputBound(closed, BoundKind.CLOSED_FORM_UPPER, Regime.POWER,
                            meta))


def miso_hadamard_bound(grid: NodeGrid, cut_: CutPartition, f: float,
                        subset: np.ndarray, p: PhysicalParams) -> float:
    """Hadamard/MISO term: sum over the subset of log2(1 + P_L^(k)/N(f)).

    This is the degrees-of-freedom-limited part of the dense cut bound; the
    SNR inside the log is the full coherent sum over cut sources.
    """
    subset = np.asarray(subset)
    if len(subset) == 0:
        return 0.0
    prof = power_profile(grid, cut_, f, p, dest_ids=subset)
    return float(np.log2(1.0 + prof / noise_psd(f, p)).sum())


def dense_closed_form_upper(n: int, beta: float, p: PhysicalParams,
                            eps0: float, eps: float = 0.01,
                            constant: float = 1.0) -> float:
    """Three-regime closed form of the dense cut-set bound.

    beta = 0        -> C n log n
    0 < beta <= 1/2 -> C n**(1 - beta + eps) log n
    beta > 1/2      -> C n**((1 + alpha + beta a5)/2) / (1+eps0)**(n**(beta-1/2))
    """
    if beta == 0.0:
        return constant * n * math.log2(n)
    if beta <= 0.5:
        return constant * n ** (1.0 - beta + eps) * math.log2(n)
    expo = (1.0 + p.alpha + beta * p.a5) / 2.0
    return constant * n ** expo * math.exp(-math.log1p(eps0) * n ** (beta - 0.5))


def cutset_upper_dense(grid: NodeGrid, cut_split: CutPartition, f: float,
                       beta: float, p: PhysicalParams, eps0: float = 0.5,
                       eps: float = 0.01, constant: float = 1.0,
                       ) -> tuple[ThroughputBound, ThroughputBound]:
    """(hybrid, closed-form) dense cut-set bounds.

    hybrid = T1 + T2 where T1 is the Hadamard/MISO bound over the near slab
    D1 and T2 the power-transfer bound (1/N) sum over D2.  The closed form
    is :func:`dense_closed_form_upper`.
    """
    if grid.density is not Density.DENSE:
        raise ValueError("dense cut-set bound needs a dense layout")
    if cut_split.d1 is None or cut_split.d2 is None:
        raise ValueError("cut partition lacks the dense destination split")
    t1 = miso_hadamard_bound(grid, cut_split, f, cut_split.d1, p)
    if len(cut_split.d2):
        t2 = float(power_profile(grid, cut_split, f, p,
                                 dest_ids=cut_split.d2).sum() / noise_psd(f, p))
    else:
        t2 = 0.0
    regime = classify_regime(beta)
    meta = {"n": grid.n, "beta": beta, "f_khz": f, "alpha": p.alpha,
            "t1": t1, "t2": t2, "x_l": cut_split.x_l}
    closed = dense_closed_form_upper(grid.n, beta, p, eps0, eps, constant)
    return (ThroughputBound(t1 + t2, BoundKind.HYBRID_DENSE_UPPER, regime, meta),
            ThroughputBound(closed, BoundKind.CLOSED_FORM_UPPER, regime, meta))


@dataclass(frozen=True)
class CovarianceCheckResult:
    """Outcome of the diagonal-covariance Monte Carlo comparison."""

    n_small: int
    num_random_q: int
    num_phase_draws: int
    diag_rate: float
    best_rate: float
    gap: float            # best competitor minus diagonal (common draws)
    mc_standard_error: float

    @property
    def diagonal_wins(self) -> bool:
        return self.gap <= 2.0 * self.mc_standard_error


def diagonal_covariance_check(n_small: int, f: float, num_random_q: int,
                              num_phase_draws: int, seed: int,
                              p: PhysicalParams) -> CovarianceCheckResult:
    """Monte Carlo check that Q = P I maximizes the cut MIMO capacity.

    Builds the two facing lattice columns of an n_small-node cut (an
    (n_small/2)^2 MIMO whose entries have deterministic magnitudes and
    i.i.d. uniform phases), draws random feasible covariances (PSD, diagonal
    entries <= P) and compares E[log2 det(I + (1/N) H Q H*)] under common
    phase draws.
    """
    if n_small < 4 or n_small % 2 or n_small > 16:
        raise ValueError(
            f"n_small must be even with 4 <= n_small <= 16, got {n_small}"
        )
    m = n_small // 2
    src = np.column_stack([np.zeros(m), np.arange(1.0, m + 1)])
    dst = np.column_stack([np.ones(m), np.arange(1.0, m + 1)])
    r = np.hypot(*(dst[:, None, :] - src[None, :, :]).transpose(2, 0, 1))
    amp = np.exp(np.vectorize(lambda d: -0.5 * log_attenuation(d, f, p))(r))
    nf = noise_psd(f, p)
    power = p.tx_power

    rng = make_rng(seed)
    theta = rng.uniform(0.0, 2.0 * math.pi, size=(num_phase_draws, m, m))
    h = amp[None, :, :] * np.exp(1j * theta)
    eye = np.eye(m)

    def rate_samples(q: np.ndarray) -> np.ndarray:
        inner = eye[None, :, :] + (h @ q @ h.conj().transpose(0, 2, 1)) / nf
        sign, logdet = np.linalg.slogdet(inner)
        return logdet / math.log(2.0)

    diag_samples = rate_samples(power * eye)
    diag_rate = float(diag_samples.mean())

    best_rate, best_diff = -math.inf, None
    for _ in range(num_random_q):
        while True:
            x = rng.normal(size=(m, m)) + 1j * rng.normal(size=(m, m))
            q = x @ x.conj().T
            top = q.diagonal().real.max()
            if top > 0.0:
                break
        q *= power * rng.uniform(0.0, 1.0) ** (1.0 / m) / top
        samples = rate_samples(q)
        rate = float(samples.mean())
        if rate > best_rate:
            best_rate, best_diff = rate, samples - diag_samples

    se = float(best_diff.std(ddof=1) / math.sqrt(num_phase_draws))
    return CovarianceCheckResult(
        n_small=n_small, num_random_q=num_random_q,
        num_phase_draws=num_phase_draws, diag_rate=diag_rate,
        best_rate=best_rate, gap=best_rate - diag_rate,
        mc_standard_error=se)
