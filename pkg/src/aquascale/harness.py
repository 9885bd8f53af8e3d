"""Desk-scale scaling sweeps and the named order-law verification checks.

Closed-form bounds are order statements, so every comparison here is either
a log-log slope fit (:func:`fit_exponent`), a bounded-ratio check
(:func:`order_ratio_check`), or a dominance check against a constant that
was calibrated once at the smallest sweep size (or derived from the layering
argument) and then frozen.

:func:`verify_all` runs every order-law check at its acceptance-sweep
size and returns a machine-readable report.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .channel import (PhysicalParams, attenuation, frequency_for_regime,
                      log_absorption_coeff, make_rng, noise_psd,
                      params_for_absorption, pseudocovariance_estimate,
                      regime_params)
from .cutset import (BoundKind, DensePowerConstants, cutset_upper_dense,
                     cutset_upper_extended, diagonal_covariance_check,
                     extended_power_constant, power_profile,
                     received_power_bounds_dense,
                     received_power_upper_extended)
from .routing import (MhConfig, MhMode, _CellIndex, _interference_tables,
                      interference_upper_dense, interference_upper_extended,
                      mh_throughput, mh_throughput_random)
from .topology import (Density, build_grid, build_random, cut, dense_split,
                       dest_columns, random_matching, unit_square_occupancy)

#: headroom applied to constants calibrated empirically at the smallest
#: sweep size.  The exact sums keep accumulating terms as n grows, and the
#: far-column case approaches its asymptotic shape only slowly (its regime
#: threshold moves like n**eps with eps = 0.01); the worst measured drift
#: across the desk-scale sweeps is ~2.3x, so 3.0 leaves headroom.
DENSE_CAL_MARGIN = 3.0

_SWEEP_FAMILIES = ("cutset-extended", "mh-extended", "cutset-dense",
                   "mh-dense", "mh-random")


@dataclass(frozen=True)
class SweepSpec:
    """What to sweep: one bound family over sizes (and regimes/seeds)."""

    family: str
    n_list: tuple
    alpha_list: tuple = (1.5,)
    f_khz: float = 10.0            # carrier for extended/random families
    a_value: float | None = None   # pin a(f) exactly instead of Thorp at f
    beta_list: tuple = (0.0,)
    eps0: float = 0.5
    eps: float = 0.01
    seeds: tuple = (0,)
    tdma_reuse: int = 9
    delta: float = math.sqrt(2.0)

    def __post_init__(self):
        if self.family not in _SWEEP_FAMILIES:
            raise ValueError(f"unknown sweep family {self.family!r}; "
                             f"expected one of {_SWEEP_FAMILIES}")
        if not self.n_list:
            raise ValueError("n_list must not be empty")
        if not self.alpha_list or not self.beta_list:
            raise ValueError("alpha_list and beta_list must not be empty")
        if self.family != "mh-random":
            for n in self.n_list:
                side = math.isqrt(n)
                if n < 4 or side * side != n or side % 2:
                    raise ValueError(
                        f"regular sweep sizes need square n with even root, got {n}"
                    )

    def params(self, alpha: float) -> PhysicalParams:
        if self.family in ("cutset-dense", "mh-dense"):
            return regime_params(self.eps0, alpha=alpha)
        if self.a_value is not None:
            return params_for_absorption(self.a_value, alpha=alpha)
        return PhysicalParams(alpha=alpha)


@dataclass
class SweepTable:
    """Flat bound table; rows are dicts with the CSV schema keys + seed."""

    rows: list = field(default_factory=list)
    failures: list = field(default_factory=list)

    CSV_COLUMNS = ("n", "beta", "f_khz", "alpha", "kind", "value", "regime")

    def filter(self, **eq) -> "SweepTable":
        keep = [r for r in self.rows
                if all(r.get(k) == v for k, v in eq.items())]
        return SweepTable(rows=keep, failures=list(self.failures))

    def xy(self, kind: str, x_key: str = "n", **eq) -> tuple[np.ndarray, np.ndarray]:
        """(x, mean value) pairs for a bound kind, averaged over seeds."""
        rows = self.filter(kind=kind, **eq).rows
        buckets: dict = {}
        for r in rows:
            buckets.setdefault(r[x_key], []).append(r["value"])
        xs = sorted(buckets)
        return (np.array(xs, dtype=float),
                np.array([np.mean(buckets[x]) for x in xs]))

    def to_csv(self, fh) -> None:
        fh.write(",".join(self.CSV_COLUMNS) + "\n")
        for r in self.rows:
            beta = "" if r.get("beta") is None else repr(float(r["beta"]))
            fh.write(",".join([
                str(r["n"]), beta, repr(float(r["f_khz"])),
                repr(float(r["alpha"])), r["kind"], repr(float(r["value"])),
                r["regime"],
            ]) + "\n")


@dataclass(frozen=True)
class FitResult:
    slope: float
    intercept: float
    r_squared: float
    residual_max: float


def fit_exponent(xs, ys, log_x: bool = True, log_y: bool = True) -> FitResult:
    """Least-squares line through (optionally log-transformed) points.

    With both axes in log2 this fits the scaling exponent; for exponential
    regimes pass the already-transformed abscissa with ``log_x=False``.
    """
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if len(xs) < 3:
        raise ValueError("exponent fits need at least 3 points")
    if np.any(ys <= 0.0) and log_y:
        raise ValueError("log fit needs strictly positive values")
    u = np.log2(xs) if log_x else xs
    v = np.log2(ys) if log_y else ys
    if np.ptp(u) <= 0.0:
        raise ValueError("degenerate fit: abscissa has zero range")
    slope, intercept = np.polyfit(u, v, 1)
    resid = v - (slope * u + intercept)
    ss_tot = float(((v - v.mean()) ** 2).sum())
    r2 = 1.0 if ss_tot == 0.0 else 1.0 - float((resid ** 2).sum()) / ss_tot
    return FitResult(slope=float(slope), intercept=float(intercept),
                     r_squared=r2, residual_max=float(np.abs(resid).max()))


@dataclass(frozen=True)
class OrderRatioResult:
    bounded: bool
    min_ratio: float
    max_ratio: float
    ratios: tuple

    @property
    def band(self) -> float:
        return self.max_ratio / self.min_ratio


def order_ratio_check(table: SweepTable, kind_num: str, kind_den: str,
                      threshold: float = 10.0, **eq) -> OrderRatioResult:
    """Are two bound kinds the same order (ratio band <= threshold)?"""
    xs_n, num = table.xy(kind_num, **eq)
    xs_d, den = table.xy(kind_den, **eq)
    if len(xs_n) != len(xs_d) or np.any(xs_n != xs_d):
        raise ValueError("bound kinds cover different sweep points")
    if len(xs_n) == 0:
        raise ValueError("no matching sweep rows")
    ratios = num / den
    return OrderRatioResult(
        bounded=bool(ratios.max() / ratios.min() <= threshold),
        min_ratio=float(ratios.min()), max_ratio=float(ratios.max()),
        ratios=tuple(float(v) for v in ratios))


def _sweep_point(spec: SweepSpec, p: PhysicalParams, n: int, beta: float,
                 seed: int) -> list:
    rows = []

    def add(kind: BoundKind, value: float, regime, f, b=None):
        rows.append({"n": n, "beta": b, "f_khz": f, "alpha": p.alpha,
                     "kind": kind.value, "value": value,
                     "regime": regime.value, "seed": seed})

    if spec.family == "cutset-extended":
        grid = build_grid(n, Density.EXTENDED)
        exact, closed = cutset_upper_extended(grid, cut(grid), spec.f_khz, p)
        add(BoundKind.EXACT_SNR_SUM, exact.value, exact.regime, spec.f_khz)
        add(BoundKind.CLOSED_FORM_UPPER, closed.value, closed.regime, spec.f_khz)
    elif spec.family == "cutset-dense":
        grid = build_grid(n, Density.DENSE)
        f = frequency_for_regime(n, beta, spec.eps0, p)
        split = dense_split(grid, beta, spec.eps)
        hybrid, closed = cutset_upper_dense(grid, split, f, beta, p,
                                            spec.eps0, spec.eps)
        add(BoundKind.HYBRID_DENSE_UPPER, hybrid.value, hybrid.regime, f, beta)
        add(BoundKind.CLOSED_FORM_UPPER, closed.value, closed.regime, f, beta)
    elif spec.family == "mh-extended":
        grid = build_grid(n, Density.EXTENDED)
        cfg = MhConfig(MhMode.EXTENDED_FULL_POWER, spec.tdma_reuse, spec.delta)
        rep = mh_throughput(grid, random_matching(n, seed), spec.f_khz, cfg, p)
        add(BoundKind.MH_LOWER, rep.bound.value, rep.bound.regime, spec.f_khz)
        add(BoundKind.CLOSED_FORM_UPPER, rep.closed_form, rep.bound.regime,
            spec.f_khz)
    elif spec.family == "mh-dense":
        grid = build_grid(n, Density.DENSE)
        f = frequency_for_regime(n, beta, spec.eps0, p)
        cfg = MhConfig(MhMode.DENSE_SCALED_POWER, spec.tdma_reuse, spec.delta)
        rep = mh_throughput(grid, random_matching(n, seed), f, cfg, p,
                            beta=beta, eps0=spec.eps0)
        add(BoundKind.MH_LOWER, rep.bound.value, rep.bound.regime, f, beta)
        add(BoundKind.CLOSED_FORM_UPPER, rep.closed_form, rep.bound.regime,
            f, beta)
    else:                                   # mh-random
        grid = build_random(n, seed)
        cfg = MhConfig(MhMode.RANDOM_LOG_CELLS, spec.tdma_reuse, spec.delta)
        rep = mh_throughput_random(grid, random_matching(n, seed + 1),
                                   spec.f_khz, cfg, p)
        add(BoundKind.MH_RANDOM_LOWER, rep.bound.value, rep.bound.regime,
            spec.f_khz)
        add(BoundKind.CLOSED_FORM_UPPER, rep.closed_form, rep.bound.regime,
            spec.f_khz)
    return rows


def run_sweep(spec: SweepSpec, threads: int = 1) -> SweepTable:
    """Evaluate the sweep; per-point failures are recorded, not raised."""
    params = {a: spec.params(a) for a in spec.alpha_list}
    dense = spec.family in ("cutset-dense", "mh-dense")
    betas = spec.beta_list if dense else (None,)
    stochastic = spec.family.startswith("mh")
    seeds = spec.seeds if stochastic else (spec.seeds[0],)
    points = [(n, b, a, s) for n in spec.n_list for b in betas
              for a in spec.alpha_list for s in seeds]

    table = SweepTable()

    def run(point):
        n, b, a, s = point
        return _sweep_point(spec, params[a], n, b, s)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            outcomes = list(pool.map(lambda pt: _guarded(run, pt), points))
    else:
        outcomes = [_guarded(run, pt) for pt in points]
    for point, (rows, err) in zip(points, outcomes):
        if err is not None:
            table.failures.append({"n": point[0], "beta": point[1],
                                   "alpha": point[2], "seed": point[3],
                                   "error": err})
        else:
            table.rows.extend(rows)
    return table


def _guarded(fn, point):
    try:
        return fn(point), None
    except Exception as exc:                       # recorded per point
        return None, f"{type(exc).__name__}: {exc}"


# ---------------------------------------------------------------------------
# calibration helpers (constants fitted at the smallest sweep size, frozen)
# ---------------------------------------------------------------------------

def _dense_profile_envelope(n: int, beta: float, p: PhysicalParams,
                            eps0: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(k_x, max over k_y, min over k_y) of the exact dense received power."""
    grid = build_grid(n, Density.DENSE)
    c = cut(grid)
    f = frequency_for_regime(n, beta, eps0, p)
    prof = power_profile(grid, c, f, p)
    cols = dest_columns(grid, c.right)
    ks = np.arange(1, grid.side // 2 + 1)
    mx = np.array([prof[cols == k].max() for k in ks])
    mn = np.array([prof[cols == k].min() for k in ks])
    return ks, mx, mn


def calibrate_dense_power(beta: float, p: PhysicalParams, eps0: float,
                          eps: float = 0.01, n0: int = 64,
                          margin: float = DENSE_CAL_MARGIN) -> DensePowerConstants:
    """Fit the dense sandwich prefactors at n0 and freeze them.

    Upper constants get ``margin`` headroom and lower constants 1/margin,
    because the exact sums keep growing mildly with n while the shapes only
    track the order.
    """
    ks, mx, mn = _dense_profile_envelope(n0, beta, p, eps0)
    unit = DensePowerConstants()
    near = ks < n0 ** (0.5 - beta + eps)
    up = np.empty(len(ks))
    low = np.empty(len(ks))
    for i, k in enumerate(ks):
        up[i], low[i] = received_power_bounds_dense(int(k), n0, p, beta, eps0,
                                                    eps, unit)
    def fit(mask, values, shapes, biggest):
        if not mask.any():
            return 1.0
        r = values[mask] / shapes[mask]
        return float(r.max() if biggest else r.min())

    return DensePowerConstants(
        near_upper=margin * fit(near, mx, up, True),
        near_lower=fit(near, mn, low, False) / margin,
        far_upper=margin * fit(~near, mx, up, True),
        far_lower=fit(~near, mn, low, False) / margin,
    )


def worst_case_interference(n: int, density: Density, beta: float | None,
                            p: PhysicalParams, eps0: float = 0.5,
                            f: float | None = None) -> float:
    """Largest exact interference over all receivers and TDMA slots."""
    grid = build_grid(n, density)
    if density is Density.DENSE:
        cfg = MhConfig(MhMode.DENSE_SCALED_POWER)
        if f is None:
            f = frequency_for_regime(n, beta, eps0, p)
    else:
        cfg = MhConfig(MhMode.EXTENDED_FULL_POWER)
        if f is None:
            f = p.f_ref
    index = _CellIndex(grid, cfg)
    table = _interference_tables(grid, cfg, f, p, index)
    return float(table.max())


def calibrate_dense_interference(beta: float, p: PhysicalParams, eps0: float,
                                 n0_candidates=(64, 256, 1024, 4096),
                                 margin: float = DENSE_CAL_MARGIN) -> float:
    """Fit the dense interference bound constant and freeze it.

    Calibrates at the smallest size whose transmit-power branch matches the
    regime's limiting branch (back-off for beta <= 1/2, full power above),
    because the bound shape describes that branch; for beta > 1/2 the
    back-off clamp can still be inactive at the very smallest sizes.
    """
    from .routing import dense_power_log_scale
    want_full = beta > 0.5
    n0 = n0_candidates[-1]
    for n in n0_candidates:
        f = frequency_for_regime(n, beta, eps0, p)
        if (dense_power_log_scale(n, f, p) >= 0.0) == want_full:
            n0 = n
            break
    exact = worst_case_interference(n0, Density.DENSE, beta, p, eps0)
    shape = interference_upper_dense(n0, beta, p, eps0, constant=1.0)
    return margin * exact / shape


# ---------------------------------------------------------------------------
# named verification checks (acceptance criteria)
# ---------------------------------------------------------------------------

@dataclass
class CheckResult:
    name: str
    passed: bool
    measured: dict
    detail: str

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'} {self.name}: {self.detail}"


def check_gain_propriety(seed: int = 0, num_samples: int = 100_000,
                         r: float = 1.0, f: float = 10.0) -> CheckResult:
    """Sampled gains are proper complex: |pseudo-covariance| * A <= 0.01."""
    p = PhysicalParams()
    est = pseudocovariance_estimate(r, f, num_samples, make_rng(seed), p)
    scaled = abs(est) * attenuation(r, f, p)
    return CheckResult(
        name="gain-propriety", passed=scaled <= 0.01,
        measured={"scaled_pseudocovariance": scaled, "samples": num_samples},
        detail=f"|pseudo-cov| * A = {scaled:.5f} (limit 0.01, M = {num_samples})")


def check_diagonal_covariance(seed: int = 0, n_small: int = 8,
                              num_random_q: int = 200,
                              num_phase_draws: int = 10_000) -> CheckResult:
    """No random feasible covariance beats Q = P I beyond Monte Carlo noise."""
    f = 10.0
    base = PhysicalParams()
    # operate at moderate SNR so covariance differences are visible
    p = PhysicalParams(tx_power=noise_psd(f, base) * attenuation(1.0, f, base))
    res = diagonal_covariance_check(n_small, f, num_random_q,
                                    num_phase_draws, seed, p)
    return CheckResult(
        name="diagonal-covariance", passed=res.diagonal_wins,
        measured={"gap": res.gap, "mc_standard_error": res.mc_standard_error,
                  "diag_rate": res.diag_rate, "best_rate": res.best_rate},
        detail=(f"best random Q gap = {res.gap:.3e} bits vs 2 SE = "
                f"{2.0 * res.mc_standard_error:.3e}"))


def check_extended_power_bound(n_list=(64, 256, 1024, 4096),
                               alphas=(1.0, 1.5, 2.0),
                               a_values=(1.2, 2.0)) -> CheckResult:
    """Layering-constant bound dominates exact extended received power."""
    worst = 0.0
    for alpha in alphas:
        for a in a_values:
            p = params_for_absorption(a, alpha=alpha)
            f = p.f_ref
            const = extended_power_constant(f, p)
            for n in n_list:
                grid = build_grid(n, Density.EXTENDED)
                c = cut(grid)
                prof = power_profile(grid, c, f, p)
                cols = dest_columns(grid, c.right)
                bounds = np.array([received_power_upper_extended(k, f, p, const)
                                   for k in range(1, grid.side // 2 + 1)])
                worst = max(worst, float((prof / bounds[cols - 1]).max()))
    return CheckResult(
        name="extended-power-bound", passed=worst <= 1.0,
        measured={"max_exact_over_bound": worst},
        detail=f"max exact/bound = {worst:.4f} over n<= {max(n_list)}, "
               f"alpha in {alphas}, a in {a_values}")


def check_dense_power_sandwich(n_list=(64, 256, 1024, 4096),
                               betas=(0.0, 0.25, 0.75),
                               alphas=(1.0, 1.5, 2.0),
                               eps0: float = 0.5, eps: float = 0.01,
                               n0: int = 64) -> CheckResult:
    """Calibrated dense bounds sandwich the exact received power pointwise."""
    worst_up, worst_low = 0.0, math.inf
    for alpha in alphas:
        p = regime_params(eps0, alpha=alpha)
        for beta in betas:
            consts = calibrate_dense_power(beta, p, eps0, eps, n0)
            for n in n_list:
                ks, mx, mn = _dense_profile_envelope(n, beta, p, eps0)
                for i, k in enumerate(ks):
                    up, low = received_power_bounds_dense(
                        int(k), n, p, beta, eps0, eps, consts)
                    worst_up = max(worst_up, mx[i] / up)
                    worst_low = min(worst_low, mn[i] / low)
    worst_up, worst_low = float(worst_up), float(worst_low)
    passed = worst_up <= 1.0 and worst_low >= 1.0
    return CheckResult(
        name="dense-power-sandwich", passed=passed,
        measured={"max_exact_over_upper": worst_up,
                  "min_exact_over_lower": worst_low},
        detail=(f"exact/upper <= {worst_up:.4f}, exact/lower >= "
                f"{worst_low:.4f} (constants frozen at n0 = {n0})"))


def check_extended_cutset_band(n_list=(64, 256, 1024, 4096), f: float = 10.0,
                               band_limit: float = 4.0) -> CheckResult:
    """Exact extended cut-set bound tracks sqrt(n)/(a N) within a band."""
    p = PhysicalParams()
    spec = SweepSpec(family="cutset-extended", n_list=tuple(n_list), f_khz=f)
    table = run_sweep(spec)
    res = order_ratio_check(table, BoundKind.EXACT_SNR_SUM.value,
                            BoundKind.CLOSED_FORM_UPPER.value,
                            threshold=band_limit)
    return CheckResult(
        name="extended-cutset-band", passed=res.bounded,
        measured={"band": res.band, "min_ratio": res.min_ratio,
                  "max_ratio": res.max_ratio},
        detail=f"exact/(sqrt(n)/(aN)) band = {res.band:.3f} (limit {band_limit})")


def check_dense_upper_slopes(n_list=(256, 1024, 4096, 16384),
                             eps0_flat: float = 0.5, eps0_decay: float = 20.0,
                             eps: float = 0.01, tol: float = 0.15) -> CheckResult:
    """Hybrid dense upper bound follows the three regime scaling laws.

    Each regime is probed at an operating point where its law is observable
    at desk sizes: the flat-absorption law (beta = 0) and the middle regime
    use a small regime constant, while the exponential-decay law
    (beta > 1/2) uses a large one so the decay beats its polynomial
    prefactor inside the sweep range.  The middle-regime slope (1 - beta)
    is not reachable at any eps0 for n <= 16384: the far-slab
    power-transfer term falls off only like (1+eps0)**(-n**eps) against
    polynomial growth, and n**eps barely moves at desk scale, so the
    measured slope reports the far-slab exponent (~2) instead.  That
    sub-check fails by design rather than being weakened.
    """
    spec_a = SweepSpec(family="cutset-dense", n_list=tuple(n_list),
                       beta_list=(0.0, 0.25), eps0=eps0_flat, eps=eps)
    spec_b = SweepSpec(family="cutset-dense", n_list=tuple(n_list),
                       beta_list=(0.75,), eps0=eps0_decay, eps=eps)
    table_a, table_b = run_sweep(spec_a), run_sweep(spec_b)
    kind = BoundKind.HYBRID_DENSE_UPPER.value
    measured, ok = {}, True

    xs, ys = table_a.xy(kind, beta=0.0)
    fit0 = fit_exponent(xs, ys)
    measured["slope_beta0"] = fit0.slope
    ok &= abs(fit0.slope - 1.0) <= tol

    xs, ys = table_a.xy(kind, beta=0.25)
    fit25 = fit_exponent(xs, ys)
    measured["slope_beta25"] = fit25.slope
    ok &= abs(fit25.slope - 0.75) <= tol

    xs, ys = table_b.xy(kind, beta=0.75)
    fit75 = fit_exponent(xs ** 0.25, ys, log_x=False)
    measured["exp_slope_beta75"] = fit75.slope
    measured["exp_r2_beta75"] = fit75.r_squared
    ok &= fit75.slope < 0.0 and fit75.r_squared >= 0.95

    return CheckResult(
        name="dense-upper-slopes", passed=bool(ok), measured=measured,
        detail=(f"slopes: beta0 {fit0.slope:.3f} (want 1+-{tol}), "
                f"beta1/4 {fit25.slope:.3f} (want 0.75+-{tol}; preasymptotic "
                f"far-slab term dominates at desk scale, see README), "
                f"beta3/4 exp-fit slope {fit75.slope:.3f} r2 {fit75.r_squared:.3f}"))


def check_extended_interference(n_list=(64, 256, 1024),
                                a_values=(1.1, 1.5, 2.0, 4.0)) -> CheckResult:
    """Layer-sum interference constant dominates the exact 9-TDMA pattern."""
    worst = 0.0
    for a in a_values:
        p = params_for_absorption(a)
        bound = interference_upper_extended(p.f_ref, p)
        for n in n_list:
            exact = worst_case_interference(n, Density.EXTENDED, None, p,
                                            f=p.f_ref)
            worst = max(worst, exact / bound)
    return CheckResult(
        name="extended-interference-bound", passed=worst <= 1.0,
        measured={"max_exact_over_bound": worst},
        detail=f"max exact/bound = {worst:.4f} over a in {a_values}")


def check_dense_interference(n_list=(64, 256, 1024, 4096),
                             betas=(0.0, 0.25, 0.5, 1.0),
                             eps0: float = 0.5) -> CheckResult:
    """Calibrated three-case dense interference bound dominates exact sums."""
    p = regime_params(eps0)
    worst = 0.0
    details = {}
    for beta in betas:
        const = calibrate_dense_interference(beta, p, eps0, tuple(n_list))
        for n in n_list:
            exact = worst_case_interference(n, Density.DENSE, beta, p, eps0)
            bound = interference_upper_dense(n, beta, p, eps0, const)
            ratio = exact / bound
            worst = max(worst, ratio)
        details[f"beta_{beta}"] = const
    return CheckResult(
        name="dense-interference-bound", passed=worst <= 1.0,
        measured={"max_exact_over_bound": worst, **details},
        detail=f"max exact/bound = {worst:.4f} over beta in {betas}")


def check_extended_order_optimality(n_list=(64, 256, 1024, 4096),
                                    f: float = 10.0, seed: int = 0,
                                    band_limit: float = 10.0) -> CheckResult:
    """Simulated MH throughput is the same order as the cut-set bound."""
    p = PhysicalParams()
    cfg = MhConfig(MhMode.EXTENDED_FULL_POWER)
    ratios = []
    for n in n_list:
        grid = build_grid(n, Density.EXTENDED)
        rep = mh_throughput(grid, random_matching(n, seed), f, cfg, p)
        exact, _ = cutset_upper_extended(grid, cut(grid), f, p)
        ratios.append(exact.value / rep.bound.value)
    band = max(ratios) / min(ratios)
    return CheckResult(
        name="extended-order-optimality", passed=band <= band_limit,
        measured={"band": band, "upper_over_mh": ratios},
        detail=f"upper/MH ratio band = {band:.3f} over n in {list(n_list)} "
               f"(limit {band_limit})")


def _mean_dense_mh(n: int, beta: float, p: PhysicalParams, eps0: float,
                   seeds) -> float:
    grid = build_grid(n, Density.DENSE)
    f = frequency_for_regime(n, beta, eps0, p)
    cfg = MhConfig(MhMode.DENSE_SCALED_POWER)
    vals = [mh_throughput(grid, random_matching(n, s), f, cfg, p, beta=beta,
                          eps0=eps0).bound.value for s in seeds]
    return float(np.mean(vals))


def check_dense_regime_laws(n_list=(64, 256, 1024, 4096), eps0: float = 0.5,
                            seed: int = 0, num_seeds: int = 3,
                            tol: float = 0.15) -> CheckResult:
    """Dense MH scaling: sqrt(n) law at beta = 1/2; growing gap at beta = 1/4."""
    p = regime_params(eps0)
    seeds = tuple(seed + 1000 * i for i in range(num_seeds))

    t_half = [_mean_dense_mh(n, 0.5, p, eps0, seeds) for n in n_list]
    fit = fit_exponent(np.array(n_list, dtype=float), np.array(t_half))
    slope_ok = abs(fit.slope - 0.5) <= tol

    gaps = []
    for n in n_list:
        grid = build_grid(n, Density.DENSE)
        f = frequency_for_regime(n, 0.25, eps0, p)
        hybrid, _ = cutset_upper_dense(grid, dense_split(grid, 0.25), f,
                                       0.25, p, eps0)
        gaps.append(hybrid.value / _mean_dense_mh(n, 0.25, p, eps0, seeds))
    growing = all(b > a for a, b in zip(gaps, gaps[1:]))

    return CheckResult(
        name="dense-regime-laws", passed=bool(slope_ok and growing),
        measured={"slope_beta_half": fit.slope, "gap_beta_quarter": gaps},
        detail=(f"beta=1/2 MH slope {fit.slope:.3f} (want 0.5+-{tol}); "
                f"beta=1/4 upper/MH gap {'grows' if growing else 'does not grow'} "
                f"monotonically: {[f'{g:.3g}' for g in gaps]}"))


def occupancy_passes(n: int = 4096, num_seeds: int = 100,
                            seed: int = 0) -> int:
    """How many random layouts keep every unit square below log2(n) nodes."""
    limit = math.log2(n)
    passes = 0
    for s in range(seed, seed + num_seeds):
        grid = build_random(n, s)
        if unit_square_occupancy(grid).max() < limit:
            passes += 1
    return passes


def check_random_network(n_list=(64, 256, 1024, 4096), a_value: float = 2.0,
                         seed: int = 0, num_seeds: int = 5,
                         occupancy_n: int = 4096,
                         occupancy_seeds: int = 100) -> CheckResult:
    """Random-vs-regular MH gap widens with n; occupancy stays below log n."""
    p = params_for_absorption(a_value)
    f = p.f_ref
    seeds = tuple(seed + 1000 * i for i in range(num_seeds))
    ratios = []
    for n in n_list:
        reg_grid = build_grid(n, Density.EXTENDED)
        reg_cfg = MhConfig(MhMode.EXTENDED_FULL_POWER)
        rnd_cfg = MhConfig(MhMode.RANDOM_LOG_CELLS)
        t_reg, t_rnd = [], []
        for s in seeds:
            m = random_matching(n, s)
            t_reg.append(mh_throughput(reg_grid, m, f, reg_cfg, p).bound.value)
            t_rnd.append(mh_throughput_random(build_random(n, s + 7), m, f,
                                              rnd_cfg, p).bound.value)
        ratios.append(float(np.mean(t_rnd) / np.mean(t_reg)))
    decreasing = all(b < a for a, b in zip(ratios, ratios[1:]))

    passes = occupancy_passes(occupancy_n, occupancy_seeds, seed)
    occupancy_ok = passes >= int(0.95 * occupancy_seeds)

    return CheckResult(
        name="random-network-gap", passed=bool(decreasing and occupancy_ok),
        measured={"random_over_regular": ratios, "occupancy_passes": passes},
        detail=(f"T_random/T_regular {'decreases' if decreasing else 'fails to decrease'}"
                f": {[f'{r:.3g}' for r in ratios]}; occupancy {passes}/"
                f"{occupancy_seeds} seeds below log2(n)"))


def check_noise_absorption_relation(f_min: int = 1, f_max: int = 64,
                                    band_limit: float = 10.0) -> CheckResult:
    """N(f) * (log a(f))**(a5/2) stays within a bounded band over the sweep."""
    p = PhysicalParams()
    vals = []
    for f in range(f_min, f_max + 1):
        ln_a = log_absorption_coeff(float(f), p)
        vals.append(noise_psd(float(f), p) * (ln_a / math.log(2.0)) ** (p.a5 / 2.0))
    band = max(vals) / min(vals)
    return CheckResult(
        name="noise-absorption-relation", passed=band <= band_limit,
        measured={"band": band},
        detail=f"N(f) (log2 a)^(a5/2) band = {band:.3f} over f = "
               f"{f_min}..{f_max} kHz (limit {band_limit})")


@dataclass
class VerifyReport:
    checks: list
    elapsed_s: float

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self) -> dict:
        return {
            "all_passed": self.all_passed,
            "elapsed_s": self.elapsed_s,
            "checks": [{"name": c.name, "passed": c.passed,
                        "measured": c.measured, "detail": c.detail}
                       for c in self.checks],
        }


def verify_all(seed: int = 0, progress=None) -> VerifyReport:
    """Run every named check at its acceptance sweep size."""
    runners = (
        lambda: check_gain_propriety(seed),
        lambda: check_diagonal_covariance(seed),
        check_extended_power_bound,
        check_dense_power_sandwich,
        check_extended_cutset_band,
        check_dense_upper_slopes,
        check_extended_interference,
        check_dense_interference,
        lambda: check_extended_order_optimality(seed=seed),
        lambda: check_dense_regime_laws(seed=seed),
        lambda: check_random_network(seed=seed),
        check_noise_absorption_relation,
    )
    start = time.monotonic()
    checks = []
    for run in runners:
        result = run()
        checks.append(result)
        if progress is not None:
            progress(result)
    return VerifyReport(checks=checks, elapsed_s=time.monotonic() - start)
