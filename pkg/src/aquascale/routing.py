"""Multi-hop (MH) relaying: cells, routes, interference, throughput.

Traffic follows the straight source-destination segment through a square
cell tiling; one node per cell relays (regular layouts have exactly one,
random layouts use the lowest-index occupant).  Cells are activated by a
9-TDMA reuse pattern and every per-hop SINR is evaluated against the full
concurrent-transmission pattern of the hop's slot, which makes throughput a
deterministic function of (grid, matching, config).

Simulated aggregate throughput uses the conservative time-sharing argument

    T(n) = n * min_hop_rate / (max_cell_load * tdma_reuse)

and is reported next to the matching closed form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .channel import PhysicalParams, log_absorption_coeff, noise_psd
from .cutset import BoundKind, Regime, ThroughputBound, classify_regime
from .topology import Density, NodeGrid, SdMatching


class MhMode(Enum):
    EXTENDED_FULL_POWER = "ExtendedFullPower"
    DENSE_SCALED_POWER = "DenseScaledPower"
    RANDOM_LOG_CELLS = "RandomLogCells"


_MODE_FOR_DENSITY = {
    Density.EXTENDED: MhMode.EXTENDED_FULL_POWER,
    Density.DENSE: MhMode.DENSE_SCALED_POWER,
    Density.RANDOM: MhMode.RANDOM_LOG_CELLS,
}


@dataclass(frozen=True)
class MhConfig:
    mode: MhMode
    tdma_reuse: int = 9
    delta: float = math.sqrt(2.0)   # random-network per-hop scale constant

    def __post_init__(self):
        k = math.isqrt(self.tdma_reuse)
        if self.tdma_reuse < 1 or k * k != self.tdma_reuse:
            raise ValueError(
                f"tdma_reuse must be a perfect square, got {self.tdma_reuse}"
            )
        if self.delta < math.sqrt(2.0):
            raise ValueError(f"delta must be >= sqrt(2), got {self.delta}")


class RoutingError(RuntimeError):
    """Raised when a route crosses a cell with no relay candidate."""

    def __init__(self, src: int, dst: int, cell: tuple[int, int]):
        self.src, self.dst, self.cell = src, dst, cell
        super().__init__(f"empty routing cell {cell} between {src} and {dst}")


@dataclass(frozen=True)
class Route:
    src: int
    dst: int
    cells: list
    nodes: list
    hop_lengths: np.ndarray


def tx_power(mode: MhMode, n: int, f: float, p: PhysicalParams) -> float:
    """Per-node transmit power of the protocol.

    Dense networks back off to keep the received SNR of a nearest-neighbor
    hop bounded: P * min{1, a(f)**(1/sqrt(n)) * N(f) / n**(alpha/2)}.
    """
    if mode is not MhMode.DENSE_SCALED_POWER:
        return p.tx_power
    return p.tx_power * math.exp(min(0.0, dense_power_log_scale(n, f, p)))


def dense_power_log_scale(n: int, f: float, p: PhysicalParams) -> float:
    """log of the dense back-off factor before clamping at full power.

    Negative means the back-off is active; non-negative means absorption
    over one hop already costs more than a full-power node can pay, so the
    protocol transmits at P (the power-limited branch).
    """
    ln_a = log_absorption_coeff(f, p)
    return (ln_a / math.sqrt(n) + math.log(noise_psd(f, p))
            - p.alpha / 2.0 * math.log(n))


@dataclass(frozen=True)
class _CellGeometry:
    origin_x: float
    origin_y: float
    side: float          # cell side length, network units
    ncells: int          # cells per axis
    reuse_root: int

    def cell_of(self, pos: np.ndarray) -> np.ndarray:
        c = np.floor((pos - [self.origin_x, self.origin_y]) / self.side)
        return np.clip(c, 0, self.ncells - 1).astype(int)

    def slot_of(self, cells: np.ndarray) -> np.ndarray:
        k = self.reuse_root
        return (cells[..., 0] % k) * k + cells[..., 1] % k


def _geometry(grid: NodeGrid, cfg: MhConfig) -> _CellGeometry:
    k = math.isqrt(cfg.tdma_reuse)
    if grid.density is Density.RANDOM:
        if grid.n < 4:
            raise ValueError("random MH needs n >= 4")
        side = math.sqrt(2.0 * math.log2(grid.n))
        extent = math.sqrt(grid.n)
        return _CellGeometry(0.0, 0.0, side, math.ceil(extent / side), k)
    s = grid.spacing
    ox = grid.positions[:, 0].min() - 0.5 * s
    oy = grid.positions[:, 1].min() - 0.5 * s
    return _CellGeometry(ox, oy, s, grid.side, k)


class _CellIndex:
    """Occupancy structures shared by route building and interference."""

    def __init__(self, grid: NodeGrid, cfg: MhConfig):
        self.grid = grid
        self.geom = _geometry(grid, cfg)
        self.cells = self.geom.cell_of(grid.positions)
        m = self.geom.ncells
        occupant = np.full((m, m), -1, dtype=int)
        # lowest node id per cell: reversed order makes earlier ids win
        for i in range(grid.n - 1, -1, -1):
            occupant[self.cells[i, 0], self.cells[i, 1]] = i
        self.occupant = occupant
        self.node_slot = self.geom.slot_of(self.cells)


def _supercover(u0: float, v0: float, u1: float, v1: float) -> list:
    """Integer cells [i,i+1) x [j,j+1) crossed by the segment (u0,v0)-(u1,v1).

    Cells are emitted in traversal order; exact corner crossings step
    diagonally (the grazed side cells contain the segment only on their
    closed boundary), so consecutive cells are edge- or corner-adjacent and
    the cell count is at most |dcx| + |dcy| + 1.
    """
    cx, cy = math.floor(u0), math.floor(v0)
    ex, ey = math.floor(u1), math.floor(v1)
    cells = [(cx, cy)]
    du, dv = u1 - u0, v1 - v0
    sx = 1 if du > 0 else -1
    sy = 1 if dv > 0 else -1
    if cx != ex:
        lines = range(cx + 1, ex + 1) if sx > 0 else range(cx, ex, -1)
        tx = [(k - u0) / du for k in lines]
    else:
        tx = []
    if cy != ey:
        lines = range(cy + 1, ey + 1) if sy > 0 else range(cy, ey, -1)
        ty = [(k - v0) / dv for k in lines]
    else:
        ty = []
    i = j = 0
    tol = 1e-12
    while i < len(tx) or j < len(ty):
        if j >= len(ty) or (i < len(tx) and tx[i] < ty[j] - tol):
            cx += sx
            i += 1
        elif i >= len(tx) or ty[j] < tx[i] - tol:
            cy += sy
            j += 1
        else:                       # corner crossing
            cx += sx
            cy += sy
            i += 1
            j += 1
        cells.append((cx, cy))
    return cells


def build_route(src: int, dst: int, grid: NodeGrid, cfg: MhConfig,
                index: _CellIndex | None = None) -> Route:
    """Relay sequence along the straight src-dst segment.

    Raises :class:`RoutingError` if an intermediate cell of a random layout
    is empty.
    """
    if src == dst:
        raise ValueError("route endpoints must differ")
    if index is None:
        index = _CellIndex(grid, cfg)
    geom = index.geom
    p0 = (grid.positions[src] - [geom.origin_x, geom.origin_y]) / geom.side
    p1 = (grid.positions[dst] - [geom.origin_x, geom.origin_y]) / geom.side
    cells = _supercover(p0[0], p0[1], p1[0], p1[1])
    nodes = [src]
    for c in cells[1:-1]:
        relay = index.occupant[c[0], c[1]]
        if relay < 0:
            raise RoutingError(src, dst, c)
        if relay != nodes[-1] and relay != dst:
            nodes.append(relay)
    if dst != nodes[-1]:
        nodes.append(dst)
    pos = grid.positions[nodes]
    hops = np.hypot(*(pos[1:] - pos[:-1]).T)
    return Route(src=src, dst=dst, cells=cells, nodes=nodes, hop_lengths=hops)


def interference_exact(grid: NodeGrid, f: float, active_set: np.ndarray,
                       receiver: int, cfg: MhConfig,
                       p: PhysicalParams) -> float:
    """Aggregate interference power at the receiver from the active set."""
    active_set = np.asarray(active_set)
    if receiver in active_set:
        raise ValueError("receiver cannot be part of the active set")
    if len(active_set) == 0:
        return 0.0
    txp = tx_power(cfg.mode, grid.n, f, p)
    ln_a = log_absorption_coeff(f, p)
    diff = grid.positions[active_set] - grid.positions[receiver]
    r = np.hypot(diff[:, 0], diff[:, 1])
    with np.errstate(under="ignore"):
        return float(txp / p.c0 * (np.exp(-ln_a * r) * r ** (-p.alpha)).sum())


def interference_upper_extended(f: float, p: PhysicalParams,
                                c8: float | None = None) -> float:
    """Closed-form extended interference bound c8 / a(f).

    The default constant comes from the concentric cell-layer argument
    (at most 8k interferers in layer k, each at distance >= k and
    k**(-alpha) <= 1):  P_I <= (8 P / c0) * sum_k a**(-k), which is
    independent of the spreading factor.
    """
    ln_a = log_absorption_coeff(f, p)
    if c8 is None:
        # 8 P/c0 * a/(a-1), written via expm1 for small ln_a
        c8 = 8.0 * p.tx_power / (p.c0 * -math.expm1(-ln_a))
    return c8 * math.exp(-ln_a)


def interference_upper_dense(n: int, beta: float, p: PhysicalParams,
                             eps0: float, constant: float = 1.0) -> float:
    """Three-case dense interference bound under the scaled power rule.

    beta in [0, 1/2) -> C max{n**((1/2-beta)(2-alpha)), log n} / n**(beta a5/2)
    beta = 1/2       -> C / n**(a5/4)
    beta > 1/2       -> C n**(alpha/2) / (1+eps0)**(n**(beta-1/2))
    """
    if beta < 0.0:
        raise ValueError(f"beta must be >= 0, got {beta}")
    scale = constant * p.tx_power / p.c0
    if abs(beta - 0.5) < 1e-12:
        return scale * n ** (-p.a5 / 4.0)
    if beta < 0.5:
        growth = max(n ** ((0.5 - beta) * (2.0 - p.alpha)), math.log2(n))
        return scale * growth * n ** (-beta * p.a5 / 2.0)
    return (scale * n ** (p.alpha / 2.0) *
            math.exp(-math.log1p(eps0) * n ** (beta - 0.5)))


def _interference_tables(grid: NodeGrid, cfg: MhConfig, f: float,
                         p: PhysicalParams, index: _CellIndex,
                         block: int = 512) -> np.ndarray:
    """P_I at every node for each TDMA slot's full transmission pattern.

    The designated transmitter of every (occupied) cell in the slot is
    active; a node's own contribution is excluded where it would be at zero
    distance (the node itself transmitting).
    """
    txp = tx_power(cfg.mode, grid.n, f, p)
    ln_a = log_absorption_coeff(f, p)
    nslots = cfg.tdma_reuse
    designated = np.unique(index.occupant[index.occupant >= 0])
    d_slot = index.node_slot[designated]
    table = np.zeros((grid.n, nslots))
    for s in range(nslots):
        active = designated[d_slot == s]
        if len(active) == 0:
            continue
        apos = grid.positions[active]
        for lo in range(0, grid.n, block):
            hi = min(lo + block, grid.n)
            diff = grid.positions[lo:hi, None, :] - apos[None, :, :]
            r = np.hypot(diff[..., 0], diff[..., 1])
            with np.errstate(under="ignore", divide="ignore"):
                terms = np.exp(-ln_a * r) * r ** (-p.alpha)
            terms[r == 0.0] = 0.0          # the receiver itself
            table[lo:hi, s] = txp / p.c0 * terms.sum(axis=1)
    return table


def per_hop_rate(receiver: int, transmitter: int, f: float, cfg: MhConfig,
                 grid: NodeGrid, p: PhysicalParams,
                 index: _CellIndex | None = None) -> float:
    """SINR rate log2(1 + P_r / (N(f) + P_I)) of one route hop.

    P_I is the exact interference of the full concurrent pattern of the
    transmitter's TDMA slot (minus the desired signal itself).
    """
    if index is None:
        index = _CellIndex(grid, cfg)
    diff = grid.positions[receiver] - grid.positions[transmitter]
    d = math.hypot(diff[0], diff[1])
    if d <= 0.0:
        raise ValueError("hop endpoints must be distinct nodes")
    txp = tx_power(cfg.mode, grid.n, f, p)
    ln_a = log_absorption_coeff(f, p)
    slot = int(index.node_slot[transmitter])
    designated = np.unique(index.occupant[index.occupant >= 0])
    active = designated[index.node_slot[designated] == slot]
    active = active[(active != transmitter) & (active != receiver)]
    p_i = interference_exact(grid, f, active, receiver, cfg, p)
    with np.errstate(under="ignore"):
        p_r = txp / p.c0 * math.exp(-ln_a * d) * d ** (-p.alpha)
    return math.log2(1.0 + p_r / (noise_psd(f, p) + p_i))


@dataclass
class MhReport:
    """Simulation outcome next to its closed-form prediction."""

    n: int
    mode: MhMode
    f_khz: float
    beta: float | None
    bound: ThroughputBound
    closed_form: float
    ratio: float
    min_hop_rate: float
    max_cell_load: int
    failures: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "mode": self.mode.value,
            "f_khz": self.f_khz,
            "beta": self.beta,
            "simulated_T": self.bound.value,
            "closed_form_T": self.closed_form,
            "ratio": self.ratio,
            "min_hop_rate": self.min_hop_rate,
            "max_cell_load": self.max_cell_load,
            "failures": self.failures,
        }


def dense_closed_form_lower(n: int, beta: float, p: PhysicalParams,
                            eps0: float, constant: float = 1.0) -> float:
    """Three-regime dense MH throughput (achievability side)."""
    if beta < 0.0:
        raise ValueError(f"beta must be >= 0, got {beta}")
    if abs(beta - 0.5) < 1e-12:
        return constant * math.sqrt(n)
    if beta < 0.5:
        growth = max(n ** ((0.5 - beta) * (2.0 - p.alpha)), math.log2(n))
        return constant * math.sqrt(n) / growth
    expo = (1.0 + p.alpha + beta * p.a5) / 2.0
    return (constant * n ** expo *
            math.exp(-math.log1p(eps0) * n ** (beta - 0.5)))


def _simulate(grid: NodeGrid, matching: SdMatching, f: float, cfg: MhConfig,
              p: PhysicalParams) -> tuple[float, int, list, int]:
    """Shared MH machinery: (min hop rate, max cell load, failures, hops)."""
    index = _CellIndex(grid, cfg)
    geom = index.geom
    loads = np.zeros((geom.ncells, geom.ncells), dtype=int)
    hop_tx, hop_rx, failures = [], [], []
    for src in range(grid.n):
        dst = int(matching.dest[src])
        if dst == src:
            continue
        try:
            route = build_route(src, dst, grid, cfg, index)
        except RoutingError as err:
            failures.append({"src": err.src, "dst": err.dst, "cell": list(err.cell)})
            continue
        for c in route.cells:
            loads[c[0], c[1]] += 1
        hop_tx.extend(route.nodes[:-1])
        hop_rx.extend(route.nodes[1:])
    if not hop_tx:
        raise ValueError("matching generated no traffic to route")

    hop_tx = np.array(hop_tx)
    hop_rx = np.array(hop_rx)
    diff = grid.positions[hop_rx] - grid.positions[hop_tx]
    dist = np.hypot(diff[:, 0], diff[:, 1])

    table = _interference_tables(grid, cfg, f, p, index)
    txp = tx_power(cfg.mode, grid.n, f, p)
    ln_a = log_absorption_coeff(f, p)
    with np.errstate(under="ignore"):
        p_r = txp / p.c0 * np.exp(-ln_a * dist) * dist ** (-p.alpha)
    slot = index.node_slot[hop_tx]
    p_i = table[hop_rx, slot]
    # remove the desired signal where the transmitter is its cell's
    # designated (and therefore pattern-active) node
    designated = index.occupant[index.cells[hop_tx, 0], index.cells[hop_tx, 1]]
    own = np.where(designated == hop_tx, p_r, 0.0)
    p_i = np.maximum(p_i - own, 0.0)
    rates = np.log2(1.0 + p_r / (noise_psd(f, p) + p_i))
    return float(rates.min()), int(loads.max()), failures, len(hop_tx)


def mh_throughput(grid: NodeGrid, matching: SdMatching, f: float,
                  cfg: MhConfig, p: PhysicalParams, beta: float | None = None,
                  eps0: float = 0.5, constant: float = 1.0) -> MhReport:
    """Simulated MH throughput of a regular layout plus its closed form.

    The closed form is sqrt(n)/(a(f) N(f)) for extended layouts and the
    three-regime dense expression (needs ``beta``) for dense ones.
    """
    if grid.density is Density.RANDOM:
        raise ValueError("use mh_throughput_random for random layouts")
    expected = _MODE_FOR_DENSITY[grid.density]
    if cfg.mode is not expected:
        raise ValueError(f"{grid.density.value} layout needs mode {expected.value}")
    r_min, load_max, failures, _ = _simulate(grid, matching, f, cfg, p)
    value = grid.n * r_min / (load_max * cfg.tdma_reuse)
    ln_a = log_absorption_coeff(f, p)
    if grid.density is Density.EXTENDED:
        closed = constant * math.sqrt(grid.n) * math.exp(-ln_a) / noise_psd(f, p)
        regime = Regime.POWER     # extended networks are power limited
    else:
        if beta is None:
            raise ValueError("dense closed form needs the regime exponent beta")
        closed = dense_closed_form_lower(grid.n, beta, p, eps0, constant)
        regime = classify_regime(beta)
    bound = ThroughputBound(value, BoundKind.MH_LOWER, regime,
                            {"n": grid.n, "f_khz": f, "beta": beta})
    return MhReport(n=grid.n, mode=cfg.mode, f_khz=f, beta=beta, bound=bound,
                    closed_form=closed, ratio=value / closed,
                    min_hop_rate=r_min, max_cell_load=load_max,
                    failures=failures)


def mh_throughput_random(grid: NodeGrid, matching: SdMatching, f: float,
                         cfg: MhConfig, p: PhysicalParams) -> MhReport:
    """Simulated MH throughput of a random layout plus its closed form.

    Routing cells have area 2 log n (side sqrt(2 log n)); the closed form is
    sqrt(n) / ((log n)**((alpha+1)/2) * a(f)**(delta sqrt(log n)) * N(f)).
    """
    if grid.density is not Density.RANDOM:
        raise ValueError("mh_throughput_random needs a random layout")
    if cfg.mode is not MhMode.RANDOM_LOG_CELLS:
        raise ValueError("random layout needs mode RandomLogCells")
    r_min, load_max, failures, _ = _simulate(grid, matching, f, cfg, p)
    value = grid.n * r_min / (load_max * cfg.tdma_reuse)
    ln_a = log_absorption_coeff(f, p)
    log_n = math.log2(grid.n)
    closed = (math.sqrt(grid.n) *
              math.exp(-cfg.delta * math.sqrt(log_n) * ln_a) /
              (log_n ** ((p.alpha + 1.0) / 2.0) * noise_psd(f, p)))
    bound = ThroughputBound(value, BoundKind.MH_RANDOM_LOWER, Regime.POWER,
                            {"n": grid.n, "f_khz": f, "seed": grid.seed})
    return MhReport(n=grid.n, mode=cfg.mode, f_khz=f, beta=None, bound=bound,
                    closed_form=closed, ratio=value / closed,
                    min_hop_rate=r_min, max_cell_load=load_max,
                    failures=failures)
