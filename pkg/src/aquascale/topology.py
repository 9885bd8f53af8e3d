"""Node layouts, source-destination matchings, and cut geometry.

Regular layouts place n nodes (square n, even root) on a lattice split by a
vertical cut into n/2 potential sources (x <= 0) and n/2 potential
destinations (x > 0):

* extended: unit spacing, area n, sources at (-i_x + 1, i_y) and
  destinations at (k_x, k_y) for i_x, k_x in 1..sqrt(n)/2, i_y, k_y in
  1..sqrt(n);
* dense: the same lattice scaled by 1/sqrt(n) into unit area.

Random layouts drop n nodes uniformly on the [0, sqrt(n)]^2 square.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .channel import make_rng


class Density(Enum):
    EXTENDED = "extended"
    DENSE = "dense"
    RANDOM = "random"


@dataclass(frozen=True)
class NodeGrid:
    """A node layout: ids are row indices into ``positions`` (shape (n, 2))."""

    n: int
    density: Density
    positions: np.ndarray
    seed: int | None = None

    @property
    def side(self) -> int:
        """sqrt(n) as an exact integer (regular layouts)."""
        side = math.isqrt(self.n)
        if side * side != self.n:
            raise ValueError(f"n = {self.n} is not a perfect square")
        return side

    @property
    def spacing(self) -> float:
        """Lattice spacing of regular layouts (1 extended, 1/sqrt(n) dense)."""
        if self.density is Density.DENSE:
            return 1.0 / self.side
        return 1.0


@dataclass(frozen=True)
class SdMatching:
    """Uniform random source-destination matching (fixed points allowed)."""

    n: int
    seed: int
    dest: np.ndarray   # dest[i] = destination node of source i

    def fixed_points(self) -> int:
        return int(np.sum(self.dest == np.arange(self.n)))


@dataclass(frozen=True)
class CutPartition:
    """The vertical cut L: everything left of it vs everything right.

    ``x_l``, ``d1`` and ``d2`` are populated by :func:`dense_split`:
    ``d1`` is the slab of destination columns k_x <= x_l next to the cut and
    ``d2`` the remainder.
    """

    left: np.ndarray
    right: np.ndarray
    x_l: int | None = None
    d1: np.ndarray | None = None
    d2: np.ndarray | None = None


def _check_regular_n(n: int) -> int:
    if n < 4:
        raise ValueError(f"regular layouts need n >= 4, got n = {n}")
    side = math.isqrt(n)
    if side * side != n or side % 2 != 0:
        raise ValueError(
            f"regular layouts need square n with even sqrt(n), got n = {n}"
        )
    return side


def build_grid(n: int, density: Density) -> NodeGrid:
    """Regular lattice layout (extended or dense).

    Node ids run column-major: id = column * sqrt(n) + row, columns ordered
    left to right, so ids 0 .. n/2 - 1 are the source half.
    """
    if density is Density.RANDOM:
        raise ValueError("use build_random for random layouts")
    side = _check_regular_n(n)
    half = side // 2
    xs = np.arange(-half + 1, half + 1, dtype=float)   # column coordinates
    ys = np.arange(1, side + 1, dtype=float)
    pos = np.empty((n, 2))
    pos[:, 0] = np.repeat(xs, side)
    pos[:, 1] = np.tile(ys, side)
    if density is Density.DENSE:
        pos /= side
    return NodeGrid(n=n, density=density, positions=pos)


def build_random(n: int, seed: int) -> NodeGrid:
    """n nodes i.i.d. uniform on the [0, sqrt(n)]^2 square."""
    if n < 4:
        raise ValueError(f"random layouts need n >= 4, got n = {n}")
    rng = make_rng(seed)
    pos = rng.random((n, 2)) * math.sqrt(n)
    return NodeGrid(n=n, density=Density.RANDOM, positions=pos, seed=seed)


def unit_square_occupancy(grid: NodeGrid) -> np.ndarray:
    """Node counts of the n unit squares tiling a random layout's area."""
    side = grid.side
    cells = np.floor(grid.positions).astype(int)
    np.clip(cells, 0, side - 1, out=cells)
    counts = np.zeros((side, side), dtype=int)
    np.add.at(counts, (cells[:, 0], cells[:, 1]), 1)
    return counts


def random_matching(n: int, seed: int) -> SdMatching:
    """Uniform permutation matching; node i sends to dest[i]."""
    if n < 1:
        raise ValueError("matching needs n >= 1")
    rng = make_rng(seed)
    return SdMatching(n=n, seed=seed, dest=rng.permutation(n))


def cut(grid: NodeGrid) -> CutPartition:
    """The single vertical cut of a regular layout (left half = sources)."""
    if grid.density is Density.RANDOM:
        raise ValueError("the cut partition is defined for regular layouts")
    left = np.flatnonzero(grid.positions[:, 0] <= 0.0)
    right = np.flatnonzero(grid.positions[:, 0] > 0.0)
    return CutPartition(left=left, right=right)


def dest_columns(grid: NodeGrid, ids: np.ndarray) -> np.ndarray:
    """Destination column indices k_x (>= 1) for the given node ids."""
    return np.rint(grid.positions[ids, 0] / grid.spacing).astype(int)


def dense_split(grid: NodeGrid, beta: float, eps: float = 0.01) -> CutPartition:
    """Split a dense cut's destinations into the near slab D1 and rest D2.

    The slab width in columns is x_l = sqrt(n)/2 for beta = 0,
    ceil(n**(1/2 - beta + eps)) clamped to [0, sqrt(n)/2] for 0 < beta <= 1/2
    and 0 for beta > 1/2.
    """
    if grid.density is not Density.DENSE:
        raise ValueError("dense_split applies to dense layouts")
    if beta < 0.0:
        raise ValueError(f"beta must be >= 0, got {beta}")
    base = cut(grid)
    half = grid.side // 2
    if beta == 0.0:
        x_l = half
    elif beta <= 0.5:
        x_l = min(half, max(0, math.ceil(grid.n ** (0.5 - beta + eps))))
    else:
        x_l = 0
    cols = dest_columns(grid, base.right)
    in_slab = cols <= x_l
    return CutPartition(left=base.left, right=base.right, x_l=x_l,
                        d1=base.right[in_slab], d2=base.right[~in_slab])


@dataclass(frozen=True)
class DisplacedLayout:
    """Random layout snapped to unit-lattice vertices for cut-bound analysis.

    ``vertices`` lists the distinct occupied lattice vertices and
    ``multiplicity`` how many nodes landed on each; ``kept`` / ``removed``
    are the original node ids outside / inside the empty slab.
    """

    n: int
    cbar: float
    vertices: np.ndarray
    multiplicity: np.ndarray
    kept: np.ndarray
    removed: np.ndarray


#: upper limit of the admissible empty-zone width
CBAR_MAX = 1.0 / (math.sqrt(7.0) * math.exp(0.25))


def displace_to_vertices(grid: NodeGrid, cbar: float) -> DisplacedLayout:
    """Move each node to a vertex of its unit square, toward the cut.

    Nodes inside the empty-zone slab of width ``cbar`` immediately right of
    the centerline are removed.  The x coordinate snaps to the square's
    vertex nearer the cut (so horizontal separations across the cut never
    grow) and y to the nearest vertex, ties broken downward.
    """
    if grid.density is not Density.RANDOM:
        raise ValueError("displacement applies to random layouts")
    if not 0.0 < cbar < CBAR_MAX:
        raise ValueError(
            f"cbar must lie in (0, {CBAR_MAX:.4f}), got {cbar}"
        )
    side = grid.side
    half = side / 2.0
    x, y = grid.positions[:, 0], grid.positions[:, 1]
    keep = ~((x > half) & (x < half + cbar))
    kept = np.flatnonzero(keep)
    removed = np.flatnonzero(~keep)

    cell_x = np.clip(np.floor(x[kept]), 0, side - 1)
    cell_y = np.clip(np.floor(y[kept]), 0, side - 1)
    vx = np.where(x[kept] <= half, cell_x + 1.0, cell_x)
    vy = np.where(y[kept] - cell_y > 0.5, cell_y + 1.0, cell_y)

    verts, counts = np.unique(np.column_stack([vx, vy]), axis=0,
                              return_counts=True)
    return DisplacedLayout(n=grid.n, cbar=cbar, vertices=verts,
                           multiplicity=counts, kept=kept, removed=removed)


def grid_to_csv(grid: NodeGrid, path) -> None:
    """Write the layout as ``node_id,x,y`` (comma, header, LF)."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["node_id", "x", "y"])
        for i, (xx, yy) in enumerate(grid.positions):
            writer.writerow([i, repr(float(xx)), repr(float(yy))])


def grid_from_csv(path, density: Density = Density.RANDOM,
                  seed: int | None = None) -> NodeGrid:
    """Read a ``node_id,x,y`` file written by :func:`grid_to_csv`."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if header != ["node_id", "x", "y"]:
            raise ValueError(f"unexpected grid CSV header: {header}")
        rows = sorted((int(r[0]), float(r[1]), float(r[2])) for r in reader)
    pos = np.array([[r[1], r[2]] for r in rows])
    return NodeGrid(n=len(rows), density=density, positions=pos, seed=seed)
