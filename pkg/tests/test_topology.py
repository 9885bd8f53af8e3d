import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from aquascale import (Density, build_grid, build_random, cut, dense_split,
                       dest_columns, displace_to_vertices, grid_from_csv,
                       grid_to_csv, random_matching, unit_square_occupancy)
from aquascale.topology import CBAR_MAX


def test_grid_geometry_extended_vs_dense():
    ext = build_grid(16, Density.EXTENDED)
    dns = build_grid(16, Density.DENSE)
    assert ext.side == dns.side == 4
    assert ext.spacing == 1.0
    assert dns.spacing == 0.25
    # dense is the extended grid shrunk onto the unit square
    assert np.allclose(dns.positions, ext.positions / 4.0)
    # lattice columns straddle the cut line at x = 1/2
    assert sorted(set(ext.positions[:, 0])) == [-1.0, 0.0, 1.0, 2.0]
    assert sorted(set(ext.positions[:, 1])) == [1.0, 2.0, 3.0, 4.0]


@pytest.mark.parametrize("bad_n", [2, 9, 15, 36 + 1])
def test_regular_layouts_reject_bad_sizes(bad_n):
    with pytest.raises(ValueError):
        build_grid(bad_n, Density.EXTENDED)


def test_cut_splits_the_grid_down_the_middle():
    grid = build_grid(4, Density.EXTENDED)
    c = cut(grid)
    assert len(c.left) == len(c.right) == 2
    assert grid.positions[c.left, 0].max() < grid.positions[c.right, 0].min()
    # destination columns count from the cut line, starting at 1
    assert sorted(dest_columns(grid, c.right)) == [1, 1]


def test_dest_columns_extended_are_half_integer_offsets():
    grid = build_grid(64, Density.EXTENDED)
    c = cut(grid)
    cols = dest_columns(grid, c.right)
    assert cols.min() == 1 and cols.max() == 4
    # destination column k sits at x = k, i.e. k - 1/2 from the cut line
    np.testing.assert_allclose(grid.positions[c.right, 0],
                               cols * grid.spacing)


def test_dense_split_slab_widths():
    grid = build_grid(256, Density.DENSE)
    # beta = 0: the whole half-grid is the near slab
    s0 = dense_split(grid, 0.0)
    assert s0.x_l == 8 and len(s0.d2) == 0
    # middle regime: ceil(n^(1/2 - beta + eps)) columns
    s = dense_split(grid, 0.25, 0.01)
    assert s.x_l == math.ceil(256 ** 0.26) == 5
    cols = dest_columns(grid, s.d1)
    assert cols.max() == 5 and len(s.d1) == 5 * 16
    assert len(s.d1) + len(s.d2) == 128
    # decay regime: no near slab at all
    s75 = dense_split(grid, 0.75)
    assert s75.x_l == 0 and len(s75.d1) == 0 and len(s75.d2) == 128
    with pytest.raises(ValueError):
        dense_split(build_grid(256, Density.EXTENDED), 0.25)


def test_dense_split_clamps_to_half_grid():
    grid = build_grid(16, Density.DENSE)
    s = dense_split(grid, 0.1, 0.01)   # 16^0.41 = 3.1 -> 4 > side/2
    assert s.x_l == 2 and len(s.d2) == 0


@given(st.integers(min_value=0, max_value=50))
@settings(max_examples=20, deadline=None)
def test_matching_is_a_permutation(seed):
    m = random_matching(64, seed)
    assert sorted(m.dest) == list(range(64))
    assert 0 <= m.fixed_points() <= 64


def test_matching_is_seed_stable():
    assert np.array_equal(random_matching(64, 3).dest,
                          random_matching(64, 3).dest)
    assert not np.array_equal(random_matching(64, 3).dest,
                              random_matching(64, 4).dest)


def test_random_layout_covers_the_square():
    grid = build_random(4096, 0)
    assert grid.positions.shape == (4096, 2)
    assert grid.positions.min() >= 0.0
    assert grid.positions.max() <= 64.0
    counts = unit_square_occupancy(grid)
    assert counts.sum() == 4096
    assert counts.shape == (64, 64)
    # occupancy of a uniform layout concentrates near its mean of 1
    assert counts.max() < math.log2(4096)


def test_occupancy_matches_a_direct_histogram():
    grid = build_random(64, 12)
    counts = unit_square_occupancy(grid)
    ref = np.zeros((8, 8), dtype=int)
    for x, y in grid.positions:
        ref[min(int(x), 7), min(int(y), 7)] += 1
    assert np.array_equal(counts, ref)


def test_displacement_snaps_toward_the_cut():
    grid = build_random(64, 5)
    layout = displace_to_vertices(grid, 0.2)
    half = 4.0
    # every removed node was inside the empty slab, every kept one outside
    x = grid.positions[:, 0]
    assert np.all((x[layout.removed] > half) & (x[layout.removed] < half + 0.2))
    kept_x = x[layout.kept]
    assert not np.any((kept_x > half) & (kept_x < half + 0.2))
    # vertices are lattice points and multiplicities count every kept node
    assert np.array_equal(layout.vertices, np.round(layout.vertices))
    assert layout.multiplicity.sum() == len(layout.kept)
    assert layout.multiplicity.min() >= 1
    # snapping never widens the gap across the cut
    assert np.all(layout.vertices[:, 0][layout.vertices[:, 0] <= half] <= half)


def test_displacement_validates_inputs():
    grid = build_random(64, 5)
    with pytest.raises(ValueError):
        displace_to_vertices(grid, 0.0)
    with pytest.raises(ValueError):
        displace_to_vertices(grid, CBAR_MAX)
    with pytest.raises(ValueError):
        displace_to_vertices(build_grid(64, Density.EXTENDED), 0.2)


def test_grid_csv_round_trip(tmp_path):
    grid = build_random(36, 9)
    path = tmp_path / "layout.csv"
    grid_to_csv(grid, path)
    back = grid_from_csv(path)
    assert back.n == 36
    np.testing.assert_allclose(back.positions, grid.positions, rtol=0, atol=0)
    header = path.read_text().splitlines()[0]
    assert header == "node_id,x,y"
