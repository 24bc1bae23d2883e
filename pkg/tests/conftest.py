"""Shared fixtures: named cross-shaped data and random instance generators."""

from __future__ import annotations

import math
import random
from fractions import Fraction

import pytest

from tvpcr.geometry import CellSet, Grid, PCRFunction, build_grid

F = Fraction
HALF = F(1, 2)

# Plus-shaped region: a 3x3 center square with one unit square glued to the
# middle of each side.  The grid is the 5x5 lattice of unit cells spanning
# [-5/2, 5/2]^2.
CROSS_RECTS = [
    (F(-3, 2), F(-3, 2), F(3, 2), F(3, 2)),
    (F(3, 2), -HALF, F(5, 2), HALF),
    (F(-5, 2), -HALF, F(-3, 2), HALF),
    (-HALF, F(3, 2), HALF, F(5, 2)),
    (-HALF, F(-5, 2), HALF, F(-3, 2)),
]


def cross_grid() -> Grid:
    return build_grid(CROSS_RECTS)


def cross_cells(grid: Grid) -> dict[str, CellSet]:
    center = CellSet.from_cells(
        grid, (grid.cell_index(i, j) for i in (1, 2, 3) for j in (1, 2, 3))
    )
    arms = {
        "right": CellSet.from_cells(grid, [grid.cell_index(4, 2)]),
        "left": CellSet.from_cells(grid, [grid.cell_index(0, 2)]),
        "top": CellSet.from_cells(grid, [grid.cell_index(2, 4)]),
        "bottom": CellSet.from_cells(grid, [grid.cell_index(2, 0)]),
    }
    all_arms = CellSet.empty(grid)
    for arm in arms.values():
        all_arms = all_arms.union(arm)
    return {"center": center, "arms": all_arms, "cross": center.union(all_arms), **arms}


def cross_indicator() -> PCRFunction:
    """Characteristic function of the plus shape (value 1 inside, 0 outside)."""
    grid = cross_grid()
    parts = cross_cells(grid)
    values = [F(1) if k in parts["cross"] else F(0) for k in range(grid.ncells)]
    return PCRFunction(grid, tuple(values))


def two_level_cross() -> PCRFunction:
    """Arms at 3, center square at 5/2, zero elsewhere."""
    grid = cross_grid()
    parts = cross_cells(grid)
    values = []
    for k in range(grid.ncells):
        if k in parts["arms"]:
            values.append(F(3))
        elif k in parts["center"]:
            values.append(F(5, 2))
        else:
            values.append(F(0))
    return PCRFunction(grid, tuple(values))


def staircase_indicator(n: int) -> PCRFunction:
    """Characteristic function of the 4-fold staircase approximation of a diamond.

    Level n: the square [-1,1]^2 plus, on each side and for j = 2..n, a stair
    of width 1/n at offset (j-2)/n..(j-1)/n with half-height 1 - (j-1)/n.
    """
    xs = sorted(
        {F(j, n) for j in range(1, n)}
        | {F(-j, n) for j in range(1, n)}
        | {F(1), F(-1)}
        | {F(n + j, n) for j in range(1, n)}
        | {F(-(n + j), n) for j in range(1, n)}
    )
    grid = Grid(tuple(xs), tuple(xs))

    def inside(x: Fraction, y: Fraction) -> bool:
        if abs(x) <= 1 and abs(y) <= 1:
            return True
        for u, v in ((x, y), (y, x)):
            if abs(u) > 1 and abs(u) <= 2 - F(1, n):
                steps_out = math.ceil((abs(u) - 1) * n)
                half_height = 1 - F(steps_out, n)
                if abs(v) <= half_height:
                    return True
        return False

    values = tuple(
        F(1) if inside(*grid.cell_center(k)) else F(0) for k in range(grid.ncells)
    )
    return PCRFunction(grid, values)


def staircase_prefix(w: PCRFunction, k: int, n: int) -> CellSet:
    """Center square plus the first k-1 stair rings of the level-n staircase."""
    grid = w.grid
    limit = 1 + F(k - 1, n)
    cells = []
    for idx in range(grid.ncells):
        x, y = grid.cell_center(idx)
        if w.values[idx] == 1 and max(abs(x), abs(y)) <= limit:
            cells.append(idx)
    return CellSet.from_cells(grid, cells)


def random_rational(rng: random.Random, lo=-2, hi=3, den_choices=(1, 2, 4, 8)) -> Fraction:
    den = rng.choice(den_choices)
    return F(rng.randint(lo * den, hi * den), den)


def random_grid(rng: random.Random, max_side: int = 8, exotic_coords: bool = True) -> Grid:
    nx = rng.randint(1, max_side)
    ny = rng.randint(1, max_side)

    def coords(n):
        if exotic_coords and rng.random() < 0.3:
            widths = [F(rng.choice((1, 1, 2, 3)), rng.choice((1, 2))) for _ in range(n)]
        else:
            widths = [F(1)] * n
        out = [F(0)]
        for w in widths:
            out.append(out[-1] + w)
        return tuple(out)

    return Grid(coords(nx), coords(ny))


def random_pcr(rng: random.Random, grid: Grid, lo=-2, hi=3) -> PCRFunction:
    # repeat values often so level sets are nontrivial
    pool = [random_rational(rng, lo, hi) for _ in range(max(2, grid.ncells // 3))]
    values = tuple(rng.choice(pool) for _ in range(grid.ncells))
    return PCRFunction(grid, values)


def random_nonneg_pcr(rng: random.Random, grid: Grid, hi=4) -> PCRFunction:
    pool = [F(0)] + [random_rational(rng, 0, hi) for _ in range(max(2, grid.ncells // 3))]
    values = tuple(rng.choice(pool) for _ in range(grid.ncells))
    return PCRFunction(grid, values)


def random_cheeger_problem(rng: random.Random, max_cells: int = 16):
    from tvpcr.energy import CheegerProblem

    while True:
        grid = random_grid(rng, max_side=4)
        if grid.ncells <= max_cells:
            break
    ncells = grid.ncells
    # random nonempty region, disconnected allowed
    mask = 0
    while mask == 0:
        mask = rng.getrandbits(ncells) & ((1 << ncells) - 1)
    region = CellSet(grid, mask)
    boundary = sorted(set(region.boundary_edges()))
    plus, minus = set(), set()
    for edge in boundary:
        roll = rng.random()
        if roll < 0.35:
            plus.add(edge)
        elif roll < 0.6:
            minus.add(edge)
    datum = None
    if rng.random() < 0.7:
        datum = random_pcr(rng, grid)
    return CheegerProblem(
        region, frozenset(plus), frozenset(minus), datum
    )


@pytest.fixture
def rng():
    return random.Random(20240817)
