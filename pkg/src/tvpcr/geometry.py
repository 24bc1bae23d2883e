"""Exact rectilinear geometry on finite grids.

A grid is a pair of strictly increasing rational coordinate lists; its cells
are the closed rectangles between consecutive lines.  Cell subsets stand in
for rectilinear polygons (finite unions of grid rectangles, possibly
disconnected).  All measures are exact ``Fraction`` values: for axis-parallel
boundaries the l1 perimeter of a set equals the total Euclidean length of its
boundary edges, so lengths of grid segments are the only measure needed.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator

from .exceptions import ValidationError
from .validation import as_rational_seq, require_strictly_increasing

# An edge is a unit segment of the grid between two adjacent vertices:
#   ('v', i, j): vertical segment on line x=xs[i] spanning ys[j]..ys[j+1]
#   ('h', i, j): horizontal segment on line y=ys[j] spanning xs[i]..xs[i+1]
Edge = tuple[str, int, int]

ZERO = Fraction(0)


@dataclass(frozen=True)
class Grid:
    """Sorted distinct axis coordinates; cell (i,j) = [xs[i],xs[i+1]]x[ys[j],ys[j+1]]."""

    xs: tuple[Fraction, ...]
    ys: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "xs", as_rational_seq(self.xs))
        object.__setattr__(self, "ys", as_rational_seq(self.ys))
        if len(self.xs) < 2 or len(self.ys) < 2:
            raise ValidationError("a grid needs at least two lines per axis")
        require_strictly_increasing(self.xs, "x coordinates")
        require_strictly_increasing(self.ys, "y coordinates")

    @property
    def nx(self) -> int:
        return len(self.xs) - 1

    @property
    def ny(self) -> int:
        return len(self.ys) - 1

    @property
    def ncells(self) -> int:
        return self.nx * self.ny

    def cell_index(self, i: int, j: int) -> int:
        return j * self.nx + i

    def cell_ij(self, k: int) -> tuple[int, int]:
        return k % self.nx, k // self.nx

    def cell_width(self, i: int) -> Fraction:
        return self.xs[i + 1] - self.xs[i]

    def cell_height(self, j: int) -> Fraction:
        return self.ys[j + 1] - self.ys[j]

    def cell_area(self, k: int) -> Fraction:
        i, j = self.cell_ij(k)
        return self.cell_width(i) * self.cell_height(j)

    def cell_center(self, k: int) -> tuple[Fraction, Fraction]:
        i, j = self.cell_ij(k)
        return ((self.xs[i] + self.xs[i + 1]) / 2, (self.ys[j] + self.ys[j + 1]) / 2)

    def cell_box(self, k: int) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        i, j = self.cell_ij(k)
        return (self.xs[i], self.ys[j], self.xs[i + 1], self.ys[j + 1])

    def edge_length(self, edge: Edge) -> Fraction:
        kind, i, j = edge
        return self.cell_height(j) if kind == "v" else self.cell_width(i)

    def edge_cells(self, edge: Edge) -> tuple[int | None, int | None]:
        """The two cells an edge separates; None on the domain-boundary side."""
        kind, i, j = edge
        if kind == "v":
            left = self.cell_index(i - 1, j) if i > 0 else None
            right = self.cell_index(i, j) if i < self.nx else None
            return left, right
        below = self.cell_index(i, j - 1) if j > 0 else None
        above = self.cell_index(i, j) if j < self.ny else None
        return below, above

    def cell_edges(self, k: int) -> tuple[Edge, Edge, Edge, Edge]:
        i, j = self.cell_ij(k)
        return (("v", i, j), ("v", i + 1, j), ("h", i, j), ("h", i, j + 1))

    def neighbors(self, k: int) -> Iterator[tuple[int, Edge]]:
        """Edge-adjacent cells of k with the separating edge."""
        for edge in self.cell_edges(k):
            a, b = self.edge_cells(edge)
            other = b if a == k else a
            if other is not None:
                yield other, edge

    def interior_edges(self) -> Iterator[Edge]:
        for j in range(self.ny):
            for i in range(1, self.nx):
                yield ("v", i, j)
        for j in range(1, self.ny):
            for i in range(self.nx):
                yield ("h", i, j)

    def box_edges(self) -> Iterator[Edge]:
        """Edges lying on the boundary of the grid's bounding rectangle."""
        for j in range(self.ny):
            yield ("v", 0, j)
            yield ("v", self.nx, j)
        for i in range(self.nx):
            yield ("h", i, 0)
            yield ("h", i, self.ny)


def build_grid(rectangles: Iterable, extra_x=(), extra_y=()) -> Grid:
    """Minimal grid whose lines contain every rectangle side and extra line.

    Rectangles are (x0, y0, x1, y1) with x0 < x1 and y0 < y1.  Duplicate
    coordinates are merged.
    """
    xs: set[Fraction] = set(as_rational_seq(extra_x))
    ys: set[Fraction] = set(as_rational_seq(extra_y))
    for rect in rectangles:
        x0, y0, x1, y1 = as_rational_seq(rect)
        if x0 >= x1 or y0 >= y1:
            raise ValidationError(f"degenerate rectangle: {rect!r}")
        xs.update((x0, x1))
        ys.update((y0, y1))
    if len(xs) < 2 or len(ys) < 2:
        raise ValidationError("need at least one rectangle or two lines per axis")
    return Grid(tuple(sorted(xs)), tuple(sorted(ys)))


@dataclass(frozen=True)
class CellSet:
    """A subset of grid cells, stored as a bitmask over cell indices."""

    grid: Grid
    mask: int

    def __post_init__(self):
        if self.mask < 0 or self.mask >> self.grid.ncells:
            raise ValidationError("cell mask out of range for grid")

    @classmethod
    def from_cells(cls, grid: Grid, cells: Iterable[int]) -> "CellSet":
        mask = 0
        for k in cells:
            mask |= 1 << k
        return cls(grid, mask)

    @classmethod
    def full(cls, grid: Grid) -> "CellSet":
        return cls(grid, (1 << grid.ncells) - 1)

    @classmethod
    def empty(cls, grid: Grid) -> "CellSet":
        return cls(grid, 0)

    def __contains__(self, k: int) -> bool:
        return bool(self.mask >> k & 1)

    def __bool__(self) -> bool:
        return self.mask != 0

    def __len__(self) -> int:
        return self.mask.bit_count()

    def cells(self) -> Iterator[int]:
        mask = self.mask
        while mask:
            low = mask & -mask
            yield low.bit_length() - 1
            mask ^= low

    def _same_grid(self, other: "CellSet") -> None:
        if self.grid is not other.grid and self.grid != other.grid:
            raise ValidationError("cell sets live on different grids")

    def union(self, other: "CellSet") -> "CellSet":
        self._same_grid(other)
        return CellSet(self.grid, self.mask | other.mask)

    def intersection(self, other: "CellSet") -> "CellSet":
        self._same_grid(other)
        return CellSet(self.grid, self.mask & other.mask)

    def difference(self, other: "CellSet") -> "CellSet":
        self._same_grid(other)
        return CellSet(self.grid, self.mask & ~other.mask)

    def issubset(self, other: "CellSet") -> bool:
        self._same_grid(other)
        return self.mask & ~other.mask == 0

    def complement(self) -> "CellSet":
        return CellSet(self.grid, ~self.mask & (1 << self.grid.ncells) - 1)

    def boundary_edges(self) -> Iterator[Edge]:
        """Edges with exactly one side in the set (grid-box edges included)."""
        for k in self.cells():
            for edge in self.grid.cell_edges(k):
                a, b = self.grid.edge_cells(edge)
                other = b if a == k else a
                if other is None or other not in self:
                    yield edge

    def bounding_box(self) -> tuple[Fraction, Fraction, Fraction, Fraction] | None:
        if not self:
            return None
        g = self.grid
        is_, js = zip(*(g.cell_ij(k) for k in self.cells()))
        return (g.xs[min(is_)], g.ys[min(js)], g.xs[max(is_) + 1], g.ys[max(js) + 1])


@dataclass(frozen=True)
class Signature:
    """Plus/minus labeling of boundary edges; the two classes are disjoint."""

    plus: frozenset[Edge]
    minus: frozenset[Edge]

    def __post_init__(self):
        if self.plus & self.minus:
            raise ValidationError("plus and minus edge sets overlap")


EMPTY_SIGNATURE = Signature(frozenset(), frozenset())


@dataclass(frozen=True)
class PCRFunction:
    """A rational value per grid cell (piecewise constant on rectangles)."""

    grid: Grid
    values: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", as_rational_seq(self.values))
        if len(self.values) != self.grid.ncells:
            raise ValidationError(
                f"expected {self.grid.ncells} cell values, got {len(self.values)}"
            )

    @classmethod
    def constant(cls, grid: Grid, value) -> "PCRFunction":
        return cls(grid, (value,) * grid.ncells)

    @classmethod
    def from_partition(cls, members, values) -> "PCRFunction":
        """Inverse of level_partition: assemble a function from (CellSet, value) pairs."""
        members = list(members)
        if not members:
            raise ValidationError("empty partition")
        grid = members[0].grid
        cell_values: list[Fraction | None] = [None] * grid.ncells
        for member, value in zip(members, values):
            for k in member.cells():
                if cell_values[k] is not None:
                    raise ValidationError("partition members overlap")
                cell_values[k] = value
        if any(v is None for v in cell_values):
            raise ValidationError("partition does not cover the grid")
        return cls(grid, tuple(cell_values))

    def value_range(self) -> tuple[Fraction, Fraction]:
        return min(self.values), max(self.values)

    def mean(self) -> Fraction:
        g = self.grid
        total = sum((self.values[k] * g.cell_area(k) for k in range(g.ncells)), ZERO)
        area = (g.xs[-1] - g.xs[0]) * (g.ys[-1] - g.ys[0])
        return total / area

    def integral(self, over: CellSet | None = None) -> Fraction:
        cells = over.cells() if over is not None else range(self.grid.ncells)
        return sum((self.values[k] * self.grid.cell_area(k) for k in cells), ZERO)


def area(cellset: CellSet) -> Fraction:
    return sum((cellset.grid.cell_area(k) for k in cellset.cells()), ZERO)


def interior_perimeter(subset: CellSet, region: CellSet) -> Fraction:
    """Total length of edges separating subset from region minus subset.

    Edges on the boundary of the region are excluded; this is the relative
    l1 perimeter of the subset inside the region's interior.
    """
    if not subset.issubset(region):
        raise ValidationError("subset must be contained in the region")
    grid = subset.grid
    total = ZERO
    for k in subset.cells():
        for other, edge in grid.neighbors(k):
            if other in region and other not in subset:
                total += grid.edge_length(edge)
    return total


def boundary_overlap(cellset: CellSet, edges: Iterable[Edge]) -> Fraction:
    """Total length of the set's boundary edges that lie in the given edge set."""
    edges = frozenset(edges)
    grid = cellset.grid
    return sum(
        (grid.edge_length(e) for e in cellset.boundary_edges() if e in edges), ZERO
    )


def total_length(grid: Grid, edges: Iterable[Edge]) -> Fraction:
    return sum((grid.edge_length(e) for e in edges), ZERO)


def boundary_between(a: CellSet, b: CellSet) -> frozenset[Edge]:
    """Edges with one side in a and the other in b (interior edges only)."""
    a._same_grid(b)
    grid = a.grid
    out = set()
    for k in a.cells():
        for other, edge in grid.neighbors(k):
            if other in b:
                out.add(edge)
    return frozenset(out)


def box_edges_of(cellset: CellSet) -> frozenset[Edge]:
    """Boundary edges of the set lying on the grid's bounding rectangle."""
    grid = cellset.grid
    out = set()
    for k in cellset.cells():
        for edge in grid.cell_edges(k):
            a, b = grid.edge_cells(edge)
            if a is None or b is None:
                out.add(edge)
    return frozenset(out)


def level_partition(w: PCRFunction) -> list[tuple[Fraction, CellSet]]:
    """Maximal cell sets of equal value, ordered by decreasing value.

    Members are level sets, not connected components: cells sharing a value
    form one member even when disconnected.
    """
    by_value: dict[Fraction, int] = {}
    for k, v in enumerate(w.values):
        by_value[v] = by_value.get(v, 0) | 1 << k
    return [
        (v, CellSet(w.grid, m)) for v, m in sorted(by_value.items(), reverse=True)
    ]


def _neighbor_value(w: PCRFunction, k: int, edge: Edge, plane: bool) -> Fraction | None:
    """Value across an edge from cell k; None means a neutral outer boundary."""
    a, b = w.grid.edge_cells(edge)
    other = b if a == k else a
    if other is not None:
        return w.values[other]
    return ZERO if plane else None


def induced_signature(
    w: PCRFunction, mode: str = "bounded"
) -> list[tuple[Fraction, CellSet, Signature]]:
    """The signature each level set inherits from its strictly lower/higher neighbors.

    Plus edges face strictly lower values, minus edges strictly higher ones.
    In bounded mode the outer grid boundary is neutral (Neumann); in plane
    mode the plane outside the grid counts as a neighbor of value 0.
    """
    plane = _check_mode(mode) == "plane"
    out = []
    for value, member in level_partition(w):
        plus: set[Edge] = set()
        minus: set[Edge] = set()
        for k in member.cells():
            for edge in w.grid.cell_edges(k):
                a, b = w.grid.edge_cells(edge)
                other = b if a == k else a
                if other is not None and other in member:
                    continue
                nv = _neighbor_value(w, k, edge, plane)
                if nv is None or nv == value:
                    continue
                (plus if nv < value else minus).add(edge)
        out.append((value, member, Signature(frozenset(plus), frozenset(minus))))
    return out


def adjacency(members: Iterable[CellSet]) -> list[tuple[int, int, Fraction]]:
    """Pairs of members with strictly positive shared boundary length.

    Corner-only contact has zero length and never appears.  Members must be
    pairwise disjoint; indices refer to the input order.
    """
    members = list(members)
    if not members:
        return []
    grid = members[0].grid
    owner: dict[int, int] = {}
    for idx, member in enumerate(members):
        for k in member.cells():
            if k in owner:
                raise ValidationError("partition members overlap")
            owner[k] = idx
    shared: dict[tuple[int, int], Fraction] = {}
    for edge in grid.interior_edges():
        a, b = grid.edge_cells(edge)
        ia, ib = owner.get(a), owner.get(b)
        if ia is None or ib is None or ia == ib:
            continue
        key = (min(ia, ib), max(ia, ib))
        shared[key] = shared.get(key, ZERO) + grid.edge_length(edge)
    return [(a, b, length) for (a, b), length in sorted(shared.items())]


def minimal_grid(w: PCRFunction) -> Grid:
    """Drop grid lines across which the function never jumps (outer box kept)."""
    g = w.grid
    keep_x = [g.xs[0], g.xs[-1]]
    for i in range(1, g.nx):
        for j in range(g.ny):
            if w.values[g.cell_index(i - 1, j)] != w.values[g.cell_index(i, j)]:
                keep_x.append(g.xs[i])
                break
    keep_y = [g.ys[0], g.ys[-1]]
    for j in range(1, g.ny):
        for i in range(g.nx):
            if w.values[g.cell_index(i, j - 1)] != w.values[g.cell_index(i, j)]:
                keep_y.append(g.ys[j])
                break
    return Grid(tuple(sorted(set(keep_x))), tuple(sorted(set(keep_y))))


def support_box(w: PCRFunction) -> tuple[Fraction, Fraction, Fraction, Fraction] | None:
    """Bounding box of the nonzero cells, or None for the zero function."""
    nonzero = CellSet.from_cells(
        w.grid, (k for k in range(w.grid.ncells) if w.values[k] != 0)
    )
    return nonzero.bounding_box()


def _check_mode(mode: str) -> str:
    if mode not in ("bounded", "plane"):
        raise ValidationError(f"mode must be 'bounded' or 'plane', got {mode!r}")
    return mode
