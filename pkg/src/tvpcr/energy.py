"""The signed Cheeger-type ratio on cell subsets, and its enumeration oracle.

For a region F0 with disjoint plus/minus boundary edge sets and a cell
datum f, the ratio of a nonempty subset E of F0 is

    ( perim(E inside F0) + len(dE & plus) - len(dE & minus) - int_E f ) / area(E).

``open_edges`` mark boundary edges of the stored cell region across which F0
continues unbounded (plane-mode subproblems); for bounded candidate sets they
behave exactly like interior perimeter.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from fractions import Fraction
from functools import cached_property

from .exceptions import LatticeAssumptionError, ValidationError
from .geometry import ZERO, CellSet, Edge, PCRFunction
from ._maxflow import max_flow

DEFAULT_ENUMERATION_CAP = 20


@dataclass(frozen=True)
class CheegerProblem:
    region: CellSet
    plus: frozenset[Edge] = frozenset()
    minus: frozenset[Edge] = frozenset()
    datum: PCRFunction | None = None
    open_edges: frozenset[Edge] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "plus", frozenset(self.plus))
        object.__setattr__(self, "minus", frozenset(self.minus))
        object.__setattr__(self, "open_edges", frozenset(self.open_edges))
        sets = (self.plus, self.minus, self.open_edges)
        if self.plus & self.minus or (self.plus | self.minus) & self.open_edges:
            raise ValidationError("plus/minus/open edge sets must be disjoint")
        boundary = frozenset(self.region.boundary_edges())
        for edges in sets:
            if not edges <= boundary:
                raise ValidationError("labeled edges must lie on the region boundary")
        if self.datum is not None and self.datum.grid != self.region.grid:
            raise ValidationError("datum grid differs from region grid")

    @property
    def grid(self):
        return self.region.grid

    def swapped(self) -> "CheegerProblem":
        """Plus and minus exchanged, datum negated (the dual problem)."""
        datum = None
        if self.datum is not None:
            datum = PCRFunction(self.datum.grid, tuple(-v for v in self.datum.values))
        return replace(self, plus=self.minus, minus=self.plus, datum=datum)

    @cached_property
    def _unary(self) -> dict[int, Fraction]:
        """Per-cell numerator contribution from labeled/open edges and the datum."""
        grid = self.grid
        unary = {k: ZERO for k in self.region.cells()}
        for edges, sign in ((self.plus, 1), (self.minus, -1), (self.open_edges, 1)):
            for edge in edges:
                a, b = grid.edge_cells(edge)
                cell = a if (a is not None and a in self.region) else b
                unary[cell] += sign * grid.edge_length(edge)
        if self.datum is not None:
            for k in self.region.cells():
                unary[k] -= self.datum.values[k] * grid.cell_area(k)
        return unary

    @cached_property
    def _interior_pairs(self) -> tuple[tuple[int, int, Fraction], ...]:
        """Edges between two region cells, as (cell, cell, length)."""
        grid = self.grid
        pairs = []
        for k in self.region.cells():
            for other, edge in grid.neighbors(k):
                if other in self.region and k < other:
                    pairs.append((k, other, grid.edge_length(edge)))
        return tuple(pairs)

    def numerator(self, subset: CellSet) -> Fraction:
        if not subset.issubset(self.region):
            raise ValidationError("candidate set must lie inside the region")
        total = sum((self._unary[k] for k in subset.cells()), ZERO)
        for a, b, w in self._interior_pairs:
            if (a in subset) != (b in subset):
                total += w
        return total


def eval_J(problem: CheegerProblem, subset: CellSet) -> Fraction:
    """Exact value of the ratio on a nonempty subset of the region."""
    if not subset:
        raise ValidationError("the ratio requires a set of positive area")
    from .geometry import area

    return problem.numerator(subset) / area(subset)


def eval_J_check(problem: CheegerProblem, subset: CellSet) -> Fraction:
    """The companion maximization functional, via its defining sign-swap identity."""
    return -eval_J(problem.swapped(), subset)


@dataclass(frozen=True)
class BruteForceResult:
    value: Fraction
    minimizers: tuple[CellSet, ...]
    maximal: CellSet


def brute_force_min(
    problem: CheegerProblem, cap: int = DEFAULT_ENUMERATION_CAP
) -> BruteForceResult:
    """Global minimum of the ratio over all nonempty subsets, by enumeration.

    Intended as the small-instance adjudicator; the maximal minimizer is the
    union of all minimizers, which is verified to be a minimizer itself
    rather than assumed.
    """
    cells = list(problem.region.cells())
    m = len(cells)
    if m == 0:
        raise ValidationError("cannot minimize over an empty region")
    if m > cap:
        raise ValidationError(f"region has {m} cells, above the enumeration cap {cap}")
    grid = problem.grid
    local = {k: i for i, k in enumerate(cells)}

    denoms = [problem._unary[k].denominator for k in cells]
    denoms += [grid.cell_area(k).denominator for k in cells]
    denoms += [w.denominator for _, _, w in problem._interior_pairs]
    scale = math.lcm(*denoms) if denoms else 1

    unary = [int(problem._unary[k] * scale) for k in cells]
    areas = [int(grid.cell_area(k) * scale) for k in cells]
    nbrs: list[list[tuple[int, int]]] = [[] for _ in range(m)]
    wsum = [0] * m
    for a, b, w in problem._interior_pairs:
        ia, ib, iw = local[a], local[b], int(w * scale)
        nbrs[ia].append((ib, iw))
        nbrs[ib].append((ia, iw))
        wsum[ia] += iw
        wsum[ib] += iw

    size = 1 << m
    num = [0] * size
    ar = [0] * size
    for mask in range(1, size):
        low = mask & -mask
        c = low.bit_length() - 1
        rest = mask ^ low
        delta = unary[c] + wsum[c]
        for d, w in nbrs[c]:
            if rest >> d & 1:
                delta -= 2 * w
        num[mask] = num[rest] + delta
        ar[mask] = ar[rest] + areas[c]

    best_n, best_a = num[1], ar[1]
    for mask in range(2, size):
        if num[mask] * best_a < best_n * ar[mask]:
            best_n, best_a = num[mask], ar[mask]
    argmin = [
        mask for mask in range(1, size) if num[mask] * best_a == best_n * ar[mask]
    ]

    union = 0
    for mask in argmin:
        union |= mask
    if num[union] * best_a != best_n * ar[union]:
        raise LatticeAssumptionError(
            "union of minimizers is not a minimizer; maximal minimizer undefined"
        )

    def to_cellset(mask: int) -> CellSet:
        return CellSet.from_cells(grid, (cells[i] for i in range(m) if mask >> i & 1))

    return BruteForceResult(
        value=Fraction(best_n, best_a),
        minimizers=tuple(to_cellset(mask) for mask in argmin),
        maximal=to_cellset(union),
    )


def min_relative_perimeter(region: CellSet) -> Fraction:
    """Minimum interior perimeter over nonempty proper subsets (a global min cut)."""
    cells = list(region.cells())
    if len(cells) < 2:
        raise ValidationError("need at least two cells to cut")
    grid = region.grid
    local = {k: i for i, k in enumerate(cells)}
    pairs = []
    for k in cells:
        for other, edge in grid.neighbors(k):
            if other in region and k < other:
                pairs.append((local[k], local[other], grid.edge_length(edge)))
    if not pairs:
        return ZERO
    scale = math.lcm(*(w.denominator for _, _, w in pairs))
    arcs = []
    for a, b, w in pairs:
        c = int(w * scale)
        arcs.append((a, b, c))
        arcs.append((b, a, c))
    best = None
    for t in range(1, len(cells)):
        value = max_flow(len(cells), arcs, 0, t).value
        if best is None or value < best:
            best = value
        if best == 0:
            break
    return Fraction(best, scale)
