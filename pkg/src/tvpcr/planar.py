"""Embedding a compactly supported function into a margin-extended working grid.

Whole-plane problems are solved on the input grid surrounded by one ring of
margin cells whose width equals the larger side of the input box (doubled on
retry).  Candidate sets with negative ratio provably stay near the data, and
the solvers assert that nothing they select touches the margin ring.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .exceptions import SolverAssertionError, ValidationError
from .geometry import ZERO, CellSet, Grid, PCRFunction


class MarginExceeded(SolverAssertionError):
    """A selected set reached the outer margin ring; retry with a wider ring."""


@dataclass(frozen=True)
class PlaneEmbedding:
    base: Grid
    work: Grid
    margin: Fraction

    @property
    def ring(self) -> CellSet:
        """The margin cells (outermost ring of the working grid)."""
        g = self.work
        cells = [
            g.cell_index(i, j)
            for j in range(g.ny)
            for i in range(g.nx)
            if i == 0 or j == 0 or i == g.nx - 1 or j == g.ny - 1
        ]
        return CellSet.from_cells(g, cells)

    def extend(self, w: PCRFunction) -> PCRFunction:
        if w.grid != self.base:
            raise ValidationError("function lives on a different grid")
        g = self.work
        values = [ZERO] * g.ncells
        for j in range(self.base.ny):
            for i in range(self.base.nx):
                values[g.cell_index(i + 1, j + 1)] = w.values[
                    self.base.cell_index(i, j)
                ]
        return PCRFunction(g, tuple(values))

    def restrict(self, w: PCRFunction) -> PCRFunction:
        if w.grid != self.work:
            raise ValidationError("function lives on a different grid")
        values = tuple(
            w.values[self.work.cell_index(i + 1, j + 1)]
            for j in range(self.base.ny)
            for i in range(self.base.nx)
        )
        return PCRFunction(self.base, values)

    def base_cellset(self, cells: CellSet) -> CellSet:
        """Map a working-grid cell set with no margin cells back to the base grid."""
        if cells.intersection(self.ring):
            raise ValidationError("cell set touches the margin ring")
        g = self.work
        mapped = []
        for k in cells.cells():
            i, j = g.cell_ij(k)
            mapped.append(self.base.cell_index(i - 1, j - 1))
        return CellSet.from_cells(self.base, mapped)


def plane_embedding(base: Grid, factor: int = 1) -> PlaneEmbedding:
    width = base.xs[-1] - base.xs[0]
    height = base.ys[-1] - base.ys[0]
    margin = factor * max(width, height)
    xs = (base.xs[0] - margin, *base.xs, base.xs[-1] + margin)
    ys = (base.ys[0] - margin, *base.ys, base.ys[-1] + margin)
    return PlaneEmbedding(base, Grid(xs, ys), margin)


def require_nonnegative(w: PCRFunction) -> None:
    if any(v < 0 for v in w.values):
        raise ValidationError("plane mode requires nonnegative data")
