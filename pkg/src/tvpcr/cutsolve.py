"""Scalable exact ratio minimization: graph cuts plus Dinkelbach iteration.

The ratio's numerator minus lambda times area is a submodular set function
on the region's cells (unary charges plus nonnegative cut weights), so each
linearized subproblem is a minimum s-t cut.  Capacities are scaled to exact
integers before the flow solve; the maximal optimal set comes from residual
reachability toward the sink.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from ._maxflow import max_flow
from .energy import CheegerProblem, eval_J
from .exceptions import SolverAssertionError, ValidationError
from .geometry import ZERO, CellSet


@dataclass(frozen=True)
class CutInstance:
    """Linearization of a ratio problem at a fixed parameter value.

    For every subset E of the region's cells:
        energy(E) = numerator(E) - lam * area(E)
    with energy(empty) = 0.
    """

    problem: CheegerProblem
    lam: Fraction
    cells: tuple[int, ...]
    charges: tuple[Fraction, ...]
    pairs: tuple[tuple[int, int, Fraction], ...]  # local indices, weight > 0

    def energy(self, subset: CellSet) -> Fraction:
        local = {k: i for i, k in enumerate(self.cells)}
        chosen = set()
        for k in subset.cells():
            if k not in local:
                raise ValidationError("subset leaves the instance's region")
            chosen.add(local[k])
        total = sum((self.charges[i] for i in chosen), ZERO)
        for a, b, w in self.pairs:
            if (a in chosen) != (b in chosen):
                total += w
        return total


def build_cut_instance(problem: CheegerProblem, lam: Fraction) -> CutInstance:
    cells = tuple(problem.region.cells())
    grid = problem.grid
    charges = tuple(
        problem._unary[k] - lam * grid.cell_area(k) for k in cells
    )
    local = {k: i for i, k in enumerate(cells)}
    pairs = tuple(
        (local[a], local[b], w) for a, b, w in problem._interior_pairs
    )
    return CutInstance(problem, lam, cells, charges, pairs)


def min_cut(instance: CutInstance, backend: str = "auto") -> tuple[Fraction, CellSet]:
    """Exact minimum of the instance energy over all subsets, empty included.

    Returns the optimal energy and the inclusion-largest optimal set, read
    off the residual graph of a maximum flow.
    """
    m = len(instance.cells)
    grid = instance.problem.grid
    if m == 0:
        return ZERO, CellSet.empty(grid)
    denoms = [c.denominator for c in instance.charges]
    denoms += [w.denominator for _, _, w in instance.pairs]
    scale = math.lcm(*denoms)
    source, sink = m, m + 1
    arcs = []
    offset = 0  # sum of negative charges; energy = cut value + offset
    for i, charge in enumerate(instance.charges):
        c = int(charge * scale)
        if c > 0:
            arcs.append((i, sink, c))
        elif c < 0:
            arcs.append((source, i, -c))
            offset += c
    for a, b, w in instance.pairs:
        c = int(w * scale)
        arcs.append((a, b, c))
        arcs.append((b, a, c))
    result = max_flow(m + 2, arcs, source, sink, backend=backend)
    inside = result.source_side_maximal(sink)
    inside.discard(source)
    chosen = CellSet.from_cells(grid, (instance.cells[i] for i in inside))
    energy = Fraction(result.value + offset, scale)
    check = instance.energy(chosen)
    if check != energy:
        raise SolverAssertionError(
            f"cut energy mismatch: flow gives {energy}, recomputation {check}"
        )
    return energy, chosen


def dinkelbach_min_ratio(
    problem: CheegerProblem,
    backend: str = "auto",
    trace: list[Fraction] | None = None,
) -> tuple[Fraction, CellSet]:
    """Minimum ratio over nonempty subsets, with its maximal minimizer.

    Starts from the whole region's ratio; each cut with negative optimum
    yields a strictly better ratio, and the value set is finite, so the loop
    terminates with optimum exactly zero.
    """
    if not problem.region:
        raise ValidationError("cannot minimize over an empty region")
    lam = eval_J(problem, problem.region)
    iterate = problem.region
    while True:
        if trace is not None:
            trace.append(lam)
        energy, maximal = min_cut(build_cut_instance(problem, lam), backend=backend)
        if energy > 0:
            raise SolverAssertionError("cut optimum above zero despite empty set")
        if energy == 0:
            if not maximal:
                raise SolverAssertionError(
                    "maximal optimal set empty although the previous iterate "
                    "attains the optimal ratio"
                )
            if not iterate.issubset(maximal):
                raise SolverAssertionError("maximal optimal set lost a minimizer")
            return lam, maximal
        new_lam = eval_J(problem, maximal)
        if new_lam >= lam:
            raise SolverAssertionError("ratio iteration failed to decrease")
        lam, iterate = new_lam, maximal
