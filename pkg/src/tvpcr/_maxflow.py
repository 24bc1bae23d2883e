"""Exact integer max-flow with residual reachability.

Capacities are Python ints.  Small instances go through scipy's C
implementation (int32-based; it overflows silently, so totals are guarded);
anything larger falls back to a pure-Python Dinic on arbitrary-precision
integers.  Both backends return identical cuts for identical inputs.
"""

from __future__ import annotations

from collections import deque

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_flow as _scipy_maximum_flow

# scipy's solver works on int32 internally; stay well clear of the edge.
_SCIPY_CAP_LIMIT = 2**30


class FlowResult:
    """Max-flow value plus the residual graph, for min-cut extraction."""

    def __init__(self, n: int, value: int, residual: list[list[tuple[int, int]]]):
        self.n = n
        self.value = value
        self._residual = residual

    def source_side_minimal(self, source: int) -> set[int]:
        """Nodes reachable from the source in the residual graph."""
        seen = {source}
        queue = deque([source])
        while queue:
            u = queue.popleft()
            for v, cap in self._residual[u]:
                if cap > 0 and v not in seen:
                    seen.add(v)
                    queue.append(v)
        return seen

    def source_side_maximal(self, sink: int) -> set[int]:
        """Complement of the nodes that can still reach the sink.

        This is the inclusion-largest minimum cut's source side.
        """
        reverse: list[list[int]] = [[] for _ in range(self.n)]
        for u in range(self.n):
            for v, cap in self._residual[u]:
                if cap > 0:
                    reverse[v].append(u)
        seen = {sink}
        queue = deque([sink])
        while queue:
            v = queue.popleft()
            for u in reverse[v]:
                if u not in seen:
                    seen.add(u)
                    queue.append(u)
        return set(range(self.n)) - seen


def max_flow(
    n: int, arcs: list[tuple[int, int, int]], source: int, sink: int, backend: str = "auto"
) -> FlowResult:
    """Maximum source->sink flow for directed integer-capacity arcs.

    Parallel arcs are merged.  backend is 'auto', 'scipy' or 'dinic'.
    """
    merged: dict[tuple[int, int], int] = {}
    for u, v, cap in arcs:
        if cap < 0:
            raise ValueError("negative capacity")
        if cap and u != v:
            merged[(u, v)] = merged.get((u, v), 0) + cap
    if backend == "auto":
        total = sum(merged.values())
        backend = "scipy" if total < _SCIPY_CAP_LIMIT else "dinic"
    if backend == "scipy":
        return _solve_scipy(n, merged, source, sink)
    if backend == "dinic":
        return _solve_dinic(n, merged, source, sink)
    raise ValueError(f"unknown backend {backend!r}")


def _residual_from_net_flow(n, merged, flow_of) -> list[list[tuple[int, int]]]:
    residual: list[list[tuple[int, int]]] = [[] for _ in range(n)]
    for (u, v), cap in merged.items():
        f = flow_of(u, v)
        if cap - f > 0:
            residual[u].append((v, cap - f))
        if f > 0:
            residual[v].append((u, f))
    return residual


def _solve_scipy(n, merged, source, sink) -> FlowResult:
    if not merged:
        return FlowResult(n, 0, [[] for _ in range(n)])
    rows = np.fromiter((u for u, _ in merged), dtype=np.int32, count=len(merged))
    cols = np.fromiter((v for _, v in merged), dtype=np.int32, count=len(merged))
    caps = np.fromiter(merged.values(), dtype=np.int32, count=len(merged))
    graph = csr_matrix((caps, (rows, cols)), shape=(n, n))
    result = _scipy_maximum_flow(graph, source, sink)
    flow = result.flow.tocoo()
    net = {(int(u), int(v)): int(f) for u, v, f in zip(flow.row, flow.col, flow.data)}
    residual = _residual_from_net_flow(n, merged, lambda u, v: net.get((u, v), 0))
    return FlowResult(n, int(result.flow_value), residual)


def _solve_dinic(n, merged, source, sink) -> FlowResult:
    # adjacency arrays: to[], cap[], paired reverse arc at index^1
    to: list[int] = []
    cap: list[int] = []
    adj: list[list[int]] = [[] for _ in range(n)]

    def add_arc(u, v, c):
        adj[u].append(len(to))
        to.append(v)
        cap.append(c)
        adj[v].append(len(to))
        to.append(u)
        cap.append(0)

    arc_ids = {}
    for (u, v), c in merged.items():
        arc_ids[(u, v)] = len(to)
        add_arc(u, v, c)

    INF = 1 << 200
    value = 0
    while True:
        level = [-1] * n
        level[source] = 0
        queue = deque([source])
        while queue:
            u = queue.popleft()
            for a in adj[u]:
                if cap[a] > 0 and level[to[a]] < 0:
                    level[to[a]] = level[u] + 1
                    queue.append(to[a])
        if level[sink] < 0:
            break
        iters = [0] * n
        # iterative blocking-flow DFS
        while True:
            path = []
            u = source
            pushed = 0
            while True:
                if u == sink:
                    bottleneck = min(cap[a] for a in path) if path else INF
                    for a in path:
                        cap[a] -= bottleneck
                        cap[a ^ 1] += bottleneck
                    value += bottleneck
                    pushed = bottleneck
                    break
                advanced = False
                while iters[u] < len(adj[u]):
                    a = adj[u][iters[u]]
                    if cap[a] > 0 and level[to[a]] == level[u] + 1:
                        path.append(a)
                        u = to[a]
                        advanced = True
                        break
                    iters[u] += 1
                if advanced:
                    continue
                level[u] = -1
                if not path:
                    break
                a = path.pop()
                u = to[a ^ 1]
                iters[u] += 1
            if pushed == 0 and not path and level[source] < 0:
                break
            if pushed == 0:
                break

    def flow_of(u, v):
        a = arc_ids[(u, v)]
        return merged[(u, v)] - cap[a]

    residual = _residual_from_net_flow(n, merged, flow_of)
    return FlowResult(n, value, residual)
