"""Ground-truth connectivities by Edmonds-Karp max-flow.

These are the reference answers every algebraic result is checked against.
"""

from __future__ import annotations

from collections import deque

from .errors import ParameterError
from .graph import Digraph, collapse_parallel_edges
from .results import ConnectivityMatrix

__all__ = [
    "FlowNetwork",
    "all_pairs_oracle",
    "edge_connectivity",
    "vertex_connectivity",
]


class FlowNetwork:
    """Integer-capacity network with paired forward/backward residual arcs.

    Arc ``a`` and its reverse ``a ^ 1`` are stored together, so the flow on a
    forward arc is the residual capacity of its reverse.
    """

    def __init__(self, n: int):
        self.n = n
        self.adj: list[list[int]] = [[] for _ in range(n)]
        self.head: list[int] = []
        self.residual: list[int] = []
        self.capacity: list[int] = []

    def add_arc(self, u: int, v: int, cap: int) -> int:
        if cap < 0:
            raise ParameterError("capacities must be non-negative")
        a = len(self.head)
        self.head += [v, u]
        self.residual += [cap, 0]
        self.capacity += [cap, 0]
        self.adj[u].append(a)
        self.adj[v].append(a + 1)
        return a

    def tail(self, a: int) -> int:
        return self.head[a ^ 1]

    def flow(self, a: int) -> int:
        return self.capacity[a] - self.residual[a]

    def _bfs(self, s: int, t: int) -> list[int] | None:
        parent_arc = [-1] * self.n
        seen = [False] * self.n
        seen[s] = True
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for a in self.adj[u]:
                v = self.head[a]
                if not seen[v] and self.residual[a] > 0:
                    seen[v] = True
                    parent_arc[v] = a
                    if v == t:
                        return parent_arc
                    queue.append(v)
        return None

    def max_flow(self, s: int, t: int) -> int:
        total = 0
        while True:
            parent_arc = self._bfs(s, t)
            if parent_arc is None:
                return total
            push = None
            v = t
            while v != s:
                a = parent_arc[v]
                push = self.residual[a] if push is None else min(push, self.residual[a])
                v = self.tail(a)
            v = t
            while v != s:
                a = parent_arc[v]
                self.residual[a] -= push
                self.residual[a ^ 1] += push
                v = self.tail(a)
            total += push

    def reachable(self, s: int) -> set[int]:
        """Vertices reachable from ``s`` in the residual network."""
        seen = {s}
        stack = [s]
        while stack:
            u = stack.pop()
            for a in self.adj[u]:
                v = self.head[a]
                if v not in seen and self.residual[a] > 0:
                    seen.add(v)
                    stack.append(v)
        return seen

    def cut_capacity(self, side: set[int]) -> int:
        return sum(
            self.capacity[a]
            for a in range(0, len(self.head), 2)
            if self.tail(a) in side and self.head[a] not in side
        )

    def excess(self, v: int) -> int:
        """Inflow minus outflow at ``v`` (zero away from source and sink)."""
        inflow = sum(self.flow(a) for a in range(0, len(self.head), 2) if self.head[a] == v)
        outflow = sum(self.flow(a) for a in range(0, len(self.head), 2) if self.tail(a) == v)
        return inflow - outflow


def _check_pair(g: Digraph, s: int, t: int) -> None:
    if s == t:
        raise ParameterError("connectivity is defined for distinct vertices only")
    if not (0 <= s < g.n and 0 <= t < g.n):
        raise ParameterError(f"vertex out of range [0, {g.n})")


def edge_network(g: Digraph) -> FlowNetwork:
    net = FlowNetwork(g.n)
    for u, v in g.edges:
        net.add_arc(u, v, 1)
    return net


def edge_connectivity(g: Digraph, s: int, t: int) -> int:
    """Maximum number of edge-disjoint s-t paths (each parallel copy counts)."""
    _check_pair(g, s, t)
    return edge_network(g).max_flow(s, t)


def vertex_network(g: Digraph, s: int, t: int) -> tuple[FlowNetwork, int, int]:
    """Split network for a simple graph: ``w`` is w_in, ``n + w`` is w_out.

    Returns the network with its source (s_out) and sink (t_in).
    """
    n = g.n
    net = FlowNetwork(2 * n)
    for w in range(n):
        if w != s and w != t:
            net.add_arc(w, n + w, 1)
    for u, v in g.edges:
        net.add_arc(n + u, v, 1)
    return net, n + s, t


def vertex_connectivity(g: Digraph, s: int, t: int) -> int:
    """Maximum number of internally vertex-disjoint s-t paths.

    Parallel edges are collapsed first; each extra copy of a direct edge
    ``(s, t)`` adds one more path.
    """
    _check_pair(g, s, t)
    simple, mult = collapse_parallel_edges(g)
    net, source, sink = vertex_network(simple, s, t)
    return net.max_flow(source, sink) + max(mult.get((s, t), 0) - 1, 0)


def all_pairs_oracle(g: Digraph, k: int, mode: str = "edge") -> ConnectivityMatrix:
    if k < 1:
        raise ParameterError(f"k must be positive, got {k}")
    if mode == "edge":
        fn = edge_connectivity
    elif mode == "vertex":
        fn = vertex_connectivity
    else:
        raise ParameterError(f"mode must be 'edge' or 'vertex', got {mode!r}")
    return ConnectivityMatrix.from_pairs(g.n, k, lambda s, t: min(k, fn(g, s, t)))
