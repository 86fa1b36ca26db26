"""Directed multigraphs, the edge-list format, and the vertex-splitting transform."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .errors import ParameterError, ParseError
from .field import PrimeField
from .linalg import FpMatrix

__all__ = [
    "Digraph",
    "TransformResult",
    "cap_parallel_edges",
    "closed_adjacency",
    "collapse_parallel_edges",
    "format_graph",
    "parse_graph",
    "random_digraph",
    "transform_for_kapc",
]


@dataclass(frozen=True)
class Digraph:
    """Directed multigraph on vertices ``0..n-1`` without self-loops.

    Edge ids are positions in ``edges``; parallel edges are repeated pairs.
    """

    n: int
    edges: tuple[tuple[int, int], ...]
    out_edges: tuple[tuple[int, ...], ...] = field(init=False, repr=False, compare=False)
    in_edges: tuple[tuple[int, ...], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.n < 0:
            raise ParameterError(f"vertex count must be non-negative, got {self.n}")
        edges = tuple((int(u), int(v)) for u, v in self.edges)
        outs: list[list[int]] = [[] for _ in range(self.n)]
        ins: list[list[int]] = [[] for _ in range(self.n)]
        for eid, (u, v) in enumerate(edges):
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ParameterError(f"edge {eid} = ({u}, {v}) has an endpoint outside [0, {self.n})")
            if u == v:
                raise ParameterError(f"edge {eid} is a self-loop at {u}")
            outs[u].append(eid)
            ins[v].append(eid)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "out_edges", tuple(map(tuple, outs)))
        object.__setattr__(self, "in_edges", tuple(map(tuple, ins)))

    @property
    def m(self) -> int:
        return len(self.edges)

    def tail(self, e: int) -> int:
        return self.edges[e][0]

    def head(self, e: int) -> int:
        return self.edges[e][1]

    def out_neighbors(self, v: int) -> set[int]:
        return {self.edges[e][1] for e in self.out_edges[v]}

    def in_neighbors(self, v: int) -> set[int]:
        return {self.edges[e][0] for e in self.in_edges[v]}

    def multiplicity(self) -> Counter:
        """Multiplicity of every ordered pair that carries at least one edge."""
        return Counter(self.edges)

    def edge_set(self) -> frozenset[tuple[int, int]]:
        return frozenset(self.edges)


def parse_graph(text: str) -> Digraph:
    """Parse the ``n m`` header plus ``m`` lines of ``u v``; ``#`` lines are comments."""
    header = None
    edges: list[tuple[int, int]] = []
    expected = 0
    last_line = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        last_line = lineno
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ParseError(f"expected two integers, got {raw!r}", lineno)
        try:
            a, b = int(parts[0]), int(parts[1])
        except ValueError:
            raise ParseError(f"non-integer field in {raw!r}", lineno) from None
        if header is None:
            if a < 0 or b < 0:
                raise ParseError("negative vertex or edge count", lineno)
            header = (a, b)
            expected = b
            continue
        n = header[0]
        if len(edges) == expected:
            raise ParseError(f"more than the declared {expected} edges", lineno)
        if not (0 <= a < n and 0 <= b < n):
            raise ParseError(f"vertex id out of range [0, {n})", lineno)
        if a == b:
            raise ParseError(f"self-loop at vertex {a}", lineno)
        edges.append((a, b))
    if header is None:
        raise ParseError("missing 'n m' header", max(last_line, 1))
    if len(edges) != expected:
        raise ParseError(f"declared {expected} edges but found {len(edges)}", max(last_line, 1))
    return Digraph(header[0], tuple(edges))


def format_graph(g: Digraph) -> str:
    lines = [f"{g.n} {g.m}"]
    lines.extend(f"{u} {v}" for u, v in g.edges)
    return "\n".join(lines) + "\n"


def cap_parallel_edges(g: Digraph, k: int) -> Digraph:
    """Keep the first ``k`` copies of every parallel edge, preserving order."""
    if k < 1:
        raise ParameterError(f"k must be positive, got {k}")
    seen: Counter = Counter()
    kept = []
    for uv in g.edges:
        if seen[uv] < k:
            seen[uv] += 1
            kept.append(uv)
    return Digraph(g.n, tuple(kept))


def collapse_parallel_edges(g: Digraph) -> tuple[Digraph, Counter]:
    """Simple graph with one copy of each edge, plus the original multiplicities."""
    mult = g.multiplicity()
    return Digraph(g.n, tuple(dict.fromkeys(g.edges))), mult


@dataclass(frozen=True)
class TransformResult:
    """Output of :func:`transform_for_kapc`.

    Vertex ``v`` keeps id ``v``; ``v_out`` is ``n + v`` and ``v_in`` is
    ``2n + v``.  Edge ids: ``k`` copies of ``v -> v_out`` for each ``v``, then
    ``k`` copies of ``v_in -> v`` for each ``v``, then the rewritten original
    edges ``u_out -> v_in`` in input order.
    """

    new_graph: Digraph
    n_original: int
    k: int

    def original_vertex(self, v: int) -> int:
        return v

    def out_vertex(self, v: int) -> int:
        return self.n_original + v

    def in_vertex(self, v: int) -> int:
        return 2 * self.n_original + v

    def out_edge_block(self, s: int) -> range:
        return range(s * self.k, (s + 1) * self.k)

    def in_edge_block(self, t: int) -> range:
        base = self.n_original * self.k
        return range(base + t * self.k, base + (t + 1) * self.k)


def transform_for_kapc(g: Digraph, k: int) -> TransformResult:
    if k < 1:
        raise ParameterError(f"k must be positive, got {k}")
    n = g.n
    edges: list[tuple[int, int]] = []
    for v in range(n):
        edges.extend([(v, n + v)] * k)
    for v in range(n):
        edges.extend([(2 * n + v, v)] * k)
    edges.extend((n + u, 2 * n + v) for u, v in g.edges)
    return TransformResult(Digraph(3 * n, tuple(edges)), n, k)


def closed_adjacency(g: Digraph, field: PrimeField | None = None) -> FpMatrix:
    """0/1 matrix with ones on the diagonal and wherever an edge exists."""
    a = np.eye(g.n, dtype=np.uint64)
    if g.m:
        uv = np.asarray(g.edges, dtype=np.int64)
        a[uv[:, 0], uv[:, 1]] = 1
    return FpMatrix._wrap(a, field) if field is not None else FpMatrix(a)


def random_digraph(
    rng: np.random.Generator,
    n: int,
    m: int,
    *,
    simple: bool = False,
) -> Digraph:
    """Uniformly placed random edges; with ``simple`` no pair repeats.

    ``m`` is clipped to ``n(n-1)`` when ``simple`` is set.
    """
    if n < 2:
        return Digraph(n, ())
    if simple:
        pairs = [(u, v) for u in range(n) for v in range(n) if u != v]
        m = min(m, len(pairs))
        pick = rng.choice(len(pairs), size=m, replace=False)
        return Digraph(n, tuple(pairs[i] for i in pick))
    tails = rng.integers(0, n, size=m)
    shift = rng.integers(1, n, size=m)
    heads = (tails + shift) % n
    return Digraph(n, tuple(zip(tails.tolist(), heads.tolist())))
