"""k-bounded all-pairs vertex connectivity.

A random matrix ``K`` supported on the edges is inverted once.  Each vertex
``u`` gets random vectors ``b_u`` and ``c_u`` of length ``k + 1``; for every
pair the ``(k+1) x (k+1)`` matrix

    F[s, t][i, j] = sum over u in N_out[s], v in N_in[t] of b_u[i] W[u, v] c_v[j]

with ``W = (I - K)^-1`` compresses the closed-neighbourhood block of ``W``
while keeping its rank up to ``k + 1``.  All these matrices come out of the
``(k+1)^2`` products ``D_ij = A P_i W Q_j A`` at once (``A`` is the
adjacency matrix with self-loops, ``P_i``/``Q_j`` are diagonal).  The right
factor is ``A`` itself: ``A[v, t] = 1`` exactly when ``v`` is in ``N_in[t]``.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

import numpy as np

from ._kernels import U64
from .errors import EncodingFailure, ParameterError, SingularError
from .field import PrimeField, default_field
from .graph import Digraph, closed_adjacency, collapse_parallel_edges
from .linalg import FpMatrix, _rank_python, bounded_rank, inverse, rank, submatrix
from .results import DIAGONAL, ConnectivityMatrix
from .sampling import MAX_DRAWS, DrawStats, check_trials, draw_until_valid, majority, trial_rng

__all__ = [
    "KapvcEncoding",
    "assemble_F",
    "build_k_matrix",
    "diagnostic_flow_rank",
    "encode",
    "query",
    "solve_all_pairs",
]


@dataclass(frozen=True, eq=False)
class KapvcEncoding:
    """Encoding of a simple graph; ``D[i, j]`` is the n x n matrix ``D_ij``.

    ``b[u]`` and ``c[u]`` are the per-vertex vectors.  ``multiplicity`` keeps
    the parallel-edge counts of the input so direct-edge answers can be
    adjusted.
    """

    k: int
    graph: Digraph
    multiplicity: Counter
    K: FpMatrix
    W: FpMatrix
    b: np.ndarray
    c: np.ndarray
    D: np.ndarray
    field: PrimeField

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def edge_set(self) -> frozenset[tuple[int, int]]:
        return self.graph.edge_set()

    def D_ij(self, i: int, j: int) -> FpMatrix:
        return FpMatrix._wrap(self.D[i, j], self.field)


def build_k_matrix(g: Digraph, rng: np.random.Generator, field: PrimeField | None = None) -> FpMatrix:
    """Random matrix with a uniform entry on each edge (parallel copies collapsed)."""
    field = field or default_field()
    simple, _ = collapse_parallel_edges(g)
    k_mat = np.zeros((g.n, g.n), dtype=U64)
    if simple.m:
        uv = np.asarray(simple.edges, dtype=np.int64)
        k_mat[uv[:, 0], uv[:, 1]] = field.random_array(rng, simple.m)
    return FpMatrix._wrap(k_mat, field)


def _invert_transfer(k_mat: FpMatrix) -> FpMatrix:
    n = k_mat.rows
    try:
        return inverse(FpMatrix.identity(n, k_mat.field) - k_mat)
    except SingularError as exc:
        raise EncodingFailure(f"I - K is singular (rank {exc.rank} of {n})") from exc


def _pair_products(adj: np.ndarray, w: np.ndarray, b: np.ndarray, c: np.ndarray, field: PrimeField) -> np.ndarray:
    ops = field.ops
    n, width = b.shape
    d = np.empty((width, width, n, n), dtype=U64)
    for i in range(width):
        # A P_i scales column u of A by b_u[i]
        left = ops.matmul(ops.mul(adj, b[:, i][None, :]), w)
        for j in range(width):
            d[i, j] = ops.matmul(ops.mul(left, c[:, j][None, :]), adj)
    return d


def encode(
    g: Digraph,
    k: int,
    rng: np.random.Generator,
    field: PrimeField | None = None,
    *,
    vectors: tuple[np.ndarray, np.ndarray] | None = None,
) -> KapvcEncoding:
    """Draw ``K``, invert ``I - K`` and form every ``D_ij``.

    ``vectors`` replaces the random ``(b, c)`` arrays (shape ``(n, k+1)`` each);
    it exists for tests that need a fixed pattern.
    """
    if k < 1:
        raise ParameterError(f"k must be positive, got {k}")
    field = field or default_field()
    simple, mult = collapse_parallel_edges(g)
    k_mat = build_k_matrix(simple, rng, field)
    w = _invert_transfer(k_mat)
    if vectors is None:
        b = field.random_array(rng, (g.n, k + 1))
        c = field.random_array(rng, (g.n, k + 1))
    else:
        b, c = (np.asarray(v, dtype=U64) % U64(field.p) for v in vectors)
        if b.shape != (g.n, k + 1) or c.shape != (g.n, k + 1):
            raise ParameterError(f"vectors must have shape ({g.n}, {k + 1})")
    adj = closed_adjacency(simple, field).data
    d = _pair_products(adj, w.data, b, c, field)
    return KapvcEncoding(k, simple, mult, k_mat, w, b, c, d, field)


def _check_pair(enc: KapvcEncoding, s: int, t: int) -> None:
    if s == t:
        raise ParameterError("query needs distinct vertices")
    if not (0 <= s < enc.n and 0 <= t < enc.n):
        raise ParameterError(f"vertex out of range [0, {enc.n})")


def assemble_F(enc: KapvcEncoding, s: int, t: int) -> FpMatrix:
    """``F[i, j] = D_ij[s, t]``."""
    _check_pair(enc, s, t)
    return FpMatrix._wrap(enc.D[:, :, s, t], enc.field)


def closed_out(g: Digraph, s: int) -> list[int]:
    return [s] + sorted(g.out_neighbors(s))


def closed_in(g: Digraph, t: int) -> list[int]:
    return [t] + sorted(g.in_neighbors(t))


def neighborhood_product(enc: KapvcEncoding, s: int, t: int) -> FpMatrix:
    """``B[:, N_out[s]] W[N_out[s], N_in[t]] C[N_in[t], :]`` computed directly."""
    _check_pair(enc, s, t)
    rows = closed_out(enc.graph, s)
    cols = closed_in(enc.graph, t)
    b_part = FpMatrix._wrap(enc.b[rows].T, enc.field)
    c_part = FpMatrix._wrap(enc.c[cols], enc.field)
    return b_part @ submatrix(enc.W, rows, cols) @ c_part


def _answer(r: int, k: int, direct_copies: int) -> int:
    if direct_copies:
        # the direct edge adds one to the rank; extra copies add one path each.
        # A zero rank here is a degenerate draw; report 0 rather than -1.
        return min(k, max(r - 1, 0) + direct_copies - 1)
    return min(k, r)


def query(enc: KapvcEncoding, s: int, t: int) -> int:
    """``min(k, nu(s, t))`` from the rank of ``F[s, t]``."""
    f = assemble_F(enc, s, t)
    return _answer(bounded_rank(f, enc.k + 1), enc.k, enc.multiplicity.get((s, t), 0))


def decode_all(enc: KapvcEncoding) -> np.ndarray:
    n, k, p = enc.n, enc.k, enc.field.p
    per_pair = enc.D.transpose(2, 3, 0, 1).tolist()
    out = np.full((n, n), DIAGONAL, dtype=np.int64)
    for s in range(n):
        row = per_pair[s]
        for t in range(n):
            if s != t:
                r = _rank_python(row[t], p, k + 1)
                out[s, t] = _answer(r, k, enc.multiplicity.get((s, t), 0))
    return out


def solve_all_pairs(
    g: Digraph,
    k: int,
    seed: int = 0,
    trials: int = 1,
    field: PrimeField | None = None,
    *,
    max_draws: int = MAX_DRAWS,
    stats: DrawStats | None = None,
) -> ConnectivityMatrix:
    """``min(k, nu(s, t))`` for every ordered pair, voting over ``trials`` encodings."""
    if k < 1:
        raise ParameterError(f"k must be positive, got {k}")
    check_trials(trials)
    field = field or default_field()
    tables = []
    for trial in range(trials):
        enc = draw_until_valid(lambda rng: encode(g, k, rng, field), trial_rng(seed, trial), max_draws, stats)
        tables.append(decode_all(enc))
    return ConnectivityMatrix(k, majority(tables))


def diagnostic_flow_rank(
    g: Digraph,
    s: int,
    t: int,
    rng: np.random.Generator,
    field: PrimeField | None = None,
) -> int:
    """Rank of ``(I - K)^-1[N_out[s], N_in[t]]`` for a fresh random ``K``.

    Expected to be ``nu(s, t) + 1`` when ``(s, t)`` is an edge and ``nu(s, t)``
    otherwise; only used to check the encoding against the oracle.
    """
    if s == t:
        raise ParameterError("needs distinct vertices")
    simple, _ = collapse_parallel_edges(g)
    w = _invert_transfer(build_k_matrix(simple, rng, field))
    return rank(submatrix(w, closed_out(simple, s), closed_in(simple, t)))


def vertex_source_matrix(g: Digraph, s: int, field: PrimeField | None = None) -> FpMatrix:
    """``H_s``: one unit row per vertex of ``N_out[s]``, placed in that vertex's column."""
    rows = closed_out(g, s)
    h = np.zeros((len(rows), g.n), dtype=U64)
    h[np.arange(len(rows)), rows] = 1
    return FpMatrix._wrap(h, field or default_field())


def vertex_flow_vectors(w: FpMatrix, g: Digraph, s: int) -> FpMatrix:
    """Flow vectors ``F = H_s (I - K)^-1`` given ``w = (I - K)^-1``."""
    return vertex_source_matrix(g, s, w.field) @ w
