"""k-bounded all-pairs edge connectivity through low-rank flow-vector encoding.

After the vertex-splitting transform every original vertex has exactly ``k``
out-edges and ``k`` in-edges.  The random transfer matrix over edges is built
as a product ``K = L R`` of thin factors (``L`` is m_new x k*n_new), so the
``m_new x m_new`` inverse ``(I - K)^-1`` is never formed: only the
``k*n_new``-square ``(I - R L)^-1`` is inverted.  The answer for a pair is the
rank of a ``k x k`` block of

    M = L~ (I - R L)^-1 R~,

where ``L~`` stacks the rows of ``L`` for each source's out-edges and ``R~``
the columns of ``R`` for each target's in-edges.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

import numpy as np

from ._kernels import U64
from .errors import EncodingFailure, ParameterError, SingularError
from .field import PrimeField, default_field
from .graph import Digraph, TransformResult, cap_parallel_edges, transform_for_kapc
from .linalg import FpMatrix, _rank_python, bounded_rank, inverse
from .results import DIAGONAL, ConnectivityMatrix
from .sampling import MAX_DRAWS, DrawStats, check_trials, draw_until_valid, majority, trial_rng

__all__ = [
    "KapcEncoding",
    "blockwise_RL",
    "build_random_factors",
    "encode",
    "query",
    "solve_all_pairs",
]


@dataclass(frozen=True, eq=False)
class KapcEncoding:
    """One random encoding of a graph for edge connectivities.

    ``x[e, i]`` is the single entry of row ``e`` of ``L`` in layer ``i`` (column
    ``i * n_new + head(e)``); ``y[f, i]`` is the entry of column ``f`` of ``R``
    in layer ``i`` (row ``i * n_new + tail(f)``).
    """

    k: int
    transform: TransformResult
    x: np.ndarray
    y: np.ndarray
    core_inverse: FpMatrix
    M: FpMatrix
    field: PrimeField

    @property
    def n(self) -> int:
        return self.transform.n_original

    @property
    def L(self) -> FpMatrix:
        return _left_factor(self.transform, self.x, self.field)

    @property
    def R(self) -> FpMatrix:
        return _right_factor(self.transform, self.y, self.field)

    def out_block_index(self, s: int) -> range:
        return range(s * self.k, (s + 1) * self.k)

    def in_block_index(self, t: int) -> range:
        return range(t * self.k, (t + 1) * self.k)

    def block(self, s: int, t: int) -> FpMatrix:
        k = self.k
        return FpMatrix._wrap(self.M.data[s * k:(s + 1) * k, t * k:(t + 1) * k], self.field)


def _left_factor(tr: TransformResult, x: np.ndarray, field: PrimeField) -> FpMatrix:
    g = tr.new_graph
    k = x.shape[1]
    out = np.zeros((g.m, k * g.n), dtype=U64)
    if g.m:
        heads = np.fromiter((v for _, v in g.edges), dtype=np.int64, count=g.m)
        for i in range(k):
            out[np.arange(g.m), i * g.n + heads] = x[:, i]
    return FpMatrix._wrap(out, field)


def _right_factor(tr: TransformResult, y: np.ndarray, field: PrimeField) -> FpMatrix:
    g = tr.new_graph
    k = y.shape[1]
    out = np.zeros((k * g.n, g.m), dtype=U64)
    if g.m:
        tails = np.fromiter((u for u, _ in g.edges), dtype=np.int64, count=g.m)
        for i in range(k):
            out[i * g.n + tails, np.arange(g.m)] = y[:, i]
    return FpMatrix._wrap(out, field)


def _draw_weights(tr: TransformResult, k: int, rng: np.random.Generator, field: PrimeField):
    m_new = tr.new_graph.m
    x = field.random_array(rng, (m_new, k))
    y = field.random_array(rng, (m_new, k))
    return x, y


def build_random_factors(
    transform: TransformResult,
    k: int,
    rng: np.random.Generator,
    field: PrimeField | None = None,
) -> tuple[FpMatrix, FpMatrix]:
    """Dense ``(L, R)`` with uniform entries on their structural support."""
    field = field or default_field()
    x, y = _draw_weights(transform, k, rng, field)
    return _left_factor(transform, x, field), _right_factor(transform, y, field)


def _parallel_layers(g: Digraph) -> list[np.ndarray]:
    """Split edge ids so that no layer holds two edges with the same endpoints."""
    seen: Counter = Counter()
    layers: list[list[int]] = []
    for e, uv in enumerate(g.edges):
        depth = seen[uv]
        seen[uv] += 1
        if depth == len(layers):
            layers.append([])
        layers[depth].append(e)
    return [np.asarray(layer, dtype=np.int64) for layer in layers]


def _blockwise_product(tr: TransformResult, x: np.ndarray, y: np.ndarray, field: PrimeField) -> np.ndarray:
    # (R_i L_j)[u, v] = sum over edges e from u to v of y[e, i] * x[e, j]
    g = tr.new_graph
    k = x.shape[1]
    size = k * g.n
    out = np.zeros((size, size), dtype=U64)
    if not g.m:
        return out
    ops = field.ops
    uv = np.asarray(g.edges, dtype=np.int64)
    layer_ids = np.arange(k, dtype=np.int64) * g.n
    for layer in _parallel_layers(g):
        local = ops.mul(y[layer][:, :, None], x[layer][:, None, :])  # (edges, i, j)
        rows = layer_ids[None, :, None] + uv[layer, 0][:, None, None]
        cols = layer_ids[None, None, :] + uv[layer, 1][:, None, None]
        rows, cols = np.broadcast_arrays(rows, cols)
        out[rows, cols] = ops.add(out[rows, cols], local)
    return out


def blockwise_RL(transform: TransformResult, L: FpMatrix, R: FpMatrix, k: int) -> FpMatrix:
    """``R @ L`` assembled from the k x k local products of each vertex pair's edges."""
    g = transform.new_graph
    if L.shape != (g.m, k * g.n) or R.shape != (k * g.n, g.m):
        raise ParameterError("factor shapes do not match the transformed graph")
    e = np.arange(g.m, dtype=np.int64)
    heads = np.asarray([v for _, v in g.edges], dtype=np.int64)
    tails = np.asarray([u for u, _ in g.edges], dtype=np.int64)
    x = np.stack([L.data[e, i * g.n + heads] for i in range(k)], axis=1) if g.m else np.zeros((0, k), U64)
    y = np.stack([R.data[i * g.n + tails, e] for i in range(k)], axis=1) if g.m else np.zeros((0, k), U64)
    return FpMatrix._wrap(_blockwise_product(transform, x, y, L.field), L.field)


def _decode_matrix(tr: TransformResult, x: np.ndarray, y: np.ndarray, core_inv: np.ndarray, field: PrimeField) -> np.ndarray:
    n, k = tr.n_original, tr.k
    n_new = tr.new_graph.n
    ops = field.ops
    layer = np.arange(k) * n_new
    # rows of (I - RL)^-1 that L~ touches: (layer i, s_out), grouped by s
    rows = (layer[None, :] + (n + np.arange(n))[:, None]).reshape(-1)
    # columns that R~ touches: (layer j, t_in), grouped by t
    cols = (layer[None, :] + (2 * n + np.arange(n))[:, None]).reshape(-1)
    core = core_inv[np.ix_(rows, cols)].reshape(n, k, n, k).transpose(0, 2, 1, 3)
    # L~ restricted to source s is x over its k out-edges; R~ likewise for targets
    left = x[: n * k].reshape(n, k, k)
    right = y[n * k: 2 * n * k].reshape(n, k, k).transpose(0, 2, 1)
    blocks = ops.matmul(ops.matmul(left[:, None], core), right[None, :])
    return blocks.transpose(0, 2, 1, 3).reshape(n * k, n * k)


def encode(
    g: Digraph,
    k: int,
    rng: np.random.Generator,
    field: PrimeField | None = None,
) -> KapcEncoding:
    """Draw one encoding; raises :class:`EncodingFailure` if ``I - R L`` is singular.

    Parallel edges beyond ``k`` copies should be capped beforehand; they do
    not break correctness but inflate the factors.
    """
    if k < 1:
        raise ParameterError(f"k must be positive, got {k}")
    field = field or default_field()
    tr = transform_for_kapc(g, k)
    x, y = _draw_weights(tr, k, rng, field)
    rl = _blockwise_product(tr, x, y, field)
    system = field.ops.sub(np.eye(rl.shape[0], dtype=U64), rl)
    try:
        core_inv = inverse(FpMatrix._wrap(system, field))
    except SingularError as exc:
        raise EncodingFailure(f"I - RL is singular (rank {exc.rank} of {rl.shape[0]})") from exc
    m = _decode_matrix(tr, x, y, core_inv.data, field)
    return KapcEncoding(k, tr, x, y, core_inv, FpMatrix._wrap(m, field), field)


def query(enc: KapcEncoding, s: int, t: int) -> int:
    """``min(k, lambda(s, t))`` read off as the rank of the (s, t) block of M."""
    if s == t:
        raise ParameterError("query needs distinct vertices")
    if not (0 <= s < enc.n and 0 <= t < enc.n):
        raise ParameterError(f"vertex out of range [0, {enc.n})")
    return bounded_rank(enc.block(s, t), enc.k)


def decode_all(enc: KapcEncoding) -> np.ndarray:
    n, k, p = enc.n, enc.k, enc.field.p
    blocks = enc.M.data.reshape(n, k, n, k).transpose(0, 2, 1, 3).tolist()
    out = np.full((n, n), DIAGONAL, dtype=np.int64)
    for s in range(n):
        row = blocks[s]
        for t in range(n):
            if s != t:
                out[s, t] = _rank_python(row[t], p, k)
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
    """``min(k, lambda(s, t))`` for every ordered pair, voting over ``trials`` encodings."""
    if k < 1:
        raise ParameterError(f"k must be positive, got {k}")
    check_trials(trials)
    field = field or default_field()
    capped = cap_parallel_edges(g, k)
    tables = []
    for trial in range(trials):
        enc = draw_until_valid(
            lambda rng: encode(capped, k, rng, field), trial_rng(seed, trial), max_draws, stats
        )
        tables.append(decode_all(enc))
    return ConnectivityMatrix(k, majority(tables))


# -- diagnostics: quantities the fast path never materialises -----------------


def transfer_matrix(enc: KapcEncoding) -> FpMatrix:
    """The m_new x m_new edge transfer matrix ``K = L R``."""
    return enc.L @ enc.R


def source_matrix(enc: KapcEncoding, s: int) -> FpMatrix:
    """``H_s``: unit vectors placed on the out-edges of source ``s``."""
    m_new = enc.transform.new_graph.m
    h = np.zeros((enc.k, m_new), dtype=U64)
    h[np.arange(enc.k), list(enc.transform.out_edge_block(s))] = 1
    return FpMatrix._wrap(h, enc.field)


def flow_vectors(enc: KapcEncoding, s: int) -> FpMatrix:
    """Flow vectors ``F = H_s (I - K)^-1`` for source ``s``, one column per edge.

    Uses ``(I - LR)^-1 = I + L (I - RL)^-1 R`` so only the small inverse is needed.
    """
    h = source_matrix(enc, s)
    out_rows = FpMatrix._wrap(enc.L.data[list(enc.transform.out_edge_block(s))], enc.field)
    return h + out_rows @ enc.core_inverse @ enc.R
