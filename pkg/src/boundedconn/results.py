"""The all-pairs answer table and its text format."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import ParseError

__all__ = ["ConnectivityMatrix", "DIAGONAL"]

DIAGONAL = -1


@dataclass(frozen=True, eq=False)
class ConnectivityMatrix:
    """``values[s, t]`` is the bounded connectivity for ``s != t``.

    The diagonal holds the sentinel :data:`DIAGONAL`; it is never a value.
    """

    k: int
    values: np.ndarray

    def __post_init__(self):
        vals = np.array(self.values, dtype=np.int64)
        if vals.ndim != 2 or vals.shape[0] != vals.shape[1]:
            raise ValueError(f"expected a square table, got shape {vals.shape}")
        np.fill_diagonal(vals, DIAGONAL)
        off = vals[~np.eye(vals.shape[0], dtype=bool)]
        if off.size and (off.min() < 0 or off.max() > self.k):
            raise ValueError(f"off-diagonal values must lie in [0, {self.k}]")
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_pairs(cls, n: int, k: int, value: Callable[[int, int], int]) -> ConnectivityMatrix:
        vals = np.full((n, n), DIAGONAL, dtype=np.int64)
        for s in range(n):
            for t in range(n):
                if s != t:
                    vals[s, t] = value(s, t)
        return cls(k, vals)

    @property
    def n(self) -> int:
        return self.values.shape[0]

    def __getitem__(self, pair: tuple[int, int]) -> int:
        s, t = pair
        if s == t:
            raise KeyError("the diagonal carries no value")
        return int(self.values[s, t])

    def __eq__(self, other):
        if not isinstance(other, ConnectivityMatrix):
            return NotImplemented
        return self.k == other.k and np.array_equal(self.values, other.values)

    __hash__ = None

    def mismatches(self, other: ConnectivityMatrix) -> list[tuple[int, int]]:
        """Ordered pairs on which the two tables disagree."""
        if self.n != other.n:
            raise ValueError("tables have different sizes")
        diff = np.argwhere(self.values != other.values)
        return [(int(s), int(t)) for s, t in diff]

    def format(self) -> str:
        """n lines of n tab-separated fields, ``-`` on the diagonal."""
        lines = []
        for s in range(self.n):
            row = ["-" if s == t else str(int(self.values[s, t])) for t in range(self.n)]
            lines.append("\t".join(row))
        return "".join(line + "\n" for line in lines)

    @classmethod
    def parse(cls, text: str, k: int) -> ConnectivityMatrix:
        rows = [line.split("\t") for line in text.splitlines() if line.strip()]
        n = len(rows)
        vals = np.full((n, n), DIAGONAL, dtype=np.int64)
        for s, row in enumerate(rows):
            if len(row) != n:
                raise ParseError(f"expected {n} fields, got {len(row)}", s + 1)
            for t, cell in enumerate(row):
                if s == t:
                    if cell != "-":
                        raise ParseError("diagonal must be '-'", s + 1)
                    continue
                try:
                    vals[s, t] = int(cell)
                except ValueError:
                    raise ParseError(f"bad value {cell!r}", s + 1) from None
        return cls(k, vals)
