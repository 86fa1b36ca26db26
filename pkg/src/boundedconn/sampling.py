"""Seed derivation, bounded re-draws and per-pair voting across trials."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, TypeVar

import numpy as np

from .errors import EncodingExhausted, EncodingFailure, ParameterError

T = TypeVar("T")

MAX_DRAWS = 20


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    """Independent stream for one trial, derived from the master seed by counter."""
    if seed < 0:
        raise ParameterError(f"seed must be non-negative, got {seed}")
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(trial,)))


def check_trials(trials: int) -> None:
    if trials < 1 or trials % 2 == 0:
        raise ParameterError(f"trials must be an odd positive integer, got {trials}")


@dataclass
class DrawStats:
    """Counts random encodings attempted and how many were degenerate."""

    draws: int = 0
    failures: int = 0

    @property
    def failure_rate(self) -> float:
        return self.failures / self.draws if self.draws else 0.0


def draw_until_valid(
    encode: Callable[[np.random.Generator], T],
    rng: np.random.Generator,
    max_draws: int = MAX_DRAWS,
    stats: DrawStats | None = None,
) -> T:
    """Call ``encode(rng)`` until it succeeds, at most ``max_draws`` times."""
    for _ in range(max_draws):
        if stats is not None:
            stats.draws += 1
        try:
            return encode(rng)
        except EncodingFailure:
            if stats is not None:
                stats.failures += 1
    raise EncodingExhausted(f"all {max_draws} random encodings were singular")


def majority(tables: list[np.ndarray]) -> np.ndarray:
    """Per-entry median of an odd number of integer tables.

    The median equals the majority value wherever one value holds more than
    half of the votes.
    """
    if len(tables) == 1:
        return tables[0]
    stacked = np.stack(tables)
    return np.sort(stacked, axis=0)[len(tables) // 2]
