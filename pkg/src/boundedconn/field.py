"""Arithmetic in the prime field F_p."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import lru_cache

import numpy as np

from ._kernels import MAX_MODULUS, MERSENNE_61, Reducer, reducer
from .errors import FieldMismatchError, ParameterError

DEFAULT_PRIME = MERSENNE_61

__all__ = [
    "DEFAULT_PRIME",
    "FieldElement",
    "PrimeField",
    "add",
    "default_field",
    "inv",
    "mul",
    "neg",
    "random_element",
    "sub",
]


@lru_cache(maxsize=64)
def _is_prime(p: int) -> bool:
    from sympy import isprime  # deterministic below 2**64; imported lazily (slow import)

    return bool(isprime(p))


@dataclass(frozen=True)
class PrimeField:
    """The field F_p for a word-sized prime ``p`` (``2 <= p < 2**63``).

    Instances are immutable and cheap to share.  Scalar arithmetic goes
    through :class:`FieldElement`; matrices use the vectorised kernels exposed
    by :attr:`ops`.
    """

    p: int = DEFAULT_PRIME
    ops: Reducer = dc_field(init=False, repr=False, compare=False)

    def __post_init__(self):
        p = int(self.p)
        if not 2 <= p < MAX_MODULUS:
            raise ParameterError(f"modulus must satisfy 2 <= p < 2**63, got {p}")
        if not _is_prime(p):
            raise ParameterError(f"modulus {p} is not prime")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "ops", reducer(p))

    def __call__(self, value: int) -> FieldElement:
        return FieldElement(int(value) % self.p, self)

    @property
    def zero(self) -> FieldElement:
        return FieldElement(0, self)

    @property
    def one(self) -> FieldElement:
        return FieldElement(1, self)

    def random_element(self, rng: np.random.Generator) -> FieldElement:
        return FieldElement(int(rng.integers(0, self.p, dtype=np.uint64)), self)

    def random_array(self, rng: np.random.Generator, shape) -> np.ndarray:
        """Uniform residues of the given shape as a ``uint64`` array."""
        return rng.integers(0, self.p, size=shape, dtype=np.uint64)


@lru_cache(maxsize=1)
def default_field() -> PrimeField:
    return PrimeField(DEFAULT_PRIME)


@dataclass(frozen=True)
class FieldElement:
    value: int
    field: PrimeField

    def __post_init__(self):
        if not 0 <= self.value < self.field.p:
            raise ParameterError(f"{self.value} is not a canonical residue mod {self.field.p}")

    def _coerce(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.field.p != self.field.p:
                raise FieldMismatchError(f"operands live in F_{self.field.p} and F_{other.field.p}")
            return other.value
        if isinstance(other, (int, np.integer)):
            return int(other) % self.field.p
        return NotImplemented

    def _make(self, value: int) -> FieldElement:
        return FieldElement(value % self.field.p, self.field)

    def __add__(self, other):
        v = self._coerce(other)
        return NotImplemented if v is NotImplemented else self._make(self.value + v)

    __radd__ = __add__

    def __sub__(self, other):
        v = self._coerce(other)
        return NotImplemented if v is NotImplemented else self._make(self.value - v)

    def __rsub__(self, other):
        v = self._coerce(other)
        return NotImplemented if v is NotImplemented else self._make(v - self.value)

    def __mul__(self, other):
        v = self._coerce(other)
        return NotImplemented if v is NotImplemented else self._make(self.value * v)

    __rmul__ = __mul__

    def __neg__(self):
        return self._make(-self.value)

    def inverse(self) -> FieldElement:
        if self.value == 0:
            raise ZeroDivisionError("inverse of zero in F_p")
        return FieldElement(pow(self.value, -1, self.field.p), self.field)

    def __truediv__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return NotImplemented
        return self * self._make(v).inverse()

    def __int__(self):
        return self.value

    def __index__(self):
        return self.value

    def __repr__(self):
        return f"FieldElement({self.value} mod {self.field.p})"


def _check(a: FieldElement, b: FieldElement) -> None:
    if a.field.p != b.field.p:
        raise FieldMismatchError(f"operands live in F_{a.field.p} and F_{b.field.p}")


def add(a: FieldElement, b: FieldElement) -> FieldElement:
    _check(a, b)
    return a + b


def sub(a: FieldElement, b: FieldElement) -> FieldElement:
    _check(a, b)
    return a - b


def mul(a: FieldElement, b: FieldElement) -> FieldElement:
    _check(a, b)
    return a * b


def neg(a: FieldElement) -> FieldElement:
    return -a


def inv(a: FieldElement) -> FieldElement:
    """Multiplicative inverse; raises ``ZeroDivisionError`` for zero."""
    return a.inverse()


def random_element(rng: np.random.Generator, ctx: PrimeField) -> FieldElement:
    return ctx.random_element(rng)
