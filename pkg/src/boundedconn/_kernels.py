"""Vectorised arithmetic modulo a word-sized prime on ``uint64`` arrays.

Every array handled here holds canonical residues in ``[0, p)`` with
``p < 2**63``.  Products are formed exactly: elementwise products go through a
128-bit emulation built from 32-bit limbs, and matrix products split both
operands into narrow limbs so that float64 BLAS sums stay below ``2**53`` and
are therefore exact.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

U64 = np.uint64
MAX_MODULUS = 1 << 63
MERSENNE_61 = (1 << 61) - 1

_M32 = U64(0xFFFFFFFF)
_S32 = U64(32)
_FLOAT_EXACT_BITS = 53


def as_residues(values, p: int) -> np.ndarray:
    """Coerce integer-like data to a canonical ``uint64`` residue array."""
    arr = np.asarray(values)
    if arr.dtype == object or arr.dtype.kind not in "iub":
        arr = np.array([int(v) % p for v in arr.reshape(-1).tolist()], dtype=U64).reshape(arr.shape)
        return arr
    if arr.dtype.kind == "i":
        arr = np.mod(arr.astype(np.int64), np.int64(p) if p < MAX_MODULUS else p)
        return arr.astype(U64)
    arr = arr.astype(U64)
    return np.mod(arr, U64(p))


def _mul_wide(a: np.ndarray, b: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Return the high and low 64-bit words of ``a * b``."""
    a0 = a & _M32
    a1 = a >> _S32
    b0 = b & _M32
    b1 = b >> _S32
    p00 = a0 * b0
    p01 = a0 * b1
    p10 = a1 * b0
    p11 = a1 * b1
    mid = (p00 >> _S32) + (p01 & _M32) + (p10 & _M32)
    lo = (p00 & _M32) | ((mid & _M32) << _S32)
    hi = p11 + (p01 >> _S32) + (p10 >> _S32) + (mid >> _S32)
    return hi, lo


class Reducer:
    """Modular kernels for one fixed prime ``p``."""

    def __init__(self, p: int):
        if not 2 <= p < MAX_MODULUS:
            raise ValueError(f"modulus {p} outside [2, 2**63)")
        self.p = p
        self.P = U64(p)
        if p < (1 << 32):
            self._mul = self._mul_small
        elif p == MERSENNE_61:
            self._mul = self._mul_mersenne61
        else:
            # Montgomery constants; p is an odd prime here.
            self._ninv = U64((-pow(p, -1, 1 << 64)) % (1 << 64))
            self._r2 = U64(pow(2, 128, p))
            self._mul = self._mul_montgomery

    # -- elementwise -----------------------------------------------------
    def _mul_small(self, a, b):
        return (a * b) % self.P

    def _mul_mersenne61(self, a, b):
        hi, lo = _mul_wide(a, b)
        # 2**64 = 8 * 2**61 == 8 (mod p); hi < 2**58 because a, b < 2**61.
        x = (lo & self.P) + (lo >> U64(61)) + (hi << U64(3))
        x = (x & self.P) + (x >> U64(61))
        return np.where(x >= self.P, x - self.P, x)

    def _redc(self, hi, lo):
        m = lo * self._ninv
        mhi, _ = _mul_wide(m, np.broadcast_to(self.P, m.shape))
        t = hi + mhi + (lo != 0).astype(U64)
        return np.where(t >= self.P, t - self.P, t)

    def _mul_montgomery(self, a, b):
        hi, lo = _mul_wide(a, b)
        x = self._redc(hi, lo)
        hi, lo = _mul_wide(x, np.broadcast_to(self._r2, x.shape))
        return self._redc(hi, lo)

    def mul(self, a, b) -> np.ndarray:
        a, b = np.broadcast_arrays(np.asarray(a, dtype=U64), np.asarray(b, dtype=U64))
        shape = a.shape
        out = self._mul(np.atleast_1d(a).astype(U64, copy=False), np.atleast_1d(b).astype(U64, copy=False))
        return out.reshape(shape)

    def add(self, a, b) -> np.ndarray:
        s = np.asarray(a, dtype=U64) + np.asarray(b, dtype=U64)
        return np.where(s >= self.P, s - self.P, s)

    def sub(self, a, b) -> np.ndarray:
        a = np.asarray(a, dtype=U64)
        b = np.asarray(b, dtype=U64)
        return np.where(a >= b, a - b, a + (self.P - b))

    def neg(self, a) -> np.ndarray:
        a = np.asarray(a, dtype=U64)
        return np.where(a == 0, a, self.P - a)

    # -- matrix product --------------------------------------------------
    def _limb_plan(self, inner: int) -> tuple[int, int]:
        """Pick (limb count, limb width) keeping limb dot products exact in float64."""
        bits = max(1, (self.p - 1).bit_length())
        inner = max(1, inner)
        for count in range(1, 65):
            width = -(-bits // count)
            # each diagonal sums at most `count` limb products of `inner` terms
            if count * inner * (1 << (2 * width)) < (1 << _FLOAT_EXACT_BITS):
                return count, width
        raise ValueError("inner dimension too large for exact limb products")

    def matmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Exact ``a @ b mod p``; broadcasts over leading dimensions like ``np.matmul``."""
        inner = a.shape[-1]
        if inner == 0:
            shape = np.broadcast_shapes(a.shape[:-2], b.shape[:-2]) + (a.shape[-2], b.shape[-1])
            return np.zeros(shape, dtype=U64)
        # bound the inner dimension so a single plan stays cheap
        chunk = 4096
        if inner > chunk:
            acc = None
            for lo in range(0, inner, chunk):
                part = self.matmul(a[..., lo:lo + chunk], b[..., lo:lo + chunk, :])
                acc = part if acc is None else self.add(acc, part)
            return acc
        count, width = self._limb_plan(inner)
        mask = U64((1 << width) - 1)
        a_limbs = [((a >> U64(width * i)) & mask).astype(np.float64) for i in range(count)]
        b_limbs = [((b >> U64(width * i)) & mask).astype(np.float64) for i in range(count)]
        result = None
        for d in range(2 * count - 1):
            diag = None
            for i in range(max(0, d - count + 1), min(d, count - 1) + 1):
                term = a_limbs[i] @ b_limbs[d - i]
                diag = term if diag is None else diag + term
            part = diag.astype(U64) % self.P
            shift = pow(2, width * d, self.p)
            if shift != 1:
                part = self.mul(part, U64(shift))
            result = part if result is None else self.add(result, part)
        return result


@lru_cache(maxsize=32)
def reducer(p: int) -> Reducer:
    return Reducer(p)
