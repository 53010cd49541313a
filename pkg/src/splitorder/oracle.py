"""Brute-force reference arithmetic for cross-checking the fast path.

Everything here is dense, untruncated and deliberately naive: powers by
repeated multiplication, Delta via a literal f^p at precision 2, and
membership by scanning every cell of the box.  Nothing below RingSpec is
shared with the sparse or truncated code.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .polyring import Poly, RingSpec

MAX_CELLS = 30_000_000


class OracleTooLarge(RuntimeError):
    pass


class DensePoly:
    """Coefficients mod `modulus` on the full box prod(range(shape[i]))."""

    def __init__(self, arr: np.ndarray, p: int, e: int):
        self.arr = arr
        self.p = p
        self.e = e

    @property
    def modulus(self) -> int:
        return self.p**self.e

    @property
    def shape(self) -> tuple[int, ...]:
        return self.arr.shape

    @classmethod
    def from_poly(cls, f: Poly, shape: tuple[int, ...] | None = None) -> DensePoly:
        ring = f.ring
        if shape is None:
            shape = tuple(max([m[i] for m in f.terms] or [0]) + 1 for i in range(ring.nvars))
        _guard(shape)
        arr = np.zeros(shape, dtype=np.int64)
        for mono, c in f.terms.items():
            if any(a >= s for a, s in zip(mono, shape)):
                raise ValueError(f"monomial {mono} outside box {shape}")
            arr[mono] = c
        return cls(arr, ring.p, ring.e)

    def to_poly(self, ring: RingSpec) -> Poly:
        idx = np.nonzero(self.arr)
        terms = {tuple(int(a) for a in col): int(self.arr[col]) for col in zip(*idx)}
        return Poly(ring.with_precision(self.e), terms)

    def reduce(self, e: int) -> DensePoly:
        return DensePoly(self.arr % self.p**e, self.p, e)

    def is_zero(self) -> bool:
        return not self.arr.any()

    def __mul__(self, other: DensePoly) -> DensePoly:
        mod = self.modulus
        shape = tuple(a + b - 1 for a, b in zip(self.shape, other.shape))
        _guard(shape)
        out = np.zeros(shape, dtype=np.int64)
        small, big = (self, other) if np.count_nonzero(self.arr) <= np.count_nonzero(other.arr) else (other, self)
        for idx in zip(*np.nonzero(small.arr)):
            c = int(small.arr[idx])
            sl = tuple(slice(i, i + n) for i, n in zip(idx, big.shape))
            out[sl] = (out[sl] + c * big.arr) % mod
        return DensePoly(out, self.p, self.e)

    def __sub__(self, other: DensePoly) -> DensePoly:
        shape = tuple(max(a, b) for a, b in zip(self.shape, other.shape))
        out = np.zeros(shape, dtype=np.int64)
        out[tuple(slice(0, n) for n in self.shape)] += self.arr
        out[tuple(slice(0, n) for n in other.shape)] -= other.arr
        return DensePoly(out % self.modulus, self.p, self.e)

    def power(self, k: int) -> DensePoly:
        """Repeated multiplication, k times."""
        one = np.zeros((1,) * self.arr.ndim, dtype=np.int64)
        one[(0,) * self.arr.ndim] = 1
        out = DensePoly(one, self.p, self.e)
        for _ in range(k):
            out = out * self
        return out

    def frobenius(self) -> DensePoly:
        """x_i -> x_i^p on the dense array."""
        p = self.p
        shape = tuple((n - 1) * p + 1 for n in self.shape)
        _guard(shape)
        out = np.zeros(shape, dtype=np.int64)
        out[tuple(slice(None, None, p) for _ in shape)] = self.arr
        return DensePoly(out, p, self.e)


def _guard(shape):
    cells = 1
    for n in shape:
        cells *= n
    if cells > MAX_CELLS:
        raise OracleTooLarge(f"dense box {shape} has {cells} cells")


def _member(h: DensePoly, n: int) -> bool:
    bound = h.p**n
    mod_p = h.arr % h.p
    box = mod_p[tuple(slice(0, bound) for _ in h.shape)]
    return not box.any()


def oracle_member(h: Poly, n: int) -> bool:
    """h in m^{[p^n]}, by scanning every cell with all exponents < p^n."""
    return _member(DensePoly.from_poly(h), n)


def oracle_delta(f: Poly) -> DensePoly:
    """Delta(f) mod p from a literal f^p at precision 2."""
    p = f.ring.p
    F = DensePoly.from_poly(Poly(f.ring.with_precision(2), f.terms))
    diff = F.power(p) - F.frobenius()
    if (diff.arr % p).any():
        raise ArithmeticError("f^p - phi(f) not divisible by p")
    return DensePoly(diff.arr // p % p, p, 1)


class OraclePrefix(NamedTuple):
    s: tuple[int, ...]
    bounded: bool


def oracle_prefix(f: Poly, n_max: int = 2) -> OraclePrefix:
    """s_1 (and s_2) from the untruncated products L_1^p Delta^{s_1} f^{p-s}."""
    if not 1 <= n_max <= 2:
        raise ValueError("the oracle only handles depth 1 or 2")
    p = f.ring.p
    fbar = DensePoly.from_poly(Poly(f.ring.with_precision(1), f.terms))
    s1 = max(s for s in range(p + 1) if _member(fbar.power(p - s), 1))
    if n_max == 1 or s1 == p:
        return OraclePrefix((s1,), s1 < p)
    L1 = fbar.power(p - s1 - 1)
    base = L1.power(p) * oracle_delta(f).power(s1)
    s2 = max(s for s in range(p + 1) if _member(base * fbar.power(p - s), 2))
    return OraclePrefix((s1, s2), s2 < p)
