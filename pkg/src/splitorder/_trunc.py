"""Homogeneous polynomials over F_p truncated by a monomial box.

A :class:`Slab` stores a weighted-homogeneous polynomial of known degree as
a dense array over all variables but one; the exponent of the dropped
variable is implied by the degree.  The array only covers the bounding box
of the support.  Every product is reduced modulo (x_i^{b_i}) on the fly,
which is exactly reduction modulo the monomial part of m^{[p^n]}.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class Infeasible(RuntimeError):
    """A truncated product would exceed the configured size or work budget."""


@dataclass(frozen=True)
class Box:
    p: int
    weights: tuple[int, ...]
    bounds: tuple[int, ...]  # exclusive exponent bounds
    max_cells: int = 16_000_000
    max_work: int = 20_000_000_000

    @property
    def drop(self) -> int:
        # implied variable: the widest one, ties broken towards the end
        best = 0
        for i, b in enumerate(self.bounds):
            if b >= self.bounds[best]:
                best = i
        return best

    @property
    def kept(self) -> tuple[int, ...]:
        d = self.drop
        return tuple(i for i in range(len(self.weights)) if i != d)


class Slab:
    __slots__ = ("box", "degree", "lo", "arr")

    def __init__(self, box: Box, degree: int, lo: np.ndarray, arr: np.ndarray | None):
        self.box = box
        self.degree = degree
        self.lo = lo
        self.arr = arr  # None encodes zero

    @classmethod
    def zero(cls, box: Box, degree: int) -> Slab:
        return cls(box, degree, np.zeros(len(box.kept), dtype=np.int64), None)

    @classmethod
    def from_terms(cls, box: Box, terms: dict, degree: int) -> Slab:
        """Build from {exponent tuple: coeff}; out-of-box monomials are dropped."""
        p = box.p
        kept = box.kept
        pts, vals = [], []
        for mono, c in terms.items():
            c %= p
            if not c or any(a >= b for a, b in zip(mono, box.bounds)):
                continue
            pts.append([mono[i] for i in kept])
            vals.append(c)
        if not vals:
            return cls.zero(box, degree)
        pts = np.array(pts, dtype=np.int64).reshape(len(vals), len(kept))
        lo = pts.min(axis=0) if len(kept) else np.zeros(0, dtype=np.int64)
        hi = pts.max(axis=0) if len(kept) else np.zeros(0, dtype=np.int64)
        if not kept:
            return cls(box, degree, lo, np.array(sum(vals) % p, dtype=np.int64))
        arr = np.zeros(tuple(hi - lo + 1), dtype=np.int64)
        arr[tuple((pts - lo).T)] = vals
        return cls(box, degree, lo, arr)

    def is_zero(self) -> bool:
        return self.arr is None

    def nnz(self) -> int:
        return 0 if self.arr is None else int(np.count_nonzero(self.arr))

    def to_terms(self) -> dict:
        if self.arr is None:
            return {}
        box = self.box
        kept, drop = box.kept, box.drop
        w = box.weights
        out = {}
        if self.arr.ndim == 0:
            rows, vals = [[]], [int(self.arr)]
        else:
            idx = np.nonzero(self.arr)
            rows = (np.stack(idx, axis=1) + self.lo).tolist()
            vals = self.arr[idx].tolist()
        for row, c in zip(rows, vals):
            mono = [0] * len(w)
            rest = self.degree
            for i, a in zip(kept, row):
                mono[i] = a
                rest -= a * w[i]
            mono[drop] = rest // w[drop]
            out[tuple(mono)] = int(c)
        return out

    def _trimmed(self, arr: np.ndarray, lo: np.ndarray) -> Slab:
        if arr.ndim == 0:
            return Slab(self.box, self.degree, lo, arr if int(arr) else None)
        nz = np.nonzero(arr)
        if len(nz[0]) == 0:
            return Slab.zero(self.box, self.degree)
        mins = np.array([a.min() for a in nz], dtype=np.int64)
        maxs = np.array([a.max() for a in nz], dtype=np.int64)
        sl = tuple(slice(a, b + 1) for a, b in zip(mins, maxs))
        return Slab(self.box, self.degree, lo + mins, np.ascontiguousarray(arr[sl]))


def _clip_dropped(box: Box, degree: int, lo: np.ndarray, arr: np.ndarray) -> None:
    """Zero cells whose implied exponent of the dropped variable is out of the box."""
    w = box.weights
    drop, kept = box.drop, box.kept
    limit = w[drop] * box.bounds[drop]  # implied exponent >= bound <=> rest >= limit
    if degree - sum(w[i] * int(a) for i, a in zip(kept, lo)) < limit:
        return
    if arr.ndim == 0:
        arr[()] = 0
        return
    rest = np.full(arr.shape, degree, dtype=np.int64)
    for axis, i in enumerate(kept):
        shape = [1] * arr.ndim
        shape[axis] = arr.shape[axis]
        rest -= (w[i] * (lo[axis] + np.arange(arr.shape[axis], dtype=np.int64))).reshape(shape)
    arr[rest >= limit] = 0


def mul(a: Slab, b: Slab) -> Slab:
    """Truncated product a*b mod p."""
    box = a.box
    degree = a.degree + b.degree
    if a.arr is None or b.arr is None:
        return Slab.zero(box, degree)
    p = box.p
    kept_bounds = np.array([box.bounds[i] for i in box.kept], dtype=np.int64)
    lo = a.lo + b.lo
    if np.any(lo >= kept_bounds):
        return Slab.zero(box, degree)

    if a.arr.ndim == 0:
        arr = np.array(int(a.arr) * int(b.arr) % p, dtype=np.int64)
        _clip_dropped(box, degree, lo, arr)
        return Slab(box, degree, lo, arr if int(arr) else None)

    a_hi = a.lo + np.array(a.arr.shape) - 1
    b_hi = b.lo + np.array(b.arr.shape) - 1
    hi = np.minimum(a_hi + b_hi, kept_bounds - 1)
    shape = tuple(int(x) for x in hi - lo + 1)
    cells = int(np.prod(shape, dtype=object))
    if cells > box.max_cells:
        raise Infeasible(f"truncated product needs {cells} cells (cap {box.max_cells})")

    # loop over the nonzeros of the operand whose loop is cheaper
    if a.nnz() * b.arr.size <= b.nnz() * a.arr.size:
        sparse, dense = a, b
    else:
        sparse, dense = b, a
    nz = np.nonzero(sparse.arr)
    work = len(nz[0]) * dense.arr.size
    if work > box.max_work:
        raise Infeasible(f"truncated product needs ~{work} operations (cap {box.max_work})")
    coeffs = sparse.arr[nz].tolist()
    starts = (np.stack(nz, axis=1) + sparse.lo + dense.lo - lo).tolist()
    dshape = dense.arr.shape
    dense_arr = dense.arr
    out = np.zeros(shape, dtype=np.int64)
    # each step adds at most (p-1)^2 per cell
    flush_every = max(1, (2**62) // ((p - 1) ** 2 + 1))
    for step, (start, c) in enumerate(zip(starts, coeffs), 1):
        lens = [min(ds, s - st) for ds, s, st in zip(dshape, shape, start)]
        if min(lens) <= 0:
            continue
        tgt = tuple(slice(st, st + ln) for st, ln in zip(start, lens))
        src = tuple(slice(0, ln) for ln in lens)
        out[tgt] += c * dense_arr[src]
        if step % flush_every == 0:
            out %= p
    out %= p
    _clip_dropped(box, degree, lo, out)
    return Slab(box, degree, lo, None)._trimmed(out, lo)
