"""Frobenius-power membership and graded linear algebra over F_p.

Every ideal question here is answered degree by degree: the span of
``{M * g}`` in a single graded piece is row-reduced over F_p.  No Groebner
bases are involved.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from functools import lru_cache
from itertools import product

import numpy as np

from .polyring import MAX_EXP, ExponentOverflow, Poly, RingSpec, poly_derivative, reduce_mod_p

DEFAULT_PIECE_CAP = 250_000
DEFAULT_POINT_CAP = 50_000


class DegreePieceTooLarge(RuntimeError):
    def __init__(self, degree: int, count: int, cap: int):
        super().__init__(f"graded piece of degree {degree} has {count} monomials (cap {cap})")
        self.degree = degree
        self.count = count


class CeilingExceeded(RuntimeError):
    """The m-primary scan reached its degree ceiling without a decision."""


def frob_power_member(h: Poly, n: int) -> bool:
    """Is h in (p, x_0^{p^n}, ..., x_N^{p^n})?"""
    if n < 1:
        raise ValueError("level must be >= 1")
    bound = h.ring.p**n
    if bound > MAX_EXP:
        raise ExponentOverflow(f"p^{n} exceeds the exponent range")
    p = h.ring.p
    for mono, c in h.terms.items():
        if c % p and max(mono, default=0) < bound:
            return False
    return True


@dataclass(frozen=True)
class GradedIdeal:
    ring: RingSpec  # precision 1
    generators: tuple[Poly, ...]

    def __post_init__(self):
        gens = tuple(g for g in self.generators if not g.is_zero())
        for g in gens:
            if g.ring != self.ring:
                raise ValueError("generator ring mismatch")
            if not g.homogeneous:
                raise ValueError(f"generator {g} is not homogeneous")
        object.__setattr__(self, "generators", gens)

    @classmethod
    def of(cls, *gens: Poly) -> GradedIdeal:
        ring = gens[0].ring.with_precision(1)
        return cls(ring, tuple(reduce_mod_p(g) for g in gens))

    @property
    def degrees(self) -> tuple[int, ...]:
        return tuple(g.degree for g in self.generators)

    @property
    def is_unit(self) -> bool:
        return any(g.degree == 0 for g in self.generators)

    def __add__(self, other: GradedIdeal) -> GradedIdeal:
        return GradedIdeal(self.ring, self.generators + other.generators)


@dataclass(frozen=True)
class PrimaryReport:
    """Outcome of the m-primary test.

    ``is_m_primary`` means A/I has finite length (the unit ideal counts).
    ``k_bound`` is the least k with A_{>=k} contained in I.
    """

    is_m_primary: bool
    top_nonzero_degree: int | None
    k_bound: int | None
    certificate: str

    def to_dict(self) -> dict:
        return asdict(self)


def jacobian(f: Poly) -> GradedIdeal:
    """(df/dx_0, ..., df/dx_N) reduced mod p."""
    ring = f.ring.with_precision(1)
    gens = tuple(reduce_mod_p(poly_derivative(f, i)) for i in range(f.ring.nvars))
    return GradedIdeal(ring, gens)


@lru_cache(maxsize=256)
def monomials_of_degree(weights: tuple[int, ...], m: int) -> tuple[tuple[int, ...], ...]:
    """All exponent vectors of weighted degree m, descending lex order."""
    out = []
    n = len(weights)

    def rec(i, left, prefix):
        if i == n - 1:
            if left % weights[i] == 0:
                out.append(prefix + (left // weights[i],))
            return
        for a in range(left // weights[i], -1, -1):
            rec(i + 1, left - a * weights[i], prefix + (a,))

    if m >= 0:
        rec(0, m, ())
    return tuple(out)


def _rank_mod_p(rows, p: int, full: int) -> int:
    # rows: iterable of {column: coeff}; leftmost column pivots
    pivots: dict[int, dict] = {}
    for row in rows:
        row = dict(row)
        while row:
            c = min(row)
            prow = pivots.get(c)
            if prow is None:
                inv = pow(row[c], -1, p)
                pivots[c] = {k: v * inv % p for k, v in row.items()}
                break
            factor = row[c]
            for k, v in prow.items():
                nv = (row.get(k, 0) - factor * v) % p
                if nv:
                    row[k] = nv
                else:
                    row.pop(k, None)
        if len(pivots) == full:
            break
    return len(pivots)


def graded_piece_dim(ideal: GradedIdeal, m: int, cap: int = DEFAULT_PIECE_CAP) -> tuple[int, int, int]:
    """(dim I_m, dim A_m, dim (A/I)_m) over F_p."""
    if m < 0:
        raise ValueError("degree must be >= 0")
    w = ideal.ring.weights
    monos = monomials_of_degree(w, m)
    full = len(monos)
    if full > cap:
        raise DegreePieceTooLarge(m, full, cap)
    if full == 0 or not ideal.generators:
        return 0, full, full
    col = {mono: i for i, mono in enumerate(monos)}
    p = ideal.ring.p

    def rows():
        for g in ideal.generators:
            for mult in monomials_of_degree(w, m - g.degree):
                yield {col[tuple(a + b for a, b in zip(mult, mono))]: c for mono, c in g.terms.items()}

    rank = _rank_mod_p(rows(), p, full)
    return rank, full, full - rank


def _quotient_dim(ideal, m, cap):
    return graded_piece_dim(ideal, m, cap)[2]


def _axis_certificate(ideal: GradedIdeal) -> str | None:
    # If no generator has a pure power of x_i, every generator vanishes on the x_i axis.
    for i in range(ideal.ring.nvars):
        pure = any(
            all(a == 0 for j, a in enumerate(mono) if j != i)
            for g in ideal.generators
            for mono in g.terms
        )
        if not pure:
            return f"x{i}-axis lies in V(I)"
    return None


def _powmod_table(p: int, e: int) -> np.ndarray:
    return np.array([pow(a, e, p) for a in range(p)], dtype=np.int64)


def _point_certificate(ideal: GradedIdeal, point_cap: int) -> str | None:
    # A nonzero common F_p-zero of weighted-homogeneous generators gives a curve in V(I).
    ring = ideal.ring
    p, n = ring.p, ring.nvars
    if p**n > point_cap:
        return None
    pts = np.array(list(product(range(p), repeat=n))[1:], dtype=np.int64)
    alive = np.ones(len(pts), dtype=bool)
    for g in ideal.generators:
        val = np.zeros(len(pts), dtype=np.int64)
        for mono, c in g.terms.items():
            t = np.full(len(pts), c % p, dtype=np.int64)
            for i, k in enumerate(mono):
                if k:
                    t = t * _powmod_table(p, k)[pts[:, i]] % p
            val = (val + t) % p
        alive &= val == 0
        if not alive.any():
            return None
    pt = tuple(int(v) for v in pts[np.argmax(alive)])
    return f"common zero {pt} over F_{p}"


def _minimal_generators(ideal: GradedIdeal, cap: int) -> tuple[Poly, ...]:
    # drop generators lying in the ideal of the others, checked in their own degree
    gens = list(ideal.generators)
    i = 0
    while i < len(gens):
        g = gens[i]
        rest = GradedIdeal(ideal.ring, tuple(gens[:i] + gens[i + 1:]))
        with_g = GradedIdeal(ideal.ring, tuple(gens))
        if graded_piece_dim(rest, g.degree, cap)[0] == graded_piece_dim(with_g, g.degree, cap)[0]:
            del gens[i]
        else:
            i += 1
    return tuple(gens)


def _top_degree(ideal, start, width, cap):
    # (A/I) vanishes on (start, start + width]; locate the last nonzero degree
    for m in range(start, -1, -1):
        if _quotient_dim(ideal, m, cap):
            return m
    return None


def is_m_primary(
    ideal: GradedIdeal,
    socle_hint: int,
    ceiling: int | None = None,
    cap: int = DEFAULT_PIECE_CAP,
    point_cap: int = DEFAULT_POINT_CAP,
) -> PrimaryReport:
    """Decide whether A/I has finite length, and find its top degree.

    Vanishing of (A/I)_m on a window of max(q_i) consecutive degrees forces
    vanishing in all higher degrees, since every monomial of higher degree
    is a variable times one of lower degree.  With exactly one generator per
    variable the ideal is m-primary iff the generators form a regular
    sequence, whose quotient has top degree sum(deg g_i) - sum(q_i); that
    makes the window test decisive.  Otherwise the scan starts above
    ``socle_hint`` and raises CeilingExceeded when neither vanishing nor a
    non-primary certificate is found below ``ceiling``.
    """
    if socle_hint < 0:
        raise ValueError("socle_hint must be >= 0")
    if ideal.is_unit:
        return PrimaryReport(True, None, 0, "unit ideal")
    cert = _axis_certificate(ideal)
    if cert:
        return PrimaryReport(False, None, None, cert)
    ring = ideal.ring
    width = max(ring.weights)
    gens = _minimal_generators(ideal, cap)
    if len(gens) < ring.nvars:
        return PrimaryReport(False, None, None, f"{len(gens)} minimal generators for {ring.nvars} variables")
    ideal = GradedIdeal(ring, gens)

    if len(gens) == ring.nvars:
        top = sum(g.degree for g in gens) - ring.Q
        window = [_quotient_dim(ideal, m, cap) for m in range(max(top, -1) + 1, max(top, -1) + width + 1)]
        if any(window):
            return PrimaryReport(False, None, None, f"nonzero above complete-intersection top degree {top}")
        m = _top_degree(ideal, top, width, cap)
        return PrimaryReport(True, m, 0 if m is None else m + 1, "complete intersection")

    if ceiling is None:
        ceiling = max(2 * socle_hint, socle_hint + 8 * width)
    window = [_quotient_dim(ideal, m, cap) for m in range(socle_hint + 1, socle_hint + width + 1)]
    if not any(window):
        m = _top_degree(ideal, socle_hint, width, cap)
        return PrimaryReport(True, m, 0 if m is None else m + 1, "vanishing window")

    cert = _point_certificate(ideal, point_cap)
    if cert:
        return PrimaryReport(False, None, None, cert)

    last_nonzero = max(socle_hint + 1 + i for i, q in enumerate(window) if q)
    m = socle_hint + width + 1
    while m <= ceiling:
        if _quotient_dim(ideal, m, cap):
            last_nonzero = m
        elif m - last_nonzero >= width:
            return PrimaryReport(True, last_nonzero, last_nonzero + 1, "vanishing window")
        m += 1
    raise CeilingExceeded(f"no vanishing window of width {width} up to degree {ceiling}")


def contains_degree_tail(ideal: GradedIdeal, k: int, cap: int = DEFAULT_PIECE_CAP) -> bool:
    """Is A_{>=k} contained in I?  Checked on the window [k, k + max q_i)."""
    if k < 0:
        raise ValueError("k must be >= 0")
    width = max(ideal.ring.weights)
    return all(_quotient_dim(ideal, m, cap) == 0 for m in range(k, k + width))
