"""Splitting-order sequences, ppt enclosures and the numerical conditions.

For a homogeneous lift f of degree d the level-n test asks whether

    f(s_1, ..., s_{n-1}, s) = L_{n-1}^p * Delta(f)^{s_{n-1}} * f^{p-s}

lies in m^{[p^n]}, where L_{n-1} = f(s_1, ..., s_{n-2}, s_{n-1} + 1) and
L_0 = 1.  Since m^{[p^n]} contains p, everything happens over F_p and
modulo the monomial ideal (x_i^{p^n}).

Two reductions keep the boxes small.  A variable x_i whose exponents in f
are all divisible by g_i is replaced by y_i = x_i^{g_i} (the map commutes
with phi and the box becomes y_i < ceil(p^n / g_i)); variables absent from
f are dropped.  L_{n-1} is stored truncated at level n-1, because an
exponent e >= p^{n-1} gives p*e >= p^n after the Frobenius.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction

from ._trunc import Box, Infeasible, Slab, mul
from .frobdelta import DeltaResult, delta as compute_delta
from .polyring import MAX_EXP, ExponentOverflow, Poly, RingSpec, change_precision

log = logging.getLogger(__name__)

DEFAULT_DEPTH = 4


class Unbounded(ArithmeticError):
    """s_n = p was reached; the recursion stops there."""


@dataclass
class _Compression:
    kept: tuple[int, ...]  # original indices of variables present in f
    steps: tuple[int, ...]  # g_i for kept variables
    weights: tuple[int, ...]  # g_i * q_i
    nvars: int

    @classmethod
    def of(cls, f: Poly) -> _Compression:
        n = f.ring.nvars
        g = [0] * n
        for mono in f.terms:
            for i, a in enumerate(mono):
                g[i] = math.gcd(g[i], a)
        kept = tuple(i for i in range(n) if g[i] > 0)
        steps = tuple(g[i] for i in kept)
        weights = tuple(g[i] * f.ring.weights[i] for i in kept)
        return cls(kept, steps, weights, n)

    def squeeze(self, terms) -> dict:
        out = {}
        for mono, c in terms.items():
            out[tuple(mono[i] // s for i, s in zip(self.kept, self.steps))] = c
        return out

    def expand(self, terms) -> dict:
        out = {}
        for mono, c in terms.items():
            full = [0] * self.nvars
            for i, s, a in zip(self.kept, self.steps, mono):
                full[i] = a * s
            out[tuple(full)] = c
        return out

    def bounds(self, p: int, n: int) -> tuple[int, ...]:
        q = p**n
        return tuple(-(-q // s) for s in self.steps)


@dataclass
class SplitPrefix:
    """Computed prefix (s_1, ..., s_n) of the splitting-order sequence.

    ``witnesses[i-1]`` is L_i = f(s_1, ..., s_{i-1}, s_i + 1) over F_p,
    reduced modulo (x_j^{p^i}).  It exists for every level with s_i <= p-1.
    """

    f: Poly  # precision-2 lift
    delta: DeltaResult
    s: list[int] = field(default_factory=list)
    witnesses: list[Poly] = field(default_factory=list)
    bounded: bool = True
    requested_depth: int = 0
    stop_reason: str | None = None
    max_cells: int = 16_000_000
    max_work: int = 20_000_000_000
    _comp: _Compression | None = field(default=None, repr=False)
    _last: dict | None = field(default=None, repr=False)  # compressed L_{n}

    @property
    def p(self) -> int:
        return self.f.ring.p

    @property
    def d(self) -> int:
        return self.f.degree

    @property
    def depth(self) -> int:
        return len(self.s)

    @property
    def bounded_flag(self) -> bool:
        return self.bounded

    def witness_degree(self, n: int) -> int:
        """(p^n - s_n - 1) d."""
        return (self.p**n - self.s[n - 1] - 1) * self.d


def _start(f: Poly, max_cells: int, max_work: int) -> SplitPrefix:
    if f.is_zero() or not f.homogeneous:
        raise ValueError("f must be a nonzero homogeneous polynomial")
    if f.degree < 1:
        raise ValueError("f must have positive degree")
    f2 = change_precision(f, 2)
    pref = SplitPrefix(f=f2, delta=compute_delta(f2), max_cells=max_cells, max_work=max_work)
    pref._comp = _Compression.of(f2)
    pref._last = {(0,) * len(pref._comp.kept): 1}
    return pref


def next_split_order(prefix: SplitPrefix, f: Poly | None = None) -> int:
    """Compute s_n for n = depth + 1, append it, and record L_n.

    The scan runs downward from s = p, multiplying by f once per step;
    the first member found is s_n because membership is a down-set in s.
    Raises Unbounded if s_n = p (the value is still recorded).
    """
    if f is not None and change_precision(f, 2) != prefix.f:
        raise ValueError("f does not match the prefix")
    if not prefix.bounded:
        raise Unbounded("prefix already reached s = p")
    comp = prefix._comp
    p, d = prefix.p, prefix.d
    n = prefix.depth + 1
    if p**n > MAX_EXP:
        raise ExponentOverflow(f"p^{n} exceeds the exponent range")
    box = Box(p, comp.weights, comp.bounds(p, n), prefix.max_cells, prefix.max_work)

    f_slab = Slab.from_terms(box, comp.squeeze(prefix.f.terms), d)
    prev_s = prefix.s[-1] if prefix.s else 0
    prev_deg = 0 if n == 1 else prefix.witness_degree(n - 1)
    frob = {tuple(a * p for a in mono): c for mono, c in prefix._last.items()}
    base = Slab.from_terms(box, frob, p * prev_deg)
    if prev_s:
        delta_slab = Slab.from_terms(box, comp.squeeze(prefix.delta.delta.terms), p * d)
        for _ in range(prev_s):
            base = mul(base, delta_slab)

    g = base
    above = None  # G(s+1)
    for s in range(p, -1, -1):
        if g.is_zero():
            break
        if s == 0:
            raise AssertionError("f(s_1..s_{n-1}, 0) must lie in m^[p^n]")
        above = g
        g = mul(g, f_slab)
    prefix.s.append(s)
    if s == p:
        prefix.bounded = False
        prefix._last = None
        raise Unbounded(f"s_{n} = p")
    terms = above.to_terms()
    prefix._last = terms
    ring1 = prefix.f.ring.with_precision(1)
    prefix.witnesses.append(Poly._trusted(ring1, comp.expand(terms)))
    log.debug("level %d: s=%d, |L|=%d", n, s, len(terms))
    return s


def splitting_prefix(
    f: Poly,
    n_max: int = DEFAULT_DEPTH,
    max_cells: int = 16_000_000,
    max_work: int = 20_000_000_000,
) -> SplitPrefix:
    """Compute s_1..s_{n_max}, stopping early at s_n = p or when a level is infeasible.

    ``stop_reason`` and ``depth`` report what was actually achieved.
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    pref = _start(f, max_cells, max_work)
    pref.requested_depth = n_max
    while pref.depth < n_max:
        try:
            next_split_order(pref)
        except Unbounded:
            pref.stop_reason = f"s_{pref.depth} = p"
            break
        except (Infeasible, ExponentOverflow) as exc:
            pref.stop_reason = f"level {pref.depth + 1} not computed: {exc}"
            break
    return pref


@dataclass(frozen=True)
class PptEnclosure:
    lower: Fraction
    width: Fraction
    depth: int

    @property
    def upper(self) -> Fraction:
        return self.lower + self.width

    def __contains__(self, x) -> bool:
        return self.lower <= x <= self.upper


def ppt_enclosure(prefix: SplitPrefix) -> PptEnclosure:
    """[sum (p - s_i - 1)/p^i, that + p^-n]; each later term lies in [0, (p-1)/p^m]."""
    if not prefix.bounded:
        raise ValueError("ppt enclosure needs s_i <= p - 1 at every level")
    p = prefix.p
    lower = sum((Fraction(p - s - 1, p**i) for i, s in enumerate(prefix.s, 1)), Fraction(0))
    return PptEnclosure(lower, Fraction(1, p**prefix.depth), prefix.depth)


@dataclass(frozen=True)
class NmCheck:
    m: int
    lhs: int
    rhs: int

    @property
    def holds(self) -> bool:
        return self.lhs < self.rhs


def check_Nm(ring: RingSpec, d: int, m: int) -> NmCheck:
    """d(p^m - p - 1) < p^m Q + Q - (N+1) d."""
    if m < 2:
        raise ValueError("(N_m) is defined for m >= 2")
    p, Q, N = ring.p, ring.Q, ring.N
    return NmCheck(m, d * (p**m - p - 1), p**m * Q + Q - (N + 1) * d)


def vanishing_threshold(ring: RingSpec, d: int, k: int | None = None) -> int:
    """Least n >= 1 beyond which s_n = 0 is forced, given the theorem hypotheses.

    Without k: d(p^n - 2) < p^n Q + Q - (N+1) d.
    With k (A_{>=k} inside (f, J(f))): d(p^n - 2) < p^n Q - Q - k + 1.
    """
    p, Q, N = ring.p, ring.Q, ring.N
    if Q <= d:
        raise ValueError("no threshold: needs Q > d")
    if k is None:
        rhs = lambda q: q * Q + Q - (N + 1) * d  # noqa: E731
    else:
        rhs = lambda q: q * Q - Q - k + 1  # noqa: E731
    n = 1
    while not d * (p**n - 2) < rhs(p**n):
        n += 1
    return n
