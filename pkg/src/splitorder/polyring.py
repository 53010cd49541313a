"""Sparse weighted-graded polynomials over Z/p^e.

A :class:`Poly` is an immutable map from exponent tuples to nonzero
coefficients in ``[1, p**e)``.  Terms are kept in descending lexicographic
order of exponent vectors, which is also the serialization order.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping

MAX_EXP = 2**63 - 1

Monomial = tuple[int, ...]


class ExponentOverflow(OverflowError):
    """An exponent left the 63-bit range."""


class RingMismatch(ValueError):
    pass


class ParseError(ValueError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    k = 3
    while k * k <= n:
        if n % k == 0:
            return False
        k += 2
    return True


@dataclass(frozen=True)
class RingSpec:
    """Ambient data for A = (Z/p^e)[x_0..x_N] with deg x_i = weights[i]."""

    p: int
    e: int
    weights: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "weights", tuple(int(w) for w in self.weights))
        if not is_prime(self.p):
            raise ValueError(f"p={self.p} is not prime")
        if self.e < 1:
            raise ValueError("precision e must be >= 1")
        if not self.weights:
            raise ValueError("need at least one variable")
        if any(w < 1 for w in self.weights):
            raise ValueError("weights must be positive")

    @property
    def nvars(self) -> int:
        return len(self.weights)

    @property
    def N(self) -> int:
        return len(self.weights) - 1

    @property
    def Q(self) -> int:
        return sum(self.weights)

    @property
    def modulus(self) -> int:
        return self.p**self.e

    @property
    def well_formed(self) -> bool:
        # A single weight gives a point; treat P(1) as the well-formed one.
        if self.nvars == 1:
            return self.weights[0] == 1
        for i in range(self.nvars):
            rest = self.weights[:i] + self.weights[i + 1:]
            if math.gcd(*rest) != 1:
                return False
        return True

    def with_precision(self, e: int) -> RingSpec:
        return RingSpec(self.p, e, self.weights)

    def weighted_degree(self, mono: Monomial) -> int:
        return sum(a * q for a, q in zip(mono, self.weights))

    def one(self) -> Poly:
        return Poly(self, {(0,) * self.nvars: 1})

    def zero(self) -> Poly:
        return Poly(self, {})

    def var(self, i: int) -> Poly:
        if not 0 <= i < self.nvars:
            raise IndexError(f"variable index {i} out of range")
        mono = [0] * self.nvars
        mono[i] = 1
        return Poly(self, {tuple(mono): 1})

    def monomial(self, exps: Iterable[int], coeff: int = 1) -> Poly:
        return Poly(self, {tuple(exps): coeff})


def _check_exponents(mono: Monomial, nvars: int) -> Monomial:
    if len(mono) != nvars:
        raise ValueError(f"monomial {mono} has wrong length for {nvars} variables")
    for a in mono:
        if a < 0:
            raise ValueError(f"negative exponent in {mono}")
        if a > MAX_EXP:
            raise ExponentOverflow(f"exponent {a} exceeds 63-bit range")
    return mono


class Poly:
    """Immutable sparse polynomial; use the module functions or operators."""

    def __init__(self, ring: RingSpec, terms: Mapping[Monomial, int] | None = None):
        mod = ring.modulus
        clean = {}
        for mono, c in (terms or {}).items():
            mono = _check_exponents(tuple(int(a) for a in mono), ring.nvars)
            c %= mod
            if c:
                clean[mono] = (clean.get(mono, 0) + c) % mod
        self.ring = ring
        self._terms = {m: clean[m] for m in sorted(clean, reverse=True) if clean[m]}

    @classmethod
    def _trusted(cls, ring: RingSpec, terms: dict) -> Poly:
        # terms already reduced, nonzero and range-checked
        obj = cls.__new__(cls)
        obj.ring = ring
        obj._terms = {m: terms[m] for m in sorted(terms, reverse=True)}
        return obj

    @property
    def terms(self) -> Mapping[Monomial, int]:
        return self._terms

    def __len__(self):
        return len(self._terms)

    def __iter__(self):
        return iter(self._terms.items())

    def __bool__(self):
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __eq__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        return self.ring == other.ring and self._terms == other._terms

    def __hash__(self):
        return hash((self.ring, tuple(self._terms.items())))

    def __repr__(self):
        return f"Poly({format_poly(self)!r}, p={self.ring.p}, e={self.ring.e})"

    def __str__(self):
        return format_poly(self)

    @cached_property
    def _degree_info(self) -> tuple[bool, int | None]:
        degs = {self.ring.weighted_degree(m) for m in self._terms}
        if not degs:
            return True, None
        if len(degs) == 1:
            return True, degs.pop()
        return False, None

    @property
    def homogeneous(self) -> bool:
        return self._degree_info[0]

    @property
    def degree(self) -> int | None:
        """Weighted degree when homogeneous and nonzero, else None."""
        return self._degree_info[1]

    def max_exponents(self) -> tuple[int, ...]:
        if not self._terms:
            return (0,) * self.ring.nvars
        return tuple(max(col) for col in zip(*self._terms))

    def __add__(self, other):
        if isinstance(other, int):
            other = self.ring.one() * other
        return poly_add(self, other)

    __radd__ = __add__

    def __neg__(self):
        mod = self.ring.modulus
        return Poly._trusted(self.ring, {m: mod - c for m, c in self._terms.items()})

    def __sub__(self, other):
        if isinstance(other, int):
            other = self.ring.one() * other
        return poly_add(self, -other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return scale(self, other)
        return poly_mul(self, other)

    def __rmul__(self, other):
        if isinstance(other, int):
            return scale(self, other)
        return NotImplemented

    def __pow__(self, k: int):
        return poly_pow(self, k)


def _same_ring(a: Poly, b: Poly):
    if a.ring != b.ring:
        raise RingMismatch(f"ring mismatch: {a.ring} vs {b.ring}")


def poly_add(a: Poly, b: Poly) -> Poly:
    _same_ring(a, b)
    mod = a.ring.modulus
    out = dict(a.terms)
    for m, c in b.terms.items():
        v = (out.get(m, 0) + c) % mod
        if v:
            out[m] = v
        else:
            out.pop(m, None)
    return Poly._trusted(a.ring, out)


def scale(a: Poly, c: int) -> Poly:
    mod = a.ring.modulus
    c %= mod
    out = {}
    for m, v in a.terms.items():
        w = v * c % mod
        if w:
            out[m] = w
    return Poly._trusted(a.ring, out)


def poly_mul(a: Poly, b: Poly) -> Poly:
    """Exact product in Z/p^e.

    Raises ExponentOverflow before multiplying if a product exponent could
    leave the 63-bit range.
    """
    _same_ring(a, b)
    if not a.terms or not b.terms:
        return a.ring.zero()
    for x, y in zip(a.max_exponents(), b.max_exponents()):
        if x + y > MAX_EXP:
            raise ExponentOverflow("product exponent exceeds 63-bit range")
    mod = a.ring.modulus
    if len(a.terms) < len(b.terms):
        a, b = b, a
    # pack exponent vectors into one integer; field widths fit the product
    widths = [(x + y).bit_length() or 1 for x, y in zip(a.max_exponents(), b.max_exponents())]
    shifts = []
    total = 0
    for w in widths:
        shifts.append(total)
        total += w

    def pack(m):
        k = 0
        for e, s in zip(m, shifts):
            k |= e << s
        return k

    acc: dict = {}
    get = acc.get
    bterms = [(pack(m), c) for m, c in b.terms.items()]
    for ea, ca in a.terms.items():
        ka = pack(ea)
        for kb, cb in bterms:
            k = ka + kb
            acc[k] = get(k, 0) + ca * cb
    out = {}
    masks = [(1 << w) - 1 for w in widths]
    for k, c in acc.items():
        c %= mod
        if c:
            out[tuple((k >> s) & m for s, m in zip(shifts, masks))] = c
    return Poly._trusted(a.ring, out)


def poly_pow(a: Poly, k: int) -> Poly:
    """a**k by binary exponentiation; a**0 is 1 (also for a = 0)."""
    if k < 0:
        raise ValueError("negative power")
    result = a.ring.one()
    base = a
    while k:
        if k & 1:
            result = poly_mul(result, base)
        k >>= 1
        if k:
            base = poly_mul(base, base)
    return result


def poly_derivative(a: Poly, i: int) -> Poly:
    if not 0 <= i < a.ring.nvars:
        raise IndexError(f"variable index {i} out of range for {a.ring.nvars} variables")
    mod = a.ring.modulus
    out = {}
    for m, c in a.terms.items():
        k = m[i]
        if k == 0:
            continue
        v = c * k % mod
        if v:
            out[m[:i] + (k - 1,) + m[i + 1:]] = v
    return Poly._trusted(a.ring, out)


def weighted_degree_check(a: Poly) -> tuple[bool, int | None]:
    """(homogeneous, degree); the zero polynomial gives (True, None)."""
    return a._degree_info


def truncate_frobenius(a: Poly, n: int) -> Poly:
    """Drop every monomial having some exponent >= p**n."""
    if n < 1:
        raise ValueError("level must be >= 1")
    bound = a.ring.p**n
    if bound > MAX_EXP:
        raise ExponentOverflow(f"p^{n} exceeds the exponent range")
    out = {m: c for m, c in a.terms.items() if max(m, default=0) < bound}
    return Poly._trusted(a.ring, out)


def reduce_mod_p(a: Poly) -> Poly:
    """Image of a in (Z/p)[x]."""
    ring = a.ring.with_precision(1)
    p = ring.p
    out = {}
    for m, c in a.terms.items():
        c %= p
        if c:
            out[m] = c
    return Poly._trusted(ring, out)


def change_precision(a: Poly, e: int) -> Poly:
    """Reduce to a lower precision, or lift through the section [0, p^e_old)."""
    ring = a.ring.with_precision(e)
    if e <= a.ring.e:
        return Poly(ring, a.terms)
    return Poly._trusted(ring, dict(a.terms))


_TOKEN = re.compile(r"\s*(?:(\d+)|(x)|(\^)|(\*)|([+-])|(\S))")


def parse_poly(src: str, ring: RingSpec) -> Poly:
    """Parse ``term (('+'|'-') term)*``.

    A term is an integer, or ``[int '*'] factor ('*' factor)*`` with
    ``factor := 'x' index ['^' exponent]``.  Coefficients are reduced mod
    p^e.  A leading sign is allowed.
    """
    tokens = []
    pos = 0
    while pos < len(src):
        m = _TOKEN.match(src, pos)
        if m is None:  # only trailing whitespace left
            break
        kind = m.lastindex
        start = m.start(kind)
        if kind == 6:
            raise ParseError(f"unexpected character {m.group(6)!r}", start)
        tokens.append((kind, m.group(kind), start))
        pos = m.end()
    tokens.append((0, "", len(src)))
    NUM, X, CARET, STAR, SIGN, END = 1, 2, 3, 4, 5, 0

    i = 0
    terms: dict = {}
    mod = ring.modulus

    def peek():
        return tokens[i]

    def expect(kind, what):
        nonlocal i
        tok = tokens[i]
        if tok[0] != kind:
            raise ParseError(f"expected {what}", tok[2])
        i += 1
        return tok

    def factor(mono):
        nonlocal i
        expect(X, "'x'")
        idx_tok = expect(NUM, "variable index")
        idx = int(idx_tok[1])
        if idx >= ring.nvars:
            raise ParseError(f"variable x{idx} out of range (nvars={ring.nvars})", idx_tok[2])
        exp = 1
        if peek()[0] == CARET:
            i += 1
            exp_tok = expect(NUM, "exponent")
            exp = int(exp_tok[1])
            if exp > MAX_EXP:
                raise ParseError("exponent overflow", exp_tok[2])
        mono[idx] += exp
        if mono[idx] > MAX_EXP:
            raise ParseError("exponent overflow", idx_tok[2])

    sign = 1
    if peek()[0] == SIGN:
        sign = -1 if peek()[1] == "-" else 1
        i += 1
    while True:
        mono = [0] * ring.nvars
        coeff = 1
        tok = peek()
        if tok[0] == NUM:
            coeff = int(tok[1])
            i += 1
            if peek()[0] == STAR:
                i += 1
                factor(mono)
        elif tok[0] == X:
            factor(mono)
        else:
            raise ParseError("expected a term", tok[2])
        while peek()[0] == STAR:
            i += 1
            factor(mono)
        key = tuple(mono)
        terms[key] = (terms.get(key, 0) + sign * coeff) % mod
        tok = peek()
        if tok[0] == END:
            break
        if tok[0] != SIGN:
            raise ParseError("expected '+', '-' or end of input", tok[2])
        sign = -1 if tok[1] == "-" else 1
        i += 1
    return Poly(ring, terms)


def format_poly(a: Poly) -> str:
    """Canonical text: descending lex term order, coefficients in [1, p^e)."""
    if not a.terms:
        return "0"
    parts = []
    for mono, c in a.terms.items():
        factors = []
        for i, k in enumerate(mono):
            if k == 1:
                factors.append(f"x{i}")
            elif k > 1:
                factors.append(f"x{i}^{k}")
        if not factors:
            parts.append(str(c))
        elif c == 1:
            parts.append("*".join(factors))
        else:
            parts.append(f"{c}*" + "*".join(factors))
    return " + ".join(parts)
