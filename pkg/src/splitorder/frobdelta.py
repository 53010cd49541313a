"""Frobenius lift x_i -> x_i^p and the p-derivation Delta(f) = (f^p - phi(f))/p."""

from __future__ import annotations

from dataclasses import dataclass

from .polyring import MAX_EXP, ExponentOverflow, Poly, change_precision, poly_pow


class NotDivisible(ArithmeticError):
    """f^p - phi(f) had a coefficient not divisible by p."""


@dataclass(frozen=True)
class DeltaResult:
    delta: Poly  # precision 1
    degree: int | None  # p * deg f for homogeneous f

    def __bool__(self):
        return not self.delta.is_zero()


def _scale_exponents(a: Poly, p: int) -> dict:
    limit = MAX_EXP // p
    out = {}
    for m, c in a.terms.items():
        if max(m, default=0) > limit:
            raise ExponentOverflow("Frobenius image exceeds 63-bit exponents")
        out[tuple(k * p for k in m)] = c
    return out


def frobenius_lift(a: Poly) -> Poly:
    """phi(a): exponents times p, coefficients fixed (residue field F_p)."""
    return Poly._trusted(a.ring, _scale_exponents(a, a.ring.p))


def frobenius_power_mod_p(a: Poly) -> Poly:
    """a^p for a over F_p, using c^p = c and additivity of Frobenius."""
    if a.ring.e != 1:
        raise ValueError("frobenius_power_mod_p needs a precision-1 polynomial")
    return Poly._trusted(a.ring, _scale_exponents(a, a.ring.p))


def delta(f: Poly) -> DeltaResult:
    """Delta(f) mod p, computed from f^p - phi(f) at precision 2.

    Precision-1 input is lifted through the section [0, p); higher precision
    is reduced to 2, which is all Delta mod p depends on.
    """
    p = f.ring.p
    f2 = change_precision(f, 2)
    diff = poly_pow(f2, p) - frobenius_lift(f2)
    out = {}
    for m, c in diff.terms.items():
        if c % p:
            raise NotDivisible(f"coefficient {c} of {m} is not divisible by {p}")
        out[m] = c // p
    d = Poly(f.ring.with_precision(1), out)
    hom, deg = f2.homogeneous, f2.degree
    return DeltaResult(d, p * deg if hom and deg is not None else None)
