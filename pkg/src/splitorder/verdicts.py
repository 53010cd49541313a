"""Hypothesis checks and the conclusions they license.

Each conclusion is reached along a *route*: a set of named checks that must
all pass, plus the citations that turn those checks into a theorem.  The
computed prefix is evidence only.  It can veto a conclusion (by
contradicting what the theorem predicts) but never creates one.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction

from . import __version__
from .ideals import (
    CeilingExceeded,
    DegreePieceTooLarge,
    GradedIdeal,
    contains_degree_tail,
    is_m_primary,
    jacobian,
)
from .polyring import Poly, RingSpec, change_precision, format_poly, poly_derivative, reduce_mod_p
from .splitting import (
    DEFAULT_DEPTH,
    SplitPrefix,
    check_Nm,
    ppt_enclosure,
    splitting_prefix,
    vanishing_threshold,
)

log = logging.getLogger(__name__)

PASS, FAIL, INCONCLUSIVE = "pass", "fail", "inconclusive"

CITE = {
    "cy": "Theorem 3.2",
    "cy_bound": "Corollary 2.7",
    "k3": "Theorem 3.4(1)",
    "bounded": "Theorem 2.5(2)",
    "bounded_cy": "Theorem 2.5(3)",
    "fano": "Theorem 3.5",
    "fano_vanish": "Corollary 2.8",
    "fano_vanish_k": "Theorem 2.9",
    "fano_general": "Theorem 3.10",
    "fano3_table": "Proposition 3.8",
    "fano3": "Corollary 3.9",
    "jacobian_tail": "Lemma 2.1",
    "degree": "notation",
}

FANO_THREEFOLDS = {
    (1, 1, 1, 1, 1): frozenset({1, 2, 3, 4}),
    (1, 1, 1, 1, 2): frozenset({4}),
    (1, 1, 1, 1, 3): frozenset({6}),
    (1, 1, 1, 2, 3): frozenset({6}),
}


class Conclusion(str, Enum):
    PERFECTOID_SPLIT = "PerfectoidSplit"
    PERFECTOID_PURE = "PerfectoidPure"
    GLOBALLY_PLUS_REGULAR = "GloballyPlusRegular"
    BCM_REGULAR = "BCMRegular"
    INCONCLUSIVE = "Inconclusive"
    HYPOTHESIS_VIOLATION = "HypothesisViolation"


@dataclass(frozen=True)
class HypersurfaceSpec:
    """A hypersurface f = 0 in weighted projective space over Z/p^2."""

    f: Poly  # precision 2
    d: int
    lift_dependent: bool = False

    def __post_init__(self):
        f = self.f
        if f.ring.e != 2:
            raise ValueError("HypersurfaceSpec stores a precision-2 lift")
        if f.is_zero() or not f.homogeneous:
            raise ValueError("f must be a nonzero homogeneous polynomial")
        if f.degree != self.d:
            raise ValueError(f"f has weighted degree {f.degree}, not {self.d}")
        if self.d < 1:
            raise ValueError("degree must be positive")
        if reduce_mod_p(f).is_zero():
            raise ValueError("f vanishes mod p")

    @classmethod
    def from_poly(cls, f: Poly, d: int | None = None) -> HypersurfaceSpec:
        """Accept any precision; a precision-1 input is lifted through [0, p)."""
        if f.is_zero() or not f.homogeneous:
            raise ValueError("f must be a nonzero homogeneous polynomial")
        return cls(change_precision(f, 2), f.degree if d is None else d, f.ring.e == 1)

    @property
    def ring(self) -> RingSpec:
        return self.f.ring

    @property
    def p(self) -> int:
        return self.ring.p

    @property
    def dim_X(self) -> int:
        return self.ring.N - 1

    @property
    def kind(self) -> str:
        Q = self.ring.Q
        if Q == self.d:
            return "CY"
        return "Fano" if Q > self.d else "general"

    def problem(self) -> dict:
        r = self.ring
        return {
            "p": r.p,
            "e": r.e,
            "weights": list(r.weights),
            "d": self.d,
            "f_canonical": format_poly(self.f),
            "lift_dependent": self.lift_dependent,
        }


@dataclass
class Check:
    name: str
    status: str
    cite: str
    detail: str = ""

    def to_dict(self) -> dict:
        return {"name": self.name, "status": self.status, "cite": self.cite, "detail": self.detail}

    @classmethod
    def from_dict(cls, data: dict) -> Check:
        return cls(data["name"], data["status"], data["cite"], data.get("detail", ""))


def _status(ok: bool) -> str:
    return PASS if ok else FAIL


@dataclass
class VerdictReport:
    problem: dict
    checks: list[Check]
    evidence: dict
    conclusion: Conclusion
    basis: list[str]
    version: str = __version__
    notes: list[str] = field(default_factory=list)
    prefix: SplitPrefix | None = field(default=None, compare=False, repr=False)

    def check(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {
            "problem": self.problem,
            "checks": [c.to_dict() for c in self.checks],
            "evidence": self.evidence,
            "conclusion": self.conclusion.value,
            "basis": list(self.basis),
            "version": self.version,
            "notes": list(self.notes),
        }

    @classmethod
    def from_dict(cls, data: dict) -> VerdictReport:
        return cls(
            problem=data["problem"],
            checks=[Check.from_dict(c) for c in data["checks"]],
            evidence=data["evidence"],
            conclusion=Conclusion(data["conclusion"]),
            basis=list(data["basis"]),
            version=data["version"],
            notes=list(data.get("notes", [])),
        )


@dataclass(frozen=True)
class Route:
    conclusion: Conclusion
    requires: tuple[str, ...]
    basis: tuple[str, ...]


# a failure here means computed evidence disagrees with a theorem's
# prediction; it blocks a conclusion but never proves a hypothesis false
EVIDENCE_CHECKS = frozenset({"prefix_bound", "prefix_vanishing", "prefix_vanishing_k"})


CY_ROUTES = (
    Route(
        Conclusion.PERFECTOID_SPLIT,
        ("ambient_dimension", "p_gt_dim_X", "p_not_dividing_Q", "jacobian_m_primary", "well_formed", "prefix_bound"),
        (CITE["cy"], CITE["cy_bound"]),
    ),
    Route(
        Conclusion.PERFECTOID_PURE,
        ("ambient_dimension", "p_gt_dim_X", "p_not_dividing_Q", "jacobian_m_primary", "prefix_bound"),
        (CITE["cy_bound"],),
    ),
)

FANO_ROUTES = (
    Route(
        Conclusion.GLOBALLY_PLUS_REGULAR,
        ("p_not_dividing_d", "quadratic_inequality", "jacobian_m_primary", "well_formed", "prefix_vanishing"),
        (CITE["fano"], CITE["fano_vanish"], CITE["bounded"]),
    ),
    Route(
        Conclusion.GLOBALLY_PLUS_REGULAR,
        ("f_jacobian_m_primary", "well_formed", "all_s_bounded", "prefix_vanishing_k"),
        (CITE["fano_general"], CITE["bounded"]),
    ),
    Route(
        Conclusion.BCM_REGULAR,
        ("quadratic_inequality", "jacobian_m_primary", "prefix_vanishing"),
        (CITE["fano_vanish"], CITE["bounded"]),
    ),
    Route(
        Conclusion.BCM_REGULAR,
        ("f_jacobian_m_primary", "all_s_bounded", "prefix_vanishing_k"),
        (CITE["fano_vanish_k"], CITE["bounded"]),
    ),
)


def decide(checks: list[Check], routes: tuple[Route, ...]) -> tuple[Conclusion, list[str]]:
    """First route whose checks all pass; else HypothesisViolation if every
    route has a failed hypothesis, else Inconclusive."""
    status = {c.name: c.status for c in checks}
    for route in routes:
        if all(status.get(name) == PASS for name in route.requires):
            return route.conclusion, list(route.basis)
    if all(
        any(status.get(name) == FAIL and name not in EVIDENCE_CHECKS for name in route.requires)
        for route in routes
    ):
        return Conclusion.HYPOTHESIS_VIOLATION, []
    return Conclusion.INCONCLUSIVE, []


def socle_degree(ring: RingSpec, d: int) -> int:
    """(N+1)d - 2Q, the top degree of A/J(f) when J(f) is m-primary."""
    return (ring.N + 1) * d - 2 * ring.Q


def _primary_check(name, ideal, hint, ceiling, cite):
    try:
        rep = is_m_primary(ideal, max(hint, 0), ceiling=ceiling)
    except (CeilingExceeded, DegreePieceTooLarge) as exc:
        return Check(name, INCONCLUSIVE, cite, str(exc)), None
    return Check(name, _status(rep.is_m_primary), cite, rep.certificate), rep


def _euler_holds(f: Poly) -> bool:
    fbar = reduce_mod_p(f)
    ring = fbar.ring
    total = ring.zero()
    for i, q in enumerate(ring.weights):
        total = total + q * ring.var(i) * reduce_mod_p(poly_derivative(f, i))
    return total == fbar.degree * fbar


def _prefix_evidence(prefix: SplitPrefix) -> dict:
    return {
        "prefix": list(prefix.s),
        "bounded": prefix.bounded,
        "depth": prefix.depth,
        "requested_depth": prefix.requested_depth,
        "stop_reason": prefix.stop_reason,
        "witness_degrees": [prefix.witness_degree(n) for n in range(1, len(prefix.witnesses) + 1)],
    }


def _frac(x: Fraction | None) -> dict | None:
    return None if x is None else {"num": x.numerator, "den": x.denominator}


def _default_depth(spec: HypersurfaceSpec) -> int:
    return DEFAULT_DEPTH if spec.ring.N <= 3 else 2


def _common(spec: HypersurfaceSpec, n_max, ceiling):
    ring = spec.ring
    p, d = ring.p, spec.d
    checks = []
    fbar = reduce_mod_p(spec.f)
    J = jacobian(spec.f)
    hint = socle_degree(ring, d)
    jcheck, jrep = _primary_check("jacobian_m_primary", J, hint, ceiling, CITE["jacobian_tail"])
    checks.append(jcheck)
    checks.append(Check("well_formed", _status(ring.well_formed), CITE["cy" if spec.kind == "CY" else "fano"]))
    euler = _euler_holds(spec.f)
    checks.append(
        Check(
            "euler_identity",
            _status(euler),
            CITE["cy" if spec.kind == "CY" else "fano"],
            "f in J(f) mod p" if d % p else "d = 0 mod p, so Euler gives no membership",
        )
    )
    prefix = splitting_prefix(spec.f, n_max or _default_depth(spec))
    evidence = _prefix_evidence(prefix)
    evidence["primary"] = {"jacobian": jrep.to_dict() if jrep else None}
    depth = max(prefix.depth, 2)
    evidence["nm"] = [
        {"m": c.m, "lhs": c.lhs, "rhs": c.rhs, "holds": c.holds}
        for c in (check_Nm(ring, d, m) for m in range(2, depth + 1))
    ]
    notes = []
    if prefix.stop_reason:
        notes.append(f"prefix stopped at depth {prefix.depth}: {prefix.stop_reason}")
    if spec.lift_dependent:
        notes.append("input given mod p; verdict concerns the canonical lift with coefficients in [0, p)")
    return checks, evidence, notes, prefix, fbar, jrep


def cy_verdict(spec: HypersurfaceSpec, n_max: int | None = None, ceiling: int | None = None) -> VerdictReport:
    if spec.kind != "CY":
        raise ValueError(f"not Calabi-Yau: Q = {spec.ring.Q}, d = {spec.d}")
    ring = spec.ring
    p, dim = ring.p, spec.dim_X
    checks, evidence, notes, prefix, _, jrep = _common(spec, n_max, ceiling)
    checks += [
        Check("ambient_dimension", _status(ring.N >= 1), CITE["degree"], f"N = {ring.N}"),
        Check("p_gt_dim_X", _status(p > dim), CITE["cy"], f"p = {p}, dim X = {dim}"),
        Check("p_not_dividing_Q", _status(ring.Q % p != 0), CITE["cy"], f"Q = {ring.Q}"),
    ]
    bad = [n for n, s in enumerate(prefix.s, 1) if s > dim]
    checks.append(
        Check(
            "prefix_bound",
            _status(not bad),
            CITE["cy_bound"],
            f"s_n <= {dim} at levels 1..{prefix.depth}" if not bad else f"s_n > {dim} at levels {bad}",
        )
    )

    hyp_ok = all(
        c.status == PASS for c in checks if c.name in ("jacobian_m_primary", "p_gt_dim_X", "ambient_dimension")
    )
    theorem_lower = Fraction(p - 1 - dim, p - 1) if hyp_ok else None
    enclosure = ppt_enclosure(prefix) if prefix.bounded else None
    candidates = [x for x in (theorem_lower, enclosure.lower if enclosure else None) if x is not None]
    evidence["ppt"] = {
        "lower_num": enclosure.lower.numerator if enclosure else None,
        "lower_den": enclosure.lower.denominator if enclosure else None,
        "upper": _frac(enclosure.upper) if enclosure else None,
        "depth": prefix.depth,
        "theorem_lower": _frac(theorem_lower),
        "best_lower": _frac(max(candidates)) if candidates else None,
    }
    evidence["thresholds"] = {}

    conclusion, basis = decide(checks, CY_ROUTES)
    if conclusion is Conclusion.PERFECTOID_SPLIT and ring.N == 3 and ring.weights == (1, 1, 1, 1) and p > 2:
        basis.append(CITE["k3"])
    if ring.Q % p == 0:
        notes.append("p divides Q; the split theorem's hypothesis p does not divide Q fails")
    return VerdictReport(spec.problem(), checks, evidence, conclusion, basis, notes=notes, prefix=prefix)


def classify_fano_threefold(weights, d: int) -> tuple[tuple[int, ...], frozenset[int]] | None:
    """Table row (weights, degrees) when (sorted weights, d) occurs, else None."""
    weights = tuple(sorted(weights))
    if len(weights) != 5:
        raise ValueError(f"a threefold needs 5 weights, got {len(weights)}")
    degrees = FANO_THREEFOLDS.get(weights)
    if degrees is None or d not in degrees:
        return None
    return weights, degrees


def fano_quadratic(ring: RingSpec, d: int) -> int:
    """(Q-d)p^2 + dp + Q - Nd."""
    p, Q, N = ring.p, ring.Q, ring.N
    return (Q - d) * p**2 + d * p + Q - N * d


def _vanishing_check(name, prefix, n0, cite):
    if n0 is None:
        return Check(name, INCONCLUSIVE, cite, "no threshold available")
    bad = [n for n, s in enumerate(prefix.s, 1) if n >= n0 and s != 0]
    reached = [n for n in range(n0, prefix.depth + 1)]
    if bad:
        return Check(name, FAIL, cite, f"s_n != 0 at levels {bad} beyond n_0 = {n0}")
    detail = f"s_n = 0 at levels {reached}" if reached else f"n_0 = {n0} beyond computed depth {prefix.depth}"
    return Check(name, PASS, cite, detail)


def fano_verdict(spec: HypersurfaceSpec, n_max: int | None = None, ceiling: int | None = None) -> VerdictReport:
    if spec.kind != "Fano":
        raise ValueError(f"not Fano: Q = {spec.ring.Q}, d = {spec.d}")
    ring = spec.ring
    p, d, dim = ring.p, spec.d, spec.dim_X
    checks, evidence, notes, prefix, fbar, jrep = _common(spec, n_max, ceiling)

    quad = fano_quadratic(ring, d)
    n2 = check_Nm(ring, d, 2)
    assert n2.holds == (quad > 0), "(N_2) must agree with the quadratic form"
    if p >= dim:
        assert quad > 0, "p >= dim X forces the quadratic inequality"

    fj = GradedIdeal.of(fbar) + jacobian(spec.f)
    fj_check, fj_rep = _primary_check(
        "f_jacobian_m_primary", fj, socle_degree(ring, d), ceiling, CITE["fano_vanish_k"]
    )
    evidence["primary"]["f_jacobian"] = fj_rep.to_dict() if fj_rep else None

    jacobian_ok = next(c for c in checks if c.name == "jacobian_m_primary").status == PASS
    if jacobian_ok and quad > 0:
        bounded = Check("all_s_bounded", PASS, CITE["bounded"], "J(f) m-primary and (N_2)")
    elif not prefix.bounded:
        bounded = Check("all_s_bounded", FAIL, CITE["bounded"], prefix.stop_reason or "")
    else:
        bounded = Check("all_s_bounded", INCONCLUSIVE, CITE["bounded"], "only a finite prefix is known")

    n0 = vanishing_threshold(ring, d)
    k = fj_rep.k_bound if fj_rep and fj_rep.is_m_primary else None
    if k is not None and not contains_degree_tail(fj, k):
        raise AssertionError(f"A_>=k not inside (f, J(f)) for reported k = {k}")
    n0_k = vanishing_threshold(ring, d, k) if k is not None else None
    evidence["thresholds"] = {"n0": n0, "k": k, "n0_k": n0_k}
    evidence["quadratic"] = quad

    row = classify_fano_threefold(ring.weights, d) if ring.nvars == 5 else None
    evidence["classification"] = (
        {"weights": list(row[0]), "degrees": sorted(row[1])} if row else None
    )

    checks += [
        fj_check,
        Check("p_not_dividing_d", _status(d % p != 0), CITE["fano"], f"d = {d}"),
        Check("quadratic_inequality", _status(quad > 0), CITE["fano"], f"value {quad}"),
        Check("p_ge_dim_X", _status(p >= dim), CITE["fano"], f"p = {p}, dim X = {dim}"),
        bounded,
        _vanishing_check("prefix_vanishing", prefix, n0, CITE["fano_vanish"]),
        _vanishing_check("prefix_vanishing_k", prefix, n0_k, CITE["fano_vanish_k"]),
    ]

    conclusion, basis = decide(checks, FANO_ROUTES)
    if conclusion is Conclusion.GLOBALLY_PLUS_REGULAR and row and p > 3 and CITE["fano"] in basis:
        basis += [CITE["fano3_table"], CITE["fano3"]]
    return VerdictReport(spec.problem(), checks, evidence, conclusion, basis, notes=notes, prefix=prefix)


def analyze(spec: HypersurfaceSpec, kind: str = "auto", n_max: int | None = None, ceiling: int | None = None):
    """Dispatch on the hypersurface type; general type gets prefix evidence only."""
    if kind == "auto":
        kind = spec.kind.lower()
    if kind == "cy":
        return cy_verdict(spec, n_max, ceiling)
    if kind == "fano":
        return fano_verdict(spec, n_max, ceiling)
    if kind != "general":
        raise ValueError(f"unknown verdict kind {kind!r}")
    prefix = splitting_prefix(spec.f, n_max or _default_depth(spec))
    checks = [Check("fano_or_cy", FAIL, CITE["degree"], f"Q = {spec.ring.Q} < d = {spec.d}")]
    return VerdictReport(
        spec.problem(),
        checks,
        _prefix_evidence(prefix),
        Conclusion.HYPOTHESIS_VIOLATION,
        [],
        notes=["general type: no theorem applies"],
        prefix=prefix,
    )


__all__ = [
    "CITE",
    "Check",
    "Conclusion",
    "FANO_THREEFOLDS",
    "HypersurfaceSpec",
    "CY_ROUTES",
    "FANO_ROUTES",
    "Route",
    "VerdictReport",
    "analyze",
    "classify_fano_threefold",
    "cy_verdict",
    "decide",
    "fano_quadratic",
    "fano_verdict",
    "socle_degree",
]
