"""Splitting-order sequences of hypersurfaces over Z/p^2 and the verdicts they support."""

__version__ = "0.1.0"

from .frobdelta import delta
from .ideals import GradedIdeal, frob_power_member, is_m_primary, jacobian
from .polyring import ParseError, Poly, RingSpec, format_poly, parse_poly
from .splitting import SplitPrefix, check_Nm, ppt_enclosure, splitting_prefix, vanishing_threshold
from .verdicts import (
    Conclusion,
    HypersurfaceSpec,
    VerdictReport,
    analyze,
    classify_fano_threefold,
    cy_verdict,
    fano_verdict,
)

__all__ = [
    "Conclusion",
    "GradedIdeal",
    "HypersurfaceSpec",
    "ParseError",
    "Poly",
    "RingSpec",
    "SplitPrefix",
    "VerdictReport",
    "analyze",
    "check_Nm",
    "classify_fano_threefold",
    "cy_verdict",
    "delta",
    "fano_verdict",
    "format_poly",
    "frob_power_member",
    "is_m_primary",
    "jacobian",
    "parse_poly",
    "ppt_enclosure",
    "splitting_prefix",
    "vanishing_threshold",
]
