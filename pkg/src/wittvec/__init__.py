"""Exact arithmetic for generalized truncated Witt vectors.

W_n here carries components 0..n, so it is the ring traditionally denoted
W_{n+1}.  Contexts pair a base ring (Z or F_p[t]) with a uniformizer; the
multi-prime rings compose single-prime functors.  Set WITT_PURE=1 to force
the pure-Python polynomial kernel over the compiled one.
"""

__version__ = "0.1.0"

from wittvec.delta import (
    FrobeniusLiftSpec,
    canonical_base_spec,
    check_delta_axioms,
    check_frobenius_lift,
    coaction,
    delta_apply,
)
from wittvec.descent import run_battery, standard_battery
from wittvec.multi import (
    MultiWittVector,
    PrimeFamily,
    classical_big_ghost,
    multi_ghost,
    multi_teichmuller,
    multi_unghost,
    reorder,
    truncation_set_context,
)
from wittvec.poly import polyring
from wittvec.present import (
    RingPresentation,
    coord_change,
    delta_expand,
    lambda_presentation,
    theta_expand,
    verify_wn_presentation,
)
from wittvec.rings import ZZ, Algebra, FpT, GF, Zmod, base_from_text
from wittvec.witt import (
    GhostVector,
    WittContext,
    WittVector,
    add,
    base_scale,
    frobenius,
    ghost,
    ghost_component,
    mul,
    negate,
    rebase_uniformizer,
    structural_polys,
    teich_scale,
    teichmuller,
    truncate,
    unghost,
    verschiebung,
    witt_one,
    witt_zero,
)

__all__ = [
    "Algebra",
    "FpT",
    "FrobeniusLiftSpec",
    "GF",
    "GhostVector",
    "MultiWittVector",
    "PrimeFamily",
    "RingPresentation",
    "WittContext",
    "WittVector",
    "ZZ",
    "Zmod",
    "add",
    "base_from_text",
    "base_scale",
    "canonical_base_spec",
    "check_delta_axioms",
    "check_frobenius_lift",
    "classical_big_ghost",
    "coaction",
    "coord_change",
    "delta_apply",
    "delta_expand",
    "frobenius",
    "ghost",
    "ghost_component",
    "lambda_presentation",
    "mul",
    "multi_ghost",
    "multi_teichmuller",
    "multi_unghost",
    "negate",
    "polyring",
    "rebase_uniformizer",
    "reorder",
    "run_battery",
    "standard_battery",
    "structural_polys",
    "teich_scale",
    "teichmuller",
    "theta_expand",
    "truncate",
    "truncation_set_context",
    "unghost",
    "verify_wn_presentation",
    "verschiebung",
    "witt_one",
    "witt_zero",
]
