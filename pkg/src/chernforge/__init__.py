"""Exact Chern-class calculus in Chow rings and lci certificates for Chern classes."""
from .certificates import (
    Certificate,
    TopChern,
    TwistAtom,
    XiClass,
    certify_top,
    certify_xi,
    lci_flags_report,
    verify_certificate,
)
from .chern import (
    FormalBundle,
    LineBundleSymbol,
    chern_character,
    direct_sum,
    dual,
    line_power,
    tensor_line,
    top_chern,
)
from .exact import Matrix, lagrange_extrapolate_coeffs, solve_linear, vandermonde_matrix
from .reduction import express_in_subalgebra, kleiman_smooth_bound, verify_syzygy_identity
from .ring import (
    CycleClass,
    RingModel,
    grassmannian,
    normal_form,
    product_of_projective_spaces,
    projective_space,
    universal,
)

__version__ = "0.1.0"

__all__ = [
    "Certificate",
    "CycleClass",
    "FormalBundle",
    "LineBundleSymbol",
    "Matrix",
    "RingModel",
    "TopChern",
    "TwistAtom",
    "XiClass",
    "certify_top",
    "certify_xi",
    "chern_character",
    "direct_sum",
    "dual",
    "express_in_subalgebra",
    "grassmannian",
    "kleiman_smooth_bound",
    "lagrange_extrapolate_coeffs",
    "lci_flags_report",
    "line_power",
    "normal_form",
    "product_of_projective_spaces",
    "projective_space",
    "solve_linear",
    "tensor_line",
    "top_chern",
    "universal",
    "vandermonde_matrix",
    "verify_certificate",
    "verify_syzygy_identity",
]
