"""Fiedler-like pencils of matrix polynomials recast as extended block Kronecker pencils."""
from .core import BlockPencil, BlockPermutation, MatrixPolynomial, integer_fixture, matrices_equal
from .kronecker import (EBKError, EBKView, TheoremViolation, check_as, check_cas, ebk_for, enumerate_ebk,
                        fiedler_ebk, gfp_ebk, gfpr_ebk, gfpr_q_side_ebk, gfpr_z_side_ebk, nonproper_ebk,
                        permute_to_ebk, recognize_ebk)
from .pencils import GfprSpec, fiedler, gfp, gfpr, gfpr_split, simple_pair
from .tuples import csf, parse_tuple, satisfies_sip
from .verify import minimal_indices_oracle, pencil_eigs, strong_linearization_check

__all__ = [
    "BlockPencil", "BlockPermutation", "MatrixPolynomial", "integer_fixture", "matrices_equal",
    "EBKError", "EBKView", "TheoremViolation", "check_as", "check_cas", "ebk_for", "enumerate_ebk",
    "fiedler_ebk", "gfp_ebk", "gfpr_ebk", "gfpr_q_side_ebk", "gfpr_z_side_ebk", "nonproper_ebk",
    "permute_to_ebk", "recognize_ebk",
    "GfprSpec", "fiedler", "gfp", "gfpr", "gfpr_split", "simple_pair",
    "csf", "parse_tuple", "satisfies_sip",
    "minimal_indices_oracle", "pencil_eigs", "strong_linearization_check",
]
