"""Homogeneous locally nilpotent derivations of trinomial algebras."""

from .classify import (ClassificationReport, SearchSpaceTooLarge, classify, cor1_gap, has_homogeneous_lnd,
                       is_rigid, search_homogeneous_lnds)
from .derivation import Derivation, NotNilpotent, NotVerified, degree_of, flow, is_well_defined, nilpotency_index
from .elementary import (ElementaryFamily, FamilyKind, enumerate_families, family_degree, make_delta_c,
                         make_delta_c_beta, make_ds)
from .grading import GradingGroup, GroupElement, build_grading
from .kernel import general_lnd_form, generate_kernel_elements, kernel_membership
from .model import Kind, S, T, TrinomialData, validate
from .polyring import Poly, PolyRing, QuotientPoly, ring_for

__all__ = [
    "ClassificationReport", "Derivation", "ElementaryFamily", "FamilyKind", "GradingGroup", "GroupElement",
    "Kind", "NotNilpotent", "NotVerified", "Poly", "PolyRing", "QuotientPoly", "S", "SearchSpaceTooLarge", "T",
    "TrinomialData", "build_grading", "classify", "cor1_gap", "degree_of", "enumerate_families",
    "family_degree", "flow", "general_lnd_form", "generate_kernel_elements", "has_homogeneous_lnd",
    "is_rigid", "is_well_defined", "kernel_membership", "make_delta_c", "make_delta_c_beta", "make_ds",
    "nilpotency_index", "ring_for", "search_homogeneous_lnds", "validate",
]
