"""Equivariant Groebner bases for ideals in polynomial rings with infinitely
many variables that are stable under the monoid Inc(N) of strictly
increasing maps, with a pipeline for kernels of symmetric monomial maps."""

from .engine import (BasisState, MaxWidthReached, TruncationReport, WidthCapExceeded, classical_buchberger,
                     equivariant_buchberger, generator_truncation, is_equivariant_gb, reduce_basis, truncated_egb)
from .orders import (EliminationOrder, FiberRevLexOrder, GradedLexOrder, GradedRevLexOrder, HybridToricOrder,
                     LexOrder, MonomialOrder, OrderReport, RingMismatch, compare, make_order, validate_order)
from .parsing import ParseError, SemanticError, format_map_spec, parse_generators, parse_map_file, parse_polynomial
from .poly import Polynomial, Reducer, Term, ZeroPolynomial, leading_monomial, leading_term, normal_form, reduce_once
from .spairs import SPair, interlacings, joint_interlacings, spair_generators
from .symmetry import (ONE, DomainTooSmall, IncMap, Monomial, OrbitSpec, RingSignature, Variable, apply_inc,
                       apply_permutation, canonical_form, equivariant_divides, orbit_members_up_to_width,
                       sinfty_to_inc_reps, width, x, y, z)
from .toric import (ExponentMatrix, FreeCover, GraphIdealSetup, ImageTooWide, MonomialMapSpec, NotEquivariant,
                    NotMember, build_free_cover, compute_kernel_egb, graph_setup, kernel_egb_details, kernel_pi_egb,
                    lift, mm_divides, mm_member, mm_norm_distance, mm_preimage, pi_image, validate_map)

__version__ = "0.1.0"
