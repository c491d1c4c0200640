"""Exact computations around direct finiteness of group rings.

Group rings and their matrix rings, the near ring of polynomials with
substitution product, cellular automata over groups with polynomial rules,
decision procedures for one-dimensional automata, and a restriction ladder
that certifies two-sidedness of one-sided inverses level by level.
"""
from .errors import (AlphabetMismatch, CoefficientFieldTooLarge, ContextMismatch, DirectFiniteError,
                     DivisionByZero, EnumerationBudgetExceeded, ExprError, ExprSyntaxError,
                     FieldError, GroupAxiomError, InfiniteGroup, NameAlreadyBound,
                     SearchBudgetExceeded, SectionFailed, TermBlowup, TypeMismatch, Undecidable,
                     UnknownName, WrongCharacteristic)
from .fields import GF, QQ, FieldElem, FiniteField, RationalField, embed, enumerate_points, frobenius, subfield_degree
from .group_ring import (DirectFinitenessReport, GroupRingElem, GroupRingMatrix, check_direct_finiteness,
                         find_right_inverse, gr_mul, regular_representation)
from .groups import (FiniteGroup, FreeAbelianGroup, FreeGroup, GroupElement, MemorySet, cyclic,
                     dihedral, integers, quaternion, symmetric)
from .near_ring import NearRingElem, TheoremAReport, act, embed_phi, star, verify_theorem_A
from .parsing import Session, evaluate, format_ca, format_value, parse
from .pipeline import (PipelineConfig, PipelineReport, coefficient_model, conclude_two_sided,
                       run_restriction_ladder, verify_section)
from .sca import (AffineAlphabet, CellularAutomaton, FiniteAlphabet, Pattern, apply_pattern, compose,
                  psi_from_matrix, psi_from_nearring, restrict, rule_equal, window_map)
from .surjunctivity import (DecisionReport, check_gottschalk, elementary_rule, gottschalk_sweep,
                            is_injective, is_injective_finite, is_injective_Z, is_surjective,
                            is_surjective_finite, is_surjective_Z)

__version__ = "0.1.0"

__all__ = [
    "AlphabetMismatch",
    "CoefficientFieldTooLarge",
    "ContextMismatch",
    "DirectFiniteError",
    "DivisionByZero",
    "EnumerationBudgetExceeded",
    "ExprError",
    "ExprSyntaxError",
    "FieldError",
    "GroupAxiomError",
    "InfiniteGroup",
    "NameAlreadyBound",
    "SearchBudgetExceeded",
    "SectionFailed",
    "TermBlowup",
    "TypeMismatch",
    "Undecidable",
    "UnknownName",
    "WrongCharacteristic",
    "GF",
    "QQ",
    "FieldElem",
    "FiniteField",
    "RationalField",
    "embed",
    "enumerate_points",
    "frobenius",
    "subfield_degree",
    "DirectFinitenessReport",
    "GroupRingElem",
    "GroupRingMatrix",
    "check_direct_finiteness",
    "find_right_inverse",
    "gr_mul",
    "regular_representation",
    "FiniteGroup",
    "FreeAbelianGroup",
    "FreeGroup",
    "GroupElement",
    "MemorySet",
    "cyclic",
    "dihedral",
    "integers",
    "quaternion",
    "symmetric",
    "NearRingElem",
    "TheoremAReport",
    "act",
    "embed_phi",
    "star",
    "verify_theorem_A",
    "Session",
    "evaluate",
    "format_ca",
    "format_value",
    "parse",
    "PipelineConfig",
    "PipelineReport",
    "coefficient_model",
    "conclude_two_sided",
    "run_restriction_ladder",
    "verify_section",
    "AffineAlphabet",
    "CellularAutomaton",
    "FiniteAlphabet",
    "Pattern",
    "apply_pattern",
    "compose",
    "psi_from_matrix",
    "psi_from_nearring",
    "restrict",
    "rule_equal",
    "window_map",
    "DecisionReport",
    "check_gottschalk",
    "elementary_rule",
    "gottschalk_sweep",
    "is_injective",
    "is_injective_finite",
    "is_injective_Z",
    "is_surjective",
    "is_surjective_finite",
    "is_surjective_Z",
]
