"""Exact multidimensional continued fractions over the p-adic numbers.

Layers: padic (valuations, balanced digits, the Browkin truncation,
division, truncated arithmetic), numberfield (Q(theta) arithmetic, p-adic
roots via Newton polygon plus Hensel lifting, embeddings, exact linear
dependence), mcf (convergent tables, determinant and rescaling identities,
finite evaluation, strong convergence), jacobi_perron (the expansion
algorithm, its Euclidean form, termination and periodicity detection), and
cli (the command-line front end).
"""

from .errors import (
    AmbiguousSelection,
    DigitMapViolation,
    FieldMismatch,
    InsufficientPrecision,
    InternalMismatch,
    LiftingObstruction,
    NoRoot,
    PrecisionExhausted,
    VerificationFailed,
    ZeroDenominatorConvergent,
    ZeroIntermediate,
    ZeroWeight,
)
from .padic import (
    PLUS_INFINITY,
    BalancedDigits,
    PAdicApprox,
    balanced_digit_expansion,
    browkin_s,
    in_browkin_range,
    is_odd_prime,
    padic_divide,
    require_odd_prime,
    valuation,
)
from .numberfield import (
    AlgebraicNumber,
    EmbeddedAlgebraic,
    NumberField,
    PAdicEmbedding,
    embed,
    newton_polygon_slopes,
    padic_roots,
    rational_linear_dependence,
    select_largest_root,
)
from .mcf import (
    MCF,
    ConditionReport,
    ConvergentsTable,
    StrongConvergenceSeq,
    check_convergence_conditions,
    convergents_of,
    dehomogenize,
    determinant_check,
    evaluate_finite,
    push_partial_quotients,
    reconstruct_initial,
    rescale,
    strong_convergence_sequence,
)
from .jacobi_perron import (
    ExpansionResult,
    JPState,
    ReexpandReport,
    StepResult,
    euclid_expand,
    jp_expand,
    jp_step,
    lift_to_integer_tuple,
    reexpand_check,
    verify_termination_dependence,
)
from .worked_examples import PAPER_CASES, run_paper_examples

__version__ = "0.1.0"

__all__ = [
    "AlgebraicNumber",
    "AmbiguousSelection",
    "BalancedDigits",
    "ConditionReport",
    "ConvergentsTable",
    "DigitMapViolation",
    "EmbeddedAlgebraic",
    "ExpansionResult",
    "FieldMismatch",
    "InsufficientPrecision",
    "InternalMismatch",
    "JPState",
    "LiftingObstruction",
    "MCF",
    "NoRoot",
    "NumberField",
    "PAdicApprox",
    "PAdicEmbedding",
    "PAPER_CASES",
    "PLUS_INFINITY",
    "PrecisionExhausted",
    "ReexpandReport",
    "StepResult",
    "StrongConvergenceSeq",
    "VerificationFailed",
    "ZeroDenominatorConvergent",
    "ZeroIntermediate",
    "ZeroWeight",
    "balanced_digit_expansion",
    "browkin_s",
    "check_convergence_conditions",
    "convergents_of",
    "dehomogenize",
    "determinant_check",
    "embed",
    "euclid_expand",
    "evaluate_finite",
    "in_browkin_range",
    "is_odd_prime",
    "jp_expand",
    "jp_step",
    "lift_to_integer_tuple",
    "newton_polygon_slopes",
    "padic_divide",
    "padic_roots",
    "push_partial_quotients",
    "rational_linear_dependence",
    "reconstruct_initial",
    "reexpand_check",
    "require_odd_prime",
    "rescale",
    "run_paper_examples",
    "select_largest_root",
    "strong_convergence_sequence",
    "valuation",
    "verify_termination_dependence",
]
