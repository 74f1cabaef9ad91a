"""Exact posterior inference for a loop-free discrete probabilistic language.

Programs compile, statement by statement, into probability generating
automata: weighted automata whose accepting-path weights, grouped by how
often each counter variable was bumped, form the program's outcome
distribution. Normalizing constants, posterior probabilities, and individual
outcome probabilities then fall out of exact rational linear algebra on the
automaton, with no sampling and no truncation.
"""

from .analysis import (
    PgaReport,
    coefficient,
    coefficient_table,
    mass,
    normalize,
    validate_pga,
    valuation_key,
)
from .constructions import (
    concat,
    decrement,
    label_subst_one,
    label_subst_zero,
    product,
    transition_subst,
    weighted_union,
)
from .dists import (
    Bernoulli,
    Binomial,
    Custom,
    Dirac,
    DistSpec,
    Geometric,
    NegBinomial,
    Uniform,
    build_dist_pga,
    dist_support_bound,
)
from .errors import (
    CustomMassNotOne,
    CustomNotNormalized,
    GuardConstraintError,
    InfeasibleObservation,
    InfiniteMass,
    InvalidAutomaton,
    InvalidParameter,
    InvalidWeight,
    PgaParseError,
    ProbabilityRangeError,
    RedipError,
    RedipSyntaxError,
    UnknownVariable,
    UnsupportedIid,
    ZeroMass,
)
from .guards import (
    And,
    Guard,
    GuardDfa,
    LessThan,
    ModEq,
    Not,
    build_guard_dfa,
    dfa_accepts,
    dfa_complement,
    dfa_less_than,
    dfa_mod,
    dfa_product,
    equality_guard,
    guard_negate,
    guard_satisfies,
    guard_size,
    guard_vars,
    make_dfa,
    parikh,
)
from .lang import (
    Choice,
    Decrement,
    IfElse,
    IncrConst,
    IncrDist,
    IncrIid,
    IncrVar,
    Observe,
    Program,
    Seq,
    SetZero,
    dist_to_text,
    guard_to_text,
    parse_guard,
    parse_program,
    parse_valuation,
    program_size,
    program_to_text,
    program_vars,
    seq_all,
)
from .oracle import (
    ComparisonResult,
    McReport,
    OracleReport,
    compare,
    dist_pmf,
    enumerate_program,
    mc_sample,
    prior_support,
    step,
)
from .pga import (
    Edge,
    Pga,
    enumerate_paths,
    extend_alphabet,
    is_acyclic,
    make_pga,
    rename_variable,
    trim,
    unit_pga,
)
from .rational import INF, ExtRational, decimal_str, format_weight, is_finite, parse_weight
from .serialize import (
    load_pga,
    pga_from_dict,
    pga_from_json,
    pga_to_dict,
    pga_to_dot,
    pga_to_json,
    save_pga,
)
from .translate import (
    InferenceResult,
    StepRecord,
    TranslationResult,
    guard_mass,
    infer,
    marginal,
    translate,
    working_alphabet,
)

__version__ = "0.1.0"

__all__ = [
    "And",
    "Bernoulli",
    "Binomial",
    "Choice",
    "ComparisonResult",
    "Custom",
    "CustomMassNotOne",
    "CustomNotNormalized",
    "Decrement",
    "Dirac",
    "DistSpec",
    "Edge",
    "ExtRational",
    "Geometric",
    "Guard",
    "GuardConstraintError",
    "GuardDfa",
    "INF",
    "IfElse",
    "IncrConst",
    "IncrDist",
    "IncrIid",
    "IncrVar",
    "InfeasibleObservation",
    "InferenceResult",
    "InfiniteMass",
    "InvalidAutomaton",
    "InvalidParameter",
    "InvalidWeight",
    "LessThan",
    "McReport",
    "ModEq",
    "NegBinomial",
    "Not",
    "Observe",
    "OracleReport",
    "Pga",
    "PgaParseError",
    "PgaReport",
    "ProbabilityRangeError",
    "Program",
    "RedipError",
    "RedipSyntaxError",
    "Seq",
    "SetZero",
    "StepRecord",
    "TranslationResult",
    "Uniform",
    "UnknownVariable",
    "UnsupportedIid",
    "ZeroMass",
    "build_dist_pga",
    "build_guard_dfa",
    "coefficient",
    "coefficient_table",
    "compare",
    "concat",
    "decimal_str",
    "decrement",
    "dfa_accepts",
    "dfa_complement",
    "dfa_less_than",
    "dfa_mod",
    "dfa_product",
    "dist_pmf",
    "dist_support_bound",
    "dist_to_text",
    "enumerate_paths",
    "enumerate_program",
    "equality_guard",
    "extend_alphabet",
    "format_weight",
    "guard_mass",
    "guard_negate",
    "guard_satisfies",
    "guard_size",
    "guard_to_text",
    "guard_vars",
    "infer",
    "is_acyclic",
    "is_finite",
    "label_subst_one",
    "label_subst_zero",
    "load_pga",
    "make_dfa",
    "make_pga",
    "marginal",
    "mass",
    "mc_sample",
    "normalize",
    "parikh",
    "parse_guard",
    "parse_program",
    "parse_valuation",
    "parse_weight",
    "pga_from_dict",
    "pga_from_json",
    "pga_to_dict",
    "pga_to_dot",
    "pga_to_json",
    "prior_support",
    "product",
    "program_size",
    "program_to_text",
    "program_vars",
    "rename_variable",
    "save_pga",
    "seq_all",
    "step",
    "transition_subst",
    "translate",
    "trim",
    "unit_pga",
    "validate_pga",
    "valuation_key",
    "weighted_union",
    "working_alphabet",
]
