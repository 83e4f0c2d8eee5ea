"""lamkit: untyped lambda-calculus with constants, done carefully.

Named terms with alpha-equivalence as equality, call-by-name and
call-by-value reduction with explicit parallel derivations, standardization,
binding-aware folds, normalization by evaluation and a tagged encoding into
the calculus itself.
"""
from .corpus import CorpusSpec, count_terms, enum_terms, random_term
from .delta import EMPTY_DELTA, DeltaTable, delta_from_pairs, sample_delta
from .notation import ParseError, parse_term, print_term
from .semantics import INDETERMINATE, Verdict, check_soundness, nbe_eval, normalize_nbe, sem
from .suites import SuiteReport, run_suite, suite_names
from .terms import (
    App,
    ConstName,
    Ct,
    HoasTag,
    Lm,
    Term,
    Var,
    VarName,
    alpha_eq,
    alpha_key,
    app,
    count_occ,
    ct,
    depth,
    free_vars,
    fresh_in,
    fresh_var,
    lam,
    psubst,
    size,
    subst,
    swap,
    var,
)

__version__ = "0.1.0"

__all__ = [
    "App",
    "ConstName",
    "CorpusSpec",
    "Ct",
    "DeltaTable",
    "EMPTY_DELTA",
    "HoasTag",
    "INDETERMINATE",
    "Lm",
    "ParseError",
    "SuiteReport",
    "Term",
    "Var",
    "VarName",
    "Verdict",
    "alpha_eq",
    "alpha_key",
    "app",
    "check_soundness",
    "count_occ",
    "count_terms",
    "ct",
    "delta_from_pairs",
    "depth",
    "enum_terms",
    "free_vars",
    "fresh_in",
    "fresh_var",
    "lam",
    "nbe_eval",
    "normalize_nbe",
    "parse_term",
    "print_term",
    "psubst",
    "random_term",
    "run_suite",
    "sample_delta",
    "sem",
    "size",
    "subst",
    "suite_names",
    "swap",
    "var",
]
