"""Nomograms for tabular models over a binarized categorical feature space."""

from ._nomoforge import (
    WALD_Z,
    NomoforgeError,
    classify_kind,
    content_hash,
    create_nomogram,
    derive_rules,
    expand_grid,
    fit_logistic,
    fit_logistic_corrected,
    fit_ols,
    handle_nomogram,
    handle_read,
    match_rule,
    rank_predictors,
    read_tabular,
    read_type1,
    validate,
)

__all__ = [
    "WALD_Z",
    "NomoforgeError",
    "classify_kind",
    "content_hash",
    "create_nomogram",
    "derive_rules",
    "expand_grid",
    "fit_logistic",
    "fit_logistic_corrected",
    "fit_ols",
    "handle_nomogram",
    "handle_read",
    "match_rule",
    "rank_predictors",
    "read_tabular",
    "read_type1",
    "validate",
]
