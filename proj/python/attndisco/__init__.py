"""Discourse tree induction from attention matrices."""

from ._attndisco import (
    DataError,
    aggregate,
    binarize,
    certify,
    cky_parse,
    cle_parse,
    const_to_dep,
    eisner_parse,
    importance,
    is_vacuous,
    locality_report,
    random_matrix,
    rst_parseval,
    tree_stats,
    uas,
)

__all__ = [
    "DataError",
    "aggregate",
    "binarize",
    "certify",
    "cky_parse",
    "cle_parse",
    "const_to_dep",
    "eisner_parse",
    "importance",
    "is_vacuous",
    "locality_report",
    "random_matrix",
    "rst_parseval",
    "tree_stats",
    "uas",
]
