"""Reified knowledge graphs from parsed micro-blogging posts.

Thin wrappers over the C++ core. Functions that return reports give plain
dicts and lists.
"""
import json as _json

from ._core import (
    InputError,
    InvariantError,
    ServiceError,
    TurtleError,
    UndefinedStatistic,
    british_spelling,
    clean_entity,
    cohen_kappa,
    dedup,
    fleiss_kappa,
    hdbscan,
    levenshtein_similarity,
    mint_entity_uri,
    normalize_tag,
    parse_turtle,
    silhouette_mean,
    standardize,
    umap,
)
from . import _core

__all__ = [
    "InputError", "InvariantError", "ServiceError", "TurtleError", "UndefinedStatistic",
    "british_spelling", "clean_entity", "cohen_kappa", "dedup", "extract_conllu", "fleiss_kappa",
    "hdbscan", "levenshtein_similarity", "mint_entity_uri", "normalize_tag", "parse_turtle",
    "run_stage", "run_all", "silhouette_mean", "standardize", "umap", "validate_graph",
]


def validate_graph(path):
    return _json.loads(_core._validate_graph(str(path)))


def extract_conllu(text):
    """Surface triples for every post in a second-pass CoNLL-U string."""
    return _json.loads(_core._extract_conllu(text))


def run_stage(stage, config, out_dir=None):
    """Run one of "normalize", "extract", "refine-emit"; returns the stage report."""
    return _json.loads(_core._stage(stage, str(config), str(out_dir or "")))


def run_all(config, out_dir=None):
    return {s: run_stage(s, config, out_dir) for s in ("normalize", "extract", "refine-emit")}
