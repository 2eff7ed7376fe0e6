"""Compressed RDF triple store: one k2-tree per predicate.

Succinct building blocks (``BitSequence``, ``DacSequence``, ``K2Tree``),
a four-category term ``Dictionary``, SP/OP predicate indexes, the
``TripleStore`` with pattern resolution, pairwise joins and an N-Triples
build pipeline.
"""

import logging

from .bitseq import BitSequence
from .dac import DacSequence
from .dictionary import OBJECT, PREDICATE, SUBJECT, Dictionary
from .errors import (FormatError, InputError, K2TriplesError, NotFoundError, ParseError,
                     RangeError, StateError, StrategyError, UnsupportedJoinError)
from .joins import JoinQuery, JoinResult, classify_join, join
from .k2tree import K2Config, K2Tree
from .ntriples import RawTriple, build_pipeline, parse_ntriples
from .predindex import PredicateIndex
from .store import TriplePattern, TripleStore, Var, load_store, resolve_pattern, save_store

logging.getLogger(__name__).addHandler(logging.NullHandler())

__version__ = "0.1.0"

__all__ = [
    "BitSequence", "DacSequence", "K2Config", "K2Tree", "Dictionary", "PredicateIndex",
    "TripleStore", "TriplePattern", "Var", "JoinQuery", "JoinResult", "RawTriple",
    "classify_join", "join", "build_pipeline", "parse_ntriples", "load_store",
    "resolve_pattern", "save_store", "SUBJECT", "PREDICATE", "OBJECT",
    "K2TriplesError", "RangeError", "NotFoundError", "InputError", "StateError",
    "FormatError", "ParseError", "UnsupportedJoinError", "StrategyError",
]
