"""Dependency structures as flat token sequences.

The package converts dependency trees and graphs to a linear
dependency-unit encoding and back, checks the legality of generated
sequences, scores predictions against gold structures and reads/writes
the common treebank and graphbank file formats.
"""

from .alt_serializers import (
    BracketNode,
    BracketTree,
    PruferSequence,
    bracket_decode,
    bracket_encode,
    parse_bracket_text,
    parse_prufer_text,
    preserves_word_order,
    prufer_decode,
    prufer_encode,
)
from .corpus_io import (
    CorpusDocument,
    CorpusStats,
    SentenceEntry,
    corpus_stats,
    read_corpus,
    write_corpus,
)
from .errors import DepseqError, InvalidGraphError
from .legality import LegalityReport, Violation, check_formation, check_structure, legality_rates
from .metrics import ScoreReport, aggregate, score_sedp, score_sydp
from .model import (
    GRAPH,
    ISOLATED,
    TREE,
    Arc,
    DependencyGraph,
    Schema,
    Sentence,
    cycle_check,
    is_valid,
    validate_graph,
)
from .serializer import (
    SerializerConfig,
    SpecialToken,
    TokenSequence,
    apply_schema_prefix,
    build_token_registry,
    deserialize,
    positional_prompt,
    serialize,
)

__version__ = "0.1.0"

__all__ = [
    "Arc",
    "BracketNode",
    "BracketTree",
    "CorpusDocument",
    "CorpusStats",
    "DependencyGraph",
    "DepseqError",
    "GRAPH",
    "ISOLATED",
    "InvalidGraphError",
    "LegalityReport",
    "PruferSequence",
    "Schema",
    "ScoreReport",
    "Sentence",
    "SentenceEntry",
    "SerializerConfig",
    "SpecialToken",
    "TREE",
    "TokenSequence",
    "Violation",
    "aggregate",
    "apply_schema_prefix",
    "bracket_decode",
    "bracket_encode",
    "build_token_registry",
    "check_formation",
    "check_structure",
    "corpus_stats",
    "cycle_check",
    "deserialize",
    "is_valid",
    "legality_rates",
    "parse_bracket_text",
    "parse_prufer_text",
    "positional_prompt",
    "preserves_word_order",
    "prufer_decode",
    "prufer_encode",
    "read_corpus",
    "score_sedp",
    "score_sydp",
    "serialize",
    "validate_graph",
    "write_corpus",
]
