"""Two-stage validation of generated sequences.

Formation legality asks whether a sequence has the dependency-unit shape
and covers the sentence; structural legality asks whether the decoded
structure is valid under the schema.  Structure is only checked once
formation passes, so corpus-level structural counts never exceed
formation counts.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .errors import DepseqError, PositionOutOfRangeError
from .model import DependencyGraph, Schema, Sentence, validate_graph
from .serializer import (
    DEFAULT_CONFIG,
    SerializerConfig,
    TokenSequence,
    assign_positions,
    deserialize,
    parse_unit,
    split_units,
)

FORMATION = "formation"
STRUCTURE = "structure"


@dataclass(frozen=True)
class Violation:
    sentence_id: int
    stage: str
    reason: str

    def render(self) -> str:
        return f"{self.sentence_id}\t{self.stage}\t{self.reason}"


@dataclass(frozen=True)
class LegalityReport:
    total: int
    formation_legal: int
    structural_legal: int
    violations: tuple[Violation, ...]

    @property
    def formation_rate(self) -> Optional[float]:
        return None if self.total == 0 else self.formation_legal / self.total

    @property
    def structural_rate(self) -> Optional[float]:
        return None if self.total == 0 else self.structural_legal / self.total

    def render(self) -> str:
        """Line-per-violation listing plus a summary footer."""
        lines = [v.render() for v in self.violations]

        def fmt(rate):
            return "n/a" if rate is None else f"{rate:.4f}"

        lines.append(f"# total\t{self.total}")
        lines.append(f"# formation-legal\t{self.formation_legal}\t{fmt(self.formation_rate)}")
        lines.append(f"# structural-legal\t{self.structural_legal}\t{fmt(self.structural_rate)}")
        return "\n".join(lines)


def check_formation(sentence: Sentence, output: TokenSequence, schema: Schema,
                    config: SerializerConfig = DEFAULT_CONFIG) -> Optional[str]:
    """None if the sequence is well-formed, else the reason it is not.

    Well-formed: splits on [SPT] into ``word rel head`` units, the unit
    words scan-match the sentence in order with every word covered, head
    numbers are in range (or ``no`` under [NO]) and all relation tokens are
    known.
    """
    n = len(sentence)
    try:
        units = [parse_unit(u, schema, config) for u in split_units(output)]
        for u in units:
            if u.head is not None and not 1 <= u.head <= n:
                raise PositionOutOfRangeError(f"head {u.head} out of range 1..{n}")
        assign_positions(sentence, units)
    except DepseqError as e:
        return str(e)
    return None


def check_structure(sentence: Sentence, output: TokenSequence, schema: Schema,
                    config: SerializerConfig = DEFAULT_CONFIG) -> Optional[str]:
    """None if the decoded structure is schema-valid, else the reason.

    Callers must establish formation legality first; the same reasons come
    back here otherwise.
    """
    try:
        graph = deserialize(sentence, output, schema, config)
    except DepseqError as e:
        return str(e)
    violations = validate_graph(graph, schema)
    if violations:
        return "; ".join(violations)
    return None


def legality_rates(outputs: Iterable[tuple[Sentence, TokenSequence]], schema: Schema,
                   config: SerializerConfig = DEFAULT_CONFIG) -> LegalityReport:
    """Aggregate formation/structure checks over a corpus of outputs."""
    total = 0
    formation_ok = 0
    structure_ok = 0
    violations: list[Violation] = []
    for sid, (sentence, output) in enumerate(outputs, start=1):
        total += 1
        reason = check_formation(sentence, output, schema, config)
        if reason is not None:
            violations.append(Violation(sid, FORMATION, reason))
            continue
        formation_ok += 1
        reason = check_structure(sentence, output, schema, config)
        if reason is not None:
            violations.append(Violation(sid, STRUCTURE, reason))
            continue
        structure_ok += 1
    return LegalityReport(total, formation_ok, structure_ok, tuple(violations))
