"""Flattening dependency structures into token sequences and back.

The forward direction emits one *dependency unit* per arc:

    word [relation] head-position

separated by ``[SPT]``.  Units are ordered by dependent position, then by
head position, so the dependent words read left to right follow the
sentence order.  Isolated words render as ``word [NO] no``.  The inverse
direction resolves dependent words with a left-to-right scan over the
sentence (never by string search), which is what disambiguates repeated
words.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Iterable, Optional, Sequence, Union

from .errors import (
    DuplicateSurfaceError,
    InvalidGraphError,
    MalformedUnitError,
    PositionOutOfRangeError,
    UnknownRelationError,
    WordMismatchError,
)
from .model import (
    ISOLATED,
    Arc,
    DependencyGraph,
    Schema,
    Sentence,
    validate_graph,
)

# SpecialToken kinds.
REL = "rel"
SPT = "spt"
PID = "pid"
NO = "no"
SCHEMA_PREFIX = "schema-prefix"

RELATION_MODE_SPECIAL = "special"
RELATION_MODE_WORD_MAP = "word-map"


@dataclass(frozen=True)
class SpecialToken:
    kind: str
    surface: str
    label: Optional[str] = None


SPT_TOKEN = SpecialToken(SPT, "[SPT]")
PID_TOKEN = SpecialToken(PID, "[PID]")
NO_TOKEN = SpecialToken(NO, "[NO]")


def relation_token(label: str, schema_name: Optional[str] = None) -> SpecialToken:
    surface = f"[{schema_name}:{label}]" if schema_name else f"[{label}]"
    return SpecialToken(REL, surface, label)


def schema_prefix_token(schema_name: str) -> SpecialToken:
    return SpecialToken(SCHEMA_PREFIX, f"[parse-{schema_name.lower()}]", schema_name)


class _NoMarker:
    """The literal word ``no`` standing in for the head of an isolated word."""

    def __repr__(self):
        return "NO_MARKER"


NO_MARKER = _NoMarker()

# A token sequence item: surface word (str), position number (int),
# special token, or the "no" head marker of an isolated unit.
Item = Union[str, int, SpecialToken, _NoMarker]


def render_item(item: Item) -> str:
    if isinstance(item, SpecialToken):
        return item.surface
    if isinstance(item, _NoMarker):
        return "no"
    return str(item)


@dataclass(frozen=True)
class TokenSequence:
    """An ordered sequence of words, numbers and special tokens."""

    items: tuple[Item, ...]

    def __init__(self, items: Iterable[Item]):
        items = tuple(items)
        for it in items:
            if isinstance(it, int) and it < 1:
                raise ValueError(f"position numbers must be >= 1, got {it}")
        object.__setattr__(self, "items", items)

    def __len__(self):
        return len(self.items)

    def render(self) -> str:
        """Canonical text form: items joined by single spaces."""
        return " ".join(render_item(it) for it in self.items)

    @classmethod
    def from_text(cls, text: str) -> "TokenSequence":
        """Parse the canonical text form back into items.

        Bracketed tokens become special tokens, digit runs become numbers
        and everything else stays a word.  The ``no`` marker of isolated
        units is left as a word; unit parsing treats the two alike.
        """
        items: list[Item] = []
        for tok in text.split():
            if tok.startswith("[") and tok.endswith("]") and len(tok) > 2:
                items.append(_classify_special(tok))
            elif tok.isdigit():
                items.append(int(tok))
            else:
                items.append(tok)
        return cls(items)


def _classify_special(surface: str) -> SpecialToken:
    if surface == SPT_TOKEN.surface:
        return SPT_TOKEN
    if surface == PID_TOKEN.surface:
        return PID_TOKEN
    if surface == NO_TOKEN.surface:
        return NO_TOKEN
    inner = surface[1:-1]
    if inner.startswith("parse-"):
        return SpecialToken(SCHEMA_PREFIX, surface, inner[len("parse-"):])
    if ":" in inner:
        return SpecialToken(REL, surface, inner.split(":", 1)[1])
    return SpecialToken(REL, surface, inner)


@dataclass(frozen=True)
class SerializerConfig:
    relation_mode: str = RELATION_MODE_SPECIAL
    positional_prompt: bool = True
    schema_prefix: Optional[str] = None
    relation_word_map: Optional[dict] = None

    def __post_init__(self):
        if self.relation_mode not in (RELATION_MODE_SPECIAL, RELATION_MODE_WORD_MAP):
            raise ValueError(f"unknown relation mode {self.relation_mode!r}")
        if self.relation_mode == RELATION_MODE_WORD_MAP and self.relation_word_map is None:
            raise ValueError("word-map relation mode requires relation_word_map")

    def require_total_map(self, schema: Schema) -> None:
        if self.relation_mode != RELATION_MODE_WORD_MAP:
            return
        missing = [r for r in schema.relations if r not in self.relation_word_map]
        if missing:
            raise UnknownRelationError(f"relation word map misses labels: {missing}")


DEFAULT_CONFIG = SerializerConfig()


def _render_relation(label: str, schema: Schema, config: SerializerConfig) -> Item:
    if label not in schema.relations:
        raise UnknownRelationError(f"relation {label!r} not in schema {schema.name!r}")
    if config.relation_mode == RELATION_MODE_WORD_MAP:
        try:
            return config.relation_word_map[label]
        except KeyError:
            raise UnknownRelationError(f"relation {label!r} missing from word map") from None
    return relation_token(label)


def serialize(sentence: Sentence, graph: DependencyGraph, schema: Schema,
              config: SerializerConfig = DEFAULT_CONFIG) -> TokenSequence:
    """Flatten (sentence, graph) into the dependency-unit sequence."""
    if graph.n != len(sentence):
        raise InvalidGraphError([f"graph length {graph.n} != sentence length {len(sentence)}"])
    violations = validate_graph(graph, schema)
    if violations:
        raise InvalidGraphError(violations)
    config.require_total_map(schema)

    items: list[Item] = []
    for arc in graph.arcs:  # canonical order: dependent, then head
        if items:
            items.append(SPT_TOKEN)
        items.append(sentence.word(arc.dependent))
        if arc.is_isolated:
            items.append(NO_TOKEN)
            items.append(NO_MARKER)
        else:
            items.append(_render_relation(arc.relation, schema, config))
            items.append(arc.head)
    return TokenSequence(items)


def positional_prompt(sentence: Sentence,
                      config: SerializerConfig = DEFAULT_CONFIG) -> TokenSequence:
    """Interleave each word with its position: ``w [PID] i [SPT] ...``.

    With the prompt disabled in the config this is the identity rendering
    of the raw word sequence.
    """
    if not config.positional_prompt:
        return TokenSequence(sentence.words)
    items: list[Item] = []
    for i, w in enumerate(sentence.words, start=1):
        if items:
            items.append(SPT_TOKEN)
        items.append(w)
        items.append(PID_TOKEN)
        items.append(i)
    return TokenSequence(items)


def apply_schema_prefix(seq: TokenSequence, schema: Schema) -> TokenSequence:
    """Prepend the schema prefix token and a separator.  Not idempotent."""
    return TokenSequence((schema_prefix_token(schema.name), SPT_TOKEN) + seq.items)


# --- unit parsing (shared by the inverse serializer and legality checks) ---

@dataclass(frozen=True)
class ParsedUnit:
    word: str
    relation: Optional[str]   # None for isolated units
    head: Optional[int]       # None for isolated units


def split_units(seq: TokenSequence) -> list[list[Item]]:
    units: list[list[Item]] = [[]]
    for it in seq.items:
        if isinstance(it, SpecialToken) and it.kind == SPT:
            units.append([])
        else:
            units[-1].append(it)
    return units


def parse_unit(unit: Sequence[Item], schema: Schema, config: SerializerConfig) -> ParsedUnit:
    """Parse one ``word rel head`` triple; raises MalformedUnitError otherwise."""
    if len(unit) != 3:
        raise MalformedUnitError(
            f"unit has {len(unit)} items, expected 3: {' '.join(render_item(i) for i in unit)!r}")
    word_it, rel_it, head_it = unit
    if isinstance(word_it, SpecialToken) or isinstance(word_it, _NoMarker):
        raise MalformedUnitError(f"unit does not start with a word: {render_item(word_it)!r}")
    word = render_item(word_it)

    if isinstance(rel_it, SpecialToken) and rel_it.kind == NO:
        if not (isinstance(head_it, _NoMarker) or render_item(head_it) == "no"):
            raise MalformedUnitError("[NO] must be followed by the word 'no'")
        return ParsedUnit(word, None, None)

    if isinstance(head_it, _NoMarker) or (isinstance(head_it, str) and head_it == "no"):
        raise MalformedUnitError("'no' head requires the [NO] relation token")
    if not isinstance(head_it, int):
        raise MalformedUnitError(f"head is not a position number: {render_item(head_it)!r}")

    if config.relation_mode == RELATION_MODE_WORD_MAP:
        if isinstance(rel_it, SpecialToken):
            raise MalformedUnitError(
                f"special relation token {rel_it.surface!r} under word-map mode")
        inverse = {w: r for r, w in config.relation_word_map.items()}
        label = inverse.get(render_item(rel_it))
        if label is None:
            raise UnknownRelationError(f"unmapped relation word {render_item(rel_it)!r}")
    else:
        if not (isinstance(rel_it, SpecialToken) and rel_it.kind == REL):
            raise MalformedUnitError(f"expected a relation token, got {render_item(rel_it)!r}")
        label = rel_it.label
        if label not in schema.relations:
            raise UnknownRelationError(f"unknown relation {label!r}")
    return ParsedUnit(word, label, head_it)


def _scan(sentence: Sentence, units: Sequence[ParsedUnit],
          strict: bool) -> Optional[list[int]]:
    """One backtracking pass of the position scan; None if no parse exists.

    ``strict`` demands strictly ascending heads within a multi-head run
    (the form the serializer emits); the relaxed pass also accepts equal
    heads so that duplicated units decode into duplicate arcs.
    """
    n = len(sentence)
    m = len(units)
    dead: set[tuple[int, int]] = set()
    assignment: list[int] = []

    def extend(i: int, pos: int) -> bool:
        # units[:i] assigned, current position pos (0 before any binding)
        if i == m:
            return pos == n
        if (i, pos) in dead or m - i < n - pos:
            dead.add((i, pos))
            return False
        unit = units[i]
        # Advance to the next position.
        if pos < n and unit.word == sentence.word(pos + 1):
            assignment.append(pos + 1)
            if extend(i + 1, pos + 1):
                return True
            assignment.pop()
        # Stay on the current position (multi-head continuation).
        prev = units[i - 1] if i > 0 else None
        if (prev is not None and pos >= 1 and unit.word == sentence.word(pos)
                and prev.head is not None and unit.head is not None
                and (unit.head > prev.head or (not strict and unit.head >= prev.head))):
            assignment.append(pos)
            if extend(i + 1, pos):
                return True
            assignment.pop()
        dead.add((i, pos))
        return False

    if extend(0, 0):
        return assignment
    return None


def assign_positions(sentence: Sentence, units: Sequence[ParsedUnit]) -> list[int]:
    """Bind each unit's dependent word to a sentence position.

    The scan walks the sentence left to right.  A unit normally advances to
    the next position (its word must match); a run of units may stay on one
    position to express multiple heads, with ascending head numbers.  Every
    position must receive at least one unit (full coverage); backtracking
    resolves runs that a greedy scan would mis-bind.  A relaxed second pass
    accepts duplicated units (equal heads in a run) so they can surface as
    duplicate-arc violations downstream.
    """
    n = len(sentence)
    m = len(units)
    if m < n:
        raise WordMismatchError(f"{m} units cannot cover {n} words")
    result = _scan(sentence, units, strict=True)
    if result is None:
        result = _scan(sentence, units, strict=False)
    if result is None:
        raise WordMismatchError(_describe_scan_failure(sentence, units))
    return result


def _describe_scan_failure(sentence: Sentence, units: Sequence[ParsedUnit]) -> str:
    """Best-effort diagnosis for an unparseable unit sequence."""
    pos = 0
    n = len(sentence)
    for i, unit in enumerate(units):
        if pos < n and unit.word == sentence.word(pos + 1):
            pos += 1
        elif not (pos >= 1 and unit.word == sentence.word(pos)):
            expected = sentence.word(pos + 1) if pos < n else "<end of sentence>"
            return (f"unit {i + 1}: dependent word {unit.word!r} does not match "
                    f"expected word {expected!r}")
    if pos < n:
        return f"uncovered word at position {pos + 1}"
    return "unit sequence does not align with the sentence"


def deserialize(sentence: Sentence, output: TokenSequence, schema: Schema,
                config: SerializerConfig = DEFAULT_CONFIG) -> DependencyGraph:
    """Invert :func:`serialize`: recover the dependency graph from a sequence."""
    config.require_total_map(schema)
    n = len(sentence)
    units = [parse_unit(u, schema, config) for u in split_units(output)]
    for u in units:
        if u.head is not None and not 1 <= u.head <= n:
            raise PositionOutOfRangeError(f"head {u.head} out of range 1..{n}")
    positions = assign_positions(sentence, units)
    arcs = []
    for u, pos in zip(units, positions):
        if u.head is None:
            arcs.append(Arc(pos, ISOLATED, None))
        else:
            arcs.append(Arc(pos, u.relation, u.head))
    return DependencyGraph(n, arcs)


def build_token_registry(schemata: Sequence[Schema],
                         config: SerializerConfig = DEFAULT_CONFIG,
                         with_prefixes: bool = False) -> tuple[SpecialToken, ...]:
    """The ordered special-token vocabulary for a set of schemata.

    Fixed specials first, then relation tokens in schema order, then schema
    prefixes.  Relation labels shared between schemata are disambiguated by
    folding the schema name into the surface.
    """
    tokens: list[SpecialToken] = [SPT_TOKEN, PID_TOKEN, NO_TOKEN]
    if config.relation_mode == RELATION_MODE_SPECIAL:
        multi = len(schemata) > 1
        label_owners: dict[str, str] = {}
        colliding: set[str] = set()
        if multi:
            for s in schemata:
                for r in s.relations:
                    if r in label_owners and label_owners[r] != s.name:
                        colliding.add(r)
                    label_owners.setdefault(r, s.name)
        for s in schemata:
            for r in s.relations:
                tok = relation_token(r, s.name if r in colliding else None)
                if any(t.surface == tok.surface for t in tokens):
                    if r in colliding:
                        raise DuplicateSurfaceError(f"surface {tok.surface!r} already registered")
                    continue  # same label, same surface: shared token
                tokens.append(tok)
    if with_prefixes:
        for s in schemata:
            tokens.append(schema_prefix_token(s.name))
    return tuple(tokens)
