"""Readers and writers for treebank and graphbank file formats.

Supported formats:

* ``conllx``    — 8 tab-separated columns: ID FORM LEMMA CPOS POS FEATS HEAD DEPREL
* ``conllu``    — 10 columns (adds DEPS MISC); ``#`` comments and range /
                  decimal ID lines are preserved as opaque pass-through
* ``sdp2015``   — columnar graphbank: ID FORM LEMMA POS TOP PRED FRAME ARG*,
                  one ARG column per predicate; supports isolated words
* ``semeval16`` — CoNLL-like with duplicated IDs for multi-head words;
                  isolated words are rejected
* ``seqtext``   — two-line pairs (prompt-rendered input, serialized target)
                  separated by blank lines

HEAD 0 maps to the root self-arc convention and back.  Non-core columns
are carried through byte-exact on a read/write round-trip.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .errors import CorpusFormatError, IncompatibleFormatError
from .model import (
    GRAPH,
    ISOLATED,
    TREE,
    Arc,
    DependencyGraph,
    Schema,
    Sentence,
    validate_graph,
)
from .serializer import (
    DEFAULT_CONFIG,
    SerializerConfig,
    TokenSequence,
    deserialize,
    positional_prompt,
    serialize,
)

CONLLX = "conllx"
CONLLU = "conllu"
SDP2015 = "sdp2015"
SEMEVAL16 = "semeval16"
SEQTEXT = "seqtext"

FORMATS = (CONLLX, CONLLU, SDP2015, SEMEVAL16, SEQTEXT)


@dataclass
class SentenceEntry:
    sentence: Sentence
    graph: DependencyGraph
    # Opaque per-format extras: comments, non-core columns, skipped lines.
    passthrough: dict = field(default_factory=dict)


@dataclass
class CorpusDocument:
    sentences: list[SentenceEntry]
    source_format: str
    schema: Schema


def _blocks(text: str):
    """Yield (starting line number, list of (lineno, line)) per blank-separated block."""
    block: list[tuple[int, str]] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if line.strip() == "":
            if block:
                yield block
                block = []
        else:
            block.append((lineno, line))
    if block:
        yield block


def _infer_schema(name: str, labels: Iterable[str], root_labels: set[str],
                  structure: str, multi_head: bool, isolated: bool) -> Schema:
    if len(root_labels) > 1:
        raise CorpusFormatError(f"inconsistent root relation labels: {sorted(root_labels)}")
    root_label = next(iter(root_labels)) if root_labels else "root"
    relations = list(dict.fromkeys(labels))
    if root_label not in relations:
        relations.append(root_label)
    return Schema(name, relations, root_label, structure,
                  allows_multi_head=multi_head, allows_isolated=isolated)


def _validated(entry_arcs, n, schema, lineno):
    graph = DependencyGraph(n, entry_arcs)
    violations = validate_graph(graph, schema)
    if violations:
        raise CorpusFormatError("invalid structure: " + "; ".join(violations), line=lineno)
    return graph


# --- CoNLL trees ---------------------------------------------------------

def read_conll(text: str, name: Optional[str] = None) -> CorpusDocument:
    """Read 8- or 10-column CoNLL blocks into a tree corpus."""
    raw_entries = []
    labels: list[str] = []
    root_labels: set[str] = set()
    ncols_seen = set()

    for block in _blocks(text):
        comments: list[str] = []
        extras: list[tuple[int, str]] = []  # (insert before word index, raw line)
        words: list[str] = []
        columns: list[list[str]] = []
        heads: list[tuple[int, str, int]] = []  # (dependent, deprel, head) 0-based head col
        first_line = block[0][0]
        for lineno, line in block:
            if line.startswith("#"):
                comments.append(line)
                continue
            cols = line.split("\t")
            if len(cols) not in (8, 10):
                raise CorpusFormatError(f"expected 8 or 10 columns, got {len(cols)}",
                                        line=lineno)
            ncols_seen.add(len(cols))
            if "-" in cols[0] or "." in cols[0]:
                # Multiword-token range or empty node: opaque pass-through.
                extras.append((len(words), line))
                continue
            if not cols[0].isdigit():
                raise CorpusFormatError(f"bad token id {cols[0]!r}", line=lineno)
            if not cols[6].isdigit():
                raise CorpusFormatError(f"non-integer head {cols[6]!r}", line=lineno)
            words.append(cols[1])
            columns.append([cols[2], cols[3], cols[4], cols[5]] + (cols[8:] if len(cols) == 10 else []))
            heads.append((len(words), cols[7], int(cols[6]), int(cols[0])))
        if not words:
            continue
        n = len(words)
        # Source ids may skip (after range lines they usually do not);
        # positions are renumbered to contiguous 1..n and the map retained.
        id_map = {orig: dep for dep, _, _, orig in heads}
        renumbered = any(orig != dep for dep, _, _, orig in heads)
        if renumbered:
            import warnings
            warnings.warn(f"non-contiguous token ids renumbered near line {first_line}")
        arcs = []
        for dep, rel, head, _ in heads:
            if head == 0:
                arcs.append(Arc(dep, rel, dep))
                root_labels.add(rel)
            else:
                if head not in id_map:
                    raise CorpusFormatError(f"head {head} past sentence end ({n} words)",
                                            line=first_line)
                arcs.append(Arc(dep, rel, id_map[head]))
            labels.append(rel)
        passthrough = {"comments": comments, "columns": columns, "extras": extras}
        if renumbered:
            passthrough["renumbering"] = id_map
        raw_entries.append((first_line, words, arcs, passthrough))

    if not raw_entries:
        raise CorpusFormatError("no sentences found")
    fmt = CONLLU if ncols_seen == {10} else CONLLX if ncols_seen == {8} else CONLLU
    schema = _infer_schema(name or fmt, labels, root_labels, TREE, False, False)
    entries = []
    for first_line, words, arcs, passthrough in raw_entries:
        graph = _validated(arcs, len(words), schema, first_line)
        entries.append(SentenceEntry(Sentence(words), graph, passthrough))
    return CorpusDocument(entries, fmt, schema)


def _write_conll(doc: CorpusDocument, ncols: int) -> str:
    if not doc.schema.is_tree and any(
            len([a for a in e.graph.arcs_for(p) if not a.is_isolated]) != 1
            for e in doc.sentences for p in range(1, e.graph.n + 1)):
        raise IncompatibleFormatError("graph corpus does not fit a single-head CoNLL tree")
    out = []
    for entry in doc.sentences:
        pt = entry.passthrough
        out.extend(pt.get("comments", ()))
        extras = dict()
        for idx, line in pt.get("extras", ()):
            extras.setdefault(idx, []).append(line)
        columns = pt.get("columns")
        heads = {a.dependent: a for a in entry.graph.arcs}
        for p in range(1, entry.graph.n + 1):
            out.extend(extras.get(p - 1, ()))
            arc = heads[p]
            if arc.is_isolated:
                raise IncompatibleFormatError("isolated words cannot be written as CoNLL")
            head = 0 if arc.is_self_loop else arc.head
            extra = columns[p - 1] if columns else ["_"] * (4 + (2 if ncols == 10 else 0))
            lemma, cpos, pos, feats = extra[0], extra[1], extra[2], extra[3]
            row = [str(p), entry.sentence.word(p), lemma, cpos, pos, feats,
                   str(head), arc.relation]
            if ncols == 10:
                deps = extra[4] if len(extra) > 4 else "_"
                misc = extra[5] if len(extra) > 5 else "_"
                row.extend([deps, misc])
            out.append("\t".join(row))
        out.extend(extras.get(entry.graph.n, ()))
        out.append("")
    return "\n".join(out) + "\n" if out else ""


# --- SDP 2015 graphbank --------------------------------------------------

def read_sdp(text: str, flavor: str = SDP2015, name: Optional[str] = None) -> CorpusDocument:
    if flavor == SDP2015:
        return _read_sdp2015(text, name)
    if flavor == SEMEVAL16:
        return _read_semeval16(text, name)
    raise ValueError(f"unknown SDP flavor {flavor!r}")


def _read_sdp2015(text: str, name: Optional[str]) -> CorpusDocument:
    raw_entries = []
    labels: list[str] = []

    for block in _blocks(text):
        comments = []
        rows = []
        first_line = block[0][0]
        for lineno, line in block:
            if line.startswith("#"):
                comments.append(line)
                continue
            cols = line.split("\t")
            if len(cols) < 7:
                raise CorpusFormatError(f"expected at least 7 columns, got {len(cols)}",
                                        line=lineno)
            if not cols[0].isdigit():
                raise CorpusFormatError(f"bad token id {cols[0]!r}", line=lineno)
            rows.append((lineno, cols))
        if not rows:
            continue
        n = len(rows)
        predicates = [int(cols[0]) for _, cols in rows if cols[5] == "+"]
        arcs = []
        words = []
        columns = []
        pred_flags = []
        for _, cols in rows:
            words.append(cols[1])
            columns.append([cols[2], cols[3]])  # lemma, pos
            pred_flags.append((cols[5], cols[6]))  # pred mark, frame
        for lineno, cols in rows:
            dep = int(cols[0])
            args = cols[7:]
            if len(args) != len(predicates):
                raise CorpusFormatError(
                    f"{len(args)} argument columns for {len(predicates)} predicates",
                    line=lineno)
            has_head = False
            for j, label in enumerate(args):
                if label != "_":
                    arcs.append(Arc(dep, label, predicates[j]))
                    labels.append(label)
                    has_head = True
            if cols[4] == "+":
                arcs.append(Arc(dep, "root", dep))
                has_head = True
            if not has_head:
                arcs.append(Arc(dep, ISOLATED, None))
        raw_entries.append((first_line, words, arcs,
                            {"comments": comments, "columns": columns,
                             "pred_flags": pred_flags}))

    if not raw_entries:
        raise CorpusFormatError("no sentences found")
    schema = _infer_schema(name or SDP2015, labels, {"root"}, GRAPH,
                           multi_head=True, isolated=True)
    entries = []
    for first_line, words, arcs, passthrough in raw_entries:
        graph = _validated(arcs, len(words), schema, first_line)
        entries.append(SentenceEntry(Sentence(words), graph, passthrough))
    return CorpusDocument(entries, SDP2015, schema)


def _write_sdp2015(doc: CorpusDocument) -> str:
    out = []
    for entry in doc.sentences:
        pt = entry.passthrough
        out.extend(pt.get("comments", ()))
        n = entry.graph.n
        columns = pt.get("columns")
        pred_flags = pt.get("pred_flags")
        derived_preds = sorted({a.head for a in entry.graph.arcs
                                if not a.is_isolated and not a.is_self_loop})
        if pred_flags:
            flagged = [p for p in range(1, n + 1) if pred_flags[p - 1][0] == "+"]
            predicates = sorted(set(flagged) | set(derived_preds))
        else:
            predicates = derived_preds
        heads: dict[int, dict[int, str]] = {}
        tops = set()
        isolated = set()
        for a in entry.graph.arcs:
            if a.is_isolated:
                isolated.add(a.dependent)
            elif a.is_self_loop:
                tops.add(a.dependent)
            else:
                heads.setdefault(a.dependent, {})[a.head] = a.relation
        for p in range(1, n + 1):
            lemma, pos = (columns[p - 1] if columns else ("_", "_"))
            pred = "+" if p in predicates else "-"
            frame = pred_flags[p - 1][1] if pred_flags else "_"
            top = "+" if p in tops else "-"
            args = [heads.get(p, {}).get(q, "_") for q in predicates]
            out.append("\t".join([str(p), entry.sentence.word(p), lemma, pos,
                                  top, pred, frame] + args))
        out.append("")
    return "\n".join(out) + "\n" if out else ""


# --- SemEval-16 style multi-head CoNLL -----------------------------------

def _read_semeval16(text: str, name: Optional[str]) -> CorpusDocument:
    raw_entries = []
    labels: list[str] = []
    root_labels: set[str] = set()

    for block in _blocks(text):
        comments = []
        words: list[str] = []
        columns: list[list[str]] = []
        arcs: list[Arc] = []
        first_line = block[0][0]
        last_id = 0
        for lineno, line in block:
            if line.startswith("#"):
                comments.append(line)
                continue
            cols = line.split("\t")
            if len(cols) != 8:
                raise CorpusFormatError(f"expected 8 columns, got {len(cols)}", line=lineno)
            if not cols[0].isdigit():
                raise CorpusFormatError(f"bad token id {cols[0]!r}", line=lineno)
            tid = int(cols[0])
            if tid == last_id:
                pass  # extra head row for the same word
            elif tid == last_id + 1:
                words.append(cols[1])
                columns.append([cols[2], cols[3], cols[4], cols[5]])
                last_id = tid
            else:
                raise CorpusFormatError(f"non-contiguous token id {tid}", line=lineno)
            if cols[6] == "_":
                raise CorpusFormatError(
                    "ISOLATED-NOT-ALLOWED: word without a head", line=lineno)
            if not cols[6].isdigit():
                raise CorpusFormatError(f"non-integer head {cols[6]!r}", line=lineno)
            head = int(cols[6])
            rel = cols[7]
            if head == 0:
                arcs.append(Arc(tid, rel, tid))
                root_labels.add(rel)
            else:
                arcs.append(Arc(tid, rel, head))
            labels.append(rel)
        if not words:
            continue
        n = len(words)
        for a in arcs:
            if a.head is not None and a.head > n:
                raise CorpusFormatError(f"head {a.head} past sentence end ({n} words)",
                                        line=first_line)
        raw_entries.append((first_line, words, arcs,
                            {"comments": comments, "columns": columns}))

    if not raw_entries:
        raise CorpusFormatError("no sentences found")
    schema = _infer_schema(name or SEMEVAL16, labels, root_labels, GRAPH,
                           multi_head=True, isolated=False)
    entries = []
    for first_line, words, arcs, passthrough in raw_entries:
        graph = _validated(arcs, len(words), schema, first_line)
        entries.append(SentenceEntry(Sentence(words), graph, passthrough))
    return CorpusDocument(entries, SEMEVAL16, schema)


def _write_semeval16(doc: CorpusDocument) -> str:
    out = []
    for entry in doc.sentences:
        pt = entry.passthrough
        out.extend(pt.get("comments", ()))
        columns = pt.get("columns")
        for p in range(1, entry.graph.n + 1):
            arcs = entry.graph.arcs_for(p)
            if any(a.is_isolated for a in arcs):
                raise IncompatibleFormatError(
                    "ISOLATED-NOT-ALLOWED: isolated word cannot be written as semeval16")
            extra = columns[p - 1] if columns else ["_"] * 4
            for a in arcs:
                head = 0 if a.is_self_loop else a.head
                out.append("\t".join([str(p), entry.sentence.word(p)] + list(extra)
                                     + [str(head), a.relation]))
        out.append("")
    return "\n".join(out) + "\n" if out else ""


# --- sequence text pairs -------------------------------------------------

def write_seqtext(doc: CorpusDocument,
                  config: SerializerConfig = DEFAULT_CONFIG) -> str:
    """Two lines per sentence: prompt-rendered input and serialized target."""
    from .serializer import apply_schema_prefix
    out = []
    for entry in doc.sentences:
        prompt = positional_prompt(entry.sentence, config)
        if config.schema_prefix:
            prompt = apply_schema_prefix(prompt, doc.schema)
        target = serialize(entry.sentence, entry.graph, doc.schema, config)
        out.append(prompt.render())
        out.append(target.render())
        out.append("")
    return "\n".join(out)


def strip_prompt(line: str) -> list[str]:
    """Recover the raw words from a prompt-rendered input line."""
    toks = line.split()
    if toks and toks[0].startswith("[parse-"):
        toks = toks[2:] if len(toks) > 1 and toks[1] == "[SPT]" else toks[1:]
    if "[PID]" not in toks:
        return toks
    words = []
    i = 0
    while i < len(toks):
        words.append(toks[i])
        if i + 1 < len(toks) and toks[i + 1] == "[PID]":
            i += 3  # word [PID] number
            if i < len(toks) and toks[i] == "[SPT]":
                i += 1
        else:
            i += 1
    return words


def read_seqtext(text: str, schema: Schema,
                 config: SerializerConfig = DEFAULT_CONFIG) -> CorpusDocument:
    entries = []
    for block in _blocks(text):
        if len(block) != 2:
            raise CorpusFormatError("expected input/target line pairs",
                                    line=block[0][0])
        (_, input_line), (target_no, target_line) = block
        try:
            sentence = Sentence(strip_prompt(input_line))
            graph = deserialize(sentence, TokenSequence.from_text(target_line),
                                schema, config)
        except Exception as e:
            raise CorpusFormatError(str(e), line=target_no) from e
        entries.append(SentenceEntry(sentence, graph, {}))
    if not entries:
        raise CorpusFormatError("no sentences found")
    return CorpusDocument(entries, SEQTEXT, schema)


# --- dispatch ------------------------------------------------------------

def read_corpus(text: str, fmt: str, schema: Optional[Schema] = None,
                config: SerializerConfig = DEFAULT_CONFIG) -> CorpusDocument:
    if fmt in (CONLLX, CONLLU):
        return read_conll(text)
    if fmt in (SDP2015, SEMEVAL16):
        return read_sdp(text, fmt)
    if fmt == SEQTEXT:
        if schema is None:
            raise ValueError("seqtext reading requires a schema")
        return read_seqtext(text, schema, config)
    raise ValueError(f"unknown format {fmt!r}")


def write_corpus(doc: CorpusDocument, fmt: str,
                 config: SerializerConfig = DEFAULT_CONFIG) -> str:
    if fmt == CONLLX:
        return _write_conll(doc, 8)
    if fmt == CONLLU:
        return _write_conll(doc, 10)
    if fmt == SDP2015:
        return _write_sdp2015(doc)
    if fmt == SEMEVAL16:
        if doc.schema.allows_isolated and any(
                a.is_isolated for e in doc.sentences for a in e.graph.arcs):
            raise IncompatibleFormatError(
                "ISOLATED-NOT-ALLOWED: corpus contains isolated words")
        return _write_semeval16(doc)
    if fmt == SEQTEXT:
        return write_seqtext(doc, config)
    raise ValueError(f"unknown format {fmt!r}")


# --- corpus statistics ---------------------------------------------------

@dataclass(frozen=True)
class CorpusStats:
    sentences: int
    words: int
    repeated_word_sentence_fraction: float
    isolated_word_fraction: float
    multi_head_word_fraction: float
    relation_histogram: dict
    max_sentence_length: int

    def render(self) -> str:
        lines = [
            f"sentences\t{self.sentences}",
            f"words\t{self.words}",
            f"repeated-word-sentences\t{self.repeated_word_sentence_fraction:.4f}",
            f"isolated-words\t{self.isolated_word_fraction:.4f}",
            f"multi-head-words\t{self.multi_head_word_fraction:.4f}",
            f"max-sentence-length\t{self.max_sentence_length}",
        ]
        for rel in sorted(self.relation_histogram):
            lines.append(f"relation\t{rel}\t{self.relation_histogram[rel]}")
        return "\n".join(lines)


def corpus_stats(doc: CorpusDocument) -> CorpusStats:
    sentences = len(doc.sentences)
    words = 0
    repeated = 0
    isolated = 0
    multi_head = 0
    histogram: dict[str, int] = {}
    max_len = 0
    for entry in doc.sentences:
        n = len(entry.sentence)
        words += n
        max_len = max(max_len, n)
        if len(set(entry.sentence.words)) < n:
            repeated += 1
        for p in range(1, n + 1):
            arcs = entry.graph.arcs_for(p)
            if any(a.is_isolated for a in arcs):
                isolated += 1
            elif len(arcs) > 1:
                multi_head += 1
        for a in entry.graph.arcs:
            if not a.is_isolated:
                histogram[a.relation] = histogram.get(a.relation, 0) + 1
    return CorpusStats(
        sentences=sentences,
        words=words,
        repeated_word_sentence_fraction=repeated / sentences if sentences else 0.0,
        isolated_word_fraction=isolated / words if words else 0.0,
        multi_head_word_fraction=multi_head / words if words else 0.0,
        relation_histogram=histogram,
        max_sentence_length=max_len,
    )
