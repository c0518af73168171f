"""Command-line interface.

Subcommands: serialize, deserialize, validate, score, stats, roundtrip.
Data goes to stdout or --output; diagnostics go to stderr.  Exit codes:
0 success, 1 usage or format error, 2 validation failure.
"""

from __future__ import annotations

import argparse
import json
import multiprocessing
import os
import sys
from typing import Optional

from . import corpus_io
from .alt_serializers import (
    bracket_decode,
    bracket_encode,
    preserves_word_order,
    prufer_decode,
    prufer_encode,
)
from .corpus_io import CorpusDocument, read_corpus, write_corpus
from .errors import DepseqError
from .legality import legality_rates
from .metrics import aggregate, score_sedp, score_sydp
from .model import GRAPH, TREE, Schema, Sentence
from .serializer import (
    RELATION_MODE_SPECIAL,
    RELATION_MODE_WORD_MAP,
    SerializerConfig,
    TokenSequence,
    apply_schema_prefix,
    deserialize,
    positional_prompt,
    serialize,
)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_ILLEGAL = 2


def load_schema_file(path: str) -> Schema:
    with open(path, encoding="utf-8") as f:
        spec = json.load(f)
    return Schema(
        spec["name"],
        spec["relations"],
        spec.get("root_label", "root"),
        GRAPH if spec.get("structure", "tree") == "graph" else TREE,
        allows_multi_head=spec.get("allows_multi_head", False),
        allows_isolated=spec.get("allows_isolated", False),
    )


def build_config(args) -> SerializerConfig:
    word_map = None
    mode = RELATION_MODE_SPECIAL
    if getattr(args, "relation_mode", "special") == "word-map":
        mode = RELATION_MODE_WORD_MAP
        if not getattr(args, "relation_word_map", None):
            raise DepseqError("--relation-mode word-map requires --relation-word-map FILE")
        with open(args.relation_word_map, encoding="utf-8") as f:
            word_map = json.load(f)
    return SerializerConfig(
        relation_mode=mode,
        positional_prompt=not getattr(args, "no_positional_prompt", False),
        schema_prefix=getattr(args, "prefix", None),
        relation_word_map=word_map,
    )


def read_input_corpus(args, config) -> CorpusDocument:
    with open(args.input, encoding="utf-8") as f:
        text = f.read()
    schema = load_schema_file(args.schema) if getattr(args, "schema", None) else None
    return read_corpus(text, args.format, schema=schema, config=config)


def emit(args, text: str) -> None:
    if getattr(args, "output", None):
        with open(args.output, "w", encoding="utf-8") as f:
            f.write(text)
    else:
        sys.stdout.write(text)


def _map_ordered(func, items, jobs: int):
    """Apply a pure function to items, optionally in parallel, in order."""
    if jobs <= 1 or len(items) < 2:
        return [func(it) for it in items]
    with multiprocessing.Pool(processes=jobs) as pool:
        return pool.map(func, items, chunksize=max(1, len(items) // (jobs * 4)))


class _SerializeWorker:
    def __init__(self, schema, config, kind):
        self.schema = schema
        self.config = config
        self.kind = kind

    def __call__(self, entry):
        prompt = positional_prompt(entry.sentence, self.config)
        if self.config.schema_prefix:
            prompt = apply_schema_prefix(prompt, self.schema)
        if self.kind == "unit":
            target = serialize(entry.sentence, entry.graph, self.schema, self.config)
            # Self-check before anything is written out.
            decoded = deserialize(entry.sentence, target, self.schema, self.config)
            if decoded.arcs != entry.graph.arcs:
                raise DepseqError(
                    f"round-trip self-check failed for sentence "
                    f"{' '.join(entry.sentence.words)!r}")
            rendered = target.render()
        elif self.kind == "prufer":
            rendered = prufer_encode(entry.sentence, entry.graph).render()
        elif self.kind == "bracket":
            rendered = bracket_encode(entry.sentence, entry.graph).render()
        else:
            raise DepseqError(f"unknown serializer {self.kind!r}")
        return prompt.render(), rendered


def cmd_serialize(args) -> int:
    config = build_config(args)
    doc = read_input_corpus(args, config)
    worker = _SerializeWorker(doc.schema, config, args.serializer)
    pairs = _map_ordered(worker, doc.sentences, args.jobs)
    lines = []
    for prompt, target in pairs:
        lines.append(prompt)
        lines.append(target)
        lines.append("")
    emit(args, "\n".join(lines))
    return EXIT_OK


def cmd_deserialize(args) -> int:
    config = build_config(args)
    if not args.schema:
        raise DepseqError("deserialize requires --schema FILE")
    schema = load_schema_file(args.schema)
    with open(args.input, encoding="utf-8") as f:
        doc = corpus_io.read_seqtext(f.read(), schema, config)
    emit(args, write_corpus(doc, args.format, config))
    return EXIT_OK


def _read_prediction_lines(path: str):
    with open(path, encoding="utf-8") as f:
        return [line.rstrip("\n") for line in f if line.strip() != ""]


def cmd_validate(args) -> int:
    config = build_config(args)
    doc = read_input_corpus(args, config)
    lines = _read_prediction_lines(args.predictions)
    if len(lines) != len(doc.sentences):
        raise DepseqError(
            f"{len(lines)} predictions for {len(doc.sentences)} sentences")
    outputs = [(entry.sentence, TokenSequence.from_text(line))
               for entry, line in zip(doc.sentences, lines)]
    report = legality_rates(outputs, doc.schema, config)
    emit(args, report.render() + "\n")
    return EXIT_OK if report.structural_legal == report.total else EXIT_ILLEGAL


class _ScoreWorker:
    def __init__(self, schema, config, lenient):
        self.schema = schema
        self.config = config
        self.lenient = lenient

    def __call__(self, pair):
        entry, line = pair
        try:
            pred = deserialize(entry.sentence, TokenSequence.from_text(line),
                               self.schema, self.config)
            if not self.lenient:
                from .model import validate_graph
                if validate_graph(pred, self.schema):
                    pred = None
        except DepseqError:
            pred = None
        from .metrics import SEDP, SYDP, ScoreReport
        if self.schema.is_tree:
            if pred is None:
                # Undecodable prediction: all words counted, none correct.
                return ScoreReport(SYDP, words=entry.graph.n)
            return score_sydp(entry.graph, pred)
        if pred is None:
            gold = score_sedp(entry.graph, entry.graph)
            return ScoreReport(SEDP, gold_arcs=gold.gold_arcs)
        return score_sedp(entry.graph, pred)


def cmd_score(args) -> int:
    config = build_config(args)
    gold = read_input_corpus(args, config)
    if args.pred_format == "lines":
        lines = _read_prediction_lines(args.predictions)
        if len(lines) != len(gold.sentences):
            raise DepseqError(
                f"{len(lines)} predictions for {len(gold.sentences)} sentences")
        worker = _ScoreWorker(gold.schema, config, args.lenient)
        reports = _map_ordered(worker, list(zip(gold.sentences, lines)), args.jobs)
    else:
        with open(args.predictions, encoding="utf-8") as f:
            pred_doc = read_corpus(f.read(), args.pred_format, config=config)
        if len(pred_doc.sentences) != len(gold.sentences):
            raise DepseqError("gold and prediction corpora differ in sentence count")
        if pred_doc.schema.name != gold.schema.name and not args.schema:
            raise DepseqError(
                f"mixed schemata {gold.schema.name!r} vs {pred_doc.schema.name!r}; "
                "pass --schema to arbitrate")
        score = score_sydp if gold.schema.is_tree else score_sedp
        reports = [score(g.graph, p.graph)
                   for g, p in zip(gold.sentences, pred_doc.sentences)]
    total = aggregate(reports)
    emit(args, total.render() + "\n")
    if args.counts:
        with open(args.counts, "w", encoding="utf-8") as f:
            f.write(total.render_counts() + "\n")
    return EXIT_OK


def cmd_stats(args) -> int:
    config = build_config(args)
    doc = read_input_corpus(args, config)
    emit(args, corpus_io.corpus_stats(doc).render() + "\n")
    return EXIT_OK


def cmd_roundtrip(args) -> int:
    config = build_config(args)
    doc = read_input_corpus(args, config)
    kinds = ["unit"]
    if doc.schema.is_tree:
        kinds += ["prufer", "bracket"]
    mismatches = 0
    order_stats = {k: 0 for k in kinds}
    lines = []
    for idx, entry in enumerate(doc.sentences, start=1):
        graphs = {}
        try:
            seq = serialize(entry.sentence, entry.graph, doc.schema, config)
            graphs["unit"] = deserialize(entry.sentence, seq, doc.schema, config)
            if doc.schema.is_tree:
                graphs["prufer"] = prufer_decode(
                    entry.sentence, prufer_encode(entry.sentence, entry.graph), doc.schema)
                graphs["bracket"] = bracket_decode(
                    entry.sentence, bracket_encode(entry.sentence, entry.graph))
        except DepseqError as e:
            raise DepseqError(f"sentence {idx}: {e}") from e
        for kind in kinds:
            if graphs[kind].arcs != entry.graph.arcs:
                mismatches += 1
                print(f"mismatch: sentence {idx}, serializer {kind}", file=sys.stderr)
                print(f"  words: {' '.join(entry.sentence.words)}", file=sys.stderr)
                print(f"  gold: {entry.graph.arcs}", file=sys.stderr)
                print(f"  got:  {graphs[kind].arcs}", file=sys.stderr)
            if preserves_word_order(entry.sentence, entry.graph, kind):
                order_stats[kind] += 1
    n = len(doc.sentences)
    for kind in kinds:
        lines.append(f"order-preserved\t{kind}\t{order_stats[kind]}/{n}")
    lines.append(f"mismatches\t{mismatches}")
    emit(args, "\n".join(lines) + "\n")
    return EXIT_OK if mismatches == 0 else EXIT_ILLEGAL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="depseq",
        description="Serialize, validate and score dependency structures.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, with_serializer=False):
        p.add_argument("input", help="input corpus file")
        p.add_argument("--format", default=corpus_io.CONLLU,
                       choices=list(corpus_io.FORMATS), help="input corpus format")
        p.add_argument("--schema", help="schema spec JSON file")
        p.add_argument("--relation-mode", default="special",
                       choices=["special", "word-map"])
        p.add_argument("--relation-word-map", help="JSON file mapping labels to words")
        p.add_argument("--no-positional-prompt", action="store_true")
        p.add_argument("--prefix", help="schema prefix name for input lines")
        p.add_argument("--lenient", action="store_true",
                       help="score decodable arcs of structurally illegal predictions")
        p.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
        p.add_argument("--output", help="output path (default stdout)")
        if with_serializer:
            p.add_argument("--serializer", default="unit",
                           choices=["unit", "prufer", "bracket"])

    p = sub.add_parser("serialize", help="corpus to sequence pairs")
    common(p, with_serializer=True)
    p.set_defaults(func=cmd_serialize)

    p = sub.add_parser("deserialize", help="sequence pairs to corpus")
    common(p)
    p.set_defaults(func=cmd_deserialize)

    p = sub.add_parser("validate", help="legality-check predicted sequences")
    common(p)
    p.add_argument("predictions", help="one rendered sequence per line")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("score", help="attachment scores against gold")
    common(p)
    p.add_argument("predictions")
    p.add_argument("--pred-format", default="lines",
                   choices=["lines"] + list(corpus_io.FORMATS))
    p.add_argument("--counts", help="write raw counts to this path")
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("stats", help="corpus statistics")
    common(p)
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("roundtrip", help="encode/decode consistency check")
    common(p)
    p.set_defaults(func=cmd_roundtrip)

    return parser


def main(argv: Optional[list] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (DepseqError, OSError, json.JSONDecodeError) as e:
        print(f"depseq: error: {e}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
