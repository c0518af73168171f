"""Attachment-score metrics: UAS/LAS for trees, UF/LF for graphs.

Tree scoring is per word (head and optionally label accuracy); graph
scoring is F1 over arc sets, with isolated arcs contributing nothing.
Corpus aggregation is a micro-average: counts are summed and the
fractions recomputed.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Optional, Sequence

from .errors import LengthMismatchError, MixedKindsError
from .model import DependencyGraph

SYDP = "sydp"
SEDP = "sedp"


@dataclass(frozen=True)
class ScoreReport:
    kind: str
    words: int = 0
    correct_head_words: int = 0
    correct_head_label_words: int = 0
    gold_arcs: int = 0
    predicted_arcs: int = 0
    correct_unlabeled: int = 0
    correct_labeled: int = 0

    @property
    def uas(self) -> Optional[float]:
        if self.kind != SYDP:
            return None
        return self.correct_head_words / self.words if self.words else 0.0

    @property
    def las(self) -> Optional[float]:
        if self.kind != SYDP:
            return None
        return self.correct_head_label_words / self.words if self.words else 0.0

    @property
    def uf(self) -> Optional[float]:
        if self.kind != SEDP:
            return None
        return _f1(self.correct_unlabeled, self.predicted_arcs, self.gold_arcs)

    @property
    def lf(self) -> Optional[float]:
        if self.kind != SEDP:
            return None
        return _f1(self.correct_labeled, self.predicted_arcs, self.gold_arcs)

    def render(self) -> str:
        """Percentages to two decimals, one metric per line."""
        lines = []
        for name in ("uas", "las", "uf", "lf"):
            value = getattr(self, name)
            if value is not None:
                lines.append(f"{name.upper()}\t{100.0 * value:.2f}")
        return "\n".join(lines)

    def render_counts(self) -> str:
        fields = ("words", "correct_head_words", "correct_head_label_words",
                  "gold_arcs", "predicted_arcs", "correct_unlabeled", "correct_labeled")
        lines = [f"kind\t{self.kind}"]
        lines.extend(f"{f.replace('_', '-')}\t{getattr(self, f)}" for f in fields)
        return "\n".join(lines)


def _f1(correct: int, predicted: int, gold: int) -> float:
    # Zero-denominator cases score 0 by convention.
    if predicted == 0 or gold == 0:
        return 0.0
    p = correct / predicted
    r = correct / gold
    if p + r == 0.0:
        return 0.0
    return 2 * p * r / (p + r)


ExcludeWord = Callable[[int], bool]


def score_sydp(gold: DependencyGraph, pred: DependencyGraph,
               exclude: Optional[ExcludeWord] = None) -> ScoreReport:
    """Per-word head/label accuracy over two trees of the same length.

    The root self-arc counts as an ordinary word.  ``exclude`` can drop
    positions (e.g. punctuation) from the count; the default keeps all.
    """
    if gold.n != pred.n:
        raise LengthMismatchError(f"gold length {gold.n} != predicted length {pred.n}")
    gold_heads = {a.dependent: (a.head, a.relation) for a in gold.arcs}
    pred_heads = {a.dependent: (a.head, a.relation) for a in pred.arcs}
    words = correct_u = correct_l = 0
    for p in range(1, gold.n + 1):
        if exclude is not None and exclude(p):
            continue
        words += 1
        g = gold_heads.get(p)
        pr = pred_heads.get(p)
        if g is None or pr is None:
            continue
        if g[0] == pr[0]:
            correct_u += 1
            if g[1] == pr[1]:
                correct_l += 1
    return ScoreReport(SYDP, words=words, correct_head_words=correct_u,
                       correct_head_label_words=correct_l)


def score_sedp(gold: DependencyGraph, pred: DependencyGraph) -> ScoreReport:
    """Arc-set F1 over two graphs of the same length.

    Isolated arcs are not arcs for scoring purposes; root self-arcs are.
    """
    if gold.n != pred.n:
        raise LengthMismatchError(f"gold length {gold.n} != predicted length {pred.n}")
    gold_l = {(a.dependent, a.head, a.relation) for a in gold.arcs if not a.is_isolated}
    pred_l = {(a.dependent, a.head, a.relation) for a in pred.arcs if not a.is_isolated}
    gold_u = {(d, h) for d, h, _ in gold_l}
    pred_u = {(d, h) for d, h, _ in pred_l}
    return ScoreReport(
        SEDP,
        gold_arcs=len(gold_u),
        predicted_arcs=len(pred_u),
        correct_unlabeled=len(gold_u & pred_u),
        correct_labeled=len(gold_l & pred_l),
    )


def aggregate(reports: Sequence[ScoreReport]) -> ScoreReport:
    """Micro-average: sum counts, recompute fractions."""
    reports = list(reports)
    if not reports:
        raise MixedKindsError("nothing to aggregate")
    kinds = {r.kind for r in reports}
    if len(kinds) > 1:
        raise MixedKindsError(f"cannot mix metric kinds {sorted(kinds)}")
    kind = kinds.pop()
    return ScoreReport(
        kind,
        words=sum(r.words for r in reports),
        correct_head_words=sum(r.correct_head_words for r in reports),
        correct_head_label_words=sum(r.correct_head_label_words for r in reports),
        gold_arcs=sum(r.gold_arcs for r in reports),
        predicted_arcs=sum(r.predicted_arcs for r in reports),
        correct_unlabeled=sum(r.correct_unlabeled for r in reports),
        correct_labeled=sum(r.correct_labeled for r in reports),
    )
