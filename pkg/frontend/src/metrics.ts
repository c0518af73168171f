/**
 * Attachment-score metrics: UAS/LAS per word for trees, UF/LF arc-set F1
 * for graphs. Corpus aggregation is a micro-average over counts.
 */

import { DepseqError, Graph } from "./model.js";

export type MetricKind = "sydp" | "sedp";

export interface ScoreCounts {
  kind: MetricKind;
  words: number;
  correctHeadWords: number;
  correctHeadLabelWords: number;
  goldArcs: number;
  predictedArcs: number;
  correctUnlabeled: number;
  correctLabeled: number;
}

function emptyCounts(kind: MetricKind): ScoreCounts {
  return {
    kind,
    words: 0,
    correctHeadWords: 0,
    correctHeadLabelWords: 0,
    goldArcs: 0,
    predictedArcs: 0,
    correctUnlabeled: 0,
    correctLabeled: 0,
  };
}

function f1(correct: number, predicted: number, gold: number): number {
  if (predicted === 0 || gold === 0) return 0;
  const p = correct / predicted;
  const r = correct / gold;
  if (p + r === 0) return 0;
  return (2 * p * r) / (p + r);
}

export function uas(c: ScoreCounts): number {
  return c.words === 0 ? 0 : c.correctHeadWords / c.words;
}

export function las(c: ScoreCounts): number {
  return c.words === 0 ? 0 : c.correctHeadLabelWords / c.words;
}

export function uf(c: ScoreCounts): number {
  return f1(c.correctUnlabeled, c.predictedArcs, c.goldArcs);
}

export function lf(c: ScoreCounts): number {
  return f1(c.correctLabeled, c.predictedArcs, c.goldArcs);
}

export function scoreSydp(
  gold: Graph,
  pred: Graph,
  exclude?: (position: number) => boolean,
): ScoreCounts {
  if (gold.n !== pred.n) {
    throw new DepseqError("LENGTH-MISMATCH", `gold length ${gold.n} != predicted length ${pred.n}`);
  }
  const goldHeads = new Map(gold.arcs.map((a) => [a.dependent, a]));
  const predHeads = new Map(pred.arcs.map((a) => [a.dependent, a]));
  const counts = emptyCounts("sydp");
  for (let p = 1; p <= gold.n; p++) {
    if (exclude !== undefined && exclude(p)) continue;
    counts.words += 1;
    const g = goldHeads.get(p);
    const r = predHeads.get(p);
    if (g === undefined || r === undefined) continue;
    if (g.head === r.head) {
      counts.correctHeadWords += 1;
      if (g.relation === r.relation) counts.correctHeadLabelWords += 1;
    }
  }
  return counts;
}

export function scoreSedp(gold: Graph, pred: Graph): ScoreCounts {
  if (gold.n !== pred.n) {
    throw new DepseqError("LENGTH-MISMATCH", `gold length ${gold.n} != predicted length ${pred.n}`);
  }
  const labeled = (g: Graph) =>
    new Set(g.arcs.filter((a) => a.head !== null).map((a) => `${a.dependent}:${a.head}:${a.relation}`));
  const unlabeled = (g: Graph) =>
    new Set(g.arcs.filter((a) => a.head !== null).map((a) => `${a.dependent}:${a.head}`));
  const goldL = labeled(gold);
  const predL = labeled(pred);
  const goldU = unlabeled(gold);
  const predU = unlabeled(pred);
  const counts = emptyCounts("sedp");
  counts.goldArcs = goldU.size;
  counts.predictedArcs = predU.size;
  for (const key of predU) if (goldU.has(key)) counts.correctUnlabeled += 1;
  for (const key of predL) if (goldL.has(key)) counts.correctLabeled += 1;
  return counts;
}

export function aggregate(reports: ScoreCounts[]): ScoreCounts {
  if (reports.length === 0) {
    throw new DepseqError("MIXED-KINDS", "nothing to aggregate");
  }
  const kinds = new Set(reports.map((r) => r.kind));
  if (kinds.size > 1) {
    throw new DepseqError("MIXED-KINDS", `cannot mix metric kinds ${[...kinds].sort().join(", ")}`);
  }
  const total = emptyCounts(reports[0].kind);
  for (const r of reports) {
    total.words += r.words;
    total.correctHeadWords += r.correctHeadWords;
    total.correctHeadLabelWords += r.correctHeadLabelWords;
    total.goldArcs += r.goldArcs;
    total.predictedArcs += r.predictedArcs;
    total.correctUnlabeled += r.correctUnlabeled;
    total.correctLabeled += r.correctLabeled;
  }
  return total;
}
