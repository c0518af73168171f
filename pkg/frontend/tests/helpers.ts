/**
 * Test helpers: a seeded PRNG, random structure generators mirroring the
 * primary test suite's, a minimal CoNLL-U writer for feeding the CLI, and
 * a runner that shells out to the reference CLI.
 */

import { execFileSync } from "node:child_process";
import { mkdtempSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

import { Arc, Graph, ISOLATED, Schema, makeArc, makeGraph, makeSchema } from "../src/model.js";

export const WORD_ALPHABET = ["a", "b", "c", "d", "e"];

export function mulberry32(seed: number): () => number {
  let state = seed >>> 0;
  return () => {
    state = (state + 0x6d2b79f5) >>> 0;
    let t = state;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

export function randInt(rng: () => number, lo: number, hi: number): number {
  return lo + Math.floor(rng() * (hi - lo + 1));
}

export function choice<T>(rng: () => number, items: T[]): T {
  return items[Math.floor(rng() * items.length)];
}

export function shuffle<T>(rng: () => number, items: T[]): T[] {
  const out = [...items];
  for (let i = out.length - 1; i > 0; i--) {
    const j = Math.floor(rng() * (i + 1));
    [out[i], out[j]] = [out[j], out[i]];
  }
  return out;
}

export function treeSchema(): Schema {
  return makeSchema("syn", ["root", "r1", "r2", "r3", "nsubj", "dobj", "nn", "punct"], "root");
}

export function graphSchemaIsolated(): Schema {
  return makeSchema("sem-iso", ["root", "arg1", "arg2", "arg3"], "root", "graph", false, true);
}

export function randomSentence(rng: () => number, maxLen = 15): string[] {
  const n = randInt(rng, 1, maxLen);
  return Array.from({ length: n }, () => choice(rng, WORD_ALPHABET));
}

export function randomTree(rng: () => number, words: string[], schema: Schema): Graph {
  const n = words.length;
  const order = shuffle(rng, Array.from({ length: n }, (_, i) => i + 1));
  const labels = schema.relations.filter((r) => r !== schema.rootLabel);
  const arcs: Arc[] = [makeArc(order[0], schema.rootLabel, order[0])];
  for (let i = 1; i < n; i++) {
    const head = order[Math.floor(rng() * i)];
    arcs.push(makeArc(order[i], choice(rng, labels), head));
  }
  return makeGraph(n, arcs);
}

export function randomGraph(rng: () => number, words: string[], schema: Schema): Graph {
  const n = words.length;
  const order = shuffle(rng, Array.from({ length: n }, (_, i) => i + 1));
  const labels = schema.relations.filter((r) => r !== schema.rootLabel);
  const arcs: Arc[] = [];
  order.forEach((p, i) => {
    if (schema.allowsIsolated && i > 0 && rng() < 0.15) {
      arcs.push(makeArc(p, ISOLATED, null));
      return;
    }
    if (i === 0 || rng() < 0.15) {
      arcs.push(makeArc(p, schema.rootLabel, p));
      return;
    }
    const head = order[Math.floor(rng() * i)];
    arcs.push(makeArc(p, choice(rng, labels), head));
  });
  return makeGraph(n, arcs);
}

/** Minimal 10-column CoNLL-U rendering of a tree corpus. */
export function toConllu(entries: Array<[string[], Graph]>): string {
  const lines: string[] = [];
  for (const [words, graph] of entries) {
    const headOf = new Map(graph.arcs.map((a) => [a.dependent, a]));
    for (let p = 1; p <= graph.n; p++) {
      const arc = headOf.get(p)!;
      const head = arc.head === arc.dependent ? 0 : arc.head!;
      lines.push([p, words[p - 1], "_", "_", "_", "_", head, arc.relation, "_", "_"].join("\t"));
    }
    lines.push("");
  }
  return lines.join("\n") + "\n";
}

export interface CliResult {
  stdout: string;
  status: number;
}

export function runCli(args: string[], allowFailure = false): CliResult {
  try {
    const stdout = execFileSync("python3", ["-m", "depseq.cli", ...args], {
      encoding: "utf-8",
      maxBuffer: 256 * 1024 * 1024,
    });
    return { stdout, status: 0 };
  } catch (e: any) {
    if (!allowFailure) throw e;
    return { stdout: e.stdout ?? "", status: e.status ?? 1 };
  }
}

export function tempFile(name: string, content: string): string {
  const dir = mkdtempSync(join(tmpdir(), "depseq-"));
  const path = join(dir, name);
  writeFileSync(path, content);
  return path;
}

export const SAMPLES_DIR = join(import.meta.dirname ?? ".", "..", "..", "samples");
