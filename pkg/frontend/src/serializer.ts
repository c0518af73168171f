/**
 * The flat dependency-unit encoding and its inverse.
 *
 * One unit per arc, `word [relation] head`, joined with [SPT]; isolated
 * words render as `word [NO] no`. Decoding resolves dependent words with a
 * backtracking left-to-right scan over the sentence (never string search),
 * matching the reference implementation token for token.
 */

import {
  Arc,
  DepseqError,
  Graph,
  ISOLATED,
  Schema,
  makeArc,
  makeGraph,
  validateGraph,
} from "./model.js";

export const SPT = "[SPT]";
export const PID = "[PID]";
export const NO = "[NO]";

export type RelationMode = "special" | "word-map";

export interface SerializerConfig {
  relationMode: RelationMode;
  positionalPrompt: boolean;
  schemaPrefix?: string;
  relationWordMap?: Record<string, string>;
}

export const DEFAULT_CONFIG: SerializerConfig = {
  relationMode: "special",
  positionalPrompt: true,
};

function requireTotalMap(schema: Schema, config: SerializerConfig): void {
  if (config.relationMode !== "word-map") return;
  const map = config.relationWordMap ?? {};
  const missing = schema.relations.filter((r) => !(r in map));
  if (missing.length > 0) {
    throw new DepseqError("UNKNOWN-RELATION", `relation word map misses labels: ${missing.join(", ")}`);
  }
}

function renderRelation(label: string, schema: Schema, config: SerializerConfig): string {
  if (!schema.relations.includes(label)) {
    throw new DepseqError("UNKNOWN-RELATION", `relation '${label}' not in schema '${schema.name}'`);
  }
  if (config.relationMode === "word-map") {
    const word = config.relationWordMap?.[label];
    if (word === undefined) {
      throw new DepseqError("UNKNOWN-RELATION", `relation '${label}' missing from word map`);
    }
    return word;
  }
  return `[${label}]`;
}

export function checkSentence(words: string[]): void {
  if (words.length === 0) {
    throw new DepseqError("INVALID-SENTENCE", "sentence must contain at least one word");
  }
  for (const w of words) {
    if (w === "" || /\s/.test(w)) {
      throw new DepseqError("INVALID-SENTENCE", `bad word '${w}': empty or contains whitespace`);
    }
  }
}

export function serialize(
  words: string[],
  graph: Graph,
  schema: Schema,
  config: SerializerConfig = DEFAULT_CONFIG,
): string {
  checkSentence(words);
  if (graph.n !== words.length) {
    throw new DepseqError("INVALID-GRAPH", `graph length ${graph.n} != sentence length ${words.length}`);
  }
  const violations = validateGraph(graph, schema);
  if (violations.length > 0) {
    throw new DepseqError("INVALID-GRAPH", violations.join("; "));
  }
  requireTotalMap(schema, config);

  const parts: string[] = [];
  for (const arc of graph.arcs) {
    if (parts.length > 0) parts.push(SPT);
    parts.push(words[arc.dependent - 1]);
    if (arc.head === null) {
      parts.push(NO, "no");
    } else {
      parts.push(renderRelation(arc.relation, schema, config), String(arc.head));
    }
  }
  return parts.join(" ");
}

export function positionalPrompt(
  words: string[],
  config: SerializerConfig = DEFAULT_CONFIG,
): string {
  checkSentence(words);
  if (!config.positionalPrompt) return words.join(" ");
  const parts: string[] = [];
  words.forEach((w, i) => {
    if (parts.length > 0) parts.push(SPT);
    parts.push(w, PID, String(i + 1));
  });
  return parts.join(" ");
}

export function applySchemaPrefix(rendered: string, schema: Schema): string {
  return `[parse-${schema.name.toLowerCase()}] ${SPT} ${rendered}`;
}

export interface ParsedUnit {
  word: string;
  relation: string | null;
  head: number | null;
}

function isSpecial(tok: string): boolean {
  return tok.length > 2 && tok.startsWith("[") && tok.endsWith("]");
}

export function parseUnits(
  rendered: string,
  schema: Schema,
  config: SerializerConfig = DEFAULT_CONFIG,
): ParsedUnit[] {
  const tokens = rendered.split(/\s+/).filter((t) => t !== "");
  const units: string[][] = [[]];
  for (const tok of tokens) {
    if (tok === SPT) units.push([]);
    else units[units.length - 1].push(tok);
  }
  const inverse: Record<string, string> = {};
  if (config.relationMode === "word-map") {
    for (const [label, word] of Object.entries(config.relationWordMap ?? {})) {
      inverse[word] = label;
    }
  }
  return units.map((unit) => {
    if (unit.length !== 3) {
      throw new DepseqError("MALFORMED-UNIT", `unit has ${unit.length} items, expected 3: '${unit.join(" ")}'`);
    }
    const [wordTok, relTok, headTok] = unit;
    if (isSpecial(wordTok)) {
      throw new DepseqError("MALFORMED-UNIT", `unit does not start with a word: '${wordTok}'`);
    }
    if (relTok === NO) {
      if (headTok !== "no") {
        throw new DepseqError("MALFORMED-UNIT", "[NO] must be followed by the word 'no'");
      }
      return { word: wordTok, relation: null, head: null };
    }
    if (headTok === "no") {
      throw new DepseqError("MALFORMED-UNIT", "'no' head requires the [NO] relation token");
    }
    if (!/^\d+$/.test(headTok)) {
      throw new DepseqError("MALFORMED-UNIT", `head is not a position number: '${headTok}'`);
    }
    let label: string;
    if (config.relationMode === "word-map") {
      if (isSpecial(relTok)) {
        throw new DepseqError("MALFORMED-UNIT", `special relation token '${relTok}' under word-map mode`);
      }
      const mapped = inverse[relTok];
      if (mapped === undefined) {
        throw new DepseqError("UNKNOWN-RELATION", `unmapped relation word '${relTok}'`);
      }
      label = mapped;
    } else {
      if (!isSpecial(relTok)) {
        throw new DepseqError("MALFORMED-UNIT", `expected a relation token, got '${relTok}'`);
      }
      const inner = relTok.slice(1, -1);
      label = inner.includes(":") ? inner.split(":", 2)[1] : inner;
      if (!schema.relations.includes(label)) {
        throw new DepseqError("UNKNOWN-RELATION", `unknown relation '${label}'`);
      }
    }
    return { word: wordTok, relation: label, head: Number(headTok) };
  });
}

function scan(words: string[], units: ParsedUnit[], strict: boolean): number[] | null {
  const n = words.length;
  const m = units.length;
  const dead = new Set<string>();
  const assignment: number[] = [];

  function extend(i: number, pos: number): boolean {
    if (i === m) return pos === n;
    const key = `${i}:${pos}`;
    if (dead.has(key) || m - i < n - pos) {
      dead.add(key);
      return false;
    }
    const unit = units[i];
    // Advance to the next position.
    if (pos < n && unit.word === words[pos]) {
      assignment.push(pos + 1);
      if (extend(i + 1, pos + 1)) return true;
      assignment.pop();
    }
    // Stay on the current position (multi-head continuation).
    const prev = i > 0 ? units[i - 1] : null;
    if (
      prev !== null &&
      pos >= 1 &&
      unit.word === words[pos - 1] &&
      prev.head !== null &&
      unit.head !== null &&
      (unit.head > prev.head || (!strict && unit.head >= prev.head))
    ) {
      assignment.push(pos);
      if (extend(i + 1, pos)) return true;
      assignment.pop();
    }
    dead.add(key);
    return false;
  }

  return extend(0, 0) ? assignment : null;
}

export function assignPositions(words: string[], units: ParsedUnit[]): number[] {
  if (units.length < words.length) {
    throw new DepseqError("WORD-MISMATCH", `${units.length} units cannot cover ${words.length} words`);
  }
  const result = scan(words, units, true) ?? scan(words, units, false);
  if (result === null) {
    throw new DepseqError("WORD-MISMATCH", "unit sequence does not align with the sentence");
  }
  return result;
}

export function deserialize(
  words: string[],
  rendered: string,
  schema: Schema,
  config: SerializerConfig = DEFAULT_CONFIG,
): Graph {
  checkSentence(words);
  requireTotalMap(schema, config);
  const n = words.length;
  const units = parseUnits(rendered, schema, config);
  for (const u of units) {
    if (u.head !== null && (u.head < 1 || u.head > n)) {
      throw new DepseqError("POSITION-OUT-OF-RANGE", `head ${u.head} out of range 1..${n}`);
    }
  }
  const positions = assignPositions(words, units);
  const arcs: Arc[] = units.map((u, i) =>
    u.head === null
      ? makeArc(positions[i], ISOLATED, null)
      : makeArc(positions[i], u.relation!, u.head),
  );
  return makeGraph(n, arcs);
}

export function buildTokenRegistry(
  schemata: Schema[],
  config: SerializerConfig = DEFAULT_CONFIG,
  withPrefixes = false,
): string[] {
  const tokens: string[] = [SPT, PID, NO];
  if (config.relationMode === "special") {
    const owners = new Map<string, string>();
    const colliding = new Set<string>();
    if (schemata.length > 1) {
      for (const s of schemata) {
        for (const r of s.relations) {
          const owner = owners.get(r);
          if (owner !== undefined && owner !== s.name) colliding.add(r);
          if (owner === undefined) owners.set(r, s.name);
        }
      }
    }
    for (const s of schemata) {
      for (const r of s.relations) {
        const surface = colliding.has(r) ? `[${s.name}:${r}]` : `[${r}]`;
        if (tokens.includes(surface)) {
          if (colliding.has(r)) {
            throw new DepseqError("DUPLICATE-SURFACE", `surface '${surface}' already registered`);
          }
          continue;
        }
        tokens.push(surface);
      }
    }
  }
  if (withPrefixes) {
    for (const s of schemata) tokens.push(`[parse-${s.name.toLowerCase()}]`);
  }
  return tokens;
}
