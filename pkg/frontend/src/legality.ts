/**
 * Two-stage validation: formation (the sequence has the dependency-unit
 * shape and covers the sentence) and structure (the decoded graph is
 * schema-valid). Structure is only checked once formation passes.
 */

import { DepseqError, Schema, validateGraph } from "./model.js";
import {
  DEFAULT_CONFIG,
  SerializerConfig,
  assignPositions,
  deserialize,
  parseUnits,
} from "./serializer.js";

export type Stage = "formation" | "structure";

export interface Violation {
  sentenceId: number;
  stage: Stage;
  reason: string;
}

export interface LegalityReport {
  total: number;
  formationLegal: number;
  structuralLegal: number;
  violations: Violation[];
}

export function checkFormation(
  words: string[],
  rendered: string,
  schema: Schema,
  config: SerializerConfig = DEFAULT_CONFIG,
): string | null {
  const n = words.length;
  try {
    const units = parseUnits(rendered, schema, config);
    for (const u of units) {
      if (u.head !== null && (u.head < 1 || u.head > n)) {
        throw new DepseqError("POSITION-OUT-OF-RANGE", `head ${u.head} out of range 1..${n}`);
      }
    }
    assignPositions(words, units);
  } catch (e) {
    if (e instanceof DepseqError) return e.message;
    throw e;
  }
  return null;
}

export function checkStructure(
  words: string[],
  rendered: string,
  schema: Schema,
  config: SerializerConfig = DEFAULT_CONFIG,
): string | null {
  try {
    const graph = deserialize(words, rendered, schema, config);
    const violations = validateGraph(graph, schema);
    if (violations.length > 0) return violations.join("; ");
  } catch (e) {
    if (e instanceof DepseqError) return e.message;
    throw e;
  }
  return null;
}

export function legalityRates(
  outputs: Array<[string[], string]>,
  schema: Schema,
  config: SerializerConfig = DEFAULT_CONFIG,
): LegalityReport {
  let formationLegal = 0;
  let structuralLegal = 0;
  const violations: Violation[] = [];
  outputs.forEach(([words, rendered], idx) => {
    const sentenceId = idx + 1;
    const formationReason = checkFormation(words, rendered, schema, config);
    if (formationReason !== null) {
      violations.push({ sentenceId, stage: "formation", reason: formationReason });
      return;
    }
    formationLegal += 1;
    const structureReason = checkStructure(words, rendered, schema, config);
    if (structureReason !== null) {
      violations.push({ sentenceId, stage: "structure", reason: structureReason });
      return;
    }
    structuralLegal += 1;
  });
  return { total: outputs.length, formationLegal, structuralLegal, violations };
}
