export {
  DepseqError,
  ISOLATED,
  cycleCheck,
  graphsEqual,
  makeArc,
  makeGraph,
  makeSchema,
  validateGraph,
} from "./model.js";
export type { Arc, Graph, Schema, Structure } from "./model.js";
export {
  DEFAULT_CONFIG,
  NO,
  PID,
  SPT,
  applySchemaPrefix,
  assignPositions,
  buildTokenRegistry,
  deserialize,
  parseUnits,
  positionalPrompt,
  serialize,
} from "./serializer.js";
export type { ParsedUnit, RelationMode, SerializerConfig } from "./serializer.js";
export { checkFormation, checkStructure, legalityRates } from "./legality.js";
export type { LegalityReport, Stage, Violation } from "./legality.js";
export { aggregate, las, lf, scoreSedp, scoreSydp, uas, uf } from "./metrics.js";
export type { MetricKind, ScoreCounts } from "./metrics.js";
