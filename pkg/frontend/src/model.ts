/**
 * Core data model: arcs, graphs, schemata and validity rules.
 *
 * Positions are 1-based. A root word is an arc whose head equals its own
 * position with the schema root label. An isolated word is an arc with a
 * null head and the distinguished ISOLATED relation, so every position
 * owns at least one arc.
 */

export const ISOLATED = "<isolated>";

export interface Arc {
  dependent: number;
  relation: string;
  /** null exactly when relation is ISOLATED. */
  head: number | null;
}

export interface Graph {
  n: number;
  /** Canonically sorted by (dependent, head, relation); see makeGraph. */
  arcs: Arc[];
}

export type Structure = "tree" | "graph";

export interface Schema {
  name: string;
  relations: string[];
  rootLabel: string;
  structure: Structure;
  allowsMultiHead: boolean;
  allowsIsolated: boolean;
}

export class DepseqError extends Error {
  constructor(public code: string, message: string) {
    super(message);
    this.name = code;
  }
}

export function makeSchema(
  name: string,
  relations: string[],
  rootLabel: string,
  structure: Structure = "tree",
  allowsMultiHead = false,
  allowsIsolated = false,
): Schema {
  const unique = Array.from(new Set(relations));
  if (!unique.includes(rootLabel)) {
    throw new DepseqError("INVALID-SCHEMA", `root label ${rootLabel} not in relations`);
  }
  if (structure === "tree" && (allowsMultiHead || allowsIsolated)) {
    throw new DepseqError("INVALID-SCHEMA", "tree schemata allow neither multi-head nor isolated words");
  }
  return { name, relations: unique, rootLabel, structure, allowsMultiHead, allowsIsolated };
}

function arcKey(a: Arc): [number, number, string] {
  return [a.dependent, a.head ?? 0, a.relation];
}

export function makeArc(dependent: number, relation: string, head: number | null): Arc {
  if (dependent < 1) {
    throw new DepseqError("INVALID-ARC", `dependent position must be >= 1, got ${dependent}`);
  }
  if ((head === null) !== (relation === ISOLATED)) {
    throw new DepseqError("INVALID-ARC", "head is null exactly when the relation is ISOLATED");
  }
  if (head !== null && head < 1) {
    throw new DepseqError("INVALID-ARC", `head position must be >= 1, got ${head}`);
  }
  return { dependent, relation, head };
}

export function makeGraph(n: number, arcs: Arc[]): Graph {
  if (n < 1) {
    throw new DepseqError("INVALID-GRAPH", "sentence length must be >= 1");
  }
  for (const a of arcs) {
    if (a.dependent > n || (a.head !== null && a.head > n)) {
      throw new DepseqError("INVALID-GRAPH", `arc position out of range 1..${n}`);
    }
  }
  const sorted = [...arcs].sort((x, y) => {
    const [a1, b1, c1] = arcKey(x);
    const [a2, b2, c2] = arcKey(y);
    if (a1 !== a2) return a1 - a2;
    if (b1 !== b2) return b1 - b2;
    return c1 < c2 ? -1 : c1 > c2 ? 1 : 0;
  });
  return { n, arcs: sorted };
}

export function graphsEqual(a: Graph, b: Graph): boolean {
  if (a.n !== b.n || a.arcs.length !== b.arcs.length) return false;
  return a.arcs.every((x, i) => {
    const y = b.arcs[i];
    return x.dependent === y.dependent && x.relation === y.relation && x.head === y.head;
  });
}

export function cycleCheck(graph: Graph): boolean {
  const children = new Map<number, number[]>();
  const indeg = new Map<number, number>();
  for (let p = 1; p <= graph.n; p++) indeg.set(p, 0);
  for (const a of graph.arcs) {
    if (a.head === null || a.head === a.dependent) continue;
    if (!children.has(a.head)) children.set(a.head, []);
    children.get(a.head)!.push(a.dependent);
    indeg.set(a.dependent, indeg.get(a.dependent)! + 1);
  }
  const queue: number[] = [];
  for (const [p, d] of indeg) if (d === 0) queue.push(p);
  let seen = 0;
  while (queue.length > 0) {
    const p = queue.pop()!;
    seen += 1;
    for (const c of children.get(p) ?? []) {
      indeg.set(c, indeg.get(c)! - 1);
      if (indeg.get(c) === 0) queue.push(c);
    }
  }
  return seen === graph.n;
}

export function validateGraph(graph: Graph, schema: Schema): string[] {
  const violations: string[] = [];
  const byDep = new Map<number, Arc[]>();
  for (let p = 1; p <= graph.n; p++) byDep.set(p, []);
  for (const a of graph.arcs) byDep.get(a.dependent)!.push(a);

  const seenPairs = new Set<string>();
  for (const a of graph.arcs) {
    const pair = `${a.dependent}:${a.head}`;
    if (seenPairs.has(pair)) {
      violations.push(`duplicate arc for pair (dependent ${a.dependent}, head ${a.head})`);
    }
    seenPairs.add(pair);
    if (a.head === null) {
      if (!schema.allowsIsolated) {
        violations.push(`isolated word ${a.dependent} not allowed by schema '${schema.name}'`);
      }
    } else if (!schema.relations.includes(a.relation)) {
      violations.push(`unknown relation '${a.relation}' on word ${a.dependent}`);
    }
    if (a.head === a.dependent && a.relation !== schema.rootLabel) {
      violations.push(`self-loop on word ${a.dependent} with non-root relation '${a.relation}'`);
    }
  }

  for (const [p, arcs] of byDep) {
    if (arcs.length === 0) {
      violations.push(`word ${p} has no arc`);
      continue;
    }
    if (arcs.some((a) => a.head === null) && arcs.length > 1) {
      violations.push(`word ${p} mixes an isolated arc with other arcs`);
    }
    const heads = arcs.filter((a) => a.head !== null);
    if (heads.length > 1 && !schema.allowsMultiHead) {
      violations.push(`multiple heads for word ${p}`);
    }
  }

  const roots = graph.arcs.filter((a) => a.head === a.dependent).map((a) => a.dependent);
  if (schema.structure === "tree") {
    if (roots.length !== 1) {
      violations.push(`tree must have exactly one root, found ${roots.length}`);
    }
    if (!cycleCheck(graph)) {
      violations.push("cycle among dependency arcs");
    }
    if (roots.length === 1 && violations.length === 0) {
      const children = new Map<number, number[]>();
      for (const a of graph.arcs) {
        if (a.head !== null && a.head !== a.dependent) {
          if (!children.has(a.head)) children.set(a.head, []);
          children.get(a.head)!.push(a.dependent);
        }
      }
      const reached = new Set<number>([roots[0]]);
      const stack = [roots[0]];
      while (stack.length > 0) {
        for (const c of children.get(stack.pop()!) ?? []) {
          if (!reached.has(c)) {
            reached.add(c);
            stack.push(c);
          }
        }
      }
      if (reached.size !== graph.n) {
        violations.push("tree is not connected");
      }
    }
  } else if (!cycleCheck(graph)) {
    violations.push("cycle among dependency arcs");
  }
  return violations;
}
