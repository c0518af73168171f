"""Core data model: sentences, arcs, dependency graphs and schemata.

Positions are 1-based throughout.  A root word is stored as an arc whose
head equals its own position and whose relation is the schema root label.
An isolated word (permitted by some semantic schemata) is stored as a
single arc with head ``None`` and the distinguished ``ISOLATED`` relation,
so that every position owns at least one arc.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

# Distinguished relation for words with no head at all.
ISOLATED = "<isolated>"

# Sort key treats the missing head of an isolated arc as position 0.
def _arc_key(arc: "Arc"):
    return (arc.dependent, 0 if arc.head is None else arc.head, arc.relation)


@dataclass(frozen=True)
class Sentence:
    """An ordered, non-empty sequence of surface words."""

    words: tuple[str, ...]

    def __init__(self, words: Iterable[str]):
        words = tuple(words)
        if not words:
            raise ValueError("sentence must contain at least one word")
        for w in words:
            if not w or any(c.isspace() for c in w):
                raise ValueError(f"bad word {w!r}: empty or contains whitespace")
        object.__setattr__(self, "words", words)

    def __len__(self) -> int:
        return len(self.words)

    def word(self, position: int) -> str:
        """Word at a 1-based position."""
        if not 1 <= position <= len(self.words):
            raise IndexError(f"position {position} out of range 1..{len(self.words)}")
        return self.words[position - 1]


@dataclass(frozen=True, order=True)
class Arc:
    """One dependency: dependent position, relation label, head position.

    ``head is None`` if and only if ``relation == ISOLATED``.
    ``head == dependent`` encodes the root word (head of itself).
    """

    dependent: int
    relation: str
    head: Optional[int]

    def __post_init__(self):
        if self.dependent < 1:
            raise ValueError(f"dependent position must be >= 1, got {self.dependent}")
        if (self.head is None) != (self.relation == ISOLATED):
            raise ValueError("head is None exactly when the relation is ISOLATED")
        if self.head is not None and self.head < 1:
            raise ValueError(f"head position must be >= 1, got {self.head}")

    @property
    def is_isolated(self) -> bool:
        return self.head is None

    @property
    def is_self_loop(self) -> bool:
        return self.head == self.dependent


@dataclass(frozen=True)
class DependencyGraph:
    """A set of arcs over a sentence of ``n`` words.

    Arcs are kept in canonical order (dependent, then head) so equality and
    serialization are deterministic.  Duplicate (dependent, head) pairs are
    representable here so that decoded model outputs can be inspected; they
    are reported by :func:`validate_graph`.
    """

    n: int
    arcs: tuple[Arc, ...]

    def __init__(self, n: int, arcs: Iterable[Arc]):
        if n < 1:
            raise ValueError("sentence length must be >= 1")
        arcs = tuple(sorted(arcs, key=_arc_key))
        for a in arcs:
            if a.dependent > n:
                raise ValueError(f"dependent {a.dependent} out of range 1..{n}")
            if a.head is not None and a.head > n:
                raise ValueError(f"head {a.head} out of range 1..{n}")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "arcs", arcs)

    def arcs_for(self, dependent: int) -> tuple[Arc, ...]:
        """All arcs whose dependent is the given position (``p_i``)."""
        return tuple(a for a in self.arcs if a.dependent == dependent)

    def root_positions(self) -> tuple[int, ...]:
        return tuple(a.dependent for a in self.arcs if a.is_self_loop)


TREE = "tree"
GRAPH = "graph"


@dataclass(frozen=True)
class Schema:
    """A named relation inventory plus structural flags."""

    name: str
    relations: tuple[str, ...]
    root_label: str
    structure: str = TREE
    allows_multi_head: bool = False
    allows_isolated: bool = False

    def __init__(self, name, relations, root_label, structure=TREE,
                 allows_multi_head=False, allows_isolated=False):
        relations = tuple(dict.fromkeys(relations))
        if structure not in (TREE, GRAPH):
            raise ValueError(f"structure must be {TREE!r} or {GRAPH!r}")
        if root_label not in relations:
            raise ValueError(f"root label {root_label!r} not in relations")
        if structure == TREE and (allows_multi_head or allows_isolated):
            raise ValueError("tree schemata allow neither multi-head nor isolated words")
        object.__setattr__(self, "name", name)
        object.__setattr__(self, "relations", relations)
        object.__setattr__(self, "root_label", root_label)
        object.__setattr__(self, "structure", structure)
        object.__setattr__(self, "allows_multi_head", allows_multi_head)
        object.__setattr__(self, "allows_isolated", allows_isolated)

    @property
    def is_tree(self) -> bool:
        return self.structure == TREE


def cycle_check(graph: DependencyGraph) -> bool:
    """True iff the head->dependent digraph is acyclic.

    Root self-loops and isolated arcs do not take part in the check.
    """
    children: dict[int, list[int]] = {}
    indeg = {p: 0 for p in range(1, graph.n + 1)}
    for a in graph.arcs:
        if a.is_isolated or a.is_self_loop:
            continue
        children.setdefault(a.head, []).append(a.dependent)
        indeg[a.dependent] += 1
    # Kahn's algorithm; leftover in-degree means a cycle.
    queue = [p for p, d in indeg.items() if d == 0]
    seen = 0
    while queue:
        p = queue.pop()
        seen += 1
        for c in children.get(p, ()):
            indeg[c] -= 1
            if indeg[c] == 0:
                queue.append(c)
    return seen == graph.n


def validate_graph(graph: DependencyGraph, schema: Schema) -> list[str]:
    """Check a graph against a schema; returns a list of violations (empty = ok)."""
    violations: list[str] = []

    by_dep: dict[int, list[Arc]] = {p: [] for p in range(1, graph.n + 1)}
    for a in graph.arcs:
        by_dep[a.dependent].append(a)

    seen_pairs = set()
    for a in graph.arcs:
        pair = (a.dependent, a.head)
        if pair in seen_pairs:
            violations.append(f"duplicate arc for pair (dependent {a.dependent}, head {a.head})")
        seen_pairs.add(pair)
        if a.is_isolated:
            if not schema.allows_isolated:
                violations.append(f"isolated word {a.dependent} not allowed by schema {schema.name!r}")
        elif a.relation not in schema.relations:
            violations.append(f"unknown relation {a.relation!r} on word {a.dependent}")
        if a.is_self_loop and a.relation != schema.root_label:
            violations.append(
                f"self-loop on word {a.dependent} with non-root relation {a.relation!r}")

    for p, arcs in by_dep.items():
        if not arcs:
            violations.append(f"word {p} has no arc")
            continue
        if any(a.is_isolated for a in arcs) and len(arcs) > 1:
            violations.append(f"word {p} mixes an isolated arc with other arcs")
        heads = [a for a in arcs if not a.is_isolated]
        if len(heads) > 1 and not schema.allows_multi_head:
            violations.append(f"multiple heads for word {p}")

    roots = graph.root_positions()
    if schema.is_tree:
        if len(roots) != 1:
            violations.append(f"tree must have exactly one root, found {len(roots)}")
        if not cycle_check(graph):
            violations.append("cycle among dependency arcs")
        if len(roots) == 1 and not violations:
            # Reachability from the root over head->dependent edges.
            children: dict[int, list[int]] = {}
            for a in graph.arcs:
                if not a.is_self_loop:
                    children.setdefault(a.head, []).append(a.dependent)
            reached = {roots[0]}
            stack = [roots[0]]
            while stack:
                for c in children.get(stack.pop(), ()):
                    if c not in reached:
                        reached.add(c)
                        stack.append(c)
            if len(reached) != graph.n:
                violations.append("tree is not connected")
    else:
        if not cycle_check(graph):
            violations.append("cycle among dependency arcs")

    return violations


def is_valid(graph: DependencyGraph, schema: Schema) -> bool:
    return not validate_graph(graph, schema)
