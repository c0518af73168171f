"""Shared fixtures: schemata, random structure generators and independent
oracles used to cross-check the library implementations."""

from __future__ import annotations

import random

import pytest

from depseq import GRAPH, ISOLATED, TREE, Arc, DependencyGraph, Schema, Sentence

WORD_ALPHABET = ("a", "b", "c", "d", "e")


@pytest.fixture
def tree_schema():
    return make_tree_schema()


@pytest.fixture
def graph_schema_isolated():
    return make_graph_schema_isolated()


@pytest.fixture
def graph_schema_multi():
    return make_graph_schema_multi()


def make_tree_schema():
    return Schema("syn", ("root", "r1", "r2", "r3", "nsubj", "dobj", "nn", "punct"),
                  "root", TREE)


def make_graph_schema_isolated():
    return Schema("sem-iso", ("root", "arg1", "arg2", "arg3"), "root", GRAPH,
                  allows_multi_head=False, allows_isolated=True)


def make_graph_schema_multi():
    return Schema("sem-multi", ("root", "arg1", "arg2", "arg3"), "root", GRAPH,
                  allows_multi_head=True, allows_isolated=False)


def random_sentence(rng: random.Random, max_len: int = 15) -> Sentence:
    n = rng.randint(1, max_len)
    return Sentence(tuple(rng.choice(WORD_ALPHABET) for _ in range(n)))


def random_tree(rng: random.Random, sentence: Sentence, schema: Schema) -> DependencyGraph:
    """Uniformly shaped random tree: each word attaches to a word earlier in
    a shuffled order, so the result is connected and acyclic."""
    n = len(sentence)
    order = list(range(1, n + 1))
    rng.shuffle(order)
    labels = [r for r in schema.relations if r != schema.root_label]
    arcs = [Arc(order[0], schema.root_label, order[0])]
    for i in range(1, n):
        head = order[rng.randrange(i)]
        arcs.append(Arc(order[i], rng.choice(labels), head))
    return DependencyGraph(n, arcs)


def random_graph(rng: random.Random, sentence: Sentence, schema: Schema) -> DependencyGraph:
    """Random schema-valid graph.  Heads always come earlier in a shuffled
    topological order, so the head->dependent digraph is acyclic."""
    n = len(sentence)
    order = list(range(1, n + 1))
    rng.shuffle(order)
    labels = [r for r in schema.relations if r != schema.root_label]
    arcs = []
    for i, p in enumerate(order):
        if schema.allows_isolated and i > 0 and rng.random() < 0.15:
            arcs.append(Arc(p, ISOLATED, None))
            continue
        if i == 0 or rng.random() < 0.15:
            arcs.append(Arc(p, schema.root_label, p))
            continue
        k = 1
        if schema.allows_multi_head:
            roll = rng.random()
            if roll < 0.05 and i >= 3:
                k = 3
            elif roll < 0.30 and i >= 2:
                k = 2
        heads = rng.sample(order[:i], k)
        for h in heads:
            arcs.append(Arc(p, rng.choice(labels), h))
    return DependencyGraph(n, arcs)


# --- independent oracles --------------------------------------------------

def acyclic_oracle(graph: DependencyGraph) -> bool:
    """Path-enumeration acyclicity check over head->dependent edges, written
    independently of the library's Kahn-based implementation."""
    edges = {(a.head, a.dependent) for a in graph.arcs
             if not a.is_isolated and not a.is_self_loop}
    nodes = range(1, graph.n + 1)
    # Transitive closure by repeated squaring of the reachability relation.
    reach = set(edges)
    changed = True
    while changed:
        changed = False
        for (u, v) in list(reach):
            for (x, y) in list(reach):
                if v == x and (u, y) not in reach:
                    reach.add((u, y))
                    changed = True
    return not any((v, v) in reach for v in nodes)


def classical_prufer(parents: dict[int, int], nodes: int) -> list[int]:
    """Textbook Prufer code of a rooted tree on nodes 1..nodes, where
    ``parents`` maps every non-root node to its parent."""
    neighbours = {p: set() for p in range(1, nodes + 1)}
    for child, parent in parents.items():
        neighbours[child].add(parent)
        neighbours[parent].add(child)
    code = []
    alive = set(range(1, nodes + 1))
    while len(alive) > 2:
        leaf = min(p for p in alive if len(neighbours[p]) == 1)
        parent = next(iter(neighbours[leaf]))
        code.append(parent)
        neighbours[parent].discard(leaf)
        del neighbours[leaf]
        alive.discard(leaf)
    return code


def sydp_oracle(gold: DependencyGraph, pred: DependencyGraph):
    """Brute-force per-word comparison; returns (uas, las) fractions."""
    n = gold.n
    correct_u = correct_l = 0
    for p in range(1, n + 1):
        g = [a for a in gold.arcs if a.dependent == p][0]
        r = [a for a in pred.arcs if a.dependent == p][0]
        if g.head == r.head:
            correct_u += 1
            if g.relation == r.relation:
                correct_l += 1
    return correct_u / n, correct_l / n


def sedp_oracle(gold: DependencyGraph, pred: DependencyGraph):
    """Brute-force double-loop F1; returns (uf, lf) fractions."""
    gold_arcs = [a for a in gold.arcs if not a.is_isolated]
    pred_arcs = [a for a in pred.arcs if not a.is_isolated]

    def f1(match):
        correct = 0
        for g in gold_arcs:
            for r in pred_arcs:
                if match(g, r):
                    correct += 1
                    break
        if not pred_arcs or not gold_arcs:
            return 0.0
        # Arc sets contain no duplicates, so the count is symmetric.
        precision = correct / len(pred_arcs)
        recall = correct / len(gold_arcs)
        if precision + recall == 0.0:
            return 0.0
        return 2 * precision * recall / (precision + recall)

    uf = f1(lambda g, r: (g.dependent, g.head) == (r.dependent, r.head))
    lf = f1(lambda g, r: (g.dependent, g.head, g.relation) == (r.dependent, r.head, r.relation))
    return uf, lf


def all_labeled_trees(n: int, labels):
    """Every rooted labeled tree on n positions: choose a root, a parent
    function over the rest, keep the acyclic ones, label every non-root arc."""
    from itertools import product
    trees = []
    positions = list(range(1, n + 1))
    for root in positions:
        rest = [p for p in positions if p != root]
        for parents in product(positions, repeat=len(rest)):
            mapping = dict(zip(rest, parents))
            # Walk each node up to the root; any loop disqualifies.
            ok = True
            for start in rest:
                seen = set()
                cur = start
                while cur != root:
                    if cur in seen or cur not in mapping:
                        ok = False
                        break
                    seen.add(cur)
                    cur = mapping[cur]
                if not ok:
                    break
            if not ok:
                continue
            for labelling in product(labels, repeat=len(rest)):
                arcs = [Arc(root, "root", root)]
                for (child, label) in zip(rest, labelling):
                    arcs.append(Arc(child, label, mapping[child]))
                trees.append((root, DependencyGraph(n, arcs)))
    return trees
