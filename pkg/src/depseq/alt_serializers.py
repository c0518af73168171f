"""Alternative tree linearizations: Prufer sequences and bracket trees.

Both apply to single-rooted trees only and both carry explicit position
numbers, since repeated surface words are otherwise ambiguous.  Neither
preserves the sentence's word order in general, unlike the dependency-unit
serialization; :func:`preserves_word_order` makes that difference testable.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Union

from .errors import (
    EmptyBracketError,
    MalformedSequenceError,
    NonTreeResultError,
    NotATreeError,
    PositionConflictError,
    UnbalancedBracketError,
)
from .model import Arc, DependencyGraph, Schema, Sentence, validate_graph


@dataclass(frozen=True)
class PruferSequence:
    """Parent/relation pairs from repeated minimum-leaf deletion.

    The tree is augmented with a virtual node ``n + 1`` attached to the
    root, so the sequence has length ``n - 1`` and the real root always
    survives to the end.
    """

    pairs: tuple[tuple[int, str], ...]
    virtual_root_index: int

    def render(self) -> str:
        return " ".join(f"{p} [{r}]" for p, r in self.pairs)


OPEN = "("
CLOSE = ")"


@dataclass(frozen=True)
class BracketNode:
    word: str
    position: int
    relation: str


BracketItem = Union[str, BracketNode]  # "(" / ")" or a node


@dataclass(frozen=True)
class BracketTree:
    items: tuple[BracketItem, ...]

    def render(self) -> str:
        out = []
        for it in self.items:
            if isinstance(it, BracketNode):
                out.extend([it.word, str(it.position), it.relation])
            else:
                out.append(it)
        return " ".join(out)


def _tree_heads(sentence: Sentence, tree: DependencyGraph,
                schema: Optional[Schema] = None) -> tuple[dict[int, tuple[int, str]], int]:
    """Head and relation per word, plus the root position; rejects non-trees."""
    n = tree.n
    if n != len(sentence):
        raise NotATreeError(f"graph length {n} != sentence length {len(sentence)}")
    heads: dict[int, tuple[int, str]] = {}
    root = None
    for a in tree.arcs:
        if a.is_isolated or a.dependent in heads:
            raise NotATreeError("graph is not a single-headed tree")
        heads[a.dependent] = (a.head, a.relation)
        if a.is_self_loop:
            if root is not None:
                raise NotATreeError("multiple roots")
            root = a.dependent
    if root is None or len(heads) != n:
        raise NotATreeError("graph is not a single-rooted tree over all words")
    # Reachability from the root guards against cycles off to the side.
    children: dict[int, list[int]] = {}
    for p, (h, _) in heads.items():
        if p != root:
            children.setdefault(h, []).append(p)
    reached = {root}
    stack = [root]
    while stack:
        for c in children.get(stack.pop(), ()):
            if c not in reached:
                reached.add(c)
                stack.append(c)
    if len(reached) != n:
        raise NotATreeError("arcs do not form a connected tree")
    return heads, root


def prufer_encode(sentence: Sentence, tree: DependencyGraph) -> PruferSequence:
    """Delete the minimum-index leaf repeatedly, recording its parent.

    Each recorded pair is (parent index, relation of the deleted node's
    arc).  The virtual node ``n + 1`` is attached to the root first, so the
    classical procedure over ``n + 1`` nodes emits ``n - 1`` pairs.
    """
    heads, root = _tree_heads(sentence, tree)
    n = tree.n
    virtual = n + 1

    neighbours: dict[int, set[int]] = {p: set() for p in range(1, virtual + 1)}
    parent: dict[int, tuple[int, str]] = {}
    for p, (h, rel) in heads.items():
        if p == root:
            parent[p] = (virtual, rel)
        else:
            parent[p] = (h, rel)
        neighbours[parent[p][0]].add(p)
        neighbours[p].add(parent[p][0])

    pairs: list[tuple[int, str]] = []
    alive = set(range(1, virtual + 1))
    while len(alive) > 2:
        leaf = min(p for p in alive if len(neighbours[p]) == 1)
        par, rel = parent[leaf]
        pairs.append((par, rel))
        neighbours[par].discard(leaf)
        alive.discard(leaf)
    return PruferSequence(tuple(pairs), virtual)


def prufer_decode(sentence: Sentence, seq: PruferSequence, schema: Schema) -> DependencyGraph:
    """Classical reconstruction over nodes ``1..n+1``; the virtual node's
    child becomes the root (self-arc carrying the schema root label)."""
    n = len(sentence)
    virtual = n + 1
    if len(seq.pairs) != n - 1:
        raise MalformedSequenceError(
            f"sequence length {len(seq.pairs)}, expected {n - 1} for {n} words")
    for p, _ in seq.pairs:
        if not 1 <= p <= virtual:
            raise MalformedSequenceError(f"parent {p} out of range 1..{virtual}")

    degree = {p: 1 for p in range(1, virtual + 1)}
    for p, _ in seq.pairs:
        degree[p] += 1

    arcs: list[Arc] = []
    root: Optional[int] = None
    used = set()
    for par, rel in seq.pairs:
        leaf = min(p for p in range(1, virtual + 1)
                   if degree[p] == 1 and p not in used)
        used.add(leaf)
        if par == virtual:
            if root is not None:
                raise NonTreeResultError("virtual root acquires two children")
            root = leaf
            arcs.append(Arc(leaf, schema.root_label, leaf))
        else:
            arcs.append(Arc(leaf, rel, par))
        degree[par] -= 1

    remaining = [p for p in range(1, virtual + 1) if p not in used]
    if len(remaining) != 2 or virtual not in remaining:
        raise NonTreeResultError("reconstruction did not leave the virtual node standing")
    last = min(remaining)
    if last != virtual:
        if root is not None:
            raise NonTreeResultError("two root candidates")
        root = last
        arcs.append(Arc(last, schema.root_label, last))
    if root is None:
        raise NonTreeResultError("no root recovered")

    graph = DependencyGraph(n, arcs)
    if validate_graph(graph, schema):
        raise NonTreeResultError("reconstructed arcs do not form a valid tree")
    return graph


def bracket_encode(sentence: Sentence, tree: DependencyGraph) -> BracketTree:
    """Pre-order rendering: ``( node child-subtrees... )`` with children
    ordered left to right by position."""
    heads, root = _tree_heads(sentence, tree)
    children: dict[int, list[int]] = {}
    for p, (h, _) in heads.items():
        if p != root:
            children.setdefault(h, []).append(p)
    for v in children.values():
        v.sort()

    items: list[BracketItem] = []

    def render(p: int) -> None:
        items.append(OPEN)
        items.append(BracketNode(sentence.word(p), p, heads[p][1]))
        for c in children.get(p, ()):
            render(c)
        items.append(CLOSE)

    render(root)
    return BracketTree(tuple(items))


def bracket_decode(sentence: Sentence, bt: BracketTree) -> DependencyGraph:
    """Inverse of :func:`bracket_encode`: the head of each node is the node
    of the enclosing bracket; the outermost node becomes the root."""
    n = len(sentence)
    arcs: list[Arc] = []
    seen_positions = set()
    stack: list[Optional[BracketNode]] = []  # node of each open bracket
    outer_done = False

    for it in bt.items:
        if it == OPEN:
            if outer_done:
                raise UnbalancedBracketError("content after the outermost bracket closed")
            stack.append(None)
        elif it == CLOSE:
            if not stack:
                raise UnbalancedBracketError("unmatched ')'")
            node = stack.pop()
            if node is None:
                raise EmptyBracketError("bracket pair contains no node")
            if not stack:
                outer_done = True
        else:
            if not stack or outer_done:
                raise UnbalancedBracketError("node outside any bracket")
            if stack[-1] is not None:
                raise UnbalancedBracketError(
                    f"second node {it.word!r} in one bracket pair")
            if not 1 <= it.position <= n:
                raise PositionConflictError(f"position {it.position} out of range 1..{n}")
            if it.position in seen_positions:
                raise PositionConflictError(f"position {it.position} appears twice")
            if sentence.word(it.position) != it.word:
                raise PositionConflictError(
                    f"word {it.word!r} does not match position {it.position}")
            seen_positions.add(it.position)
            stack[-1] = it
            parent = stack[-2] if len(stack) >= 2 else None
            head = parent.position if parent is not None else it.position
            arcs.append(Arc(it.position, it.relation, head))

    if stack:
        raise UnbalancedBracketError("unmatched '('")
    if not outer_done:
        raise EmptyBracketError("empty encoding")
    if len(seen_positions) != n:
        missing = sorted(set(range(1, n + 1)) - seen_positions)
        raise PositionConflictError(f"positions missing from encoding: {missing}")
    return DependencyGraph(n, arcs)


def parse_prufer_text(text: str) -> PruferSequence:
    """Parse the ``parent [rel]`` rendering; the virtual index is inferred
    only at decode time, so it is stored as 0 here."""
    toks = text.split()
    if len(toks) % 2:
        raise MalformedSequenceError("odd token count in rendered sequence")
    pairs = []
    for i in range(0, len(toks), 2):
        num, rel = toks[i], toks[i + 1]
        if not num.isdigit():
            raise MalformedSequenceError(f"parent {num!r} is not a number")
        if not (rel.startswith("[") and rel.endswith("]") and len(rel) > 2):
            raise MalformedSequenceError(f"relation {rel!r} is not bracketed")
        pairs.append((int(num), rel[1:-1]))
    return PruferSequence(tuple(pairs), 0)


def parse_bracket_text(text: str) -> BracketTree:
    toks = text.split()
    items: list[BracketItem] = []
    i = 0
    while i < len(toks):
        t = toks[i]
        if t in (OPEN, CLOSE):
            items.append(t)
            i += 1
            continue
        if i + 2 >= len(toks) or not toks[i + 1].isdigit():
            raise UnbalancedBracketError(f"malformed node starting at {t!r}")
        items.append(BracketNode(t, int(toks[i + 1]), toks[i + 2]))
        i += 3
    return BracketTree(tuple(items))


def preserves_word_order(sentence: Sentence, tree: DependencyGraph,
                         kind: str) -> bool:
    """Whether a serialization lists dependents in sentence order.

    The dependency-unit serialization always does (it expands the input);
    Prufer deletion order and bracket pre-order generally do not (they
    reconstruct the tree shape).
    """
    if kind == "unit":
        order = [a.dependent for a in tree.arcs]
    elif kind == "prufer":
        heads, root = _tree_heads(sentence, tree)
        n = tree.n
        virtual = n + 1
        neighbours: dict[int, set[int]] = {p: set() for p in range(1, virtual + 1)}
        for p, (h, _) in heads.items():
            q = virtual if p == root else h
            neighbours[q].add(p)
            neighbours[p].add(q)
        order = []
        alive = set(range(1, virtual + 1))
        while len(alive) > 2:
            leaf = min(p for p in alive if len(neighbours[p]) == 1)
            order.append(leaf)
            for q in neighbours[leaf]:
                neighbours[q].discard(leaf)
            alive.discard(leaf)
    elif kind == "bracket":
        order = [it.position for it in bracket_encode(sentence, tree).items
                 if isinstance(it, BracketNode)]
    else:
        raise ValueError(f"unknown serializer kind {kind!r}")
    return all(a <= b for a, b in zip(order, order[1:]))
