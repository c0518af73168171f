import random

import pytest

from depseq import (
    GRAPH,
    ISOLATED,
    Arc,
    DependencyGraph,
    Schema,
    Sentence,
    SerializerConfig,
    TokenSequence,
    apply_schema_prefix,
    build_token_registry,
    deserialize,
    positional_prompt,
    serialize,
)
from depseq.errors import (
    DuplicateSurfaceError,
    InvalidGraphError,
    MalformedUnitError,
    PositionOutOfRangeError,
    UnknownRelationError,
    WordMismatchError,
)
from conftest import (
    make_graph_schema_isolated,
    make_graph_schema_multi,
    make_tree_schema,
    random_graph,
    random_sentence,
    random_tree,
)

FIG_SENTENCE = Sentence(("Ms.", "Haag", "plays", "Elianti", "."))
FIG_TREE = DependencyGraph(5, [Arc(1, "nn", 2), Arc(2, "nsubj", 3), Arc(3, "root", 3),
                               Arc(4, "dobj", 3), Arc(5, "punct", 3)])


def test_serialize_five_word_tree(tree_schema):
    seq = serialize(FIG_SENTENCE, FIG_TREE, tree_schema)
    assert seq.render() == ("Ms. [nn] 2 [SPT] Haag [nsubj] 3 [SPT] plays [root] 3 "
                            "[SPT] Elianti [dobj] 3 [SPT] . [punct] 3")


def test_serialize_one_word_sentence(tree_schema):
    s = Sentence(("Go",))
    g = DependencyGraph(1, [Arc(1, "root", 1)])
    assert serialize(s, g, tree_schema).render() == "Go [root] 1"


def test_serialize_isolated_word(graph_schema_isolated):
    s = Sentence(("it", "rains", "."))
    g = DependencyGraph(3, [Arc(1, "arg1", 2), Arc(2, "root", 2), Arc(3, ISOLATED, None)])
    seq = serialize(s, g, graph_schema_isolated)
    assert seq.render() == "it [arg1] 2 [SPT] rains [root] 2 [SPT] . [NO] no"
    assert deserialize(s, seq, graph_schema_isolated) == g


def test_serialize_multi_head_unit_order(graph_schema_multi):
    s = Sentence(("x", "y", "z", "w"))
    g = DependencyGraph(4, [Arc(1, "arg1", 3), Arc(1, "arg2", 4), Arc(3, "root", 3),
                            Arc(2, "arg1", 3), Arc(4, "arg2", 3)])
    seq = serialize(s, g, graph_schema_multi)
    # The two units for word 1 are consecutive, heads ascending.
    assert seq.render().startswith("x [arg1] 3 [SPT] x [arg2] 4 [SPT]")


def test_serialize_rejects_invalid_graph(tree_schema):
    g = DependencyGraph(2, [Arc(1, "r1", 2), Arc(2, "r1", 1)])
    with pytest.raises(InvalidGraphError):
        serialize(Sentence(("a", "b")), g, tree_schema)


def test_serialize_rejects_length_mismatch(tree_schema):
    g = DependencyGraph(1, [Arc(1, "root", 1)])
    with pytest.raises(InvalidGraphError):
        serialize(Sentence(("a", "b")), g, tree_schema)


def test_separator_count_is_arcs_minus_one(tree_schema):
    rng = random.Random(3)
    for _ in range(100):
        s = random_sentence(rng, 10)
        t = random_tree(rng, s, tree_schema)
        rendered = serialize(s, t, tree_schema).render()
        assert rendered.count("[SPT]") == len(t.arcs) - 1


def test_deserialize_round_trips_examples(tree_schema):
    seq = serialize(FIG_SENTENCE, FIG_TREE, tree_schema)
    assert deserialize(FIG_SENTENCE, seq, tree_schema) == FIG_TREE


def test_deserialize_repeated_words_bind_by_scan(tree_schema):
    s = Sentence(("a", "b", "a"))
    seq = TokenSequence.from_text("a [r1] 2 [SPT] b [root] 2 [SPT] a [r1] 2")
    g = deserialize(s, seq, tree_schema)
    assert g == DependencyGraph(3, [Arc(1, "r1", 2), Arc(2, "root", 2), Arc(3, "r1", 2)])


def test_deserialize_head_out_of_range(tree_schema):
    s = Sentence(("a", "b", "a"))
    with pytest.raises(PositionOutOfRangeError):
        deserialize(s, TokenSequence.from_text("a [r1] 9 [SPT] b [root] 2 [SPT] a [r1] 2"),
                    tree_schema)


def test_deserialize_word_mismatch(tree_schema):
    s = Sentence(("a", "b"))
    with pytest.raises(WordMismatchError):
        deserialize(s, TokenSequence.from_text("a [r1] 2 [SPT] c [root] 2"), tree_schema)


def test_deserialize_uncovered_word(tree_schema):
    s = Sentence(("a", "b"))
    with pytest.raises(WordMismatchError):
        deserialize(s, TokenSequence.from_text("a [root] 1"), tree_schema)


def test_deserialize_malformed_unit(tree_schema):
    s = Sentence(("a", "b"))
    with pytest.raises(MalformedUnitError):
        deserialize(s, TokenSequence.from_text("a [r1] [SPT] b [root] 2"), tree_schema)
    with pytest.raises(MalformedUnitError):
        deserialize(s, TokenSequence.from_text("a [r1] no [SPT] b [root] 2"), tree_schema)


def test_deserialize_unknown_relation(tree_schema):
    s = Sentence(("a", "b"))
    with pytest.raises(UnknownRelationError):
        deserialize(s, TokenSequence.from_text("a [bogus] 2 [SPT] b [root] 2"), tree_schema)


def test_multi_head_run_decodes_on_one_position(graph_schema_multi):
    s = Sentence(("x", "y", "z", "w"))
    g = DependencyGraph(4, [Arc(1, "arg1", 3), Arc(1, "arg2", 4), Arc(3, "root", 3),
                            Arc(2, "arg1", 3), Arc(4, "arg2", 3)])
    seq = serialize(s, g, graph_schema_multi)
    assert deserialize(s, seq, graph_schema_multi) == g


def test_repeated_word_multi_head_run_needs_backtracking(graph_schema_multi):
    # Adjacent repeated words where the second carries the multi-head run;
    # a greedy scan that never backtracks can mis-bind the run.
    s = Sentence(("a", "a"))
    g = DependencyGraph(2, [Arc(1, "root", 1), Arc(1, "arg1", 2), Arc(2, "root", 2)])
    seq = serialize(s, g, graph_schema_multi)
    # A scan that greedily advances binds the second unit to position 2 and
    # then has nowhere to put the third; it must back up.
    assert deserialize(s, seq, graph_schema_multi) == g


def test_multi_head_with_repeated_words_can_collide(graph_schema_multi):
    """The flat format is not injective for multi-head graphs over repeated
    words: two distinct graphs can render to the same string.  Decoding such
    a string yields one of the preimages, and re-serializing it reproduces
    the string exactly."""
    s = Sentence(("a", "a", "a"))
    g1 = DependencyGraph(3, [Arc(1, "root", 1), Arc(2, "arg1", 3),
                             Arc(3, "arg1", 1), Arc(3, "root", 3)])
    g2 = DependencyGraph(3, [Arc(1, "root", 1), Arc(1, "arg1", 3),
                             Arc(2, "arg1", 1), Arc(3, "root", 3)])
    s1 = serialize(s, g1, graph_schema_multi)
    s2 = serialize(s, g2, graph_schema_multi)
    assert s1.render() == s2.render()
    decoded = deserialize(s, s1, graph_schema_multi)
    assert decoded in (g1, g2)
    assert serialize(s, decoded, graph_schema_multi).render() == s1.render()


def test_duplicate_units_decode_to_duplicate_arcs(graph_schema_multi):
    s = Sentence(("a", "b"))
    seq = TokenSequence.from_text("a [arg1] 2 [SPT] a [arg1] 2 [SPT] b [root] 2")
    g = deserialize(s, seq, graph_schema_multi)
    assert len(g.arcs) == 3
    from depseq import validate_graph
    assert any("duplicate arc" in v for v in validate_graph(g, graph_schema_multi))


def test_positional_prompt_template():
    assert positional_prompt(FIG_SENTENCE).render() == (
        "Ms. [PID] 1 [SPT] Haag [PID] 2 [SPT] plays [PID] 3 "
        "[SPT] Elianti [PID] 4 [SPT] . [PID] 5")
    assert positional_prompt(Sentence(("Go",))).render() == "Go [PID] 1"


def test_positional_prompt_length_law():
    rng = random.Random(5)
    for _ in range(50):
        s = random_sentence(rng, 15)
        assert len(positional_prompt(s)) == 4 * len(s) - 1


def test_positional_prompt_disabled_is_identity():
    config = SerializerConfig(positional_prompt=False)
    assert positional_prompt(FIG_SENTENCE, config).render() == "Ms. Haag plays Elianti ."


def test_schema_prefix(tree_schema):
    seq = positional_prompt(Sentence(("Go",)))
    prefixed = apply_schema_prefix(seq, tree_schema)
    assert prefixed.render() == "[parse-syn] [SPT] Go [PID] 1"
    two = apply_schema_prefix(seq, Schema("dm", ("root", "arg1"), "root", GRAPH,
                                          allows_multi_head=True))
    assert prefixed.items[2:] == two.items[2:]
    assert prefixed.items[:1] != two.items[:1]


def test_word_map_mode_round_trip():
    schema = make_tree_schema()
    word_map = {"root": "rooted", "r1": "one", "r2": "two", "r3": "three",
                "nsubj": "subject", "dobj": "object", "nn": "noun", "punct": "mark"}
    config = SerializerConfig(relation_mode="word-map", relation_word_map=word_map)
    seq = serialize(FIG_SENTENCE, FIG_TREE, schema, config)
    assert "[nn]" not in seq.render()
    assert "noun" in seq.render().split()
    assert deserialize(FIG_SENTENCE, seq, schema, config) == FIG_TREE


def test_word_map_requires_total_map():
    schema = make_tree_schema()
    config = SerializerConfig(relation_mode="word-map", relation_word_map={"root": "rooted"})
    with pytest.raises(UnknownRelationError):
        serialize(FIG_SENTENCE, FIG_TREE, schema, config)


def test_registry_single_schema_counts():
    schema = Schema("s", ("root", "rel-a", "rel-b"), "root")
    tokens = build_token_registry([schema])
    surfaces = [t.surface for t in tokens]
    assert surfaces == ["[SPT]", "[PID]", "[NO]", "[root]", "[rel-a]", "[rel-b]"]


def test_registry_word_map_mode_has_only_fixed_specials():
    schema = Schema("s", ("root", "rel-a"), "root")
    config = SerializerConfig(relation_mode="word-map", relation_word_map={"root": "x", "rel-a": "y"})
    tokens = build_token_registry([schema], config, with_prefixes=True)
    assert [t.surface for t in tokens] == ["[SPT]", "[PID]", "[NO]", "[parse-s]"]


def test_registry_multi_schema_disambiguates_collisions():
    a = Schema("ptb", ("root", "punct", "nsubj"), "root")
    b = Schema("dm", ("root", "arg1"), "root", GRAPH, allows_multi_head=True,
               allows_isolated=True)
    tokens = build_token_registry([a, b], with_prefixes=True)
    surfaces = [t.surface for t in tokens]
    assert len(surfaces) == len(set(surfaces))
    assert "[ptb:root]" in surfaces and "[dm:root]" in surfaces
    assert "[nsubj]" in surfaces and "[arg1]" in surfaces
    assert surfaces[-2:] == ["[parse-ptb]", "[parse-dm]"]


def test_order_invariant_dependents_follow_sentence_order(tree_schema):
    rng = random.Random(21)
    for _ in range(100):
        s = random_sentence(rng, 12)
        t = random_tree(rng, s, tree_schema)
        deps = [a.dependent for a in t.arcs]
        assert deps == sorted(deps)
        words = [s.word(d) for d in deps]
        rendered_words = [u.split()[0] for u in
                          serialize(s, t, tree_schema).render().split(" [SPT] ")]
        assert rendered_words == words


@pytest.mark.parametrize("schema,gen", [
    (make_tree_schema(), random_tree),
    (make_graph_schema_isolated(), random_graph),
])
def test_random_round_trip(schema, gen):
    rng = random.Random(13)
    for _ in range(500):
        s = random_sentence(rng, 15)
        g = gen(rng, s, schema)
        seq = serialize(s, g, schema)
        assert deserialize(s, seq, schema) == g
