import random

import pytest
from hypothesis import given, settings

from editmine.diff import (Delete, Insert, InvalidPathError, Move, Update, apply, diff)
from editmine.sexpr import parse_ast_text
from editmine.tree import Tree, node

import corpus
from strategies import trees


def test_identical_trees_give_empty_script():
    t = corpus.launcher_before()
    s = diff(t, t)
    assert s.edits == []
    assert len(s.mapping) == sum(1 for _ in range(len(s.source)))


def test_swap_is_two_moves():
    a, b = corpus.equals_swap("--launchdiag")
    s = diff(a, b)
    assert all(isinstance(e, Move) for e in s.edits)
    assert len(s.edits) == 2
    assert apply(s, a) == b


def test_hand_written_script_replays():
    a, b = corpus.equals_swap("--launchdiag")
    assert apply(corpus.swap_script(), a) == b


def test_leaf_rename_is_one_update():
    a = parse_ast_text('(f (g (id "a") (id "b")) (id "c"))')
    b = parse_ast_text('(f (g (id "a") (id "z")) (id "c"))')
    s = diff(a, b)
    assert s.edits == [Update((0, 1), "id", "z")]


def test_root_kind_change():
    a = parse_ast_text('(f (id "a"))')
    b = parse_ast_text('(g (id "a"))')
    s = diff(a, b)
    assert apply(s, a) == b
    assert any(isinstance(e, Update) and e.path == () for e in s.edits)


def test_touched_sets_use_source_refs_for_mapped_nodes():
    a = parse_ast_text('(f (g (id "a") (id "b")))')
    b = parse_ast_text('(f (g (id "a") (id "b") (id "c")))')
    s = diff(a, b)
    assert len(s.edits) == 1 and isinstance(s.edits[0], Insert)
    (touched,) = s.touched
    assert ("s", 1) in touched  # the parent g
    assert any(side == "t" for side, _ in touched)


def test_apply_rejects_bad_paths():
    t = parse_ast_text('(f (id "a"))')
    with pytest.raises(InvalidPathError):
        apply([Delete((3,), (), 3)], t)
    with pytest.raises(InvalidPathError):
        apply([Insert("id", "x", (0,), 5)], t)
    with pytest.raises(InvalidPathError):
        apply([Delete((), (), 0)], node("f", Tree("id", "a")))


def test_random_pairs_replay():
    rng = random.Random(11)
    for _ in range(300):
        a, b = corpus.random_pair(rng)
        assert apply(diff(a, b), a) == b


@settings(max_examples=300, deadline=None)
@given(trees(max_leaves=15), trees(max_leaves=15))
def test_script_replays(a, b):
    s = diff(a, b)
    assert apply(s, a) == b
    assert len(s.touched) == len(s.edits)


@settings(max_examples=200, deadline=None)
@given(trees(max_leaves=15), trees(max_leaves=15))
def test_mapping_is_one_to_one_and_kind_preserving(a, b):
    s = diff(a, b)
    assert len(set(s.mapping.src_to_tgt.values())) == len(s.mapping.src_to_tgt)
    for i, j in s.mapping.pairs():
        assert s.mapping.tgt_to_src[j] == i
        # the roots may differ in kind: the root is rewritten by an update
        if i != 0:
            assert s.source.nodes[i].kind == s.target.nodes[j].kind
