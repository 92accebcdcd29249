import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from editmine.patterns import (ConcreteEdit, EditPattern, anchors_compatible, apply_pattern,
                               generalizes_anchor, is_consistent, learn_pattern)
from editmine.sexpr import parse_template
from editmine.tree import Hole, Tree, node, substitute

import corpus
import oracles
from strategies import trees


def edits(pairs):
    return [ConcreteEdit(a, b) for a, b in pairs]


def test_launcher_rule():
    pairs = [corpus.equals_swap(s) for s in ("--launchdiag", "--noclasspath", "-noclasspath")]
    p = learn_pattern(edits(pairs))
    assert str(p) == ('(call (index (id "args") (id "i")) (name "equals") ?1) => '
                      '(call ?1 (name "equals") (index (id "args") (id "i")))')
    assert is_consistent(p, edits(pairs))


def test_inconsistent_edits():
    assert learn_pattern(edits(corpus.inconsistent_pair())) is None


def test_single_edit_is_its_own_rule():
    a, b = corpus.equals_swap("x")
    p = learn_pattern(edits([(a, b)]))
    assert (p.before, p.after, p.hole_map) == (a, b, {})


def test_bare_hole_rule_is_rejected():
    pairs = [(Tree("id", "a"), Tree("lit", "1")), (Tree("id", "b"), Tree("lit", "2"))]
    assert learn_pattern(edits(pairs)) is None


def test_empty_input():
    with pytest.raises(ValueError):
        learn_pattern([])


def test_apply_pattern_renames_holes():
    p = EditPattern(parse_template("(f ?1 ?2)"), parse_template("(g ?1 ?2)"), {1: 2, 2: 1})
    assert apply_pattern(p, node("f", Tree("id", "a"), Tree("id", "b"))) == node("g", Tree("id", "b"), Tree("id", "a"))
    assert apply_pattern(p, node("h", Tree("id", "a"))) is None
    assert str(p) == "(f ?1 ?2) => (g ?2 ?1)"


def test_anchor_guard():
    a, b = corpus.ignore_case_pair()
    assert not anchors_compatible(ConcreteEdit(*a), ConcreteEdit(*b))
    assert anchors_compatible(ConcreteEdit(*a), ConcreteEdit(*a), anchors=())
    assert generalizes_anchor(parse_template("(if (call ?1 ?2 ?3))"))
    assert not generalizes_anchor(parse_template('(call ?1 (name "equals") ?2)'))


def test_key_is_stable_and_ignores_support():
    p = EditPattern(parse_template("(f ?1)"), parse_template("(g ?1)"), {1: 1})
    q = EditPattern(parse_template("(f ?1)"), parse_template("(g ?1)"), {1: 1}, support=["x"])
    assert p.key() == q.key() and len(p.key()) == 16
    assert p.same_rule(q)


def _rule_instances(rng, n):
    before = oracles.random_tree(rng, 5)
    # punch holes at random positions of a random tree
    paths = [p for p, _ in oracles._positions(before) if p]
    holes = rng.sample(paths, min(len(paths), rng.randint(0, 2)))
    holes = [p for p in holes if not any(q != p and p[:len(q)] == q for q in holes)]
    tpl = before
    for k, p in enumerate(holes, start=1):
        tpl = oracles._put(tpl, p, Hole(k))
    out = oracles.mutate(rng, tpl)
    pairs = []
    for _ in range(n):
        alpha = {k: oracles.random_tree(rng, 2) for k in range(1, len(holes) + 1)}
        try:
            pairs.append((substitute(tpl, alpha), substitute(out, alpha)))
        except KeyError:
            return []
    return [(a, b) for a, b in pairs if a != b]


def test_planted_rules_are_learned_and_replay():
    rng = random.Random(21)
    found = 0
    for _ in range(300):
        pairs = _rule_instances(rng, rng.randint(1, 4))
        if not pairs:
            continue
        p = learn_pattern(edits(pairs))
        if p is not None:
            found += 1
            assert all(apply_pattern(p, a) == b for a, b in pairs)
    assert found > 100


@settings(max_examples=200, deadline=None)
@given(st.lists(st.tuples(trees(6), trees(6)).filter(lambda e: e[0] != e[1]), min_size=1, max_size=4))
def test_learned_rule_replays_every_edit(pairs):
    p = learn_pattern(edits(pairs))
    if p is not None:
        assert all(apply_pattern(p, a) == b for a, b in pairs)
        assert set(p.hole_map) == {n.id for n in oracles.preorder(p.after) if n.is_hole}
