import random

import pytest
from sklearn.base import clone

from editmine.diff import diff
from editmine.extraction import EditExtractor, components, extract_edits, lift
from editmine.patterns import Provenance
from editmine.sexpr import parse_ast_text
from editmine.tree import iter_paths

import corpus


def test_launcher_file_yields_three_call_edits():
    edits = extract_edits(corpus.launcher_before(), corpus.launcher_after(), Provenance("ant", "c1", "L.java"))
    assert [(e.before, e.after) for e in edits] == [
        corpus.equals_swap("--launchdiag"),
        corpus.equals_swap("--noclasspath"),
        corpus.equals_swap("-noclasspath"),
    ]
    assert all(e.provenance.project == "ant" for e in edits)


def test_swap_moves_form_one_component():
    a, b = corpus.equals_swap("x")
    wrapped_a = corpus.unit("C", "m", corpus.if_(a))
    wrapped_b = corpus.unit("C", "m", corpus.if_(b))
    s = diff(wrapped_a, wrapped_b)
    comps = components(s)
    assert len(comps) == 1 and len(comps[0]) == 2
    e = lift(comps[0], s)
    assert (e.before, e.after) == (a, b)


def test_renamed_leaf_lifts_to_its_parent():
    a = parse_ast_text('(unit (stmt (call (id "a") (name "foo"))) (stmt (id "q")))')
    b = parse_ast_text('(unit (stmt (call (id "a") (name "bar"))) (stmt (id "q")))')
    (e,) = extract_edits(a, b)
    assert e.before == parse_ast_text('(call (id "a") (name "foo"))')


def test_root_level_edits_are_dropped():
    a = parse_ast_text('(unit (id "a"))')
    b = parse_ast_text('(unit (id "a") (id "b"))')
    assert extract_edits(a, b) == []


def test_component_size_cap():
    a = parse_ast_text('(unit (x (block (id "a"))) (y (id "k")))')
    big = " ".join(f'(id "n{i}")' for i in range(25))
    b = parse_ast_text(f'(unit (x (block (id "a") {big})) (y (id "k")))')
    assert extract_edits(a, b, max_component_edits=25) != []
    assert extract_edits(a, b) == []
    assert extract_edits(a, b, max_component_edits=24) == []
    assert extract_edits(a, b, max_component_edits=None) != []


def test_edits_are_in_source_order_and_subtrees_of_the_inputs():
    rng = random.Random(5)
    for _ in range(200):
        a, b = corpus.random_pair(rng)
        edits = extract_edits(a, b)
        befores = {t for _, t in iter_paths(a)}
        afters = {t for _, t in iter_paths(b)}
        for e in edits:
            assert e.before in befores and e.after in afters
            assert e.before != e.after


def test_components_partition_the_script():
    rng = random.Random(9)
    for _ in range(200):
        a, b = corpus.random_pair(rng)
        s = diff(a, b)
        comps = components(s)
        seen = sorted(i for c in comps for i in c.indices)
        assert seen == list(range(len(s.edits)))
        for c1 in comps:
            for c2 in comps:
                if c1 is not c2:
                    assert not (c1.touched & c2.touched)


def test_extractor_estimator():
    ex = EditExtractor()
    assert ex.get_params() == {"max_component_edits": 20}
    assert clone(ex).get_params() == ex.get_params()
    out = ex.fit_transform([(corpus.launcher_before(), corpus.launcher_after())])
    assert len(out) == 3
    with pytest.raises(TypeError):
        ex.transform("not pairs")
    with pytest.raises(ValueError):
        EditExtractor(max_component_edits=0).fit()
