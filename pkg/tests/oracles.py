"""Brute-force reference implementations used by the tests.

Nothing here calls the anti-unification or pattern-learning code; templates
are enumerated directly and checked with plain matching.
"""

import itertools
import random
from functools import lru_cache

from editmine.tree import Hole, Tree, canonicalize, match, preorder

KINDS = ("f", "g", "h")
LABELS = ("x", "y", "z")


def _positions(t, path=()):
    yield path, t
    for k, c in enumerate(t.children):
        yield from _positions(c, path + (k,))


def _antichains(t):
    """Every set of pairwise non-nested positions, as lists of paths."""
    if not t.children:
        return [[], [()]]
    per_child = [_antichains(c) for c in t.children]
    out = [[()]]
    for combo in itertools.product(*per_child):
        out.append([(k,) + p for k, chain in enumerate(combo) for p in chain])
    return out


def _set_partitions(items):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _set_partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]
        yield [[first]] + part


def _replace(t, assignment, path=()):
    if path in assignment:
        return Hole(assignment[path])
    if not t.children:
        return t
    return t.with_children([_replace(c, assignment, path + (k,)) for k, c in enumerate(t.children)])


def _subtree(t, path):
    for k in path:
        t = t.children[k]
    return t


def templates_of(t, max_holes=None):
    """All templates (canonical hole numbering) that instantiate to ``t``."""
    out = set()
    for chain in _antichains(t):
        # positions may share a hole only if they hold equal subtrees
        groups = {}
        for p in chain:
            groups.setdefault(_subtree(t, p), []).append(p)
        per_group = [list(_set_partitions(ps)) for ps in groups.values()]
        for parts in itertools.product(*per_group):
            blocks = [b for part in parts for b in part]
            if max_holes is not None and len(blocks) > max_holes:
                continue
            assignment = {}
            for hid, block in enumerate(blocks, start=1):
                for p in block:
                    assignment[p] = hid
            out.add(canonicalize(_replace(t, assignment))[0])
    return out


def _concrete_count(t):
    return sum(1 for n in preorder(t) if not n.is_hole)


def _distinct_holes(t):
    return len({n.id for n in preorder(t) if n.is_hole})


def brute_lgg(ts):
    """Least general template matching all of ``ts``, by enumeration."""
    cands = [c for c in templates_of(ts[0]) if all(match(c, t) is not None for t in ts[1:])]
    cands.sort(key=lambda c: (-_concrete_count(c), _distinct_holes(c)))
    for c in cands:
        # c is least general if every candidate generalizes it
        if all(match(other, c) is not None for other in cands):
            return c
    raise AssertionError("no least general template found")


def brute_rule(edits, max_holes=None):
    """A consistent (before, after, hole_map) rule, or None, by enumeration."""
    ins = [e[0] for e in edits]
    outs = [e[1] for e in edits]
    t_in = [c for c in templates_of(ins[0], max_holes) if all(match(c, t) is not None for t in ins[1:])]
    t_out = [c for c in templates_of(outs[0], max_holes) if all(match(c, t) is not None for t in outs[1:])]
    out_cols = []
    for to in t_out:
        subs = [match(to, o) for o in outs]
        out_cols.append((to, {h: tuple(s[h] for s in subs) for h in subs[0]}))
    for ti in t_in:
        subs = [match(ti, i) for i in ins]
        cols = {}
        for h in subs[0]:
            cols.setdefault(tuple(s[h] for s in subs), h)
        for to, ocols in out_cols:
            if ti.is_hole and to.is_hole:
                continue  # a bare hole on both sides says nothing
            if all(col in cols for col in ocols.values()):
                return ti, to, {h: cols[col] for h, col in ocols.items()}
    return None


# ------------------------------------------------------------ enumeration

@lru_cache(None)
def all_trees(max_nodes, kinds=KINDS, labels=LABELS, leaf_kinds=None):
    """Every tree with at most ``max_nodes`` nodes; leaves are labeled."""
    leaf_kinds = leaf_kinds or kinds

    @lru_cache(None)
    def exact(n):
        if n == 1:
            return tuple(Tree(k, lab) for k in leaf_kinds for lab in labels)
        return tuple(Tree(k, None, f) for k in kinds for f in forests(n - 1))

    @lru_cache(None)
    def forests(n):
        if n == 0:
            return ((),)
        out = []
        for first in range(1, n + 1):
            for t in exact(first):
                for rest in forests(n - first):
                    out.append((t,) + rest)
        return tuple(out)

    return tuple(t for n in range(1, max_nodes + 1) for t in exact(n))


def random_tree(rng, max_nodes, kinds=KINDS, labels=LABELS):
    budget = rng.randint(1, max_nodes)

    def build(budget):
        if budget <= 1 or rng.random() < 0.25:
            return Tree(rng.choice(kinds), rng.choice(labels)), 1
        kids, used = [], 1
        for _ in range(rng.randint(1, 3)):
            if used >= budget:
                break
            c, u = build(budget - used)
            kids.append(c)
            used += u
        return Tree(rng.choice(kinds), None, kids), used

    return build(budget)[0]


def mutate(rng, t, kinds=KINDS, labels=LABELS):
    """Change one random position: relabel a leaf, rekind a node, or swap in a leaf."""
    path = rng.choice([p for p, _ in _positions(t)])
    sub = _subtree(t, path)
    r = rng.random()
    if sub.is_leaf and r < 0.5:
        new = Tree(sub.kind, rng.choice(labels))
    elif not sub.is_leaf and r < 0.75:
        new = Tree(rng.choice(kinds), None, sub.children)
    else:
        new = Tree(rng.choice(kinds), rng.choice(labels))
    return _put(t, path, new)


def _put(t, path, new):
    if not path:
        return new
    kids = list(t.children)
    kids[path[0]] = _put(kids[path[0]], path[1:], new)
    return t.with_children(kids)


def seeded(seed):
    return random.Random(seed)
