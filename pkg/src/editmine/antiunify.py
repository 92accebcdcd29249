"""First-order anti-unification (least general generalization) of trees.

Positions where the inputs disagree in kind, label or arity collapse to a
single hole.  Two positions get the same hole exactly when the tuples of
subtrees they generalize are structurally equal.  Holes already present in
the inputs are treated as opaque leaves, so generalizing a template against
a tree works too.
"""

from __future__ import annotations

from typing import Dict, List, Sequence, Tuple

from .tree import Hole, Substitution, Tree, substitute


def _same_head(xs: Sequence[Tree]) -> bool:
    x0 = xs[0]
    if x0.is_hole:
        return False
    n = len(x0.children)
    for x in xs[1:]:
        if x.is_hole or x.kind != x0.kind or x.label != x0.label or len(x.children) != n:
            return False
    return True


def _generalize(columns: Sequence[Tree], holes: Dict[Tuple[Tree, ...], int]) -> Tree:
    x0 = columns[0]
    if x0.ground and all(x == x0 for x in columns[1:]):
        return x0
    if x0.children and _same_head(columns):
        kids = [_generalize(tuple(x.children[k] for x in columns), holes)
                for k in range(len(x0.children))]
        return x0.with_children(kids)
    key = tuple(columns)
    hid = holes.get(key)
    if hid is None:
        hid = holes[key] = len(holes) + 1
    return Hole(hid)


def au_many(ts: Sequence[Tree]) -> Tuple[Tree, List[Substitution]]:
    """Generalize all of ``ts`` at once.

    Returns the template and one substitution per input, with
    ``substitute(template, subs[k]) == ts[k]``.  Holes are numbered in
    first-occurrence preorder, so the result does not depend on input order
    beyond the order of substitutions.
    """
    ts = tuple(ts)
    if not ts:
        raise ValueError("au_many needs at least one tree")
    holes: Dict[Tuple[Tree, ...], int] = {}
    template = _generalize(ts, holes)
    subs: List[Substitution] = [{} for _ in ts]
    for key, hid in holes.items():
        for k, x in enumerate(key):
            subs[k][hid] = x
    return template, subs


def au2(t1: Tree, t2: Tree) -> Tuple[Tree, Substitution, Substitution]:
    template, (a1, a2) = au_many((t1, t2))
    return template, a1, a2


class Generalization:
    """An lgg over a growing list of trees, extended one tree at a time.

    ``columns[h]`` holds the subtree bound to hole ``h`` for every tree seen
    so far.  :meth:`extend` walks the current template against the new tree,
    so a check costs the template size plus the columns it has to widen,
    instead of re-generalizing every member.
    """

    __slots__ = ("template", "columns", "count")

    def __init__(self, template: Tree, columns: Dict[int, Tuple[Tree, ...]], count: int):
        self.template = template
        self.columns = columns
        self.count = count

    @classmethod
    def of(cls, ts: Sequence[Tree]) -> "Generalization":
        template, subs = au_many(ts)
        columns = {h: tuple(s[h] for s in subs) for h in subs[0]}
        return cls(template, columns, len(subs))

    def substitution(self, k: int) -> Substitution:
        return {h: col[k] for h, col in self.columns.items()}

    def extend(self, t: Tree) -> "Generalization":
        n = self.count
        holes: Dict[Tuple[Tree, ...], int] = {}
        subs_cache: List[Substitution] = []

        def member_subs():
            if not subs_cache:
                subs_cache.extend(self.substitution(k) for k in range(n))
            return subs_cache

        def new_hole(col):
            hid = holes.get(col)
            if hid is None:
                hid = holes[col] = len(holes) + 1
            return Hole(hid)

        def go(p: Tree, x: Tree) -> Tree:
            if p.is_hole:
                return _generalize(self.columns[p.id] + (x,), holes)
            if p.ground and p == x:
                return p
            if p.children and _same_head((p, x)):
                return p.with_children([go(a, b) for a, b in zip(p.children, x.children)])
            if p.ground:
                return new_hole((p,) * n + (x,))
            return new_hole(tuple(substitute(p, s) for s in member_subs()) + (x,))

        template = go(self.template, t)
        columns = {hid: col for col, hid in holes.items()}
        return Generalization(template, columns, n + 1)
