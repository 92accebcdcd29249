"""Ordered labeled syntax trees, templates with holes, matching and substitution.

A :class:`Tree` is immutable.  Interior nodes are identified by ``kind``
alone; only leaves carry a ``label``.  A template is simply a tree in which
some leaves are :class:`Hole` instances, so every operation here accepts
either.
"""

from __future__ import annotations

from typing import Dict, Iterator, Mapping, Optional, Sequence, Tuple

TYPE_ANNOTATION_KIND = "type-ann"


class MissingBindingError(KeyError):
    """A substitution lacks a binding for a hole of the template."""


class Tree:
    """Immutable ordered tree node.

    ``span`` is optional source metadata; it never participates in equality
    or hashing.
    """

    __slots__ = ("kind", "label", "children", "span", "_hash", "_size", "_height", "_ground")

    def __init__(self, kind: str, label: Optional[str] = None,
                 children: Sequence["Tree"] = (), span=None):
        children = tuple(children)
        if label is not None and children:
            raise ValueError(f"interior node {kind!r} cannot carry a label")
        if not kind:
            raise ValueError("node kind must be a non-empty string")
        self.kind = kind
        self.label = label
        self.children = children
        self.span = span
        self._hash = hash((kind, label, tuple(c._hash for c in children)))
        if children:
            self._size = sum(c._size for c in children)
            self._height = 1 + max(c._height for c in children)
            self._ground = all(c._ground for c in children)
        else:
            self._size = 1
            self._height = 1
            self._ground = True

    is_hole = False

    @property
    def is_leaf(self) -> bool:
        return not self.children

    @property
    def height(self) -> int:
        return self._height

    @property
    def ground(self) -> bool:
        """True when no hole occurs anywhere in this tree."""
        return self._ground

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, Tree):
            return False
        stack = [(self, other)]
        while stack:
            a, b = stack.pop()
            if a is b:
                continue
            if (a._hash != b._hash or a.is_hole or b.is_hole or a.kind != b.kind
                    or a.label != b.label or len(a.children) != len(b.children)):
                # holes compare by id; only Hole.__eq__ says yes to a hole
                if a.is_hole and b.is_hole and a.id == b.id:
                    continue
                return False
            stack.extend(zip(a.children, b.children))
        return True

    def __ne__(self, other):
        return not self == other

    def __reduce__(self):
        # str hashes are salted per process; rebuild instead of copying _hash
        return (Tree, (self.kind, self.label, self.children, self.span))

    def __repr__(self):
        from .sexpr import serialize_ast_text
        return f"Tree({serialize_ast_text(self)})"

    def __iter__(self) -> Iterator["Tree"]:
        return iter(self.children)

    def __len__(self):
        return len(self.children)

    def with_children(self, children: Sequence["Tree"]) -> "Tree":
        return Tree(self.kind, self.label, children, self.span)


class Hole(Tree):
    """Template variable, rendered ``?N``."""

    __slots__ = ("id",)
    is_hole = True

    def __init__(self, id: int):
        if id < 1:
            raise ValueError("hole ids start at 1")
        self.id = id
        self.kind = "?"
        self.label = None
        self.children = ()
        self.span = None
        self._hash = hash(("?", id))
        self._size = 1
        self._height = 1
        self._ground = False

    def __eq__(self, other):
        return isinstance(other, Hole) and other.id == self.id

    __hash__ = Tree.__hash__

    def __reduce__(self):
        return (Hole, (self.id,))

    def __repr__(self):
        return f"Hole({self.id})"


Template = Tree
Substitution = Dict[int, Tree]


def leaf(kind: str, label: Optional[str] = None) -> Tree:
    return Tree(kind, label)


def node(kind: str, *children: Tree) -> Tree:
    return Tree(kind, None, children)


def with_type(t: Tree, type_name: str) -> Tree:
    """Attach a type annotation as the distinguished first child of ``t``.

    Only interior nodes can take one, since labels are leaf-only.
    """
    if t.is_leaf:
        raise ValueError("type annotations attach to interior nodes")
    return t.with_children((Tree(TYPE_ANNOTATION_KIND, type_name),) + t.children)


def size(t: Tree) -> int:
    """Number of leaf positions; a hole counts as one leaf."""
    return t._size


def preorder(t: Tree) -> Iterator[Tree]:
    stack = [t]
    while stack:
        n = stack.pop()
        yield n
        stack.extend(reversed(n.children))


def node_count(t: Tree) -> int:
    return sum(1 for _ in preorder(t))


def hole_ids(t: Tree) -> Tuple[int, ...]:
    """Distinct hole ids in first-occurrence preorder."""
    seen = {}
    for n in preorder(t):
        if n.is_hole:
            seen.setdefault(n.id, None)
    return tuple(seen)


def hole_occurrences(t: Tree) -> int:
    return sum(1 for n in preorder(t) if n.is_hole)


def match(tau: Tree, t: Tree) -> Optional[Substitution]:
    """Return ``alpha`` with ``substitute(tau, alpha) == t``, or None.

    Holes occurring inside ``t`` are treated as ordinary leaves.
    """
    alpha: Substitution = {}
    stack = [(tau, t)]
    while stack:
        p, x = stack.pop()
        if p.is_hole:
            bound = alpha.get(p.id)
            if bound is None:
                alpha[p.id] = x
            elif bound != x:
                return None
            continue
        if p.ground:
            if p != x:
                return None
            continue
        if (x.is_hole or p.kind != x.kind or p.label != x.label
                or len(p.children) != len(x.children)):
            return None
        stack.extend(zip(p.children, x.children))
    return alpha


def matches(tau: Tree, t: Tree) -> bool:
    return match(tau, t) is not None


def substitute(tau: Tree, alpha: Mapping[int, Tree]) -> Tree:
    """Replace every hole of ``tau`` by its binding in ``alpha``."""
    if tau.is_hole:
        try:
            return alpha[tau.id]
        except KeyError:
            raise MissingBindingError(tau.id) from None
    if tau.ground:
        return tau
    return tau.with_children([substitute(c, alpha) for c in tau.children])


def rename_holes(tau: Tree, renaming: Mapping[int, int]) -> Tree:
    return substitute(tau, {old: Hole(new) for old, new in renaming.items()})


def canonicalize(tau: Tree) -> Tuple[Tree, Dict[int, int]]:
    """Renumber holes 1..n in first-occurrence preorder.

    Returns the renumbered template and the old-to-new id map.
    """
    renaming = {old: i for i, old in enumerate(hole_ids(tau), start=1)}
    if all(k == v for k, v in renaming.items()):
        return tau, renaming
    return rename_holes(tau, renaming), renaming


def equal_up_to_renaming(a: Tree, b: Tree) -> bool:
    return canonicalize(a)[0] == canonicalize(b)[0]


def subtree_at(t: Tree, path: Sequence[int]) -> Tree:
    for k in path:
        t = t.children[k]
    return t


def replace_at(t: Tree, path: Sequence[int], new: Tree) -> Tree:
    if not path:
        return new
    k = path[0]
    kids = list(t.children)
    kids[k] = replace_at(kids[k], path[1:], new)
    return t.with_children(kids)


def iter_paths(t: Tree, prefix: Tuple[int, ...] = ()) -> Iterator[Tuple[Tuple[int, ...], Tree]]:
    """Yield ``(path, subtree)`` for every node, preorder."""
    stack = [(prefix, t)]
    while stack:
        path, n = stack.pop()
        yield path, n
        for k in range(len(n.children) - 1, -1, -1):
            stack.append((path + (k,), n.children[k]))
