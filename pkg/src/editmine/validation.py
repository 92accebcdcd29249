"""Input checks shared by the estimators."""

from __future__ import annotations

from typing import Iterable, Iterator, List, Tuple

from .patterns import ConcreteEdit, Provenance
from .sexpr import parse_ast_text
from .tree import Tree


def check_tree(t, name="tree", allow_holes=False) -> Tree:
    """Accept a :class:`Tree` or its serialized text."""
    if isinstance(t, str):
        t = parse_ast_text(t)
    if not isinstance(t, Tree):
        raise TypeError(f"{name} must be a Tree or serialized tree text, got {type(t).__name__}")
    if not allow_holes and not t.ground:
        raise ValueError(f"{name} contains holes; expected a concrete tree")
    return t


def check_edits(X) -> List[ConcreteEdit]:
    """Normalize ``X`` to a list of concrete edits.

    Items may be :class:`ConcreteEdit` or ``(before, after[, provenance])``
    tuples.  Identical before/after pairs are rejected.
    """
    if isinstance(X, (str, bytes)) or not isinstance(X, Iterable):
        raise TypeError("expected an iterable of concrete edits")
    out = []
    for k, item in enumerate(X):
        if not isinstance(item, ConcreteEdit):
            if not isinstance(item, tuple) or len(item) not in (2, 3):
                raise TypeError(f"item {k}: expected ConcreteEdit or (before, after[, provenance])")
            before = check_tree(item[0], f"item {k} before")
            after = check_tree(item[1], f"item {k} after")
            prov = item[2] if len(item) == 3 else Provenance()
            item = ConcreteEdit(before, after, prov)
        if item.before == item.after:
            raise ValueError(f"item {k}: before and after are identical")
        out.append(item)
    return out


def check_tree_pairs(X) -> Iterator[Tuple[Tree, Tree, Provenance]]:
    if isinstance(X, (str, bytes)) or not isinstance(X, Iterable):
        raise TypeError("expected an iterable of (before, after) pairs")
    for k, item in enumerate(X):
        if hasattr(item, "before") and hasattr(item, "after"):
            prov = getattr(item, "provenance", None) or Provenance(
                getattr(item, "project", ""), getattr(item, "commit", ""), getattr(item, "path", ""))
            yield check_tree(item.before), check_tree(item.after), prov
            continue
        if not isinstance(item, tuple) or len(item) not in (2, 3):
            raise TypeError(f"item {k}: expected (before, after[, provenance])")
        prov = item[2] if len(item) == 3 else Provenance()
        yield check_tree(item[0], f"item {k} before"), check_tree(item[1], f"item {k} after"), prov


def check_depth(d) -> int:
    if isinstance(d, bool) or not isinstance(d, int) or d < 1:
        raise ValueError(f"d-cap depth must be an integer >= 1, got {d!r}")
    return d
