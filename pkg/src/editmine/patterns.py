"""Edit patterns: rewrite rules ``before -> after`` learned from concrete edits."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .antiunify import Generalization
from .sexpr import serialize_ast_text
from .tree import Tree, match, preorder, rename_holes, substitute

# (parent kind, child kind): the child under such a parent must stay concrete
DEFAULT_ANCHORS: Tuple[Tuple[str, str], ...] = (("call", "name"),)


@dataclass(frozen=True)
class Provenance:
    project: str = ""
    commit: str = ""
    path: str = ""
    span: Optional[Tuple[int, int]] = None


@dataclass(frozen=True)
class ConcreteEdit:
    """A before/after subtree pair from one connected group of tree edits."""

    before: Tree
    after: Tree
    provenance: Provenance = Provenance()


@dataclass
class EditPattern:
    before: Tree
    after: Tree
    # hole of ``after`` -> hole of ``before``
    hole_map: Dict[int, int]
    support: List[Provenance] = field(default_factory=list)

    def rule_after(self) -> Tree:
        """``after`` with its holes renamed to the matching ``before`` holes."""
        return rename_holes(self.after, self.hole_map)

    def apply(self, t: Tree) -> Optional[Tree]:
        return apply_pattern(self, t)

    def key(self) -> str:
        """Stable content hash; independent of support and process."""
        text = serialize_ast_text(self.before) + "\n" + serialize_ast_text(self.rule_after())
        return hashlib.sha256(text.encode("utf-8")).hexdigest()[:16]

    def same_rule(self, other: "EditPattern") -> bool:
        return self.before == other.before and self.rule_after() == other.rule_after()

    def __str__(self):
        return f"{serialize_ast_text(self.before)} => {serialize_ast_text(self.rule_after())}"


def hole_map_for(inputs: Generalization, outputs: Generalization) -> Optional[Dict[int, int]]:
    """Map each output hole to an input hole with the identical column.

    Returns None when some output hole has no counterpart, in which case no
    rule explains the edits.
    """
    by_column: Dict[Tuple[Tree, ...], int] = {}
    for h in sorted(inputs.columns):
        by_column.setdefault(inputs.columns[h], h)
    out = {}
    for h, col in outputs.columns.items():
        hi = by_column.get(col)
        if hi is None:
            return None
        out[h] = hi
    return out


def is_vacuous(before: Tree, after: Tree) -> bool:
    return before.is_hole and after.is_hole


def pattern_from(inputs: Generalization, outputs: Generalization,
                 support: Sequence[Provenance] = ()) -> Optional[EditPattern]:
    hole_map = hole_map_for(inputs, outputs)
    if hole_map is None or is_vacuous(inputs.template, outputs.template):
        return None
    return EditPattern(inputs.template, outputs.template, hole_map, list(support))


def learn_pattern(edits: Iterable[ConcreteEdit]) -> Optional[EditPattern]:
    """Least general rule consistent with every edit, or None if none exists.

    The result is exact: a consistent rule exists if and only if this returns
    one, because both templates are least general generalizations.
    """
    edits = list(edits)
    if not edits:
        raise ValueError("learn_pattern needs at least one edit")
    inputs = Generalization.of([e.before for e in edits])
    outputs = Generalization.of([e.after for e in edits])
    return pattern_from(inputs, outputs, [e.provenance for e in edits])


def apply_pattern(p: EditPattern, t: Tree) -> Optional[Tree]:
    alpha = match(p.before, t)
    if alpha is None:
        return None
    return substitute(p.after, {ho: alpha[hi] for ho, hi in p.hole_map.items()})


def is_consistent(p: EditPattern, edits: Iterable[ConcreteEdit]) -> bool:
    """Check the rule against every edit by matching and re-instantiating."""
    if not set(p.hole_map.values()) <= {n.id for n in preorder(p.before) if n.is_hole}:
        return False
    return all(apply_pattern(p, e.before) == e.after for e in edits)


def _anchor_child(t: Tree, anchors) -> Optional[Tree]:
    for parent_kind, child_kind in anchors:
        if t.kind == parent_kind and not t.is_hole:
            for c in t.children:
                if c.kind == child_kind:
                    return c
    return None


def anchors_compatible(e1: ConcreteEdit, e2: ConcreteEdit, anchors=DEFAULT_ANCHORS) -> bool:
    """False when both before-trees are anchored calls with different names.

    ``equals`` and ``equalsIgnoreCase`` rewrites, for instance, must not share
    a cluster even though one rule could cover both.
    """
    a = _anchor_child(e1.before, anchors)
    b = _anchor_child(e2.before, anchors)
    if a is None or b is None:
        return True
    return a == b


def generalizes_anchor(template: Tree, anchors=DEFAULT_ANCHORS) -> bool:
    """True when an anchored child (e.g. a method name) became a hole."""
    for n in preorder(template):
        if n.is_hole:
            continue
        for parent_kind, child_kind in anchors:
            if n.kind != parent_kind:
                continue
            named = [c for c in n.children if c.kind == child_kind]
            # a hole in the slot where the name lives also counts
            if not named and any(c.is_hole for c in n.children):
                return True
            if any(not c.ground for c in named):
                return True
    return False
