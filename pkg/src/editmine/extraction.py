"""Group low-level tree edits into connected components and lift each one to
a before/after subtree pair (a concrete edit)."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import FrozenSet, Iterable, List, Optional, Tuple

from sklearn.base import BaseEstimator, TransformerMixin

from .diff import EditScript, NodeRef, TreeEdit, diff
from .patterns import ConcreteEdit, Provenance
from .tree import Tree
from .validation import check_tree_pairs

logger = logging.getLogger(__name__)

MAX_COMPONENT_EDITS = 20


@dataclass(frozen=True)
class EditComponent:
    indices: Tuple[int, ...]  # positions in the script, ascending
    edits: Tuple[TreeEdit, ...]
    touched: FrozenSet[NodeRef]

    def __len__(self):
        return len(self.edits)


def components(script: EditScript) -> List[EditComponent]:
    """Partition the script's edits into connected components.

    Each edit touches its node and that node's parent(s); two edits are
    connected when their touched sets intersect, which covers both "same
    parent" and "one is the parent of the other".
    """
    n = len(script.edits)
    parent = list(range(n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    owner = {}
    for i, touched in enumerate(script.touched):
        for ref in touched:
            j = owner.setdefault(ref, i)
            if j != i:
                ra, rb = find(i), find(j)
                if ra != rb:
                    parent[max(ra, rb)] = min(ra, rb)
    groups = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    out = []
    for idx in sorted(groups.values()):
        touched = frozenset().union(*(script.touched[i] for i in idx))
        out.append(EditComponent(tuple(idx), tuple(script.edits[i] for i in idx), touched))
    return out


def _lca(src, nodes: Iterable[int]) -> int:
    nodes = list(nodes)
    anc = nodes[0]
    for x in nodes[1:]:
        while not src.is_descendant(x, anc):
            anc = src.parent[anc]
    return anc


def lift_root(component: EditComponent, script: EditScript) -> Optional[Tuple[int, int]]:
    """Source/target preorder indices of the lifted subtree roots, or None."""
    src, tgt, m = script.source, script.target, script.mapping
    src_nodes = set()
    tgt_nodes = set()
    for side, i in component.touched:
        if side == "s":
            src_nodes.add(i)
            j = m.src_to_tgt.get(i)
            if j is not None:
                tgt_nodes.add(j)
        else:
            tgt_nodes.add(i)
            j = i
            while j >= 0 and j not in m.tgt_to_src:
                j = tgt.parent[j]
            if j < 0:
                return None
            src_nodes.add(m.tgt_to_src[j])
    r = _lca(src, src_nodes)
    while r >= 0:
        t = m.src_to_tgt.get(r)
        if t is not None and all(tgt.is_descendant(j, t) for j in tgt_nodes):
            break
        r = src.parent[r]
    if r <= 0:
        # only the file root covers the edit: not a single-location change
        return None
    t = m.src_to_tgt[r]
    if t == 0:
        return None
    return r, t


def lift(component: EditComponent, script: EditScript,
         provenance: Provenance = Provenance()) -> Optional[ConcreteEdit]:
    roots = lift_root(component, script)
    if roots is None:
        return None
    before = script.source.nodes[roots[0]]
    after = script.target.nodes[roots[1]]
    if before == after:
        return None
    if provenance.span is None and before.span is not None:
        provenance = Provenance(provenance.project, provenance.commit, provenance.path, before.span)
    return ConcreteEdit(before, after, provenance)


def extract_edits(before: Tree, after: Tree, provenance: Provenance = Provenance(),
                  max_component_edits: Optional[int] = MAX_COMPONENT_EDITS) -> List[ConcreteEdit]:
    """Diff two file trees and return their single-location concrete edits.

    Components that lift to the same subtree yield one edit.
    """
    script = diff(before, after)
    found = []
    seen = set()
    for comp in components(script):
        if max_component_edits is not None and len(comp) > max_component_edits:
            logger.debug("dropping %d-edit component in %s", len(comp), provenance.path)
            continue
        roots = lift_root(comp, script)
        if roots is None or roots in seen:
            continue
        seen.add(roots)
        e = lift(comp, script, provenance)
        if e is not None:
            found.append((roots[0], e))
    # source position order
    return [e for _, e in sorted(found, key=lambda p: p[0])]


class EditExtractor(TransformerMixin, BaseEstimator):
    """Turn (before, after) file-tree pairs into concrete edits.

    Stateless; ``fit`` only validates parameters.  ``transform`` accepts
    ``(before, after)`` or ``(before, after, provenance)`` tuples and returns
    one flat list of :class:`ConcreteEdit` in input order.
    """

    def __init__(self, max_component_edits=MAX_COMPONENT_EDITS):
        self.max_component_edits = max_component_edits

    def fit(self, X=None, y=None):
        if self.max_component_edits is not None and self.max_component_edits < 1:
            raise ValueError("max_component_edits must be positive or None")
        return self

    def __sklearn_is_fitted__(self):
        return True

    def transform(self, X) -> List[ConcreteEdit]:
        out = []
        for before, after, prov in check_tree_pairs(X):
            out.extend(extract_edits(before, after, prov, self.max_component_edits))
        return out
