"""Tree differencing: node mapping plus an insert/delete/update/move script.

The matcher is a simplified GumTree:

1. top-down: greedily map maximal isomorphic subtrees of height >= 2, tallest
   first; among equal candidates the smallest target preorder index wins;
2. bottom-up: map an unmapped interior source node to an unmapped target node
   of the same kind when the dice overlap of their already-mapped descendants
   exceeds ``SIMILARITY_THRESHOLD``, then recover leftover children;
3. script generation from the mapping (Chawathe et al.), replayed on a
   mutable working copy so every emitted path is valid when applied.

Paths are child-index sequences from the root; ``()`` is the root itself.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple, Union

from .tree import Tree

MIN_HEIGHT = 2
SIMILARITY_THRESHOLD = 0.5

Path = Tuple[int, ...]
# ("s", i) is source preorder node i, ("t", j) a target-only node
NodeRef = Tuple[str, int]


class InvalidPathError(IndexError):
    """An edit refers to a position that does not exist in the tree."""


@dataclass(frozen=True)
class Insert:
    kind: str
    label: Optional[str]
    parent: Path
    k: int


@dataclass(frozen=True)
class Delete:
    path: Path
    parent: Path
    k: int


@dataclass(frozen=True)
class Update:
    path: Path
    kind: str
    label: Optional[str]


@dataclass(frozen=True)
class Move:
    path: Path
    parent: Path
    k: int


TreeEdit = Union[Insert, Delete, Update, Move]


class IndexedTree:
    """Preorder numbering of a tree with parent links and subtree extents."""

    def __init__(self, root: Tree):
        self.root = root
        self.nodes: List[Tree] = []
        self.parent: List[int] = []
        self.pos: List[int] = []
        self.kids: List[List[int]] = []
        stack = [(root, -1, 0)]
        while stack:
            n, p, k = stack.pop()
            i = len(self.nodes)
            self.nodes.append(n)
            self.parent.append(p)
            self.pos.append(k)
            self.kids.append([])
            if p >= 0:
                self.kids[p].append(i)
            for kk in range(len(n.children) - 1, -1, -1):
                stack.append((n.children[kk], i, kk))
        # descendants of i are range(i + 1, end[i])
        self.end = [0] * len(self.nodes)
        for i in range(len(self.nodes) - 1, -1, -1):
            kids = self.kids[i]
            self.end[i] = self.end[kids[-1]] if kids else i + 1

    def __len__(self):
        return len(self.nodes)

    def children(self, i: int) -> List[int]:
        return self.kids[i]

    def is_descendant(self, i: int, anc: int) -> bool:
        """True when ``i`` is ``anc`` or lies below it."""
        return anc <= i < self.end[anc]

    def path(self, i: int) -> Path:
        out = []
        while self.parent[i] >= 0:
            out.append(self.pos[i])
            i = self.parent[i]
        return tuple(reversed(out))

    def postorder(self) -> List[int]:
        return sorted(range(len(self.nodes)), key=lambda i: (self.end[i], -i))

    def depth(self, i: int) -> int:
        d = 0
        while self.parent[i] >= 0:
            i = self.parent[i]
            d += 1
        return d


@dataclass
class NodeMapping:
    """Partial bijection between source and target preorder indices."""

    src_to_tgt: Dict[int, int] = field(default_factory=dict)
    tgt_to_src: Dict[int, int] = field(default_factory=dict)

    def add(self, s: int, t: int):
        self.src_to_tgt[s] = t
        self.tgt_to_src[t] = s

    def pairs(self) -> List[Tuple[int, int]]:
        return sorted(self.src_to_tgt.items())

    def __len__(self):
        return len(self.src_to_tgt)

    def __contains__(self, pair):
        s, t = pair
        return self.src_to_tgt.get(s) == t


@dataclass
class EditScript:
    edits: List[TreeEdit]
    mapping: NodeMapping
    source: Optional[IndexedTree] = None
    target: Optional[IndexedTree] = None
    # per edit: nodes it modifies, as source refs where a counterpart exists
    touched: List[FrozenSet[NodeRef]] = field(default_factory=list)

    def __len__(self):
        return len(self.edits)

    def __iter__(self):
        return iter(self.edits)

    def dump(self) -> str:
        return "\n".join(_format_edit(e) for e in self.edits)


def _format_edit(e: TreeEdit) -> str:
    if isinstance(e, Insert):
        lab = "" if e.label is None else f' "{e.label}"'
        return f"insert ({e.kind}{lab}) {list(e.parent)} {e.k}"
    if isinstance(e, Delete):
        return f"delete {list(e.path)} {list(e.parent)} {e.k}"
    if isinstance(e, Update):
        lab = "" if e.label is None else f' "{e.label}"'
        return f"update {list(e.path)} ({e.kind}{lab})"
    return f"move {list(e.path)} {list(e.parent)} {e.k}"


# ---------------------------------------------------------------- matching

def match_trees(src: IndexedTree, tgt: IndexedTree) -> NodeMapping:
    m = NodeMapping()
    _top_down(src, tgt, m)
    if 0 not in m.src_to_tgt and 0 not in m.tgt_to_src and src.nodes[0].kind == tgt.nodes[0].kind:
        m.add(0, 0)
    _bottom_up(src, tgt, m)
    # final recovery sweep; pairs added here have larger preorder indices
    s = 0
    while s < len(src):
        t = m.src_to_tgt.get(s)
        if t is not None:
            _recover(src, tgt, m, s, t)
        s += 1
    return m


def _map_isomorphic(src, tgt, m, s, t):
    for off in range(src.end[s] - s):
        m.add(s + off, t + off)


def _top_down(src: IndexedTree, tgt: IndexedTree, m: NodeMapping):
    by_hash: Dict[int, List[int]] = {}
    for j, n in enumerate(tgt.nodes):
        if n.height >= MIN_HEIGHT:
            by_hash.setdefault(hash(n), []).append(j)
    order = sorted((i for i, n in enumerate(src.nodes) if n.height >= MIN_HEIGHT),
                   key=lambda i: (-src.nodes[i].height, i))
    for s in order:
        if s in m.src_to_tgt:
            continue
        sn = src.nodes[s]
        for t in by_hash.get(hash(sn), ()):
            if t in m.tgt_to_src or (s == 0) != (t == 0) or tgt.nodes[t] != sn:
                continue
            if any(j in m.tgt_to_src for j in range(t, tgt.end[t])):
                continue
            if any(i in m.src_to_tgt for i in range(s, src.end[s])):
                break
            _map_isomorphic(src, tgt, m, s, t)
            break


def _dice(src, tgt, m, s, t) -> float:
    ns = src.end[s] - s - 1
    nt = tgt.end[t] - t - 1
    if ns + nt == 0:
        return 0.0
    common = 0
    for i in range(s + 1, src.end[s]):
        j = m.src_to_tgt.get(i)
        if j is not None and t < j < tgt.end[t]:
            common += 1
    return 2.0 * common / (ns + nt)


def _bottom_up(src: IndexedTree, tgt: IndexedTree, m: NodeMapping):
    for s in src.postorder():
        # roots only ever map to each other
        if s == 0 or s in m.src_to_tgt or src.nodes[s].is_leaf:
            continue
        kind = src.nodes[s].kind
        cands = set()
        for i in range(s + 1, src.end[s]):
            j = m.src_to_tgt.get(i)
            while j is not None and j >= 0:
                j = tgt.parent[j]
                if j > 0 and j not in m.tgt_to_src and tgt.nodes[j].kind == kind:
                    cands.add(j)
        best, best_sim = None, SIMILARITY_THRESHOLD
        for t in sorted(cands):
            sim = _dice(src, tgt, m, s, t)
            if sim > best_sim:
                best, best_sim = t, sim
        if best is not None:
            m.add(s, best)
            _recover(src, tgt, m, s, best)


def _recover(src, tgt, m, s, t):
    """Map leftover children of a mapped pair: isomorphic first, then by kind."""
    s_free = [i for i in src.children(s) if i not in m.src_to_tgt]
    t_free = [j for j in tgt.children(t) if j not in m.tgt_to_src]
    if not s_free or not t_free:
        return
    for i in list(s_free):
        for j in t_free:
            if src.nodes[i] == tgt.nodes[j] and not _any_mapped(src, tgt, m, i, j):
                _map_isomorphic(src, tgt, m, i, j)
                s_free.remove(i)
                t_free.remove(j)
                break
    for i in s_free:
        sn = src.nodes[i]
        for j in t_free:
            tn = tgt.nodes[j]
            if sn.kind == tn.kind and sn.is_leaf == tn.is_leaf:
                m.add(i, j)
                t_free.remove(j)
                if not sn.is_leaf:
                    _recover(src, tgt, m, i, j)
                break


def _any_mapped(src, tgt, m, i, j):
    return (any(x in m.src_to_tgt for x in range(i, src.end[i]))
            or any(y in m.tgt_to_src for y in range(j, tgt.end[j])))


# ------------------------------------------------------- script generation

class _WNode:
    __slots__ = ("kind", "label", "children", "parent", "src", "tgt")

    def __init__(self, kind, label, src=None):
        self.kind = kind
        self.label = label
        self.children: List[_WNode] = []
        self.parent: Optional[_WNode] = None
        self.src = src
        self.tgt = None

    def path(self) -> Path:
        out = []
        n = self
        while n.parent is not None:
            out.append(n.parent.children.index(n))
            n = n.parent
        return tuple(reversed(out))

    def insert(self, child: "_WNode", k: int):
        self.children.insert(k, child)
        child.parent = self

    def detach(self) -> int:
        k = self.parent.children.index(self)
        del self.parent.children[k]
        self.parent = None
        return k


def _working_copy(src: IndexedTree) -> List[_WNode]:
    w = [_WNode(n.kind, n.label, src=i) for i, n in enumerate(src.nodes)]
    for i in range(1, len(w)):
        p = w[src.parent[i]]
        p.children.append(w[i])
        w[i].parent = p
    return w


def _lcs(xs, ys, eq):
    n, k = len(xs), len(ys)
    table = [[0] * (k + 1) for _ in range(n + 1)]
    for a in range(n - 1, -1, -1):
        for b in range(k - 1, -1, -1):
            if eq(xs[a], ys[b]):
                table[a][b] = table[a + 1][b + 1] + 1
            else:
                table[a][b] = max(table[a + 1][b], table[a][b + 1])
    out = []
    a = b = 0
    while a < n and b < k:
        if eq(xs[a], ys[b]):
            out.append((xs[a], ys[b]))
            a += 1
            b += 1
        elif table[a + 1][b] >= table[a][b + 1]:
            a += 1
        else:
            b += 1
    return out


def diff(source: Tree, target: Tree) -> EditScript:
    """Compute a mapping and an edit script turning ``source`` into ``target``.

    The script is valid by construction: ``apply(diff(a, b), a) == b``.  It is
    not guaranteed to be minimal.
    """
    src = IndexedTree(source)
    tgt = IndexedTree(target)
    mapping = match_trees(src, tgt)
    gen = _ScriptBuilder(src, tgt, mapping)
    gen.run()
    return EditScript(gen.edits, mapping, src, tgt, gen.touched)


class _ScriptBuilder:
    def __init__(self, src: IndexedTree, tgt: IndexedTree, mapping: NodeMapping):
        self.src = src
        self.tgt = tgt
        self.m = mapping
        self.w = _working_copy(src)
        self.root = self.w[0]
        self.partner: Dict[int, _WNode] = {}  # target index -> working node
        for s, t in mapping.src_to_tgt.items():
            self.w[s].tgt = t
            self.partner[t] = self.w[s]
        self.in_order_w = set()
        self.in_order_t = set()
        self.edits: List[TreeEdit] = []
        self.touched: List[FrozenSet[NodeRef]] = []

    def ref(self, n: _WNode) -> NodeRef:
        if n.src is not None:
            return ("s", n.src)
        return ("t", n.tgt)

    def tref(self, j: int) -> NodeRef:
        s = self.m.tgt_to_src.get(j)
        return ("s", s) if s is not None else ("t", j)

    def emit(self, edit, touched):
        self.edits.append(edit)
        self.touched.append(frozenset(touched))

    def run(self):
        tgt = self.tgt
        # breadth-first over the target
        queue = [0]
        qi = 0
        while qi < len(queue):
            x = queue[qi]
            qi += 1
            queue.extend(tgt.children(x))
            xn = tgt.nodes[x]
            if x == 0:
                w = self.root
                if 0 not in self.partner:
                    # roots of different kinds: relabel the root in place
                    w.tgt = 0
                    self.partner[0] = w
                if (w.kind, w.label) != (xn.kind, xn.label):
                    self.emit(Update((), xn.kind, xn.label), {self.ref(w)})
                    w.kind, w.label = xn.kind, xn.label
            else:
                y = tgt.parent[x]
                z = self.partner[y]
                w = self.partner.get(x)
                if w is None:
                    k = self.find_pos(x)
                    w = _WNode(xn.kind, xn.label)
                    w.tgt = x
                    self.partner[x] = w
                    parent_path = z.path()
                    z.insert(w, k)
                    self.emit(Insert(xn.kind, xn.label, parent_path, k),
                              {("t", x), self.tref(y)})
                else:
                    if (w.kind, w.label) != (xn.kind, xn.label):
                        touched = {self.ref(w)}
                        if w.parent is not None:
                            touched.add(self.ref(w.parent))
                        self.emit(Update(w.path(), xn.kind, xn.label), touched)
                        w.kind, w.label = xn.kind, xn.label
                    if w.parent is not z:
                        self.move(w, x, z)
            self.in_order_w.add(id(w))
            self.in_order_t.add(x)
            self.align_children(w, x)
        self.delete_unmapped()

    def move(self, w: _WNode, x: int, z: _WNode):
        old_parent = w.parent
        path = w.path()
        w.detach()
        k = self.find_pos(x)
        parent_path = z.path()
        z.insert(w, k)
        self.emit(Move(path, parent_path, k), {self.ref(w), self.ref(old_parent), self.ref(z)})

    def align_children(self, w: _WNode, x: int):
        for c in w.children:
            self.in_order_w.discard(id(c))
        xkids = self.tgt.children(x)
        for c in xkids:
            self.in_order_t.discard(c)
        xset = set(xkids)
        s1 = [c for c in w.children if c.tgt is not None and c.tgt in xset]
        wids = {id(c) for c in w.children}
        s2 = [c for c in xkids if c in self.partner and id(self.partner[c]) in wids]
        common = _lcs(s1, s2, lambda a, b: a.tgt == b)
        for a, b in common:
            self.in_order_w.add(id(a))
            self.in_order_t.add(b)
        done = {b for _, b in common}
        for b in s2:
            if b in done:
                continue
            a = self.partner[b]
            self.move(a, b, w)
            self.in_order_w.add(id(a))
            self.in_order_t.add(b)

    def find_pos(self, x: int) -> int:
        y = self.tgt.parent[x]
        v = None
        for c in self.tgt.children(y):
            if c == x:
                break
            if c in self.in_order_t:
                v = c
        if v is None:
            return 0
        u = self.partner[v]
        return u.parent.children.index(u) + 1

    def delete_unmapped(self):
        stack = [(self.root, False)]
        while stack:
            n, expanded = stack.pop()
            if expanded:
                if n.tgt is None:
                    parent = n.parent
                    path = n.path()
                    k = n.detach()
                    self.emit(Delete(path, path[:-1], k), {self.ref(n), self.ref(parent)})
                continue
            stack.append((n, True))
            for c in reversed(n.children):
                stack.append((c, False))


# ------------------------------------------------------------------ apply

class _MNode:
    __slots__ = ("kind", "label", "children")

    def __init__(self, kind, label, children=None):
        self.kind = kind
        self.label = label
        self.children = children if children is not None else []


def _thaw(t: Tree) -> _MNode:
    return _MNode(t.kind, t.label, [_thaw(c) for c in t.children])


def _freeze(n: _MNode) -> Tree:
    return Tree(n.kind, n.label, [_freeze(c) for c in n.children])


def _resolve(root: _MNode, path: Sequence[int], what: str) -> _MNode:
    n = root
    for depth, k in enumerate(path):
        if not 0 <= k < len(n.children):
            raise InvalidPathError(f"{what}: no child {k} at {list(path[:depth])}")
        n = n.children[k]
    return n


def apply(script: Union[EditScript, Sequence[TreeEdit]], source: Tree) -> Tree:
    """Replay ``script`` on ``source``; raises :class:`InvalidPathError`."""
    edits = script.edits if isinstance(script, EditScript) else script
    root = _thaw(source)
    for e in edits:
        if isinstance(e, Insert):
            p = _resolve(root, e.parent, "insert")
            if not 0 <= e.k <= len(p.children):
                raise InvalidPathError(f"insert: position {e.k} out of range")
            p.children.insert(e.k, _MNode(e.kind, e.label))
        elif isinstance(e, Delete):
            if not e.path:
                raise InvalidPathError("delete: cannot delete the root")
            p = _resolve(root, e.parent, "delete")
            if e.path[:-1] != e.parent or e.path[-1] != e.k or not 0 <= e.k < len(p.children):
                raise InvalidPathError(f"delete: inconsistent position {list(e.path)}")
            if p.children[e.k].children:
                raise InvalidPathError(f"delete: node at {list(e.path)} is not a leaf")
            del p.children[e.k]
        elif isinstance(e, Update):
            n = _resolve(root, e.path, "update")
            n.kind, n.label = e.kind, e.label
        elif isinstance(e, Move):
            if not e.path:
                raise InvalidPathError("move: cannot move the root")
            old = _resolve(root, e.path[:-1], "move")
            if not 0 <= e.path[-1] < len(old.children):
                raise InvalidPathError(f"move: no node at {list(e.path)}")
            n = old.children.pop(e.path[-1])
            p = _resolve(root, e.parent, "move")
            if not 0 <= e.k <= len(p.children):
                raise InvalidPathError(f"move: position {e.k} out of range")
            p.children.insert(e.k, n)
        else:
            raise TypeError(f"not a tree edit: {e!r}")
    return _freeze(root)
