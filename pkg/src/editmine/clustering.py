"""Greedy clustering of concrete edits into rule-admitting groups."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Tuple

from joblib import Parallel, delayed
from sklearn.base import BaseEstimator, ClusterMixin
from sklearn.utils.validation import check_is_fitted

from .antiunify import Generalization, au2
from .patterns import (DEFAULT_ANCHORS, ConcreteEdit, EditPattern, anchors_compatible,
                       apply_pattern, generalizes_anchor, pattern_from)
from .tree import Hole, Tree, size
from .validation import check_depth, check_edits, check_tree


def dcap(t: Tree, d: int) -> Tree:
    """Truncate ``t``: nodes at depth ``d`` and all shallower leaves become holes.

    Every hole is distinct; the result is a bucketing key, not a
    generalization.
    """
    check_depth(d)
    counter = [0]

    def go(n: Tree, depth: int) -> Tree:
        if depth >= d or n.is_leaf:
            counter[0] += 1
            return Hole(counter[0])
        return n.with_children([go(c, depth + 1) for c in n.children])

    return go(t, 0)


def au_cost(template: Tree, t: Tree) -> int:
    """Sum of the sizes bound to each new hole, on both sides, minus the hole count."""
    g, a1, a2 = au2(template, t)
    if not a1:
        return 0
    return sum(size(a1[h]) + size(a2[h]) for h in a1) - len(a1)


@dataclass
class Cluster:
    members: List[ConcreteEdit]
    pattern: EditPattern
    dcap_key: Tuple[Tree, Tree]
    inputs: Generalization = field(repr=False, default=None)
    outputs: Generalization = field(repr=False, default=None)

    @classmethod
    def singleton(cls, e: ConcreteEdit, key) -> "Cluster":
        ins = Generalization.of([e.before])
        outs = Generalization.of([e.after])
        return cls([e], EditPattern(e.before, e.after, {}, [e.provenance]), key, ins, outs)

    def __len__(self):
        return len(self.members)

    @property
    def projects(self):
        return sorted({m.provenance.project for m in self.members})


def cost(e: ConcreteEdit, c: Cluster) -> int:
    """Cost of adding ``e`` to ``c``: input-side plus output-side anti-unification cost."""
    return au_cost(c.pattern.before, e.before) + au_cost(c.pattern.after, e.after)


class _Counter:
    def __init__(self):
        self.checks = 0


def _try_add(c: Cluster, e: ConcreteEdit, anchors) -> Optional[Tuple[Generalization, Generalization, EditPattern]]:
    if anchors and not anchors_compatible(c.members[0], e, anchors):
        return None
    ins = c.inputs.extend(e.before)
    outs = c.outputs.extend(e.after)
    p = pattern_from(ins, outs)
    if p is None:
        return None
    if anchors and generalizes_anchor(p.before, anchors):
        return None
    return ins, outs, p


def cluster_bucket(edits: Iterable[ConcreteEdit], anchors=DEFAULT_ANCHORS,
                   key=None, counter: Optional[_Counter] = None) -> List[Cluster]:
    """Greedy clustering of one d-cap bucket, in input order.

    Each edit joins the cheapest cluster that still admits a rule (ties go
    to the earliest cluster) or starts a new one.
    """
    clusters: List[Cluster] = []
    for e in edits:
        best = None
        best_cost = None
        for c in clusters:
            if counter is not None:
                counter.checks += 1
            added = _try_add(c, e, anchors)
            if added is None:
                continue
            k = cost(e, c)
            if best_cost is None or k < best_cost:
                best, best_cost = (c, added), k
        if best is None:
            bkey = key if key is not None else (dcap(e.before, 1), dcap(e.after, 1))
            clusters.append(Cluster.singleton(e, bkey))
        else:
            c, (ins, outs, p) = best
            c.members.append(e)
            c.inputs, c.outputs = ins, outs
            p.support = [m.provenance for m in c.members]
            c.pattern = p
    return clusters


def bucketize(edits: Iterable[ConcreteEdit], d: int) -> Dict[Tuple[Tree, Tree], List[ConcreteEdit]]:
    buckets: Dict[Tuple[Tree, Tree], List[ConcreteEdit]] = {}
    for e in edits:
        buckets.setdefault((dcap(e.before, d), dcap(e.after, d)), []).append(e)
    return buckets


def _run_bucket(key, members, anchors):
    counter = _Counter()
    clusters = cluster_bucket(members, anchors, key, counter)
    # positions survive a trip through a worker process; object ids do not
    pos = {id(e): k for k, e in enumerate(members)}
    return clusters, [[pos[id(m)] for m in c.members] for c in clusters], counter.checks


def cluster_all(edits: Iterable[ConcreteEdit], d: int = 1, anchors=DEFAULT_ANCHORS,
                n_jobs=None) -> List[Cluster]:
    """Bucket edits by (before, after) d-caps, then cluster each bucket.

    Edits with a common rule but different d-caps end up apart; that is the
    price of bucketing.
    """
    return _cluster_all(edits, d, anchors, n_jobs)[0]


def _cluster_all(edits, d, anchors, n_jobs):
    check_depth(d)
    buckets = bucketize(edits, d)
    if n_jobs in (None, 1) or len(buckets) < 2:
        results = [_run_bucket(k, v, anchors) for k, v in buckets.items()]
    else:
        results = Parallel(n_jobs=n_jobs)(delayed(_run_bucket)(k, v, anchors)
                                          for k, v in buckets.items())
    clusters = []
    for members, (cs, positions, _) in zip(buckets.values(), results):
        for c, pos in zip(cs, positions):
            c.members = [members[k] for k in pos]
            clusters.append(c)
    return clusters, sum(r[2] for r in results)


class QuickFixMiner(ClusterMixin, BaseEstimator):
    """Cluster concrete edits so that each cluster shares one edit pattern.

    Parameters
    ----------
    dcap_depth : int
        Depth of the d-cap used to pre-bucket edits.
    anchors : tuple of (parent_kind, child_kind)
        Children that must stay concrete in a cluster's before-template,
        e.g. the method name of a call.  Empty disables the guard.
    n_jobs : int or None
        Buckets processed in parallel via joblib.

    Attributes
    ----------
    clusters_ : list of Cluster
    labels_ : list of int, cluster index of every input edit
    patterns_ : list of EditPattern, one per cluster
    n_pattern_checks_ : int, candidate checks performed while clustering
    """

    def __init__(self, dcap_depth=1, anchors=DEFAULT_ANCHORS, n_jobs=None):
        self.dcap_depth = dcap_depth
        self.anchors = anchors
        self.n_jobs = n_jobs

    def fit(self, X, y=None):
        edits = check_edits(X)
        check_depth(self.dcap_depth)
        anchors = tuple(tuple(a) for a in (self.anchors or ()))
        self.clusters_, self.n_pattern_checks_ = _cluster_all(edits, self.dcap_depth, anchors, self.n_jobs)
        where = {}
        for ci, c in enumerate(self.clusters_):
            for m in c.members:
                where[id(m)] = ci
        self.labels_ = [where[id(e)] for e in edits]
        self.patterns_ = [c.pattern for c in self.clusters_]
        self.n_edits_ = len(edits)
        return self

    def predict(self, X) -> List[int]:
        """Index of the first cluster whose pattern reproduces each edit, else -1."""
        check_is_fitted(self)
        out = []
        for e in check_edits(X):
            label = -1
            for ci, p in enumerate(self.patterns_):
                if apply_pattern(p, e.before) == e.after:
                    label = ci
                    break
            out.append(label)
        return out

    def rewrite(self, t, min_support=2) -> Optional[Tree]:
        """Apply the first pattern with enough support that matches ``t``."""
        check_is_fitted(self)
        t = check_tree(t)
        for c in self.clusters_:
            if len(c) >= min_support:
                r = apply_pattern(c.pattern, t)
                if r is not None:
                    return r
        return None
