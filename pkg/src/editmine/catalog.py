"""Cross-project pattern catalog: aggregation, filtering, coverage, file formats.

Structured format (one JSON object per line)::

    {"type": "catalog", "version": 1, "metadata": {...}}
    {"type": "pattern", "key": ..., "before": "<sexpr>", "after": "<sexpr>",
     "hole_map": {"1": 1}, "edit_count": 3, "project_count": 2,
     "projects": [...], "support": [{"project": ..., "commit": ..., "path": ..., "span": [l, c]}]}

Templates are embedded in canonical s-expression form.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence

from . import __version__
from .clustering import Cluster
from .patterns import EditPattern, Provenance, is_vacuous
from .sexpr import parse_template, serialize_ast_text
from .tree import preorder

FORMAT_VERSION = 1
RENAME_KINDS = ("id", "name")


@dataclass
class CatalogEntry:
    pattern: EditPattern
    edit_count: int
    project_count: int
    projects: List[str]

    @property
    def support(self) -> List[Provenance]:
        return self.pattern.support

    def sort_key(self):
        return (-self.project_count, -self.edit_count, self.pattern.key())


@dataclass
class PatternCatalog:
    entries: List[CatalogEntry] = field(default_factory=list)
    metadata: Dict[str, object] = field(default_factory=dict)

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)


def _entry(pattern: EditPattern) -> CatalogEntry:
    projects = sorted({p.project for p in pattern.support})
    return CatalogEntry(pattern, len(pattern.support), len(projects), projects)


def aggregate(clusters: Iterable[Cluster], metadata: Optional[dict] = None) -> PatternCatalog:
    """One entry per cluster, ordered by project count, edit count, then key."""
    entries = [_entry(c.pattern) for c in clusters]
    entries.sort(key=CatalogEntry.sort_key)
    meta = {"tool_version": __version__}
    meta.update(metadata or {})
    return PatternCatalog(entries, meta)


def is_rename(p: EditPattern, kinds: Sequence[str] = RENAME_KINDS) -> bool:
    """True when before and after differ only in one identifier leaf's label."""
    a, b = p.before, p.rule_after()
    if a.is_hole or b.is_hole:
        return False
    diffs = []
    stack = [(a, b)]
    while stack:
        x, y = stack.pop()
        if x == y:
            continue
        if (x.is_hole or y.is_hole or x.kind != y.kind
                or len(x.children) != len(y.children)):
            return False
        if x.is_leaf:
            diffs.append((x, y))
            if len(diffs) > 1:
                return False
            continue
        stack.extend(zip(x.children, y.children))
    return len(diffs) == 1 and diffs[0][0].kind in kinds


def is_spurious(p: EditPattern) -> bool:
    return is_rename(p) or is_vacuous(p.before, p.after)


def filter_catalog(cat: PatternCatalog, min_projects: int = 3, min_edits: int = 2,
                   drop_spurious: bool = True) -> PatternCatalog:
    if min_projects < 0 or min_edits < 0:
        raise ValueError("thresholds must be >= 0")
    kept = [e for e in cat.entries
            if e.project_count >= min_projects and e.edit_count >= min_edits
            and not (drop_spurious and is_spurious(e.pattern))]
    meta = dict(cat.metadata)
    meta.update(min_projects=min_projects, min_edits=min_edits, drop_spurious=drop_spurious)
    return PatternCatalog(kept, meta)


@dataclass(frozen=True)
class Coverage:
    total_edits: int
    multi_edit_cluster_edits: int

    @property
    def fraction(self) -> Fraction:
        if self.total_edits == 0:
            return Fraction(0)
        return Fraction(self.multi_edit_cluster_edits, self.total_edits)

    def __iter__(self):
        return iter((self.total_edits, self.multi_edit_cluster_edits, self.fraction))

    def __str__(self):
        return (f"{self.multi_edit_cluster_edits}/{self.total_edits} edits in multi-edit "
                f"clusters ({float(self.fraction):.1%})")


def report_coverage(clusters: Iterable[Cluster]) -> Coverage:
    sizes = [len(c) for c in clusters]
    return Coverage(sum(sizes), sum(s for s in sizes if s > 1))


# ------------------------------------------------------------------ formats

def _prov_to_json(p: Provenance) -> dict:
    return {"project": p.project, "commit": p.commit, "path": p.path,
            "span": list(p.span) if p.span is not None else None}


def _prov_from_json(d: dict) -> Provenance:
    span = d.get("span")
    return Provenance(d.get("project", ""), d.get("commit", ""), d.get("path", ""),
                      tuple(span) if span is not None else None)


def export_structured(cat: PatternCatalog) -> str:
    lines = [json.dumps({"type": "catalog", "version": FORMAT_VERSION,
                         "metadata": cat.metadata}, sort_keys=True)]
    for e in cat.entries:
        p = e.pattern
        lines.append(json.dumps({
            "type": "pattern",
            "key": p.key(),
            "before": serialize_ast_text(p.before),
            "after": serialize_ast_text(p.after),
            "hole_map": {str(k): v for k, v in sorted(p.hole_map.items())},
            "edit_count": e.edit_count,
            "project_count": e.project_count,
            "projects": e.projects,
            "support": [_prov_to_json(s) for s in p.support],
        }, sort_keys=True, ensure_ascii=False))
    return "\n".join(lines) + "\n"


def import_structured(text: str) -> PatternCatalog:
    """Inverse of :func:`export_structured`; raises :class:`CatalogFormatError`."""
    lines = [(n, line) for n, line in enumerate(text.splitlines(), start=1) if line.strip()]
    if not lines:
        raise CatalogFormatError("empty catalog document", 1)
    try:
        head = json.loads(lines[0][1])
    except json.JSONDecodeError as exc:
        raise CatalogFormatError(f"bad header: {exc}", lines[0][0]) from exc
    if not isinstance(head, dict) or head.get("type") != "catalog":
        raise CatalogFormatError("first line must be the catalog header", lines[0][0])
    if head.get("version") != FORMAT_VERSION:
        raise CatalogFormatError(f"unsupported version {head.get('version')!r}", lines[0][0])
    entries = []
    for n, line in lines[1:]:
        try:
            d = json.loads(line)
            if d.get("type") != "pattern":
                raise CatalogFormatError(f"unexpected record type {d.get('type')!r}", n)
            pattern = EditPattern(
                parse_template(d["before"]),
                parse_template(d["after"]),
                {int(k): int(v) for k, v in d["hole_map"].items()},
                [_prov_from_json(s) for s in d["support"]],
            )
            entries.append(CatalogEntry(pattern, int(d["edit_count"]), int(d["project_count"]),
                                        list(d["projects"])))
        except CatalogFormatError:
            raise
        except (json.JSONDecodeError, KeyError, TypeError, ValueError, AttributeError) as exc:
            raise CatalogFormatError(f"bad pattern record: {exc}", n) from exc
    return PatternCatalog(entries, dict(head.get("metadata") or {}))


class CatalogFormatError(ValueError):
    def __init__(self, message, line):
        super().__init__(f"line {line}: {message}")
        self.line = line


def render_rules(cat: PatternCatalog) -> str:
    """Human-readable before/after blocks, holes shared via the hole map."""
    out = []
    for n, e in enumerate(cat.entries, start=1):
        p = e.pattern
        holes = sorted({h.id for h in preorder(p.before) if h.is_hole})
        out.append(f"rule {n}  [{p.key()}]  edits={e.edit_count} projects={e.project_count}"
                   f" ({', '.join(e.projects)})")
        if holes:
            out.append("  holes: " + " ".join(f"?{h}" for h in holes))
        out.append("  @before")
        out.append("    " + serialize_ast_text(p.before))
        out.append("  @after")
        out.append("    " + serialize_ast_text(p.rule_after()))
        out.append("")
    return "\n".join(out)


def export_catalog(cat: PatternCatalog, format: str = "structured") -> str:
    if format == "structured":
        return export_structured(cat)
    if format == "rule-text":
        return render_rules(cat)
    raise ValueError(f"unknown catalog format {format!r}")


def import_catalog(text: str) -> PatternCatalog:
    return import_structured(text)
