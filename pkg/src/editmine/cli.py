"""Command-line entry point: ``editmine mine|filter|render|apply|stats``.

Exit codes: 0 success, 1 usage error, 2 I/O or input-format error.
Set ``EDITMINE_LOG_LEVEL`` (e.g. ``DEBUG``) to change logging verbosity.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path

from .catalog import (CatalogFormatError, aggregate, export_catalog, filter_catalog,
                      import_catalog, report_coverage)
from .ingestion import MiningConfig, SexprAdapter, mine, open_source
from .patterns import apply_pattern
from .sexpr import ParseError, serialize_ast_text
from .tree import iter_paths

EXIT_OK, EXIT_USAGE, EXIT_IO = 0, 1, 2

log = logging.getLogger("editmine")


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(f"{self.prog}: error: {message}")


def _nonneg(text):
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return v


def _positive(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def _add_filters(p):
    p.add_argument("--min-projects", type=_nonneg, default=3)
    p.add_argument("--min-edits", type=_nonneg, default=2)
    p.add_argument("--keep-spurious", action="store_true",
                   help="keep rename-only and single-hole patterns")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="editmine", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("mine", help="mine repositories into a pattern catalog")
    p.add_argument("repos", nargs="+", help="git working copies or pairs directories")
    p.add_argument("--d-cap-depth", type=_positive, default=1)
    _add_filters(p)
    p.add_argument("--out", help="catalog file (default: stdout)")
    p.add_argument("--workers", type=_positive, default=None)
    p.add_argument("--format", choices=("structured", "rule-text"), default="structured")
    p.add_argument("--python", action="store_true", help="also parse .py files")

    p = sub.add_parser("filter", help="re-filter an existing catalog")
    p.add_argument("catalog")
    _add_filters(p)
    p.add_argument("--out")

    p = sub.add_parser("render", help="print a catalog as before/after rules")
    p.add_argument("catalog")
    p.add_argument("--out")

    p = sub.add_parser("apply", help="show where catalog patterns rewrite a tree file")
    p.add_argument("catalog")
    p.add_argument("file")

    p = sub.add_parser("stats", help="coverage and size summary of a catalog")
    p.add_argument("catalog")
    return parser


def _write(text: str, out):
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _read_catalog(path):
    return import_catalog(Path(path).read_text(encoding="utf-8"))


def cmd_mine(args):
    adapters = [SexprAdapter()]
    if args.python:
        from .adapters import PythonAdapter
        adapters.append(PythonAdapter())
    suffixes = tuple(s for a in adapters for s in a.extensions)
    sources = [open_source(r, suffixes=suffixes) for r in args.repos]
    config = MiningConfig(dcap_depth=args.d_cap_depth, workers=args.workers, adapters=adapters)
    clusters = mine(sources, config)
    cov = report_coverage(clusters)
    log.info("%d clusters; %s", len(clusters), cov)
    cat = aggregate(clusters, {
        "d_cap_depth": args.d_cap_depth,
        "total_edits": cov.total_edits,
        "multi_edit_cluster_edits": cov.multi_edit_cluster_edits,
        "clusters": len(clusters),
        "projects": sorted(s.project for s in sources),
    })
    cat = filter_catalog(cat, args.min_projects, args.min_edits, not args.keep_spurious)
    _write(export_catalog(cat, args.format), args.out)


def cmd_filter(args):
    cat = filter_catalog(_read_catalog(args.catalog), args.min_projects, args.min_edits,
                         not args.keep_spurious)
    _write(export_catalog(cat), args.out)


def cmd_render(args):
    _write(export_catalog(_read_catalog(args.catalog), "rule-text"), args.out)


def cmd_apply(args):
    cat = _read_catalog(args.catalog)
    text = Path(args.file).read_text(encoding="utf-8")
    if args.file.endswith(".py"):
        from .adapters import PythonAdapter
        tree = PythonAdapter().parse(text)
    else:
        tree = SexprAdapter().parse(text)
    hits = 0
    for path, sub in iter_paths(tree):
        for n, e in enumerate(cat.entries, start=1):
            out = apply_pattern(e.pattern, sub)
            if out is not None:
                hits += 1
                where = "/".join(map(str, path)) or "root"
                print(f"rule {n} at {where}:")
                print(f"  - {serialize_ast_text(sub)}")
                print(f"  + {serialize_ast_text(out)}")
    print(f"{hits} match(es)")


def cmd_stats(args):
    cat = _read_catalog(args.catalog)
    meta = cat.metadata
    total = meta.get("total_edits")
    multi = meta.get("multi_edit_cluster_edits")
    if total is not None and multi is not None:
        frac = multi / total if total else 0.0
        print(f"edits: {total}")
        print(f"edits in multi-edit clusters: {multi} ({frac:.1%})")
    if "clusters" in meta:
        print(f"clusters: {meta['clusters']}")
    print(f"patterns in catalog: {len(cat)}")
    print(f"edits covered by catalog: {sum(e.edit_count for e in cat)}")
    if cat.entries:
        top = cat.entries[0]
        print(f"top pattern: {top.edit_count} edits in {top.project_count} projects")


COMMANDS = {"mine": cmd_mine, "filter": cmd_filter, "render": cmd_render,
            "apply": cmd_apply, "stats": cmd_stats}


def main(argv=None) -> int:
    logging.basicConfig(level=os.environ.get("EDITMINE_LOG_LEVEL", "WARNING").upper(),
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        args = build_parser().parse_args(argv)
    except _UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    try:
        COMMANDS[args.command](args)
    except (OSError, ParseError, CatalogFormatError, SyntaxError) as exc:
        print(f"editmine: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
