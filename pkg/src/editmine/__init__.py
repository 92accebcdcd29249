"""Mine recurring single-location edit patterns from revision histories."""

__version__ = "0.1.0"

from .tree import Hole, Tree, canonicalize, match, size, substitute  # noqa: E402
from .sexpr import ParseError, parse_ast_text, parse_template, serialize_ast_text  # noqa: E402
from .diff import apply, diff  # noqa: E402
from .antiunify import au2, au_many  # noqa: E402
from .patterns import (ConcreteEdit, EditPattern, Provenance, anchors_compatible,  # noqa: E402
                       apply_pattern, learn_pattern)
from .extraction import EditExtractor, components, extract_edits, lift  # noqa: E402
from .clustering import Cluster, QuickFixMiner, cluster_all, cluster_bucket, cost, dcap  # noqa: E402
from .ingestion import (GitSource, MiningConfig, PairsDirectorySource, mine,  # noqa: E402
                        walk)
from .catalog import (PatternCatalog, aggregate, export_catalog, filter_catalog,  # noqa: E402
                      import_catalog, report_coverage)

__all__ = [
    "Tree", "Hole", "size", "match", "substitute", "canonicalize",
    "ParseError", "parse_ast_text", "parse_template", "serialize_ast_text",
    "diff", "apply", "au2", "au_many",
    "ConcreteEdit", "EditPattern", "Provenance", "learn_pattern", "apply_pattern",
    "anchors_compatible", "EditExtractor", "components", "lift", "extract_edits",
    "Cluster", "QuickFixMiner", "dcap", "cost", "cluster_bucket", "cluster_all",
    "PairsDirectorySource", "GitSource", "MiningConfig", "walk", "mine",
    "PatternCatalog", "aggregate", "filter_catalog", "report_coverage",
    "export_catalog", "import_catalog",
]
