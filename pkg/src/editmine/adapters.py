"""Parser adapters for concrete languages."""

from __future__ import annotations

import ast

from .ingestion import ParserAdapter
from .tree import Tree

_SKIP_FIELDS = {"ctx", "type_comment", "kind"}


class PythonAdapter(ParserAdapter):
    """Python source via the stdlib :mod:`ast` module.

    Node kinds are AST class names.  List-valued fields become a wrapper node
    named after the field so arities stay stable; scalar fields (identifiers,
    constants, operators' names) become labeled leaves.
    """

    extensions = (".py",)

    def parse(self, text: str) -> Tree:
        return self.convert(ast.parse(text))

    def convert(self, n: ast.AST) -> Tree:
        kids = []
        for name, value in ast.iter_fields(n):
            if name in _SKIP_FIELDS or value is None:
                continue
            if isinstance(value, ast.AST):
                kids.append(self.convert(value))
            elif isinstance(value, list):
                kids.append(Tree(name, None, [self.convert(v) if isinstance(v, ast.AST)
                                              else Tree("value", repr(v)) for v in value]))
            else:
                kids.append(Tree(name, value if isinstance(value, str) else repr(value)))
        span = (n.lineno, n.col_offset + 1) if hasattr(n, "lineno") else None
        if not kids:
            return Tree(type(n).__name__, None, (), span)
        return Tree(type(n).__name__, None, kids, span)
