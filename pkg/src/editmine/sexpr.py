"""Reader and writer for the s-expression tree format.

Grammar::

    tree  := hole | '(' KIND [LABEL] tree* ')'
    hole  := '?' DIGITS
    LABEL := '"' (escaped char | any char except '"' and '\\')* '"'

``;`` starts a comment that runs to end of line.  Serialization is canonical:
single spaces, no comments, labels quoted with ``"`` and ``\\`` escaped.
"""

from __future__ import annotations

from typing import List, Tuple

from .tree import Hole, Tree

_DELIMS = set('()";') | set(" \t\r\n\f\v")


class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} at line {line}, column {column}")
        self.line = line
        self.column = column


def _quote(label: str) -> str:
    return '"' + label.replace("\\", "\\\\").replace('"', '\\"') + '"'


def serialize_ast_text(t: Tree) -> str:
    out: List[str] = []
    # explicit stack: deep ASTs would otherwise hit the recursion limit
    stack: List[object] = [t]
    while stack:
        item = stack.pop()
        if isinstance(item, str):
            out.append(item)
            continue
        n = item
        if n.is_hole:
            out.append(f"?{n.id}")
            continue
        head = "(" + n.kind
        if n.label is not None:
            head += " " + _quote(n.label)
        out.append(head)
        stack.append(")")
        for c in reversed(n.children):
            stack.append(c)
            stack.append(" ")
    return "".join(out)


class _Reader:
    def __init__(self, text: str, allow_holes: bool):
        self.text = text
        self.i = 0
        self.line = 1
        self.col = 1
        self.allow_holes = allow_holes

    def error(self, msg, line=None, col=None):
        raise ParseError(msg, line or self.line, col or self.col)

    def advance(self, n=1):
        for _ in range(n):
            if self.text[self.i] == "\n":
                self.line += 1
                self.col = 1
            else:
                self.col += 1
            self.i += 1

    def peek(self):
        return self.text[self.i] if self.i < len(self.text) else ""

    def skip_ws(self):
        while self.i < len(self.text):
            ch = self.text[self.i]
            if ch == ";":
                while self.i < len(self.text) and self.text[self.i] != "\n":
                    self.advance()
            elif ch.isspace():
                self.advance()
            else:
                break

    def token(self) -> str:
        start = self.i
        while self.i < len(self.text) and self.text[self.i] not in _DELIMS:
            self.advance()
        return self.text[start:self.i]

    def string(self) -> str:
        line, col = self.line, self.col
        self.advance()  # opening quote
        chars = []
        while True:
            ch = self.peek()
            if ch == "":
                self.error("unterminated string", line, col)
            if ch == '"':
                self.advance()
                return "".join(chars)
            if ch == "\\":
                self.advance()
                esc = self.peek()
                if esc not in ('"', "\\"):
                    self.error(f"invalid escape \\{esc}")
                chars.append(esc)
                self.advance()
                continue
            chars.append(ch)
            self.advance()

    def tree(self) -> Tree:
        # iterative so deeply nested input does not blow the Python stack
        frames: List[Tuple[str, object, list, tuple]] = []
        while True:
            self.skip_ws()
            line, col = self.line, self.col
            ch = self.peek()
            done = None
            if ch == "":
                self.error("unexpected end of input")
            elif ch == "?":
                if not self.allow_holes:
                    self.error("holes are not allowed in a concrete tree")
                self.advance()
                digits = self.token()
                if not digits.isdigit() or int(digits) < 1:
                    self.error(f"malformed hole '?{digits}'", line, col)
                done = Hole(int(digits))
            elif ch == "(":
                self.advance()
                self.skip_ws()
                kind = self.token()
                if not kind or kind.startswith("?"):
                    self.error("expected node kind", self.line, self.col)
                self.skip_ws()
                label = None
                if self.peek() == '"':
                    label = self.string()
                frames.append((kind, label, [], (line, col)))
                continue
            elif ch == ")":
                if not frames:
                    self.error("unbalanced ')'")
                self.advance()
                kind, label, kids, span = frames.pop()
                if label is not None and kids:
                    self.error(f"interior node {kind!r} carries a label", *span)
                done = Tree(kind, label, kids, span)
            elif ch == '"':
                self.error("label outside of a node head")
            else:
                self.error(f"unexpected character {ch!r}")
            if not frames:
                return done
            frames[-1][2].append(done)


def _parse(text: str, allow_holes: bool) -> Tree:
    r = _Reader(text, allow_holes)
    t = r.tree()
    r.skip_ws()
    if r.i != len(text):
        r.error("trailing input after tree")
    return t


def parse_ast_text(text: str) -> Tree:
    """Parse a concrete (hole-free) tree; raises :class:`ParseError`."""
    return _parse(text, allow_holes=False)


def parse_template(text: str) -> Tree:
    """Like :func:`parse_ast_text` but accepts ``?N`` holes."""
    return _parse(text, allow_holes=True)
