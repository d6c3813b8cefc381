"""A small position-tracking s-expression reader.

Used by the native frontend, the CHC frontend, and the solver response
parser.  Atoms keep their source line/column (1-based) so parse errors can
point at the offending token.  Comments run from ';' to end of line; |...|
quoted symbols and "..." string literals are kept as single atoms.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, List, Union


class SexpError(Exception):
    def __init__(self, msg: str, line: int, col: int):
        super().__init__(f"{line}:{col}: {msg}")
        self.msg = msg
        self.line = line
        self.col = col


@dataclass(frozen=True)
class Atom:
    text: str
    line: int = 0
    col: int = 0

    def __str__(self) -> str:
        return self.text


@dataclass(frozen=True)
class SList:
    items: tuple
    line: int = 0
    col: int = 0

    def __str__(self) -> str:
        return "(" + " ".join(str(i) for i in self.items) + ")"

    def __len__(self) -> int:
        return len(self.items)

    def __getitem__(self, i):
        return self.items[i]


Node = Union[Atom, SList]

_DELIM = "() \t\r\n;"


def _tokens(text: str) -> Iterator[Atom]:
    line, col = 1, 1
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c == "\n":
            line += 1
            col = 1
            i += 1
        elif c in " \t\r":
            i += 1
            col += 1
        elif c == ";":
            while i < n and text[i] != "\n":
                i += 1
        elif c in "()":
            yield Atom(c, line, col)
            i += 1
            col += 1
        elif c in '"|':
            close = c
            start_line, start_col = line, col
            j = i + 1
            while j < n and text[j] != close:
                if text[j] == "\n":
                    line += 1
                    col = 0
                j += 1
                col += 1
            if j >= n:
                raise SexpError(f"unterminated {close}...{close}", start_line, start_col)
            yield Atom(text[i : j + 1], start_line, start_col)
            col += 2
            i = j + 1
        else:
            start_line, start_col = line, col
            j = i
            while j < n and text[j] not in _DELIM and text[j] not in '"|':
                j += 1
                col += 1
            yield Atom(text[i:j], start_line, start_col)
            i = j


def parse_all(text: str) -> List[Node]:
    """Parse every top-level s-expression in text."""
    out: List[Node] = []
    stack: List[tuple[List[Node], int, int]] = []
    for tok in _tokens(text):
        if tok.text == "(":
            stack.append(([], tok.line, tok.col))
        elif tok.text == ")":
            if not stack:
                raise SexpError("unmatched ')'", tok.line, tok.col)
            items, l, c = stack.pop()
            node = SList(tuple(items), l, c)
            if stack:
                stack[-1][0].append(node)
            else:
                out.append(node)
        else:
            if stack:
                stack[-1][0].append(tok)
            else:
                out.append(tok)
    if stack:
        _, l, c = stack[-1]
        raise SexpError("unclosed '('", l, c)
    return out


def parse_one(text: str) -> Node:
    nodes = parse_all(text)
    if len(nodes) != 1:
        raise SexpError(f"expected one s-expression, got {len(nodes)}", 1, 1)
    return nodes[0]
