"""Minimal s-expression reader used by the KB, norm, and method file formats.

Atoms are returned as plain strings, lists as Python lists.  ``;`` starts a
comment that runs to the end of the line.
"""

from __future__ import annotations

import re
from typing import Iterator, List, Tuple, Union

SExpr = Union[str, List["SExpr"]]

_TOKEN = re.compile(r"\s+|;[^\n]*|\(|\)|[^\s();]+")


class SExprError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


def _tokens(text: str) -> Iterator[Tuple[str, int, int]]:
    line, line_start = 1, 0
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:  # pragma: no cover - the pattern matches every character
            raise SExprError("unreadable input", line, pos - line_start + 1)
        tok = m.group()
        if not (tok[0].isspace() or tok[0] == ";"):
            yield tok, line, pos - line_start + 1
        newlines = tok.count("\n")
        if newlines:
            line += newlines
            line_start = pos + tok.rindex("\n") + 1
        pos = m.end()


def read_all(text: str) -> List[SExpr]:
    """Read every top-level form in ``text``."""
    stack: List[List[SExpr]] = [[]]
    opened: List[Tuple[int, int]] = []
    for tok, line, col in _tokens(text):
        if tok == "(":
            stack.append([])
            opened.append((line, col))
        elif tok == ")":
            if len(stack) == 1:
                raise SExprError("unexpected ')'", line, col)
            done = stack.pop()
            opened.pop()
            stack[-1].append(done)
        else:
            stack[-1].append(tok)
    if len(stack) > 1:
        line, col = opened[-1]
        raise SExprError("unclosed '('", line, col)
    return stack[0]


def read_one(text: str) -> SExpr:
    forms = read_all(text)
    if len(forms) != 1:
        raise SExprError(f"expected exactly one form, found {len(forms)}", 1, 1)
    return forms[0]


def dump(expr: SExpr) -> str:
    if isinstance(expr, str):
        return expr
    return "(" + " ".join(dump(e) for e in expr) + ")"
