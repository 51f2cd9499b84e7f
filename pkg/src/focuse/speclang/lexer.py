"""Shared lexer for every textual format.

One token vocabulary serves streams, properties, components, and
networks.  Words are not split into keyword/identifier classes here;
parsers decide by lexeme, because a word like ``empty`` is reserved in
clause position but a perfectly good message name inside angle
brackets.  ``--`` starts a comment running to end of line, which means
a binary minus must be separated from a following minus by whitespace.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import List, Tuple

from ..diagnostics import (
    Diagnostic,
    RESERVED_WORDS,
    SourceSpan,
    TOO_MANY_ERRORS,
    UNEXPECTED_CHAR,
    error,
)

WORD = "word"
INT = "int"
EOF = "eof"

# Multi-character operators must come before their prefixes.
_TOKEN_RE = re.compile(
    r"""
      (?P<ws>[ \t\r\n]+)
    | (?P<comment>--[^\n]*)
    | (?P<word>[A-Za-z_][A-Za-z0-9_]*)
    | (?P<int>[0-9]+)
    | (?P<op>==>|==|!=|<=|>=|:=|->|[<>,().;:!&|+\-=])
    """,
    re.VERBOSE,
)

_MAX_LEX_ERRORS = 25


@dataclass(frozen=True)
class Token:
    kind: str  # WORD, INT, EOF, or the operator lexeme itself
    text: str
    span: SourceSpan

    @property
    def is_word(self) -> bool:
        return self.kind == WORD

    @property
    def is_reserved(self) -> bool:
        return self.kind == WORD and self.text in RESERVED_WORDS


def tokenize(text: str, start_line: int = 1) -> "Tuple[List[Token], List[Diagnostic]]":
    """Scan text into tokens, appending a zero-length EOF token.

    Unexpected characters become diagnostics and are skipped; scanning
    bails out after a bounded number of them so garbage input costs
    linear time.
    """
    tokens: "List[Token]" = []
    diags: "List[Diagnostic]" = []
    line = start_line
    line_start = 0  # offset of the current line's first character
    pos = 0
    n = len(text)
    while pos < n:
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            col = pos - line_start + 1
            ch = text[pos]
            diags.append(error(
                SourceSpan(line, col, 1),
                f"unexpected character {ch!r}",
                UNEXPECTED_CHAR,
            ))
            if len(diags) >= _MAX_LEX_ERRORS:
                diags.append(error(
                    SourceSpan(line, col, 1),
                    "too many lexical errors; giving up",
                    TOO_MANY_ERRORS,
                ))
                break
            pos += 1
            if ch == "\n":
                line += 1
                line_start = pos
            continue
        start = pos
        pos = m.end()
        seg = m.group(0)
        kind = m.lastgroup
        if kind in ("ws", "comment"):
            newlines = seg.count("\n")
            if newlines:
                line += newlines
                line_start = start + seg.rfind("\n") + 1
            continue
        span = SourceSpan(line, start - line_start + 1, len(seg))
        if kind == "word":
            tokens.append(Token(WORD, seg, span))
        elif kind == "int":
            tokens.append(Token(INT, seg, span))
        else:
            tokens.append(Token(seg, seg, span))
    eof_col = (pos - line_start + 1) if n else 1
    tokens.append(Token(EOF, "", SourceSpan(line, eof_col, 0)))
    return tokens, diags
