"""Tokenizer for Qunity source text.

Names carry a sigil that puts them in separate namespaces: ``&`` for
expression names, ``@`` for program names, ``#`` for real names, ``'`` for
type variables.  Capitalized bare identifiers are type names, lowercase (or
underscore-initial) bare identifiers are quantum variables.  Apostrophes may
appear *inside* identifiers (``l'``), which works out because a type variable
only ever starts where an identifier cannot continue.

Comments are C-style ``/* ... */`` and do not nest.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum, auto

from .errors import LexError


class TokKind(Enum):
    NUMBER = auto()
    QVAR = auto()
    TNAME = auto()
    ENAME = auto()  # &name, text stored without the sigil
    FNAME = auto()  # @name
    RNAME = auto()  # #name
    TYVAR = auto()  # 'name
    KW = auto()
    PUNCT = auto()
    EOF = auto()


@dataclass(frozen=True)
class Token:
    kind: TokKind
    text: str
    line: int
    column: int


KEYWORDS = frozenset(
    [
        "type",
        "def",
        "end",
        "if",
        "then",
        "else",
        "endif",
        "ctrl",
        "match",
        "try",
        "catch",
        "let",
        "in",
        "lambda",
        "of",
        "u3",
        "gphase",
        "rphase",
        "pmatch",
        "pi",
        "euler",
        "sin",
        "cos",
        "tan",
        "arcsin",
        "arccos",
        "arctan",
        "exp",
        "ln",
        "log2",
        "sqrt",
        "ceil",
        "floor",
        "Void",
        "Unit",
    ]
)

# Longest first, so ':=' wins over ':' and '|>' over '|'.
_PUNCTS = (
    ":=",
    "|>",
    "||",
    "&&",
    "->",
    "!=",
    "<=",
    ">=",
    "{",
    "}",
    "(",
    ")",
    "[",
    "]",
    ",",
    ";",
    ":",
    "|",
    "=",
    "<",
    ">",
    "!",
    "+",
    "-",
    "*",
    "/",
    "^",
    "%",
)


def _is_ident_start(c: str) -> bool:
    return c.isalpha() or c == "_"


def _is_ident_char(c: str) -> bool:
    return c.isalnum() or c in "_'"


def tokenize(source: str) -> list[Token]:
    toks: list[Token] = []
    i, line, col = 0, 1, 1
    n = len(source)

    def advance(k: int) -> None:
        nonlocal i, line, col
        for _ in range(k):
            if source[i] == "\n":
                line += 1
                col = 1
            else:
                col += 1
            i += 1

    while i < n:
        c = source[i]
        if c in " \t\r\n":
            advance(1)
            continue
        if source.startswith("/*", i):
            start_line, start_col = line, col
            advance(2)
            while i < n and not source.startswith("*/", i):
                advance(1)
            if i >= n:
                raise LexError("unterminated comment", start_line, start_col)
            advance(2)
            continue
        tline, tcol = line, col
        if c.isdigit():
            j = i
            while j < n and source[j].isdigit():
                j += 1
            toks.append(Token(TokKind.NUMBER, source[i:j], tline, tcol))
            advance(j - i)
            continue
        if c in "&@#":
            j = i + 1
            while j < n and _is_ident_char(source[j]):
                j += 1
            if j == i + 1:
                raise LexError(f"dangling {c!r} sigil", tline, tcol)
            kind = {"&": TokKind.ENAME, "@": TokKind.FNAME, "#": TokKind.RNAME}[c]
            toks.append(Token(kind, source[i + 1 : j], tline, tcol))
            advance(j - i)
            continue
        if c == "'":
            j = i + 1
            while j < n and _is_ident_char(source[j]):
                j += 1
            if j == i + 1:
                raise LexError("dangling type-variable quote", tline, tcol)
            toks.append(Token(TokKind.TYVAR, source[i + 1 : j], tline, tcol))
            advance(j - i)
            continue
        if _is_ident_start(c):
            j = i
            while j < n and _is_ident_char(source[j]):
                j += 1
            word = source[i:j]
            if word in KEYWORDS:
                kind = TokKind.KW
            elif word[0].isupper():
                kind = TokKind.TNAME
            else:
                kind = TokKind.QVAR
            toks.append(Token(kind, word, tline, tcol))
            advance(j - i)
            continue
        for p in _PUNCTS:
            if source.startswith(p, i):
                toks.append(Token(TokKind.PUNCT, p, tline, tcol))
                advance(len(p))
                break
        else:
            raise LexError(f"unexpected character {c!r}", tline, tcol)
    toks.append(Token(TokKind.EOF, "", line, col))
    return toks
