"""Hand-written tokenizer shared by the data and query parsers."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ParseError

# Token kinds. WORD covers bare identifiers (keywords are classified by the
# parsers, case-insensitively); PNAME covers `prefix:local` compact IRIs.
LBRACE = "LBRACE"
RBRACE = "RBRACE"
LPAREN = "LPAREN"
RPAREN = "RPAREN"
DOT = "DOT"
STAR = "STAR"
VAR = "VAR"
IRIREF = "IRIREF"
PNAME = "PNAME"
INTEGER = "INTEGER"
STRING = "STRING"
WORD = "WORD"
BLANK = "BLANK"
AT = "AT"
HATHAT = "HATHAT"
PLUS = "PLUS"
BANG = "BANG"
ANDAND = "ANDAND"
OROR = "OROR"
EQ = "EQ"
NEQ = "NEQ"
LT = "LT"
LE = "LE"
GT = "GT"
GE = "GE"
EOF = "EOF"

_ESCAPES = {'"': '"', "\\": "\\", "n": "\n", "t": "\t", "r": "\r"}


@dataclass(frozen=True)
class Token:
    kind: str
    value: str
    line: int
    col: int

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"Token({self.kind}, {self.value!r}, {self.line}:{self.col})"


def _is_name_start(c: str) -> bool:
    return c.isalpha() or c == "_"


def _is_name_char(c: str) -> bool:
    return c.isalnum() or c == "_"


def _is_local_char(c: str) -> bool:
    return c.isalnum() or c in "_-"


def tokenize(text: str) -> list[Token]:
    """Tokenize query or data text, raising ParseError on bad input."""
    tokens: list[Token] = []
    i = 0
    n = len(text)
    line = 1
    col = 1

    def advance(k: int = 1) -> None:
        nonlocal i, line, col
        for _ in range(k):
            if i < n and text[i] == "\n":
                line += 1
                col = 1
            else:
                col += 1
            i += 1

    def emit(kind: str, value: str, at: tuple[int, int]) -> None:
        tokens.append(Token(kind, value, at[0], at[1]))

    while i < n:
        c = text[i]
        at = (line, col)

        if c.isspace():
            advance()
            continue
        if c == "#":
            while i < n and text[i] != "\n":
                advance()
            continue

        if c == "{":
            emit(LBRACE, c, at)
            advance()
            continue
        if c == "}":
            emit(RBRACE, c, at)
            advance()
            continue
        if c == "(":
            emit(LPAREN, c, at)
            advance()
            continue
        if c == ")":
            emit(RPAREN, c, at)
            advance()
            continue
        if c == ".":
            emit(DOT, c, at)
            advance()
            continue
        if c == "*":
            emit(STAR, c, at)
            advance()
            continue
        if c == "@":
            emit(AT, c, at)
            advance()
            continue
        if c == "+":
            emit(PLUS, c, at)
            advance()
            continue

        if c == "^":
            if i + 1 < n and text[i + 1] == "^":
                emit(HATHAT, "^^", at)
                advance(2)
                continue
            raise ParseError("stray '^'", line, col)

        if c == "&":
            if i + 1 < n and text[i + 1] == "&":
                emit(ANDAND, "&&", at)
                advance(2)
                continue
            raise ParseError("stray '&'", line, col)
        if c == "|":
            if i + 1 < n and text[i + 1] == "|":
                emit(OROR, "||", at)
                advance(2)
                continue
            raise ParseError("stray '|'", line, col)

        if c == "=":
            emit(EQ, "=", at)
            advance()
            continue
        if c == "!":
            if i + 1 < n and text[i + 1] == "=":
                emit(NEQ, "!=", at)
                advance(2)
                continue
            emit(BANG, "!", at)
            advance()
            continue
        if c == "<":
            # Either an IRI reference or a comparison operator; an IRI
            # follows '<' with no whitespace and closes with '>' before
            # any character that cannot occur in our IRIs.
            if i + 1 < n and text[i + 1] == "=":
                emit(LE, "<=", at)
                advance(2)
                continue
            j = i + 1
            while j < n and text[j] not in '> \t\n()?"{}<':
                j += 1
            if j < n and text[j] == ">":
                value = text[i + 1 : j]
                advance(j - i + 1)
                emit(IRIREF, value, at)
                continue
            emit(LT, "<", at)
            advance()
            continue
        if c == ">":
            if i + 1 < n and text[i + 1] == "=":
                emit(GE, ">=", at)
                advance(2)
                continue
            emit(GT, ">", at)
            advance()
            continue

        if c == "?":
            advance()
            if i >= n or not _is_name_start(text[i]):
                raise ParseError("variable name expected after '?'", line, col)
            j = i
            while j < n and _is_name_char(text[j]):
                j += 1
            name = text[i:j]
            advance(j - i)
            emit(VAR, name, at)
            continue

        if c == "_" and i + 1 < n and text[i + 1] == ":":
            advance(2)
            j = i
            while j < n and _is_local_char(text[j]):
                j += 1
            if j == i:
                raise ParseError("blank node label expected after '_:'", line, col)
            label = text[i:j]
            advance(j - i)
            emit(BLANK, label, at)
            continue

        if c == '"':
            advance()
            buf: list[str] = []
            while i < n and text[i] != '"':
                ch = text[i]
                if ch == "\n":
                    raise ParseError("unterminated string literal", at[0], at[1])
                if ch == "\\":
                    advance()
                    if i >= n or text[i] not in _ESCAPES:
                        raise ParseError("bad string escape", line, col)
                    buf.append(_ESCAPES[text[i]])
                    advance()
                    continue
                buf.append(ch)
                advance()
            if i >= n:
                raise ParseError("unterminated string literal", at[0], at[1])
            advance()
            emit(STRING, "".join(buf), at)
            continue

        if c.isdigit() or (c == "-" and i + 1 < n and text[i + 1].isdigit()):
            j = i + 1
            while j < n and text[j].isdigit():
                j += 1
            value = text[i:j]
            advance(j - i)
            emit(INTEGER, value, at)
            continue

        if c == ":" or _is_name_start(c):
            # Bare word, or `prefix:local` when a colon follows the word.
            j = i
            while j < n and _is_name_char(text[j]):
                j += 1
            if j < n and text[j] == ":":
                prefix = text[i:j]
                j += 1
                k = j
                while k < n and _is_local_char(text[k]):
                    k += 1
                local = text[j:k]
                advance(k - i)
                emit(PNAME, f"{prefix}:{local}", at)
                continue
            if j == i:
                raise ParseError(f"unexpected character {c!r}", line, col)
            word = text[i:j]
            advance(j - i)
            emit(WORD, word, at)
            continue

        raise ParseError(f"unexpected character {c!r}", line, col)

    tokens.append(Token(EOF, "", line, col))
    return tokens


def split_pname(value: str) -> tuple[str, str]:
    """Split a PNAME token value into (prefix, local)."""
    prefix, _, local = value.partition(":")
    return prefix, local
