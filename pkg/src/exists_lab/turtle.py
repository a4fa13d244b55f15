"""Turtle-lite loader and canonical serializer for fixture and user data.

Supported grammar: optional `@prefix name: <iri> .` lines, plain triples
`s p o .`, and `GRAPH <iri> { triples }` blocks for named-graph content.
Comments start with `#`. The default prefix `:` is predeclared as
`urn:ex:` so data files and queries resolve compact IRIs identically;
data files may redeclare it.
"""

from __future__ import annotations

import re

from . import lexer
from .errors import ParseError
from .terms import Dataset, Term, Triple, blank, boolean, integer, iri, string, typed_literal

DEFAULT_NAMESPACE = "urn:ex:"

_LOCAL_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_-]*\Z")


class _DataParser:
    def __init__(self, text: str) -> None:
        self.tokens = lexer.tokenize(text)
        self.pos = 0
        self.prefixes: dict[str, str] = {"": DEFAULT_NAMESPACE}

    def peek(self) -> lexer.Token:
        return self.tokens[self.pos]

    def next(self) -> lexer.Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind: str, what: str) -> lexer.Token:
        tok = self.next()
        if tok.kind != kind:
            raise ParseError(f"expected {what}, got {tok.value!r}", tok.line, tok.col)
        return tok

    def error(self, message: str, tok: lexer.Token) -> ParseError:
        return ParseError(message, tok.line, tok.col)

    def parse(self) -> Dataset:
        default: set[Triple] = set()
        named: dict[str, set[Triple]] = {}
        while True:
            tok = self.peek()
            if tok.kind == lexer.EOF:
                break
            if tok.kind == lexer.AT:
                self.next()
                self._prefix_decl()
                continue
            if tok.kind == lexer.WORD and tok.value.upper() == "GRAPH":
                self.next()
                name = self._term()
                if not name.is_iri:
                    raise self.error("graph name must be an IRI", tok)
                self.expect(lexer.LBRACE, "'{'")
                triples = named.setdefault(name.value, set())
                while self.peek().kind != lexer.RBRACE:
                    if self.peek().kind == lexer.EOF:
                        raise self.error("unterminated GRAPH block", self.peek())
                    triples.add(self._triple())
                self.next()
                continue
            default.add(self._triple())
        return Dataset.build(default, named)

    def _prefix_decl(self) -> None:
        word = self.expect(lexer.WORD, "'prefix'")
        if word.value.lower() != "prefix":
            raise self.error("expected 'prefix' after '@'", word)
        pname = self.expect(lexer.PNAME, "prefix name ending in ':'")
        prefix, local = lexer.split_pname(pname.value)
        if local:
            raise self.error("prefix declaration must end with ':'", pname)
        ref = self.expect(lexer.IRIREF, "IRI")
        self.expect(lexer.DOT, "'.'")
        self.prefixes[prefix] = ref.value

    def _triple(self) -> Triple:
        s_tok = self.peek()
        s = self._term()
        p_tok = self.peek()
        p = self._term()
        o = self._term()
        self.expect(lexer.DOT, "'.'")
        if not p.is_iri:
            raise self.error("non-IRI predicate", p_tok)
        if s.is_literal:
            raise self.error("triple subject cannot be a literal", s_tok)
        return Triple(s, p, o)

    def _term(self) -> Term:
        tok = self.next()
        if tok.kind == lexer.IRIREF:
            return iri(tok.value)
        if tok.kind == lexer.PNAME:
            prefix, local = lexer.split_pname(tok.value)
            if prefix not in self.prefixes:
                raise self.error(f"undeclared prefix {prefix!r}", tok)
            return iri(self.prefixes[prefix] + local)
        if tok.kind == lexer.INTEGER:
            return integer(int(tok.value))
        if tok.kind == lexer.STRING:
            if self.peek().kind == lexer.HATHAT:
                self.next()
                dt = self.next()
                if dt.kind == lexer.IRIREF:
                    return typed_literal(tok.value, dt.value)
                if dt.kind == lexer.PNAME:
                    prefix, local = lexer.split_pname(dt.value)
                    if prefix not in self.prefixes:
                        raise self.error(f"undeclared prefix {prefix!r}", dt)
                    return typed_literal(tok.value, self.prefixes[prefix] + local)
                raise self.error("datatype IRI expected after '^^'", dt)
            return string(tok.value)
        if tok.kind == lexer.BLANK:
            return blank(tok.value)
        if tok.kind == lexer.WORD and tok.value in ("true", "false"):
            return boolean(tok.value == "true")
        raise self.error(f"term expected, got {tok.value!r}", tok)


def parse_data(text: str) -> Dataset:
    """Parse Turtle-lite text into an immutable Dataset."""
    return _DataParser(text).parse()


def term_text(t: Term) -> str:
    """Concrete syntax for a term, compacting the default namespace."""
    if t.is_iri:
        if t.value.startswith(DEFAULT_NAMESPACE):
            local = t.value[len(DEFAULT_NAMESPACE):]
            if _LOCAL_RE.match(local):
                return f":{local}"
        return f"<{t.value}>"
    if t.is_blank:
        return f"_:{t.value}"
    if t.datatype is None:
        return _quote(t.value)
    from .terms import XSD_BOOLEAN, XSD_INTEGER

    if t.datatype == XSD_INTEGER:
        return str(int(t.value))
    if t.datatype == XSD_BOOLEAN:
        return t.value
    return f"{_quote(t.value)}^^<{t.datatype}>"


def _quote(value: str) -> str:
    escaped = (
        value.replace("\\", "\\\\")
        .replace('"', '\\"')
        .replace("\n", "\\n")
        .replace("\t", "\\t")
        .replace("\r", "\\r")
    )
    return f'"{escaped}"'


def _triple_lines(triples: frozenset[Triple], indent: str = "") -> list[str]:
    rows = sorted(
        triples, key=lambda t: (t.s.sort_key(), t.p.sort_key(), t.o.sort_key())
    )
    return [
        f"{indent}{term_text(t.s)} {term_text(t.p)} {term_text(t.o)} ." for t in rows
    ]


def serialize_dataset(ds: Dataset) -> str:
    """Canonical Turtle-lite text; parse_data round-trips it exactly."""
    lines = [f"@prefix : <{DEFAULT_NAMESPACE}> ."]
    lines.extend(_triple_lines(ds.default))
    for name in sorted(ds.named):
        lines.append(f"GRAPH <{name}> {{")
        lines.extend(_triple_lines(ds.named[name], "  "))
        lines.append("}")
    return "\n".join(lines) + "\n"
