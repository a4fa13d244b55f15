"""Recursive-descent parser for the SELECT query fragment.

The accepted grammar (see docs/grammar.md):

    query   := SELECT (var+ | *) WHERE group
    group   := { SELECT ... }                      (sub-select)
             | { member* }
    member  := triples | group (UNION group)* | OPTIONAL group
             | MINUS group | GRAPH (var|iri) group | SERVICE iri group
             | FILTER constraint | BIND (expr AS var) | VALUES ...

Adjacent members join left-associatively; filters inside a group attach
to the join of all other group members regardless of where they appear.
"""

from __future__ import annotations

from . import lexer
from .errors import ParseError
from .scope import in_domain
from .syntax import (
    BGP,
    Add,
    And,
    BindNode,
    Bound,
    Compare,
    Const,
    Exists,
    Expression,
    FilterNode,
    GraphNode,
    GraphPattern,
    Join,
    Minus,
    Not,
    Optional,
    Or,
    ServiceNode,
    SubSelect,
    TriplePattern,
    Union,
    ValuesNode,
    Var,
    Variable,
)
from .terms import Term, blank, boolean, integer, iri, string, typed_literal
from .turtle import DEFAULT_NAMESPACE

_KEYWORDS = {
    "SELECT",
    "WHERE",
    "FILTER",
    "BIND",
    "AS",
    "OPTIONAL",
    "UNION",
    "MINUS",
    "GRAPH",
    "SERVICE",
    "VALUES",
    "UNDEF",
    "EXISTS",
    "NOT",
}

_TERM_STARTS = {
    lexer.VAR,
    lexer.IRIREF,
    lexer.PNAME,
    lexer.INTEGER,
    lexer.STRING,
    lexer.BLANK,
}


class _QueryParser:
    def __init__(self, text: str) -> None:
        self.tokens = lexer.tokenize(text)
        self.pos = 0

    def peek(self, offset: int = 0) -> lexer.Token:
        return self.tokens[min(self.pos + offset, len(self.tokens) - 1)]

    def next(self) -> lexer.Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def error(self, message: str, tok: lexer.Token | None = None) -> ParseError:
        tok = tok or self.peek()
        return ParseError(message, tok.line, tok.col)

    def expect(self, kind: str, what: str) -> lexer.Token:
        tok = self.next()
        if tok.kind != kind:
            raise ParseError(f"expected {what}, got {tok.value!r}", tok.line, tok.col)
        return tok

    def at_keyword(self, word: str) -> bool:
        tok = self.peek()
        return tok.kind == lexer.WORD and tok.value.upper() == word

    def expect_keyword(self, word: str) -> lexer.Token:
        tok = self.next()
        if tok.kind != lexer.WORD or tok.value.upper() != word:
            raise ParseError(f"expected {word}, got {tok.value!r}", tok.line, tok.col)
        return tok

    def expect_eof(self) -> None:
        tok = self.peek()
        if tok.kind != lexer.EOF:
            raise self.error(f"unexpected trailing input {tok.value!r}")

    # -- queries -------------------------------------------------------

    def parse_query(self) -> SubSelect:
        node = self.sub_select()
        self.expect_eof()
        return node

    def parse_pattern(self) -> GraphPattern:
        if self.at_keyword("SELECT"):
            node: GraphPattern = self.sub_select()
        elif self.peek().kind == lexer.LBRACE:
            node = self.group()
        else:
            raise self.error("query must start with SELECT or '{'")
        self.expect_eof()
        return node

    def sub_select(self) -> SubSelect:
        self.expect_keyword("SELECT")
        projection: tuple[Variable, ...] | None
        if self.peek().kind == lexer.STAR:
            self.next()
            projection = None
        else:
            names: list[Variable] = []
            while True:
                tok = self.peek()
                if tok.kind == lexer.VAR:
                    self.next()
                    v = Variable(tok.value)
                    if v in names:
                        raise self.error(f"duplicate variable ?{v.name} in projection", tok)
                    names.append(v)
                    continue
                if tok.kind == lexer.LPAREN:
                    raise self.error("unsupported projection expression", tok)
                break
            if not names:
                raise self.error("projection requires at least one variable or '*'")
            projection = tuple(names)
        self.expect_keyword("WHERE")
        return SubSelect(projection, self.group())

    # -- groups --------------------------------------------------------

    def group(self) -> GraphPattern:
        self.expect(lexer.LBRACE, "'{'")
        if self.at_keyword("SELECT"):
            node = self.sub_select()
            self.expect(lexer.RBRACE, "'}'")
            return node

        acc: GraphPattern | None = None
        filters: list[Expression] = []

        def accd() -> GraphPattern:
            return acc if acc is not None else BGP()

        def add(member: GraphPattern) -> None:
            nonlocal acc
            acc = member if acc is None else Join(acc, member)

        while True:
            tok = self.peek()
            if tok.kind == lexer.RBRACE:
                self.next()
                break
            if tok.kind == lexer.EOF:
                raise self.error("unterminated group, expected '}'")
            if tok.kind == lexer.DOT:
                self.next()
                continue
            if tok.kind == lexer.LBRACE:
                sub = self.group()
                while self.at_keyword("UNION"):
                    self.next()
                    sub = Union(sub, self.group())
                add(sub)
                continue
            if tok.kind == lexer.WORD:
                word = tok.value.upper()
                if word == "OPTIONAL":
                    self.next()
                    acc = Optional(accd(), self.group())
                    continue
                if word == "MINUS":
                    self.next()
                    acc = Minus(accd(), self.group())
                    continue
                if word == "GRAPH":
                    self.next()
                    name = self.graph_name()
                    add(GraphNode(name, self.group()))
                    continue
                if word == "SERVICE":
                    self.next()
                    target = self.term()
                    if not (isinstance(target, Term) and target.is_iri):
                        raise self.error("SERVICE target must be an IRI", tok)
                    add(ServiceNode(target, self.group()))
                    continue
                if word == "FILTER":
                    self.next()
                    filters.append(self.constraint())
                    continue
                if word == "BIND":
                    self.next()
                    self.expect(lexer.LPAREN, "'('")
                    expr = self.expression()
                    self.expect_keyword("AS")
                    var_tok = self.expect(lexer.VAR, "variable")
                    self.expect(lexer.RPAREN, "')'")
                    target_var = Variable(var_tok.value)
                    if target_var in in_domain(accd()):
                        raise ParseError(
                            f"BIND target ?{target_var.name} is already in scope",
                            var_tok.line,
                            var_tok.col,
                        )
                    acc = BindNode(accd(), expr, target_var)
                    continue
                if word == "VALUES":
                    self.next()
                    add(self.values(tok))
                    continue
                raise self.error(f"unexpected keyword {tok.value!r}", tok)
            if tok.kind in _TERM_STARTS:
                add(self.triples_block())
                continue
            raise self.error(f"unexpected token {tok.value!r}", tok)

        base = accd()
        for condition in filters:
            base = FilterNode(base, condition)
        return base

    def graph_name(self) -> Term | Variable:
        tok = self.peek()
        if tok.kind == lexer.VAR:
            self.next()
            return Variable(tok.value)
        name = self.term()
        if not (isinstance(name, Term) and name.is_iri):
            raise self.error("GRAPH name must be a variable or IRI", tok)
        return name

    def triples_block(self) -> BGP:
        triples: list[TriplePattern] = []
        while True:
            s_tok = self.peek()
            s = self.term()
            if isinstance(s, Term) and s.is_literal:
                raise self.error("triple subject cannot be a literal", s_tok)
            p_tok = self.peek()
            p = self.term()
            if isinstance(p, Term) and not p.is_iri:
                raise self.error("triple predicate must be a variable or IRI", p_tok)
            o = self.term()
            triples.append(TriplePattern(s, p, o))
            if self.peek().kind == lexer.DOT:
                self.next()
                if self.peek().kind in _TERM_STARTS:
                    continue
            break
        return BGP(tuple(triples))

    def values(self, at: lexer.Token) -> ValuesNode:
        self.expect(lexer.LPAREN, "'('")
        header: list[Variable] = []
        while self.peek().kind == lexer.VAR:
            header.append(Variable(self.next().value))
        self.expect(lexer.RPAREN, "')'")
        self.expect(lexer.LBRACE, "'{'")
        rows: list[tuple[Term | None, ...]] = []
        while self.peek().kind == lexer.LPAREN:
            self.next()
            cells: list[Term | None] = []
            while self.peek().kind != lexer.RPAREN:
                if self.at_keyword("UNDEF"):
                    self.next()
                    cells.append(None)
                    continue
                cell = self.term()
                if isinstance(cell, Variable):
                    raise self.error("VALUES cells must be terms or UNDEF")
                cells.append(cell)
            self.next()
            if len(cells) != len(header):
                raise ParseError(
                    "VALUES row width does not match its variable list", at.line, at.col
                )
            rows.append(tuple(cells))
        self.expect(lexer.RBRACE, "'}'")
        return ValuesNode(tuple(header), tuple(rows))

    # -- expressions ---------------------------------------------------

    def constraint(self) -> Expression:
        tok = self.peek()
        if tok.kind == lexer.LPAREN:
            self.next()
            expr = self.expression()
            self.expect(lexer.RPAREN, "')'")
            return expr
        if tok.kind == lexer.WORD and tok.value.upper() in ("EXISTS", "NOT") or (
            tok.kind == lexer.WORD and tok.value.lower() == "bound"
        ):
            return self.primary()
        raise self.error("FILTER expects a parenthesized expression or call", tok)

    def expression(self) -> Expression:
        return self.or_expr()

    def or_expr(self) -> Expression:
        node = self.and_expr()
        while self.peek().kind == lexer.OROR:
            self.next()
            node = Or(node, self.and_expr())
        return node

    def and_expr(self) -> Expression:
        node = self.cmp_expr()
        while self.peek().kind == lexer.ANDAND:
            self.next()
            node = And(node, self.cmp_expr())
        return node

    _CMP = {
        lexer.EQ: "=",
        lexer.NEQ: "!=",
        lexer.LT: "<",
        lexer.LE: "<=",
        lexer.GT: ">",
        lexer.GE: ">=",
    }

    def cmp_expr(self) -> Expression:
        node = self.add_expr()
        kind = self.peek().kind
        if kind in self._CMP:
            self.next()
            node = Compare(self._CMP[kind], node, self.add_expr())
        return node

    def add_expr(self) -> Expression:
        node = self.unary()
        while self.peek().kind == lexer.PLUS:
            self.next()
            node = Add(node, self.unary())
        return node

    def unary(self) -> Expression:
        if self.peek().kind == lexer.BANG:
            self.next()
            return Not(self.unary())
        return self.primary()

    def primary(self) -> Expression:
        tok = self.peek()
        if tok.kind == lexer.LPAREN:
            self.next()
            expr = self.expression()
            self.expect(lexer.RPAREN, "')'")
            return expr
        if tok.kind == lexer.VAR:
            self.next()
            return Var(Variable(tok.value))
        if tok.kind == lexer.WORD:
            word = tok.value.upper()
            if word == "EXISTS":
                self.next()
                return Exists(self.group())
            if word == "NOT":
                self.next()
                self.expect_keyword("EXISTS")
                # NOT EXISTS reduces to negated EXISTS.
                return Not(Exists(self.group()))
            if tok.value.lower() == "bound":
                self.next()
                self.expect(lexer.LPAREN, "'('")
                var_tok = self.expect(lexer.VAR, "variable")
                self.expect(lexer.RPAREN, "')'")
                return Bound(Variable(var_tok.value))
            if tok.value in ("true", "false"):
                self.next()
                return Const(boolean(tok.value == "true"))
            raise self.error(f"unexpected word {tok.value!r} in expression", tok)
        if tok.kind in _TERM_STARTS:
            term = self.term()
            if isinstance(term, Variable):
                return Var(term)
            return Const(term)
        raise self.error(f"expression expected, got {tok.value!r}", tok)

    # -- terms ---------------------------------------------------------

    def term(self) -> Term | Variable:
        tok = self.next()
        if tok.kind == lexer.VAR:
            return Variable(tok.value)
        if tok.kind == lexer.IRIREF:
            return iri(tok.value)
        if tok.kind == lexer.PNAME:
            prefix, local = lexer.split_pname(tok.value)
            if prefix:
                raise ParseError(
                    "only the default ':' prefix is supported in queries",
                    tok.line,
                    tok.col,
                )
            return iri(DEFAULT_NAMESPACE + local)
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
                    if prefix:
                        raise ParseError(
                            "only the default ':' prefix is supported in queries",
                            dt.line,
                            dt.col,
                        )
                    return typed_literal(tok.value, DEFAULT_NAMESPACE + local)
                raise ParseError("datatype IRI expected after '^^'", dt.line, dt.col)
            return string(tok.value)
        if tok.kind == lexer.BLANK:
            return blank(tok.value)
        if tok.kind == lexer.WORD and tok.value in ("true", "false"):
            return boolean(tok.value == "true")
        raise ParseError(f"term expected, got {tok.value!r}", tok.line, tok.col)


def parse_query(text: str) -> SubSelect:
    """Parse one SELECT query; the outermost AST node is a SubSelect."""
    return _QueryParser(text).parse_query()


def parse_pattern(text: str) -> GraphPattern:
    """Parse either a SELECT query or a braced group graph pattern."""
    return _QueryParser(text).parse_pattern()


def parse_term(text: str) -> Term:
    """Parse a single ground term (used by the CLI for mapping values)."""
    p = _QueryParser(text)
    term = p.term()
    p.expect_eof()
    if isinstance(term, Variable):
        raise ParseError("expected a term, got a variable", 1, 1)
    return term
