"""Concrete-syntax printer for patterns and expressions.

The printer is an exact inverse of the parser's group folding: a
serialized pattern re-parses to a structurally identical AST. Compound
members are braced; the left spine of joins, optionals, minuses, and
binds is flattened into a member sequence, and outer filter chains are
emitted as trailing FILTER members.
"""

from __future__ import annotations

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
    NotExists,
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
from .terms import Term
from .turtle import term_text


def serialize(node: GraphPattern | Expression) -> str:
    if isinstance(node, SubSelect):
        return _select_text(node)
    if isinstance(node, GraphPattern):
        return _braced(node)
    if isinstance(node, Expression):
        return _expr(node)
    raise TypeError(f"cannot serialize {node!r}")


def _select_text(node: SubSelect) -> str:
    if node.is_star:
        head = "SELECT *"
    else:
        head = "SELECT " + " ".join(f"?{v.name}" for v in node.projection)
    return f"{head} WHERE {_braced(node.pattern)}"


def _braced(p: GraphPattern) -> str:
    if isinstance(p, SubSelect):
        return "{ " + _select_text(p) + " }"
    body = " ".join(_members(p))
    return "{ " + body + " }" if body else "{ }"


def _members(p: GraphPattern) -> list[str]:
    # Outermost filters float to the end of the member list, mirroring
    # how the parser attaches them.
    filters: list[str] = []
    while isinstance(p, FilterNode):
        filters.insert(0, "FILTER " + _constraint(p.condition))
        p = p.pattern
    return _sequence(p) + filters


def _sequence(p: GraphPattern) -> list[str]:
    match p:
        case Join():
            return _sequence(p.left) + [_memberize(p.right)]
        case Optional():
            return _sequence(p.left) + ["OPTIONAL " + _braced(p.right)]
        case Minus():
            return _sequence(p.left) + ["MINUS " + _braced(p.right)]
        case BindNode():
            return _sequence(p.pattern) + [
                f"BIND ({_expr(p.expression)} AS ?{p.var.name})"
            ]
        case BGP() if p.triples:
            return [_triples_text(p)]
        case BGP():
            return ["{ }"]
        case _:
            return [_memberize(p)]


def _memberize(p: GraphPattern) -> str:
    match p:
        case BGP() if p.triples:
            return "{ " + _triples_text(p) + " }"
        case BGP():
            return "{ }"
        case Union():
            return _union_text(p)
        case GraphNode():
            return f"GRAPH {_pos_text(p.name)} {_braced(p.pattern)}"
        case ServiceNode():
            return f"SERVICE {term_text(p.iri)} {_braced(p.pattern)}"
        case ValuesNode():
            return _values_text(p)
        case SubSelect():
            return "{ " + _select_text(p) + " }"
        case _:
            return _braced(p)


def _union_text(p: Union) -> str:
    left = _union_text(p.left) if isinstance(p.left, Union) else _braced(p.left)
    return f"{left} UNION {_braced(p.right)}"


def _triples_text(p: BGP) -> str:
    return " ".join(_triple_text(tp) for tp in p.triples)


def _triple_text(tp: TriplePattern) -> str:
    return f"{_pos_text(tp.s)} {_pos_text(tp.p)} {_pos_text(tp.o)} ."


def _pos_text(x: Term | Variable) -> str:
    if isinstance(x, Variable):
        return f"?{x.name}"
    return term_text(x)


def _values_text(p: ValuesNode) -> str:
    header = " ".join(f"?{v.name}" for v in p.variables)
    rows = []
    for row in p.rows:
        cells = " ".join("UNDEF" if cell is None else term_text(cell) for cell in row)
        rows.append(f"({cells})")
    body = " ".join(rows)
    return f"VALUES ({header}) {{ {body} }}" if body else f"VALUES ({header}) {{ }}"


def _constraint(e: Expression) -> str:
    # FILTER requires a parenthesized expression or a call form.
    if isinstance(e, (Bound, Exists, NotExists)):
        return _expr(e)
    text = _expr(e)
    if text.startswith("("):
        return text
    return f"({text})"


def _expr(e: Expression) -> str:
    match e:
        case Const():
            return term_text(e.term)
        case Var():
            return f"?{e.var.name}"
        case Compare():
            return f"({_expr(e.left)} {e.op} {_expr(e.right)})"
        case And():
            return f"({_expr(e.left)} && {_expr(e.right)})"
        case Or():
            return f"({_expr(e.left)} || {_expr(e.right)})"
        case Add():
            return f"({_expr(e.left)} + {_expr(e.right)})"
        case Not():
            return f"(! {_expr(e.inner)})"
        case Bound():
            return f"bound(?{e.var.name})"
        case Exists():
            return f"EXISTS {_braced(e.pattern)}"
        case NotExists():
            # No concrete syntax maps back to this node: NOT EXISTS
            # deliberately re-parses as a negated EXISTS.
            return f"NOT EXISTS {_braced(e.pattern)}"
        case _:
            raise TypeError(f"cannot serialize expression {e!r}")
