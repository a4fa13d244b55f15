"""In-domain (in-scope) variables, computed purely from syntax.

A variable is in-domain for a pattern when it can appear in the
pattern's output solutions. This is the computable characterization;
soundness against actual evaluation is covered by a property test.
"""

from __future__ import annotations

from .syntax import (
    BGP,
    BindNode,
    Bound,
    Compare,
    Add,
    And,
    Const,
    Exists,
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
    Union,
    ValuesNode,
    Var,
    Variable,
    vars_in,
)


def in_domain(p: GraphPattern) -> frozenset[Variable]:
    match p:
        case BGP():
            return vars_in(p)
        case Join() | Union() | Optional():
            return in_domain(p.left) | in_domain(p.right)
        case Minus():
            return in_domain(p.left)
        case GraphNode():
            inner = in_domain(p.pattern)
            if isinstance(p.name, Variable):
                return inner | {p.name}
            return inner
        case ServiceNode() | FilterNode():
            return in_domain(p.pattern)
        case ValuesNode():
            return frozenset(p.variables)
        case BindNode():
            return in_domain(p.pattern) | {p.var}
        case SubSelect():
            if p.projection is None:
                return in_domain(p.pattern)
            return frozenset(p.projection)
        case _:
            raise TypeError(f"not a graph pattern: {p!r}")


def expand_star(p: SubSelect) -> SubSelect:
    """Replace a `SELECT *` projection by the sorted in-domain variables."""
    if not p.is_star:
        raise ValueError("expand_star requires a star projection")
    projection = tuple(sorted(in_domain(p.pattern), key=lambda v: v.name))
    return SubSelect(projection, p.pattern)


def expand_all_stars(node):
    """Expand every star projection in a pattern or expression, bottom-up.

    Run once before normalization so all semantics see identical
    projections.
    """
    match node:
        case BGP() | ValuesNode() | Const() | Var() | Bound():
            return node
        case Join() | Union() | Optional() | Minus():
            return type(node)(expand_all_stars(node.left), expand_all_stars(node.right))
        case GraphNode():
            return GraphNode(node.name, expand_all_stars(node.pattern))
        case ServiceNode():
            return ServiceNode(node.iri, expand_all_stars(node.pattern))
        case FilterNode():
            return FilterNode(
                expand_all_stars(node.pattern), expand_all_stars(node.condition)
            )
        case BindNode():
            return BindNode(
                expand_all_stars(node.pattern),
                expand_all_stars(node.expression),
                node.var,
            )
        case SubSelect():
            inner = expand_all_stars(node.pattern)
            expanded = SubSelect(node.projection, inner)
            if expanded.is_star:
                expanded = expand_star(expanded)
            return expanded
        case Compare():
            return Compare(node.op, expand_all_stars(node.left), expand_all_stars(node.right))
        case And() | Or() | Add():
            return type(node)(expand_all_stars(node.left), expand_all_stars(node.right))
        case Not():
            return Not(expand_all_stars(node.inner))
        case Exists() | NotExists():
            return type(node)(expand_all_stars(node.pattern))
        case _:
            raise TypeError(f"not an AST node: {node!r}")
