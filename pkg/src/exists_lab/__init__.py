"""Reference interpreter for a SPARQL 1.1 fragment with three selectable
semantics (S1, S2, S3) for correlated EXISTS evaluation."""

from .algebra import (
    EMPTY_MAPPING,
    SolutionMapping,
    canonical_order,
    compatible,
    join,
    left_join,
    match_bgp,
    minus,
    union,
)
from .binding import bind, encode_values, mapping_substitute
from .errors import ParseError, UnsupportedFeatureError
from .evaluate import Evaluator, ExprValue, eval_expr, evaluate, results_document, results_tsv
from .fixtures import FIXTURES, Fixture, dataset, fixture, sol
from .normalize import (
    FreshVars,
    Normalization,
    Semantics,
    alpha_equivalent,
    cr,
    filter_link,
    norm_s1,
    norm_s2,
    norm_s3,
    normalization_violations,
    normalize,
    rename,
)
from .parser import parse_pattern, parse_query, parse_term
from .scope import expand_all_stars, expand_star, in_domain
from .serialize import serialize
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
    unit_values,
    vars_in,
)
from .terms import (
    Dataset,
    Term,
    Triple,
    blank,
    boolean,
    graph_terms,
    integer,
    iri,
    string,
    typed_literal,
)
from .turtle import parse_data, serialize_dataset, term_text

__all__ = [
    "BGP",
    "Add",
    "And",
    "BindNode",
    "Bound",
    "Compare",
    "Const",
    "Dataset",
    "EMPTY_MAPPING",
    "Evaluator",
    "Exists",
    "Expression",
    "ExprValue",
    "FIXTURES",
    "FilterNode",
    "Fixture",
    "FreshVars",
    "GraphNode",
    "GraphPattern",
    "Join",
    "Minus",
    "Normalization",
    "Not",
    "NotExists",
    "Optional",
    "Or",
    "ParseError",
    "Semantics",
    "ServiceNode",
    "SolutionMapping",
    "SubSelect",
    "Term",
    "Triple",
    "TriplePattern",
    "Union",
    "UnsupportedFeatureError",
    "ValuesNode",
    "Var",
    "Variable",
    "alpha_equivalent",
    "bind",
    "blank",
    "boolean",
    "canonical_order",
    "compatible",
    "cr",
    "dataset",
    "encode_values",
    "eval_expr",
    "evaluate",
    "expand_all_stars",
    "expand_star",
    "filter_link",
    "fixture",
    "graph_terms",
    "in_domain",
    "integer",
    "iri",
    "join",
    "left_join",
    "mapping_substitute",
    "match_bgp",
    "minus",
    "norm_s1",
    "norm_s2",
    "norm_s3",
    "normalization_violations",
    "normalize",
    "parse_data",
    "parse_pattern",
    "parse_query",
    "parse_term",
    "rename",
    "results_document",
    "results_tsv",
    "serialize",
    "serialize_dataset",
    "sol",
    "string",
    "term_text",
    "typed_literal",
    "union",
    "unit_values",
    "vars_in",
]
