"""Embedded comparison fixtures: two graphs, ten queries, and the
expected solution sets under each semantics."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cache

from .algebra import SolutionMapping
from .normalize import Semantics
from .parser import parse_term
from .syntax import Variable
from .terms import Dataset
from .turtle import parse_data

FIG1 = """\
@prefix : <urn:ex:> .
:a :parent :b .
:b :parent :c .
:c :parent :d .
:a :country :j .
:b :country :j .
:c :country :k .
"""

FIG2 = """\
@prefix : <urn:ex:> .
:a :p :b .
:b :q :c .
:c :r :d .
:e :p :f .
:f :q :g .
:h :p :i .
"""

DATASETS = {"fig1": FIG1, "fig2": FIG2}


@cache
def dataset(dataset_id: str) -> Dataset:
    return parse_data(DATASETS[dataset_id])


def sol(**bindings: str) -> SolutionMapping:
    """Build a solution from variable-name to compact-term-text pairs."""
    return SolutionMapping.of(
        {Variable(name): parse_term(text) for name, text in bindings.items()}
    )


@dataclass(frozen=True)
class Fixture:
    number: int
    dataset_id: str
    query: str
    expected: dict  # Semantics -> frozenset[SolutionMapping]


_MU_A = sol(parent=":a")
_MU_B = sol(parent=":b")
_AB = frozenset({_MU_A, _MU_B})
_B = frozenset({_MU_B})
_NONE = frozenset()
_MU_ABC = sol(x=":a", y=":b", z=":c")
_MU_HI = sol(x=":h", y=":i")
_ABC_HI = frozenset({_MU_ABC, _MU_HI})


def _expected(s1, s2, s3) -> dict:
    return {Semantics.S1: s1, Semantics.S2: s2, Semantics.S3: s3}


FIXTURES: tuple[Fixture, ...] = (
    Fixture(
        1,
        "fig1",
        """\
SELECT ?parent
WHERE { ?parent :country :j
        FILTER ( EXISTS { ?child :parent ?parent })}
""",
        _expected(_B, _B, _B),
    ),
    Fixture(
        2,
        "fig1",
        """\
SELECT ?parent
WHERE { ?parent :country :j
        FILTER ( EXISTS { SELECT ?child
                          WHERE { ?child :parent ?parent }})}
""",
        _expected(_AB, _AB, _B),
    ),
    Fixture(
        3,
        "fig1",
        """\
SELECT ?parent
WHERE { ?parent :country :j
        FILTER ( EXISTS { SELECT ?child
                          WHERE { ?child :parent ?chparent
                                  FILTER (?chparent = ?parent) }})}
""",
        _expected(_NONE, _B, _B),
    ),
    Fixture(
        4,
        "fig1",
        """\
SELECT ?parent
WHERE { ?parent :country :j
        FILTER ( EXISTS { SELECT ?child
                          WHERE { ?child :parent ?chparent
                                  FILTER (bound(?parent)) }})}
""",
        _expected(_NONE, _AB, _AB),
    ),
    Fixture(
        5,
        "fig1",
        """\
SELECT ?parent
WHERE { ?parent :country :j
        FILTER ( EXISTS { SELECT ?child
                          WHERE { ?child :parent ?chparent
                                  FILTER (?chparent = ?parent &&
                                          bound(?parent)) }})}
""",
        _expected(_NONE, _B, _B),
    ),
    Fixture(
        6,
        "fig1",
        """\
SELECT ?parent
WHERE { ?parent :country :j
        FILTER ( EXISTS { SELECT ?child ?chparent
                          WHERE { ?child :parent ?chparent
                                  FILTER (?parent = 1 ||
                                          ?parent != 1 )}})}
""",
        _expected(_NONE, _AB, _AB),
    ),
    Fixture(
        7,
        "fig1",
        """\
SELECT ?parent
WHERE { ?parent :country :j
        FILTER ( EXISTS { SELECT *
                          WHERE { ?child :parent ?chparent
                                  FILTER (?parent = 1 ||
                                          ?parent != 1 )}})}
""",
        _expected(_NONE, _AB, _AB),
    ),
    Fixture(
        8,
        "fig1",
        """\
SELECT ?parent
WHERE { ?parent :country :j
        FILTER ( EXISTS { SELECT ?child
                          WHERE { ?child :parent ?parent
                                  FILTER (?parent = :c)}})}
""",
        _expected(_AB, _AB, _NONE),
    ),
    Fixture(
        9,
        "fig1",
        """\
SELECT ?parent
WHERE { ?parent :country :j
        FILTER ( EXISTS { SELECT ?child
                          WHERE { ?child :parent ?parent
                                  FILTER (EXISTS{?parent :parent :d})}})}
""",
        _expected(_AB, _AB, _NONE),
    ),
    Fixture(
        10,
        "fig2",
        """\
SELECT *
WHERE { { { ?x :p ?y } OPTIONAL { ?y :q ?z } }
        FILTER ( EXISTS { ?z :r ?v } ) }
""",
        _expected(_ABC_HI, _ABC_HI, _ABC_HI),
    ),
)


def fixture(number: int) -> Fixture:
    for f in FIXTURES:
        if f.number == number:
            return f
    raise KeyError(f"no fixture numbered {number}")
