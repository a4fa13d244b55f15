from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from exists_lab import Dataset, SubSelect, dataset, fixture, parse_query


@pytest.fixture(scope="session")
def fig1() -> Dataset:
    return dataset("fig1")


@pytest.fixture(scope="session")
def fig2() -> Dataset:
    return dataset("fig2")


@pytest.fixture(scope="session")
def queries() -> dict[int, SubSelect]:
    return {n: parse_query(fixture(n).query) for n in range(1, 11)}
