"""Shared fixtures."""

from __future__ import annotations

import pytest

from ode_linearizer.core import make_context, parse
from ode_linearizer.core.grammar import as_symbols
from tests.fixtures import CONSTANT, EX1, LAGUERRE_CUBIC, TRIVIAL


@pytest.fixture
def context():
    """Build a JetContext from source text."""

    def build(source: str, params: list[str] | None = None):
        symbols = as_symbols(params)
        return make_context(parse(source, symbols), symbols)

    return build


@pytest.fixture
def ex1(context):
    return context(EX1)


@pytest.fixture
def trivial(context):
    return context(TRIVIAL)


@pytest.fixture
def constant(context):
    return context(CONSTANT)


@pytest.fixture
def cubic(context):
    return context(LAGUERRE_CUBIC)
