from __future__ import annotations

import pytest

from pkforge.fixtures import combined_graph, loto_graph, recipe_graph
from pkforge.vocab import Iri

EX = "http://example.org/"

LOTO_PROCEDURE = Iri(EX + "LOTO-condenser-MSK")
LOTO_ABSTRACT = Iri(EX + "LOTO-condenser")
LOTO_V1 = Iri(EX + "LOTO-condenser-MSK-v1")
LOTO_EXECUTION = Iri(EX + "LOTO-condenser-MSK/execution/2024-10-11-jdoe")
RECIPE = Iri(EX + "boil-carrots")
JOHN_DOE = Iri(EX + "JohnDoe")


def loto_step(n: int) -> Iri:
    return Iri(f"{EX}LOTO-condenser-MSK/Step/{n}")


def recipe_part(n: int) -> Iri:
    return Iri(f"{EX}boil-carrots/Part/{n}")


def recipe_step(path: str) -> Iri:
    return Iri(f"{EX}boil-carrots/Step/{path}")


@pytest.fixture()
def loto():
    return loto_graph()


@pytest.fixture()
def recipe():
    return recipe_graph()


@pytest.fixture()
def combined():
    return combined_graph()
