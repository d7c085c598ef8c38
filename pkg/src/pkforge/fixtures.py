"""The two worked-example graphs shipped with the package."""

from __future__ import annotations

from importlib import resources

from .rdfio import parse_turtle
from .store import Graph


def fixture_text(name: str) -> str:
    return resources.files("pkforge.data").joinpath(name).read_text("utf-8")


def loto_graph() -> Graph:
    graph, _ = parse_turtle(fixture_text("loto.ttl"))
    return graph


def recipe_graph() -> Graph:
    graph, _ = parse_turtle(fixture_text("recipe.ttl"))
    return graph


def combined_graph() -> Graph:
    graph = loto_graph()
    graph.update(recipe_graph())
    return graph
