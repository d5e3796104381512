"""Shared fixtures: the example graphs and the canonical cycle laws.

Graphs are loaded from examples_data/ so the JSON loaders are exercised on
every run; parametric laws are constructed inline.  Everything here is
immutable, so fixtures are session scoped.
"""

from __future__ import annotations

from pathlib import Path

import pytest

from motorld import (
    DiscreteLaw,
    ExponentialLaw,
    FundamentalGraph,
    GammaLaw,
    GraphLaw,
    load_graph,
)

DATA_DIR = Path(__file__).resolve().parents[1] / "examples_data"

GRAPH_NAMES = ("two_vertex", "chain3", "tooth", "diamond", "mixed5")


def load_example_graph(name: str) -> tuple[FundamentalGraph, dict]:
    return load_graph(DATA_DIR / f"{name}.json")


def make_graph_law(name: str) -> GraphLaw:
    graph, rates = load_example_graph(name)
    return GraphLaw.from_rates(graph, rates)


def make_discrete_law() -> DiscreteLaw:
    return DiscreteLaw(atoms=((1, 1.0, 0.75), (-1, 1.0, 0.25)))


def make_exp_asym() -> ExponentialLaw:
    return ExponentialLaw(p=0.5, beta_plus=1.0, beta_minus=2.0)


def make_exp_sym() -> ExponentialLaw:
    return ExponentialLaw(p=0.6, beta_plus=1.5, beta_minus=1.5)


def make_gamma_law() -> GammaLaw:
    return GammaLaw(p=0.6, k_plus=2.0, beta_plus=3.0, k_minus=1.5, beta_minus=2.0)


# (id, builder) pairs for the whole-family shape tests.
LAW_CASES = [
    ("two_vertex", lambda: make_graph_law("two_vertex")),
    ("chain3", lambda: make_graph_law("chain3")),
    ("tooth", lambda: make_graph_law("tooth")),
    ("diamond", lambda: make_graph_law("diamond")),
    ("mixed5", lambda: make_graph_law("mixed5")),
    ("discrete", make_discrete_law),
    ("exp_asym", make_exp_asym),
    ("exp_sym", make_exp_sym),
    ("gamma", make_gamma_law),
]


@pytest.fixture(scope="session")
def data_dir() -> Path:
    return DATA_DIR


@pytest.fixture(scope="session")
def two_vertex():
    return load_example_graph("two_vertex")


@pytest.fixture(scope="session")
def chain3():
    return load_example_graph("chain3")


@pytest.fixture(scope="session")
def tooth():
    return load_example_graph("tooth")


@pytest.fixture(scope="session")
def diamond():
    return load_example_graph("diamond")


@pytest.fixture(scope="session")
def mixed5():
    return load_example_graph("mixed5")


@pytest.fixture(scope="session")
def two_vertex_law():
    return make_graph_law("two_vertex")


@pytest.fixture(scope="session")
def chain3_law():
    return make_graph_law("chain3")


@pytest.fixture(scope="session")
def tooth_law():
    return make_graph_law("tooth")


@pytest.fixture(scope="session")
def diamond_law():
    return make_graph_law("diamond")


@pytest.fixture(scope="session")
def mixed5_law():
    return make_graph_law("mixed5")


@pytest.fixture(scope="session")
def discrete_law():
    return make_discrete_law()


@pytest.fixture(scope="session")
def exp_asym():
    return make_exp_asym()


@pytest.fixture(scope="session")
def exp_sym():
    return make_exp_sym()


@pytest.fixture(scope="session")
def gamma_law():
    return make_gamma_law()
