"""Cell graph structure: validation, the glued lattice, paths, minimality."""

from __future__ import annotations

import json
import math

import networkx as nx
import pytest

from motorld import (
    FundamentalGraph,
    GraphSpecError,
    LatticeVertex,
    NotMinimal,
    enumerate_gate_paths,
    gate_exit_rate,
    gc_delta,
    graph_from_dict,
    graph_to_dict,
    is_minimal,
    lattice_out_edges,
    load_graph,
    minimality_report,
    validate,
    vertex_exit_rate,
)

from conftest import GRAPH_NAMES, load_example_graph


class TestValidate:
    def test_examples_all_valid(self):
        for name in GRAPH_NAMES:
            graph, rates = load_example_graph(name)
            report = validate(graph, rates)
            assert report.valid, (name, report.failures)
            assert report.strongly_connected
            assert report.rates_positive
            assert report.failures == []

    def test_support_symmetry_reported_not_required(self):
        graph, rates = load_example_graph("mixed5")
        report = validate(graph, rates)
        assert report.valid
        assert not report.support_symmetric

    def test_symmetric_examples_flagged_symmetric(self):
        for name in ("two_vertex", "chain3", "tooth", "diamond"):
            graph, rates = load_example_graph(name)
            assert validate(graph, rates).support_symmetric, name

    def test_nonpositive_rate_fails(self):
        graph, rates = load_example_graph("two_vertex")
        bad = dict(rates)
        bad[("b", "a")] = 0.0
        report = validate(graph, bad)
        assert not report.valid
        assert not report.rates_positive
        assert any("positive" in msg for msg in report.failures)

    def test_missing_rate_fails(self):
        graph, rates = load_example_graph("two_vertex")
        bad = dict(rates)
        del bad[("b", "a")]
        report = validate(graph, bad)
        assert not report.valid
        assert any("missing rate" in msg for msg in report.failures)

    def test_rate_for_unknown_edge_fails(self):
        graph, rates = load_example_graph("two_vertex")
        bad = dict(rates)
        bad[("b", "b2")] = 1.0
        assert not validate(graph, bad).valid

    def test_not_strongly_connected(self):
        graph = FundamentalGraph(
            vertices=("a", "b"), edges=(("a", "b"),), source="a", sink="b"
        )
        report = validate(graph, {("a", "b"): 1.0})
        assert not report.valid
        assert not report.strongly_connected
        assert any("strongly connected" in msg for msg in report.failures)

    def test_source_equal_sink_fails(self):
        graph = FundamentalGraph(
            vertices=("a", "b"),
            edges=(("a", "b"), ("b", "a")),
            source="a",
            sink="a",
        )
        report = validate(graph, {("a", "b"): 1.0, ("b", "a"): 1.0})
        assert not report.valid
        assert any("must differ" in msg for msg in report.failures)

    def test_self_loop_fails(self):
        graph = FundamentalGraph(
            vertices=("a", "b"),
            edges=(("a", "b"), ("b", "a"), ("a", "a")),
            source="a",
            sink="b",
        )
        rates = {("a", "b"): 1.0, ("b", "a"): 1.0, ("a", "a"): 1.0}
        report = validate(graph, rates)
        assert not report.valid
        assert any("self-loop" in msg for msg in report.failures)


class TestExitRates:
    def test_vertex_exit_rate(self, chain3):
        """Source and sink names both give the combined gate rate, because the
        gate inherits the outgoing edges of both glued endpoints."""
        graph, rates = chain3
        assert vertex_exit_rate(graph, rates, "u") == pytest.approx(3.0)
        assert vertex_exit_rate(graph, rates, "m") == pytest.approx(4.0)
        assert vertex_exit_rate(graph, rates, "w") == pytest.approx(3.0)

    def test_gate_exit_rate_adds_source_and_sink(self, chain3):
        graph, rates = chain3
        assert gate_exit_rate(graph, rates) == pytest.approx(3.0)

    def test_gate_exit_rate_two_vertex(self, two_vertex):
        graph, rates = two_vertex
        assert gate_exit_rate(graph, rates) == pytest.approx(5.0)


class TestLattice:
    """The gluing rules: sinks fold into the next gate, gates also carry the
    sink's outgoing edges into the previous cell."""

    def test_gate_edges_two_vertex(self, two_vertex):
        graph, rates = two_vertex
        out = lattice_out_edges(graph, rates, LatticeVertex(0, "a"))
        assert sorted(out) == [
            (LatticeVertex(-1, "a"), 1.0),
            (LatticeVertex(1, "a"), 4.0),
        ]

    def test_gate_edges_chain3(self, chain3):
        graph, rates = chain3
        out = lattice_out_edges(graph, rates, LatticeVertex(2, "u"))
        assert sorted(out) == [
            (LatticeVertex(1, "m"), 1.0),
            (LatticeVertex(2, "m"), 2.0),
        ]

    def test_interior_edges_chain3(self, chain3):
        graph, rates = chain3
        out = lattice_out_edges(graph, rates, LatticeVertex(0, "m"))
        assert sorted(out) == [
            (LatticeVertex(0, "u"), 1.0),
            (LatticeVertex(1, "u"), 3.0),
        ]

    def test_cell_index_shifts_with_vertex(self, chain3):
        graph, rates = chain3
        out = lattice_out_edges(graph, rates, LatticeVertex(-3, "m"))
        assert sorted(out) == [
            (LatticeVertex(-3, "u"), 1.0),
            (LatticeVertex(-2, "u"), 3.0),
        ]

    def test_sink_name_rejected(self, chain3):
        graph, rates = chain3
        with pytest.raises(GraphSpecError):
            lattice_out_edges(graph, rates, LatticeVertex(0, "w"))

    def test_unknown_vertex_rejected(self, chain3):
        graph, rates = chain3
        with pytest.raises(GraphSpecError):
            lattice_out_edges(graph, rates, LatticeVertex(0, "zz"))

    def test_total_rate_is_conserved(self):
        """Lattice out-rates match the cell graph: a gate carries the source
        plus sink exits, and interiors carry their own."""
        for name in GRAPH_NAMES:
            graph, rates = load_example_graph(name)
            gate = lattice_out_edges(graph, rates, LatticeVertex(0, graph.source))
            assert sum(r for _, r in gate) == pytest.approx(
                gate_exit_rate(graph, rates)
            )
            for v in graph.interior_names():
                out = lattice_out_edges(graph, rates, LatticeVertex(0, v))
                assert sum(r for _, r in out) == pytest.approx(
                    vertex_exit_rate(graph, rates, v)
                )


class TestGatePaths:
    def test_against_networkx(self):
        """enumerate_gate_paths must agree with an independent simple-path
        enumeration of the cell digraph."""
        for name in GRAPH_NAMES:
            graph, _ = load_example_graph(name)
            dg = nx.DiGraph()
            dg.add_nodes_from(graph.vertices)
            dg.add_edges_from(graph.edges)
            expected = {
                tuple(p) for p in nx.all_simple_paths(dg, graph.source, graph.sink)
            }
            assert set(enumerate_gate_paths(graph)) == expected, name

    def test_counts(self):
        counts = {}
        for name in GRAPH_NAMES:
            graph, _ = load_example_graph(name)
            counts[name] = len(enumerate_gate_paths(graph))
        assert counts == {
            "two_vertex": 1,
            "chain3": 1,
            "tooth": 1,
            "diamond": 2,
            "mixed5": 2,
        }


class TestMinimality:
    def test_minimal_graphs(self):
        for name in ("two_vertex", "chain3", "tooth"):
            graph, _ = load_example_graph(name)
            report = minimality_report(graph)
            assert report.minimal, name
            assert report.path_count == 1
            assert report.support_symmetric
            assert report.reason is None
            assert is_minimal(graph)

    def test_diamond_has_two_paths(self, diamond):
        graph, _ = diamond
        report = minimality_report(graph)
        assert not report.minimal
        assert report.path_count == 2
        assert report.support_symmetric
        assert report.reason == "gate_path_count_not_one"
        assert not is_minimal(graph)

    def test_mixed5_support_asymmetric(self, mixed5):
        graph, _ = mixed5
        report = minimality_report(graph)
        assert not report.minimal
        assert not report.support_symmetric
        assert "asymmetric_support" in report.reason.split(";")


class TestGcDelta:
    def test_two_vertex(self, two_vertex):
        graph, rates = two_vertex
        assert gc_delta(graph, rates) == pytest.approx(math.log(4.0), rel=1e-12)

    def test_chain3_is_log6(self, chain3):
        graph, rates = chain3
        assert gc_delta(graph, rates) == pytest.approx(math.log(6.0), rel=1e-12)

    def test_tooth_ignores_the_tooth(self, tooth):
        # The dead-end branch is off the gate path, so it cannot contribute.
        graph, rates = tooth
        assert gc_delta(graph, rates) == pytest.approx(math.log(6.0), rel=1e-12)

    def test_non_minimal_raises(self, diamond, mixed5):
        for graph, rates in (diamond, mixed5):
            with pytest.raises(NotMinimal):
                gc_delta(graph, rates)


class TestSerialization:
    def test_round_trip(self):
        for name in GRAPH_NAMES:
            graph, rates = load_example_graph(name)
            spec = graph_to_dict(graph, rates)
            graph2, rates2 = graph_from_dict(spec)
            assert graph2 == graph
            assert rates2 == rates

    def test_duplicate_edge_rejected(self):
        spec = {
            "vertices": ["a", "b"],
            "source": "a",
            "sink": "b",
            "edges": [
                {"from": "a", "to": "b", "rate": 4.0},
                {"from": "a", "to": "b", "rate": 2.0},
                {"from": "b", "to": "a", "rate": 1.0},
            ],
        }
        with pytest.raises(GraphSpecError):
            graph_from_dict(spec)

    def test_missing_file(self, tmp_path):
        with pytest.raises(GraphSpecError):
            load_graph(tmp_path / "nope.json")

    def test_malformed_json(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{not json", encoding="utf-8")
        with pytest.raises(GraphSpecError):
            load_graph(path)

    def test_non_object_json(self, tmp_path):
        path = tmp_path / "list.json"
        path.write_text(json.dumps([1, 2, 3]), encoding="utf-8")
        with pytest.raises(GraphSpecError):
            load_graph(path)

    def test_edge_order_preserved(self, tooth):
        graph, rates = tooth
        spec = graph_to_dict(graph, rates)
        graph2, _ = graph_from_dict(spec)
        assert graph2.edges == graph.edges
