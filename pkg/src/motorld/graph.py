"""Fundamental cell graphs and the quasi-1d lattice built from them.

A fundamental cell is an oriented, strongly connected graph with a marked
source and sink and no self-loops.  The lattice glues countably many copies
end to end, identifying the sink of copy ``n`` with the source of copy
``n+1``; the identified vertices are the *gates*.  Everything downstream
(sampling, moment generating functions, tilted matrices) works off the two
primitives defined here: per-vertex exit rates on the lattice and the list of
outgoing lattice edges of a vertex.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, NamedTuple

from .errors import GraphSpecError, NotMinimal

Edge = tuple[str, str]
RateMap = Mapping[Edge, float]

__all__ = [
    "Edge",
    "RateMap",
    "FundamentalGraph",
    "LatticeVertex",
    "ValidationReport",
    "MinimalityReport",
    "validate",
    "vertex_exit_rate",
    "gate_exit_rate",
    "lattice_out_edges",
    "enumerate_gate_paths",
    "minimality_report",
    "is_minimal",
    "gc_delta",
    "graph_from_dict",
    "graph_to_dict",
    "load_graph",
]


@dataclass(frozen=True)
class FundamentalGraph:
    """Oriented cell graph with marked source and sink.

    ``edges`` keeps document order from the input; all iteration in this
    package follows that order so results are reproducible.
    """

    vertices: tuple[str, ...]
    edges: tuple[Edge, ...]
    source: str
    sink: str

    def out_edges(self, v: str) -> tuple[Edge, ...]:
        return tuple(e for e in self.edges if e[0] == v)

    def in_edges(self, v: str) -> tuple[Edge, ...]:
        return tuple(e for e in self.edges if e[1] == v)

    def interior_names(self) -> tuple[str, ...]:
        """Vertices other than source and sink, in declaration order."""
        return tuple(v for v in self.vertices if v not in (self.source, self.sink))


class LatticeVertex(NamedTuple):
    """Vertex of the glued lattice: a cell index and a cell-vertex name.

    Gates are the vertices named like the source; ``LatticeVertex(n, source)``
    is gate ``n``.  Sink names never appear on the lattice (the sink of cell
    ``n`` *is* gate ``n+1``).
    """

    cell: int
    name: str


@dataclass
class ValidationReport:
    valid: bool
    strongly_connected: bool
    rates_positive: bool
    support_symmetric: bool
    failures: list[str] = field(default_factory=list)


@dataclass
class MinimalityReport:
    minimal: bool
    path_count: int
    support_symmetric: bool
    reason: str | None


def _reachable(vertices: Iterable[str], adj: dict[str, list[str]], start: str) -> set[str]:
    seen = {start}
    stack = [start]
    while stack:
        v = stack.pop()
        for w in adj.get(v, ()):
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return seen


def validate(graph: FundamentalGraph, rates: RateMap) -> ValidationReport:
    """Check structure, connectivity and rates; violations become report lines.

    Structural problems (unknown endpoints, self-loops, missing or nonpositive
    rates, bad marks) are collected as failure strings rather than raised, so a
    caller can show all of them at once.  Support symmetry is reported but is
    not required for validity; it only matters for minimality and the
    fluctuation-symmetry predictions.
    """
    failures: list[str] = []
    vset = set(graph.vertices)
    if len(graph.vertices) != len(vset):
        failures.append("duplicate vertex names")
    if graph.source not in vset:
        failures.append(f"source {graph.source!r} is not a declared vertex")
    if graph.sink not in vset:
        failures.append(f"sink {graph.sink!r} is not a declared vertex")
    if graph.source == graph.sink:
        failures.append("source and sink must differ")

    seen_edges: set[Edge] = set()
    for e in graph.edges:
        x, y = e
        if x not in vset or y not in vset:
            failures.append(f"edge ({x!r}, {y!r}) has an undeclared endpoint")
        if x == y:
            failures.append(f"self-loop at {x!r}")
        if e in seen_edges:
            failures.append(f"duplicate edge ({x!r}, {y!r})")
        seen_edges.add(e)

    rates_positive = True
    for e in graph.edges:
        r = rates.get(e)
        if r is None:
            rates_positive = False
            failures.append(f"missing rate for edge {e!r}")
        elif not (r > 0.0):
            rates_positive = False
            failures.append(f"rate for edge {e!r} must be positive, got {r!r}")
    for e in rates:
        if e not in seen_edges:
            rates_positive = False
            failures.append(f"rate given for unknown edge {e!r}")

    structurally_ok = not failures
    strongly_connected = False
    if graph.source in vset and graph.sink in vset:
        adj: dict[str, list[str]] = {v: [] for v in graph.vertices}
        radj: dict[str, list[str]] = {v: [] for v in graph.vertices}
        for x, y in graph.edges:
            if x in vset and y in vset:
                adj[x].append(y)
                radj[y].append(x)
        start = graph.vertices[0] if graph.vertices else None
        if start is not None:
            strongly_connected = (
                _reachable(graph.vertices, adj, start) == vset
                and _reachable(graph.vertices, radj, start) == vset
            )
    if not strongly_connected:
        failures.append("graph is not strongly connected")

    support_symmetric = all((y, x) in seen_edges for (x, y) in seen_edges)
    valid = structurally_ok and strongly_connected and rates_positive
    return ValidationReport(
        valid=valid,
        strongly_connected=strongly_connected,
        rates_positive=rates_positive,
        support_symmetric=support_symmetric,
        failures=failures,
    )


def vertex_exit_rate(graph: FundamentalGraph, rates: RateMap, name: str) -> float:
    """Total exit rate of a lattice vertex with this cell name.

    For the gate name this combines the cell exit rates of source and sink,
    because the gate inherits the outgoing edges of both glued endpoints.
    """
    if name == graph.sink:
        name = graph.source
    total = sum(rates[e] for e in graph.out_edges(name))
    if name == graph.source:
        total += sum(rates[e] for e in graph.out_edges(graph.sink))
    return total


def gate_exit_rate(graph: FundamentalGraph, rates: RateMap) -> float:
    return vertex_exit_rate(graph, rates, graph.source)


def lattice_out_edges(
    graph: FundamentalGraph, rates: RateMap, x: LatticeVertex
) -> list[tuple[LatticeVertex, float]]:
    """Outgoing lattice edges of ``x`` with their rates.

    Within-cell edges stay in cell ``x.cell``; an edge into the sink lands on
    gate ``x.cell + 1``; at a gate, the sink's outgoing edges are also
    available and land in cell ``x.cell - 1`` (an edge sink->source lands on
    gate ``x.cell - 1``).
    """
    if x.name == graph.sink:
        raise GraphSpecError("sink names do not exist on the lattice; use the next gate")
    if x.name not in graph.vertices:
        raise GraphSpecError(f"unknown vertex name {x.name!r}")
    out: list[tuple[LatticeVertex, float]] = []
    for (v, w) in graph.out_edges(x.name):
        if w == graph.sink:
            out.append((LatticeVertex(x.cell + 1, graph.source), rates[(v, w)]))
        else:
            out.append((LatticeVertex(x.cell, w), rates[(v, w)]))
    if x.name == graph.source:
        for (v, w) in graph.out_edges(graph.sink):
            # w == sink is impossible: self-loops are rejected by validation.
            out.append((LatticeVertex(x.cell - 1, w), rates[(v, w)]))
    return out


def enumerate_gate_paths(graph: FundamentalGraph) -> list[tuple[str, ...]]:
    """All simple oriented paths from source to sink, endpoints included.

    Depth-first, following edge declaration order, so output order is stable.
    """
    paths: list[tuple[str, ...]] = []
    path = [graph.source]
    on_path = {graph.source}

    def extend(v: str) -> None:
        for (_, w) in graph.out_edges(v):
            if w == graph.sink:
                paths.append(tuple(path) + (w,))
            elif w not in on_path:
                path.append(w)
                on_path.add(w)
                extend(w)
                path.pop()
                on_path.remove(w)

    extend(graph.source)
    return paths


def minimality_report(graph: FundamentalGraph) -> MinimalityReport:
    """Minimal means: symmetric edge support and a unique source-to-sink path."""
    support_symmetric = all((y, x) in set(graph.edges) for (x, y) in graph.edges)
    count = len(enumerate_gate_paths(graph))
    reasons = []
    if not support_symmetric:
        reasons.append("asymmetric_support")
    if count != 1:
        reasons.append("gate_path_count_not_one")
    return MinimalityReport(
        minimal=not reasons,
        path_count=count,
        support_symmetric=support_symmetric,
        reason=";".join(reasons) or None,
    )


def is_minimal(graph: FundamentalGraph) -> bool:
    return minimality_report(graph).minimal


def gc_delta(graph: FundamentalGraph, rates: RateMap) -> float:
    """Log ratio of forward to backward rate products along the unique gate path."""
    import math

    report = minimality_report(graph)
    if not report.minimal:
        raise NotMinimal(f"graph is not minimal ({report.reason})")
    (path,) = enumerate_gate_paths(graph)
    delta = 0.0
    for a, b in zip(path[:-1], path[1:]):
        delta += math.log(rates[(a, b)]) - math.log(rates[(b, a)])
    return delta


def graph_from_dict(spec: dict) -> tuple[FundamentalGraph, dict[Edge, float]]:
    """Build a graph and rate map from the JSON object layout.

    Expected keys: ``vertices`` (list of names), ``source``, ``sink``,
    ``edges`` (list of ``{"from", "to", "rate"}``).  A repeated (from, to)
    pair is an error here; everything else is left to :func:`validate`.
    """
    try:
        vertices = tuple(str(v) for v in spec["vertices"])
        source = str(spec["source"])
        sink = str(spec["sink"])
        raw_edges = spec["edges"]
    except (KeyError, TypeError) as exc:
        raise GraphSpecError(f"graph object missing required field: {exc}") from exc
    edges: list[Edge] = []
    rates: dict[Edge, float] = {}
    for item in raw_edges:
        try:
            e = (str(item["from"]), str(item["to"]))
            r = float(item["rate"])
        except (KeyError, TypeError, ValueError) as exc:
            raise GraphSpecError(f"bad edge entry {item!r}: {exc}") from exc
        if e in rates:
            raise GraphSpecError(f"duplicate edge ({e[0]!r}, {e[1]!r})")
        edges.append(e)
        rates[e] = r
    graph = FundamentalGraph(vertices=vertices, edges=tuple(edges), source=source, sink=sink)
    return graph, rates


def graph_to_dict(graph: FundamentalGraph, rates: RateMap) -> dict:
    return {
        "vertices": list(graph.vertices),
        "source": graph.source,
        "sink": graph.sink,
        "edges": [{"from": x, "to": y, "rate": rates[(x, y)]} for (x, y) in graph.edges],
    }


def load_graph(path: str | Path) -> tuple[FundamentalGraph, dict[Edge, float]]:
    """Read a graph JSON file; raises GraphSpecError on malformed content."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            spec = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise GraphSpecError(f"cannot read graph file {path}: {exc}") from exc
    if not isinstance(spec, dict):
        raise GraphSpecError(f"graph file {path} must contain a JSON object")
    return graph_from_dict(spec)
