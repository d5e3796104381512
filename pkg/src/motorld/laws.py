"""Cycle laws: joint distributions of one regeneration step (sign, duration).

One cycle of the skeleton walk moves one gate left or right (the sign) and
takes a positive random time (the duration).  Four families are supported:

* ``GraphLaw``      -- induced by a continuous-time walk on the lattice of a
                       fundamental cell graph;
* ``DiscreteLaw``   -- finitely many atoms (sign, duration, probability);
* ``ExponentialLaw``-- sign independent of duration, exponential durations
                       with a per-sign scale;
* ``GammaLaw``      -- same with gamma durations.

Law objects are immutable and hashable so expensive per-law quantities can be
cached.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Union

from .errors import LawSpecError
from .graph import Edge, FundamentalGraph, RateMap, graph_from_dict, graph_to_dict, load_graph, validate

__all__ = [
    "GraphLaw",
    "DiscreteLaw",
    "ExponentialLaw",
    "GammaLaw",
    "CycleLaw",
    "validate_law",
    "law_from_dict",
    "law_to_dict",
    "load_law",
]


@dataclass(frozen=True)
class GraphLaw:
    """Cycle law of the lattice walk over a cell graph.

    ``rate_items`` is a sorted tuple of ((from, to), rate); use ``rate_map``
    for dictionary access.
    """

    graph: FundamentalGraph
    rate_items: tuple[tuple[Edge, float], ...]

    @staticmethod
    def from_rates(graph: FundamentalGraph, rates: RateMap) -> "GraphLaw":
        return GraphLaw(graph=graph, rate_items=tuple(sorted(rates.items())))

    @property
    def rate_map(self) -> dict[Edge, float]:
        return dict(self.rate_items)


@dataclass(frozen=True)
class DiscreteLaw:
    """Finite support: atoms are (sign, duration, probability)."""

    atoms: tuple[tuple[int, float, float], ...]


@dataclass(frozen=True)
class ExponentialLaw:
    """P(sign=+1) = p; duration ~ Exp(beta_plus) or Exp(beta_minus) by sign."""

    p: float
    beta_plus: float
    beta_minus: float


@dataclass(frozen=True)
class GammaLaw:
    """P(sign=+1) = p; duration ~ Gamma(k, beta) with per-sign shape and rate."""

    p: float
    k_plus: float
    beta_plus: float
    k_minus: float
    beta_minus: float


CycleLaw = Union[GraphLaw, DiscreteLaw, ExponentialLaw, GammaLaw]

_PROB_TOL = 1e-9


def validate_law(law: CycleLaw, require_two_sided: bool = True) -> None:
    """Raise LawSpecError unless the law is usable.

    ``require_two_sided=False`` admits laws with all mass on one sign; such
    degenerate laws are only meaningful for rate-function edge cases and are
    rejected everywhere else.
    """
    if isinstance(law, GraphLaw):
        report = validate(law.graph, law.rate_map)
        if not report.valid:
            raise LawSpecError("invalid cell graph: " + "; ".join(report.failures))
        return
    if isinstance(law, DiscreteLaw):
        if not law.atoms:
            raise LawSpecError("discrete law needs at least one atom")
        total = 0.0
        mass = {1: 0.0, -1: 0.0}
        for sign, dur, prob in law.atoms:
            if sign not in (1, -1):
                raise LawSpecError(f"atom sign must be +1 or -1, got {sign!r}")
            if not (dur > 0.0):
                raise LawSpecError(f"atom duration must be positive, got {dur!r}")
            if not (prob > 0.0):
                raise LawSpecError(f"atom probability must be positive, got {prob!r}")
            total += prob
            mass[sign] += prob
        if abs(total - 1.0) > _PROB_TOL:
            raise LawSpecError(f"atom probabilities sum to {total!r}, expected 1")
        if require_two_sided and (mass[1] <= 0.0 or mass[-1] <= 0.0):
            raise LawSpecError("both signs must carry positive probability")
        return
    if isinstance(law, ExponentialLaw):
        if not (0.0 < law.p < 1.0):
            raise LawSpecError("p must lie strictly between 0 and 1")
        if not (law.beta_plus > 0.0 and law.beta_minus > 0.0):
            raise LawSpecError("exponential rates must be positive")
        return
    if isinstance(law, GammaLaw):
        if not (0.0 < law.p < 1.0):
            raise LawSpecError("p must lie strictly between 0 and 1")
        for v in (law.k_plus, law.beta_plus, law.k_minus, law.beta_minus):
            if not (v > 0.0):
                raise LawSpecError("gamma shapes and rates must be positive")
        return
    raise LawSpecError(f"unknown law object {law!r}")


def law_from_dict(spec: dict, base_dir: str | Path | None = None) -> CycleLaw:
    """Build a law from its JSON object; ``graph_file`` paths resolve against base_dir."""
    if not isinstance(spec, dict) or "kind" not in spec:
        raise LawSpecError("law object must carry a 'kind' field")
    kind = spec["kind"]
    try:
        if kind == "graph":
            if "graph" in spec:
                graph, rates = graph_from_dict(spec["graph"])
            else:
                path = Path(spec["graph_file"])
                if base_dir is not None and not path.is_absolute():
                    path = Path(base_dir) / path
                graph, rates = load_graph(path)
            law: CycleLaw = GraphLaw.from_rates(graph, rates)
        elif kind == "discrete":
            atoms = tuple((int(s), float(d), float(p)) for (s, d, p) in spec["atoms"])
            law = DiscreteLaw(atoms=atoms)
        elif kind == "exponential":
            law = ExponentialLaw(
                p=float(spec["p"]),
                beta_plus=float(spec["beta_plus"]),
                beta_minus=float(spec["beta_minus"]),
            )
        elif kind == "gamma":
            law = GammaLaw(
                p=float(spec["p"]),
                k_plus=float(spec["k_plus"]),
                beta_plus=float(spec["beta_plus"]),
                k_minus=float(spec["k_minus"]),
                beta_minus=float(spec["beta_minus"]),
            )
        else:
            raise LawSpecError(f"unknown law kind {kind!r}")
    except LawSpecError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise LawSpecError(f"bad law object: {exc}") from exc
    validate_law(law)
    return law


def law_to_dict(law: CycleLaw) -> dict:
    """Inline JSON form (graph laws embed the graph rather than a file path)."""
    if isinstance(law, GraphLaw):
        return {"kind": "graph", "graph": graph_to_dict(law.graph, law.rate_map)}
    if isinstance(law, DiscreteLaw):
        return {"kind": "discrete", "atoms": [list(a) for a in law.atoms]}
    if isinstance(law, ExponentialLaw):
        return {
            "kind": "exponential",
            "p": law.p,
            "beta_plus": law.beta_plus,
            "beta_minus": law.beta_minus,
        }
    if isinstance(law, GammaLaw):
        return {
            "kind": "gamma",
            "p": law.p,
            "k_plus": law.k_plus,
            "beta_plus": law.beta_plus,
            "k_minus": law.k_minus,
            "beta_minus": law.beta_minus,
        }
    raise LawSpecError(f"unknown law object {law!r}")


def load_law(path: str | Path) -> CycleLaw:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            spec = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise LawSpecError(f"cannot read law file {path}: {exc}") from exc
    return law_from_dict(spec, base_dir=Path(path).parent)


def atom_sign_mass(law: DiscreteLaw, sign: int) -> float:
    return math.fsum(p for (s, _, p) in law.atoms if s == sign)
