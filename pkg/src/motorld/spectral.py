"""Tilted-generator route to the position rate function for graph laws.

The lattice generator commutes with the one-cell shift, so tilting position
by ``exp(lam)`` block-diagonalizes it into a finite matrix indexed by the cell
vertices with the sink folded onto the gate.  The principal eigenvalue
``Lambda(lam)`` of that matrix is the scaled cumulant generating function of
the position, and its Legendre transform is the rate function, computed here
without ever touching the renewal transforms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._linalg import perron_pair, perron_root
from .errors import DomainError
from .graph import FundamentalGraph, RateMap, vertex_exit_rate

__all__ = ["TiltedMatrix", "build_A", "Lambda", "Lambda_prime", "I_spectral"]

_LAMBDA_CAP = 400.0


@dataclass
class TiltedMatrix:
    """Tilted cell matrix with its vertex order and shift constant.

    ``kappa`` is the largest vertex exit rate on the lattice; adding it to the
    diagonal makes the matrix nonnegative so Perron-Frobenius applies (any
    larger shift works equally).
    """

    matrix: np.ndarray
    order: tuple[str, ...]
    lam: float
    kappa: float


def build_A(graph: FundamentalGraph, rates: RateMap, lam: float) -> TiltedMatrix:
    """Assemble the tilted matrix over the cell vertices without the sink.

    Entry (v, w) collects the rates of lattice jumps from w-vertices into
    v-vertices, weighted by exp(lam) per cell ascended: within-cell edges
    contribute r(w, v); edges into the sink contribute exp(lam) r(w, sink) on
    the gate row; the sink's outgoing edges contribute exp(-lam) r(sink, v) on
    the gate column.  When source and sink are adjacent both cross-cell terms
    land on the diagonal gate entry.
    """
    names = tuple(v for v in graph.vertices if v != graph.sink)
    idx = {v: i for i, v in enumerate(names)}
    n = len(names)
    a = np.zeros((n, n))
    el, eml = math.exp(lam), math.exp(-lam)
    for v in names:
        a[idx[v], idx[v]] -= vertex_exit_rate(graph, rates, v)
    for (x, y) in graph.edges:
        r = rates[(x, y)]
        if x != graph.sink and y != graph.sink:
            a[idx[y], idx[x]] += r
        elif y == graph.sink:
            a[idx[graph.source], idx[x]] += el * r
        else:  # x == sink
            a[idx[y], idx[graph.source]] += eml * r
    kappa = max(vertex_exit_rate(graph, rates, v) for v in names)
    return TiltedMatrix(matrix=a, order=names, lam=lam, kappa=kappa)


def Lambda(graph: FundamentalGraph, rates: RateMap, lam: float) -> float:
    """Scaled cumulant generating function of the position; zero at lam=0."""
    tm = build_A(graph, rates, lam)
    shift = tm.kappa + 1.0  # strictly positive diagonal forces primitivity
    return perron_root(tm.matrix + shift * np.eye(len(tm.order))) - shift


def Lambda_prime(graph: FundamentalGraph, rates: RateMap, lam: float) -> float:
    """Exact eigenvalue derivative via the left and right Perron vectors."""
    tm = build_A(graph, rates, lam)
    n = len(tm.order)
    shift = tm.kappa + 1.0
    _, right, left = perron_pair(tm.matrix + shift * np.eye(n))
    src = tm.order.index(graph.source)
    da = np.zeros((n, n))
    el, eml = math.exp(lam), math.exp(-lam)
    for (x, y) in graph.edges:
        if y == graph.sink:
            da[src, tm.order.index(x)] += el * rates[(x, y)]
        elif x == graph.sink:
            da[tm.order.index(y), src] -= eml * rates[(x, y)]
    return float(left @ da @ right) / float(left @ right)


def I_spectral(graph: FundamentalGraph, rates: RateMap, theta: float) -> float:
    """Legendre transform of Lambda by bisection on its increasing derivative.

    Returns +inf when theta is outside the closure of the derivative's range
    (cannot happen for a strongly connected cell, but the bracket is capped).
    """

    def dprime(lam: float) -> float:
        return Lambda_prime(graph, rates, lam)

    lo, hi = -1.0, 1.0
    for _ in range(64):
        if dprime(lo) < theta:
            break
        lo *= 2.0
        if lo < -_LAMBDA_CAP:
            return math.inf
    else:
        return math.inf
    for _ in range(64):
        if dprime(hi) > theta:
            break
        hi *= 2.0
        if hi > _LAMBDA_CAP:
            return math.inf
    else:
        return math.inf
    tol = 1e-10 * max(1.0, abs(theta))
    mid = 0.5 * (lo + hi)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        d = dprime(mid)
        if abs(d - theta) < tol:
            break
        if d < theta:
            lo = mid
        else:
            hi = mid
    val = theta * mid - Lambda(graph, rates, mid)
    return max(val, 0.0)


def spectral_check_domain(law_kind: str) -> None:
    if law_kind != "graph":
        raise DomainError("the spectral route is defined for graph laws only")
