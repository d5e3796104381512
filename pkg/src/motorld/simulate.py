"""Exact samplers: lattice walks, regeneration cycles, hitting times.

Everything takes a ``numpy.random.Generator``; identical seeds give identical
output.  Batch samplers are vectorized across walkers by grouping on the
current state, so large Monte Carlo runs cost a few hundred numpy rounds
rather than millions of Python steps.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DomainError, OutOfHorizon, RunawaySimulation
from .graph import FundamentalGraph, LatticeVertex, RateMap, lattice_out_edges, vertex_exit_rate
from .laws import CycleLaw, DiscreteLaw, ExponentialLaw, GammaLaw, GraphLaw

__all__ = [
    "CycleSample",
    "Trajectory",
    "SkeletonPath",
    "HittingResult",
    "CumulativeTrajectory",
    "sample_cycle",
    "sample_cycles",
    "simulate_trajectory",
    "skeleton",
    "sample_hitting_time",
    "sample_hitting_times",
    "sample_cumulative",
    "sample_positions",
    "spawn_rngs",
]

DEFAULT_STEP_CAP = 10**9


@dataclass(frozen=True)
class CycleSample:
    sign: int
    duration: float


@dataclass
class Trajectory:
    """Jump chain of the lattice walk up to a horizon, starting at gate 0."""

    times: list[float]
    vertices: list[LatticeVertex]
    horizon: float
    gate_name: str


@dataclass
class SkeletonPath:
    """Gate-visit record: times and integer positions, deduplicated."""

    times: list[float]
    positions: list[int]


@dataclass(frozen=True)
class HittingResult:
    """Hitting time of a level; ``time`` is None when censored at the cap."""

    time: float | None
    censored: bool


@dataclass
class CumulativeTrajectory:
    """Skeleton walk built from cycles: positions w and cycle end times t."""

    w: np.ndarray
    t: np.ndarray

    def z(self, time: float) -> int:
        """Position at a given time; errors beyond the last sampled cycle."""
        if time > self.t[-1]:
            raise OutOfHorizon(f"time {time} beyond simulated horizon {self.t[-1]}")
        i = int(np.searchsorted(self.t, time, side="right")) - 1
        return int(self.w[max(i, 0)])


def spawn_rngs(seed: int, workers: int) -> list[np.random.Generator]:
    """Independent substreams for (seed, worker index), stable across runs."""
    return [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(workers)]


# ---------------------------------------------------------------------------
# per-law sampling tables
# ---------------------------------------------------------------------------


def _alias_build(probs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    k = len(probs)
    scaled = probs * k
    alias = np.zeros(k, dtype=np.int64)
    cut = np.ones(k)
    small = [i for i in range(k) if scaled[i] < 1.0]
    large = [i for i in range(k) if scaled[i] >= 1.0]
    while small and large:
        s, l = small.pop(), large.pop()
        cut[s] = scaled[s]
        alias[s] = l
        scaled[l] = scaled[l] - (1.0 - scaled[s])
        (small if scaled[l] < 1.0 else large).append(l)
    return cut, alias


@lru_cache(maxsize=256)
def _discrete_tables(law: DiscreteLaw):
    signs = np.array([a[0] for a in law.atoms], dtype=np.int8)
    durs = np.array([a[1] for a in law.atoms])
    probs = np.array([a[2] for a in law.atoms])
    probs = probs / probs.sum()
    if len(law.atoms) > 16:
        cut, alias = _alias_build(probs.copy())
        return signs, durs, ("alias", cut, alias)
    return signs, durs, ("scan", np.cumsum(probs), None)


def _discrete_draw(law: DiscreteLaw, n: int, rng: np.random.Generator):
    signs, durs, (mode, a, b) = _discrete_tables(law)
    if mode == "alias":
        idx = rng.integers(0, len(signs), size=n)
        u = rng.random(n)
        idx = np.where(u < a[idx], idx, b[idx])
    else:
        idx = np.searchsorted(a, rng.random(n), side="right")
        idx = np.minimum(idx, len(signs) - 1)
    return signs[idx].astype(np.int8), durs[idx]


@lru_cache(maxsize=256)
def _lattice_tables(law: GraphLaw):
    """Per-name transition tables of the lattice walk.

    For each cell name (sink excluded) the table holds the exit rate, the
    cumulative jump probabilities, the target name indices and the cell
    offsets.  Gates carry both the source's and the sink's outgoing edges.
    """
    graph, rates = law.graph, law.rate_map
    names = tuple(v for v in graph.vertices if v != graph.sink)
    idx = {v: i for i, v in enumerate(names)}
    exit_rates = np.array([vertex_exit_rate(graph, rates, v) for v in names])
    targets, dcells, cums = [], [], []
    for v in names:
        outs = lattice_out_edges(graph, rates, LatticeVertex(0, v))
        rvec = np.array([r for (_, r) in outs])
        targets.append(np.array([idx[y.name] for (y, _) in outs], dtype=np.int64))
        dcells.append(np.array([y.cell for (y, _) in outs], dtype=np.int64))
        cums.append(np.cumsum(rvec) / rvec.sum())
    return names, idx, exit_rates, targets, dcells, cums


def _graph_cycles(law: GraphLaw, n: int, rng: np.random.Generator, step_cap: int):
    """Vectorized excursions gate -> adjacent gate; returns (signs, durations)."""
    names, idx, exit_rates, targets, dcells, cums = _lattice_tables(law)
    src = idx[law.graph.source]
    state = np.full(n, src, dtype=np.int64)
    cell = np.zeros(n, dtype=np.int64)
    dur = np.zeros(n)
    sign = np.zeros(n, dtype=np.int8)
    active = np.arange(n)
    steps = 0
    while active.size:
        st = state[active]
        dur[active] += rng.exponential(1.0, size=active.size) / exit_rates[st]
        u = rng.random(active.size)
        new_state = np.empty(active.size, dtype=np.int64)
        new_cell = cell[active].copy()
        for s in np.unique(st):
            m = st == s
            choice = np.searchsorted(cums[s], u[m], side="right")
            choice = np.minimum(choice, len(cums[s]) - 1)
            new_state[m] = targets[s][choice]
            new_cell[m] += dcells[s][choice]
        state[active] = new_state
        cell[active] = new_cell
        absorbed = (new_state == src) & (new_cell != 0)
        if absorbed.any():
            done = active[absorbed]
            sign[done] = np.sign(cell[done]).astype(np.int8)
            active = active[~absorbed]
        steps += int(st.size)
        if steps > step_cap:
            raise RunawaySimulation(f"cycle sampling exceeded {step_cap} steps")
    return sign, dur


def sample_cycles(
    law: CycleLaw, n: int, rng: np.random.Generator, step_cap: int = DEFAULT_STEP_CAP
) -> tuple[np.ndarray, np.ndarray]:
    """n i.i.d. cycles as (signs, durations) arrays."""
    if isinstance(law, GraphLaw):
        return _graph_cycles(law, n, rng, step_cap)
    if isinstance(law, DiscreteLaw):
        return _discrete_draw(law, n, rng)
    if isinstance(law, ExponentialLaw):
        up = rng.random(n) < law.p
        dur = np.empty(n)
        dur[up] = rng.exponential(1.0 / law.beta_plus, size=int(up.sum()))
        dur[~up] = rng.exponential(1.0 / law.beta_minus, size=int((~up).sum()))
        return np.where(up, 1, -1).astype(np.int8), dur
    if isinstance(law, GammaLaw):
        up = rng.random(n) < law.p
        dur = np.empty(n)
        dur[up] = rng.gamma(law.k_plus, 1.0 / law.beta_plus, size=int(up.sum()))
        dur[~up] = rng.gamma(law.k_minus, 1.0 / law.beta_minus, size=int((~up).sum()))
        return np.where(up, 1, -1).astype(np.int8), dur
    raise DomainError(f"unknown law {law!r}")


def sample_cycle(law: CycleLaw, rng: np.random.Generator) -> CycleSample:
    signs, durs = sample_cycles(law, 1, rng)
    return CycleSample(sign=int(signs[0]), duration=float(durs[0]))


# ---------------------------------------------------------------------------
# lattice trajectories
# ---------------------------------------------------------------------------


def simulate_trajectory(
    graph: FundamentalGraph,
    rates: RateMap,
    t_max: float,
    rng: np.random.Generator,
    step_cap: int = DEFAULT_STEP_CAP,
) -> Trajectory:
    """Jump-by-jump walk from gate 0 until the horizon."""
    law = GraphLaw.from_rates(graph, rates)
    names, idx, exit_rates, targets, dcells, cums = _lattice_tables(law)
    s = idx[graph.source]
    cell = 0
    t = 0.0
    times = [0.0]
    vertices = [LatticeVertex(0, graph.source)]
    for _ in range(step_cap):
        t += rng.exponential(1.0) / exit_rates[s]
        if t > t_max:
            return Trajectory(times=times, vertices=vertices, horizon=t_max,
                              gate_name=graph.source)
        u = rng.random()
        j = int(np.searchsorted(cums[s], u, side="right"))
        j = min(j, len(cums[s]) - 1)
        cell += int(dcells[s][j])
        s = int(targets[s][j])
        times.append(t)
        vertices.append(LatticeVertex(cell, names[s]))
    raise RunawaySimulation(f"trajectory exceeded {step_cap} steps before t={t_max}")


def skeleton(traj: Trajectory) -> SkeletonPath:
    """Last-gate-visited record of a trajectory, consecutive repeats dropped."""
    times: list[float] = []
    positions: list[int] = []
    for t, v in zip(traj.times, traj.vertices):
        if v.name == traj.gate_name and (not positions or positions[-1] != v.cell):
            times.append(t)
            positions.append(v.cell)
    return SkeletonPath(times=times, positions=positions)


# ---------------------------------------------------------------------------
# cycle-level processes
# ---------------------------------------------------------------------------


def sample_hitting_time(
    law: CycleLaw,
    n: int,
    rng: np.random.Generator,
    t_cap: float,
    step_cap: int = DEFAULT_STEP_CAP,
) -> HittingResult:
    """First time the skeleton reaches level n, censored once time passes t_cap."""
    if n == 0:
        raise DomainError("target level must be a nonzero integer")
    w = 0
    t = 0.0
    for _ in range(step_cap):
        c = sample_cycle(law, rng)
        w += c.sign
        t += c.duration
        if t > t_cap:
            return HittingResult(time=None, censored=True)
        if w == n:
            return HittingResult(time=t, censored=False)
    raise RunawaySimulation(f"hitting-time sampling exceeded {step_cap} cycles")


def sample_hitting_times(
    law: CycleLaw,
    level: int,
    n_samples: int,
    rng: np.random.Generator,
    t_cap: float,
    step_cap: int = DEFAULT_STEP_CAP,
    batch: int = 1,
) -> np.ndarray:
    """Vectorized hitting times; censored entries are NaN."""
    if level == 0:
        raise DomainError("target level must be a nonzero integer")
    out = np.full(n_samples, np.nan)
    w = np.zeros(n_samples, dtype=np.int64)
    t = np.zeros(n_samples)
    active = np.arange(n_samples)
    drawn = 0
    while active.size:
        signs, durs = sample_cycles(law, active.size, rng)
        t[active] += durs
        w[active] += signs
        censored = t[active] > t_cap
        hit = (w[active] == level) & ~censored
        out[active[hit]] = t[active[hit]]
        active = active[~(hit | censored)]
        drawn += int(signs.size)
        if drawn > step_cap:
            raise RunawaySimulation(f"hitting-time batch exceeded {step_cap} cycles")
    return out


def sample_cumulative(
    law: CycleLaw, n_cycles: int, rng: np.random.Generator
) -> CumulativeTrajectory:
    """Skeleton walk of n_cycles cycles, with the initial (0, 0) entry."""
    signs, durs = sample_cycles(law, n_cycles, rng)
    w = np.concatenate([[0], np.cumsum(signs, dtype=np.int64)])
    t = np.concatenate([[0.0], np.cumsum(durs)])
    return CumulativeTrajectory(w=w, t=t)


def sample_positions(
    law: CycleLaw,
    t: float,
    n_samples: int,
    rng: np.random.Generator,
    step_cap: int = DEFAULT_STEP_CAP,
) -> np.ndarray:
    """n_samples independent draws of the skeleton position at time t.

    For graph laws the lattice walk itself is run (grouped-state vectorized);
    for parametric laws cycles are accumulated until they pass the horizon.
    """
    if isinstance(law, GraphLaw):
        return _graph_positions(law, t, n_samples, rng, step_cap)
    z = np.zeros(n_samples, dtype=np.int64)
    clock = np.zeros(n_samples)
    active = np.arange(n_samples)
    drawn = 0
    while active.size:
        signs, durs = sample_cycles(law, active.size, rng)
        newc = clock[active] + durs
        crossed = newc > t
        z[active[~crossed]] += signs[~crossed]
        clock[active] = newc
        active = active[~crossed]
        drawn += int(signs.size)
        if drawn > step_cap:
            raise RunawaySimulation(f"position sampling exceeded {step_cap} cycles")
    return z


def _graph_positions(
    law: GraphLaw, t: float, n_samples: int, rng: np.random.Generator, step_cap: int
) -> np.ndarray:
    names, idx, exit_rates, targets, dcells, cums = _lattice_tables(law)
    src = idx[law.graph.source]
    state = np.full(n_samples, src, dtype=np.int64)
    cell = np.zeros(n_samples, dtype=np.int64)
    skel = np.zeros(n_samples, dtype=np.int64)
    clock = np.zeros(n_samples)
    active = np.arange(n_samples)
    steps = 0
    while active.size:
        st = state[active]
        newc = clock[active] + rng.exponential(1.0, size=active.size) / exit_rates[st]
        crossed = newc > t
        clock[active] = newc
        stay = active[~crossed]
        if stay.size:
            st = state[stay]
            u = rng.random(stay.size)
            new_state = np.empty(stay.size, dtype=np.int64)
            new_cell = cell[stay].copy()
            for s in np.unique(st):
                m = st == s
                choice = np.searchsorted(cums[s], u[m], side="right")
                choice = np.minimum(choice, len(cums[s]) - 1)
                new_state[m] = targets[s][choice]
                new_cell[m] += dcells[s][choice]
            state[stay] = new_state
            cell[stay] = new_cell
            gate = new_state == src
            skel[stay[gate]] = new_cell[gate]
        active = stay
        steps += int(st.size)
        if steps > step_cap:
            raise RunawaySimulation(f"position sampling exceeded {step_cap} steps")
    return skel
