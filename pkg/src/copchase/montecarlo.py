"""Seeded Monte Carlo oracles: drunk-robber pursuit under feedback or fixed
strategies, random-walking cop demos, and the simple-walk deviation check.

All randomness comes from counter-based Philox streams derived from the
master seed plus a (purpose, round) key, so reports are bit-reproducible
and independent of evaluation order.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .chain import FixedStrategy, validate_strategy
from .graphs import Graph, distance_matrix, validate
from .solver import FeedbackPolicy

RNG_NAME = "philox4x64"
_TAGS = {"placement": 0, "robber": 1, "cops": 2, "walk": 3, "evader": 4}
MAX_ROUND_CAP = 10**6

EVADER_HEURISTICS = ("max-distance-greedy", "uniform-random")


class SimulationError(RuntimeError):
    """Simulation aborted (undefined policy state or invalid inputs)."""


@dataclass(frozen=True)
class SeedSpec:
    """Master seed for a simulation; all streams derive from it.

    `stream(purpose, step)` yields the Philox generator for one purpose
    ("placement", "robber", "cops", "evader", "walk") and round index, so
    any draw is a pure function of (master, purpose, step).
    """

    master: int

    def stream(self, purpose: str, step: int) -> np.random.Generator:
        key = np.random.SeedSequence(
            entropy=self.master, spawn_key=(_TAGS[purpose], step)
        )
        return np.random.Generator(np.random.Philox(key))


def _as_seed(seed) -> SeedSpec:
    return seed if isinstance(seed, SeedSpec) else SeedSpec(int(seed))


@dataclass
class SimReport:
    trials: int
    mean: float
    stderr: float
    max_observed: int
    censored: int
    histogram: list[int]
    seed: int
    rng: str = RNG_NAME

    def to_dict(self) -> dict:
        return {
            "trials": self.trials,
            "mean": self.mean,
            "stderr": self.stderr,
            "max": self.max_observed,
            "censored": self.censored,
            "histogram": self.histogram,
            "seed": self.seed,
            "rng": self.rng,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _stream(seed, tag: str, step: int) -> np.random.Generator:
    return _as_seed(seed).stream(tag, step)


def _censor_cap(g: Graph) -> int:
    diag = validate(g)
    if diag.diameter == 0:
        return 1
    budget = 100.0 * diag.diameter * float(diag.max_degree) ** diag.diameter
    return int(min(budget, MAX_ROUND_CAP))


def _open_csr(g: Graph):
    deg = np.array([g.degree(v) for v in range(g.n)], dtype=np.int64)
    start = np.zeros(g.n, dtype=np.int64)
    np.cumsum(deg[:-1], out=start[1:])
    flat = np.array([u for v in range(g.n) for u in g.adjacency[v]], dtype=np.int64)
    return flat, start, deg


def _closed_csr(g: Graph):
    deg = np.array([g.degree(v) + 1 for v in range(g.n)], dtype=np.int64)
    start = np.zeros(g.n, dtype=np.int64)
    np.cumsum(deg[:-1], out=start[1:])
    flat = np.array(
        [u for v in range(g.n) for u in g.closed_neighbors(v)], dtype=np.int64
    )
    return flat, start, deg


def _report(T: np.ndarray, seed: int) -> SimReport:
    captured = T[T >= 0]
    censored = int((T < 0).sum())
    if captured.size == 0:
        return SimReport(len(T), math.nan, math.nan, 0, censored, [], seed)
    mean = float(captured.mean())
    if captured.size > 1:
        stderr = float(captured.std(ddof=1) / math.sqrt(captured.size))
    else:
        stderr = 0.0
    hist = np.bincount(captured).tolist()
    return SimReport(
        trials=len(T),
        mean=mean,
        stderr=stderr,
        max_observed=int(captured.max()),
        censored=censored,
        histogram=hist,
        seed=seed,
    )


def _assert_robber_steps(g: Graph, before: np.ndarray, after: np.ndarray) -> None:
    pairs = {(int(a), int(b)) for a, b in zip(before, after)}
    for a, b in pairs:
        assert b in g.adjacency[a], f"robber stepped {a} -> {b} outside N({a})"


def _assert_config_moves(g: Graph, configs, src_idx: np.ndarray, dst_idx: np.ndarray) -> None:
    from .chain import _cops_can_move

    pairs = {(int(a), int(b)) for a, b in zip(src_idx, dst_idx)}
    for a, b in pairs:
        assert _cops_can_move(g, configs[a], configs[b]), (
            f"illegal cop move {configs[a]} -> {configs[b]}"
        )


def simulate_drunk_pursuit(
    g: Graph,
    policy: FeedbackPolicy | FixedStrategy,
    trials: int,
    seed: int,
    start=None,
    max_rounds: int | None = None,
    validate_moves: bool = False,
) -> SimReport:
    """Simulate the drunk robber against a feedback policy or fixed strategy.

    Each trial places the robber uniformly (capture at T=0 when colocated),
    then alternates cop move / capture check / robber random step / capture
    check. Trials still running at `max_rounds` are censored.
    """
    if trials < 1:
        raise SimulationError("trials must be >= 1")
    seed = _as_seed(seed)
    if max_rounds is None:
        max_rounds = _censor_cap(g)
    n = g.n
    if n == 1:
        T = np.zeros(trials, dtype=np.int64)
        return _report(T, seed.master)

    fixed = isinstance(policy, FixedStrategy)
    if fixed:
        validate_strategy(g, policy)
        occ_rounds = None
    else:
        if start is None:
            raise SimulationError("feedback policies need an initial configuration")
        succ_idx = policy.successor_idx
        occupied = np.zeros((len(policy.configs), n), dtype=bool)
        for i, cfg in enumerate(policy.configs):
            occupied[i, list(cfg)] = True
        try:
            start_idx = policy.configs.index(tuple(sorted(start)))
        except ValueError as exc:
            raise SimulationError(f"unknown start configuration {start!r}") from exc

    flat, start_off, deg = _open_csr(g)

    y = _stream(seed, "placement", 0).integers(0, n, size=trials)
    T = np.full(trials, -1, dtype=np.int64)

    if fixed:
        occ0 = np.zeros(n, dtype=bool)
        occ0[list(policy.configs[0])] = True
        T[occ0[y]] = 0
    else:
        cfg = np.full(trials, start_idx, dtype=np.int64)
        T[occupied[start_idx, y]] = 0

    alive = np.nonzero(T < 0)[0]
    t = 0
    while alive.size and t < max_rounds:
        t += 1
        u = _stream(seed, "robber", t).random(trials)[alive]
        ya = y[alive]
        # cop phase
        if fixed:
            cops_now = policy.config_at(t)
            occ_t = np.zeros(n, dtype=bool)
            occ_t[list(cops_now)] = True
            caught = occ_t[ya]
        else:
            nxt = succ_idx[cfg[alive], ya]
            if np.any(nxt < 0):
                bad = alive[np.nonzero(nxt < 0)[0][0]]
                state = (policy.configs[cfg[bad]], int(y[bad]))
                raise SimulationError(f"policy undefined at state {state}")
            if validate_moves:
                _assert_config_moves(g, policy.configs, cfg[alive], nxt)
            cfg[alive] = nxt
            caught = occupied[nxt, ya]
        T[alive[caught]] = t
        alive = alive[~caught]
        if not alive.size:
            break
        # robber phase
        ya = y[alive]
        stepped = flat[start_off[ya] + (u[~caught] * deg[ya]).astype(np.int64)]
        if validate_moves:
            _assert_robber_steps(g, ya, stepped)
        y[alive] = stepped
        if fixed:
            caught = occ_t[stepped]
        else:
            caught = occupied[cfg[alive], stepped]
        T[alive[caught]] = t
        alive = alive[~caught]
    return _report(T, seed.master)


def simulate_random_cops(
    g: Graph,
    k: int,
    evader: str,
    trials: int,
    seed: int,
    max_rounds: int | None = None,
    start=None,
) -> SimReport:
    """Cops take independent uniform closed-neighborhood steps; the evader
    follows a heuristic. A finiteness demo, not an optimal-adversary oracle.

    Evaders: "max-distance-greedy" starts at and moves to (within N+) the
    vertex maximizing distance to the nearest cop, ties to the lowest index;
    "uniform-random" starts uniformly and steps uniformly over N+.
    """
    if evader not in EVADER_HEURISTICS:
        raise SimulationError(f"evader must be one of {EVADER_HEURISTICS}")
    if trials < 1:
        raise SimulationError("trials must be >= 1")
    if k < 1:
        raise SimulationError("need at least one cop")
    seed = _as_seed(seed)
    if max_rounds is None:
        max_rounds = _censor_cap(g)
    n = g.n
    if n == 1:
        return _report(np.zeros(trials, dtype=np.int64), seed.master)

    dmat = np.array(distance_matrix(g), dtype=np.int64)
    cflat, cstart, cdeg = _closed_csr(g)
    width = int(cdeg.max())
    padded = np.full((n, width), -1, dtype=np.int64)
    for v in range(n):
        nbp = g.closed_neighbors(v)
        padded[v, : len(nbp)] = nbp

    place = _stream(seed, "placement", 0)
    if start is None:
        cops = place.integers(0, n, size=(trials, k))
    else:
        cfg = tuple(sorted(start))
        if len(cfg) != k:
            raise SimulationError(f"start {start!r} does not place {k} cops")
        cops = np.tile(np.array(cfg, dtype=np.int64), (trials, 1))

    def nearest_cop_dist(vertices: np.ndarray, cop_pos: np.ndarray) -> np.ndarray:
        # vertices (..., ) indexes rows of dmat; cop_pos (..., k)
        best = dmat[vertices, cop_pos[..., 0]]
        for j in range(1, k):
            np.minimum(best, dmat[vertices, cop_pos[..., j]], out=best)
        return best

    if evader == "uniform-random":
        y = _stream(seed, "evader", 0).integers(0, n, size=trials)
    else:
        # distance of every vertex to the nearest starting cop, per trial
        scores = dmat[:, cops[:, 0]]
        for j in range(1, k):
            scores = np.minimum(scores, dmat[:, cops[:, j]])
        y = scores.argmax(axis=0)

    T = np.full(trials, -1, dtype=np.int64)
    T[(cops == y[:, None]).any(axis=1)] = 0
    alive = np.nonzero(T < 0)[0]
    t = 0
    while alive.size and t < max_rounds:
        t += 1
        ucops = _stream(seed, "cops", t).random((trials, k))[alive]
        moved = cflat[cstart[cops[alive]] + (ucops * cdeg[cops[alive]]).astype(np.int64)]
        cops[alive] = moved
        caught = (moved == y[alive, None]).any(axis=1)
        T[alive[caught]] = t
        alive = alive[~caught]
        if not alive.size:
            break
        ya = y[alive]
        if evader == "uniform-random":
            u = _stream(seed, "evader", t).random(trials)[alive]
            stepped = cflat[cstart[ya] + (u * cdeg[ya]).astype(np.int64)]
        else:
            cand = padded[ya]  # (a, width)
            dist = nearest_cop_dist(cand, cops[alive][:, None, :])
            dist[cand < 0] = -1
            stepped = cand[np.arange(len(ya)), dist.argmax(axis=1)]
        y[alive] = stepped
        caught = (cops[alive] == stepped[:, None]).any(axis=1)
        T[alive[caught]] = t
        alive = alive[~caught]
    return _report(T, seed.master)


def walk_deviation_check(n: int, c: float, trials: int, seed: int) -> float:
    """Fraction of n-step +/-1 walks leaving [-c*sqrt(n ln n), c*sqrt(n ln n)]
    at any time."""
    if n < 1 or trials < 1:
        raise ValueError("n and trials must be >= 1")
    if not c > 2:
        raise ValueError(f"the deviation bound needs c > 2, got {c}")
    seed = _as_seed(seed)
    threshold = c * math.sqrt(n * math.log(n))
    chunk = max(1, min(trials, 8_000_000 // n))
    exceeded = 0
    done = 0
    block = 0
    while done < trials:
        size = min(chunk, trials - done)
        g = _stream(seed, "walk", block)
        steps = g.integers(0, 2, size=(size, n), dtype=np.int8).astype(np.int32)
        steps = steps * 2 - 1
        positions = np.cumsum(steps, axis=1)
        exceeded += int((np.abs(positions) > threshold).any(axis=1).sum())
        done += size
        block += 1
    return exceeded / trials
