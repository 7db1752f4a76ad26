"""Exact pursuit-game values: adversarial capture times via a minimax
backward-induction fixpoint, and expected capture times against the
random-walking (drunk) robber via undiscounted value iteration.

States are pairs (cop configuration, robber vertex). Cop configurations are
canonical sorted k-tuples: cops are interchangeable and may share a vertex.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import TextIO

import numpy as np

from .chain import as_config, cop_modified_transition
from .graphs import Graph, validate

INFINITE = math.inf
DEFAULT_STATE_CAP = 5_000_000
SCHEMES = ("jacobi", "gauss-seidel")


class StateSpaceError(RuntimeError):
    """State space exceeds the configured cap; raised before allocation."""


class ConvergenceError(RuntimeError):
    """Value iteration exhausted its sweep budget."""

    def __init__(self, sweeps: int, residual: float, tolerance: float):
        super().__init__(
            f"no convergence after {sweeps} sweeps: "
            f"residual {residual:.3g} > tolerance {tolerance:.3g}"
        )
        self.sweeps = sweeps
        self.residual = residual


class CopNumberError(RuntimeError):
    """No winning cop count found within the search cap."""


@dataclass(frozen=True)
class SolveOptions:
    scheme: str = "gauss-seidel"
    tolerance: float = 1e-10
    max_sweeps: int = 10**6

    def __post_init__(self):
        if self.scheme not in SCHEMES:
            raise ValueError(f"scheme must be one of {SCHEMES}, got {self.scheme!r}")
        if not self.tolerance > 0:
            raise ValueError(f"tolerance must be positive, got {self.tolerance}")
        if self.max_sweeps < 1:
            raise ValueError("max_sweeps must be at least 1")


class _StateSpace:
    """Enumerated cop configurations with successor and occupancy tables."""

    def __init__(self, g: Graph, k: int, state_cap: int):
        if k < 1:
            raise ValueError(f"cop count must be >= 1, got {k}")
        n = g.n
        m = math.comb(n + k - 1, k)
        if m * n > state_cap:
            raise StateSpaceError(
                f"{m} configurations x {n} robber vertices = {m * n} states "
                f"exceeds cap {state_cap}"
            )
        self.g = g
        self.n = n
        self.k = k
        self.m = m
        self.configs = list(itertools.combinations_with_replacement(range(n), k))
        self.index = {cfg: i for i, cfg in enumerate(self.configs)}
        self.nbp = [np.array(g.closed_neighbors(v), dtype=np.int64) for v in range(n)]
        # per-config successor configurations (one independent step per cop),
        # kept sorted so first-hit argmin realizes the lexicographic tie-break
        succ = []
        for cfg in self.configs:
            moves = {
                tuple(sorted(combo))
                for combo in itertools.product(*(g.closed_neighbors(v) for v in cfg))
            }
            succ.append(np.array(sorted(self.index[t] for t in moves), dtype=np.int64))
        self.succ = succ
        s_max = max(len(s) for s in succ)
        self.succ_padded = np.empty((m, s_max), dtype=np.int64)
        for i, s in enumerate(succ):
            self.succ_padded[i, : len(s)] = s
            self.succ_padded[i, len(s):] = s[0]  # pad duplicates never win a min
        self.occupied = np.zeros((m, n), dtype=bool)
        for i, cfg in enumerate(self.configs):
            self.occupied[i, list(cfg)] = True
        self.occ_cols = [np.array(sorted(set(cfg)), dtype=np.int64) for cfg in self.configs]
        self._walk = None

    @property
    def walk(self) -> np.ndarray:
        """Cop-free robber walk matrix (n x n, rows uniform over N(v))."""
        if self._walk is None:
            P = np.zeros((self.n, self.n))
            for v in range(self.n):
                nbrs = self.g.adjacency[v]
                P[v, list(nbrs)] = 1.0 / len(nbrs)
            self._walk = P
        return self._walk

    def gathered_min(self, table: np.ndarray, out: np.ndarray) -> np.ndarray:
        """out[x] = entrywise min of table over the successors of config x."""
        sp = self.succ_padded
        np.copyto(out, table[sp[:, 0]])
        for j in range(1, sp.shape[1]):
            np.minimum(out, table[sp[:, j]], out=out)
        return out


class ValueTable:
    """Map from (cop configuration, robber vertex) to a game value.

    `kind` records which game the values belong to: "adversarial" and
    "adversarial-robber" hold minimax round counts (math.inf on robber-win
    states), "drunk" holds expected capture times.
    """

    def __init__(self, kind: str, k: int, configs, values: np.ndarray):
        self.kind = kind
        self.k = k
        self.configs = configs
        self.values = values
        self._index = {cfg: i for i, cfg in enumerate(configs)}

    def value(self, config, y: int) -> float:
        return float(self.values[self._index[as_config(config)], y])

    def __getitem__(self, key) -> float:
        config, y = key
        return self.value(config, y)

    def config_means(self) -> np.ndarray:
        return self.values.mean(axis=1)

    def to_csv(self, sink: TextIO) -> None:
        cols = [f"x{i + 1}" for i in range(self.k)]
        sink.write(",".join(cols + ["y", "value"]) + "\n")
        for cfg, row in zip(self.configs, self.values):
            prefix = ",".join(str(v) for v in cfg)
            for y, val in enumerate(row):
                text = "inf" if math.isinf(val) else repr(float(val))
                sink.write(f"{prefix},{y},{text}\n")


class FeedbackPolicy:
    """Deterministic cop move per state: (configuration, robber) -> successor
    configuration. Undefined states (robber-win regions) map to None."""

    def __init__(self, k: int, configs, successor_idx: np.ndarray):
        self.k = k
        self.configs = configs
        self.successor_idx = successor_idx
        self._index = {cfg: i for i, cfg in enumerate(configs)}

    def successor(self, config, y: int):
        idx = self.successor_idx[self._index[as_config(config)], y]
        return None if idx < 0 else self.configs[idx]

    def undefined_count(self) -> int:
        return int((self.successor_idx < 0).sum())

    def to_csv(self, sink: TextIO) -> None:
        cols = [f"x{i + 1}" for i in range(self.k)]
        ucols = [f"u{i + 1}" for i in range(self.k)]
        sink.write(",".join(cols + ["y"] + ucols) + "\n")
        for cfg, row in zip(self.configs, self.successor_idx):
            prefix = ",".join(str(v) for v in cfg)
            for y, idx in enumerate(row):
                if idx < 0:
                    tail = ",".join("-" for _ in range(self.k))
                else:
                    tail = ",".join(str(v) for v in self.configs[idx])
                sink.write(f"{prefix},{y},{tail}\n")


class RobberPolicy:
    """Adversarial robber move per state: (configuration, robber) -> vertex."""

    def __init__(self, k: int, configs, target: np.ndarray):
        self.k = k
        self.configs = configs
        self.target = target
        self._index = {cfg: i for i, cfg in enumerate(configs)}

    def successor(self, config, y: int) -> int:
        return int(self.target[self._index[as_config(config)], y])


@dataclass(frozen=True)
class SweepStats:
    sweeps: int
    final_delta: float
    min_increment: float
    max_value: float


@dataclass(frozen=True)
class AdversarialSolution:
    cop_values: ValueTable      # value with the cops to move
    robber_values: ValueTable   # value with the robber to move
    cop_policy: FeedbackPolicy
    robber_policy: RobberPolicy
    sweeps: int

    def capture_time(self) -> float:
        worst = self.cop_values.values.max(axis=1)
        return float(worst.min())

    def optimal_start(self) -> tuple[tuple[int, ...], float]:
        worst = self.cop_values.values.max(axis=1)
        best = int(worst.argmin())
        return self.cop_values.configs[best], float(worst[best])


@dataclass(frozen=True)
class DrunkSolution:
    values: ValueTable
    policy: FeedbackPolicy
    stats: SweepStats
    scheme: str

    def drunk_capture_time(self) -> float:
        return float(self.values.config_means().min())

    def optimal_start(self) -> tuple[tuple[int, ...], float]:
        means = self.values.config_means()
        best = int(means.argmin())
        return self.values.configs[best], float(means[best])


def solve_adversarial(
    g: Graph, k: int, state_cap: int = DEFAULT_STATE_CAP
) -> AdversarialSolution:
    """Minimax capture values for k cops against the adversarial robber.

    Iterates the two-phase backward induction
        R[x, y] = max over y' in N+(y) of C[x, y']
        C[x, y] = 1 + min over x' in one cop step of R[x', y]
    from C = inf off-diagonal until nothing changes. States still infinite
    are the robber-win region (k below the cop number).
    """
    space = _StateSpace(g, k, state_cap)
    m, n = space.m, space.n
    C = np.full((m, n), np.inf)
    C[space.occupied] = 0.0
    R = np.empty_like(C)
    C_new = np.empty_like(C)
    sweeps = 0
    while True:
        sweeps += 1
        for y in range(n):
            R[:, y] = C[:, space.nbp[y]].max(axis=1)
        R[space.occupied] = 0.0
        space.gathered_min(R, C_new)
        C_new += 1.0
        C_new[space.occupied] = 0.0
        if np.array_equal(C_new, C):
            break
        C, C_new = C_new, C
        if sweeps > m * n + 3:
            raise RuntimeError("adversarial fixpoint failed to stabilize")

    cop_policy = _argmin_policy(space, R)
    cop_policy[C == np.inf] = -1
    _hold_on_diagonal(space, cop_policy)

    robber_target = np.empty((m, n), dtype=np.int64)
    for y in range(n):
        robber_target[:, y] = space.nbp[y][C[:, space.nbp[y]].argmax(axis=1)]
        robber_target[space.occupied[:, y], y] = y
    configs = space.configs
    return AdversarialSolution(
        cop_values=ValueTable("adversarial", k, configs, C),
        robber_values=ValueTable("adversarial-robber", k, configs, R),
        cop_policy=FeedbackPolicy(k, configs, cop_policy),
        robber_policy=RobberPolicy(k, configs, robber_target),
        sweeps=sweeps,
    )


def _argmin_policy(space: _StateSpace, table: np.ndarray) -> np.ndarray:
    """Per state, the first (lexicographically smallest) successor
    configuration minimizing `table`."""
    out = np.empty((space.m, space.n), dtype=np.int64)
    for i, succ in enumerate(space.succ):
        out[i] = succ[table[succ].argmin(axis=0)]
    return out


def _hold_on_diagonal(space: _StateSpace, policy_idx: np.ndarray) -> None:
    for i in range(space.m):
        policy_idx[i, space.occ_cols[i]] = i


def capture_time(g: Graph, k: int, state_cap: int = DEFAULT_STATE_CAP) -> float:
    """min over starts of the worst-case capture time; math.inf iff k cops
    cannot win."""
    return solve_adversarial(g, k, state_cap).capture_time()


def _trivial_drunk_solution(k: int, scheme: str) -> DrunkSolution:
    configs = [(0,) * k]
    values = np.zeros((1, 1))
    policy = np.zeros((1, 1), dtype=np.int64)
    return DrunkSolution(
        values=ValueTable("drunk", k, configs, values),
        policy=FeedbackPolicy(k, configs, policy),
        stats=SweepStats(sweeps=0, final_delta=0.0, min_increment=0.0, max_value=0.0),
        scheme=scheme,
    )


def solve_drunk(
    g: Graph,
    k: int,
    opts: SolveOptions | None = None,
    state_cap: int = DEFAULT_STATE_CAP,
) -> DrunkSolution:
    """Expected capture times against the drunk robber by value iteration.

    Iterates C[x, y] = 1 + min over cop steps x' of sum over y' in N(y) of
    P(x')[y, y'] * C[x', y'] from C = 0, where P(x') is the robber walk with
    capture mass removed (steps into cops and cop-occupied rows contribute
    zero). Jacobi sweeps read the previous table; Gauss-Seidel updates
    configuration rows in place in ascending order.
    """
    if opts is None:
        opts = SolveOptions()
    if g.n == 1:
        return _trivial_drunk_solution(k, opts.scheme)
    space = _StateSpace(g, k, state_cap)
    if opts.scheme == "jacobi":
        C, stats = _drunk_jacobi(space, opts)
    else:
        C, stats = _drunk_gauss_seidel(space, opts)
    policy = _drunk_policy(space, C)
    return DrunkSolution(
        values=ValueTable("drunk", k, space.configs, C),
        policy=FeedbackPolicy(k, space.configs, policy),
        stats=stats,
        scheme=opts.scheme,
    )


def _smeared(space: _StateSpace, C: np.ndarray, out: np.ndarray) -> np.ndarray:
    """out[c, y] = expected next value at config c after the robber steps
    from y, with capture contributing zero.

    Equals the substochastic cop-modified walk applied to row c: the columns
    at cop vertices contribute nothing because the table is zero there, and
    the cop-occupied rows are masked out explicitly.
    """
    np.matmul(C, space.walk.T, out=out)
    out[space.occupied] = 0.0
    return out


def _drunk_jacobi(space: _StateSpace, opts: SolveOptions):
    C = np.zeros((space.m, space.n))
    W = np.empty_like(C)
    C_new = np.empty_like(C)
    min_increment = math.inf
    for sweep in range(1, opts.max_sweeps + 1):
        _smeared(space, C, W)
        space.gathered_min(W, C_new)
        C_new += 1.0
        C_new[space.occupied] = 0.0
        diff = C_new - C
        delta = float(np.abs(diff).max())
        min_increment = min(min_increment, float(diff.min()))
        C, C_new = C_new, C
        if delta < opts.tolerance:
            stats = SweepStats(sweep, delta, min_increment, float(C.max()))
            return C, stats
    raise ConvergenceError(opts.max_sweeps, delta, opts.tolerance)


def _drunk_gauss_seidel(space: _StateSpace, opts: SolveOptions):
    P = space.walk
    C = np.zeros((space.m, space.n))
    W = np.zeros_like(C)  # masked smear of the current table, row by row
    min_increment = math.inf
    for sweep in range(1, opts.max_sweeps + 1):
        delta = 0.0
        for x in range(space.m):
            new_row = W[space.succ[x]].min(axis=0)
            new_row += 1.0
            new_row[space.occ_cols[x]] = 0.0
            diff = new_row - C[x]
            delta = max(delta, float(np.abs(diff).max()))
            min_increment = min(min_increment, float(diff.min()))
            C[x] = new_row
            w = P @ new_row
            w[space.occ_cols[x]] = 0.0
            W[x] = w
        if delta < opts.tolerance:
            stats = SweepStats(sweep, delta, min_increment, float(C.max()))
            return C, stats
    raise ConvergenceError(opts.max_sweeps, delta, opts.tolerance)


def _drunk_policy(space: _StateSpace, C: np.ndarray) -> np.ndarray:
    W = np.empty_like(C)
    _smeared(space, C, W)
    policy = _argmin_policy(space, W)
    _hold_on_diagonal(space, policy)
    return policy


def drunk_capture_time(
    g: Graph,
    k: int,
    opts: SolveOptions | None = None,
    state_cap: int = DEFAULT_STATE_CAP,
) -> float:
    """min over starts of the uniform-placement expected capture time."""
    return solve_drunk(g, k, opts, state_cap).drunk_capture_time()


def extract_policy(table: ValueTable, g: Graph, state_cap: int = DEFAULT_STATE_CAP) -> FeedbackPolicy:
    """Greedy cop policy from a converged value table.

    Adversarial tables minimize the robber's best reply; drunk tables
    minimize the expected continuation. Robber-win states have no
    finite-valued successor and are left undefined.
    """
    space = _StateSpace(g, table.k, state_cap)
    if list(table.configs) != space.configs:
        raise ValueError("table does not match the graph's configuration space")
    if table.kind == "drunk":
        policy = _drunk_policy(space, table.values)
    elif table.kind == "adversarial":
        C = table.values
        R = np.empty_like(C)
        for y in range(space.n):
            R[:, y] = C[:, space.nbp[y]].max(axis=1)
        R[space.occupied] = 0.0
        policy = _argmin_policy(space, R)
        policy[C == np.inf] = -1
        _hold_on_diagonal(space, policy)
    else:
        raise ValueError(f"cannot extract a cop policy from a {table.kind!r} table")
    return FeedbackPolicy(table.k, space.configs, policy)


def policy_value(
    g: Graph,
    policy: FeedbackPolicy,
    tolerance: float = 1e-12,
    max_sweeps: int = 10**6,
) -> ValueTable:
    """Expected capture times induced by a fixed feedback policy, evaluated
    on the cop-modified robber chains. Intended for modest state spaces."""
    n = g.n
    configs = list(policy.configs)
    m = len(configs)
    idx = policy.successor_idx
    if np.any(idx < 0):
        raise ValueError("policy is undefined on some states")
    used = np.unique(idx)
    blocks = {
        int(c): cop_modified_transition(g, configs[int(c)])[:n, :n] for c in used
    }
    V = np.zeros((m, n))
    occupied = np.zeros((m, n), dtype=bool)
    for i, cfg in enumerate(configs):
        occupied[i, list(cfg)] = True
    cols = np.arange(n)
    for sweep in range(1, max_sweeps + 1):
        rows = {c: b @ V[c] for c, b in blocks.items()}
        V_new = np.empty_like(V)
        for c, row in rows.items():
            sel = idx == c
            V_new[sel] = row[np.nonzero(sel)[1]]
        V_new += 1.0
        V_new[occupied] = 0.0
        delta = float(np.abs(V_new - V).max())
        V = V_new
        if delta < tolerance:
            return ValueTable("drunk", policy.k, configs, V)
    raise ConvergenceError(max_sweeps, delta, tolerance)


def cop_number(
    g: Graph, max_cops: int = 3, state_cap: int = DEFAULT_STATE_CAP
) -> int:
    """Least k with finite adversarial capture time, searched k = 1, 2, ...
    up to `max_cops`."""
    for k in range(1, max_cops + 1):
        if math.isfinite(capture_time(g, k, state_cap)):
            return k
    raise CopNumberError(f"no winning configuration with up to {max_cops} cops")


@dataclass(frozen=True)
class DrunkennessReport:
    cops: int
    capture_time: float
    drunk_capture_time: float
    ratio: float
    adversarial_start: tuple[int, ...]
    drunk_start: tuple[int, ...]
    sweeps: int


def drunkenness_report(
    g: Graph,
    opts: SolveOptions | None = None,
    max_cops: int = 3,
    state_cap: int = DEFAULT_STATE_CAP,
) -> DrunkennessReport:
    """Capture time, drunk capture time, and their ratio at the cop number."""
    if g.n == 1:
        raise ValueError("cost of drunkenness is undefined on a single vertex")
    cops = cop_number(g, max_cops, state_cap)
    adversarial = solve_adversarial(g, cops, state_cap)
    ct = adversarial.capture_time()
    drunk = solve_drunk(g, cops, opts, state_cap)
    dct = drunk.drunk_capture_time()
    return DrunkennessReport(
        cops=cops,
        capture_time=ct,
        drunk_capture_time=dct,
        ratio=ct / dct,
        adversarial_start=adversarial.optimal_start()[0],
        drunk_start=drunk.optimal_start()[0],
        sweeps=drunk.stats.sweeps,
    )


def cost_of_drunkenness(
    g: Graph,
    opts: SolveOptions | None = None,
    max_cops: int = 3,
    state_cap: int = DEFAULT_STATE_CAP,
) -> float:
    """Ratio of adversarial to drunk capture time at the cop number; >= 1."""
    return drunkenness_report(g, opts, max_cops, state_cap).ratio
