"""Shared test helpers: deterministic graph factories and sweep strategies."""

import random

import copchase as cc


def complete_graph(n: int) -> cc.Graph:
    return cc.Graph(n, [(u, v) for u in range(n) for v in range(u + 1, n)])


def random_connected_graph(seed: int, n: int, extra_edge_prob: float = 0.3) -> cc.Graph:
    """Random spanning tree plus extra edges; deterministic for a given seed."""
    rng = random.Random(seed)
    edges = set()
    for v in range(1, n):
        edges.add((rng.randrange(v), v))
    for u in range(n):
        for v in range(u + 1, n):
            if (u, v) not in edges and rng.random() < extra_edge_prob:
                edges.add((u, v))
    return cc.Graph(n, sorted(edges))


def path_sweep(n: int) -> cc.FixedStrategy:
    """Single cop walking one end of the path to the other."""
    return cc.FixedStrategy([(i,) for i in range(n)])


def cycle_opposite_sweep(n: int) -> cc.FixedStrategy:
    """Two cops from adjacent starts walking around the cycle in opposite
    directions, pinching the free arc."""
    rounds = (n - 1) // 2 + 1
    return cc.FixedStrategy(
        [tuple(sorted((t % n, (n - 1 - t) % n))) for t in range(rounds)]
    )
