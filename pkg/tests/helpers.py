"""Shared random-instance generators for the test suite."""

from __future__ import annotations

import random

from bbranching import CapacityVector, DemandVector, Digraph, PackingInstance


def random_digraph(rng: random.Random, max_vertices: int, max_arcs: int, loop_rate: float = 0.0) -> Digraph:
    n = rng.randint(1, max_vertices)
    m = rng.randint(0, max_arcs)
    pairs = []
    for _ in range(m):
        tail = rng.randrange(n)
        head = tail if rng.random() < loop_rate else rng.randrange(n)
        pairs.append((tail, head))
    return Digraph.from_pairs(n, pairs)


def random_capacities(rng: random.Random, graph: Digraph, max_cap: int) -> CapacityVector:
    return CapacityVector([rng.randint(1, max_cap) for _ in graph.vertices])


def random_weights(rng: random.Random, graph: Digraph, low: int = 0, high: int = 10) -> list[int]:
    return [rng.randint(low, high) for _ in range(graph.arc_count)]


def random_packing_instance(
    rng: random.Random,
    max_vertices: int = 5,
    max_arcs: int = 10,
    max_cap: int = 2,
    max_parts: int = 2,
    loop_rate: float = 0.0,
) -> PackingInstance:
    """Random instance whose demand vectors respect the validity hypotheses."""
    graph = random_digraph(rng, max_vertices, max_arcs, loop_rate)
    n = graph.vertex_count
    capacities = CapacityVector([rng.randint(1, max_cap) for _ in range(n)])
    k = rng.randint(1, max_parts)
    demands = []
    for _ in range(k):
        values = [rng.randint(0, capacities[v]) for v in range(n)]
        if all(values[v] == capacities[v] for v in range(n)):
            values[rng.randrange(n)] -= 1
        demands.append(DemandVector(values))
    return PackingInstance(graph, capacities, tuple(demands))


def random_indegree_independent_set(rng: random.Random, graph: Digraph, capacities: CapacityVector) -> frozenset:
    """Random arc subset respecting every vertex capacity."""
    chosen: list[int] = []
    for v in graph.vertices:
        pool = list(graph.in_arc_ids(v))
        rng.shuffle(pool)
        take = rng.randint(0, min(capacities[v], len(pool)))
        chosen.extend(pool[:take])
    return frozenset(chosen)
