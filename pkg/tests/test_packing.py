import random
from itertools import combinations

import pytest

from bbranching import (
    CapacityVector,
    DemandVector,
    Digraph,
    InfeasiblePackingError,
    PackingInstance,
    WeightVector,
    brute_exists_packing,
    check_packing_conditions,
    exists_b_branching_with_indegree,
    find_disjoint_b_branchings,
    g_value,
    is_b_branching,
    min_weight_disjoint_b_branchings,
)
from bbranching.matroids import CapacityError, indegree_profile

from helpers import random_packing_instance


def test_g_value_examples():
    g = Digraph.from_pairs(2, [(0, 1)])
    instance = PackingInstance(g, CapacityVector([1, 1]), (DemandVector([1, 0]),))
    assert g_value(instance, set()) == 0
    assert g_value(instance, {0, 1}) == 0  # demands always differ from capacities
    assert g_value(instance, {0}) == 1


def test_check_conditions_zero_demands():
    g = Digraph.from_pairs(3, [])
    instance = PackingInstance(
        g, CapacityVector([1, 1, 1]), (DemandVector([0, 0, 0]), DemandVector([0, 0, 0]))
    )
    assert check_packing_conditions(instance)


def test_check_conditions_single_arc():
    g = Digraph.from_pairs(2, [(0, 1)])
    instance = PackingInstance(g, CapacityVector([1, 1]), (DemandVector([0, 1]),))
    assert check_packing_conditions(instance)
    assert brute_exists_packing(instance)


def test_check_conditions_missing_arc_witness():
    g = Digraph.from_pairs(2, [])
    instance = PackingInstance(g, CapacityVector([1, 1]), (DemandVector([0, 1]),))
    feasibility = check_packing_conditions(instance)
    assert not feasibility
    assert feasibility.vertex == 1


def test_cut_condition_witness():
    # both demands want the lone arc into vertex 1's region
    g = Digraph.from_pairs(2, [(0, 1), (0, 1)])
    instance = PackingInstance(
        g,
        CapacityVector([2, 1]),
        (DemandVector([0, 1]), DemandVector([1, 1])),
    )
    feasibility = check_packing_conditions(instance)
    # degree condition passes at both vertices, the set condition must fail
    if not feasibility:
        assert feasibility.subset is not None or feasibility.vertex is not None


def test_unique_arborescence_packing():
    g = Digraph.from_pairs(4, [(0, 1), (1, 2), (1, 3)])
    b = CapacityVector([1, 1, 1, 1])
    instance = PackingInstance(g, b, (DemandVector([0, 1, 1, 1]),))
    result = find_disjoint_b_branchings(instance)
    assert result.branchings == (frozenset({0, 1, 2}),)


def test_find_disjoint_requires_feasible():
    g = Digraph.from_pairs(2, [])
    instance = PackingInstance(g, CapacityVector([1, 1]), (DemandVector([0, 1]),))
    with pytest.raises(InfeasiblePackingError):
        find_disjoint_b_branchings(instance)


def test_classical_disjoint_branchings_special_case():
    # unit capacities with 0/1 demands: feasibility must match the classical
    # cut condition counting the demand sets containing each vertex set
    rng = random.Random(71)
    for _ in range(120):
        n = rng.randint(1, 5)
        m = rng.randint(0, 9)
        pairs = [(rng.randrange(n), rng.randrange(n)) for _ in range(m)]
        g = Digraph.from_pairs(n, pairs)
        b = CapacityVector([1] * n)
        k = rng.randint(1, 2)
        demands = []
        for _ in range(k):
            values = [rng.randint(0, 1) for _ in range(n)]
            if all(values):
                values[rng.randrange(n)] = 0
            demands.append(DemandVector(values))
        instance = PackingInstance(g, b, tuple(demands))
        classical = True
        for size in range(1, n + 1):
            for combo in combinations(range(n), size):
                inside = set(combo)
                cut = sum(
                    1
                    for a in g.arc_ids
                    if g.head(a) in inside and g.tail(a) not in inside
                )
                wanting = sum(
                    1 for d in demands if all(d[v] == 1 for v in inside)
                )
                if cut < wanting:
                    classical = False
        degree_ok = all(
            len(g.in_arc_ids(v)) >= sum(d[v] for d in demands) for v in range(n)
        )
        assert bool(check_packing_conditions(instance)) == (classical and degree_ok)


def test_random_packings_validate():
    rng = random.Random(73)
    built = 0
    for _ in range(150):
        instance = random_packing_instance(rng, loop_rate=0.1)
        feasible = check_packing_conditions(instance)
        assert bool(feasible) == brute_exists_packing(instance)
        if not feasible:
            continue
        result = find_disjoint_b_branchings(instance)
        used = set()
        for demand, part in zip(instance.demands, result.branchings):
            profile = indegree_profile(instance.graph, part)
            assert all(
                profile[v] == demand[v] for v in instance.graph.vertices
            )
            assert is_b_branching(instance.graph, instance.capacities, part)
            assert not (part & used)
            used |= part
        built += 1
    assert built > 20


def test_exists_with_prescribed_indegree():
    g = Digraph.from_pairs(3, [(0, 1), (1, 2)])
    b = CapacityVector([1, 1, 1])
    feasibility, arcs = exists_b_branching_with_indegree(g, b, DemandVector([0, 1, 1]))
    assert feasibility and arcs == {0, 1}
    feasibility, arcs = exists_b_branching_with_indegree(g, b, DemandVector([0, 0, 0]))
    assert feasibility and arcs == frozenset()
    with pytest.raises(CapacityError):
        exists_b_branching_with_indegree(
            Digraph.from_pairs(2, [(0, 1)]), CapacityVector([1, 1]), DemandVector([1, 1])
        )


def test_root_arborescence_special_case():
    # demands of one everywhere except a root reduce to arborescence existence
    g = Digraph.from_pairs(3, [(0, 1), (1, 2), (2, 1)])
    b = CapacityVector([1, 1, 1])
    feasibility, arcs = exists_b_branching_with_indegree(g, b, DemandVector([0, 1, 1]))
    assert feasibility
    assert arcs == {0, 1}
    no_path = Digraph.from_pairs(3, [(1, 2)])
    feasibility, arcs = exists_b_branching_with_indegree(
        no_path, b, DemandVector([0, 1, 1])
    )
    assert not feasibility and arcs is None


def test_min_weight_unique_solution_ignores_weights():
    g = Digraph.from_pairs(4, [(0, 1), (1, 2), (1, 3)])
    b = CapacityVector([1, 1, 1, 1])
    instance = PackingInstance(g, b, (DemandVector([0, 1, 1, 1]),))
    result = min_weight_disjoint_b_branchings(instance, [9, 9, 9])
    assert result.branchings == (frozenset({0, 1, 2}),)


def test_min_weight_equal_weights_total():
    g = Digraph.from_pairs(2, [(0, 1), (0, 1), (1, 0)])
    b = CapacityVector([1, 2])
    demands = (DemandVector([0, 1]), DemandVector([1, 1]))
    instance = PackingInstance(g, b, demands)
    assert check_packing_conditions(instance)
    result = min_weight_disjoint_b_branchings(instance, [4, 4, 4])
    wanted = sum(sum(d[v] for v in range(2)) for d in demands)
    total = sum(len(part) for part in result.branchings)
    assert total == wanted
    wv = WeightVector.from_values([4, 4, 4])
    assert sum(wv.value(part) for part in result.branchings) == 4 * wanted


def test_min_weight_matches_reference():
    import itertools

    def reference(instance, wv):
        g = instance.graph
        k = instance.k
        n = g.vertex_count
        best = [None]

        def parts_for(demand, available):
            per_vertex = []
            for v in range(n):
                pool = [a for a in g.in_arc_ids(v) if a in available]
                if len(pool) < demand[v]:
                    return []
                per_vertex.append(list(itertools.combinations(pool, demand[v])))
            out = []
            for combo in itertools.product(*per_vertex):
                subset = frozenset(a for chunk in combo for a in chunk)
                if is_b_branching(g, instance.capacities, subset):
                    out.append(subset)
            return out

        def search(i, available, acc):
            if i == k:
                if best[0] is None or acc < best[0]:
                    best[0] = acc
                return
            for part in parts_for(instance.demands[i].as_dict(), available):
                search(i + 1, available - part, acc + sum(wv.numerators[a] for a in part))

        search(0, g.arc_id_set, 0)
        return best[0]

    rng = random.Random(79)
    checked = 0
    for _ in range(80):
        instance = random_packing_instance(rng, max_vertices=4, max_arcs=7)
        if not check_packing_conditions(instance):
            continue
        w = [rng.randint(0, 5) for _ in range(instance.graph.arc_count)]
        wv = WeightVector.from_values(w)
        result = min_weight_disjoint_b_branchings(instance, w)
        got = sum(sum(wv.numerators[a] for a in part) for part in result.branchings)
        assert got == reference(instance, wv)
        checked += 1
    assert checked > 15


def test_self_loop_can_be_packed():
    # a loop counts toward the vertex indegree but not toward any cut, so it
    # is a legitimate committed arc when the capacity leaves room
    g = Digraph.from_pairs(1, [(0, 0)])
    b = CapacityVector([2])
    instance = PackingInstance(g, b, (DemandVector([1]),))
    assert check_packing_conditions(instance)
    result = find_disjoint_b_branchings(instance)
    assert result.branchings == (frozenset({0}),)


def test_instance_validation():
    g = Digraph.from_pairs(2, [(0, 1)])
    with pytest.raises(ValueError):
        PackingInstance(g, CapacityVector([1, 1]), ())
    with pytest.raises(CapacityError):
        PackingInstance(g, CapacityVector([1, 1]), (DemandVector([1, 1]),))
