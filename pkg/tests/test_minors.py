import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kladder.errors import InvalidInput
from kladder.graph import (
    Graph,
    canonical_form,
    cartesian_product,
    complete_graph,
    cycle_graph,
    grid,
    path_graph,
    star_graph,
    unlabelled_trees,
)
from kladder.minors import (
    Decreasing,
    Increasing,
    Leaves,
    MinorModel,
    PathWitness,
    compose_models,
    erdos_szekeres,
    extract_ladder,
    find_minor_model,
    has_minor_tree_times_path,
    identity_model,
    make_k_ladder,
    private_intervals,
    tree_leaves_or_path,
    tree_times_path_from_ladder,
    validate_ladder,
    validate_model,
    verify_leaves_or_path,
    verify_monotone,
    verify_private_intervals,
)

from oracles import is_minor_brute, random_graph, seeded


def test_model_validation_kinds():
    g = cycle_graph(4)
    assert validate_model(identity_model(g))
    h = path_graph(2)
    assert validate_model(MinorModel(h, g, {0: {0}, 1: {1, 2}}))
    assert validate_model(MinorModel(h, g, {0: {0, 1}, 1: {1}})).kind == "overlap"
    assert validate_model(MinorModel(h, g, {0: {0}, 1: {2}})).kind == "edge"
    assert validate_model(MinorModel(h, g, {0: {0, 2}, 1: {1}})).kind == "disconnected"
    assert validate_model(MinorModel(h, g, {0: {0}})).kind == "pattern-vertex"
    assert validate_model(MinorModel(h, g, {0: set(), 1: {1}})).kind == "empty"


def test_model_json_round_trip():
    m = find_minor_model(cycle_graph(4), grid(2, 3))
    back = MinorModel.from_dict(m.to_dict())
    assert back.branch_sets == m.branch_sets and validate_model(back)


def test_minor_search_examples():
    m = find_minor_model(Graph([0]), path_graph(3))
    assert m is not None and len(m.branch_sets[0]) == 1
    assert find_minor_model(complete_graph(4), cycle_graph(4)) is None
    assert validate_model(find_minor_model(cycle_graph(4), grid(2, 3)))
    assert find_minor_model(cycle_graph(4), star_graph(5)) is None


def test_minor_search_against_deletion_contraction():
    rng = seeded(9)
    for _ in range(40):
        g = random_graph(rng, rng.randint(2, 6), 0.5)
        h = random_graph(rng, rng.randint(1, 4), 0.5)
        m = find_minor_model(h, g)
        assert (m is not None) == is_minor_brute(h, g), (h, g)
        if m is not None:
            assert validate_model(m)


def test_compose_models():
    inner = find_minor_model(path_graph(3), cycle_graph(4))
    outer = find_minor_model(cycle_graph(4), grid(3, 3))
    m = compose_models(inner, outer)
    assert validate_model(m)


def test_ladder_construction_and_validation():
    trees = unlabelled_trees(3)
    lad = make_k_ladder(3, 4, [trees[0]] * 4)
    assert validate_ladder(lad)
    broken = make_k_ladder(3, 4, [trees[0]] * 4)
    from kladder.minors import KLadder

    bad = KLadder(3, 4, broken.graph.add_edges([(0, 2)]))
    assert validate_ladder(bad).kind == "row"
    with pytest.raises(InvalidInput):
        make_k_ladder(3, 2, [trees[0]])


def test_tree_times_path_from_ladder():
    # column shapes alternate; the repeated shape gives T x P_3
    star = Graph(range(3), [(0, 1), (0, 2)])
    path = Graph(range(3), [(0, 1), (1, 2)])
    cols = [star, path, star, path, star, star, path]
    lad = make_k_ladder(3, len(cols), cols)
    t, m = tree_times_path_from_ladder(lad, 3)
    assert validate_model(m)
    assert canonical_form(m.pattern) == canonical_form(cartesian_product(t, path_graph(3)))
    with pytest.raises(InvalidInput):
        tree_times_path_from_ladder(lad, 4)


def test_has_minor_tree_times_path():
    hit = has_minor_tree_times_path(grid(2, 3), 2, 3)
    assert hit is not None and validate_model(hit[1])
    assert has_minor_tree_times_path(path_graph(6), 2, 2) is None


def test_erdos_szekeres_examples():
    assert erdos_szekeres([1, 2, 3], 3, 3) == Increasing((0, 1, 2))
    assert erdos_szekeres([3, 2, 1], 4, 3) == Decreasing((0, 1, 2))
    assert erdos_szekeres([2, 1], 3, 3) is None
    with pytest.raises(InvalidInput):
        erdos_szekeres([1, 1], 2, 2)


def test_erdos_szekeres_all_length_five():
    for perm in itertools.permutations(range(5)):
        arm = erdos_szekeres(list(perm), 3, 3)
        assert arm is not None and verify_monotone(list(perm), arm)


@settings(max_examples=80, deadline=None)
@given(st.permutations(list(range(10))), st.integers(1, 4), st.integers(1, 4))
def test_erdos_szekeres_random(perm, r, s):
    arm = erdos_szekeres(perm, r, s)
    if len(perm) >= (r - 1) * (s - 1) + 1:
        assert arm is not None
    if arm is not None:
        assert verify_monotone(perm, arm)
        assert len(arm.indices) == (r if isinstance(arm, Increasing) else s)


def test_leaves_or_path_examples():
    assert isinstance(tree_leaves_or_path(star_graph(4), 4), Leaves)
    assert isinstance(tree_leaves_or_path(path_graph(4), 4), PathWitness)
    # spider with 2 legs of length 2 is a path on 5 vertices; with 3 legs of length 3, k = 4
    spider = Graph(range(10), [(0, 1), (1, 2), (2, 3), (0, 4), (4, 5), (5, 6), (0, 7), (7, 8), (8, 9)])
    arm = tree_leaves_or_path(spider, 4)
    assert verify_leaves_or_path(spider, 4, arm)


@pytest.mark.parametrize("k", [2, 3, 4])
def test_leaves_or_path_on_every_large_enough_tree(k):
    n = (k - 1) * (k - 2) + 2
    for extra in range(2):
        for t in unlabelled_trees(n + extra):
            arm = tree_leaves_or_path(t, k)
            assert arm is not None and verify_leaves_or_path(t, k, arm)


def _max_private_brute(p, sets):
    best = 0
    pos = {v: i for i, v in enumerate(p)}
    for end in range(len(p)):
        spans = []
        for s in sets:
            hs = [pos[v] for v in s if v in pos and pos[v] <= end]
            spans.append((min(hs), max(hs)) if hs else None)
        idx = [j for j in range(len(sets)) if spans[j]]
        for size in range(len(idx), best, -1):
            for combo in itertools.combinations(idx, size):
                iv = sorted(spans[j] for j in combo)
                if all(iv[i][1] < iv[i + 1][0] for i in range(len(iv) - 1)):
                    best = max(best, size)
                    break
            if best >= size:
                break
    return best


def test_private_interval_examples():
    g = path_graph(9)
    p = list(range(9))
    out = private_intervals(g, p, [{3}], 5)
    assert out.chosen == (0,) and out.intervals == ((0, 8),)
    blocks = [{0, 1}, {3, 4}, {6, 7}]
    out = private_intervals(g, p, blocks, 5)
    assert len(out.chosen) == 3 and verify_private_intervals(p, blocks, out)
    nested = [{0, 8}, {2, 6}, {4}]
    out = private_intervals(g, p, nested, 3)
    assert verify_private_intervals(p, nested, out)


def test_private_intervals_random():
    rng = seeded(21)
    for _ in range(100):
        n = rng.randint(3, 12)
        p = list(range(n))
        g = path_graph(n)
        sets = [frozenset(rng.sample(p, rng.randint(1, 3))) for _ in range(rng.randint(1, 6))]
        out = private_intervals(g, p, sets, len(sets))
        assert verify_private_intervals(p, sets, out)
        assert 1 <= len(out.chosen) <= _max_private_brute(p, sets)


def test_extract_ladder_from_grid_with_chord():
    g = grid(2, 5).add_edges([(1, 8)])
    rows = [list(range(5)), list(range(5, 10))]
    cols = [{j, 5 + j} for j in range(5)]
    lad, m = extract_ladder(g, rows, cols)
    assert validate_ladder(lad) and validate_model(m)
    assert m.pattern == lad.graph and lad.k == 2


def test_extract_ladder_single_row():
    g = path_graph(6)
    lad, m = extract_ladder(g, [list(range(6))], [{0, 1}, {3}, {5}])
    assert lad.columns == 3 and validate_model(m)


def test_extract_ladder_rejects_bad_input():
    g = grid(2, 3)
    with pytest.raises(InvalidInput):
        extract_ladder(g, [[0, 1, 2], [2, 5]], [{0, 3}])
    with pytest.raises(InvalidInput):
        extract_ladder(g, [[0, 1, 2], [3, 4, 5]], [{0}])
