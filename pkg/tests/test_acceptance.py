"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest -s tests/test_acceptance.py`` or ``python3 tests/test_acceptance.py``.
"""
import itertools
import math
import os
import sys

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from kladder.decomp import Disjoint, helly_cover, verify_helly  # noqa: E402
from kladder.graph import all_graphs, canonical_form, grid, path_graph, unlabelled_trees  # noqa: E402
from kladder.minors import (  # noqa: E402
    erdos_szekeres,
    extract_ladder,
    validate_ladder,
    validate_model,
    verify_monotone,
)
from kladder.nicepair import (  # noqa: E402
    is_nice_pair,
    lift_paths_from_torso,
    pair_from_decomposition,
    project_paths_to_torso,
    torso,
)
from kladder.params import k_treedepth, p_regex, treedepth_oracle, treewidth_oracle  # noqa: E402
from kladder.refine import (  # noqa: E402
    good_gs_decomposition,
    max_disjoint_paths,
    potential,
    unbreakable_decomposition,
    verify_good,
    verify_unbreakable,
)
from kladder.sigma import INF  # noqa: E402
from kladder.slide import grid_in_ladder, path_sliding_in_tree, validate_sliding  # noqa: E402

from oracles import (  # noqa: E402
    disjoint_projections_exist,
    feedback_vertex_set_brute,
    is_minor_brute,
    max_block_brute,
    max_component_brute,
    min_separator_brute,
    partial_two_tree,
    random_connected_graph,
    random_connected_subset,
    random_graph,
    random_minor,
    seeded,
    treedepth_brute,
    treewidth_brute,
    vertex_cover_brute,
)


def corpus(max_n=7):
    return [g for n in range(max_n + 1) for g in all_graphs(n)]


def td(g, k):
    return k_treedepth(g, k, witness=False)[0]


def check_1():
    graphs = corpus()
    for g in graphs:
        assert td(g, 1) == treedepth_oracle(g) == treedepth_brute(g), g
    return f"td_1 = treedepth on {len(graphs)} graphs with at most 7 vertices"


def check_2():
    graphs = corpus()
    for g in graphs:
        want = treewidth_oracle(g) + 1
        assert want == treewidth_brute(g) + 1, g
        assert td(g, max(g.n, 1)) == td(g, INF) == want, g
    return f"td_n = td_inf = tw + 1 on {len(graphs)} graphs"


def check_3():
    graphs = corpus()
    for g in graphs:
        chain = [td(g, 1), td(g, 2), td(g, 3), treewidth_oracle(g) + 1]
        assert chain == sorted(chain, reverse=True), (g, chain)
    return f"td_1 >= td_2 >= td_3 >= tw + 1 on {len(graphs)} graphs"


def check_4():
    rng = seeded(4)
    pairs = 0
    while pairs < 200:
        g = random_graph(rng, rng.randint(1, 7), rng.choice([0.3, 0.5, 0.7]))
        h = random_minor(rng, g, rng.randint(1, 4))
        # independent confirmation that h really is a minor
        assert is_minor_brute(h, g)
        for k in (1, 2, 3):
            assert td(h, k) <= td(g, k), (g, h, k)
        pairs += 1
    return f"{pairs} minor pairs, k in 1..3, no violation"


CLOSED_FORMS = {
    "a*": lambda g: g.n,
    "a*s1": max_component_brute,
    "a*s2": max_block_brute,
    "(a s2)*": lambda g: td(g, 2),
    "a*sinf": lambda g: treewidth_brute(g) + 1,
    "a s1 a*": lambda g: vertex_cover_brute(g) + 1,
    "a a s2 a*": lambda g: feedback_vertex_set_brute(g) + 2,
}


def _edgeless_value(regex, g):
    # with no edge the s-letters act alone: the empty graph is free, one a-letter covers the rest
    if regex in ("a s1 a*", "a a s2 a*"):
        return 0 if g.n == 0 else 1
    return CLOSED_FORMS[regex](g)


def check_5():
    graphs = corpus(6)
    for regex, form in CLOSED_FORMS.items():
        for g in graphs:
            want = form(g) if g.m else _edgeless_value(regex, g)
            assert p_regex(g, regex) == want, (regex, g)
    return f"{len(CLOSED_FORMS)} closed forms on {len(graphs)} graphs with at most 6 vertices"


def check_6():
    values = [td(grid(2, length), 2) for length in range(1, 6)]
    assert values == sorted(values), values
    steps = sum(b > a for a, b in zip(values, values[1:]))
    assert steps >= 2, values
    old = os.environ.get("KLADDER_MAX_N")
    os.environ["KLADDER_MAX_N"] = "40"
    try:
        for length in range(1, 32):
            assert td(path_graph(length), 1) == math.ceil(math.log2(length + 1)), length
    finally:
        if old is None:
            del os.environ["KLADDER_MAX_N"]
        else:
            os.environ["KLADDER_MAX_N"] = old
    return f"td_2 of 2 x l grids {values}; td_1(P_l) matches log formula for l <= 31"


def check_7():
    count = 0
    for k in range(1, 6):
        for t in unlabelled_trees(2 * k - 1):
            assert validate_sliding(path_sliding_in_tree(t, k)), (k, t)
            count += 1
    return f"{count} trees on 2k - 1 vertices, k <= 5"


def check_8():
    count = 0
    for k in range(1, 4):
        for length in range(1, 4):
            for t in unlabelled_trees(2 * k - 1):
                model, _ = grid_in_ladder(k, length, t)
                assert validate_model(model), (k, length, t)
                assert canonical_form(model.pattern) == canonical_form(grid(k, length)), (k, length, t)
                count += 1
    return f"{count} grid models for k, l <= 3"


def check_9():
    count = 0
    for r, s in ((2, 2), (3, 3), (4, 3)):
        for perm in itertools.permutations(range((r - 1) * (s - 1) + 1)):
            arm = erdos_szekeres(list(perm), r, s)
            assert arm is not None and verify_monotone(list(perm), arm), (perm, r, s)
            want = r if type(arm).__name__ == "Increasing" else s
            assert len(arm.indices) == want
            count += 1
    return f"{count} permutations"


def check_10():
    rng = seeded(10)
    iterations = 0
    for _ in range(100):
        g = random_connected_graph(rng, rng.randint(1, 10), rng.choice([0.3, 0.5, 0.7]))
        k = rng.choice([2, 3])
        res = unbreakable_decomposition(g, k)
        assert verify_unbreakable(g, k, res.decomposition), (g, k)
        for rec in res.trace:
            assert rec["potential_after"] < rec["potential_before"], rec
        if res.trace:
            assert list(potential(res.decomposition, g.n)) == res.trace[-1]["potential_after"]
        iterations += len(res.trace)
    return f"100 graphs verified, {iterations} iterations all decreasing the potential"


def check_11():
    rng = seeded(11)
    runs = 0
    for _ in range(50):
        g, d = partial_two_tree(rng, rng.randint(3, 8))
        for k, a, t in ((2, 2, 3), (2, 3, 3)):
            res = good_gs_decomposition(g, g.vertices, k, a, t, initial=d)
            assert verify_good(g, g.vertices, k, a, t, res.s, res.decomposition), (g, k, a, t)
            for rec in res.trace:
                assert rec["potential_after"] < rec["potential_before"], rec
            runs += 1
    return f"{runs} good decompositions verified"


def _nice_pairs(rng, wanted, max_n=8):
    out = []
    while len(out) < wanted:
        g = random_graph(rng, rng.randint(3, max_n), 0.45)
        d = unbreakable_decomposition(g, rng.choice([2, 3])).decomposition
        gp = pair_from_decomposition(g, d, [rng.choice(d.nodes)])
        rep, np_ = is_nice_pair(gp)
        if rep and gp.family:
            out.append(np_)
    return out


def _disjoint_paths_ok(g, paths, z1, z2):
    used = set()
    for p in paths:
        if p[0] not in z1 or p[-1] not in z2 or used & set(p):
            return False
        if any(not g.has_edge(a, b) for a, b in zip(p, p[1:])):
            return False
        used |= set(p)
    return True


def check_12():
    rng = seeded(12)
    pairs = 0
    for np_ in _nice_pairs(rng, 50):
        gp = np_.pair
        g, t = gp.graph, torso(gp)
        subsets = [z for i in range(1, 4) for z in itertools.combinations(sorted(gp.u), i)]
        for z1 in subsets:
            for z2 in subsets:
                in_g = max_disjoint_paths(g, z1, z2)
                in_t = max_disjoint_paths(t, z1, z2)
                assert in_g.count == in_t.count == min_separator_brute(t, z1, z2), (gp, z1, z2)
                if len(z1) == len(z2) == in_g.count:
                    traces = project_paths_to_torso(gp, in_g.paths, z1, z2)
                    assert _disjoint_paths_ok(t, traces, set(z1), set(z2))
                    lifted = lift_paths_from_torso(np_, in_t.paths, z1, z2)
                    assert len(lifted) == in_g.count
                    assert _disjoint_paths_ok(g, lifted, set(z1), set(z2))
                pairs += 1
    return f"50 nice pairs, {pairs} Z-pairs agree between graph and torso"


def check_13():
    rng = seeded(13)
    count = 0
    for k in (2, 3):
        for length in range(1, 7):
            for _ in range(5):
                g = grid(k, length)
                n = k * length
                missing = [(a, b) for a in range(n) for b in range(a + 1, n) if not g.has_edge(a, b)]
                g = g.add_edges(rng.sample(missing, min(len(missing), rng.randint(0, 3))))
                rows = [list(range(i * length, (i + 1) * length)) for i in range(k)]
                cols = [{i * length + j for i in range(k)} for j in range(length)]
                lad, model = extract_ladder(g, rows, cols)
                assert validate_ladder(lad) and validate_model(model), (g, k, length)
                assert model.host == g and model.pattern == lad.graph
                assert lad.k == k and lad.columns >= length - 1, (k, length, lad.columns)
                count += 1
    return f"{count} planted grids, every ladder validated with length >= l - 1"


def check_14():
    rng = seeded(14)
    disjoint = 0
    for _ in range(100):
        g, d = partial_two_tree(rng, rng.randint(3, 8), keep=1.0)
        fam = [random_connected_subset(rng, g, rng.randint(1, 3)) for _ in range(rng.randint(0, 5))]
        count = rng.randint(1, 3)
        res = helly_cover(g, d, fam, count)
        assert verify_helly(g, d, fam, count, res)
        if disjoint_projections_exist(d, fam, count):
            assert isinstance(res, Disjoint)
            disjoint += 1
        else:
            assert not isinstance(res, Disjoint)
    return f"100 instances verified, {disjoint} with the disjoint arm"


CHECKS = [check_1, check_2, check_3, check_4, check_5, check_6, check_7,
          check_8, check_9, check_10, check_11, check_12, check_13, check_14]


def test_criterion_1(criterion):
    criterion(1, check_1)


def test_criterion_2(criterion):
    criterion(2, check_2)


def test_criterion_3(criterion):
    criterion(3, check_3)


def test_criterion_4(criterion):
    criterion(4, check_4)


def test_criterion_5(criterion):
    criterion(5, check_5)


def test_criterion_6(criterion):
    criterion(6, check_6)


def test_criterion_7(criterion):
    criterion(7, check_7)


def test_criterion_8(criterion):
    criterion(8, check_8)


def test_criterion_9(criterion):
    criterion(9, check_9)


def test_criterion_10(criterion):
    criterion(10, check_10)


def test_criterion_11(criterion):
    criterion(11, check_11)


def test_criterion_12(criterion):
    criterion(12, check_12)


def test_criterion_13(criterion):
    criterion(13, check_13)


def test_criterion_14(criterion):
    criterion(14, check_14)


if __name__ == "__main__":
    failed = 0
    for number, check in enumerate(CHECKS, 1):
        try:
            print(f"criterion {number}: PASS {check()}", flush=True)
        except Exception as exc:
            failed += 1
            print(f"criterion {number}: FAIL {type(exc).__name__}: {exc}", flush=True)
    sys.exit(1 if failed else 0)
