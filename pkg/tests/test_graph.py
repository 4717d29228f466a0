import json
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kladder.errors import InvalidInput, SizeLimitError
from kladder.graph import (
    Graph,
    all_graphs,
    canonical_form,
    cartesian_product,
    complete_graph,
    connected_components,
    cycle_graph,
    enumerate_labelled_trees,
    grid,
    is_path,
    is_tree,
    parse_graph,
    path_graph,
    product_vertex,
    star_graph,
    unlabelled_trees,
)


@st.composite
def graphs(draw, max_n=7):
    n = draw(st.integers(0, max_n))
    pairs = [(a, b) for a in range(n) for b in range(a + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True) if pairs else st.just([]))
    return Graph(range(n), chosen)


def test_graph_rejects_loops_and_foreign_endpoints():
    with pytest.raises(InvalidInput):
        Graph([0, 1], [(0, 0)])
    with pytest.raises(InvalidInput):
        Graph([0, 1], [(0, 2)])


def test_json_and_edge_list_round_trip():
    g = Graph([0, 1, 2, 5], [(0, 1), (1, 5)])
    assert Graph.from_json(g.to_json()) == g
    assert parse_graph(g.to_json()) == g
    h = cycle_graph(5)
    assert parse_graph(h.to_edge_list()) == h
    assert json.loads(h.to_json())["n"] == 5


def test_bad_text_is_rejected():
    with pytest.raises(InvalidInput):
        parse_graph("not a graph")


def test_product_ids_and_grid_shape():
    g = grid(3, 4)
    assert g.n == 12 and g.m == 3 * 3 + 2 * 4
    assert g.has_edge(0 * 4 + 1, 0 * 4 + 2)
    assert g.has_edge(1 * 4 + 3, 2 * 4 + 3)
    assert product_vertex(2, 3, path_graph(4)) == 11
    assert canonical_form(cartesian_product(path_graph(3), path_graph(4))) == canonical_form(g)


def test_small_generators():
    assert path_graph(1).n == 1 and path_graph(1).m == 0
    assert star_graph(4).degree(0) == 4
    assert complete_graph(5).m == 10


def test_isomorphism_class_counts():
    # number of graphs on n vertices up to isomorphism (well known sequence)
    assert [len(all_graphs(n)) for n in range(8)] == [1, 1, 2, 4, 11, 34, 156, 1044]


def test_tree_counts():
    assert [len(unlabelled_trees(k)) for k in range(1, 11)] == [1, 1, 1, 2, 3, 6, 11, 23, 47, 106]
    # Cayley: k^(k-2) labelled trees
    assert [len(list(enumerate_labelled_trees(k))) for k in range(2, 7)] == [1, 3, 16, 125, 1296]
    assert all(is_tree(t) for t in unlabelled_trees(8))


def test_size_caps(monkeypatch):
    with pytest.raises(SizeLimitError):
        all_graphs(10)
    monkeypatch.setenv("KLADDER_MAX_N", "10")
    # the override lifts the cap; only check that the guard no longer fires
    from kladder.errors import check_size

    check_size(10, 9, "probe")


@settings(max_examples=60, deadline=None)
@given(graphs(), st.randoms(use_true_random=False))
def test_canonical_form_ignores_labels(g, rnd):
    perm = g.sorted_vertices()
    rnd.shuffle(perm)
    h = g.relabel(dict(zip(g.sorted_vertices(), perm)))
    assert canonical_form(h) == canonical_form(g)


@settings(max_examples=60, deadline=None)
@given(graphs())
def test_components_partition_vertices(g):
    comps = connected_components(g)
    assert sum(len(c) for c in comps) == g.n
    assert frozenset().union(*comps) == g.vertices if comps else g.n == 0
    for c in comps:
        assert not (g.neighborhood(c) - c)


def test_canonical_form_separates_non_isomorphic():
    keys = {canonical_form(g) for g in all_graphs(6)}
    assert len(keys) == 156


def test_is_path():
    g = cycle_graph(5)
    assert is_path(g, (0, 1, 2))
    assert not is_path(g, (0, 2))
    assert not is_path(g, (0, 1, 0))


def test_random_relabel_keeps_edges():
    rng = random.Random(1)
    g = grid(2, 3)
    perm = list(range(6))
    rng.shuffle(perm)
    h = g.relabel(dict(enumerate(perm)))
    assert h.m == g.m
