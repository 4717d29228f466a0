"""Slow reference implementations used only by the tests.

They follow the definitions literally on small graphs and share no code with
the package beyond the Graph container.
"""
from __future__ import annotations

import itertools
import random
from functools import lru_cache

from kladder.graph import Graph


def _key(g):
    return (frozenset(g.vertices), frozenset(g.edges))


def _components(vertices, edges):
    adj = {v: set() for v in vertices}
    for a, b in edges:
        adj[a].add(b)
        adj[b].add(a)
    seen, out = set(), []
    for v in sorted(vertices):
        if v in seen:
            continue
        comp, stack = {v}, [v]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in comp:
                    comp.add(y)
                    stack.append(y)
        seen |= comp
        out.append(frozenset(comp))
    return out


def _sub(vertices, edges, keep):
    keep = frozenset(keep)
    return keep, frozenset(e for e in edges if e[0] in keep and e[1] in keep)


def td_k_brute(g, k):
    """Smallest value obeying: empty -> 0, components -> max, (<k)-clique-sums -> max, deletion -> +1."""
    k = min(k, max(g.n, 1))
    return _tdk(frozenset(g.vertices), frozenset(g.edges), k)


@lru_cache(maxsize=None)
def _tdk(vertices, edges, k):
    if not vertices:
        return 0
    comps = _components(vertices, edges)
    if len(comps) > 1:
        return max(_tdk(*_sub(vertices, edges, c), k) for c in comps)
    best = 1 + min(_tdk(*_sub(vertices, edges, vertices - {v}), k) for v in vertices)
    order = sorted(vertices)
    for size in range(k):
        for sep in itertools.combinations(order, size):
            sep = frozenset(sep)
            rest = _components(*_sub(vertices, edges, vertices - sep))
            if len(rest) < 2:
                continue
            clique = frozenset((a, b) for a, b in itertools.combinations(sorted(sep), 2))
            # split the components into two nonempty groups; the first group holds rest[0]
            for mask in range(0, 1 << (len(rest) - 1)):
                left = rest[0].union(*(rest[i + 1] for i in range(len(rest) - 1) if mask >> i & 1))
                right = vertices - sep - left
                if not right:
                    continue
                parts = []
                for side in (left, right):
                    vs, es = _sub(vertices, edges, side | sep)
                    parts.append(_tdk(vs, es | clique, k))
                best = min(best, max(parts))
    return best


def treewidth_brute(g):
    """Minimum over all elimination orders of the largest later-neighbourhood."""
    if g.n == 0:
        return -1
    best = g.n - 1
    verts = g.sorted_vertices()
    for order in itertools.permutations(verts):
        adj = {v: set(g.neighbors(v)) for v in verts}
        width = 0
        for v in order:
            nb = adj.pop(v)
            width = max(width, len(nb))
            for a in nb:
                adj[a] |= nb - {a}
                adj[a].discard(v)
            if width >= best:
                break
        best = min(best, width)
    return best


def treedepth_brute(g):
    return _td(frozenset(g.vertices), frozenset(g.edges))


@lru_cache(maxsize=None)
def _td(vertices, edges):
    if not vertices:
        return 0
    comps = _components(vertices, edges)
    if len(comps) > 1:
        return max(_td(*_sub(vertices, edges, c)) for c in comps)
    return 1 + min(_td(*_sub(vertices, edges, vertices - {v})) for v in vertices)


def vertex_cover_brute(g):
    verts = g.sorted_vertices()
    for size in range(g.n + 1):
        for xs in itertools.combinations(verts, size):
            xs = set(xs)
            if all(a in xs or b in xs for a, b in g.edges):
                return size
    return g.n


def _is_forest(vertices, edges):
    return len(edges) == len(vertices) - len(_components(vertices, edges))


def feedback_vertex_set_brute(g):
    verts = g.sorted_vertices()
    for size in range(g.n + 1):
        for xs in itertools.combinations(verts, size):
            if _is_forest(*_sub(g.vertices, g.edges, g.vertices - set(xs))):
                return size
    return g.n


def max_component_brute(g):
    return max((len(c) for c in _components(g.vertices, g.edges)), default=0)


def _biconnected(vertices, edges):
    if len(_components(vertices, edges)) != 1:
        return False
    if len(vertices) <= 2:
        return True
    return all(len(_components(*_sub(vertices, edges, vertices - {v}))) == 1 for v in vertices)


def max_block_brute(g):
    """Largest vertex set inducing a connected subgraph without a cut vertex."""
    best = 0
    verts = g.sorted_vertices()
    for size in range(1, g.n + 1):
        for xs in itertools.combinations(verts, size):
            if _biconnected(*_sub(g.vertices, g.edges, xs)):
                best = size
                break
    return best


def min_separator_brute(g, z1, z2):
    """Size of a smallest vertex set (terminals allowed) meeting every z1-z2 path."""
    verts = g.sorted_vertices()
    for size in range(g.n + 1):
        for xs in itertools.combinations(verts, size):
            xs = set(xs)
            keep = g.vertices - xs
            comps = _components(*_sub(g.vertices, g.edges, keep))
            if not any(c & (set(z1) - xs) and c & (set(z2) - xs) for c in comps):
                return size
    return g.n


def projection_brute(d, vs):
    return frozenset(x for x, b in d.bags.items() if b & set(vs))


def disjoint_projections_exist(d, fam, count):
    projs = [projection_brute(d, m) for m in fam]
    for combo in itertools.combinations(range(len(projs)), count):
        if all(not (projs[i] & projs[j]) for i, j in itertools.combinations(combo, 2)):
            return True
    return False


def is_minor_brute(h, g):
    """Some sequence of deletions and contractions turns g into a graph isomorphic to h."""
    from kladder.graph import canonical_form

    target = canonical_form(h.compact()[0])
    seen = set()
    stack = [g]
    while stack:
        cur = stack.pop()
        key = canonical_form(cur.compact()[0])
        if key in seen or cur.n < h.n or cur.m < h.m:
            continue
        seen.add(key)
        if cur.n == h.n and key == target:
            return True
        for v in cur.sorted_vertices():
            stack.append(cur.remove_vertex(v))
        for e in sorted(cur.edges):
            stack.append(cur.remove_edges([e]))
            stack.append(cur.contract_edge(*e))
    return False


# random instances

def random_graph(rng, n, p):
    return Graph(range(n), [(a, b) for a in range(n) for b in range(a + 1, n) if rng.random() < p])


def random_connected_graph(rng, n, p):
    while True:
        g = random_graph(rng, n, p)
        if g.is_connected():
            return g


def random_minor(rng, g, steps):
    h = g
    for _ in range(steps):
        choice = rng.random()
        if h.n <= 1:
            break
        if choice < 0.35 and h.m:
            a, b = rng.choice(sorted(h.edges))
            h = h.contract_edge(a, b)
        elif choice < 0.7 and h.m:
            h = h.remove_edges([rng.choice(sorted(h.edges))])
        else:
            h = h.remove_vertex(rng.choice(h.sorted_vertices()))
    return h


def partial_two_tree(rng, n, keep=0.8):
    """A random subgraph of a 2-tree on n >= 2 vertices, with its width-2 decomposition."""
    from kladder.decomp import TreeDecomposition

    edges = {(0, 1)}
    bags = {0: {0, 1}}
    tree_edges = []
    cliques = [(0, 1, 0)]
    for v in range(2, n):
        a, b, node = rng.choice(cliques)
        new = len(bags)
        bags[new] = {a, b, v}
        tree_edges.append((node, new))
        edges |= {(a, v), (b, v)}
        cliques += [(a, v, new), (b, v, new)]
    kept = [e for e in sorted(edges) if rng.random() < keep]
    return Graph(range(n), kept), TreeDecomposition(tree_edges, bags)


def random_connected_subset(rng, g, size):
    start = rng.choice(g.sorted_vertices())
    out = {start}
    while len(out) < size:
        frontier = sorted(g.neighborhood(out) - out) if out else []
        if not frontier:
            break
        out.add(rng.choice(frontier))
    return frozenset(out)


def seeded(seed):
    return random.Random(seed)
