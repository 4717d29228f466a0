"""Immutable simple graphs with stable integer vertex identities.

Besides the :class:`Graph` value type this module holds the generators used
throughout the package (paths, grids, products, labelled trees), a canonical
form for isomorphism-invariant memoization, and elementary structure such as
components, blocks and vertex projections.
"""
from __future__ import annotations

import itertools
import json
from functools import lru_cache

from .errors import InvalidInput, check_size

CANON_LIMIT = 16


class Graph:
    """Finite simple undirected graph.

    Vertices are non-negative integers. Deleting vertices never renumbers the
    survivors, so decompositions and models can refer to the same identities
    across derived graphs.
    """

    __slots__ = ("_adj", "_edges")

    def __init__(self, vertices=(), edges=()):
        adj = {}
        for v in vertices:
            if not isinstance(v, int) or isinstance(v, bool) or v < 0:
                raise InvalidInput(f"vertex identities must be non-negative integers, got {v!r}")
            adj[v] = set()
        for e in edges:
            u, v = e
            if u == v:
                raise InvalidInput(f"self-loop at {u}")
            if u not in adj or v not in adj:
                raise InvalidInput(f"edge {u}-{v} uses an undeclared vertex")
            adj[u].add(v)
            adj[v].add(u)
        self._adj = {v: frozenset(nb) for v, nb in adj.items()}
        self._edges = None

    @classmethod
    def _from_adj(cls, adj):
        g = cls.__new__(cls)
        g._adj = adj
        g._edges = None
        return g

    # basic accessors

    @property
    def vertices(self):
        return frozenset(self._adj)

    def sorted_vertices(self):
        return sorted(self._adj)

    @property
    def edges(self):
        if self._edges is None:
            self._edges = tuple(sorted((u, v) for u, nb in self._adj.items() for v in nb if u < v))
        return self._edges

    @property
    def n(self):
        return len(self._adj)

    @property
    def m(self):
        return sum(len(nb) for nb in self._adj.values()) // 2

    def __len__(self):
        return len(self._adj)

    def __contains__(self, v):
        return v in self._adj

    def __iter__(self):
        return iter(sorted(self._adj))

    def neighbors(self, v):
        return self._adj[v]

    def degree(self, v):
        return len(self._adj[v])

    def has_edge(self, u, v):
        return u in self._adj and v in self._adj[u]

    def neighborhood(self, vs):
        """Open neighbourhood N(U): vertices outside U adjacent to U."""
        vs = set(vs)
        out = set()
        for v in vs:
            out |= self._adj[v]
        return frozenset(out - vs)

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self._adj == other._adj

    def __hash__(self):
        return hash((self.vertices, self.edges))

    def __repr__(self):
        return f"Graph(vertices={self.sorted_vertices()}, edges={list(self.edges)})"

    # derived graphs

    def induced(self, vs):
        vs = frozenset(vs)
        missing = vs - self._adj.keys()
        if missing:
            raise InvalidInput(f"vertices {sorted(missing)} not in graph")
        return Graph._from_adj({v: self._adj[v] & vs for v in vs})

    def remove_vertices(self, xs):
        return self.induced(self.vertices - frozenset(xs))

    def remove_vertex(self, v):
        return self.remove_vertices((v,))

    def add_edges(self, pairs):
        return Graph(self._adj, itertools.chain(self.edges, pairs))

    def remove_edges(self, pairs):
        drop = {frozenset(p) for p in pairs}
        return Graph(self._adj, (e for e in self.edges if frozenset(e) not in drop))

    def add_clique(self, vs):
        return self.add_edges(itertools.combinations(sorted(vs), 2))

    def add_vertices(self, vs):
        return Graph(itertools.chain(self._adj, vs), self.edges)

    def contract_edge(self, u, v):
        """Contract uv, keeping the identity u."""
        if not self.has_edge(u, v):
            raise InvalidInput(f"{u}-{v} is not an edge")
        edges = []
        for a, b in self.edges:
            a = u if a == v else a
            b = u if b == v else b
            if a != b:
                edges.append((a, b))
        return Graph(self.vertices - {v}, set(map(lambda e: (min(e), max(e)), edges)))

    def relabel(self, mapping):
        return Graph((mapping[v] for v in self._adj), ((mapping[u], mapping[v]) for u, v in self.edges))

    def compact(self):
        """Relabel to 0..n-1 in increasing identity order; returns (graph, old->new)."""
        order = self.sorted_vertices()
        pos = {v: i for i, v in enumerate(order)}
        return self.relabel(pos), pos

    def is_connected(self):
        return len(connected_components(self)) <= 1

    # serialisation

    def to_dict(self):
        verts = self.sorted_vertices()
        d = {"n": len(verts)}
        if verts != list(range(len(verts))):
            d["vertices"] = verts
        d["edges"] = [list(e) for e in self.edges]
        return d

    @classmethod
    def from_dict(cls, d):
        if not isinstance(d, dict) or "n" not in d:
            raise InvalidInput("graph JSON needs an 'n' field")
        n = d["n"]
        verts = d.get("vertices", list(range(n)))
        if len(verts) != n or len(set(verts)) != n:
            raise InvalidInput("'vertices' must list n distinct identities")
        edges = d.get("edges", [])
        for e in edges:
            if len(e) != 2:
                raise InvalidInput(f"malformed edge {e!r}")
        return cls(verts, (tuple(e) for e in edges))

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_json(cls, text):
        try:
            return cls.from_dict(json.loads(text))
        except json.JSONDecodeError as exc:
            raise InvalidInput(f"bad graph JSON: {exc}") from None

    def to_edge_list(self):
        compacted, _ = self.compact()
        lines = [f"{compacted.n} {compacted.m}"]
        lines += [f"{u} {v}" for u, v in compacted.edges]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_edge_list(cls, text):
        rows = [ln.split() for ln in text.splitlines() if ln.strip()]
        try:
            n, m = map(int, rows[0])
            edges = [tuple(map(int, r)) for r in rows[1:]]
        except (IndexError, ValueError):
            raise InvalidInput("edge list must start with 'n m' followed by 'u v' lines") from None
        if len(edges) != m or any(len(e) != 2 for e in edges):
            raise InvalidInput(f"expected {m} edges")
        return cls(range(n), edges)

    def to_dot(self, name="G", labels=None):
        lines = [f"graph {name} {{"]
        for v in self.sorted_vertices():
            label = labels.get(v, v) if labels else v
            lines.append(f'  {v} [label="{label}"];')
        for u, v in self.edges:
            lines.append(f"  {u} -- {v};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def parse_graph(text):
    """Parse either the JSON or the plain edge-list format."""
    stripped = text.lstrip()
    if stripped.startswith("{"):
        return Graph.from_json(text)
    return Graph.from_edge_list(text)


# generators

def empty_graph(n=0):
    return Graph(range(n))


def complete_graph(n):
    return Graph(range(n), itertools.combinations(range(n), 2))


def path_graph(length):
    if length < 1:
        raise InvalidInput("path length must be at least 1")
    return Graph(range(length), ((i, i + 1) for i in range(length - 1)))


def cycle_graph(n):
    if n < 3:
        raise InvalidInput("a cycle needs at least 3 vertices")
    return Graph(range(n), [(i, (i + 1) % n) for i in range(n)])


def star_graph(leaves):
    return Graph(range(leaves + 1), ((0, i) for i in range(1, leaves + 1)))


def product_vertex(u1, u2, g2):
    """Identity of (u1, u2) in ``cartesian_product(g1, g2)``."""
    return u1 * _radix(g2) + u2


def product_coords(w, g2):
    return divmod(w, _radix(g2))


def _radix(g2):
    return max(g2.vertices, default=-1) + 1


def cartesian_product(g1, g2):
    """Cartesian product; (u1, u2) is encoded as ``u1 * (max V(g2) + 1) + u2``."""
    r = _radix(g2)
    verts = [u1 * r + u2 for u1 in g1.sorted_vertices() for u2 in g2.sorted_vertices()]
    edges = []
    for u1 in g1.sorted_vertices():
        for a, b in g2.edges:
            edges.append((u1 * r + a, u1 * r + b))
    for a, b in g1.edges:
        for u2 in g2.sorted_vertices():
            edges.append((a * r + u2, b * r + u2))
    return Graph(verts, edges)


def grid(k, length):
    """k x length grid; vertex (i, j) (0-indexed) has identity i * length + j."""
    return cartesian_product(path_graph(k), path_graph(length))


def prufer_to_tree(seq, k):
    degree = [1] * k
    for x in seq:
        degree[x] += 1
    edges = []
    for x in seq:
        leaf = min(i for i in range(k) if degree[i] == 1)
        edges.append((min(leaf, x), max(leaf, x)))
        degree[leaf] -= 1
        degree[x] -= 1
    u, v = [i for i in range(k) if degree[i] == 1]
    edges.append((u, v))
    return Graph(range(k), edges)


def enumerate_labelled_trees(k):
    """All k^(k-2) labelled trees on {0..k-1}, in Pruefer-sequence order."""
    if not 1 <= k <= 8:
        raise InvalidInput("enumerate_labelled_trees supports 1 <= k <= 8")
    if k == 1:
        return [Graph([0])]
    if k == 2:
        return [Graph([0, 1], [(0, 1)])]
    return [prufer_to_tree(seq, k) for seq in itertools.product(range(k), repeat=k - 2)]


def is_tree(g):
    return g.n >= 1 and g.m == g.n - 1 and g.is_connected()


def unlabelled_trees(k):
    """One representative per isomorphism class of trees on k vertices."""
    if k < 1:
        raise InvalidInput("trees need at least one vertex")
    return list(_unlabelled_trees(k))


@lru_cache(maxsize=None)
def _unlabelled_trees(k):
    if k <= 2:
        trees = enumerate_labelled_trees(k)
    else:
        # every tree is a smaller tree plus a leaf
        trees = []
        for t in _unlabelled_trees(k - 1):
            for v in t.sorted_vertices():
                trees.append(t.add_vertices([k - 1]).add_edges([(v, k - 1)]))
    seen = {}
    for t in trees:
        seen.setdefault(canonical_form(t), t)
    return tuple(seen[key] for key in sorted(seen))


def all_graphs(n):
    """One representative per isomorphism class of graphs on n vertices."""
    check_size(n, 9, "all_graphs")
    return list(_all_graphs(n))


@lru_cache(maxsize=None)
def _all_graphs(n):
    if n == 0:
        return (Graph(),)
    out = {}
    for g in _all_graphs(n - 1):
        for r in range(n):
            for nbrs in itertools.combinations(range(n - 1), r):
                h = Graph(range(n), list(g.edges) + [(u, n - 1) for u in nbrs])
                out.setdefault(canonical_form(h), h)
    return tuple(out[key] for key in sorted(out))


# canonical form

def to_bits(g):
    """Return (sorted vertex list, tuple of adjacency bitmasks over positions)."""
    order = g.sorted_vertices()
    pos = {v: i for i, v in enumerate(order)}
    adj = tuple(sum(1 << pos[w] for w in g.neighbors(v)) for v in order)
    return order, adj


def canonical_form(g):
    """Byte-string key; equal keys iff the graphs are isomorphic."""
    return canonical_labelling(g)[0]


def canonical_labelling(g):
    """Return (key, order) where order[i] is the vertex placed at canonical position i."""
    check_size(g.n, CANON_LIMIT, "canonical_form")
    order, adj = to_bits(g)
    key, perm = canon_bits(adj)
    return key, tuple(order[i] for i in perm)


def key_to_bits(key):
    n = key[0]
    w = _row_width(n)
    return tuple(int.from_bytes(key[1 + i * w:1 + (i + 1) * w], "little") for i in range(n))


def key_to_graph(key):
    adj = key_to_bits(key)
    n = len(adj)
    return Graph(range(n), ((i, j) for i in range(n) for j in range(i + 1, n) if adj[i] >> j & 1))


def _row_width(n):
    return max(1, (n + 7) // 8)


def _encode(adj, perm):
    n = len(adj)
    inv = [0] * n
    for i, v in enumerate(perm):
        inv[v] = i
    rows = []
    for v in perm:
        row = 0
        a = adj[v]
        while a:
            low = a & -a
            row |= 1 << inv[low.bit_length() - 1]
            a ^= low
        rows.append(row)
    return tuple(rows)


@lru_cache(maxsize=1 << 22)
def canon_bits(adj):
    """Canonical (key, perm) for a bitmask graph; perm[i] = original position at slot i."""
    n = len(adj)
    comps = bit_components(adj, (1 << n) - 1)
    if len(comps) > 1:
        parts = []
        for mask in comps:
            idx = [i for i in range(n) if mask >> i & 1]
            sub = sub_bits(adj, idx)
            _, p = canon_bits(sub)
            rows = _encode(sub, p)
            parts.append((len(idx), rows, [idx[j] for j in p]))
        parts.sort(key=lambda t: (t[0], t[1]))
        perm = tuple(v for _, _, order in parts for v in order)
    else:
        perm = _canon_connected(adj)
    rows = _encode(adj, perm)
    w = _row_width(n)
    key = bytes([n]) + b"".join(r.to_bytes(w, "little") for r in rows)
    return key, perm


def _refine(adj, colors):
    n = len(adj)
    ncolors = len(set(colors))
    while True:
        sigs = []
        for v in range(n):
            a = adj[v]
            nb = []
            while a:
                low = a & -a
                nb.append(colors[low.bit_length() - 1])
                a ^= low
            nb.sort()
            sigs.append((colors[v], tuple(nb)))
        distinct = sorted(set(sigs))
        rank = {s: i for i, s in enumerate(distinct)}
        colors = [rank[s] for s in sigs]
        if len(distinct) == ncolors:
            return colors
        ncolors = len(distinct)


def _canon_connected(adj):
    n = len(adj)
    if n <= 1:
        return tuple(range(n))
    full = (1 << n) - 1
    twin = [[(adj[u] & ~(1 << v) & full) == (adj[v] & ~(1 << u) & full) for v in range(n)] for u in range(n)]
    best = [None, None]

    def search(colors):
        colors = _refine(adj, colors)
        cells = {}
        for v, c in enumerate(colors):
            cells.setdefault(c, []).append(v)
        if len(cells) == n:
            perm = sorted(range(n), key=colors.__getitem__)
            rows = _encode(adj, perm)
            if best[0] is None or rows < best[0]:
                best[0] = rows
                best[1] = tuple(perm)
            return
        cell = next(cells[c] for c in sorted(cells) if len(cells[c]) > 1)
        tried = []
        for v in cell:
            if any(twin[u][v] for u in tried):
                continue
            tried.append(v)
            nxt = [2 * c + 1 for c in colors]
            nxt[v] -= 1
            search(nxt)

    search([bin(a).count("1") for a in adj])
    return best[1]


# bitmask helpers shared by the exact solvers

def sub_bits(adj, idx):
    """Induced bitmask graph on the positions listed in idx (compacted, in that order)."""
    pos = {v: i for i, v in enumerate(idx)}
    out = []
    for v in idx:
        a = adj[v]
        row = 0
        for w, i in pos.items():
            if a >> w & 1:
                row |= 1 << i
        out.append(row)
    return tuple(out)


def bit_components(adj, mask):
    comps = []
    rest = mask
    while rest:
        low = rest & -rest
        comp = low
        frontier = low
        while frontier:
            low2 = frontier & -frontier
            frontier ^= low2
            new = adj[low2.bit_length() - 1] & mask & ~comp
            comp |= new
            frontier |= new
        comps.append(comp)
        rest &= ~comp
    return comps


def bits_of(mask):
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


# structure

def connected_components(g, within=None):
    """Components of g (or of g[within]) as a sorted list of frozensets."""
    verts = g.vertices if within is None else frozenset(within)
    seen = set()
    comps = []
    for s in sorted(verts):
        if s in seen:
            continue
        comp = {s}
        stack = [s]
        while stack:
            v = stack.pop()
            for w in g.neighbors(v):
                if w in verts and w not in comp:
                    comp.add(w)
                    stack.append(w)
        seen |= comp
        comps.append(frozenset(comp))
    return comps


def component_of(g, u, removed=()):
    removed = frozenset(removed)
    comp = {u}
    stack = [u]
    while stack:
        v = stack.pop()
        for w in g.neighbors(v):
            if w not in removed and w not in comp:
                comp.add(w)
                stack.append(w)
    return frozenset(comp)


def is_connected_set(g, vs):
    vs = frozenset(vs)
    return bool(vs) and len(connected_components(g, vs)) == 1


def blocks(g):
    """Maximal 2-connected pieces, bridges and isolated vertices, as frozensets."""
    index = {}
    low = {}
    out = []
    counter = [0]
    for root in g.sorted_vertices():
        if root in index:
            continue
        if g.degree(root) == 0:
            index[root] = counter[0]
            counter[0] += 1
            out.append(frozenset([root]))
            continue
        index[root] = low[root] = counter[0]
        counter[0] += 1
        edge_stack = []
        stack = [(root, None, iter(sorted(g.neighbors(root))))]
        while stack:
            v, parent, it = stack[-1]
            advanced = False
            for w in it:
                if w == parent:
                    continue
                if w not in index:
                    index[w] = low[w] = counter[0]
                    counter[0] += 1
                    edge_stack.append((v, w))
                    stack.append((w, v, iter(sorted(g.neighbors(w)))))
                    advanced = True
                    break
                if index[w] < index[v]:
                    edge_stack.append((v, w))
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            stack.pop()
            if parent is not None:
                low[parent] = min(low[parent], low[v])
                if low[v] >= index[parent]:
                    comp = set()
                    while True:
                        a, b = edge_stack.pop()
                        comp.update((a, b))
                        if (a, b) == (parent, v):
                            break
                    out.append(frozenset(comp))
    return sorted(out, key=lambda b: (sorted(b), len(b)))


def vertex_projection(g, x_set, u):
    """{u} if u lies in X, otherwise the neighbourhood of u's component in G - X."""
    if u not in g:
        raise InvalidInput(f"vertex {u} not in graph")
    x_set = frozenset(x_set)
    if u in x_set:
        return frozenset([u])
    return g.neighborhood(component_of(g, u, x_set))


def set_projection(g, x_set, vs):
    out = set()
    for u in vs:
        out |= vertex_projection(g, x_set, u)
    return frozenset(out)


# paths

def is_path(g, seq):
    seq = list(seq)
    if not seq or len(set(seq)) != len(seq):
        return False
    if any(v not in g for v in seq):
        return False
    return all(g.has_edge(a, b) for a, b in zip(seq, seq[1:]))


def subpath(seq, u, v, open_left=False, open_right=False):
    """P[u,v] with optional open ends, as in P]u,v]."""
    seq = list(seq)
    i, j = seq.index(u), seq.index(v)
    if i > j:
        raise InvalidInput(f"{u} occurs after {v} on the path")
    return tuple(seq[i + open_left:j + 1 - open_right])


def is_path_partition(g, parts):
    seen = set()
    where = {}
    for i, part in enumerate(parts):
        if not part or seen & set(part):
            return False
        seen |= set(part)
        for v in part:
            where[v] = i
    if seen != set(g.vertices):
        return False
    return all(abs(where[u] - where[v]) <= 1 for u, v in g.edges)


def clique_sum_parts_bits(adj, smask):
    """Split at separator smask, one component at a time.

    Returns a list of (positions, child adjacency) where positions lists the
    parent positions of the child (sorted) and the child is
    G[S u C] with S made into a clique. Empty when G - S is connected.
    """
    n = len(adj)
    full = (1 << n) - 1
    comps = bit_components(adj, full & ~smask)
    if len(comps) < 2:
        return []
    clique = [adj[v] | smask & ~(1 << v) if smask >> v & 1 else adj[v] for v in range(n)]
    out = []
    for comp in comps:
        idx = bits_of(comp | smask)
        out.append((idx, sub_bits(clique, idx)))
    return out


def popcount(x):
    return bin(x).count("1")


def degeneracy_bits(adj):
    n = len(adj)
    alive = (1 << n) - 1
    best = 0
    while alive:
        v = min(bits_of(alive), key=lambda u: popcount(adj[u] & alive))
        best = max(best, popcount(adj[v] & alive))
        alive &= ~(1 << v)
    return best
