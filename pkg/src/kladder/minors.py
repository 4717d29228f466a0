"""Minor models, k-ladders, and the extraction of ladders and T x P_l minors."""
from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass

from .decomp import OK, Report
from .errors import InvalidInput, check_size
from .graph import (
    Graph,
    bits_of,
    cartesian_product,
    is_connected_set,
    is_path,
    path_graph,
    to_bits,
    unlabelled_trees,
)


class MinorModel:
    """Branch sets in ``host`` for every vertex of ``pattern``."""

    __slots__ = ("pattern", "host", "branch_sets")

    def __init__(self, pattern, host, branch_sets):
        self.pattern = pattern
        self.host = host
        self.branch_sets = {x: frozenset(b) for x, b in branch_sets.items()}

    def to_dict(self):
        return {
            "pattern": self.pattern.to_dict(),
            "host": self.host.to_dict(),
            "branch_sets": {str(x): sorted(self.branch_sets[x]) for x in sorted(self.branch_sets)},
        }

    @classmethod
    def from_dict(cls, d):
        try:
            return cls(
                Graph.from_dict(d["pattern"]),
                Graph.from_dict(d["host"]),
                {int(x): b for x, b in d["branch_sets"].items()},
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidInput(f"malformed minor model: {exc}") from None

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True)

    def __repr__(self):
        return f"MinorModel({ {x: sorted(b) for x, b in sorted(self.branch_sets.items())} })"


def validate_model(m):
    if set(m.branch_sets) != set(m.pattern.vertices):
        missing = set(m.pattern.vertices) ^ set(m.branch_sets)
        return Report(False, "pattern-vertex", min(missing), "branch sets do not match pattern vertices")
    owner = {}
    for x in sorted(m.branch_sets):
        b = m.branch_sets[x]
        if not b:
            return Report(False, "empty", x, f"branch set of {x} is empty")
        if not b <= m.host.vertices:
            return Report(False, "foreign", x, f"branch set of {x} leaves the host")
        for u in b:
            if u in owner:
                return Report(False, "overlap", (owner[u], x), f"vertex {u} used by {owner[u]} and {x}")
            owner[u] = x
        if not is_connected_set(m.host, b):
            return Report(False, "disconnected", x, f"branch set of {x} is not connected")
    for x, y in m.pattern.edges:
        bx, by = m.branch_sets[x], m.branch_sets[y]
        if not any(m.host.neighbors(u) & by for u in bx):
            return Report(False, "edge", (x, y), f"no host edge realizes {x}-{y}")
    return OK


def identity_model(g):
    return MinorModel(g, g, {v: {v} for v in g})


def compose_models(inner, outer):
    """Model of inner.pattern in outer.host, given inner.host == outer.pattern."""
    return MinorModel(
        inner.pattern,
        outer.host,
        {x: frozenset().union(*(outer.branch_sets[u] for u in b)) for x, b in inner.branch_sets.items()},
    )


# exhaustive model search

def find_minor_model(h, g):
    """A model of h in g, or None when none exists (exhaustive search)."""
    check_size(h.n, 9, "find_minor_model pattern")
    check_size(g.n, 14, "find_minor_model host")
    if h.n > g.n or h.m > g.m:
        return None
    if h.n == 0:
        return MinorModel(h, g, {})
    horder = sorted(h.vertices, key=lambda x: (-h.degree(x), x))
    order = [horder[0]]
    rest = horder[1:]
    while rest:
        placed = set(order)
        nxt = min(rest, key=lambda x: (-len(h.neighbors(x) & placed), -h.degree(x), x))
        order.append(nxt)
        rest.remove(nxt)
    gverts, adj = to_bits(g)
    full = (1 << len(gverts)) - 1
    assigned = {}

    def search(i, avail):
        if i == len(order):
            return True
        x = order[i]
        remaining = len(order) - i - 1
        need = [assigned[y] for y in h.neighbors(x) if y in assigned]
        limit = bin(avail).count("1") - remaining
        for cand in _connected_sets(adj, avail, need, limit):
            assigned[x] = cand
            if search(i + 1, avail & ~cand):
                return True
            del assigned[x]
        return False

    if not search(0, full):
        return None
    return MinorModel(h, g, {x: {gverts[p] for p in bits_of(b)} for x, b in assigned.items()})


def _connected_sets(adj, allowed, must_touch, limit):
    """Connected subsets of ``allowed`` (size <= limit) adjacent to every mask in must_touch,
    smallest first."""
    if limit < 1:
        return []
    nbhd = []
    for m in must_touch:
        nb = 0
        for v in bits_of(m):
            nb |= adj[v]
        if not nb & allowed:
            return []
        nbhd.append(nb)
    out = []
    for root in bits_of(allowed):
        higher = allowed & ~((1 << (root + 1)) - 1)

        def extend(cur, ext, size):
            if all(cur & nb for nb in nbhd):
                out.append(cur)
            if size == limit:
                return
            while ext:
                low = ext & -ext
                ext ^= low
                w = low.bit_length() - 1
                new_ext = ext | (adj[w] & higher & ~cur & ~_closed(adj, cur))
                extend(cur | low, new_ext, size + 1)

        extend(1 << root, adj[root] & higher, 1)
    out.sort(key=lambda s: (bin(s).count("1"), bits_of(s)))
    return out


def _closed(adj, cur):
    nb = cur
    for v in bits_of(cur):
        nb |= adj[v]
    return nb


def has_minor_tree_times_path(g, k, length):
    """First tree T on k vertices (up to isomorphism) with T x P_length a minor of g."""
    check_size(g.n, 14, "has_minor_tree_times_path")
    for t in unlabelled_trees(k):
        pattern = cartesian_product(t, path_graph(length))
        m = find_minor_model(pattern, g)
        if m is not None:
            return t, m
    return None


# k-ladders

@dataclass(frozen=True)
class KLadder:
    """k rows by ``columns`` columns; vertex (i, j) (0-indexed) is i * columns + j."""

    k: int
    columns: int
    graph: Graph

    @property
    def length(self):
        return self.columns - 1

    def vertex(self, i, j):
        return i * self.columns + j

    def row(self, i):
        return [self.vertex(i, j) for j in range(self.columns)]

    def column(self, j):
        return [self.vertex(i, j) for i in range(self.k)]


def validate_ladder(lad):
    g = lad.graph
    if g.vertices != frozenset(range(lad.k * lad.columns)):
        return Report(False, "vertices", None, "vertex set is not [k] x [l]")
    for i in range(lad.k):
        row = lad.row(i)
        want = {(row[j], row[j + 1]) for j in range(len(row) - 1)}
        have = set(g.induced(row).edges)
        if have != want:
            return Report(False, "row", i, f"row {i} is not the path in column order")
    for j in range(lad.columns):
        if not is_connected_set(g, lad.column(j)):
            return Report(False, "column", j, f"column {j} is disconnected")
    return OK


def make_k_ladder(k, length, column_trees):
    """Ladder with ``length`` columns; column j realises column_trees[j] on rows 0..k-1."""
    if len(column_trees) != length:
        raise InvalidInput("need one tree per column")
    edges = []
    for i in range(k):
        edges += [(i * length + j, i * length + j + 1) for j in range(length - 1)]
    for j, t in enumerate(column_trees):
        if t.vertices != frozenset(range(k)) or t.m != k - 1 or not t.is_connected():
            raise InvalidInput(f"column {j} needs a tree on vertices 0..{k - 1}")
        edges += [(a * length + j, b * length + j) for a, b in t.edges]
    return KLadder(k, length, Graph(range(k * length), edges))


def ladder_from_graph(g, k, columns):
    return KLadder(k, columns, g)


def _column_tree(lad, j):
    """Least spanning tree of column j (Kruskal over sorted row-index pairs)."""
    parent = list(range(lad.k))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    cols = lad.column(j)
    pairs = sorted((a, b) for a in range(lad.k) for b in range(a + 1, lad.k) if lad.graph.has_edge(cols[a], cols[b]))
    tree = []
    for a, b in pairs:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb
            tree.append((a, b))
    return tuple(tree)


def tree_times_path_from_ladder(lad, length):
    """Pigeonhole over column spanning trees; returns (T, model of T x P_length in the ladder)."""
    k = lad.k
    need = (k ** (k - 2) if k >= 2 else 1) * (length - 1) + 1
    if lad.columns < need:
        raise InvalidInput(f"ladder has {lad.columns} columns, needs {need}")
    shapes = [_column_tree(lad, j) for j in range(lad.columns)]
    counts = Counter(shapes)
    shape = max(counts, key=lambda s: (counts[s], -shapes.index(s)))
    if counts[shape] < length:
        raise InvalidInput("no column shape repeats often enough")
    chosen = [j for j, s in enumerate(shapes) if s == shape][:length]
    t = Graph(range(k), shape)
    pattern = cartesian_product(t, path_graph(length))
    sets = {}
    for i in range(k):
        for c, j in enumerate(chosen):
            stop = chosen[c + 1] if c + 1 < len(chosen) else j + 1
            sets[i * length + c] = {lad.vertex(i, jj) for jj in range(j, stop)}
    return t, MinorModel(pattern, lad.graph, sets)


# Erdos-Szekeres and trees

@dataclass(frozen=True)
class Increasing:
    indices: tuple


@dataclass(frozen=True)
class Decreasing:
    indices: tuple


def _longest_monotone(seq, increasing):
    n = len(seq)
    best = [1] * n
    prev = [-1] * n
    for i in range(n):
        for j in range(i):
            if (seq[j] < seq[i]) == increasing and seq[j] != seq[i] and best[j] + 1 > best[i]:
                best[i] = best[j] + 1
                prev[i] = j
    if not n:
        return []
    end = max(range(n), key=lambda i: (best[i], -i))
    out = []
    while end != -1:
        out.append(end)
        end = prev[end]
    return out[::-1]


def erdos_szekeres(perm, r, s):
    """Increasing index set of size r or decreasing one of size s, else None."""
    if len(set(perm)) != len(perm):
        raise InvalidInput("entries must be distinct")
    inc = _longest_monotone(perm, True)
    if len(inc) >= r:
        return Increasing(tuple(inc[:r]))
    dec = _longest_monotone(perm, False)
    if len(dec) >= s:
        return Decreasing(tuple(dec[:s]))
    return None


def verify_monotone(perm, arm):
    idx = list(arm.indices)
    if idx != sorted(set(idx)):
        return False
    vals = [perm[i] for i in idx]
    pairs = list(zip(vals, vals[1:]))
    if isinstance(arm, Increasing):
        return all(a < b for a, b in pairs)
    return all(a > b for a, b in pairs)


@dataclass(frozen=True)
class Leaves:
    vertices: tuple


@dataclass(frozen=True)
class PathWitness:
    vertices: tuple


def tree_leaves_or_path(t, k):
    """k leaves, or a path on k vertices found among the leaf-to-root paths."""
    if not (t.n >= 1 and t.m == t.n - 1 and t.is_connected()):
        raise InvalidInput("input is not a tree")
    leaves = [v for v in t.sorted_vertices() if t.degree(v) == 1]
    if k >= 1 and len(leaves) >= k and k >= 2:
        return Leaves(tuple(leaves[:k]))
    root = min(t.vertices)
    parent = {root: None}
    stack = [root]
    while stack:
        v = stack.pop()
        for w in sorted(t.neighbors(v)):
            if w not in parent:
                parent[w] = v
                stack.append(w)
    candidates = leaves or [root]
    best = []
    for x in candidates:
        path = [x]
        while parent[path[-1]] is not None:
            path.append(parent[path[-1]])
        if len(path) > len(best):
            best = path
    if len(best) >= k:
        return PathWitness(tuple(best[:k]))
    return None


def verify_leaves_or_path(t, k, arm):
    if isinstance(arm, Leaves):
        return len(set(arm.vertices)) == k and all(t.degree(v) == 1 for v in arm.vertices)
    return len(arm.vertices) == k and is_path(t, arm.vertices)


# private intervals along a path

@dataclass(frozen=True)
class PrivateIntervals:
    chosen: tuple  # indices into the input family
    prefix_end: int  # b, a vertex of the path
    intervals: tuple  # (a_j, b_j) per chosen subgraph


def private_intervals(g, p, subgraphs, length):
    """Select subgraphs with pairwise disjoint private intervals on a prefix of p.

    Follows the first-hit recursion: the subgraph hit first keeps P[init, x_s]
    where x_s is one of its hits, and the recursion continues after x_s on the
    segment whose bucket of first hits is best. Returns the longest selection
    found, capped at ``length``.
    """
    p = tuple(p)
    if not is_path(g, p):
        raise InvalidInput("p is not a path of g")
    sets = [frozenset(s.vertices) if isinstance(s, Graph) else frozenset(s) for s in subgraphs]
    for s in sets:
        if not s & set(p):
            raise InvalidInput("every subgraph must meet the path")
    pos = {v: i for i, v in enumerate(p)}
    hits = [sorted(pos[v] for v in s if v in pos) for s in sets]
    memo = {}

    def rec(lo, hi, members, want):
        # subpath p[lo..hi]; returns list of (member, a, b) and prefix end index
        if not members or lo > hi or want == 0:
            return [], None
        st = (lo, hi, members, want)
        if st in memo:
            return memo[st]
        first = {j: min(h for h in hits[j] if lo <= h <= hi) for j in members}
        a1 = min(members, key=lambda j: (first[j], j))
        xs = [h for h in hits[a1] if lo <= h <= hi] + [hi]
        best = ([(a1, lo, hi)], hi)
        if want > 1:
            r = len(xs) - 1
            for s in range(r):
                x_s, x_next = xs[s], xs[s + 1]
                sub_hi = x_next - 1 if s < r - 1 else x_next
                # a member first hit at x_s would meet the interval kept by a1
                bucket = tuple(j for j in members if j != a1 and x_s < first[j] <= sub_hi)
                if not bucket:
                    continue
                sub, b = rec(x_s + 1, sub_hi, bucket, want - 1)
                if sub and len(sub) + 1 > len(best[0]):
                    best = ([(a1, lo, x_s)] + sub, b)
        memo[st] = best
        return best

    chosen, b = rec(0, len(p) - 1, tuple(range(len(sets))), length)
    return PrivateIntervals(
        tuple(j for j, _, _ in chosen),
        p[b],
        tuple((p[a], p[bb]) for _, a, bb in chosen),
    )


def verify_private_intervals(p, subgraphs, out):
    p = list(p)
    pos = {v: i for i, v in enumerate(p)}
    sets = [frozenset(s.vertices) if isinstance(s, Graph) else frozenset(s) for s in subgraphs]
    bpos = pos[out.prefix_end]
    prefix = set(p[: bpos + 1])
    spans = []
    for j, (a, b) in zip(out.chosen, out.intervals):
        ia, ib = pos[a], pos[b]
        if ia > ib or ib > bpos:
            return False
        span = set(p[ia: ib + 1])
        meet = sets[j] & prefix
        if not meet or not meet <= span:
            return False
        spans.append(span)
    return all(not (spans[i] & spans[j]) for i in range(len(spans)) for j in range(i))


# ladder extraction

def extract_ladder(g, rows, connectors):
    """Model of a k-ladder in g from k disjoint paths and connectors meeting every path.

    Each row in turn gets private intervals that are merged into the selected
    connectors, so every surviving connector meets every row in one interval.
    Monotone subsequences then align the connector orders along all rows,
    and the rows and connectors are cut into branch sets.
    Returns (KLadder, MinorModel).
    """
    rows = [tuple(r) for r in rows]
    k = len(rows)
    used = set()
    for r in rows:
        if not is_path(g, r):
            raise InvalidInput(f"row {r} is not a path")
        if used & set(r):
            raise InvalidInput("rows must be disjoint")
        used |= set(r)
    conns = [frozenset(c.vertices) if isinstance(c, Graph) else frozenset(c) for c in connectors]
    seen = set()
    for c in conns:
        if seen & c:
            raise InvalidInput("connectors must be disjoint")
        seen |= c
        if not is_connected_set(g, c):
            raise InvalidInput("connectors must be connected")
        if any(not c & set(r) for r in rows):
            raise InvalidInput("every connector must meet every row")

    alive = list(range(len(conns)))
    merged = {j: set(conns[j]) for j in alive}
    row_prefix = []
    intervals = {}
    for i, row in enumerate(rows):
        res = private_intervals(g, row, [merged[j] for j in alive], len(alive))
        pos = {v: t for t, v in enumerate(row)}
        chosen = [alive[c] for c in res.chosen]
        for j, (a, b) in zip(chosen, res.intervals):
            span = row[pos[a]: pos[b] + 1]
            merged[j] |= set(span)
            intervals[(i, j)] = (pos[a], pos[b])
        row_prefix.append(row[: pos[res.prefix_end] + 1])
        alive = chosen
    # align orders along all rows
    order = sorted(alive, key=lambda j: intervals[(0, j)][0])
    for i in range(1, k):
        seq = [intervals[(i, j)][0] for j in order]
        inc = _longest_monotone(seq, True)
        dec = _longest_monotone(seq, False)
        if len(dec) > len(inc):
            order = [order[t] for t in dec]
        else:
            order = [order[t] for t in inc]
    cols = len(order)
    if cols == 0:
        raise InvalidInput("no connector survived")

    # branch sets
    sets = {}
    for c, j in enumerate(order):
        sources = {}
        for i in range(k):
            a, b = intervals[(i, j)]
            for v in rows[i][a: b + 1]:
                sources[v] = i
        body = set(conns[j]) | set(sources)
        region = _voronoi(g, body, sources)
        for i in range(k):
            sets[(i, c)] = {v for v, src in region.items() if src == i}
    for i in range(k):
        prefix = row_prefix[i]
        starts = [intervals[(i, j)] for j in order]
        # walk along the row in the row's own direction and give gaps to the preceding column
        along = sorted(range(cols), key=lambda c: starts[c][0])
        for t, c in enumerate(along):
            b = starts[c][1]
            nxt = starts[along[t + 1]][0] if t + 1 < len(along) else b + 1
            sets[(i, c)] |= set(prefix[b + 1: nxt])
    # the ladder pattern: rows in column order, columns as realised
    edges = []
    for i in range(k):
        edges += [(i * cols + c, i * cols + c + 1) for c in range(cols - 1)]
    branch = {i * cols + c: frozenset(sets[(i, c)]) for i in range(k) for c in range(cols)}
    for c in range(cols):
        for i in range(k):
            for i2 in range(i + 1, k):
                bx, by = branch[i * cols + c], branch[i2 * cols + c]
                if any(g.neighbors(u) & by for u in bx):
                    edges.append((i * cols + c, i2 * cols + c))
    lad = KLadder(k, cols, Graph(range(k * cols), edges))
    return lad, MinorModel(lad.graph, g, branch)


def _voronoi(g, body, sources):
    """Assign every vertex of body to the source of its BFS parent (multi-source, in body)."""
    owner = dict(sources)
    frontier = sorted(sources)
    while frontier:
        nxt = []
        for v in frontier:
            for w in sorted(g.neighbors(v)):
                if w in body and w not in owner:
                    owner[w] = owner[v]
                    nxt.append(w)
        frontier = nxt
    return owner
