"""Token sliding between graphs and its compilation into minors of products with long paths."""
from __future__ import annotations

import json
from collections import deque

from .decomp import OK, Report
from .errors import InvalidInput, check_size
from .graph import Graph, cartesian_product, is_tree, path_graph, product_vertex
from .minors import MinorModel


class SlidingSequence:
    """Injections V(H) -> V(G), stored as forward segments with optional mirrored replays.

    Each part is (segment, mirrored). A mirrored part replays its segment backwards,
    dropping the last and first entries so the walk returns next to the segment start.
    """

    __slots__ = ("pattern", "host", "parts")

    def __init__(self, pattern, host, injections=None, parts=None):
        self.pattern = pattern
        self.host = host
        if parts is None:
            parts = [(tuple(_freeze(f) for f in injections or ()), False)]
        self.parts = [(tuple(_freeze(f) for f in seg), bool(mirror)) for seg, mirror in parts]

    @property
    def injections(self):
        out = []
        for seg, mirror in self.parts:
            run = list(seg) + (list(reversed(seg[1:-1])) if mirror else [])
            for f in run:
                if not out or out[-1] != f:
                    out.append(f)
        return [dict(f) for f in out]

    def __len__(self):
        return len(self.injections)

    def to_dict(self):
        return {
            "pattern": self.pattern.to_dict(),
            "host": self.host.to_dict(),
            "injections": [{str(x): f[x] for x in sorted(f)} for f in self.injections],
        }

    @classmethod
    def from_dict(cls, d):
        try:
            inj = [{int(x): v for x, v in f.items()} for f in d["injections"]]
            return cls(Graph.from_dict(d["pattern"]), Graph.from_dict(d["host"]), inj)
        except (KeyError, TypeError, ValueError, AttributeError) as exc:
            raise InvalidInput(f"malformed sliding sequence: {exc}") from None

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True)


def _freeze(f):
    if isinstance(f, tuple):
        return f
    return tuple(sorted(dict(f).items()))


def validate_sliding(seq):
    h, g = seq.pattern, seq.host
    inj = seq.injections
    if not inj:
        return Report(False, "empty", None, "no injections")
    for i, f in enumerate(inj):
        if set(f) != set(h.vertices):
            return Report(False, "domain", i, f"injection {i} is not defined on V(H)")
        vals = list(f.values())
        if len(set(vals)) != len(vals) or not set(vals) <= g.vertices:
            return Report(False, "injective", i, f"injection {i} is not an injection into V(G)")
    for i in range(len(inj) - 1):
        moved = [x for x in inj[i] if inj[i][x] != inj[i + 1][x]]
        if len(moved) != 1:
            return Report(False, "move", i, f"step {i} moves {len(moved)} tokens")
        x = moved[0]
        if not g.has_edge(inj[i][x], inj[i + 1][x]):
            return Report(False, "slide", i, f"token {x} jumps along a non-edge")
    for x, y in h.edges:
        if not any(g.has_edge(f[x], f[y]) for f in inj):
            return Report(False, "edge", (x, y), f"edge {x}-{y} is never realised")
    return OK


def _longest_path(t):
    """Longest path of a tree, ties broken by the least (start, end) pair."""
    best = None
    for s in t.sorted_vertices():
        parent = {s: None}
        order = [s]
        queue = deque([s])
        while queue:
            v = queue.popleft()
            for w in sorted(t.neighbors(v)):
                if w not in parent:
                    parent[w] = v
                    order.append(w)
                    queue.append(w)
        depth = {s: 0}
        for v in order[1:]:
            depth[v] = depth[parent[v]] + 1
        for e in order:
            key = (-depth[e], min(s, e), max(s, e))
            if best is None or key < best[0]:
                path = [e]
                while parent[path[-1]] is not None:
                    path.append(parent[path[-1]])
                if path[0] > path[-1]:
                    path.reverse()
                best = (key, path)
    return best[1]


def _slide_until_adjacent(t, start, x, y):
    """Shortest token-move sequence from ``start`` to a placement with x and y adjacent."""
    tokens = sorted(start)
    first = tuple(start[z] for z in tokens)
    ix, iy = tokens.index(x), tokens.index(y)
    parent = {first: None}
    queue = deque([first])
    while queue:
        cur = queue.popleft()
        if t.has_edge(cur[ix], cur[iy]):
            out = []
            while cur is not None:
                out.append(dict(zip(tokens, cur)))
                cur = parent[cur]
            return out[::-1]
        occupied = set(cur)
        for a in range(len(tokens)):
            for w in sorted(t.neighbors(cur[a])):
                if w in occupied:
                    continue
                nxt = cur[:a] + (w,) + cur[a + 1:]
                if nxt not in parent:
                    parent[nxt] = cur
                    queue.append(nxt)
    return None


def path_sliding_in_tree(t, k):
    """Tokens 0..k-1 of a path slide in the tree t until every path edge has been realised."""
    if not is_tree(t):
        raise InvalidInput("host must be a tree")
    if k < 1:
        raise InvalidInput("k must be positive")
    if t.n < 2 * k - 1:
        raise InvalidInput(f"tree has {t.n} vertices, needs at least {2 * k - 1}")
    check_size(t.n, 13, "path_sliding_in_tree")
    pattern = path_graph(k)
    longest = _longest_path(t)
    if len(longest) >= k:
        return SlidingSequence(pattern, t, [{i: longest[i] for i in range(k)}])
    off = [v for v in t.sorted_vertices() if v not in set(longest)]
    start = {i: off[i] for i in range(k)}
    parts = []
    for x in range(k - 1):
        seg = _slide_until_adjacent(t, start, x, x + 1)
        if seg is None:
            raise AssertionError(f"tokens {x} and {x + 1} cannot be brought together")
        parts.append((seg, x < k - 2))
    return SlidingSequence(pattern, t, parts=parts)


def sliding_to_model(seq, length):
    """Model of H x P_length in G x P_L with L = length * (2m - 1)."""
    rep = validate_sliding(seq)
    if not rep:
        raise InvalidInput(f"invalid sliding sequence: {rep.detail}")
    if length < 1:
        raise InvalidInput("length must be positive")
    inj = seq.injections
    m = len(inj)
    period = 2 * m - 1
    big = length * period
    h, g = seq.pattern, seq.host
    line = path_graph(big)
    host = cartesian_product(g, line)
    pattern = cartesian_product(h, path_graph(length))
    sets = {}
    for x in h.sorted_vertices():
        # columns are 1-based here and shifted to 0-based ids below
        base = {(inj[i - 1][x], i) for i in range(1, m + 1)}
        base |= {(inj[i - 1][x], i + 1) for i in range(1, m) if inj[i - 1][x] != inj[i][x]}
        mirrored = base | {(u, 2 * m - i) for u, i in base}
        for j in range(1, length + 1):
            shift = period * (j - 1)
            sets[product_vertex(x, j - 1, path_graph(length))] = {
                product_vertex(u, i + shift - 1, line) for u, i in mirrored
            }
    return MinorModel(pattern, host, sets)


def grid_in_ladder(k, length, t):
    """Model of the k x length grid in t x P_L for a tree t on 2k - 1 vertices."""
    if t.n != 2 * k - 1:
        raise InvalidInput(f"tree must have exactly {2 * k - 1} vertices")
    check_size(k, 5, "grid_in_ladder k")
    seq = path_sliding_in_tree(t, k)
    return sliding_to_model(seq, length), seq
