"""Disjoint paths, bag-size potentials, and refinement of tree decompositions."""
from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from itertools import combinations

from .decomp import OK, Report, TreeDecomposition, validate_gs_decomposition, validate_tree_decomposition
from .errors import InvalidInput, check_size
from .graph import component_of, connected_components, is_connected_set


class PreconditionError(InvalidInput):
    """The arguments do not describe a violation that can be repaired."""


# Menger machinery

@dataclass(frozen=True)
class MengerResult:
    count: int
    paths: tuple
    cut: frozenset


@dataclass(frozen=True)
class Separation:
    """Vertex separation (side1, cut, side2) with no edge between the sides."""

    cut: frozenset
    side1: frozenset
    side2: frozenset

    @property
    def order(self):
        return len(self.cut)


def max_disjoint_paths(g, z1, z2):
    """Maximum family of vertex-disjoint (z1, z2)-paths and a minimum (z1, z2)-cut.

    Unit vertex capacities via the split graph; edges and terminals are uncapacitated,
    so the residual cut is a vertex set.
    """
    z1, z2 = frozenset(z1), frozenset(z2)
    if not (z1 <= g.vertices and z2 <= g.vertices):
        raise InvalidInput("terminal sets must lie in the graph")
    order = g.sorted_vertices()
    idx = {v: i for i, v in enumerate(order)}
    n = len(order)
    src, snk = 2 * n, 2 * n + 1
    big = n + 1
    cap = {}
    adj = [[] for _ in range(2 * n + 2)]

    def arc(a, b, c):
        if (a, b) not in cap:
            adj[a].append(b)
            adj[b].append(a)
            cap.setdefault((b, a), 0)
        cap[(a, b)] = cap.get((a, b), 0) + c

    for v in order:
        i = idx[v]
        arc(2 * i, 2 * i + 1, 1)
        for w in sorted(g.neighbors(v)):
            arc(2 * i + 1, 2 * idx[w], big)
    for v in sorted(z1):
        arc(src, 2 * idx[v], big)
    for v in sorted(z2):
        arc(2 * idx[v] + 1, snk, big)
    flow = {}

    def residual(a, b):
        return cap[(a, b)] - flow.get((a, b), 0)

    count = 0
    while True:
        parent = {src: None}
        queue = deque([src])
        while queue and snk not in parent:
            a = queue.popleft()
            for b in adj[a]:
                if b not in parent and residual(a, b) > 0:
                    parent[b] = a
                    queue.append(b)
        if snk not in parent:
            break
        b = snk
        while parent[b] is not None:
            a = parent[b]
            flow[(a, b)] = flow.get((a, b), 0) + 1
            flow[(b, a)] = flow.get((b, a), 0) - 1
            b = a
        count += 1
    reach = set(parent)
    cut = frozenset(v for v in order if 2 * idx[v] in reach and 2 * idx[v] + 1 not in reach)
    paths = []
    for v in sorted(z1):
        a = 2 * idx[v]
        if flow.get((src, a), 0) <= 0:
            continue
        path = []
        node = a
        while node != snk:
            if node % 2 == 0:
                path.append(order[node // 2])
                node = node + 1
            else:
                node = next(b for b in adj[node] if flow.get((node, b), 0) > 0)
        paths.append(tuple(path))
    return MengerResult(count, tuple(paths), cut)


def verify_menger(g, z1, z2, res):
    """Both certificates: disjoint (z1, z2)-paths and a separating cut of the same size."""
    z1, z2 = frozenset(z1), frozenset(z2)
    if len(res.paths) != res.count or len(res.cut) != res.count:
        return False
    used = set()
    for p in res.paths:
        if not p or p[0] not in z1 or p[-1] not in z2:
            return False
        if any(not g.has_edge(a, b) for a, b in zip(p, p[1:])):
            return False
        if used & set(p) or len(set(p)) != len(p):
            return False
        used |= set(p)
    return separates(g, res.cut, z1, z2)


def separates(g, cut, z1, z2):
    cut = frozenset(cut)
    starts = set(z1) - cut
    if not starts:
        return True
    reach = component_of_set(g, starts, g.vertices - cut)
    return not (reach & (set(z2) - cut))


def component_of_set(g, starts, within):
    seen = set(starts)
    stack = list(starts)
    while stack:
        v = stack.pop()
        for w in g.neighbors(v):
            if w in within and w not in seen:
                seen.add(w)
                stack.append(w)
    return seen


def separation_from_cut(g, cut, z1):
    cut = frozenset(cut)
    side1 = frozenset(component_of_set(g, set(z1) - cut, g.vertices - cut))
    return Separation(cut, side1, g.vertices - cut - side1)


def connectivity(g, z1, z2):
    return max_disjoint_paths(g, z1, z2).count


# potentials

def potential(d, n, k=None):
    """(s_n, ..., s_0); with k given, small bags count only next to an adhesion of size >= k."""
    counts = [0] * (n + 1)
    for x, b in d.bags.items():
        size = len(b)
        if size > n:
            raise InvalidInput("bag larger than the vertex count")
        if k is not None and size <= 1.5 * (k - 1):
            if not any(len(b & d.bags[y]) >= k for y in d.tree.neighbors(x)):
                continue
        counts[size] += 1
    return tuple(reversed(counts))


def potential_less(p, q):
    return p < q


# violation search helpers

def _cut_violation_exists(g, w1, w2, i, within=None):
    """Is there Z1 in w1, Z2 in w2 of size i separated by fewer than i vertices?"""
    verts = g.vertices if within is None else within
    w1, w2 = frozenset(w1), frozenset(w2)
    if len(w1) < i or len(w2) < i:
        return False
    pool = sorted(verts)
    for size in range(i):
        for x in combinations(pool, size):
            x = frozenset(x)
            need1 = max(i - len(w1 & x), 0)
            need2 = max(i - len(w2 & x), 0)
            reach = {(0, 0)}
            for c in connected_components(g, verts - x):
                a, b = len(c & w1), len(c & w2)
                reach = {(min(p + a, need1), q) for p, q in reach} | {(p, min(q + b, need2)) for p, q in reach}
            if (need1, need2) in reach:
                return True
    return False


def _first_violation(g, w1, w2, i):
    """Lexicographically first (Z1, Z2) of size i with fewer than i disjoint paths."""
    if not _cut_violation_exists(g, w1, w2, i):
        return None
    for z1 in combinations(sorted(w1), i):
        for z2 in combinations(sorted(w2), i):
            if max_disjoint_paths(g, z1, z2).count < i:
                return frozenset(z1), frozenset(z2)
    return None


# improvement step

@dataclass
class Improvement:
    s: frozenset
    decomposition: TreeDecomposition
    cut: frozenset
    pair: tuple
    zsets: tuple
    adjacent: tuple | None
    copies: dict = field(default_factory=dict)


def _anchor_nodes(g, s, d, path_nodes):
    dist = d.distances_from(path_nodes)
    s = frozenset(s)
    anchor = {}
    comp_nb = {}
    for comp in connected_components(g, g.vertices - s):
        nb = g.neighborhood(comp)
        for u in comp:
            comp_nb[u] = nb
    for u in g.sorted_vertices():
        if u in s:
            cands = [x for x in d.nodes if u in d.bags[x]]
        else:
            cands = [x for x in d.nodes if comp_nb[u] <= d.bags[x]]
        if not cands:
            raise InvalidInput(f"vertex {u} has no anchoring node")
        z = min(cands, key=lambda x: (dist[x], x))
        anchor[u] = (z, dist[z] + (0 if u in s else 1))
    return anchor


def improvement_step(g, s, d, x1, x2, z1, z2, fresh=None):
    """Split d along a minimum (z1, z2)-cut so that the bag-size potential drops.

    Copies of the tree are made for the two sides of the cut; every cut vertex u
    is added to the bags on the tree path from its anchor node to the far end.
    ``fresh`` is the first node id used for the second copy.
    """
    s = frozenset(s)
    z1, z2 = frozenset(z1), frozenset(z2)
    i = len(z1)
    if len(z2) != i or i == 0:
        raise PreconditionError("Z1 and Z2 must be nonempty and of the same size")
    if not (z1 <= d.bags[x1] and z2 <= d.bags[x2]):
        raise PreconditionError("Z1 and Z2 must lie in the bags of x1 and x2")
    if max_disjoint_paths(g, z1, z2).count >= i:
        raise PreconditionError(f"there are {i} disjoint paths between Z1 and Z2")
    path = d.tree_path(x1, x2)
    if any(len(d.bags[a] & d.bags[b]) < i for a, b in zip(path, path[1:])):
        raise PreconditionError("an adhesion on the connecting tree path is too small")

    # closest violating pair on the path
    found = None
    for gap in range(len(path) - 1):
        for a in range(len(path) - gap):
            p1, p2 = path[a], path[a + gap]
            hit = _first_violation(g, d.bags[p1], d.bags[p2], i)
            if hit is not None:
                found = (p1, p2, hit[0], hit[1])
                break
        if found:
            break
    if found is None:
        found = (x1, x2, z1, z2)
    x1, x2, z1, z2 = found
    path = d.tree_path(x1, x2)
    anchor = _anchor_nodes(g, s, d, path)

    size = max_disjoint_paths(g, z1, z2).count
    best = None
    for cand in combinations(g.sorted_vertices(), size):
        if not separates(g, cand, z1, z2):
            continue
        key = (sum(anchor[u][1] for u in cand), cand)
        if best is None or key < best:
            best = key
    cut = frozenset(best[1])
    side1 = frozenset(component_of_set(g, z1 - cut, g.vertices - cut))
    side2 = g.vertices - cut - side1
    parts = {1: side1 | cut, 2: side2 | cut}
    far = {1: x2, 2: x1}
    on_path = {u: {a: set(d.tree_path(anchor[u][0], far[a])) for a in (1, 2)} for u in cut}
    if fresh is None:
        fresh = max(d.nodes) + 1
    offset = {1: 0, 2: fresh - min(d.nodes)}
    bags = {}
    edges = []
    for a in (1, 2):
        for z in d.nodes:
            bag = (d.bags[z] & parts[a]) | {u for u in cut if z in on_path[u][a]}
            bags[z + offset[a]] = bag
        edges += [(p + offset[a], q + offset[a]) for p, q in d.tree_edges]
    edges.append((x2 + offset[1], x1 + offset[2]))
    new = TreeDecomposition(edges, bags)
    adjacent = (x1 + offset[1], x1 + offset[2]) if x1 == x2 else None
    return Improvement(s | cut, new, cut, (x1, x2), (z1, z2), adjacent, offset)


# unbreakable decompositions

@dataclass
class DriverResult:
    s: frozenset
    decomposition: TreeDecomposition
    trace: list

    def trace_jsonl(self):
        return "".join(json.dumps(r, sort_keys=True) + "\n" for r in self.trace)


def _jsonable(x):
    if isinstance(x, (set, frozenset)):
        return sorted(x)
    if isinstance(x, (list, tuple)):
        return [_jsonable(y) for y in x]
    return x


def _disconnected_side(g, d):
    for x1, x2 in sorted(d.tree_edges + tuple((b, a) for a, b in d.tree_edges)):
        side = d.side(x2, x1)
        union = frozenset().union(*(d.bags[z] for z in side))
        if union and not is_connected_set(g, union):
            return x1, x2, side, union
    return None


def split_disconnected_side(g, d, x1, x2):
    """Duplicate T_{x2|x1} into one copy per side of a disconnected union of bags."""
    side = d.side(x2, x1)
    union = frozenset().union(*(d.bags[z] for z in side))
    c1 = frozenset(component_of(g.induced(union), min(union)))
    c2 = union - c1
    off = max(d.nodes) + 1 - min(side)
    bags = {z: b for z, b in d.bags.items() if z not in side}
    edges = [(p, q) for p, q in d.tree_edges if p not in side and q not in side]
    for z in side:
        bags[z] = d.bags[z] & c1
        bags[z + off] = d.bags[z] & c2
    for p, q in d.tree_edges:
        if p in side and q in side:
            edges += [(p, q), (p + off, q + off)]
    edges += [(x1, x2), (x1, x2 + off)]
    return TreeDecomposition(edges, bags)


def unbreakable_decomposition(g, k, max_iterations=10000):
    """Adhesion < k, every bag well linked for i <= k, and connected sides when g is connected."""
    check_size(g.n, 12, "unbreakable_decomposition")
    if k < 1:
        raise InvalidInput("k must be positive")
    d = TreeDecomposition.single(g.vertices)
    trace = []
    connected = g.n > 0 and g.is_connected()
    for _ in range(max_iterations):
        before = potential(d, g.n)
        violation = None
        for x in d.nodes:
            for i in range(1, k + 1):
                hit = _first_violation(g, d.bags[x], d.bags[x], i)
                if hit:
                    violation = ("menger", x, i, hit)
                    break
            if violation:
                break
        if violation:
            _, x, i, (z1, z2) = violation
            d = improvement_step(g, g.vertices, d, x, x, z1, z2).decomposition
            record = {"violation": {"kind": "menger", "node": x, "i": i, "z1": sorted(z1), "z2": sorted(z2)}}
        else:
            bad = _disconnected_side(g, d) if connected else None
            if bad is None:
                return DriverResult(g.vertices, d, trace)
            x1, x2, _, _ = bad
            d = split_disconnected_side(g, d, x1, x2)
            record = {"violation": {"kind": "disconnected", "edge": [x1, x2]}}
        after = potential(d, g.n)
        record["potential_before"] = list(before)
        record["potential_after"] = list(after)
        trace.append(record)
        if not after < before:
            raise AssertionError(f"potential did not decrease: {before} -> {after}")
    raise RuntimeError("refinement did not converge")


def verify_unbreakable(g, k, d):
    """Exhaustive check of the adhesion bound, bag linkedness and connected sides."""
    rep = validate_tree_decomposition(g, d)
    if not rep:
        return rep
    if d.adhesion() > k - 1:
        return Report(False, "adhesion", d.adhesion(), "adhesion exceeds k - 1")
    for x in d.nodes:
        bag = sorted(d.bags[x])
        for i in range(1, k + 1):
            for z1 in combinations(bag, i):
                for z2 in combinations(bag, i):
                    if z2 < z1:
                        continue
                    if max_disjoint_paths(g, z1, z2).count < i:
                        return Report(False, "menger", (x, z1, z2), f"fewer than {i} disjoint paths")
    if g.n and g.is_connected():
        bad = _disconnected_side(g, d)
        if bad:
            return Report(False, "side", bad[:2], "union of bags on a side is disconnected")
    return OK


# good (G, S) decompositions

def _component_family(g, s, d, x1, x2):
    """Components C of G - S with N(C) inside the x2 side but not inside the adhesion."""
    side = d.side(x2, x1)
    union = frozenset().union(*(d.bags[z] for z in side))
    sep = d.bags[x1] & d.bags[x2]
    out = []
    for comp in connected_components(g, g.vertices - s):
        nb = g.neighborhood(comp)
        if nb <= union and not nb <= sep:
            out.append(comp)
    return side, union, sep, out


def side_graph(g, s, d, x1, x2):
    """The graph in which the adhesion W_x1 & W_x2 must stay well linked, clique edges removed."""
    side, union, sep, comps = _component_family(g, s, d, x1, x2)
    verts = union.union(*comps) if comps else union
    h = g.induced(verts)
    return h.remove_edges([(a, b) for a, b in combinations(sorted(sep), 2)]), side, sep


def _good_width_ok(d, k, t):
    return d.width() < max(t, 1.5 * (k - 1))


def _exempt(d, x, k):
    return len(d.bags[x]) <= 1.5 * (k - 1) and all(len(d.bags[x] & d.bags[y]) < k for y in d.tree.neighbors(x))


def _scan_iii(g, d, k):
    nodes = d.nodes
    for x1 in nodes:
        for x2 in nodes:
            if x2 < x1:
                continue
            path = d.tree_path(x1, x2)
            if any(len(d.bags[a] & d.bags[b]) < k for a, b in zip(path, path[1:])):
                continue
            if x1 == x2 and _exempt(d, x1, k):
                continue
            hit = _first_violation(g, d.bags[x1], d.bags[x2], k)
            if hit:
                return x1, x2, hit
    return None


def _scan_iv(g, s, d, k):
    for x1, x2 in sorted(d.tree_edges + tuple((b, a) for a, b in d.tree_edges)):
        sep = d.bags[x1] & d.bags[x2]
        if len(sep) >= k:
            continue
        if not any(y != x1 and len(d.bags[x2] & d.bags[y]) >= k for y in d.tree.neighbors(x2)):
            continue
        h, side, sep = side_graph(g, s, d, x1, x2)
        for i in range(1, len(sep) + 1):
            for z1 in combinations(sorted(sep), i):
                for z2 in combinations(sorted(sep), i):
                    if max_disjoint_paths(h, z1, z2).count < i:
                        return x1, x2, frozenset(z1), frozenset(z2), h, side
    return None


def good_gs_decomposition(g, s, k, a, t, initial=None, max_iterations=10000):
    """Refine a (G, S) decomposition until bags are k-linked across large adhesions
    and small adhesions are well linked on their side."""
    check_size(g.n, 10, "good_gs_decomposition")
    s = frozenset(s)
    if a < k:
        raise InvalidInput("need a >= k")
    if initial is None:
        if len(s) > t:
            raise InvalidInput("no initial decomposition: |S| exceeds t")
        initial = TreeDecomposition.single(s)
    d = initial
    if not validate_gs_decomposition(g, s, d):
        raise InvalidInput("initial decomposition is not a (G, S) decomposition")
    if d.width() >= t or d.adhesion() > a:
        raise InvalidInput("initial decomposition must have width < t and adhesion <= a")
    trace = []
    for _ in range(max_iterations):
        before = potential(d, g.n, k)
        hit = _scan_iii(g, d, k)
        if hit:
            x1, x2, (z1, z2) = hit
            res = improvement_step(g, s, d, x1, x2, z1, z2)
            s, d = res.s, res.decomposition
            record = {"violation": {"kind": "linked", "nodes": [x1, x2], "z1": sorted(z1), "z2": sorted(z2)}}
        else:
            hit = _scan_iv(g, s, d, k)
            if hit is None:
                return DriverResult(s, d, trace)
            x1, x2, z1, z2, h, side = hit
            sep = d.bags[x1] & d.bags[x2]
            pad = sep - z1 - z2
            z1, z2 = z1 | pad, z2 | pad
            s, d = _subdivide_side(g, s, d, x1, x2, z1, z2, h, side)
            record = {"violation": {"kind": "adhesion", "edge": [x1, x2], "z1": sorted(z1), "z2": sorted(z2)}}
        after = potential(d, g.n, k)
        record["potential_before"] = list(before)
        record["potential_after"] = list(after)
        trace.append(record)
        if not after < before:
            raise AssertionError(f"filtered potential did not decrease: {before} -> {after}")
    raise RuntimeError("refinement did not converge")


def _subdivide_side(g, s, d, x1, x2, z1, z2, h, side):
    s0 = h.vertices & s
    d0 = d.restrict(side)
    fresh = max(d.nodes) + 1
    res = improvement_step(h, s0, d0, x2, x2, z1, z2, fresh=fresh)
    n1, n2 = res.adjacent
    d1 = res.decomposition
    z0 = max(max(d.nodes), max(d1.nodes)) + 1
    bags = {z: b for z, b in d.bags.items() if z not in side}
    bags.update(d1.bags)
    bags[z0] = z1 | z2 | (d1.bags[n1] & d1.bags[n2])
    edges = [(p, q) for p, q in d.tree_edges if p not in side and q not in side]
    edges += [(p, q) for p, q in d1.tree_edges if {p, q} != {n1, n2}]
    edges += [(n1, z0), (z0, n2), (x1, z0)]
    return s | res.cut, TreeDecomposition(edges, bags)


def verify_good(g, s0, k, a, t, s, d):
    """Exhaustive check of every conclusion for a good (G, S) decomposition."""
    s0, s = frozenset(s0), frozenset(s)
    if not s0 <= s:
        return Report(False, "s", None, "S' must contain S")
    rep = validate_gs_decomposition(g, s, d)
    if not rep:
        return rep
    if d.adhesion() > a:
        return Report(False, "adhesion", d.adhesion(), "adhesion exceeds a")
    if not _good_width_ok(d, k, t):
        return Report(False, "width", d.width(), "width too large")
    nodes = d.nodes
    for x1 in nodes:
        for x2 in nodes:
            if x2 < x1:
                continue
            path = d.tree_path(x1, x2)
            if any(len(d.bags[p] & d.bags[q]) < k for p, q in zip(path, path[1:])):
                continue
            if x1 == x2 and _exempt(d, x1, k):
                continue
            for z1 in combinations(sorted(d.bags[x1]), k):
                for z2 in combinations(sorted(d.bags[x2]), k):
                    if max_disjoint_paths(g, z1, z2).count < k:
                        return Report(False, "linked", (x1, x2, z1, z2), f"fewer than {k} disjoint paths")
    for x1, x2 in sorted(d.tree_edges + tuple((q, p) for p, q in d.tree_edges)):
        sep = d.bags[x1] & d.bags[x2]
        if len(sep) >= k:
            continue
        if not any(y != x1 and len(d.bags[x2] & d.bags[y]) >= k for y in d.tree.neighbors(x2)):
            continue
        h, _, _ = side_graph(g, s, d, x1, x2)
        for i in range(1, len(sep) + 1):
            for z1 in combinations(sorted(sep), i):
                for z2 in combinations(sorted(sep), i):
                    if max_disjoint_paths(h, z1, z2).count < i:
                        return Report(False, "side-linked", (x1, x2, z1, z2), f"fewer than {i} disjoint paths")
    return OK


def prune_empty_bags(d):
    """Contract nodes with empty bags into a neighbour (cosmetic; never used by the drivers)."""
    while True:
        empty = [x for x in d.nodes if not d.bags[x] and d.tree.n > 1]
        if not empty:
            return d
        x = empty[0]
        nbrs = sorted(d.tree.neighbors(x))
        keep = nbrs[0]
        edges = [(p, q) for p, q in d.tree_edges if x not in (p, q)]
        edges += [(keep, y) for y in nbrs[1:]]
        d = TreeDecomposition(edges, {z: b for z, b in d.bags.items() if z != x})
