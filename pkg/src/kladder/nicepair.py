"""Good and nice pairs, torsos, and moving disjoint paths between a graph and a torso."""
from __future__ import annotations

import json
from itertools import combinations

from .decomp import OK, Report
from .errors import InvalidInput, check_size
from .graph import Graph, connected_components, is_path
from .refine import max_disjoint_paths


class GoodPair:
    """A centre set U and a family of sets B, forming a star-shaped decomposition of the graph."""

    __slots__ = ("graph", "u", "family")

    def __init__(self, graph, u, family):
        self.graph = graph
        self.u = frozenset(u)
        seen = []
        for b in family:
            b = frozenset(b)
            if b not in seen:
                seen.append(b)
        self.family = tuple(seen)

    def validate(self):
        g = self.graph
        if not self.u and g.n:
            return Report(False, "empty-u", None, "U must be nonempty")
        for b in (self.u,) + self.family:
            if not b <= g.vertices:
                return Report(False, "foreign", sorted(b), "set leaves the vertex set")
        covered = set(self.u).union(*self.family) if self.family else set(self.u)
        if covered != g.vertices:
            return Report(False, "cover", sorted(g.vertices - covered), "vertices not covered")
        for e in g.edges:
            if not (set(e) <= self.u or any(set(e) <= b for b in self.family)):
                return Report(False, "edge", e, f"edge {e} lies in no set")
        outside = [b - self.u for b in self.family]
        for i, j in combinations(range(len(outside)), 2):
            if outside[i] & outside[j]:
                return Report(False, "overlap", (i, j), "outer parts of two sets intersect")
        return OK

    def to_dict(self):
        return {
            "graph": self.graph.to_dict(),
            "U": sorted(self.u),
            "B": [sorted(b) for b in self.family],
        }

    @classmethod
    def from_dict(cls, d):
        try:
            return cls(Graph.from_dict(d["graph"]), d["U"], d["B"])
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidInput(f"malformed good pair: {exc}") from None

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True)

    def __repr__(self):
        return f"GoodPair(U={sorted(self.u)}, B={[sorted(b) for b in self.family]})"


class NicePair:
    """A good pair with the list of checked (set index, Z1, Z2) triples."""

    __slots__ = ("pair", "certificate")

    def __init__(self, pair, certificate):
        self.pair = pair
        self.certificate = certificate

    @property
    def graph(self):
        return self.pair.graph

    @property
    def u(self):
        return self.pair.u

    @property
    def family(self):
        return self.pair.family


def _require_good(gp):
    rep = gp.validate()
    if not rep:
        raise InvalidInput(f"invalid good pair: {rep.detail}")


def torso(gp):
    _require_good(gp)
    g = gp.graph.induced(gp.u)
    for b in gp.family:
        g = g.add_clique(b & gp.u)
    return g


def pair_from_decomposition(g, d, nodes):
    """The good pair of a subtree: U is the union of its bags, one set per outside component."""
    nodes = frozenset(nodes)
    u = frozenset().union(*(d.bags[x] for x in nodes))
    rest = d.tree.remove_vertices(nodes)
    family = [frozenset().union(*(d.bags[x] for x in comp)) for comp in connected_components(rest)]
    return GoodPair(g, u, family)


def _inner_graph(g, u, b):
    core = sorted(b & u)
    return g.induced(b).remove_edges(combinations(core, 2)), core


def _maximal_splits(core):
    m = len(core)
    for i in range((m + 1) // 2, m + 1):
        for z1 in combinations(core, i):
            rest = [v for v in core if v not in z1]
            for extra in combinations(z1, 2 * i - m):
                yield z1, tuple(sorted(rest + list(extra)))


def _all_splits(core):
    for i in range(1, len(core) + 1):
        for z1 in combinations(core, i):
            for z2 in combinations(core, i):
                yield z1, z2


def is_nice_pair(gp, exhaustive=False):
    """Check the Menger condition inside every B with the clique on U & B removed.

    By default only splits with Z1 | Z2 = U & B are tried; padding any smaller
    violation with the unused vertices of U & B keeps it a violation.
    Returns (Report, NicePair or None).
    """
    rep = gp.validate()
    if not rep:
        return rep, None
    cert = []
    for idx, b in enumerate(gp.family):
        h, core = _inner_graph(gp.graph, gp.u, b)
        check_size(len(core), 8, "is_nice_pair |U & B|")
        splits = _all_splits(core) if exhaustive else _maximal_splits(core)
        for z1, z2 in splits:
            if max_disjoint_paths(h, z1, z2).count < len(z1):
                return Report(False, "menger", (idx, z1, z2), f"too few disjoint paths inside set {idx}"), None
            cert.append((idx, z1, z2))
    return OK, NicePair(gp, tuple(cert))


def make_nice(gp):
    rep, np_ = is_nice_pair(gp)
    if not rep:
        raise InvalidInput(f"not a nice pair: {rep.detail}")
    return np_


def restrict_pair(np_, x):
    """(G - X, U - X, {B - X}) with the torso equal to the old torso minus X."""
    x = frozenset(x)
    gp = np_.pair if isinstance(np_, NicePair) else np_
    if not x <= gp.u:
        raise InvalidInput("X must be a subset of U")
    g = gp.graph.remove_vertices(x)
    if not (gp.u - x) and g.n:
        raise InvalidInput("removing all of U leaves a nonempty graph")
    new = GoodPair(g, gp.u - x, [b - x for b in gp.family])
    before = torso(gp).remove_vertices(x)
    after = torso(new)
    if before != after:
        raise AssertionError("torso of the restriction differs from the restricted torso")
    return make_nice(new)


def derived_pair(np_, index):
    """(V - (B - U), {B}) for the set with the given index."""
    gp = np_.pair if isinstance(np_, NicePair) else np_
    b = gp.family[index]
    return GoodPair(gp.graph, gp.graph.vertices - (b - gp.u), [b])


def _check_paths(g, paths, z1, z2):
    used = set()
    for p in paths:
        p = tuple(p)
        if not p or not is_path(g, p):
            raise InvalidInput(f"{p} is not a path")
        if p[0] not in z1 or p[-1] not in z2:
            raise InvalidInput(f"{p} does not run from Z1 to Z2")
        if used & set(p):
            raise InvalidInput("paths are not disjoint")
        used |= set(p)


def project_paths_to_torso(gp, paths, z1, z2):
    """U-traces of disjoint (Z1, Z2)-paths; they are disjoint paths of the torso."""
    z1, z2 = frozenset(z1), frozenset(z2)
    if not (z1 <= gp.u and z2 <= gp.u):
        raise InvalidInput("endpoints must lie in U")
    _check_paths(gp.graph, paths, z1, z2)
    t = torso(gp)
    out = []
    for p in paths:
        trace = tuple(v for v in p if v in gp.u)
        if not is_path(t, trace):
            raise AssertionError("trace is not a torso path")
        out.append(trace)
    return out


def _shortcut(p, core):
    """Jump from the first to the last vertex of p inside the clique ``core``."""
    idx = [t for t, v in enumerate(p) if v in core]
    if not idx:
        return p, None
    a, b = idx[0], idx[-1]
    return p[: a + 1] + p[b:] if a != b else p, (p[a], p[b])


def lift_paths_from_torso(np_, torso_paths, z1, z2):
    """Disjoint (Z1, Z2)-paths in G whose U-vertices lie on the given torso paths.

    One set B is peeled at a time: paths are lifted in the torso of V - (B - U)
    and the clique hops across U & B are replaced by linkages inside B.
    """
    gp = np_.pair if isinstance(np_, NicePair) else np_
    z1, z2 = frozenset(z1), frozenset(z2)
    if not (z1 <= gp.u and z2 <= gp.u):
        raise InvalidInput("endpoints must lie in U")
    _check_paths(torso(gp), torso_paths, z1, z2)
    return _lift(gp.graph, gp.u, list(gp.family), [tuple(p) for p in torso_paths])


def _lift(g, u, family, paths):
    if not family:
        return paths
    b = family[-1]
    core = b & u
    outer = g.remove_vertices(b - u).add_clique(core)
    paths = _lift(outer, u, family[:-1], paths)
    cut = []
    ends = {}
    for t, p in enumerate(paths):
        q, hop = _shortcut(p, core)
        cut.append(q)
        if hop:
            ends[t] = hop
    if not ends:
        return paths
    z1p = {hop[0] for hop in ends.values()}
    z2p = {hop[1] for hop in ends.values()}
    z0 = core - z1p - z2p
    h, _ = _inner_graph(g, u, b)
    res = max_disjoint_paths(h, z0 | z1p, z0 | z2p)
    if res.count < len(z0) + len(ends):
        raise InvalidInput("the pair is not nice: linkage inside a set is missing")
    link = {p[0]: p for p in res.paths}
    arrive = {hop[1]: t for t, hop in ends.items()}
    out = list(cut)
    for t, (a, _) in ends.items():
        q = cut[t]
        head = q[: q.index(a)]
        mid = link[a]
        tail_path = cut[arrive[mid[-1]]]
        tail = tail_path[tail_path.index(mid[-1]) + 1:]
        out[t] = head + mid + tail
    return out


def compose_nice_pairs(np_outer, np_inner):
    """A nice pair (U', B'') in G from a nice pair (U', B') in the torso of (U, B).

    The torso of the result equals the iterated torso.
    """
    outer = np_outer.pair if isinstance(np_outer, NicePair) else np_outer
    inner = np_inner.pair if isinstance(np_inner, NicePair) else np_inner
    if inner.graph != torso(outer):
        raise InvalidInput("inner pair must live in the torso of the outer pair")
    family = _compose(outer.graph, outer.u, list(outer.family), inner.u, list(inner.family))
    return GoodPair(outer.graph, inner.u, family)


def _compose(g, u, family, u2, fam2):
    if not family:
        return fam2
    b = family[-1]
    core = b & u
    outer = g.remove_vertices(b - u).add_clique(core)
    fam0 = _compose(outer, u, family[:-1], u2, fam2)
    if core <= u2:
        return fam0 + [b]
    for t, b0 in enumerate(fam0):
        if core <= b0:
            return fam0[:t] + [b | b0] + fam0[t + 1:]
    raise AssertionError("no set of the inner pair contains the clique")
