"""Tree and path decompositions, relative (G, S) decompositions, k-dismantability,
the Helly covering dichotomy and decomposition gluing."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache

from .errors import InvalidInput, check_size
from .graph import (
    Graph,
    bits_of,
    canon_bits,
    clique_sum_parts_bits,
    connected_components,
    is_connected_set,
    key_to_bits,
    sub_bits,
    to_bits,
)


@dataclass(frozen=True)
class Report:
    """Outcome of a validation: ``ok`` or the first violation found."""

    ok: bool
    kind: str = ""
    item: object = None
    detail: str = ""

    def __bool__(self):
        return self.ok

    def to_dict(self):
        if self.ok:
            return {"ok": True}
        item = sorted(self.item) if isinstance(self.item, (set, frozenset)) else self.item
        return {"ok": False, "kind": self.kind, "item": item, "detail": self.detail}


OK = Report(True)


class TreeDecomposition:
    """A tree together with a bag (frozenset of vertices) per tree node."""

    __slots__ = ("tree", "bags")

    def __init__(self, tree_edges, bags):
        bags = {int(x): frozenset(b) for x, b in dict(bags).items()}
        if not bags:
            raise InvalidInput("a tree decomposition needs at least one node")
        tree = Graph(bags, tree_edges)
        if tree.m != tree.n - 1 or not tree.is_connected():
            raise InvalidInput("decomposition tree is not a tree")
        self.tree = tree
        self.bags = bags

    @classmethod
    def single(cls, bag=()):
        return cls([], {0: bag})

    @property
    def nodes(self):
        return self.tree.sorted_vertices()

    @property
    def tree_edges(self):
        return self.tree.edges

    def vertices(self):
        out = set()
        for b in self.bags.values():
            out |= b
        return frozenset(out)

    def width(self):
        return max(len(b) for b in self.bags.values()) - 1

    def adhesion(self):
        return max((len(self.bags[x] & self.bags[y]) for x, y in self.tree.edges), default=0)

    def occupancy(self, u):
        return frozenset(x for x, b in self.bags.items() if u in b)

    def side(self, x, y):
        """Node set of T_{x|y}: the component of x in T minus the edge xy."""
        seen = {x}
        stack = [x]
        while stack:
            z = stack.pop()
            for w in self.tree.neighbors(z):
                if w not in seen and not (z == x and w == y):
                    seen.add(w)
                    stack.append(w)
        return frozenset(seen)

    def tree_path(self, x, y):
        """Node sequence of the tree path from x to y."""
        parent = {x: None}
        stack = [x]
        while stack:
            z = stack.pop()
            for w in self.tree.neighbors(z):
                if w not in parent:
                    parent[w] = z
                    stack.append(w)
        path = [y]
        while path[-1] != x:
            path.append(parent[path[-1]])
        return path[::-1]

    def distances_from(self, sources):
        dist = {s: 0 for s in sources}
        frontier = list(sources)
        while frontier:
            nxt = []
            for z in frontier:
                for w in sorted(self.tree.neighbors(z)):
                    if w not in dist:
                        dist[w] = dist[z] + 1
                        nxt.append(w)
            frontier = nxt
        return dist

    def restrict(self, nodes):
        nodes = frozenset(nodes)
        return TreeDecomposition(
            [e for e in self.tree.edges if e[0] in nodes and e[1] in nodes],
            {x: self.bags[x] for x in nodes},
        )

    def map_bags(self, fn):
        return TreeDecomposition(self.tree.edges, {x: fn(x, b) for x, b in self.bags.items()})

    def relabel_nodes(self, offset):
        return TreeDecomposition(
            [(x + offset, y + offset) for x, y in self.tree.edges],
            {x + offset: b for x, b in self.bags.items()},
        )

    def is_path(self):
        return all(self.tree.degree(x) <= 2 for x in self.tree.vertices)

    def path_order(self):
        if not self.is_path():
            raise InvalidInput("decomposition tree is not a path")
        if self.tree.n == 1:
            return self.nodes
        ends = [x for x in self.nodes if self.tree.degree(x) == 1]
        return self.tree_path(ends[0], ends[1])

    def __eq__(self, other):
        if not isinstance(other, TreeDecomposition):
            return NotImplemented
        return self.tree == other.tree and self.bags == other.bags

    def __repr__(self):
        bags = {x: sorted(b) for x, b in sorted(self.bags.items())}
        return f"TreeDecomposition(edges={list(self.tree.edges)}, bags={bags})"

    def to_dict(self):
        return {
            "tree_edges": [list(e) for e in self.tree.edges],
            "bags": {str(x): sorted(self.bags[x]) for x in self.nodes},
        }

    @classmethod
    def from_dict(cls, d):
        try:
            return cls([tuple(e) for e in d["tree_edges"]], {int(x): b for x, b in d["bags"].items()})
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidInput(f"malformed decomposition: {exc}") from None

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True)

    def to_dot(self, name="T"):
        lines = [f"graph {name} {{"]
        for x in self.nodes:
            label = ",".join(map(str, sorted(self.bags[x])))
            lines.append(f'  {x} [shape=box,label="{x}: {{{label}}}"];')
        for x, y in self.tree.edges:
            lines.append(f"  {x} -- {y};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def _subtree_connected(d, nodes):
    return bool(nodes) and len(connected_components(d.tree, nodes)) == 1


def check_occupancy(d, vertices=None):
    """Condition (1): each vertex occupies a nonempty connected subtree."""
    vertices = d.vertices() if vertices is None else vertices
    for u in sorted(vertices):
        occ = d.occupancy(u)
        if not _subtree_connected(d, occ):
            return Report(False, "vertex", u, f"nodes containing {u} do not form a nonempty subtree")
    return OK


def validate_tree_decomposition(g, d):
    foreign = d.vertices() - g.vertices
    if foreign:
        u = min(foreign)
        return Report(False, "vertex", u, f"bag vertex {u} is not in the graph")
    rep = check_occupancy(d, g.vertices)
    if not rep:
        return rep
    for u, v in g.edges:
        if not any(u in b and v in b for b in d.bags.values()):
            return Report(False, "edge", (u, v), f"edge {u}-{v} lies in no bag")
    return OK


def validate_gs_decomposition(g, s, d):
    s = frozenset(s)
    if not s <= g.vertices:
        raise InvalidInput("S must be a subset of V(G)")
    rep = validate_tree_decomposition(g.induced(s), d)
    if not rep:
        return rep
    for comp in connected_components(g, g.vertices - s):
        nb = g.neighborhood(comp)
        if not any(nb <= b for b in d.bags.values()):
            return Report(False, "component", comp, f"no bag contains N({sorted(comp)}) = {sorted(nb)}")
    return OK


# k-dismantability

def is_k_dismantable(d, k):
    """Return (flag, moves).

    Removing a vertex from every bag and restricting to a subtree both keep a
    k-dismantable decomposition k-dismantable, so any legal move can be taken
    without backtracking. Moves are recorded in pre-order: ``("base",)``,
    ``("remove", v)`` and ``("split", x, y)``, the x side being dismantled
    before the y side.
    """
    if k < 1:
        raise InvalidInput("k must be positive")
    moves = []
    ok = _dismantle(d, frozenset(d.tree.vertices), frozenset(), k, moves)
    return ok, moves


def _dismantle(d, nodes, removed, k, moves):
    while True:
        bags = {x: d.bags[x] - removed for x in nodes}
        if len(nodes) == 1 and not next(iter(bags.values())):
            moves.append(("base",))
            return True
        common = frozenset.intersection(*bags.values())
        if common:
            v = min(common)
            moves.append(("remove", v))
            removed = removed | {v}
            continue
        for x, y in d.tree.edges:
            if x in nodes and y in nodes and len(bags[x] & bags[y]) < k:
                moves.append(("split", x, y))
                left = d.side(x, y) & nodes
                right = nodes - left
                return _dismantle(d, left, removed, k, moves) and _dismantle(d, right, removed, k, moves)
        moves.append(("stuck", sorted(nodes)))
        return False


def replay_dismantling(d, k, moves):
    """Independently check a move list produced by is_k_dismantable."""
    it = iter(moves)

    def run(nodes, removed):
        move = next(it, None)
        if move is None:
            return False
        bags = {x: d.bags[x] - removed for x in nodes}
        if move[0] == "base":
            return len(nodes) == 1 and not next(iter(bags.values()))
        if move[0] == "remove":
            v = move[1]
            return all(v in b for b in bags.values()) and run(nodes, removed | {v})
        if move[0] == "split":
            x, y = move[1], move[2]
            if x not in nodes or y not in nodes or not d.tree.has_edge(x, y):
                return False
            if len(bags[x] & bags[y]) >= k:
                return False
            left = d.side(x, y) & nodes
            return run(left, removed) and run(nodes - left, removed)
        return False

    return run(frozenset(d.tree.vertices), frozenset()) and next(it, None) is None


# bounded dismantling search

def dismantle_search(g, k, t):
    """A k-dismantable tree decomposition of g of width < t, or None."""
    check_size(g.n, 10, "dismantle_search")
    if k < 1 or t < 0:
        raise InvalidInput("need k >= 1 and t >= 0")
    order, adj = to_bits(g)
    key, perm = canon_bits(adj)
    if not _feasible(key, k, t):
        return None
    edges, bags = _feasible_witness(key, k, t)
    return TreeDecomposition(edges, {x: {order[perm[i]] for i in b} for x, b in enumerate(bags)})


@lru_cache(maxsize=1 << 22)
def _feasible(key, k, t):
    adj = key_to_bits(key)
    n = len(adj)
    if n == 0:
        return True
    if t == 0:
        return False
    return _first_move(adj, k, t) is not None


def _first_move(adj, k, t):
    n = len(adj)
    full = (1 << n) - 1
    for u in range(n):
        idx = bits_of(full & ~(1 << u))
        if _feasible(canon_bits(sub_bits(adj, idx))[0], k, t - 1):
            return ("remove", u, idx)
    for smask in range(full + 1):
        if bin(smask).count("1") >= k:
            continue
        parts = clique_sum_parts_bits(adj, smask)
        if parts and all(_feasible(canon_bits(child)[0], k, t) for _, child in parts):
            return ("split", smask, parts)
    return None


def _feasible_witness(key, k, t):
    adj = key_to_bits(key)
    if len(adj) == 0:
        return [], [frozenset()]
    move = _first_move(adj, k, t)
    if move[0] == "remove":
        _, u, idx = move
        edges, bags = _child_witness(sub_bits(adj, idx), idx, k, t - 1)
        return edges, [b | {u} for b in bags]
    _, smask, parts = move
    return glue_at_separator(
        [_child_witness(child, idx, k, t) for idx, child in parts], frozenset(bits_of(smask))
    )


def _child_witness(child, idx, k, t):
    key, perm = canon_bits(child)
    edges, bags = _feasible_witness(key, k, t)
    return edges, [frozenset(idx[perm[i]] for i in b) for b in bags]


def glue_at_separator(witnesses, sep):
    """Join decompositions that pairwise share exactly ``sep`` by linking nodes covering it."""
    edges, bags = [], []
    anchor0 = None
    for child_edges, child_bags in witnesses:
        off = len(bags)
        bags.extend(child_bags)
        edges.extend((x + off, y + off) for x, y in child_edges)
        anchor = off + next(i for i, b in enumerate(child_bags) if sep <= b)
        if anchor0 is None:
            anchor0 = anchor
        else:
            edges.append((anchor0, anchor))
    return edges, bags


# projections and the Helly dichotomy

def _as_vertex_set(h):
    return frozenset(h.vertices) if isinstance(h, Graph) else frozenset(h)


def projection_of_subgraph(g, d, h):
    vs = _as_vertex_set(h)
    if not is_connected_set(g, vs):
        raise InvalidInput(f"subgraph {sorted(vs)} is not connected")
    nodes = frozenset(x for x, b in d.bags.items() if b & vs)
    if not _subtree_connected(d, nodes):
        raise InvalidInput("projection is not a subtree; is the decomposition valid?")
    return nodes


@dataclass(frozen=True)
class Disjoint:
    members: tuple

    def to_dict(self):
        return {"arm": "disjoint", "members": [sorted(m) for m in self.members]}


@dataclass(frozen=True)
class Cover:
    nodes: tuple = field(default_factory=tuple)

    def to_dict(self):
        return {"arm": "cover", "nodes": list(self.nodes)}


def helly_cover(g, d, fam, dcount):
    """Either dcount members with pairwise disjoint projections, or at most
    dcount - 1 bags whose union meets every member."""
    if dcount < 1:
        raise InvalidInput("dcount must be positive")
    members = [_as_vertex_set(h) for h in fam]
    projections = [projection_of_subgraph(g, d, h) for h in members]
    root = min(d.tree.vertices)
    depth = d.distances_from([root])
    tops = [min(p, key=lambda x: (depth[x], x)) for p in projections]
    alive = list(range(len(members)))
    chosen, roots = [], []
    while alive and len(chosen) < dcount:
        i = max(alive, key=lambda j: (depth[tops[j]], -j))
        chosen.append(members[i])
        r = tops[i]
        roots.append(r)
        alive = [j for j in alive if r not in projections[j]]
    if len(chosen) == dcount:
        return Disjoint(tuple(chosen))
    return Cover(tuple(roots))


def verify_helly(g, d, fam, dcount, result):
    members = [_as_vertex_set(h) for h in fam]
    if isinstance(result, Disjoint):
        if len(result.members) != dcount or any(m not in members for m in result.members):
            return False
        projs = [projection_of_subgraph(g, d, m) for m in result.members]
        return all(not (projs[i] & projs[j]) for i in range(len(projs)) for j in range(i))
    if len(result.nodes) > dcount - 1:
        return False
    union = set()
    for x in result.nodes:
        union |= d.bags[x]
    return all(m & union for m in members)


# gluing relative decompositions

def combine_gs_decompositions(g, parts):
    """Glue decompositions of (G, S_1), ..., (G, S_m) into one of (G, S_1 u ... u S_m).

    Each component C of G minus the sets handled so far receives a copy of
    the next decomposition restricted to C, whose bags are enlarged by the
    bag covering N(C), hung below that bag's node.
    """
    parts = [(frozenset(s), d) for s, d in parts]
    if not parts:
        raise InvalidInput("need at least one part")
    for s, d in parts:
        rep = validate_gs_decomposition(g, s, d)
        if not rep:
            raise InvalidInput(f"part for S={sorted(s)} is invalid: {rep.detail}")
    covered, acc = parts[0]
    for s, d in parts[1:]:
        edges = list(acc.tree.edges)
        bags = dict(acc.bags)
        nxt = max(bags) + 1
        for comp in connected_components(g, g.vertices - covered):
            inner = comp & s
            if not inner:
                continue
            nb = g.neighborhood(comp)
            anchor = min(x for x, b in acc.bags.items() if nb <= b)
            local = {x: d.bags[x] & comp for x in d.nodes}
            rename = {x: nxt + i for i, x in enumerate(d.nodes)}
            nxt += len(rename)
            for x, y in d.tree.edges:
                edges.append((rename[x], rename[y]))
            for x, b in local.items():
                bags[rename[x]] = b | acc.bags[anchor]
            edges.append((anchor, rename[min(d.nodes)]))
        covered = covered | s
        acc = TreeDecomposition(edges, bags)
    return acc
