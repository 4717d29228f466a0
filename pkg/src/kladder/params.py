"""Exact solvers for k-treedepth, k-pathdepth, treedepth, treewidth and the
word/regex parameters p_w, p_L.

Every solver works on bitmask graphs and memoizes on canonical keys, so
isomorphic subproblems are solved once. Infinity is the ``INF`` sentinel.
"""
from __future__ import annotations

import itertools
from functools import lru_cache

from .decomp import TreeDecomposition, glue_at_separator
from .errors import InvalidInput, check_size
from .graph import (
    Graph,
    bit_components,
    bits_of,
    canon_bits,
    canonical_form,
    clique_sum_parts_bits,
    connected_components,
    degeneracy_bits,
    key_to_bits,
    key_to_graph,
    popcount,
    sub_bits,
    to_bits,
)
from .sigma import A, INF, Letter, higman_leq, parse_regex, reversed_regex_dfa  # noqa: F401

MEMO = 1 << 22


def _clip_k(k, n):
    if k is INF:
        return max(n, 1)
    if not isinstance(k, int) or k < 1:
        raise InvalidInput(f"k must be a positive integer or INF, got {k!r}")
    return min(k, max(n, 1))


# k-treedepth

def k_treedepth(g, k, witness=True):
    """Exact td_k(g), with a k-dismantable decomposition of width td_k - 1."""
    check_size(g.n, 10, "k_treedepth")
    order, adj = to_bits(g)
    key, perm = canon_bits(adj)
    value = _tdk(key, _clip_k(k, g.n))
    if not witness:
        return value, None
    edges, bags = _tdk_witness(key, _clip_k(k, g.n))
    d = TreeDecomposition(edges, {x: {order[perm[i]] for i in b} for x, b in enumerate(bags)})
    return value, d


@lru_cache(maxsize=MEMO)
def _tdk(key, k):
    adj = key_to_bits(key)
    n = len(adj)
    if n == 0:
        return 0
    full = (1 << n) - 1
    comps = bit_components(adj, full)
    if len(comps) > 1:
        # the split at the empty separator is optimal, by minor-monotonicity
        return max(_tdk(canon_bits(sub_bits(adj, bits_of(c)))[0], _clip_k(k, popcount(c))) for c in comps)
    lower = degeneracy_bits(adj) + 1
    best = n
    for u in range(n):
        if best == lower:
            return best
        idx = bits_of(full & ~(1 << u))
        child = canon_bits(sub_bits(adj, idx))[0]
        best = min(best, 1 + _tdk(child, _clip_k(k, n - 1)))
    for smask in _separators(n, k):
        if best == lower:
            return best
        val = _split_value(adj, smask, k, best)
        if val is not None and val < best:
            best = val
    return best


def _separators(n, k):
    """Masks of size < k (and <= n - 2) in increasing numeric order."""
    masks = []
    for size in range(min(k - 1, n - 2) + 1):
        for combo in itertools.combinations(range(n), size):
            masks.append(sum(1 << i for i in combo))
    return sorted(masks)


def _split_value(adj, smask, k, bound):
    parts = clique_sum_parts_bits(adj, smask)
    if not parts:
        return None
    worst = 0
    for idx, child in parts:
        v = _tdk(canon_bits(child)[0], _clip_k(k, len(idx)))
        worst = max(worst, v)
        if worst >= bound:
            return worst
    return worst


def _tdk_witness(key, k):
    adj = key_to_bits(key)
    n = len(adj)
    if n == 0:
        return [], [frozenset()]
    target = _tdk(key, k)
    full = (1 << n) - 1
    for u in range(n):
        idx = bits_of(full & ~(1 << u))
        child = sub_bits(adj, idx)
        if 1 + _tdk(canon_bits(child)[0], _clip_k(k, n - 1)) == target:
            edges, bags = _mapped(_tdk_witness, child, idx, k)
            return edges, [b | {u} for b in bags]
    for smask in _separators(n, k):
        val = _split_value(adj, smask, k, target + 1)
        if val == target:
            parts = clique_sum_parts_bits(adj, smask)
            pieces = [_mapped(_tdk_witness, child, idx, k) for idx, child in parts]
            return glue_at_separator(pieces, frozenset(bits_of(smask)))
    raise AssertionError("no move reproduces the optimum")


def _mapped(fn, child, idx, k):
    ckey, perm = canon_bits(child)
    edges, bags = fn(ckey, _clip_k(k, len(idx)))
    return edges, [frozenset(idx[perm[i]] for i in b) for b in bags]


# classical oracles

def treedepth_oracle(g):
    """td(G): 0 if empty, max over components, 1 + min_u td(G-u) if connected."""
    check_size(g.n, 12, "treedepth_oracle")
    return _td(canonical_form(g))


@lru_cache(maxsize=MEMO)
def _td(key):
    g = key_to_graph(key)
    if g.n == 0:
        return 0
    comps = connected_components(g)
    if len(comps) > 1:
        return max(_td(canonical_form(g.induced(c))) for c in comps)
    return 1 + min(_td(canonical_form(g.remove_vertex(u))) for u in g)


def treewidth_oracle(g):
    """Exact treewidth by dynamic programming over elimination prefixes."""
    check_size(g.n, 12, "treewidth_oracle")
    if g.n == 0:
        return -1
    _, adj = to_bits(g)
    n = len(adj)
    full = (1 << n) - 1

    def q_size(prefix, v):
        # vertices outside prefix u {v} reachable from v through prefix
        seen = 1 << v
        frontier = 1 << v
        out = 0
        while frontier:
            low = frontier & -frontier
            frontier ^= low
            nb = adj[low.bit_length() - 1] & ~seen
            seen |= nb
            out |= nb & ~prefix
            frontier |= nb & prefix
        return popcount(out)

    tw = {0: -1}
    for size in range(1, n + 1):
        for combo in itertools.combinations(range(n), size):
            s = sum(1 << v for v in combo)
            tw[s] = min(max(tw[s & ~(1 << v)], q_size(s & ~(1 << v), v)) for v in combo)
    return tw[full]


def pathwidth_oracle(g):
    """Exact pathwidth as vertex separation number over vertex orderings."""
    check_size(g.n, 12, "pathwidth_oracle")
    if g.n == 0:
        return -1
    _, adj = to_bits(g)
    n = len(adj)
    full = (1 << n) - 1
    vs = {0: 0}
    for size in range(1, n + 1):
        for combo in itertools.combinations(range(n), size):
            s = sum(1 << v for v in combo)
            boundary = sum(1 for v in combo if adj[v] & ~s & full)
            vs[s] = max(boundary, min(vs[s & ~(1 << v)] for v in combo))
    return vs[full]


# k-pathdepth

def k_pathdepth(g, k, witness=True):
    """Exact pd_k(g) with a k-dismantable path decomposition as witness.

    f(V', A, B) is the least width + 1 of a k-dismantable path decomposition
    of G[V'] whose first bag contains A and last bag contains B. A path either
    has a vertex in every bag, or splits at an edge with adhesion X (|X| < k)
    into a path for G[V1] ending at X and one for G[V2] starting at X, where
    V1 and V2 are separated by X.
    """
    check_size(g.n, 8, "k_pathdepth")
    order, adj = to_bits(g)
    n = len(adj)
    kk = _clip_k(k, n)
    memo = {}

    def f(mask, a, b):
        st = (mask, a, b)
        if st in memo:
            return memo[st][0]
        memo[st] = (INF, None)
        if mask == 0:
            memo[st] = (0, ("base",))
            return 0
        best, move = popcount(mask), None
        for v in bits_of(mask):
            val = 1 + f(mask & ~(1 << v), a & ~(1 << v), b & ~(1 << v))
            if val < best or move is None and val == best:
                best, move = val, ("remove", v)
        lower = max(popcount(a), popcount(b), 1)
        for x in _submasks_below(mask, kk):
            if best <= lower:
                break
            comps = bit_components(adj, mask & ~x)
            if len(comps) < 2:
                continue
            for sel in range(1, (1 << len(comps)) - 1):
                left = x | sum(c for i, c in enumerate(comps) if sel >> i & 1)
                right = x | sum(c for i, c in enumerate(comps) if not sel >> i & 1)
                if a & ~left or b & ~right:
                    continue
                v1 = f(left, a, x)
                if v1 >= best:
                    continue
                val = max(v1, f(right, x, b))
                if val < best:
                    best, move = val, ("split", left, right, x)
        memo[st] = (best, move)
        return best

    full = (1 << n) - 1
    value = f(full, 0, 0)
    if not witness:
        return value, None

    def build(mask, a, b):
        _, move = memo[(mask, a, b)]
        if move[0] == "base":
            return [frozenset()]
        if move[0] == "remove":
            v = move[1]
            return [bag | {v} for bag in build(mask & ~(1 << v), a & ~(1 << v), b & ~(1 << v))]
        _, left, right, x = move
        return build(left, a, x) + build(right, x, b)

    seq = build(full, 0, 0)
    d = TreeDecomposition(
        [(i, i + 1) for i in range(len(seq) - 1)],
        {i: {order[p] for p in bag} for i, bag in enumerate(seq)},
    )
    return value, d


def _submasks_below(mask, k):
    bits = bits_of(mask)
    for size in range(0, min(k, len(bits) - 1)):
        for combo in itertools.combinations(bits, size):
            yield sum(1 << v for v in combo)


# clique-sum splits

def clique_sum_splits(g, k):
    """All splits (S, G1, G2) with |S| < k, both sides strictly larger than S.

    G - S is divided into two nonempty groups of components and each side is
    G[S u group] with S turned into a clique.
    """
    verts = g.sorted_vertices()
    limit = len(verts) if k is INF else k
    out = []
    for size in range(0, min(limit, len(verts))):
        for sep in itertools.combinations(verts, size):
            sep = frozenset(sep)
            comps = connected_components(g, g.vertices - sep)
            if len(comps) < 2:
                continue
            first, rest = comps[0], comps[1:]
            for r in range(len(rest)):
                for extra in itertools.combinations(range(len(rest)), r):
                    side1 = set(first).union(*(rest[i] for i in extra))
                    side2 = g.vertices - sep - side1
                    g1 = g.induced(sep | side1).add_clique(sep)
                    g2 = g.induced(sep | side2).add_clique(sep)
                    out.append((sep, g1, g2))
    return out


# p_w for a single word

def p_word(g, w):
    """p_w(G) read from the right end of w, as in the three defining recursions."""
    check_size(g.n, 9, "p_word")
    w = tuple(w)
    for x in w:
        if not isinstance(x, Letter):
            raise InvalidInput(f"not a letter: {x!r}")
    return _p_word(canonical_form(g), w)


@lru_cache(maxsize=MEMO)
def _p_word(key, w):
    g = key_to_graph(key)
    if not w:
        return 0 if g.n == 0 else INF
    if g.n == 0:
        return 0
    head, last = w[:-1], w[-1]
    best = _p_word(key, head)
    if last.kind == "a":
        for u in g:
            best = min(best, _p_word(canonical_form(g.remove_vertex(u)), head) + 1)
    else:
        for _, g1, g2 in clique_sum_splits(g, last.k):
            best = min(best, max(_p_word(canonical_form(g1), w), _p_word(canonical_form(g2), w)))
    return best


# p_L for a regular language

def p_regex(g, r):
    """min over words w of the language of p_w(g).

    All branches created by clique-sum splits read the same word, so the
    search state is the set of pending branches (graph, remaining budget)
    together with the state of a DFA reading the word from its right end.
    For a budget t the search decides whether one word lets every branch be
    emptied with at most t deletions; the answer is the least feasible t.
    """
    check_size(g.n, 9, "p_regex")
    node = parse_regex(r) if isinstance(r, str) else r
    dfa = reversed_regex_dfa(node)
    if 0 not in dfa.accepting and not dfa.delta[0]:
        return INF
    key = canonical_form(g)
    if g.n == 0:
        return 0
    search = _BranchSearch(dfa)
    lower = degeneracy_bits(key_to_bits(key)) + 1
    for t in range(lower, g.n + 1):
        if search.feasible(frozenset({(key, t)}), 0):
            return t
    return INF


class _BranchSearch:
    def __init__(self, dfa):
        self.dfa = dfa
        self.memo = {}
        self.reach = {}

    def reachable(self, q):
        if q not in self.reach:
            seen = {q}
            stack = [q]
            while stack:
                p = stack.pop()
                for r in self.dfa.delta[p].values():
                    if r not in seen:
                        seen.add(r)
                        stack.append(r)
            self.reach[q] = sorted(seen)
        return self.reach[q]

    def feasible(self, branches, q):
        if not branches:
            return True
        st = (branches, q)
        if st in self.memo:
            return self.memo[st]
        self.memo[st] = False
        ok = all(t >= _lower(key) for key, t in branches) and self._search(branches, q)
        self.memo[st] = ok
        return ok

    def _search(self, branches, q):
        items = sorted(branches)
        for q1 in self.reachable(q):
            for x, q2 in sorted(self.dfa.delta[q1].items(), key=lambda e: e[0].sort_key()):
                if x.kind == "a":
                    options = [[((key, t),)] + [((c, t - 1),) for c in _deletions(key)] for key, t in items]
                else:
                    options = [
                        [tuple((c, t) for c in leaves) for leaves in _split_outcomes(key, _clip_k(x.k, key[0]))]
                        for key, t in items
                    ]
                for choice in itertools.product(*options):
                    if all(len(c) == 1 and c[0] == it for c, it in zip(choice, items)):
                        continue
                    if self.feasible(_normalise(p for part in choice for p in part), q2):
                        return True
        return False


def _normalise(pairs):
    best = {}
    for key, t in pairs:
        if key[0] == 0:
            continue
        best[key] = min(best.get(key, t), t)
    return frozenset(best.items())


@lru_cache(maxsize=MEMO)
def _lower(key):
    return degeneracy_bits(key_to_bits(key)) + 1


@lru_cache(maxsize=MEMO)
def _deletions(key):
    adj = key_to_bits(key)
    n = len(adj)
    full = (1 << n) - 1
    return tuple(sorted({canon_bits(sub_bits(adj, bits_of(full & ~(1 << u))))[0] for u in range(n)}))


@lru_cache(maxsize=MEMO)
def _split_outcomes(key, k):
    """All sets of leaves reachable by repeated (<k)-clique-sum splitting."""
    adj = key_to_bits(key)
    n = len(adj)
    out = {frozenset([key])}
    for smask in _separators(n, k):
        parts = clique_sum_parts_bits(adj, smask)
        if not parts:
            continue
        child_opts = [_split_outcomes(canon_bits(child)[0], _clip_k(k, len(idx))) for idx, child in parts]
        for combo in itertools.product(*child_opts):
            out.add(frozenset().union(*combo))
    return tuple(sorted(out, key=lambda s: sorted(s)))
