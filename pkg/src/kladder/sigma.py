"""Words and regular expressions over {a} u {s_k : k >= 1} u {s_inf}."""
from __future__ import annotations

import re
from dataclasses import dataclass
from functools import total_ordering

from .errors import InvalidInput


@total_ordering
class _Infinity:
    """Absorbing top element for parameter arithmetic."""

    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "INF"

    def __eq__(self, other):
        return other is self

    def __lt__(self, other):
        return False

    def __gt__(self, other):
        return other is not self

    def __le__(self, other):
        return other is self

    def __hash__(self):
        return hash("kladder-infinity")

    def __add__(self, other):
        return self

    __radd__ = __add__

    def __reduce__(self):
        return (_Infinity, ())


INF = _Infinity()


def is_inf(x):
    return x is INF


def value_to_json(x):
    return "inf" if x is INF else x


@dataclass(frozen=True, order=False)
class Letter:
    kind: str
    k: object = None

    def __post_init__(self):
        if self.kind == "a":
            if self.k is not None:
                raise InvalidInput("letter a carries no index")
        elif self.kind == "s":
            if not (self.k is INF or (isinstance(self.k, int) and self.k >= 1)):
                raise InvalidInput(f"s_k needs k >= 1 or infinity, got {self.k!r}")
        else:
            raise InvalidInput(f"unknown letter kind {self.kind!r}")

    def __str__(self):
        if self.kind == "a":
            return "a"
        return "sinf" if self.k is INF else f"s{self.k}"

    def sort_key(self):
        if self.kind == "a":
            return (0, 0)
        return (1, float("inf") if self.k is INF else self.k)


A = Letter("a")


def S(k):
    return Letter("s", k)


SINF = Letter("s", INF)


def letter_leq(x, y):
    """a <= a, s_i <= s_j for i <= j; a and s_i are incomparable."""
    if x.kind != y.kind:
        return False
    if x.kind == "a":
        return True
    return y.k is INF or (x.k is not INF and x.k <= y.k)


def higman_leq(u, w):
    """Subsequence embedding of u into w under letter_leq (greedy leftmost match)."""
    j = 0
    for x in u:
        while j < len(w) and not letter_leq(x, w[j]):
            j += 1
        if j == len(w):
            return False
        j += 1
    return True


_TOKEN = re.compile(r"\s*(?:(sinf|s\d+|a|eps)|(\()|(\))|(\*)|(\|)|(\^\d+))")


def _tokens(text):
    pos = 0
    out = []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise InvalidInput(f"cannot parse {text[pos:]!r}")
        pos = m.end()
        word, lp, rp, star, bar, power = m.groups()
        if word:
            out.append(("letter", _letter(word)) if word != "eps" else ("eps", None))
        elif lp:
            out.append(("(", None))
        elif rp:
            out.append((")", None))
        elif star:
            out.append(("*", None))
        elif bar:
            out.append(("|", None))
        else:
            out.append(("^", int(power[1:])))
    return out


def _letter(tok):
    if tok == "a":
        return A
    if tok == "sinf":
        return SINF
    k = int(tok[1:])
    if k < 1:
        raise InvalidInput("s_k needs k >= 1")
    return S(k)


def parse_word(text):
    """Parse a word such as ``"a a s2"``; the empty string is the empty word."""
    toks = _tokens(text)
    out = []
    for kind, val in toks:
        if kind == "letter":
            out.append(val)
        elif kind == "^" and out:
            out.extend([out[-1]] * (val - 1))
        elif kind != "eps":
            raise InvalidInput(f"words contain letters only: {text!r}")
    return tuple(out)


def word_to_str(w):
    return " ".join(map(str, w))


# regex syntax tree: ("empty",) ("eps",) ("letter", L) ("cat", x, y) ("alt", x, y) ("star", x)

def parse_regex(text):
    toks = _tokens(text)
    pos = [0]

    def peek():
        return toks[pos[0]][0] if pos[0] < len(toks) else None

    def expr():
        node = term()
        while peek() == "|":
            pos[0] += 1
            node = ("alt", node, term())
        return node

    def term():
        node = ("eps",)
        while peek() in ("letter", "(", "eps"):
            f = factor()
            node = f if node == ("eps",) else ("cat", node, f)
        return node

    def factor():
        node = atom()
        while peek() in ("*", "^"):
            kind, val = toks[pos[0]]
            pos[0] += 1
            if kind == "*":
                node = ("star", node)
            else:
                rep = ("eps",)
                for _ in range(val):
                    rep = node if rep == ("eps",) else ("cat", rep, node)
                node = rep
        return node

    def atom():
        kind, val = toks[pos[0]]
        pos[0] += 1
        if kind == "letter":
            return ("letter", val)
        if kind == "eps":
            return ("eps",)
        node = expr()
        if peek() != ")":
            raise InvalidInput(f"unbalanced parentheses in {text!r}")
        pos[0] += 1
        return node

    node = expr()
    if pos[0] != len(toks):
        raise InvalidInput(f"unexpected token in {text!r}")
    return node


def regex_letters(node):
    if node[0] == "letter":
        return {node[1]}
    out = set()
    for child in node[1:]:
        if isinstance(child, tuple):
            out |= regex_letters(child)
    return out


class NFA:
    def __init__(self):
        self.trans = []
        self.start = None
        self.final = None

    def state(self):
        self.trans.append([])
        return len(self.trans) - 1


def _build(nfa, node):
    s, f = nfa.state(), nfa.state()
    kind = node[0]
    if kind == "eps":
        nfa.trans[s].append((None, f))
    elif kind == "letter":
        nfa.trans[s].append((node[1], f))
    elif kind == "cat":
        s1, f1 = _build(nfa, node[1])
        s2, f2 = _build(nfa, node[2])
        nfa.trans[s].append((None, s1))
        nfa.trans[f1].append((None, s2))
        nfa.trans[f2].append((None, f))
    elif kind == "alt":
        for child in node[1:]:
            s1, f1 = _build(nfa, child)
            nfa.trans[s].append((None, s1))
            nfa.trans[f1].append((None, f))
    elif kind == "star":
        s1, f1 = _build(nfa, node[1])
        nfa.trans[s].extend([(None, s1), (None, f)])
        nfa.trans[f1].extend([(None, s1), (None, f)])
    elif kind != "empty":
        raise InvalidInput(f"bad regex node {node!r}")
    return s, f


def thompson(node):
    nfa = NFA()
    nfa.start, nfa.final = _build(nfa, node)
    return nfa


class DFA:
    """Deterministic automaton with integer states 0..n-1 and start state 0."""

    def __init__(self, delta, accepting):
        self.delta = delta
        self.accepting = accepting

    def accepts(self, word):
        q = 0
        for x in word:
            q = self.delta[q].get(x)
            if q is None:
                return False
        return q in self.accepting

    @property
    def states(self):
        return range(len(self.delta))


def _determinize(trans, starts, finals, letters):
    def closure(states):
        out = set(states)
        stack = list(states)
        while stack:
            q = stack.pop()
            for lab, r in trans[q]:
                if lab is None and r not in out:
                    out.add(r)
                    stack.append(r)
        return frozenset(out)

    first = closure(starts)
    index = {first: 0}
    delta = [{}]
    todo = [first]
    letters = sorted(letters, key=Letter.sort_key)
    while todo:
        cur = todo.pop()
        i = index[cur]
        for x in letters:
            nxt = closure({r for q in cur for lab, r in trans[q] if lab == x})
            if not nxt:
                continue
            if nxt not in index:
                index[nxt] = len(delta)
                delta.append({})
                todo.append(nxt)
            delta[i][x] = index[nxt]
    accepting = {index[s] for s in index if s & finals}
    return _trim(DFA(delta, accepting))


def _trim(dfa):
    """Drop states that cannot reach an accepting state (state 0 is kept)."""
    live = set(dfa.accepting)
    changed = True
    while changed:
        changed = False
        for q, row in enumerate(dfa.delta):
            if q not in live and any(r in live for r in row.values()):
                live.add(q)
                changed = True
    delta = [{x: r for x, r in row.items() if r in live} if q in live else {} for q, row in enumerate(dfa.delta)]
    return DFA(delta, set(dfa.accepting))


def regex_dfa(node):
    nfa = thompson(node)
    return _determinize(nfa.trans, {nfa.start}, {nfa.final}, regex_letters(node))


def reversed_regex_dfa(node):
    """DFA reading words of the language from right to left."""
    nfa = thompson(node)
    rev = [[] for _ in nfa.trans]
    for q, row in enumerate(nfa.trans):
        for lab, r in row:
            rev[r].append((lab, q))
    return _determinize(rev, {nfa.final}, {nfa.start}, regex_letters(node))


def language_is_empty(dfa):
    return 0 not in dfa.accepting and not dfa.delta[0]
