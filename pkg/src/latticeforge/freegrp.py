"""Stallings-folding machinery over the free group F(a, b).

Subgroups of a free group are represented by folded labeled core
graphs; the rank of the subgroup is edges - vertices + 1.  The module
uses this to witness rank growth of the kernel intersection

    N_n = <kernel words of psi of length <= n>

for a homomorphism psi: F(a, b) -> Z, and derives a Mayer-Vietoris
style lower bound for the rank of H2 of an amalgam over N_n.
"""

from __future__ import annotations

import dataclasses
import itertools

ALPHABET = "ab"


def _inv(ch: str) -> str:
    return ch.swapcase()


def reduce_word(w: str) -> str:
    out = []
    for ch in w:
        if ch.lower() not in ALPHABET:
            raise ValueError(f"unknown generator {ch!r}")
        if out and out[-1] == _inv(ch):
            out.pop()
        else:
            out.append(ch)
    return "".join(out)


class StallingsGraph:
    """Folded core graph of a finitely generated subgroup of F(a, b).

    Edges are the partial maps succ[label]: vertex -> vertex with label
    in {a, b}; traversing against an arrow reads the inverse letter.
    The base vertex is 0.  Instances are built by :func:`fold`.
    """

    def __init__(self, succ, n_vertices):
        self.succ = succ
        self.pred = {ch: {v: u for u, v in succ[ch].items()}
                     for ch in ALPHABET}
        self.n_vertices = n_vertices
        self.base = 0

    def _step(self, v: int, ch: str):
        if ch.islower():
            return self.succ[ch].get(v)
        return self.pred[ch.lower()].get(v)

    @property
    def n_edges(self) -> int:
        return sum(len(self.succ[ch]) for ch in ALPHABET)

    @property
    def rank(self) -> int:
        return self.n_edges - self.n_vertices + 1

    def accepts(self, w: str) -> bool:
        """Membership: the word reads a loop at the base vertex."""
        v = self.base
        for ch in reduce_word(w):
            v = self._step(v, ch)
            if v is None:
                return False
        return v == self.base

    def edge_list(self):
        return sorted((u, ch, v) for ch in ALPHABET
                      for u, v in self.succ[ch].items())

    def is_isomorphic(self, other: "StallingsGraph") -> bool:
        """Base-point preserving isomorphism via simultaneous traversal
        (folded graphs are deterministic automata)."""
        if (self.n_vertices != other.n_vertices
                or self.n_edges != other.n_edges):
            return False
        match = {self.base: other.base}
        stack = [self.base]
        while stack:
            u = stack.pop()
            for ch in ALPHABET + ALPHABET.upper():
                a, b = self._step(u, ch), other._step(match[u], ch)
                if (a is None) != (b is None):
                    return False
                if a is None:
                    continue
                if a in match:
                    if match[a] != b:
                        return False
                else:
                    match[a] = b
                    stack.append(a)
        return len(match) == self.n_vertices


def fold(words) -> StallingsGraph:
    """Folded core graph of the subgroup generated by the words.

    Each word is traced as a subdivided loop at the base vertex; the
    resulting graph is folded by merging the endpoints of same-label
    edges that share a source or a target until the edge maps are
    deterministic.  Loops at the base stay loops, so the folded graph
    is a core graph with no pruning needed.
    """
    edges = []
    n = 1
    for w in words:
        w = reduce_word(w)
        v = 0
        for i, ch in enumerate(w):
            nxt = 0 if i == len(w) - 1 else n
            if i != len(w) - 1:
                n += 1
            if ch.islower():
                edges.append([v, ch, nxt])
            else:
                edges.append([nxt, ch.lower(), v])
            v = nxt

    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        rx, ry = find(x), find(y)
        if rx != ry:
            # keep the smaller representative (the base stays 0)
            if ry < rx:
                rx, ry = ry, rx
            parent[ry] = rx

    changed = True
    while changed:
        changed = False
        out_map, in_map = {}, {}
        for u, ch, v in edges:
            ru, rv = find(u), find(v)
            if (ru, ch) in out_map and find(out_map[(ru, ch)]) != rv:
                union(out_map[(ru, ch)], rv)
                changed = True
            out_map[(ru, ch)] = rv
            if (rv, ch) in in_map and find(in_map[(rv, ch)]) != ru:
                union(in_map[(rv, ch)], ru)
                changed = True
            in_map[(rv, ch)] = ru

    folded = {(find(u), ch, find(v)) for u, ch, v in edges}
    verts = sorted({0} | {u for u, _, _ in folded} | {v for _, _, v in folded})
    index = {r: i for i, r in enumerate(verts)}
    succ = {ch: {} for ch in ALPHABET}
    for u, ch, v in folded:
        succ[ch][index[u]] = index[v]
    return StallingsGraph(succ, len(verts))


# -- kernel balls and the homology bound -------------------------------

@dataclasses.dataclass(frozen=True)
class ZHom:
    """Homomorphism F(a, b) -> Z by generator images."""

    a: int
    b: int

    def __post_init__(self):
        if self.a == 0 and self.b == 0:
            raise ValueError("the zero map has the whole group as kernel")

    def __call__(self, w: str) -> int:
        val = {"a": self.a, "b": self.b, "A": -self.a, "B": -self.b}
        return sum(val[ch] for ch in reduce_word(w))


def words_of_length(n: int):
    """All freely reduced words of length exactly n."""
    letters = ALPHABET + ALPHABET.upper()
    if n == 0:
        yield ""
        return
    for first in letters:
        for rest in itertools.product(letters, repeat=n - 1):
            w = first + "".join(rest)
            if all(w[i + 1] != _inv(w[i]) for i in range(n - 1)):
                yield w


def kernel_words(psi: ZHom, n: int):
    """Freely reduced nonempty words of length <= n in ker(psi)."""
    for ln in range(1, n + 1):
        for w in words_of_length(ln):
            if psi(w) == 0:
                yield w


def kernel_ball(psi: ZHom, n: int) -> StallingsGraph:
    """Folded graph of the subgroup generated by all kernel words of
    length at most n."""
    return fold(kernel_words(psi, n))


def h2_lower_bound(psi: ZHom, n: int, rank_H1_Fplus: int,
                   rank_H1_Fminus: int) -> int:
    """Lower bound for rank H2 of an amalgam of two groups over the
    length-n kernel subgroup N_n: by exactness of the Mayer-Vietoris
    sequence, rank H2 >= rank(N_n) - rank H1(F+) - rank H1(F-),
    clipped at zero."""
    if rank_H1_Fplus < 0 or rank_H1_Fminus < 0:
        raise ValueError("H1 ranks must be nonnegative")
    return max(0, kernel_ball(psi, n).rank
               - rank_H1_Fplus - rank_H1_Fminus)


def witness_table(psi: ZHom, lengths, rank_H1_Fplus: int = 8,
                  rank_H1_Fminus: int = 8):
    """Rows (n, kernel_rank, h2_lower_bound) for the witness CSV."""
    rows = []
    for n in lengths:
        r = kernel_ball(psi, n).rank
        rows.append((n, r, max(0, r - rank_H1_Fplus - rank_H1_Fminus)))
    return rows
