"""Quadrilateral of groups and its developed square complex.

The quadrilateral Q has four vertex groups, four cyclic edge groups and
a trivial face group, together with a Z2 x Z2 symmetry generated by two
involutions.  When the two designated cyclic subgroups generate a free
group of rank 2 (the Schottky situation this package certifies), the
fundamental group of Q is free on four letters a, b, c, d, one per edge
group, with vertex groups

    G1 = <a, b>,  G2 = <b, c>,  G3 = <c, d>,  G4 = <d, a>

and the splitting G = G- *_E G+ where G- = <G1, G2> = <a, b, c>,
G+ = <G3, G4> = <a, c, d> and E = <a, c> is free of rank 2.

Words are plain strings over "abcd" with uppercase letters denoting
inverses.  Cells of the developed complex are cosets of the vertex,
edge and (trivial) face groups, canonicalized by stripping trailing
letters of the respective free factor.
"""

from __future__ import annotations

import dataclasses
import itertools
import os


class TagError(ValueError):
    """A letter's word uses generators outside its claimed factor."""


class BudgetError(RuntimeError):
    """Cell enumeration exceeded the configured cell budget."""


GENS = "abcd"

#: generator alphabet of each vertex group
VERTEX_ALPHABET = {1: "ab", 2: "bc", 3: "cd", 4: "da"}

#: endpoints (vertex indices) of each edge type
EDGE_VERTICES = {"a": (4, 1), "b": (1, 2), "c": (2, 3), "d": (3, 4)}

#: edge types as written in the source complex
EDGE_TYPE = {"a": "eps1", "b": "eps2", "c": "eps3", "d": "eps4"}

DEFAULT_BUDGET = 10 ** 6


def _budget() -> int:
    return int(os.environ.get("LATTICEFORGE_BUDGET", DEFAULT_BUDGET))


# -- free words --------------------------------------------------------

def inv(w: str) -> str:
    return w[::-1].swapcase()


def reduce_word(w: str) -> str:
    out = []
    for ch in w:
        if ch.lower() not in GENS:
            raise ValueError(f"unknown generator {ch!r}")
        if out and out[-1] == ch.swapcase():
            out.pop()
        else:
            out.append(ch)
    return "".join(out)


def mul(*words: str) -> str:
    return reduce_word("".join(words))


def cyclic_power(ch: str, k: int) -> str:
    """The word ch**k (uppercase for negative k)."""
    return (ch if k >= 0 else ch.upper()) * abs(k)


# -- amalgam letters and normal forms ----------------------------------

@dataclasses.dataclass(frozen=True)
class Letter:
    """An element of a vertex group, given as a word in its two
    generators."""

    vertex: int
    word: str

    def __post_init__(self):
        if self.vertex not in VERTEX_ALPHABET:
            raise TagError(f"unknown vertex {self.vertex}")
        alpha = VERTEX_ALPHABET[self.vertex]
        for ch in self.word.lower():
            if ch not in alpha:
                raise TagError(
                    f"generator {ch!r} is not in vertex group {self.vertex}")
        object.__setattr__(self, "word", reduce_word(self.word))


@dataclasses.dataclass(frozen=True)
class NormalForm:
    """Reduced word together with its alternating G-/G+ syllables."""

    word: str
    syllables: tuple

    @property
    def is_trivial(self) -> bool:
        return self.word == ""

    def __len__(self):
        return len(self.word)


def _split_syllables(w: str):
    """Greedy factorization into maximal alternating blocks: letters b
    force the G- side, letters d the G+ side, and a, c (the E letters)
    extend the current block."""
    side_of = {"b": "-", "d": "+"}
    syllables = []
    cur = []
    cur_side = None
    for ch in w:
        side = side_of.get(ch.lower())
        if side is not None and cur_side is not None and side != cur_side:
            syllables.append("".join(cur))
            cur = []
            cur_side = side
        elif side is not None:
            cur_side = side
        cur.append(ch)
    if cur:
        syllables.append("".join(cur))
    return tuple(syllables)


def normal_form(letters) -> NormalForm:
    """Normal form of a product of vertex-group letters.

    Accepts Letter instances or plain words (str).  The result is the
    freely reduced product with its alternating syllable split; the
    form is empty exactly when the product is trivial.
    """
    parts = []
    for item in letters:
        parts.append(item.word if isinstance(item, Letter) else
                     reduce_word(item))
    w = mul(*parts)
    return NormalForm(word=w, syllables=_split_syllables(w))


# -- the Z2 x Z2 symmetry and the extension ----------------------------

_SIGMA1 = str.maketrans("bdBD", "dbDB")    # swaps eps2 and eps4
_SIGMA2 = str.maketrans("acAC", "caCA")    # swaps eps1 and eps3


def sigma_act(word: str, s1: int, s2: int) -> str:
    if s1 % 2:
        word = word.translate(_SIGMA1)
    if s2 % 2:
        word = word.translate(_SIGMA2)
    return word


@dataclasses.dataclass(frozen=True)
class ExtWord:
    """Element of the extension <G, sigma1, sigma2>: a word in G and a
    pair of involution flags, multiplied semidirectly."""

    word: str = ""
    s1: int = 0
    s2: int = 0

    def __post_init__(self):
        object.__setattr__(self, "word", reduce_word(self.word))
        object.__setattr__(self, "s1", self.s1 % 2)
        object.__setattr__(self, "s2", self.s2 % 2)

    def __mul__(self, other: "ExtWord") -> "ExtWord":
        return ExtWord(mul(self.word, sigma_act(other.word, self.s1,
                                                self.s2)),
                       self.s1 + other.s1, self.s2 + other.s2)

    def inverse(self) -> "ExtWord":
        return ExtWord(sigma_act(inv(self.word), self.s1, self.s2),
                       self.s1, self.s2)

    @property
    def is_trivial(self) -> bool:
        return self.word == "" and self.s1 == 0 and self.s2 == 0


# -- the quadrilateral -------------------------------------------------

@dataclasses.dataclass
class QuadOfGroups:
    """Quadrilateral data: the vertex group's generator matrices and the
    two designated cyclic edge subgroups.

    The matrices are carried for the geometric realization; the
    combinatorics below only uses the free model, which is valid when
    t1, t2 generate a free group of rank 2 (the scenarios certify this
    separately through the faithfulness sweep).
    """

    g1_generators: list
    t1: object = None
    t2: object = None

    def normal_form(self, letters) -> NormalForm:
        return normal_form(letters)


# -- cells of the developed complex ------------------------------------

@dataclasses.dataclass(frozen=True)
class Cell:
    """A cell of the developed complex: kind "v" (vertex, label is the
    vertex index), "e" (edge, label is the edge generator) or "f"
    (square, label empty), with a canonical coset representative."""

    kind: str
    label: object
    rep: str

    def __repr__(self):
        return f"Cell({self.kind}, {self.label}, {self.rep!r})"


def vertex_cell(v: int, g: str) -> Cell:
    alpha = VERTEX_ALPHABET[v]
    g = reduce_word(g)
    cut = len(g)
    while cut > 0 and g[cut - 1].lower() in alpha:
        cut -= 1
    return Cell("v", v, g[:cut])


def edge_cell(gen: str, g: str) -> Cell:
    g = reduce_word(g)
    cut = len(g)
    while cut > 0 and g[cut - 1].lower() == gen:
        cut -= 1
    return Cell("e", gen, g[:cut])


def square_cell(g: str) -> Cell:
    return Cell("f", "", reduce_word(g))


def edge_endpoints(e: Cell):
    u, v = EDGE_VERTICES[e.label]
    return vertex_cell(u, e.rep), vertex_cell(v, e.rep)


def square_edges(f: Cell):
    return tuple(edge_cell(x, f.rep) for x in GENS)


def edge_type(e: Cell) -> str:
    return EDGE_TYPE[e.label]


def translate(cell: Cell, g: str) -> Cell:
    """Left translation of a cell by a group element."""
    moved = mul(g, cell.rep)
    if cell.kind == "v":
        return vertex_cell(cell.label, moved)
    if cell.kind == "e":
        return edge_cell(cell.label, moved)
    return square_cell(moved)


def sigma_cell(cell: Cell, s1: int, s2: int) -> Cell:
    """Action of the Z2 x Z2 symmetry on a cell."""
    vperm = {1: 1, 2: 2, 3: 3, 4: 4}
    if s1 % 2:
        vperm = {v: {1: 4, 2: 3, 3: 2, 4: 1}[vperm[v]] for v in vperm}
    if s2 % 2:
        vperm = {v: {1: 2, 2: 1, 3: 4, 4: 3}[vperm[v]] for v in vperm}
    rep = sigma_act(cell.rep, s1, s2)
    if cell.kind == "v":
        return vertex_cell(vperm[cell.label], rep)
    if cell.kind == "e":
        return edge_cell(sigma_act(cell.label, s1, s2), rep)
    return square_cell(rep)


BASE_VERTEX = vertex_cell(1, "")


@dataclasses.dataclass
class CellSet:
    radius: int
    vertices: set
    edges: set
    squares: set

    def __len__(self):
        return len(self.vertices) + len(self.edges) + len(self.squares)

    def adjacency(self) -> dict:
        """JSON-ready adjacency lists: each edge with its endpoints,
        each square with its boundary edges (restricted to the set)."""
        def key(c):
            return f"{c.kind}:{c.label}:{c.rep}"

        out = {"radius": self.radius,
               "vertices": sorted(key(c) for c in self.vertices),
               "edges": {}, "squares": {}}
        for e in sorted(self.edges, key=key):
            out["edges"][key(e)] = [key(x) for x in edge_endpoints(e)]
        for f in sorted(self.squares, key=key):
            out["squares"][key(f)] = [key(x) for x in square_edges(f)]
        return out


def _ball_words(n: int, budget: int):
    """All reduced words of length <= n over the four generators."""
    count = 0
    frontier = [""]
    yield ""
    for _ in range(n):
        new = []
        for w in frontier:
            for ch in GENS + GENS.upper():
                if w and w[-1] == ch.swapcase():
                    continue
                count += 1
                if count > budget:
                    raise BudgetError(
                        f"cell budget {budget} exceeded at radius {n}")
                nw = w + ch
                new.append(nw)
                yield nw
        frontier = new


def enumerate_cells(Q, n: int, budget: int = None) -> CellSet:
    """Cells of the developed complex within radius n of the base
    vertex: radius 0 is the base vertex alone; for n >= 1 every cell
    whose canonical coset representative has length < n is included.
    """
    if budget is None:
        budget = _budget()
    if n == 0:
        return CellSet(0, {BASE_VERTEX}, set(), set())
    vertices, edges, squares = set(), set(), set()
    for w in _ball_words(n - 1, budget):
        for v in VERTEX_ALPHABET:
            vertices.add(vertex_cell(v, w))
        for x in GENS:
            edges.add(edge_cell(x, w))
        squares.add(square_cell(w))
        if len(vertices) + len(edges) + len(squares) > budget:
            raise BudgetError(f"cell budget {budget} exceeded at radius {n}")
    return CellSet(n, vertices, edges, squares)


# -- squares through edge pairs and local geodesics --------------------

def _parse_two_runs(w: str, first: str, second: str):
    """Parse w as first**m . second**t; return (m, t) or None."""
    i = 0
    while i < len(w) and w[i].lower() == first:
        i += 1
    m = sum(1 if ch == first else -1 for ch in w[:i])
    if abs(m) != i:
        return None
    rest = w[i:]
    if any(ch.lower() != second for ch in rest):
        return None
    t = sum(1 if ch == second else -1 for ch in rest)
    if abs(t) != len(rest):
        return None
    return m, t


def square_through(e1: Cell, e2: Cell):
    """The unique square containing both edges, or None.

    Solves w1 x**k = w2 y**m in the free group: the squares containing
    the edge coset w<x> are exactly w x**k, so a common square exists
    iff inv(w2) w1 is of the form y**m x**(-k).
    """
    if e1.kind != "e" or e2.kind != "e":
        raise ValueError("square_through expects edge cells")
    x, y = e1.label, e2.label
    if x == y:
        return None
    u = mul(inv(e2.rep), e1.rep)
    parsed = _parse_two_runs(u, y, x)
    if parsed is None:
        return None
    _, t = parsed
    return square_cell(mul(e1.rep, cyclic_power(x, -t)))


def share_face(e1: Cell, e2: Cell) -> bool:
    return square_through(e1, e2) is not None


def share_vertex(e1: Cell, e2: Cell):
    """The common endpoint of two distinct edges, or None."""
    a = set(edge_endpoints(e1))
    b = set(edge_endpoints(e2))
    common = a & b
    if not common:
        return None
    if len(common) > 1:
        raise ValueError("edge pair bounds a bigon; complex is degenerate")
    return next(iter(common))


def local_geodesic(path, k: int = 3) -> bool:
    """Whether the edge path is a k-local geodesic in the 1-skeleton.

    Supported windows: k = 2 (no backtracking) and k = 3 (additionally
    no three consecutive edges on a common square, which is the only
    way a non-backtracking length-3 path fails to be geodesic in a
    CAT(0) square complex with bigon-free links).  Larger windows would
    require global geodesy and are out of scope.
    """
    if k not in (2, 3):
        raise ValueError("only k = 2 or 3 local geodesics are supported")
    path = list(path)
    if len(path) <= 1:
        return True
    hand_offs = []
    for e, f in zip(path, path[1:]):
        if e == f:
            return False
        y = share_vertex(e, f)
        if y is None:
            raise ValueError("path edges are not consecutive")
        hand_offs.append(y)
    for y1, y2 in zip(hand_offs, hand_offs[1:]):
        if y1 == y2:
            raise ValueError("path edges are not consecutive")
    if k == 2:
        return True
    for e, f, g in zip(path, path[1:], path[2:]):
        s = square_through(e, f)
        if s is not None and g in square_edges(s):
            return False
    return True


# -- 4-chains ----------------------------------------------------------

@dataclasses.dataclass(frozen=True)
class Chain4:
    """Four consecutive edges whose concatenation is a 3-local
    geodesic, labeled by the data that determines its combinatorial
    isomorphism class."""

    edges: tuple
    shared_vertices: tuple

    @property
    def label(self):
        types = tuple(edge_type(e) for e in self.edges)
        faces = tuple(share_face(a, b)
                      for a, b in zip(self.edges, self.edges[1:]))
        return types, faces


def _other_endpoint(e: Cell, v: Cell) -> Cell:
    a, b = edge_endpoints(e)
    return b if a == v else a


def chains4(cells: CellSet):
    """All (directed) 4-chains among the enumerated edges."""
    incident = {}
    for e in cells.edges:
        for v in edge_endpoints(e):
            incident.setdefault(v, []).append(e)

    chains = []
    for e1 in cells.edges:
        for start in edge_endpoints(e1):
            # walk entering e1 at `start`
            paths = [([e1], _other_endpoint(e1, start))]
            for _ in range(3):
                grown = []
                for p, pos in paths:
                    for f in incident.get(pos, ()):
                        if f == p[-1]:
                            continue
                        grown.append((p + [f], _other_endpoint(f, pos)))
                paths = grown
            for p, _pos in paths:
                if local_geodesic(p, 3):
                    ys = tuple(share_vertex(a, b)
                               for a, b in zip(p, p[1:]))
                    chains.append(Chain4(edges=tuple(p),
                                         shared_vertices=ys))
    return chains


def chain_classes(chains):
    """The (finite) set of combinatorial isomorphism labels."""
    return sorted({c.label for c in chains})


def _incident_edges(vertex: Cell, cap: int):
    """Edges incident to a vertex whose representatives stay within
    `cap` letters of it."""
    v, g = vertex.label, vertex.rep
    alpha = VERTEX_ALPHABET[v]
    words = [""]
    frontier = [""]
    for _ in range(cap):
        new = []
        for w in frontier:
            for ch in alpha + alpha.upper():
                if w and w[-1] == ch.swapcase():
                    continue
                new.append(w + ch)
        words.extend(new)
        frontier = new
    out = set()
    for x in alpha:
        for w in words:
            out.add(edge_cell(x, mul(g, w)))
    return out


def chain_label_set(cap: int = 3):
    """Labels of all 4-chains reachable with coset representatives at
    most `cap` letters deep.

    Labels are translation invariant, so the first edge can be pinned
    to a base edge and the walk re-centered after every step; the label
    set is finite and stabilizes once cap exceeds the depth needed to
    realize every face pattern.
    """
    labels = set()
    # level entries: (prev_edge, cur_edge(=base), position, partial label)
    level = []
    for x in GENS:
        e1 = edge_cell(x, "")
        for start in edge_endpoints(e1):
            pos = _other_endpoint(e1, start)
            level.append((None, e1, pos, ((edge_type(e1),), ())))
    for _ in range(3):
        nxt = set()
        for prev, cur, pos, (types, faces) in level:
            for f in _incident_edges(pos, cap):
                if f == cur:
                    continue
                if prev is not None:
                    s = square_through(prev, cur)
                    if s is not None and f in square_edges(s):
                        continue
                lab = (types + (edge_type(f),),
                       faces + (share_face(cur, f),))
                # re-center so the new edge is a base edge
                g = inv(f.rep)
                nxt.add((translate(cur, g), translate(f, g),
                         translate(_other_endpoint(f, pos), g), lab))
        level = nxt
    for _prev, _cur, _pos, lab in level:
        labels.add(lab)
    return sorted(labels)


# -- link audit --------------------------------------------------------

def link_is_bipartite_without_bigons(cells: CellSet, vertex: Cell) -> bool:
    """Audit the link of a vertex on the enumerated squares: corners
    join edges of the two incident types (bipartite by construction)
    and no two squares share the same corner pair."""
    seen = set()
    for f in cells.squares:
        for x, y in itertools.combinations(GENS, 2):
            e1, e2 = edge_cell(x, f.rep), edge_cell(y, f.rep)
            if share_vertex(e1, e2) != vertex:
                continue
            if edge_type(e1) == edge_type(e2):
                return False
            pair = frozenset((e1, e2))
            if pair in seen:
                return False
            seen.add(pair)
    return True
