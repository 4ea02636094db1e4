"""Tests for the quadrilateral-of-groups combinatorics: normal forms,
cell enumeration, 4-chains and local geodesics."""

import random

import pytest

from latticeforge import squares as sq

Q = sq.QuadOfGroups(g1_generators=[])


# -- free word oracle --------------------------------------------------

def reduce_oracle(w):
    """Naive repeated-scan free reduction."""
    w = list(w)
    changed = True
    while changed:
        changed = False
        for i in range(len(w) - 1):
            if w[i] == w[i + 1].swapcase():
                del w[i:i + 2]
                changed = True
                break
    return "".join(w)


def random_word(rng, n):
    return "".join(rng.choice("abcdABCD") for _ in range(n))


def test_reduce_matches_oracle():
    rng = random.Random(0)
    for _ in range(300):
        w = random_word(rng, rng.randrange(0, 14))
        assert sq.reduce_word(w) == reduce_oracle(w)


def test_inverse_and_mul():
    rng = random.Random(1)
    for _ in range(100):
        w = sq.reduce_word(random_word(rng, 10))
        assert sq.mul(w, sq.inv(w)) == ""
        u = sq.reduce_word(random_word(rng, 6))
        assert sq.mul(sq.mul(w, u), sq.inv(u)) == w


# -- normal forms ------------------------------------------------------

def test_normal_form_trivial():
    nf = sq.normal_form([sq.Letter(1, "a"), sq.Letter(1, "A")])
    assert nf.is_trivial
    assert nf.word == "" and nf.syllables == ()


def test_normal_form_same_vertex_merges():
    nf = sq.normal_form([sq.Letter(2, "bc"), sq.Letter(2, "Cb")])
    assert nf.word == "bb"
    assert len(nf.syllables) == 1


def test_normal_form_tag_error():
    with pytest.raises(sq.TagError):
        sq.Letter(1, "c")
    with pytest.raises(sq.TagError):
        sq.Letter(3, "ab")
    with pytest.raises(sq.TagError):
        sq.Letter(5, "a")


def test_normal_form_alternation_preserved():
    """Freely reduced words alternating between the two halves keep one
    syllable per block, as the free-product normal form dictates."""
    rng = random.Random(2)
    minus = "bB"
    plus = "dD"
    for _ in range(50):
        blocks = []
        n = rng.randrange(1, 6)
        for i in range(n):
            side = minus if i % 2 == 0 else plus
            blocks.append(rng.choice(side) * rng.randrange(1, 3))
        nf = sq.normal_form(blocks)
        assert len(nf.syllables) == n
        assert nf.word == "".join(blocks)


def test_normal_form_is_congruence():
    """nf(uv) depends only on the reduced words of u and v."""
    rng = random.Random(3)
    for _ in range(100):
        u = random_word(rng, 8)
        v = random_word(rng, 8)
        direct = sq.normal_form([u, v])
        via = sq.normal_form([sq.normal_form([u]).word,
                              sq.normal_form([v]).word])
        assert direct == via


# -- the symmetry ------------------------------------------------------

def test_sigma_involutions():
    rng = random.Random(4)
    for _ in range(50):
        w = sq.reduce_word(random_word(rng, 8))
        assert sq.sigma_act(sq.sigma_act(w, 1, 0), 1, 0) == w
        assert sq.sigma_act(sq.sigma_act(w, 0, 1), 0, 1) == w
        # the two involutions commute
        assert (sq.sigma_act(sq.sigma_act(w, 1, 0), 0, 1)
                == sq.sigma_act(sq.sigma_act(w, 0, 1), 1, 0))


def test_sigma_permutes_types():
    e = {x: sq.edge_cell(x, "") for x in "abcd"}
    assert sq.sigma_cell(e["b"], 1, 0) == e["d"]
    assert sq.sigma_cell(e["d"], 1, 0) == e["b"]
    assert sq.sigma_cell(e["a"], 1, 0) == e["a"]
    assert sq.sigma_cell(e["a"], 0, 1) == e["c"]
    assert sq.sigma_cell(e["b"], 0, 1) == e["b"]


def test_extword_group_laws():
    rng = random.Random(5)
    els = [sq.ExtWord(sq.reduce_word(random_word(rng, 5)),
                      rng.randrange(2), rng.randrange(2))
           for _ in range(12)]
    for g in els:
        assert (g * g.inverse()).is_trivial
    for g, h, k in zip(els, els[1:], els[2:]):
        assert (g * h) * k == g * (h * k)


# -- cells -------------------------------------------------------------

def test_enumerate_radius_zero_and_one():
    c0 = sq.enumerate_cells(Q, 0)
    assert len(c0.vertices) == 1 and not c0.edges and not c0.squares
    assert sq.BASE_VERTEX in c0.vertices
    c1 = sq.enumerate_cells(Q, 1)
    assert len(c1.vertices) == 4
    assert len(c1.edges) == 4
    assert {e.label for e in c1.edges} == set("abcd")
    assert len(c1.squares) == 1


def test_enumerate_monotone_and_incident():
    prev = None
    for n in range(4):
        cs = sq.enumerate_cells(Q, n)
        if prev is not None:
            assert prev.vertices <= cs.vertices
            assert prev.edges <= cs.edges
            assert len(cs) >= len(prev)
        for e in cs.edges:
            for v in sq.edge_endpoints(e):
                assert v in cs.vertices
        prev = cs


def test_enumerate_budget_error():
    with pytest.raises(sq.BudgetError):
        sq.enumerate_cells(Q, 4, budget=20)


def test_adjacency_export_consistent():
    cs = sq.enumerate_cells(Q, 2)
    adj = cs.adjacency()
    assert adj["radius"] == 2
    assert len(adj["vertices"]) == len(cs.vertices)
    for key, ends in adj["edges"].items():
        assert len(ends) == 2
        assert all(v in adj["vertices"] for v in ends)


def test_canonical_reps():
    assert sq.vertex_cell(1, "ab").rep == ""
    assert sq.vertex_cell(1, "cab").rep == "c"
    assert sq.edge_cell("a", "baa").rep == "b"
    assert sq.edge_cell("a", "bA").rep == "b"


# -- squares through edge pairs ----------------------------------------

def brute_square_through(e1, e2, depth=3):
    """Oracle: scan all squares with small representatives."""
    hits = []
    words = [""]
    frontier = [""]
    for _ in range(depth):
        new = []
        for w in frontier:
            for ch in "abcdABCD":
                if w and w[-1] == ch.swapcase():
                    continue
                new.append(w + ch)
        words.extend(new)
        frontier = new
    for w in words:
        f = sq.square_cell(w)
        edges = sq.square_edges(f)
        if e1 in edges and e2 in edges:
            hits.append(f)
    return hits


def test_square_through_matches_oracle():
    rng = random.Random(6)
    for _ in range(60):
        x, y = rng.sample("abcd", 2)
        w1 = sq.reduce_word(random_word(rng, 2))
        w2 = sq.reduce_word(random_word(rng, 2))
        e1, e2 = sq.edge_cell(x, w1), sq.edge_cell(y, w2)
        got = sq.square_through(e1, e2)
        hits = brute_square_through(e1, e2)
        if got is None:
            assert hits == []
        else:
            assert hits == [got]


# -- local geodesics ---------------------------------------------------

def test_local_geodesic_basics():
    e_a = sq.edge_cell("a", "")
    e_b = sq.edge_cell("b", "")
    e_c = sq.edge_cell("c", "")
    assert sq.local_geodesic([e_a])
    assert not sq.local_geodesic([e_a, e_a])
    # three sides of the base square can be shortcut by the fourth
    assert not sq.local_geodesic([e_a, e_b, e_c])
    # same turn, but the third edge leaves the square
    assert sq.local_geodesic([e_a, e_b, sq.edge_cell("c", "b")])
    with pytest.raises(ValueError):
        sq.local_geodesic([e_a, e_c])
    with pytest.raises(ValueError):
        sq.local_geodesic([e_a, e_b], k=4)


def test_local_geodesic_k2_vs_k3():
    e_a = sq.edge_cell("a", "")
    e_b = sq.edge_cell("b", "")
    e_c = sq.edge_cell("c", "")
    assert sq.local_geodesic([e_a, e_b, e_c], k=2)
    assert not sq.local_geodesic([e_a, e_b, e_c], k=3)


# -- chains ------------------------------------------------------------

def test_chains4_are_local_geodesics():
    chains = sq.chains4(sq.enumerate_cells(Q, 2))
    assert chains
    for c in chains[::7]:
        assert sq.local_geodesic(list(c.edges), 3)
        assert len(c.shared_vertices) == 3


def test_chain_labels_translation_invariant():
    chains = sq.chains4(sq.enumerate_cells(Q, 2))
    rng = random.Random(7)
    for c in chains[::25]:
        g = sq.reduce_word(random_word(rng, 4))
        moved = sq.Chain4(
            edges=tuple(sq.translate(e, g) for e in c.edges),
            shared_vertices=tuple(sq.translate(v, g)
                                  for v in c.shared_vertices))
        assert moved.label == c.label


def test_chain_label_set_finite_and_stable():
    l2 = set(sq.chain_label_set(2))
    l3 = set(sq.chain_label_set(3))
    assert l2 == l3
    assert len(l2) == 212
    # exhaustive small-radius enumeration agrees
    sub = {c.label for c in sq.chains4(sq.enumerate_cells(Q, 2))}
    assert sub <= l2


def test_links_bipartite_without_bigons():
    cs = sq.enumerate_cells(Q, 2)
    for v in list(cs.vertices)[:8]:
        assert sq.link_is_bipartite_without_bigons(cs, v)
