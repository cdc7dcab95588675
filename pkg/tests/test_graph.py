from __future__ import annotations

import random
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fanfree.errors import CapacityError, FeasibilityError, FormatError, ParameterError
from fanfree.graph import (
    MAX_N,
    Graph,
    GraphFamily,
    canonical_form,
    canonical_graph,
    canonical_labeling,
    complete,
    complete_bipartite,
    construct,
    cycle,
    disjoint_union,
    double_star,
    extremal_graph,
    fan,
    from_graph6,
    is_isomorphic,
    join,
    path,
    read_graph6_lines,
    star,
    star_plus_edge,
    to_graph6,
)

from oracles import atlas, edge_set, perm_canon


@st.composite
def graphs(draw, max_n=10):
    n = draw(st.integers(0, max_n))
    pairs = list(combinations(range(n), 2))
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return Graph.from_edges(n, chosen)


def random_graph(rng, n, p=0.5):
    return Graph.from_edges(n, [e for e in combinations(range(n), 2) if rng.random() < p])


# -- construction -----------------------------------------------------------


def test_family_sizes():
    assert (complete(5).n, complete(5).m) == (5, 10)
    assert (fan(6).n, fan(6).m) == (6, 9)
    assert (double_star(2, 3).n, double_star(2, 3).m) == (7, 6)
    assert (star(4).n, star(4).m) == (5, 4)
    assert star_plus_edge(3).m == 4
    assert cycle(5).m == 5 and path(5).m == 4
    assert complete_bipartite(2, 3).m == 6


def test_family_labelings():
    f = fan(6)
    assert f.neighbors(0) == [1, 2, 3, 4, 5]
    assert all(f.has_edge(i, i + 1) for i in range(1, 5))
    d = double_star(2, 3)
    assert d.has_edge(0, 1)
    assert d.neighbors(0) == [1, 2, 3]
    assert d.neighbors(1) == [0, 4, 5, 6]
    s = star_plus_edge(4)
    assert s.has_edge(1, 2) and s.degree(0) == 4


@pytest.mark.parametrize("tag,params", [
    ("fan", (2,)), ("cycle", (2,)), ("path", (0,)), ("star_plus_edge", (1,)),
    ("double_star", (0, 3)), ("double_star", (1,)), ("complete", (1, 2)), ("nope", (1,)),
    ("star", (-1,)),
])
def test_family_rejects_bad_params(tag, params):
    with pytest.raises(ParameterError):
        GraphFamily(tag, params)


def test_constructed_graphs_are_simple():
    for fam in [GraphFamily("complete", (7,)), GraphFamily("fan", (8,)), GraphFamily("double_star", (3, 1)),
                GraphFamily("cycle", (9,)), GraphFamily("empty", (4,)), GraphFamily("star_plus_edge", (5,))]:
        g = construct(fam)
        g.validate()
        a = g.adjacency_matrix()
        assert (a == a.T).all() and not a.diagonal().any()
        assert g.m * 2 == int(a.sum())


def test_join_examples():
    assert is_isomorphic(join(Graph.empty(1), path(5)), fan(6))
    j = join(complete(2), Graph.empty(4))
    assert (j.n, j.m) == (6, 9)
    g = cycle(5)
    assert join(Graph.empty(0), g) == g
    assert join(g, Graph.empty(0)) == g


def test_join_edge_identity():
    rng = random.Random(3)
    for _ in range(200):
        g = random_graph(rng, rng.randint(0, 10), rng.random())
        h = random_graph(rng, rng.randint(0, 10), rng.random())
        j = join(g, h)
        j.validate()
        assert j.m == g.m + h.m + g.n * h.n
        assert j.induced(range(g.n)) == g
        assert j.induced(range(g.n, g.n + h.n)) == h


def test_join_capacity():
    with pytest.raises(CapacityError):
        join(Graph.empty(MAX_N), Graph.empty(1))


def test_extremal_graph():
    g = extremal_graph(2, 9)
    assert (g.n, g.m) == (6, 9)
    assert is_isomorphic(g, join(complete(2), Graph.empty(4)))
    h = extremal_graph(3, 12)
    assert (h.n, h.m) == (6, 12)
    # brute recount of edges
    assert sum(1 for a, b in combinations(range(h.n), 2) if h.has_edge(a, b)) == 12
    for k in range(2, 6):
        for s in range(1, 12):
            m = k * s + k * (k - 1) // 2
            e = extremal_graph(k, m)
            assert e.m == m and min(e.degrees()) == k


def test_extremal_graph_infeasible():
    with pytest.raises(FeasibilityError) as exc:
        extremal_graph(2, 8)
    assert "3.5" in str(exc.value)
    assert "7" in str(exc.value) and "9" in str(exc.value)
    with pytest.raises(FeasibilityError):
        extremal_graph(3, 3)
    with pytest.raises(ParameterError):
        extremal_graph(1, 5)


def test_disjoint_union():
    g = disjoint_union(complete(3), path(2))
    assert (g.n, g.m) == (5, 4)
    assert g.components() == [[0, 1, 2], [3, 4]]


def test_graph_rejects_loops_and_ranges():
    with pytest.raises(ParameterError):
        Graph.from_edges(3, [(1, 1)])
    with pytest.raises(ParameterError):
        Graph.from_edges(3, [(0, 3)])
    with pytest.raises(ParameterError):
        Graph(2, (0,))
    with pytest.raises(ParameterError):
        Graph(2, (0b10, 0)).validate()


# -- graph6 -------------------------------------------------------------------


def test_graph6_hand_encodings():
    # K4: 6 one-bits -> 63 + 63 = '~'; n=4 -> 'C'
    assert to_graph6(complete(4)) == "C~"
    # K3: bits 111 padded to 111000 = 56 -> chr(119) = 'w'
    assert to_graph6(complete(3)) == "Bw"
    assert to_graph6(Graph.empty(0)) == "?"
    assert to_graph6(Graph.empty(1)) == "@"


def test_graph6_roundtrip_random():
    rng = random.Random(0)
    for _ in range(200):
        g = random_graph(rng, rng.randint(0, 20), rng.random())
        assert from_graph6(to_graph6(g)) == g


def test_graph6_long_form():
    rng = random.Random(1)
    g = random_graph(rng, 100, 0.1)
    s = to_graph6(g)
    assert s[0] == "~"
    assert from_graph6(s) == g
    assert from_graph6(">>graph6<<" + s) == g
    # the 8-byte form is accepted on decode as well
    assert from_graph6("~~????" + chr(63 + 1) + chr(63 + 36) + s[4:]) == g


def test_graph6_errors_report_offsets():
    with pytest.raises(FormatError) as e:
        from_graph6("C~x")
    assert e.value.offset == 2
    with pytest.raises(FormatError) as e:
        from_graph6("E~")
    assert "truncated" in str(e.value)
    with pytest.raises(FormatError) as e:
        from_graph6("C\x01")
    assert e.value.offset == 1
    with pytest.raises(FormatError):
        from_graph6("")
    with pytest.raises(FormatError):
        from_graph6("B~")  # padding bits set
    with pytest.raises(CapacityError):
        from_graph6("~?~?")


def test_read_graph6_lines_skips_blank():
    gs = read_graph6_lines(["C~\n", "\n", "Bw\n"])
    assert [g.m for g in gs] == [6, 3]


@given(graphs(max_n=14))
@settings(max_examples=200, deadline=None)
def test_graph6_roundtrip_property(g):
    assert from_graph6(to_graph6(g)) == g


# -- canonical form -------------------------------------------------------------


def test_canonical_examples():
    assert canonical_form(join(Graph.empty(1), path(5))) == canonical_form(fan(6))
    assert canonical_form(path(4)) != canonical_form(star(3))
    assert canonical_form(cycle(4)) == canonical_form(complete_bipartite(2, 2))


def test_canonical_matches_permutation_oracle_all_small_graphs():
    """For every pair of graphs with n <= 7: equal forms iff isomorphic by the n! oracle."""
    rng = random.Random(7)
    seen: dict[bytes, tuple] = {}
    oracle_seen: dict[tuple, bytes] = {}
    for n, edges in atlas(7):
        g = Graph.from_edges(n, edges)
        # a random relabeling must not change the form
        perm = list(range(n))
        rng.shuffle(perm)
        h = Graph.from_edges(n, [(perm[a], perm[b]) for a, b in edges])
        cf = canonical_form(g)
        assert canonical_form(h) == cf
        oc = perm_canon(n, edges)
        assert perm_canon(n, h.edges()) == oc
        assert seen.setdefault(cf, oc) == oc
        assert oracle_seen.setdefault(oc, cf) == cf
    assert len(seen) == len(oracle_seen) == 1252


def test_canonical_labeling_gives_canonical_graph():
    rng = random.Random(5)
    for _ in range(100):
        g = random_graph(rng, rng.randint(1, 12), rng.random())
        code, order = canonical_labeling(g)
        assert sorted(order) == list(range(g.n))
        c = canonical_graph(g)
        assert to_graph6(c).encode() == code
        assert edge_set(c) == {tuple(sorted((order.index(a), order.index(b)))) for a, b in g.edges()}


@given(graphs(max_n=9), st.randoms(use_true_random=False))
@settings(max_examples=150, deadline=None)
def test_canonical_form_relabel_invariant(g, rnd):
    perm = list(range(g.n))
    rnd.shuffle(perm)
    assert canonical_form(g.relabel(perm)) == canonical_form(g)


def test_canonical_regular_graphs():
    # vertex-transitive and strongly regular inputs stress the branching
    petersen = Graph.from_edges(10, [(i, (i + 1) % 5) for i in range(5)]
                                + [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
                                + [(i, i + 5) for i in range(5)])
    rng = random.Random(2)
    perm = list(range(10))
    rng.shuffle(perm)
    assert canonical_form(petersen) == canonical_form(petersen.relabel(perm))
    assert canonical_form(petersen) != canonical_form(cycle(10).add_edges([(i, i + 5) for i in range(5)]))


def test_canonical_capacity(monkeypatch):
    with pytest.raises(CapacityError):
        canonical_form(Graph.empty(17))
    monkeypatch.setenv("FANFREE_MAX_N", "20")
    assert canonical_form(Graph.empty(17))
    monkeypatch.setenv("FANFREE_MAX_N", "abc")
    with pytest.raises(ParameterError):
        canonical_form(Graph.empty(3))
