from __future__ import annotations

import csv
import io

import pytest

from fanfree import enumerate as en
from fanfree.enumerate import (
    CSV_HEADER,
    EnumSpec,
    all_classes,
    connected_classes,
    enumerate_connected,
    max_lambda_over_class,
    min_vertices,
    records_to_csv,
    verify_table,
)
from fanfree.errors import CapacityError, ParameterError
from fanfree.graph import Graph, canonical_form, complete, cycle, path, star, star_plus_edge, to_graph6
from fanfree.patterns import is_fan_free

from oracles import is_connected, labeled_class_count, perm_canon

# connected graphs by number of edges (OEIS A002905)
CONNECTED_BY_EDGES = [1, 1, 3, 5, 12, 30, 79, 227, 710]
# graphs without isolated vertices by number of edges (OEIS A000664)
NO_ISOLATED_BY_EDGES = [1, 2, 5, 11, 26, 68, 177]


def forms(graphs):
    return {canonical_form(g) for g in graphs}


def test_min_vertices():
    assert [min_vertices(m) for m in (1, 2, 3, 4, 6, 7, 10, 11)] == [2, 3, 3, 4, 4, 5, 5, 6]


def test_small_levels_by_name():
    assert forms(connected_classes(EnumSpec(m=1))) == {canonical_form(path(2))}
    assert forms(connected_classes(EnumSpec(m=3))) == forms([path(4), star(3), complete(3)])
    chair = Graph.from_edges(5, [(0, 1), (1, 2), (2, 3), (1, 4)])
    assert forms(connected_classes(EnumSpec(m=4))) == forms([path(5), star(4), chair, cycle(4), star_plus_edge(3)])


def test_counts_match_labeled_bruteforce():
    for m in range(1, 6):
        assert enumerate_connected(EnumSpec(m=m)) == labeled_class_count(m)


def test_counts_match_known_sequence():
    for m, expected in enumerate(CONNECTED_BY_EDGES, start=1):
        assert enumerate_connected(EnumSpec(m=m)) == expected


def test_isomorph_free_and_valid():
    for m in range(1, 9):
        gs = connected_classes(EnumSpec(m=m))
        codes = [canonical_form(g) for g in gs]
        assert len(set(codes)) == len(codes)
        for g in gs:
            assert g.m == m and g.is_connected()
        # independent oracle on the small ones
        small = [g for g in gs if g.n <= 7]
        oc = [perm_canon(g.n, g.edges()) for g in small]
        assert len(set(oc)) == len(oc)


def test_fan_filter_matches_post_filter():
    for k in (3, 4, 5, 6):
        for m in range(1, 9):
            filtered = forms(connected_classes(EnumSpec(m=m, k=k)))
            post = forms(g for g in connected_classes(EnumSpec(m=m)) if is_fan_free(g, k))
            assert filtered == post


def test_vertex_window():
    full = connected_classes(EnumSpec(m=6))
    window = connected_classes(EnumSpec(m=6, n_min=5, n_max=6))
    assert forms(window) == forms(g for g in full if 5 <= g.n <= 6)


def test_visit_order_independent_of_jobs(monkeypatch):
    seq1, seq2 = [], []
    monkeypatch.setattr(en, "_LEVELS", {})
    enumerate_connected(EnumSpec(m=7, k=6), lambda g: seq1.append(to_graph6(g)), jobs=1)
    monkeypatch.setattr(en, "_LEVELS", {})
    enumerate_connected(EnumSpec(m=7, k=6), lambda g: seq2.append(to_graph6(g)), jobs=2)
    assert seq1 == seq2 and len(seq1) > 0


def test_disconnected_mode_counts():
    for m, expected in enumerate(NO_ISOLATED_BY_EDGES, start=1):
        gs = all_classes(EnumSpec(m=m, connected_only=False))
        assert len(gs) == expected
        assert all(g.m == m and min(g.degrees()) >= 1 for g in gs)
        small = [g for g in gs if g.n <= 7]
        oc = [perm_canon(g.n, g.edges()) for g in small]
        assert len(set(oc)) == len(oc)
    gs = all_classes(EnumSpec(m=4, connected_only=False))
    assert sum(1 for g in gs if not is_connected(g.n, g.edges())) == 6


def test_spec_validation():
    with pytest.raises(ParameterError):
        EnumSpec(m=0)
    with pytest.raises(ParameterError):
        EnumSpec(m=3, k=2)
    with pytest.raises(ParameterError):
        EnumSpec(m=3, n_min=1)
    with pytest.raises(ParameterError):
        EnumSpec(m=3, n_min=4, n_max=3)
    with pytest.raises(CapacityError):
        enumerate_connected(EnumSpec(m=20))
    visited = []
    with pytest.raises(CapacityError):
        enumerate_connected(EnumSpec(m=3, n_max=17), visited.append)
    assert visited == []


def test_max_lambda_small():
    rec = max_lambda_over_class(5, 6)
    assert forms(rec.graphs()) == {canonical_form(complete(4).remove_edges([(0, 1)]))}
    assert rec.satisfies_bound
    assert rec.method == "exhaustive"
    assert rec.k == 2 and rec.fan == 6
    for g in rec.graphs():
        assert is_fan_free(g, 6)


def test_satisfies_bound_definition():
    for m in (3, 5, 7, 9):
        rec = max_lambda_over_class(m, 6)
        assert rec.satisfies_bound == (rec.lambda_hi <= rec.bound + 1e-9)


def test_verify_table_and_csv():
    assert verify_table(2, []) == []
    recs = verify_table(2, [5, 7, 9])
    assert [r.m for r in recs] == [5, 7, 9]
    assert all(r.method == "exhaustive" for r in recs)
    text = records_to_csv(recs)
    rows = list(csv.reader(io.StringIO(text)))
    assert rows[0] == CSV_HEADER
    assert len(rows) == 1 + sum(len(r.maximizers) for r in recs)
    assert rows[1][0] == "2" and rows[1][1] == "5" and rows[1][7] == "true"
    with pytest.raises(ParameterError):
        verify_table(2, [5], fan=7)


def test_verify_table_search_mode():
    (rec,) = verify_table(2, [89], restarts=2, budget=200, seed=1)
    assert rec.method == "search"
    assert rec.m == 89 and rec.graphs()[0].m == 89
    assert is_fan_free(rec.graphs()[0], 6)
    assert rec.satisfies_bound
