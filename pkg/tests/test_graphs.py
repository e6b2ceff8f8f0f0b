"""Tests for the graph core: codecs, local complementation, populations."""

import itertools

import pytest

from graphent.errors import CapacityError, Graph6Error
from graphent.graphs import (
    Graph,
    LcWitness,
    are_isomorphic,
    as_vertex_set,
    can_disconnect_by_lc,
    connected_components,
    enumerate_connected_graphs,
    family,
    find_isomorphism,
    format_edge_list,
    induced_subgraph,
    is_connected,
    lc_orbit,
    local_complement,
    parse_edge_list,
    parse_graph6,
    to_graph6,
)

# connected / total isomorphism classes on n vertices, n = 1..7; reproduced
# independently by a canonical-form augmentation enumeration before freezing
CONNECTED_COUNTS = {1: 1, 2: 1, 3: 2, 4: 6, 5: 21, 6: 112, 7: 853}
ALL_CLASS_COUNTS = {1: 1, 2: 2, 3: 4, 4: 11, 5: 34, 6: 156, 7: 1044}


def all_labeled_graphs(n):
    """Every labeled simple graph on n vertices."""
    pairs = list(itertools.combinations(range(n), 2))
    for bits in range(1 << len(pairs)):
        yield Graph.from_edges(n, [p for k, p in enumerate(pairs) if (bits >> k) & 1])


# ---------------------------------------------------------------------------
# Graph construction

def test_from_edges_rejects_bad_input():
    with pytest.raises(ValueError):
        Graph.from_edges(3, [(0, 0)])
    with pytest.raises(ValueError):
        Graph.from_edges(3, [(0, 3)])
    with pytest.raises(ValueError):
        Graph(0, ())
    with pytest.raises(CapacityError):
        Graph(17, (0,) * 17)
    with pytest.raises(ValueError):
        Graph(2, (2, 0))  # asymmetric adjacency


def test_edges_sorted_and_counted():
    g = Graph.from_edges(4, [(2, 3), (0, 1), (1, 3)])
    assert g.edges() == [(0, 1), (1, 3), (2, 3)]
    assert g.edge_count() == 3
    assert g.degree(3) == 2
    assert g.neighborhood(1) == {0, 3}
    assert g.has_edge(3, 1) and not g.has_edge(0, 2)


def test_as_vertex_set_checks_range():
    assert as_vertex_set([2, 0], 3) == {0, 2}
    with pytest.raises(ValueError):
        as_vertex_set([3], 3)


# ---------------------------------------------------------------------------
# graph6 codec

def test_graph6_known_strings():
    # 'C~': n = ord('C')-63 = 4, payload '~' = 63 = 111111, so all six pairs
    # (0,1),(0,2),(1,2),(0,3),(1,3),(2,3) are edges: the complete graph
    assert parse_graph6("C~") == family("complete", 4)
    # 'C?': payload 0, the empty graph on 4 vertices
    assert parse_graph6("C?").edge_count() == 0
    # '@': single vertex, no payload
    assert parse_graph6("@") == Graph(1, (0,))
    assert to_graph6(family("complete", 4)) == "C~"


def test_graph6_header_prefix_accepted():
    assert parse_graph6(">>graph6<<C~") == family("complete", 4)


def test_graph6_round_trip_all_classes():
    for n in range(1, 8):
        for g in enumerate_connected_graphs(n):
            assert parse_graph6(to_graph6(g)) == g


def test_graph6_round_trip_labeled_small():
    for n in range(1, 5):
        for g in all_labeled_graphs(n):
            assert parse_graph6(to_graph6(g)) == g


def test_graph6_errors():
    with pytest.raises(Graph6Error):
        parse_graph6("")
    with pytest.raises(Graph6Error):
        parse_graph6("C\x1f")  # byte below the alphabet
    with pytest.raises(Graph6Error):
        parse_graph6("C")  # truncated payload
    with pytest.raises(Graph6Error):
        parse_graph6("C~~")  # trailing bytes
    with pytest.raises(CapacityError):
        parse_graph6("T" + "?" * 35)  # 21 vertices, beyond capacity
    with pytest.raises(CapacityError):
        parse_graph6("~??")  # long-form marker


# ---------------------------------------------------------------------------
# edge-list codec

def test_edge_list_round_trip():
    g = family("path", 5)
    assert parse_edge_list(format_edge_list(g)) == g


def test_edge_list_parsing_details():
    g = parse_edge_list("0 1\n# comment\n\n1 2  # trailing\n")
    assert g == family("path", 3)
    assert parse_edge_list("0 1", n=4).n == 4
    with pytest.raises(ValueError):
        parse_edge_list("0 1 2")
    with pytest.raises(ValueError):
        parse_edge_list("0 5", n=3)
    with pytest.raises(ValueError):
        parse_edge_list("")


# ---------------------------------------------------------------------------
# structure

def test_connectivity_and_components():
    assert is_connected(family("path", 6))
    g = Graph.from_edges(5, [(0, 3), (1, 2)])
    assert not is_connected(g)
    assert connected_components(g) == [{0, 3}, {1, 2}, {4}]
    assert is_connected(Graph(1, (0,)))


def test_induced_subgraph_relabels_in_order():
    g = family("path", 5)
    sub, relabel = induced_subgraph(g, {1, 2, 4})
    assert relabel == {1: 0, 2: 1, 4: 2}
    assert sub.edges() == [(0, 1)]
    with pytest.raises(ValueError):
        induced_subgraph(g, set())


# ---------------------------------------------------------------------------
# local complementation

def test_lc_example_k4_to_star():
    # complementing at 0 toggles all edges among {1,2,3}, leaving the star
    assert local_complement(family("complete", 4), 0) == family("star", 4)


def test_lc_is_involutive_exhaustive_small():
    for n in range(1, 5):
        for g in all_labeled_graphs(n):
            for a in range(n):
                assert local_complement(local_complement(g, a), a) == g


def test_lc_involutive_n5():
    for g in all_labeled_graphs(5):
        for a in range(5):
            assert local_complement(local_complement(g, a), a) == g


def test_lc_orbit_k4():
    orbit = set(lc_orbit(family("complete", 4)))
    stars = {Graph.from_edges(4, [(c, v) for v in range(4) if v != c]) for c in range(4)}
    assert orbit == {family("complete", 4)} | stars


def test_lc_orbit_closed_under_moves():
    for g in (family("path", 5), family("cycle", 5), family("tree", 6, seed=1)):
        orbit = set(lc_orbit(g))
        for member in orbit:
            for a in range(g.n):
                assert local_complement(member, a) in orbit


def test_lc_orbit_capacity():
    with pytest.raises(CapacityError):
        lc_orbit(family("path", 11))


# ---------------------------------------------------------------------------
# isomorphism

def test_isomorphism_partition_at_n4():
    # exhaustively classify all 64 labeled graphs; 11 classes is the known count
    reps = []
    for g in all_labeled_graphs(4):
        assert are_isomorphic(g, g)
        for rep in reps:
            if are_isomorphic(rep, g):
                assert are_isomorphic(g, rep)
                break
        else:
            reps.append(g)
    assert len(reps) == ALL_CLASS_COUNTS[4]


def test_find_isomorphism_returns_valid_map():
    g1 = family("path", 5)
    g2 = Graph.from_edges(5, [(3, 1), (1, 4), (4, 0), (0, 2)])
    perm = find_isomorphism(g1, g2)
    assert perm is not None
    for a in range(5):
        assert {perm[b] for b in g1.neighborhood(a)} == g2.neighborhood(perm[a])


def test_isomorphism_rejects_same_degree_sequence():
    # C6 and two triangles are both 2-regular but not isomorphic
    c6 = family("cycle", 6)
    two_triangles = Graph.from_edges(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)])
    assert not are_isomorphic(c6, two_triangles)


def test_isomorphism_capacity():
    with pytest.raises(CapacityError):
        are_isomorphic(family("path", 9), family("path", 9))


# ---------------------------------------------------------------------------
# populations

def test_connected_class_counts():
    for n, count in CONNECTED_COUNTS.items():
        assert len(enumerate_connected_graphs(n)) == count


def test_enumerate_matches_brute_force_up_to_5():
    # independent route: dedupe all labeled connected graphs by isomorphism
    for n in range(2, 6):
        reps = []
        for g in all_labeled_graphs(n):
            if not is_connected(g):
                continue
            if not any(are_isomorphic(r, g) for r in reps):
                reps.append(g)
        atlas = enumerate_connected_graphs(n)
        assert len(reps) == len(atlas)
        for g in atlas:
            assert is_connected(g)
            assert sum(1 for r in reps if are_isomorphic(r, g)) == 1


def test_enumerate_classes_pairwise_distinct_n4():
    reps = enumerate_connected_graphs(4)
    for g1, g2 in itertools.combinations(reps, 2):
        assert not are_isomorphic(g1, g2)


def test_enumerate_capacity():
    with pytest.raises(CapacityError):
        enumerate_connected_graphs(8)


def test_families():
    assert family("path", 4).edges() == [(0, 1), (1, 2), (2, 3)]
    assert family("star", 4).edges() == [(0, 1), (0, 2), (0, 3)]
    assert family("cycle", 4).edges() == [(0, 1), (0, 3), (1, 2), (2, 3)]
    assert family("complete", 3).edge_count() == 3
    with pytest.raises(ValueError):
        family("cycle", 2)
    with pytest.raises(ValueError):
        family("blob", 4)


def test_tree_family_seeded():
    seen = set()
    for seed in range(5):
        t = family("tree", 7, seed=seed)
        assert t.edge_count() == 6
        assert is_connected(t)
        assert t == family("tree", 7, seed=seed)
        seen.add(t)
    assert len(seen) > 1  # seeds explore distinct trees


# ---------------------------------------------------------------------------
# disconnection witnesses

def test_witness_k4_single_move():
    w = can_disconnect_by_lc(family("complete", 4), {0, 1, 2})
    assert w is not None
    assert w.moves == (3,)
    assert induced_subgraph(w.resulting_graph, {0, 1, 2})[0].edge_count() == 0
    assert w.is_valid_for(family("complete", 4))


def test_witness_already_disconnected():
    w = can_disconnect_by_lc(family("path", 4), {0, 2})
    assert w is not None and w.moves == ()


def test_witness_replay_detects_mismatch():
    g = family("complete", 4)
    w = can_disconnect_by_lc(g, {0, 1, 2})
    tampered = LcWitness(w.moves, family("star", 4))
    assert not tampered.is_valid_for(g)


def test_no_witness_on_cycle5_four_subsets():
    # the 5-cycle's orbit never disconnects any 4 of its vertices
    c5 = family("cycle", 5)
    for s in itertools.combinations(range(5), 4):
        assert can_disconnect_by_lc(c5, s) is None


def test_witness_subset_validation():
    g = family("path", 4)
    with pytest.raises(ValueError):
        can_disconnect_by_lc(g, {0})
    with pytest.raises(ValueError):
        can_disconnect_by_lc(g, {0, 1, 2, 3})
