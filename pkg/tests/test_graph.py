import itertools
import time

import networkx as nx
import pytest
from hypothesis import given, settings, strategies as st

from fdokit.errors import UnknownNode
from fdokit.graph import (
    Direction,
    FdoGraph,
    PidTriple,
    build_graph,
    export_graph,
    extract_triples,
    graph_from_triples,
    neighbors,
    parse_triples,
    path,
    reachable,
    strongly_connected_components,
)
from fdokit.model import InformationRecord
from fdokit.registry import EntrySource
from oracles import bfs_distance, closure_sccs
from reference import ENERGY, HAS_METADATA, IS_METADATA_FOR, TRIPLES


@pytest.fixture(scope="module")
def energy_graph(types, fixture_registry):
    records = [e.record for e in fixture_registry.entries([EntrySource.FIXTURE]) if e.pid in set(ENERGY.values())]
    return build_graph(records, types)


def test_energy_graph_is_exact(energy_graph):
    assert energy_graph.nodes == frozenset(ENERGY.values())
    assert energy_graph.predicates == {HAS_METADATA, IS_METADATA_FOR}
    assert set(energy_graph.triples) == TRIPLES


def test_energy_graph_builds_fast(types, fixture_registry):
    records = fixture_registry.records()
    start = time.perf_counter()
    build_graph(records, types)
    assert time.perf_counter() - start < 1.0


def test_listed_triples_are_acyclic(energy_graph):
    comps = strongly_connected_components(energy_graph)
    assert all(len(c) == 1 for c in comps)
    assert len(comps) == 18


def test_references_to_unknown_pids_become_external_edges(types):
    a = InformationRecord(((HAS_METADATA, "21.1/b"), (HAS_METADATA, "21.1/outside"), (HAS_METADATA, "21.1/a")), "21.1/a")
    b = InformationRecord((), "21.1/b")
    graph = build_graph([a, b], types)
    assert set(graph.triples) == {PidTriple("21.1/a", HAS_METADATA, "21.1/b")}
    assert {e.target for e in graph.external_edges} == {"21.1/outside"}
    assert extract_triples([a, b], types) == graph.triples


def test_non_reference_attributes_never_form_triples(types, fixture_registry):
    triples = extract_triples(fixture_registry.records(), types)
    assert all(types.value_type_of(t.predicate).value == "handle-identifier-ascii" for t in triples)


def test_neighbors(energy_graph):
    j = ENERGY["J"]
    assert neighbors(energy_graph, j) == {ENERGY["L"]}
    assert neighbors(energy_graph, j, Direction.IN) == {ENERGY["P"], ENERGY["Q"], ENERGY["R"]}
    assert neighbors(energy_graph, j, "both", IS_METADATA_FOR) == {ENERGY["L"]}
    with pytest.raises(UnknownNode):
        neighbors(energy_graph, "21.1/unknown")


def test_paths(energy_graph):
    p, j, l = ENERGY["P"], ENERGY["J"], ENERGY["L"]
    assert path(energy_graph, p, l) == [PidTriple(p, HAS_METADATA, j), PidTriple(j, IS_METADATA_FOR, l)]
    assert path(energy_graph, l, p) is None
    assert path(energy_graph, p, p) == []
    assert reachable(energy_graph, ENERGY["N"], ENERGY["I"])
    with pytest.raises(UnknownNode):
        path(energy_graph, p, "21.1/unknown")


def test_path_tie_break_is_lexicographic():
    t = [("1/s", "1/p", "1/b"), ("1/s", "1/p", "1/a"), ("1/a", "1/p", "1/t"), ("1/b", "1/p", "1/t")]
    graph = graph_from_triples(t)
    assert [h.object for h in path(graph, "1/s", "1/t")] == ["1/a", "1/t"]


def test_graph_invariants_enforced():
    with pytest.raises(ValueError):
        FdoGraph(frozenset({"1/a"}), frozenset({"1/p"}), frozenset({PidTriple("1/a", "1/p", "1/b")}))


@pytest.mark.parametrize("fmt", ["triples", "dot"])
def test_export_is_deterministic(energy_graph, fmt):
    assert export_graph(energy_graph, fmt) == export_graph(energy_graph, fmt)


def test_triples_export_round_trip(energy_graph):
    text = export_graph(energy_graph, "triples")
    assert len(text.splitlines()) == 11
    assert parse_triples(text) == energy_graph.triples
    rebuilt = graph_from_triples(parse_triples(text), energy_graph.nodes)
    assert rebuilt == FdoGraph(energy_graph.nodes, energy_graph.predicates, energy_graph.triples)


def test_dot_export_mentions_every_node(energy_graph):
    dot = export_graph(energy_graph, "dot")
    assert dot.startswith("digraph")
    assert all(f'"{n}"' in dot for n in energy_graph.nodes)


def test_parse_triples_rejects_garbage():
    with pytest.raises(ValueError):
        parse_triples("1/a 1/p\n")


# -- SCC against oracles ----------------------------------------------------------

NODE_POOL = [f"21.1/n{i:02d}" for i in range(20)]
PRED_POOL = ["21.1/p", "21.1/q"]

edges = st.lists(
    st.tuples(st.sampled_from(NODE_POOL[:12]), st.sampled_from(PRED_POOL), st.sampled_from(NODE_POOL[:12])),
    max_size=40,
)


@settings(max_examples=300)
@given(edges)
def test_scc_matches_closure_oracle(triples):
    triples = [t for t in triples if t[0] != t[2]]
    graph = graph_from_triples(triples, NODE_POOL[:12])
    assert strongly_connected_components(graph) == closure_sccs(NODE_POOL[:12], triples)


@settings(max_examples=300)
@given(edges)
def test_scc_matches_networkx(triples):
    graph = graph_from_triples(triples, NODE_POOL[:12])
    g = nx.DiGraph()
    g.add_nodes_from(NODE_POOL[:12])
    g.add_edges_from((s, o) for s, _, o in triples)
    expected = sorted((sorted(c) for c in nx.strongly_connected_components(g)), key=lambda c: c[0])
    assert strongly_connected_components(graph) == expected


@settings(max_examples=200)
@given(edges, st.sampled_from(NODE_POOL[:12]), st.sampled_from(NODE_POOL[:12]))
def test_path_length_is_shortest(triples, source, target):
    graph = graph_from_triples(triples, NODE_POOL[:12])
    hops = path(graph, source, target)
    expected = bfs_distance(triples, source, target)
    if source == target:
        assert hops == []
    elif expected is None:
        assert hops is None
    else:
        assert len(hops) == expected
        assert hops[0].subject == source and hops[-1].object == target
        assert all(a.object == b.subject for a, b in itertools.pairwise(hops))
        assert all(h in graph.triples for h in hops)


def test_scc_on_a_long_cycle_does_not_recurse():
    n = 5000
    triples = [(f"1/{i}", "1/p", f"1/{(i + 1) % n}") for i in range(n)]
    comps = strongly_connected_components(graph_from_triples(triples))
    assert len(comps) == 1 and len(comps[0]) == n


def test_scc_with_a_cycle_in_the_fixture_graph(energy_graph):
    extra = PidTriple(ENERGY["L"], HAS_METADATA, ENERGY["P"])
    triples = set(energy_graph.triples) | {extra}
    graph = graph_from_triples(triples, energy_graph.nodes)
    comps = strongly_connected_components(graph)
    assert sorted([ENERGY["J"], ENERGY["L"], ENERGY["P"]]) in comps
    assert comps == closure_sccs(sorted(energy_graph.nodes), list(triples))
