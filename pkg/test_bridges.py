#!/usr/bin/env python3
"""
Testes das pontes, abutments, correção local e extração do subgrafo
hexagonal, sobre a grade 9×9 cheia.
"""

import sys
import os

# Adicionar o diretório atual ao PYTHONPATH
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

import pytest

from core.bridges import (
    Abutment,
    IdentifiedSubgraph,
    alternating_decomposition,
    bridge_decomposition,
    compute_abutments,
    correct_local_errors,
    verify_topological_minor,
    verify_total_order,
)
from core.crossings import CrossingPath, Orientation, PathSet, WorkCounter, find_h_paths, find_v_paths
from core.errors import BridgeDecompositionError, PipelineNotApplicable, TotalOrderViolation
from core.graph_state import hex_lattice_graph
from core.lattice import LatticeConfig, OccupancyGrid, SiteGraph, VertexId, sample_grid
from core.pipeline import run_classical
from utils.helpers import derive_seed

V = VertexId


@pytest.fixture
def decomposition(graph9):
    hset, vset = find_h_paths(graph9), find_v_paths(graph9)
    return hset, vset, bridge_decomposition(hset, vset, graph9)


def test_complete_decomposition(decomposition):
    _, _, bd = decomposition
    assert (bd.J, bd.K) == (3, 3)
    assert sorted(bd.bridges) == [(j, k) for j in (1, 2) for k in (1, 2, 3)]
    assert bd.bridges[(1, 1)].vertices == (V(1, 0), V(2, 0))
    assert bd.bridges[(2, 2)].vertices == (V(4, 3), V(5, 3))
    assert bd.bridges[(1, 3)].s == V(1, 6) and bd.bridges[(1, 3)].e == V(2, 6)
    assert not bd.alternating


def test_alternation_keeps_even_parity(decomposition):
    _, _, bd = decomposition
    alt = alternating_decomposition(bd)
    assert alt.alternating
    assert sorted(alt.retained) == [(1, 1), (1, 3), (2, 2)]
    assert [(b.j, b.k) for b in alt.active] == [(1, 1), (1, 3), (2, 2)]
    assert alt.to_json()["retained"] == [[1, 1], [1, 3], [2, 2]]


def test_abutments_are_single_vertices(decomposition, graph9):
    hset, _, bd = decomposition
    abutments = compute_abutments(alternating_decomposition(bd), hset, graph9)
    touched = {(a.j, a.k): sorted(a.upper | a.lower) for a in abutments}
    assert touched == {
        (1, 1): [V(0, 0)],
        (1, 3): [V(0, 6)],
        (2, 1): [V(3, 0)],
        (2, 2): [V(3, 3)],
        (2, 3): [V(3, 6)],
        (3, 2): [V(6, 3)],
    }
    ok, witnesses = verify_total_order(abutments)
    assert ok and witnesses == []


def test_total_order_witnesses():
    def make(k, interval):
        return Abutment(1, k, frozenset(), frozenset(), interval, None, interval)

    ok, witnesses = verify_total_order([make(1, (0, 3)), make(2, (2, 5))])
    assert not ok and witnesses[0]["kind"] == "overlap"
    ok, witnesses = verify_total_order([make(2, (0, 1)), make(1, (3, 4))])
    assert not ok and witnesses[0]["kind"] == "order"


def test_overlapping_closures_raise(decomposition, graph9):
    hset, _, bd = decomposition
    bad = [Abutment(1, 1, frozenset(), frozenset(), (0, 3), None, (0, 3)),
           Abutment(1, 3, frozenset(), frozenset(), (2, 5), None, (2, 5))]
    with pytest.raises(TotalOrderViolation) as exc:
        correct_local_errors(hset, alternating_decomposition(bd), bad, graph9)
    assert exc.value.exit_code == 3


def test_correction_junctions_and_spacers(decomposition, graph9):
    hset, _, bd = decomposition
    alt = alternating_decomposition(bd)
    result = correct_local_errors(hset, alt, compute_abutments(alt, hset, graph9), graph9)
    assert result.spliced == []
    assert result.junctions == {
        (1, 1): V(0, 0), (2, 1): V(3, 0), (1, 3): V(0, 6),
        (2, 3): V(3, 6), (2, 2): V(3, 3), (3, 2): V(6, 3),
    }
    sub = result.subgraph
    assert sorted(sub.spacers) == [V(0, 1), V(6, 2), V(6, 4)]
    assert sub.hex_map[V(0, 1)] == (1, 2)
    assert sub.hex_map[V(6, 2)] == (3, 1)
    assert sub.hex_map[V(6, 4)] == (3, 3)
    assert len(sub.vertices) == 27 + 6
    assert verify_topological_minor(sub, 3, 3)


def test_bridge_spans_gap():
    """Ponte de três vértices entre H-paths afastadas."""
    L = 7
    sites = [(0, c) for c in range(L)] + [(4, c) for c in range(L)]
    sites += [(r, 0) for r in range(1, 4)] + [(r, 6) for r in range(1, 4)]
    # coluna extra fora do conjunto de V-paths: não gera ponte
    sites += [(1, 3), (2, 3), (3, 3)]
    graph = SiteGraph.from_vertices(L, sites)
    hset = PathSet(Orientation.H, (
        CrossingPath(Orientation.H, 1, tuple(V(0, c) for c in range(L))),
        CrossingPath(Orientation.H, 2, tuple(V(4, c) for c in range(L))),
    ), "teste")
    vset = PathSet(Orientation.V, (
        CrossingPath(Orientation.V, 1, tuple(V(r, 0) for r in range(5))),
        CrossingPath(Orientation.V, 2, tuple(V(r, 6) for r in range(5))),
    ), "teste")
    bd = bridge_decomposition(hset, vset, graph)
    assert sorted(bd.bridges) == [(1, 1), (1, 2)]
    alt = alternating_decomposition(bd)
    assert sorted(alt.retained) == [(1, 1)]
    assert bd.bridges[(1, 1)].vertices == (V(1, 0), V(2, 0), V(3, 0))
    result = correct_local_errors(hset, alt, compute_abutments(alt, hset, graph), graph)
    assert result.junctions == {(1, 1): V(0, 0), (2, 1): V(4, 0)}
    assert sorted(result.subgraph.spacers) == [V(0, 1), V(4, 1)]
    assert verify_topological_minor(result.subgraph, 2, 2)


def test_missing_band_raises(graph9):
    hset = find_h_paths(graph9)
    short = PathSet(Orientation.V, (CrossingPath(Orientation.V, 1, tuple(V(r, 0) for r in range(3))),), "teste")
    with pytest.raises(BridgeDecompositionError):
        bridge_decomposition(hset, short, graph9)


def test_topological_minor_rejects_broken_map(grid9):
    sub = run_classical(grid9).subgraph
    assert verify_topological_minor(sub, sub.J, sub.K)
    broken = IdentifiedSubgraph(sub.vertices, sub.edges, dict(list(sub.hex_map.items())[1:]), sub.J, sub.K)
    assert not verify_topological_minor(broken, sub.J, sub.K)
    rogue = IdentifiedSubgraph(sub.vertices, sub.edges + ((V(0, 0), V(0, 8)),), dict(sub.hex_map), sub.J, sub.K)
    assert not verify_topological_minor(rogue, sub.J, sub.K)


def test_pipeline_on_full_grid(grid9):
    classical = run_classical(grid9)
    assert (classical.J, classical.K) == (3, 3)
    assert classical.path_errors.count("Self-H", "Self-V", "H-H", "V-V", "H-V") == 0
    assert classical.audit.count("Degree-4") == 0
    assert hex_lattice_graph(3, 3).number_of_edges() == 9
    assert set(classical.stage_dumps()) == {"a_paths", "b_bridges", "c_alternating", "d_corrected", "e_identified"}


def test_pipeline_not_applicable_for_single_row():
    graph_sites = [(2, c) for c in range(8)]
    with pytest.raises(PipelineNotApplicable) as exc:
        run_classical(OccupancyGrid.from_vertices(8, graph_sites))
    assert exc.value.exit_code == 2


# --- emendas na correção local -------------------------------------------------------

def _hand_built(L, h_paths, v_paths, extra=()):
    sites = {tuple(v) for path in h_paths + v_paths for v in path} | set(extra)
    graph = SiteGraph.from_vertices(L, sorted(sites))
    hset = PathSet(Orientation.H, tuple(CrossingPath(Orientation.H, i + 1, tuple(V(*v) for v in path))
                                        for i, path in enumerate(h_paths)), "teste")
    vset = PathSet(Orientation.V, tuple(CrossingPath(Orientation.V, i + 1, tuple(V(*v) for v in path))
                                        for i, path in enumerate(v_paths)), "teste")
    return graph, hset, vset


def _corrected(graph, hset, vset):
    alt = alternating_decomposition(bridge_decomposition(hset, vset, graph))
    abutments = compute_abutments(alt, hset, graph)
    counter = WorkCounter()
    return alt, abutments, correct_local_errors(hset, alt, abutments, graph, counter), counter


@pytest.fixture
def zigzag_over_dip():
    """H^2 desce contornando (3,3); V^1 toca a zona de H^2 e volta à de H^1 antes de subir."""
    h1 = [(0, c) for c in range(7)]
    h2 = [(3, 0), (3, 1), (3, 2), (4, 2), (4, 3), (4, 4), (3, 4), (3, 5), (3, 6)]
    v1 = [(0, 1), (1, 1), (2, 1), (2, 2), (1, 2), (1, 3), (2, 3), (3, 3), (4, 3), (5, 3), (6, 3)]
    v2 = [(r, 6) for r in range(7)]
    return _hand_built(7, [h1, h2], [v1, v2])


def test_bridge_starts_at_last_contact(zigzag_over_dip):
    graph, hset, vset = zigzag_over_dip
    bd = bridge_decomposition(hset, vset, graph)
    # a primeira subida (1,1)->(2,1) é descartada
    assert bd.bridges[(1, 1)].vertices == (V(1, 3), V(2, 3), V(3, 3))
    assert bd.bridges[(1, 2)].vertices == (V(1, 6), V(2, 6))


def test_degree_four_endpoint_is_spliced(zigzag_over_dip):
    graph, hset, vset = zigzag_over_dip
    # (3,3) toca três vértices de H^2: com a ponte teria grau 4
    assert sum(1 for w in graph.neighbors(V(3, 3)) if w in hset[1].vertex_set) == 3
    _, abutments, result, counter = _corrected(graph, hset, vset)
    lower = next(a for a in abutments if a.j == 2)
    assert lower.lower == {V(3, 2), V(4, 3), V(3, 4)}
    assert lower.closure_lower == (2, 6) and lower.closure_total == (2, 6)

    assert result.spliced == [(2, 1, "lower")]
    assert result.hset[0].vertices == hset[0].vertices
    assert result.hset[1].vertices == tuple(V(3, c) for c in range(7))
    assert counter.get("correction") == 5
    sub = result.subgraph
    assert not {V(4, 2), V(4, 3), V(4, 4)} & sub.vertices
    assert result.junctions == {(1, 1): V(0, 3), (2, 1): V(3, 3)}
    assert sorted(sub.spacers) == [V(0, 4), V(3, 4)]
    assert len(sub.adjacency()[V(3, 3)]) == 3
    assert max(len(n) for n in sub.adjacency().values()) <= 3
    assert sub.warnings == []
    assert verify_topological_minor(sub, 2, 2)


@pytest.fixture
def both_ends_spliced():
    """Ponte de três vértices cujos dois extremos tocam duas posições de sua H-path."""
    h1 = [(0, 0), (0, 1), (0, 2), (0, 3), (0, 4), (1, 4), (1, 5), (1, 6)]
    h2 = [(3, 0), (3, 1), (3, 2), (4, 2), (4, 3), (4, 4), (3, 4), (3, 5), (3, 6)]
    v1 = [(r, 3) for r in range(7)]
    return _hand_built(7, [h1, h2], [v1])


def test_abutment_closure_spans_touched_positions(both_ends_spliced):
    graph, hset, vset = both_ends_spliced
    alt = alternating_decomposition(bridge_decomposition(hset, vset, graph))
    upper, lower = compute_abutments(alt, hset, graph)
    # s=(1,3) toca as posições 3 e 5; (0,4), na posição 4, fica dentro do fecho
    assert upper.upper == {V(0, 3), V(1, 4)}
    assert V(0, 4) not in upper.upper
    assert upper.closure_upper == (3, 5) and upper.closure_lower is None
    assert lower.closure_lower == (2, 6)
    assert verify_total_order([upper, lower]) == (True, [])


def test_both_ends_spliced_without_contact(both_ends_spliced):
    graph, hset, vset = both_ends_spliced
    _, _, result, _ = _corrected(graph, hset, vset)
    assert result.spliced == [(1, 1, "upper"), (2, 1, "lower")]
    assert result.hset[0].vertices == (V(0, 0), V(0, 1), V(0, 2), V(0, 3), V(1, 3), V(1, 4), V(1, 5), V(1, 6))
    assert result.junctions == {(1, 1): V(1, 3), (2, 1): V(3, 3)}
    # H^1 e H^2 revisadas não se tocam: nenhum aviso
    assert result.subgraph.warnings == []
    assert verify_topological_minor(result.subgraph, 2, 1)


def test_hh_contact_is_reported():
    h1 = [(1, 0), (1, 1), (1, 2), (0, 2), (0, 3), (0, 4), (0, 5), (0, 6)]
    h2 = [(3, 0), (3, 1), (3, 2), (3, 3), (3, 4), (2, 4), (2, 5), (3, 5), (3, 6)]
    v1 = [(r, 3) for r in range(7)]
    graph, hset, vset = _hand_built(7, [h1, h2], [v1])
    _, _, result, _ = _corrected(graph, hset, vset)
    assert result.spliced == [(1, 1, "upper"), (2, 1, "lower")]
    assert result.junctions == {(1, 1): V(1, 3), (2, 1): V(2, 3)}
    assert result.subgraph.warnings == ["contato H-H entre H^1 e H^2 em (1, 3)-(2, 3)"]
    # o contato é a própria aresta vertical do minor
    assert verify_topological_minor(result.subgraph, 2, 1)


# --- ensemble semeado --------------------------------------------------------------------

ENSEMBLE_P = (0.65, 0.75, 0.85, 0.95)


def _check_ensemble(Ls, seeds_per_point):
    applicable = 0
    for L in Ls:
        for p in ENSEMBLE_P:
            for trial in range(seeds_per_point):
                grid = sample_grid(LatticeConfig(L, p, derive_seed(0xB41D, L, trial)))
                try:
                    classical = run_classical(grid)
                except PipelineNotApplicable:
                    continue
                applicable += 1
                sub = classical.subgraph
                where = f"L={L} p={p} trial={trial}"
                assert verify_total_order(classical.abutments)[0], where
                assert max(len(n) for n in sub.adjacency().values()) <= 3, where
                assert verify_topological_minor(sub, classical.J, classical.K), where
    return applicable


def test_seeded_ensemble():
    assert _check_ensemble((20, 24), 2) > 0


@pytest.mark.slow
def test_seeded_ensemble_full():
    assert _check_ensemble((20, 32, 48, 64), 32) > 0
