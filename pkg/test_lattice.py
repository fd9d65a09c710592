#!/usr/bin/env python3
"""
Testes da rede diluída: amostragem, formato de arquivo e vizinhanças.
"""

import sys
import os

# Adicionar o diretório atual ao PYTHONPATH
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from core.errors import ConfigurationError, GridFormatError
from core.lattice import (
    LatticeConfig,
    OccupancyGrid,
    SiteGraph,
    VertexId,
    component_sizes,
    connected_components,
    format_grid,
    grid_to_graph,
    k_neighborhood,
    neighborhood,
    parse_grid,
    sample_grid,
    site_uniforms,
)
from utils.helpers import derive_seed, parse_int_list, parse_range


def test_sample_extremes():
    """p=1 ocupa tudo e p=0 não ocupa nada."""
    assert sample_grid(LatticeConfig(12, 1.0, 3)).occupied_count == 144
    assert sample_grid(LatticeConfig(12, 0.0, 3)).occupied_count == 0


def test_sample_is_deterministic():
    a = sample_grid(LatticeConfig(20, 0.6, 42))
    b = sample_grid(LatticeConfig(20, 0.6, 42))
    c = sample_grid(LatticeConfig(20, 0.6, 43))
    assert np.array_equal(a.occupied, b.occupied)
    assert not np.array_equal(a.occupied, c.occupied)


def test_site_uniforms_do_not_depend_on_L():
    """O uniforme de um sítio depende apenas de (seed, row, col)."""
    small, large = site_uniforms(8, 5), site_uniforms(16, 5)
    assert np.array_equal(small, large[:8, :8])
    assert small.min() >= 0.0 and small.max() < 1.0


@given(st.integers(0, 2 ** 32), st.floats(0, 1), st.floats(0, 1))
@settings(max_examples=30, deadline=None)
def test_coupled_samples_are_monotone(seed, p1, p2):
    """Com a mesma semente, aumentar p só acrescenta sítios."""
    lo, hi = sorted((p1, p2))
    a = sample_grid(LatticeConfig(10, lo, seed)).occupied
    b = sample_grid(LatticeConfig(10, hi, seed)).occupied
    assert not np.any(a & ~b)


@pytest.mark.parametrize("L,p,seed", [(0, 0.5, 1), (5, 1.5, 1), (5, -0.1, 1), (5, 0.5, -1), (5, 0.5, 2 ** 64)])
def test_lattice_config_rejects_bad_values(L, p, seed):
    with pytest.raises(ConfigurationError):
        LatticeConfig(L, p, seed)


def test_format_header_and_orientation():
    grid = OccupancyGrid.from_vertices(3, [(0, 0), (2, 1)])
    grid = OccupancyGrid(3, grid.occupied, p=0.592746, seed=7)
    lines = format_grid(grid).splitlines()
    assert lines[0] == "3 0.592746 7"
    # topo (row = L-1) primeiro
    assert lines[1:] == ["010", "000", "100"]


def test_parse_inverts_format():
    grid = sample_grid(LatticeConfig(9, 0.7, 11))
    again = parse_grid(format_grid(grid))
    assert again.L == 9 and again.seed == 11 and again.p == 0.7
    assert np.array_equal(again.occupied, grid.occupied)


@pytest.mark.parametrize("text", [
    "",
    "3 0.5\n111\n111\n111\n",
    "3 0.5 1\n111\n111\n",
    "3 0.5 1\n111\n121\n111\n",
    "3 0.5 1\n111\n11\n111\n",
    "3 abc 1\n111\n111\n111\n",
    "3 1.5 1\n111\n111\n111\n",
])
def test_parse_rejects_malformed(text):
    with pytest.raises(GridFormatError):
        parse_grid(text)


def test_site_graph_counts():
    graph = grid_to_graph(OccupancyGrid(3, np.ones((3, 3), dtype=bool)))
    assert graph.vertex_count == 9
    assert graph.edge_count == 12
    assert len(graph.edges()) == 12
    assert graph.degree(VertexId(1, 1)) == 4
    assert graph.neighbors(VertexId(0, 0)) == (VertexId(0, 1), VertexId(1, 0))
    nxg = graph.to_networkx()
    assert nxg.number_of_nodes() == 9 and nxg.number_of_edges() == 12


@given(st.integers(0, 2 ** 32), st.floats(0.2, 0.9))
@settings(max_examples=25, deadline=None)
def test_networkx_view_matches_mask(seed, p):
    grid = sample_grid(LatticeConfig(8, p, seed))
    graph = grid_to_graph(grid)
    nxg = graph.to_networkx()
    assert nxg.number_of_nodes() == grid.occupied_count
    assert nxg.number_of_edges() == graph.edge_count
    comps = connected_components(graph)
    assert len(comps) == len(component_sizes(grid.occupied))
    assert sum(len(c) for c in comps) == grid.occupied_count
    # ordenados pelo menor representante
    mins = [min(c) for c in comps]
    assert mins == sorted(mins)


def test_connected_components_empty():
    assert connected_components(grid_to_graph(OccupancyGrid(4, np.zeros((4, 4), dtype=bool)))) == []


def test_k_neighborhood():
    graph = SiteGraph.from_vertices(3, [(0, 0), (1, 1)])
    center = [(1, 1)]
    assert k_neighborhood(graph, center, 0) == {VertexId(1, 1)}
    assert len(k_neighborhood(graph, center, 1)) == 5
    assert len(k_neighborhood(graph, center, 2)) == 9
    assert k_neighborhood(graph, center, 2, domain="occupied") == {VertexId(0, 0), VertexId(1, 1)}
    with pytest.raises(ConfigurationError):
        k_neighborhood(graph, center, -1)


def test_neighborhood_excludes_set():
    graph = grid_to_graph(OccupancyGrid(3, np.ones((3, 3), dtype=bool)))
    assert neighborhood(graph, [(0, 0)]) == {VertexId(0, 1), VertexId(1, 0)}
    assert neighborhood(graph, [(0, 0), (0, 1)]) == {VertexId(0, 2), VertexId(1, 0), VertexId(1, 1)}


def test_parse_range():
    values = parse_range("0.55:0.05:1.0")
    assert len(values) == 10 and values[0] == 0.55 and values[-1] == 1.0
    assert parse_range("0.1,0.2") == [0.1, 0.2]
    assert parse_int_list("64:64:256") == [64, 128, 192, 256]
    for bad in ("", "1:2", "a,b", "1:-1:3"):
        with pytest.raises(ConfigurationError):
            parse_range(bad)
    with pytest.raises(ConfigurationError):
        parse_int_list("1.5")


def test_derive_seed_is_stable():
    assert derive_seed(1, 2, 3) == derive_seed(1, 2, 3)
    assert derive_seed(1, 2, 3) != derive_seed(1, 3, 2)
    assert 0 <= derive_seed(2 ** 64 - 1) < 2 ** 64
