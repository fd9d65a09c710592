#!/usr/bin/env python3
"""
Testes da largura de emaranhamento (rank-width) de graph states pequenos.
"""

import sys
import os

# Adicionar o diretório atual ao PYTHONPATH
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

import networkx as nx
import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from core.entanglement import (
    Gf2Matrix,
    Split,
    cut_rank,
    ewd_of_components,
    gf2_rank,
    rank_width_bruteforce,
    rank_width_exhaustive,
    subcritical_width_bound_check,
    witness_width,
)
from core.errors import ConfigurationError, SizeLimitError


@st.composite
def small_graphs(draw, max_nodes=7):
    n = draw(st.integers(1, max_nodes))
    edges = draw(st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=n * (n - 1) // 2))
    g = nx.empty_graph(n)
    g.add_edges_from((a, b) for a, b in edges if a != b)
    return g


def test_gf2_rank():
    assert gf2_rank([]) == 0
    assert gf2_rank([0b11, 0b11]) == 1
    assert gf2_rank([0b01, 0b10, 0b11]) == 2


def test_cut_matrix():
    g = nx.path_graph(4)
    m = Gf2Matrix.from_cut(g, [0, 1])
    assert m.to_array().tolist() == [[0, 0], [1, 0]]
    assert m.rank == 1


def test_cut_rank_examples():
    g = nx.path_graph(5)
    assert cut_rank(g, []) == 0
    assert cut_rank(g, list(g.nodes)) == 0
    assert cut_rank(g, [0]) == 1
    assert cut_rank(g, [0, 2]) == 2
    k5 = nx.complete_graph(5)
    assert all(cut_rank(k5, A) == 1 for A in ([0], [0, 1], [1, 3, 4]))


@pytest.mark.parametrize("n", range(2, 9))
def test_paths_have_width_one(n):
    result = rank_width_bruteforce(nx.path_graph(n))
    assert result.width == 1
    assert witness_width(nx.path_graph(n), result.witness_tree) == 1


def test_trivial_graphs():
    assert rank_width_bruteforce(nx.empty_graph(0)).width == 0
    single = rank_width_bruteforce(nx.empty_graph(1))
    assert single.width == 0 and single.witness_tree == 0
    assert rank_width_bruteforce(nx.complete_graph(6)).width == 1
    assert rank_width_bruteforce(nx.empty_graph(5)).width == 0


def test_grid_three_by_three():
    g = nx.grid_2d_graph(3, 3)
    result = rank_width_bruteforce(g)
    assert result.width == 2
    assert rank_width_exhaustive(g) == 2
    assert witness_width(g, result.witness_tree) == 2


def test_cycles():
    assert rank_width_bruteforce(nx.cycle_graph(4)).width == 1
    for n in range(5, 9):
        assert rank_width_bruteforce(nx.cycle_graph(n)).width == 2


def test_size_limits():
    with pytest.raises(SizeLimitError):
        rank_width_bruteforce(nx.path_graph(13))
    with pytest.raises(SizeLimitError):
        rank_width_exhaustive(nx.path_graph(10))
    with pytest.raises(SizeLimitError):
        ewd_of_components(nx.path_graph(13))


def test_witness_must_cover_vertices():
    g = nx.path_graph(3)
    with pytest.raises(ValueError):
        witness_width(g, Split(0, 1))
    with pytest.raises(ValueError):
        witness_width(g, Split(Split(0, 1), Split(1, 2)))
    assert Split(Split(0, 1), 2).to_json() == [[0, 1], 2]


def test_components_take_the_maximum():
    g = nx.disjoint_union(nx.path_graph(5), nx.path_graph(2))
    assert ewd_of_components(g) == 1
    assert ewd_of_components(nx.empty_graph(20)) == 0
    assert ewd_of_components(nx.empty_graph(0)) == 0
    mixed = nx.disjoint_union(nx.path_graph(4), nx.convert_node_labels_to_integers(nx.grid_2d_graph(3, 3)))
    assert ewd_of_components(mixed) == 2


@given(small_graphs(), st.data())
@settings(max_examples=80, deadline=None)
def test_cut_rank_symmetry(g, data):
    A = data.draw(st.sets(st.sampled_from(sorted(g.nodes))))
    complement = set(g.nodes) - A
    assert cut_rank(g, A) == cut_rank(g, complement)
    assert cut_rank(g, A) <= min(len(A), len(complement))


@given(small_graphs(), st.data())
@settings(max_examples=80, deadline=None)
def test_cut_rank_submodular(g, data):
    nodes = sorted(g.nodes)
    A = data.draw(st.sets(st.sampled_from(nodes)))
    B = data.draw(st.sets(st.sampled_from(nodes)))
    assert cut_rank(g, A) + cut_rank(g, B) >= cut_rank(g, A | B) + cut_rank(g, A & B)


@given(small_graphs())
@settings(max_examples=60, deadline=None)
def test_witness_reproduces_width(g):
    result = rank_width_bruteforce(g)
    assert witness_width(g, result.witness_tree) == result.width


@given(small_graphs(max_nodes=6))
@settings(max_examples=40, deadline=None)
def test_dynamic_program_matches_enumeration(g):
    assert rank_width_bruteforce(g).width == rank_width_exhaustive(g)


@given(small_graphs())
@settings(max_examples=40, deadline=None)
def test_vertex_deletion_never_increases_width(g):
    assume(g.number_of_nodes() >= 2)
    width = rank_width_bruteforce(g).width
    for v in list(g.nodes):
        h = g.copy()
        h.remove_node(v)
        assert rank_width_bruteforce(h).width <= width


@given(small_graphs(max_nodes=5), small_graphs(max_nodes=5))
@settings(max_examples=40, deadline=None)
def test_disjoint_union_takes_maximum(g, h):
    union = nx.disjoint_union(g, h)
    assert ewd_of_components(union) == max(ewd_of_components(g), ewd_of_components(h))
    assert rank_width_bruteforce(union).width == ewd_of_components(union)


def test_subcritical_check_small():
    report = subcritical_width_bound_check(0.3, [8, 16], 4, 1)
    assert report.bound_holds
    assert len(report.samples) == 8
    assert all(s["exact_width"] is not None for s in report.samples if s["s_max"] <= 12)
    assert set(report.mean_s_max()) == {8, 16}
    assert report.to_json()["bound_holds"] is True


def test_subcritical_check_empty_lattice():
    report = subcritical_width_bound_check(0.0, [8, 16], 2, 0)
    assert all(s["s_max"] == 0 and s["exact_width"] == 0 for s in report.samples)
    assert report.fit.slope == 0.0


def test_subcritical_check_rejects_supercritical():
    with pytest.raises(ConfigurationError):
        subcritical_width_bound_check(0.6, [8], 1, 0)


@pytest.mark.slow
def test_subcritical_bound_grows_logarithmically():
    report = subcritical_width_bound_check(0.3, [64, 128, 256], 50, 2, jobs=4)
    assert report.bound_holds
    assert report.fit.slope > 0
    assert report.fit.r_squared >= 0.95
    means = list(report.mean_s_max().values())
    assert np.all(np.diff(means) > 0)
