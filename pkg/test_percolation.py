#!/usr/bin/env python3
"""
Testes das estatísticas de percolação: cruzamentos, m_L por fluxo máximo,
limiar, componentes subcríticos, limite exponencial e escala do trabalho.
"""

import sys
import os

# Adicionar o diretório atual ao PYTHONPATH
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from core.crossings import Orientation, find_h_paths
from core.errors import BoundDomainError, ConfigurationError
from core.lattice import LatticeConfig, OccupancyGrid, grid_to_graph, sample_grid, site_uniforms
from core.percolation import (
    P_C,
    BoundParams,
    SweepConfig,
    crossing_curve,
    crossing_probability,
    crossing_threshold,
    estimate_threshold,
    fit_log_n,
    gamma_epsilon,
    has_crossing,
    largest_component_scaling,
    max_disjoint_crossings,
    optimal_beta,
    overhead_curve,
    runtime_scaling,
    supercritical_concentration,
    trial_seed,
)


# --- m_L --------------------------------------------------------------------------------

def test_max_crossings_examples():
    L = 7
    assert max_disjoint_crossings(OccupancyGrid(L, np.ones((L, L), dtype=bool))) == L
    assert max_disjoint_crossings(OccupancyGrid.from_vertices(L, [(3, c) for c in range(L)])) == 1
    cut = np.ones((L, L), dtype=bool)
    cut[:, 3] = False
    assert max_disjoint_crossings(cut) == 0
    assert max_disjoint_crossings(cut, Orientation.V) == L - 1
    assert max_disjoint_crossings(np.zeros((L, L), dtype=bool)) == 0


def test_max_crossings_bottleneck():
    """Duas faixas ligadas por um único sítio: m_L = 1."""
    mask = np.zeros((6, 6), dtype=bool)
    mask[:, :3] = True
    mask[:, 4:] = True
    mask[2, 3] = True
    assert max_disjoint_crossings(mask) == 1


@given(st.integers(0, 2 ** 32), st.integers(3, 16), st.floats(0.4, 1.0))
@settings(max_examples=40, deadline=None)
def test_pipeline_paths_never_exceed_max(seed, L, p):
    grid = sample_grid(LatticeConfig(L, p, seed))
    m = max_disjoint_crossings(grid)
    assert len(find_h_paths(grid_to_graph(grid))) <= m
    assert (m > 0) == has_crossing(grid.occupied)


# --- cruzamentos -------------------------------------------------------------------------

def test_crossing_probability_extremes():
    assert crossing_probability(10, 1.0, 20, 1).estimate == 1.0
    assert crossing_probability(10, 0.0, 20, 1).estimate == 0.0


def test_crossing_probability_regimes():
    assert crossing_probability(30, 0.3, 500, 7).estimate < 0.05
    assert crossing_probability(30, 0.9, 500, 7).estimate > 0.99


@pytest.mark.slow
def test_crossing_probability_regimes_full():
    assert crossing_probability(30, 0.3, 10_000, 7).estimate < 0.05
    assert crossing_probability(30, 0.9, 10_000, 7).estimate > 0.99


def test_crossing_curve_is_monotone_under_coupling():
    points = crossing_curve(SweepConfig((12,), tuple(np.linspace(0.4, 0.8, 9)), 60, 3))
    estimates = [pt.estimate for pt in points]
    assert estimates == sorted(estimates)


@given(st.integers(0, 2 ** 32), st.integers(2, 14))
@settings(max_examples=40, deadline=None)
def test_crossing_threshold_is_exact(seed, L):
    u = site_uniforms(L, seed)
    t = crossing_threshold(u)
    assert has_crossing(u <= t)
    assert not has_crossing(u < t)


def test_trial_seed_ignores_p():
    assert trial_seed(1, 16, 3) == trial_seed(1, 16, 3)
    assert trial_seed(1, 16, 3) != trial_seed(1, 32, 3)


def test_parallel_matches_serial():
    sweep = dict(Ls=(10,), ps=(0.5, 0.6, 0.7), trials=12, master_seed=9)
    serial = crossing_curve(SweepConfig(**sweep, jobs=1))
    parallel = crossing_curve(SweepConfig(**sweep, jobs=2))
    assert [pt.estimate for pt in serial] == [pt.estimate for pt in parallel]


def test_sweep_config_validation():
    with pytest.raises(ConfigurationError):
        SweepConfig((), (0.5,), 1, 0)
    with pytest.raises(ConfigurationError):
        SweepConfig((8,), (1.2,), 1, 0)
    with pytest.raises(ConfigurationError):
        SweepConfig((8,), (0.5,), 0, 0)


# --- overhead --------------------------------------------------------------------------

def test_overhead_full_occupancy():
    point = overhead_curve(SweepConfig((12,), (1.0,), 3, 0))[0]
    assert point.estimate == 1.0
    assert point.extra["ideal_overhead"] == 1.0
    # H-paths 2-locais ocupam uma linha a cada três
    assert point.extra["achieved_pipeline_count"] == 4.0


def test_overhead_is_monotone_in_p():
    ps = tuple(round(0.55 + 0.025 * i, 4) for i in range(19))
    points = overhead_curve(SweepConfig((16,), ps, 20, 11), pipeline=False)
    estimates = [pt.estimate for pt in points]
    assert estimates == sorted(estimates)
    assert estimates[-1] == 1.0


def test_overhead_vanishes_subcritically():
    point = overhead_curve(SweepConfig((64,), (0.5,), 40, 2), pipeline=False)[0]
    assert point.estimate < 0.01
    assert point.extra["ideal_overhead"] == math.inf or point.extra["ideal_overhead"] > 1e4


def test_supercritical_concentration():
    stats = supercritical_concentration(32, 0.8, 30, 4)
    assert 0.3 < stats["mean"] < 1.0
    assert stats["fraction_within_20pct"] > 0.8


@pytest.mark.slow
def test_supercritical_concentration_full():
    stats = supercritical_concentration(128, 0.75, 200, 4)
    assert stats["fraction_within_20pct"] >= 0.95


# --- limiar -------------------------------------------------------------------------

def test_single_size_is_pseudo_threshold():
    result = estimate_threshold([16], 50, 1)
    assert not result.extrapolated
    assert result.note
    assert result.estimate == result.per_L[0].estimate


def test_threshold_near_critical_point():
    result = estimate_threshold([16, 32], 200, 1)
    assert result.extrapolated
    assert all(0.55 < pt.estimate < 0.63 for pt in result.per_L)
    assert 0.54 < result.estimate < 0.65
    assert result.stderr > 0


@pytest.mark.slow
def test_threshold_extrapolation():
    result = estimate_threshold([32, 64, 128], 10_000, 1, jobs=4)
    assert abs(result.estimate - P_C) < 0.01


# --- componentes subcríticos ------------------------------------------------------------------

def test_components_empty_lattice():
    result = largest_component_scaling([0.0], [8, 16], 3, 0)
    assert all(r["mean"] == 0.0 for r in result.rows)
    assert result.fits[0.0].slope == 0.0


def test_components_reject_supercritical():
    with pytest.raises(ConfigurationError):
        largest_component_scaling([0.6], [8], 1, 0)


def test_fit_log_n():
    assert fit_log_n([8], [1.0]) is None
    Ls = [8, 16, 32, 64]
    values = [3.0 + 2.0 * math.log(L * L) for L in Ls]
    fit = fit_log_n(Ls, values)
    assert fit.slope == pytest.approx(2.0)
    assert fit.intercept == pytest.approx(3.0)
    assert fit.r_squared == pytest.approx(1.0)


@pytest.mark.slow
def test_components_grow_logarithmically():
    result = largest_component_scaling([0.45], [64, 128, 256, 512], 200, 3, jobs=4)
    fit = result.fits[0.45]
    assert fit.slope > 0
    assert fit.r_squared >= 0.98


# --- limite exponencial ---------------------------------------------------------------------

def test_gamma_epsilon_examples():
    assert gamma_epsilon(BoundParams(1.0, 0.0, 0.9, 0.05)) == 1.0
    expected = 1 - math.log(0.9 / (0.9 - P_C - 0.05))
    assert gamma_epsilon(BoundParams(1.0, 1.0, 0.9, 0.05)) == pytest.approx(expected)
    assert 0.9 - P_C - 0.05 == pytest.approx(0.257254)


@pytest.mark.parametrize("beta,p,eps", [(-0.1, 0.9, 0.05), (1.0, 0.9, 0.0), (1.0, 0.6, 0.05), (1.0, 0.9, 0.31)])
def test_bound_domain(beta, p, eps):
    with pytest.raises(BoundDomainError):
        BoundParams(1.0, beta, p, eps)


def test_optimal_beta():
    beta, eps = optimal_beta(1.0, 0.9, [0.01, 0.05, 0.1, 0.4])
    assert eps == 0.01
    assert gamma_epsilon(BoundParams(1.0, beta, 0.9, eps)) == pytest.approx(0.0, abs=1e-12)
    beta2, eps2 = optimal_beta(lambda e: 10 * e, 0.9, [0.01, 0.05, 0.1])
    assert gamma_epsilon(BoundParams(10 * eps2, beta2, 0.9, eps2)) == pytest.approx(0.0, abs=1e-12)
    with pytest.raises(BoundDomainError):
        optimal_beta(1.0, 0.6, [0.05])


# --- trabalho --------------------------------------------------------------------------------------

def test_runtime_empty_lattice():
    result = runtime_scaling([0.0], [8, 16], 2, 0)
    assert all(r["work_per_site"] == 0.0 for r in result.rows)
    assert result.ratios[0.0] == 1.0
    assert result.bounded


def test_runtime_visits_bound():
    result = runtime_scaling([0.7, 0.9], [12, 24], 4, 5)
    assert result.visits_within_bound
    assert all(r["work_per_site"] > 0 for r in result.rows)


@pytest.mark.slow
def test_runtime_is_linear():
    result = runtime_scaling([0.85], [64, 128, 256, 512], 20, 1, jobs=4)
    assert result.bounded
