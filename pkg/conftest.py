"""
Fixtures compartilhadas dos testes do concentrador.
"""

import sys
import os

# Adicionar o diretório atual ao PYTHONPATH
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

import numpy as np
import pytest

from core.lattice import OccupancyGrid, grid_to_graph
from utils.debug import configure_debug_manager


def full_grid(L: int) -> OccupancyGrid:
    return OccupancyGrid(L, np.ones((L, L), dtype=bool), p=1.0, seed=0)


@pytest.fixture
def grid9():
    """Grade 9×9 totalmente ocupada: H-paths nas linhas 0, 3, 6 e V-paths nas colunas 0, 3, 6."""
    return full_grid(9)


@pytest.fixture
def graph9(grid9):
    return grid_to_graph(grid9)


@pytest.fixture
def grid4():
    """Menor grade cheia em que o pipeline se aplica (J = K = 2)."""
    return full_grid(4)


@pytest.fixture(autouse=True)
def quiet_debug(tmp_path, monkeypatch):
    """Isola variáveis de ambiente e a sessão de debug de cada teste."""
    for name in list(os.environ):
        if name.startswith("CLUSTER_"):
            monkeypatch.delenv(name, raising=False)
    configure_debug_manager(str(tmp_path / "debug"), False)
    yield
