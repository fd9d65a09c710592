"""
Rede quadrada diluída por sítios: amostragem, grafo dos sítios ocupados e
utilitários genéricos de grafo (componentes, vizinhanças, graus).

Convenção de coordenadas: ``(row, col)`` com a linha 0 na borda inferior e a
coluna 0 na borda esquerda. Internamente a máscara é indexada como
``mask[row, col]``; apenas o formato texto imprime a linha L-1 primeiro.
"""

from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, FrozenSet, Iterable, List, NamedTuple, Optional, Tuple, Union

import networkx as nx
import numpy as np
from scipy import ndimage

from core.errors import ConfigurationError, GridFormatError
from utils.helpers import derive_seed, splitmix64_array

# Conectividade de 4 vizinhos (distância de Manhattan 1)
CROSS = ndimage.generate_binary_structure(2, 1)

# Deslocamentos E, N, W, S
DIRECTIONS: Tuple[Tuple[int, int], ...] = ((0, 1), (1, 0), (0, -1), (-1, 0))


class VertexId(NamedTuple):
    """Sítio da rede; a ordem lexicográfica (row, col) é total."""
    row: int
    col: int

    def to_json(self) -> List[int]:
        return [int(self.row), int(self.col)]


@dataclass(frozen=True)
class LatticeConfig:
    """Parâmetros de uma amostra: tamanho linear, ocupação e semente mestra."""
    L: int
    p: float
    seed: int = 0

    def __post_init__(self):
        if not isinstance(self.L, (int, np.integer)) or self.L < 1:
            raise ConfigurationError(f"L deve ser inteiro positivo, recebido {self.L!r}")
        if not 0.0 <= float(self.p) <= 1.0:
            raise ConfigurationError(f"p deve estar em [0, 1], recebido {self.p!r}")
        if not 0 <= int(self.seed) < 2 ** 64:
            raise ConfigurationError(f"seed deve ser inteiro de 64 bits sem sinal, recebido {self.seed!r}")

    @property
    def N(self) -> int:
        return self.L * self.L


def _frozen_mask(mask: np.ndarray) -> np.ndarray:
    frozen = np.array(mask, dtype=bool, copy=True)
    frozen.setflags(write=False)
    return frozen


@dataclass(frozen=True, eq=False)
class OccupancyGrid:
    """Amostra L×L; ``occupied[row, col]`` é True para sítios ocupados."""
    L: int
    occupied: np.ndarray
    p: Optional[float] = None
    seed: int = 0

    def __post_init__(self):
        if self.occupied.shape != (self.L, self.L):
            raise GridFormatError(f"grade {self.occupied.shape} não corresponde a L={self.L}")
        object.__setattr__(self, "occupied", _frozen_mask(self.occupied))

    @property
    def mask(self) -> np.ndarray:
        return self.occupied

    @property
    def occupied_count(self) -> int:
        return int(self.occupied.sum())

    @property
    def fraction(self) -> float:
        return self.occupied_count / float(self.L * self.L)

    @classmethod
    def from_vertices(cls, L: int, vertices: Iterable[Tuple[int, int]]) -> "OccupancyGrid":
        mask = np.zeros((L, L), dtype=bool)
        for r, c in vertices:
            mask[r, c] = True
        return cls(L, mask)


def site_uniforms(L: int, seed: int) -> np.ndarray:
    """Uniformes em [0, 1) por sítio, funções apenas de (seed, row, col).

    Não dependem de p nem de L, o que acopla amostras de p diferentes
    (ocupação monótona) e torna cada sítio independente da ordem de cálculo.
    """
    rows, cols = np.indices((L, L), dtype=np.uint64)
    key = np.uint64(derive_seed(seed))
    h = splitmix64_array(rows ^ key)
    h = splitmix64_array(h ^ cols)
    return (h >> np.uint64(11)).astype(np.float64) * (1.0 / 9007199254740992.0)


def sample_grid(config: LatticeConfig) -> OccupancyGrid:
    """Sorteia a amostra: sítio ocupado quando seu uniforme é menor que p."""
    occupied = site_uniforms(config.L, config.seed) < config.p
    return OccupancyGrid(config.L, occupied, p=float(config.p), seed=int(config.seed))


def format_grid(grid: OccupancyGrid) -> str:
    """Formato texto: cabeçalho ``L p seed`` e linhas de '1'/'0', topo primeiro."""
    p = grid.p if grid.p is not None else grid.fraction
    lines = [f"{grid.L} {float(p)!r} {int(grid.seed)}"]
    for row in range(grid.L - 1, -1, -1):
        lines.append("".join("1" if x else "0" for x in grid.occupied[row]))
    return "\n".join(lines) + "\n"


def parse_grid(text: str) -> OccupancyGrid:
    lines = [line.strip() for line in text.strip().splitlines()]
    if not lines:
        raise GridFormatError("arquivo de grade vazio")
    header = lines[0].split()
    if len(header) != 3:
        raise GridFormatError(f"cabeçalho deve ser 'L p seed', recebido {lines[0]!r}")
    try:
        L, p, seed = int(header[0]), float(header[1]), int(header[2])
    except ValueError as e:
        raise GridFormatError(f"cabeçalho inválido: {e}") from e
    if L < 1 or not 0.0 <= p <= 1.0 or not 0 <= seed < 2 ** 64:
        raise GridFormatError(f"cabeçalho fora do domínio: {lines[0]!r}")
    body = lines[1:]
    if len(body) != L:
        raise GridFormatError(f"esperadas {L} linhas, encontradas {len(body)}")
    mask = np.zeros((L, L), dtype=bool)
    for i, line in enumerate(body):
        if len(line) != L or set(line) - {"0", "1"}:
            raise GridFormatError(f"linha {i + 2} inválida: {line!r}")
        mask[L - 1 - i] = [ch == "1" for ch in line]
    return OccupancyGrid(L, mask, p=p, seed=seed)


@dataclass(frozen=True, eq=False)
class SiteGraph:
    """Grafo induzido pelos sítios ocupados (arestas entre vizinhos ocupados)."""
    L: int
    mask: np.ndarray = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "mask", _frozen_mask(self.mask))

    @classmethod
    def from_vertices(cls, L: int, vertices: Iterable[Tuple[int, int]]) -> "SiteGraph":
        return grid_to_graph(OccupancyGrid.from_vertices(L, vertices))

    @cached_property
    def vertices(self) -> FrozenSet[VertexId]:
        return frozenset(VertexId(int(r), int(c)) for r, c in zip(*np.nonzero(self.mask)))

    @cached_property
    def adjacency(self) -> Dict[VertexId, Tuple[VertexId, ...]]:
        return {v: self._neighbors(v) for v in sorted(self.vertices)}

    def _neighbors(self, v: VertexId) -> Tuple[VertexId, ...]:
        out = []
        for dr, dc in DIRECTIONS:
            r, c = v.row + dr, v.col + dc
            if 0 <= r < self.L and 0 <= c < self.L and self.mask[r, c]:
                out.append(VertexId(r, c))
        return tuple(sorted(out))

    def __contains__(self, v) -> bool:
        r, c = v
        return 0 <= r < self.L and 0 <= c < self.L and bool(self.mask[r, c])

    def neighbors(self, v: VertexId) -> Tuple[VertexId, ...]:
        v = VertexId(*v)
        return self.adjacency.get(v) or self._neighbors(v)

    def degree(self, v: VertexId) -> int:
        return len(self.neighbors(v))

    def has_edge(self, a: VertexId, b: VertexId) -> bool:
        return a in self and b in self and abs(a[0] - b[0]) + abs(a[1] - b[1]) == 1

    @property
    def vertex_count(self) -> int:
        return int(self.mask.sum())

    @property
    def edge_count(self) -> int:
        m = self.mask
        return int((m[:, :-1] & m[:, 1:]).sum() + (m[:-1, :] & m[1:, :]).sum())

    def edges(self) -> List[Tuple[VertexId, VertexId]]:
        """Arestas como pares ordenados (menor, maior), em ordem crescente."""
        return [(v, w) for v, nbrs in self.adjacency.items() for w in nbrs if v < w]

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(sorted(self.vertices))
        g.add_edges_from(self.edges())
        return g


GridLike = Union[OccupancyGrid, SiteGraph]


def grid_to_graph(grid: OccupancyGrid) -> SiteGraph:
    return SiteGraph(grid.L, grid.occupied)


def label_components(mask: np.ndarray) -> Tuple[np.ndarray, int]:
    """Rótulos de componentes 4-conexos (0 = vazio), em ordem de varredura."""
    labels, count = ndimage.label(mask, structure=CROSS)
    return labels, int(count)


def component_sizes(mask: np.ndarray) -> np.ndarray:
    """Tamanhos dos componentes, indexados por rótulo - 1."""
    labels, count = label_components(mask)
    if count == 0:
        return np.zeros(0, dtype=np.int64)
    return np.bincount(labels.ravel(), minlength=count + 1)[1:]


def connected_components(graph: SiteGraph) -> List[FrozenSet[VertexId]]:
    """Partição em componentes conexos, ordenada pelo menor VertexId de cada um.

    A rotulagem do scipy percorre a máscara em ordem (row, col), então o
    rótulo k já corresponde ao k-ésimo menor representante.
    """
    labels, count = label_components(graph.mask)
    if count == 0:
        return []
    rows, cols = np.nonzero(labels)
    flat = labels[rows, cols]
    order = np.argsort(flat, kind="stable")
    bounds = np.searchsorted(flat[order], np.arange(1, count + 2))
    components = []
    for i in range(count):
        idx = order[bounds[i]:bounds[i + 1]]
        components.append(frozenset(VertexId(int(rows[k]), int(cols[k])) for k in idx))
    return components


def vertices_to_mask(L: int, vertices: Iterable[Tuple[int, int]]) -> np.ndarray:
    mask = np.zeros((L, L), dtype=bool)
    for r, c in vertices:
        mask[r, c] = True
    return mask


def mask_to_vertices(mask: np.ndarray) -> FrozenSet[VertexId]:
    return frozenset(VertexId(int(r), int(c)) for r, c in zip(*np.nonzero(mask)))


def dilate_mask(mask: np.ndarray, k: int) -> np.ndarray:
    """Sítios a distância de Manhattan <= k da máscara, sobre toda a rede."""
    if k == 0:
        # iterations=0 no scipy significa "até convergir"
        return mask.copy()
    return ndimage.binary_dilation(mask, structure=CROSS, iterations=k)


def k_neighborhood(
    graph_or_grid: GridLike,
    S: Iterable[Tuple[int, int]],
    k: int,
    domain: str = "all",
) -> FrozenSet[VertexId]:
    """Vizinhança-k de S em distância de Manhattan da rede.

    ``domain="all"`` inclui sítios vazios; ``domain="occupied"`` intersecta
    com os sítios ocupados. Para k=0 devolve S.
    """
    if k < 0:
        raise ConfigurationError("k deve ser não negativo")
    S = frozenset(VertexId(*v) for v in S)
    if k == 0:
        return S
    seed_mask = vertices_to_mask(graph_or_grid.L, S)
    grown = dilate_mask(seed_mask, k)
    if domain == "occupied":
        grown &= graph_or_grid.mask
    elif domain != "all":
        raise ConfigurationError(f"domínio desconhecido: {domain!r}")
    return mask_to_vertices(grown)


def neighborhood(graph: SiteGraph, S: Iterable[Tuple[int, int]]) -> FrozenSet[VertexId]:
    """N(S): vizinhos ocupados de S, excluindo os próprios vértices de S."""
    S = frozenset(VertexId(*v) for v in S)
    out = set()
    for v in S:
        out.update(graph.neighbors(v))
    return frozenset(out - S)
