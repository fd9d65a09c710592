"""
Identificação de cruzamentos disjuntos por seguidor de parede pela mão
direita (RHWF), limpeza por caminho mínimo e relatório de erros de
proximidade e de grau.

Todos os cruzamentos são procurados na orientação H (coluna 0 -> coluna
L-1). Os V-paths usam a máscara transposta, o que faz o seguidor encostar
na borda esquerda, e são convertidos de volta para (row, col).
"""

from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Set, Tuple

import numpy as np

from core.errors import CleanupError
from core.lattice import DIRECTIONS, SiteGraph, VertexId
from utils.logger import get_logger

ERROR_CLASSES = ("Self-H", "Self-V", "H-H", "V-V", "H-V", "Degree-1", "Degree-2", "Degree-4", "Lattice")


class Orientation(str, Enum):
    H = "H"
    V = "V"


@dataclass
class WorkCounter:
    """Contador determinístico de trabalho por estágio (não é tempo de relógio)."""
    counts: Dict[str, int] = field(default_factory=dict)

    def add(self, stage: str, amount: int = 1):
        self.counts[stage] = self.counts.get(stage, 0) + int(amount)

    def get(self, stage: str) -> int:
        return self.counts.get(stage, 0)

    @property
    def total(self) -> int:
        return sum(self.counts.values())


@dataclass(frozen=True)
class CrossingPath:
    orientation: Orientation
    index: int
    vertices: Tuple[VertexId, ...]

    def __len__(self) -> int:
        return len(self.vertices)

    @property
    def vertex_set(self) -> FrozenSet[VertexId]:
        return frozenset(self.vertices)

    @property
    def positions(self) -> Dict[VertexId, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    def with_index(self, index: int) -> "CrossingPath":
        return CrossingPath(self.orientation, index, self.vertices)

    def to_json(self) -> Dict:
        return {
            "orientation": self.orientation.value,
            "index": self.index,
            "vertices": [v.to_json() for v in self.vertices],
        }


@dataclass(frozen=True)
class PathSet:
    """Caminhos disjuntos de uma orientação, indexados a partir de 1."""
    orientation: Orientation
    paths: Tuple[CrossingPath, ...]
    provenance: str
    found_count: int = 0
    visits: int = 0

    def __len__(self) -> int:
        return len(self.paths)

    def __iter__(self):
        return iter(self.paths)

    def __getitem__(self, i: int) -> CrossingPath:
        return self.paths[i]

    def vertex_owner(self) -> Dict[VertexId, int]:
        """Vértice -> índice (1-based) do caminho que o contém."""
        return {v: path.index for path in self.paths for v in path.vertices}

    def to_json(self) -> Dict:
        return {
            "orientation": self.orientation.value,
            "provenance": self.provenance,
            "found_count": self.found_count,
            "visits": self.visits,
            "paths": [p.to_json() for p in self.paths],
        }


@dataclass
class ErrorReport:
    """Testemunhas por classe de erro (arestas ou vértices do grafo de entrada)."""
    witnesses: Dict[str, List] = field(default_factory=lambda: {name: [] for name in ERROR_CLASSES})

    def add(self, kind: str, witness) -> None:
        self.witnesses[kind].append(witness)

    @property
    def counts(self) -> Dict[str, int]:
        return {name: len(items) for name, items in self.witnesses.items()}

    def count(self, *kinds: str) -> int:
        return sum(len(self.witnesses[k]) for k in kinds)

    def to_json(self) -> Dict:
        return {
            "counts": self.counts,
            "witnesses": {k: [_witness_json(w) for w in v] for k, v in self.witnesses.items()},
        }


def _witness_json(witness):
    if isinstance(witness, VertexId):
        return witness.to_json()
    if isinstance(witness, (tuple, list)):
        return [_witness_json(w) for w in witness]
    return witness


# --- seguidor de parede ------------------------------------------------------

def _wall_follow(available: np.ndarray, start: Tuple[int, int]) -> Tuple[bool, List[Tuple[int, int]], Set[Tuple[int, int]], int]:
    """Caminha com a mão direita na parede a partir de ``start`` rumo ao leste.

    Preferência relativa: direita, frente, esquerda, ré. Sucesso ao atingir a
    última coluna. Falha quando uma aresta dirigida se repete (a fronteira da
    face foi percorrida inteira) ou quando não há movimento possível.
    Devolve (sucesso, caminho com laços apagados, vértices visitados, visitas).
    """
    L = available.shape[1]
    r, c = start
    heading = 0
    path = [start]
    position = {start: 0}
    walked = {start}
    used_moves: Set[Tuple[int, int, int]] = set()
    visits = 1

    while c != L - 1:
        moved = False
        for turn in (-1, 0, 1, 2):
            d = (heading + turn) % 4
            dr, dc = DIRECTIONS[d]
            nr, nc = r + dr, c + dc
            if 0 <= nr < available.shape[0] and 0 <= nc < L and available[nr, nc]:
                moved = True
                break
        if not moved:
            return False, path, walked, visits
        move = (r, c, d)
        if move in used_moves:
            return False, path, walked, visits
        used_moves.add(move)
        r, c, heading = nr, nc, d
        visits += 1
        walked.add((r, c))
        if (r, c) in position:
            # apaga o laço
            cut = position[(r, c)]
            for v in path[cut + 1:]:
                del position[v]
            del path[cut + 1:]
        else:
            position[(r, c)] = len(path)
            path.append((r, c))
    return True, path, walked, visits


def _next_crossing(available: np.ndarray, counter: WorkCounter) -> Optional[Tuple[List[Tuple[int, int]], Set[Tuple[int, int]]]]:
    """Primeiro cruzamento da esquerda para a direita a partir da base.

    Mutação: vértices de tentativas fracassadas são removidos de ``available``
    (pertencem a componentes que não atingem a borda direita).
    """
    for row in range(available.shape[0]):
        if not available[row, 0]:
            continue
        ok, path, walked, visits = _wall_follow(available, (row, 0))
        counter.add("rhwf_visits", visits)
        if ok:
            return path, walked
        for r, c in walked:
            available[r, c] = False
    return None


def _to_orientation(cells: Iterable[Tuple[int, int]], orientation: Orientation) -> List[VertexId]:
    if orientation is Orientation.H:
        return [VertexId(r, c) for r, c in cells]
    return [VertexId(c, r) for r, c in cells]


def _oriented_mask(mask: np.ndarray, orientation: Orientation) -> np.ndarray:
    return np.array(mask if orientation is Orientation.H else mask.T, dtype=bool, copy=True)


def rhwf_crossing(
    graph: SiteGraph,
    orientation: Orientation,
    forbidden: Iterable[Tuple[int, int]] = (),
    counter: Optional[WorkCounter] = None,
) -> Optional[CrossingPath]:
    """Cruzamento extremo (encostado na borda) fora de ``forbidden``, ou None.

    H encosta na borda inferior; V encosta na borda esquerda. O caminho é o
    do seguidor com laços apagados, sem limpeza por caminho mínimo.
    """
    counter = counter if counter is not None else WorkCounter()
    available = np.array(graph.mask, dtype=bool, copy=True)
    for r, c in forbidden:
        available[r, c] = False
    oriented = _oriented_mask(available, orientation)
    found = _next_crossing(oriented, counter)
    if found is None:
        return None
    path, _ = found
    return CrossingPath(orientation, 1, tuple(_to_orientation(path, orientation)))


def _is_start(v: VertexId, orientation: Orientation) -> bool:
    return (v.col if orientation is Orientation.H else v.row) == 0


def _is_end(v: VertexId, orientation: Orientation, L: int) -> bool:
    return (v.col if orientation is Orientation.H else v.row) == L - 1


def shortest_path_cleanup(path: CrossingPath, graph: SiteGraph) -> CrossingPath:
    """Cruzamento mínimo dentro do subgrafo induzido pelos vértices do caminho.

    Entre cruzamentos de mesmo comprimento escolhe a sequência
    lexicograficamente menor. O resultado usa apenas vértices da entrada.
    """
    allowed = path.vertex_set
    orientation, L = path.orientation, graph.L

    # distâncias até a borda de chegada
    dist: Dict[VertexId, int] = {}
    queue = deque()
    for v in sorted(allowed):
        if _is_end(v, orientation, L):
            dist[v] = 0
            queue.append(v)
    while queue:
        v = queue.popleft()
        for w in graph.neighbors(v):
            if w in allowed and w not in dist:
                dist[w] = dist[v] + 1
                queue.append(w)

    starts = [v for v in allowed if _is_start(v, orientation) and v in dist]
    if not starts:
        raise CleanupError(
            f"caminho {orientation.value}{path.index} não contém cruzamento",
            witness={"vertices": [v.to_json() for v in path.vertices]},
        )
    best = min(dist[v] for v in starts)
    current = min(v for v in starts if dist[v] == best)
    cleaned = [current]
    while dist[current] > 0:
        current = min(w for w in graph.neighbors(current) if w in allowed and dist.get(w) == dist[current] - 1)
        cleaned.append(current)
    return CrossingPath(orientation, path.index, tuple(cleaned))


def _diamond(radius: int) -> np.ndarray:
    """Deslocamentos (dr, dc) com |dr| + |dc| <= radius."""
    span = np.arange(-radius, radius + 1)
    dr, dc = np.meshgrid(span, span, indexing="ij")
    keep = np.abs(dr) + np.abs(dc) <= radius
    return np.stack([dr[keep], dc[keep]], axis=1)


def _exclude_around(available: np.ndarray, cells: np.ndarray, radius: int) -> int:
    """Proíbe a bola de Manhattan de ``radius`` em torno de ``cells``; devolve o trabalho."""
    around = (cells[:, None, :] + _diamond(radius)[None, :, :]).reshape(-1, 2)
    inside = np.all((around >= 0) & (around < available.shape[0]), axis=1)
    rows, cols = around[inside].T
    available[rows, cols] = False
    return int(inside.sum())


def _enumerate_crossings(
    graph: SiteGraph,
    orientation: Orientation,
    exclusion: int,
    counter: WorkCounter,
) -> List[CrossingPath]:
    """Aplica o RHWF repetidamente; cada caminho proíbe seus vértices visitados.

    Com ``exclusion > 0`` proíbe também a vizinhança de Manhattan daquele
    raio em torno de cada caminho limpo (sobre todos os sítios), tocando só
    as células próximas do caminho.
    """
    available = _oriented_mask(graph.mask, orientation)
    paths: List[CrossingPath] = []
    while True:
        found = _next_crossing(available, counter)
        if found is None:
            break
        cells, walked = found
        raw = CrossingPath(orientation, len(paths) + 1, tuple(_to_orientation(cells, orientation)))
        cleaned = shortest_path_cleanup(raw, graph)
        counter.add("cleanup", len(raw))
        paths.append(cleaned)
        for r, c in walked:
            available[r, c] = False
        if exclusion:
            kept = np.array(cleaned.vertices, dtype=np.int64)
            if orientation is Orientation.V:
                kept = kept[:, ::-1]
            counter.add("exclusion", _exclude_around(available, kept, exclusion))
    return paths


def find_h_paths(graph: SiteGraph, counter: Optional[WorkCounter] = None) -> PathSet:
    """H-paths pelo RHWF 2-local, de baixo para cima."""
    counter = counter if counter is not None else WorkCounter()
    before = counter.get("rhwf_visits")
    paths = _enumerate_crossings(graph, Orientation.H, 2, counter)
    get_logger().debug(f"H-paths encontrados: {len(paths)}")
    return PathSet(
        Orientation.H,
        tuple(paths),
        provenance="rhwf-2-local",
        found_count=len(paths),
        visits=counter.get("rhwf_visits") - before,
    )


def find_all_v_paths(graph: SiteGraph, counter: Optional[WorkCounter] = None) -> PathSet:
    """Todos os V-paths do RHWF simples, da esquerda para a direita."""
    counter = counter if counter is not None else WorkCounter()
    before = counter.get("rhwf_visits")
    paths = _enumerate_crossings(graph, Orientation.V, 0, counter)
    return PathSet(
        Orientation.V,
        tuple(paths),
        provenance="rhwf",
        found_count=len(paths),
        visits=counter.get("rhwf_visits") - before,
    )


def find_v_paths(graph: SiteGraph, counter: Optional[WorkCounter] = None) -> PathSet:
    """V-paths do RHWF simples, mantendo um a cada três a partir do primeiro."""
    everything = find_all_v_paths(graph, counter)
    kept = [p.with_index(i + 1) for i, p in enumerate(everything.paths[::3])]
    get_logger().debug(f"V-paths encontrados: {everything.found_count}, mantidos: {len(kept)}")
    return PathSet(
        Orientation.V,
        tuple(kept),
        provenance="rhwf-every-third",
        found_count=everything.found_count,
        visits=everything.visits,
    )


# --- validação ----------------------------------------------------------------

def _self_errors(path: CrossingPath, graph: SiteGraph) -> List[Tuple[VertexId, VertexId]]:
    positions = path.positions
    out = []
    for i, v in enumerate(path.vertices):
        for w in graph.neighbors(v):
            j = positions.get(w)
            if j is not None and j > i + 1:
                out.append((v, w))
    return out


def _same_orientation_errors(pset: PathSet, graph: SiteGraph) -> List[Tuple[VertexId, VertexId]]:
    owner = pset.vertex_owner()
    out = []
    for path in pset.paths:
        for v in path.vertices:
            for w in graph.neighbors(v):
                other = owner.get(w)
                if other is not None and other > path.index:
                    out.append((v, w))
    return out


def _hv_errors(h: CrossingPath, v_at: Mapping[VertexId, Tuple[int, int]], graph: SiteGraph) -> Tuple[Dict[int, List], int]:
    """Interseções não contíguas e arestas H-V fora da região de interseção.

    ``v_at`` leva cada vértice de V ao par (índice do V-path, posição). Uma
    passada sobre ``h``; as testemunhas saem agrupadas por V-path.
    """
    h_set = h.vertex_set
    shared: Dict[int, List[Tuple[int, VertexId]]] = {}
    edges: Dict[int, List] = {}
    work = 0
    for x in h.vertices:
        own = v_at.get(x)
        if own is not None:
            shared.setdefault(own[0], []).append((own[1], x))
        for w in graph.neighbors(x):
            work += 1
            other = v_at.get(w)
            if other is None or w in h_set or (own is not None and own[0] == other[0]):
                continue
            edges.setdefault(other[0], []).append((x, w))
    out: Dict[int, List] = {}
    for k in set(shared) | set(edges):
        hits = sorted(shared.get(k, []))
        out[k] = [("intersection", y) for (a, _), (b, y) in zip(hits, hits[1:]) if b != a + 1]
        out[k].extend(edges.get(k, []))
    return out, work


def validate_paths(hset: PathSet, vset: PathSet, graph: SiteGraph, counter: Optional[WorkCounter] = None) -> ErrorReport:
    """Erros de proximidade entre caminhos, com testemunhas concretas.

    Trabalho linear no número de vértices dos caminhos: cada H-path é
    percorrido uma vez contra o mapa de donos dos V-paths.
    """
    report = ErrorReport()
    for path in hset.paths:
        for edge in _self_errors(path, graph):
            report.add("Self-H", edge)
    for path in vset.paths:
        for edge in _self_errors(path, graph):
            report.add("Self-V", edge)
    for edge in _same_orientation_errors(hset, graph):
        report.add("H-H", edge)
    for edge in _same_orientation_errors(vset, graph):
        report.add("V-V", edge)
    v_at = {x: (v.index, pos) for v in vset.paths for pos, x in enumerate(v.vertices)}
    work = len(v_at)
    for h in hset.paths:
        per_v, scanned = _hv_errors(h, v_at, graph)
        work += scanned
        for k in sorted(per_v):
            for witness in per_v[k]:
                report.add("H-V", witness)
    if counter is not None:
        counter.add("validation", work)
    return report


def audit_subgraph(adjacency: Mapping[VertexId, Iterable[VertexId]], exempt: Iterable[VertexId] = ()) -> ErrorReport:
    """Erros de grau de um subgrafo mantido.

    Degree-1 são pontas soltas, Degree-2 são fios (contraídos por Y na
    etapa quântica) e Degree-4 precisam de correção clássica. Vértices em
    ``exempt`` (junções de borda, por exemplo) não contam como Degree-1/2.
    """
    report = ErrorReport()
    exempt = set(exempt)
    for v in sorted(adjacency):
        degree = len(set(adjacency[v]))
        if degree == 1 and v not in exempt:
            report.add("Degree-1", v)
        elif degree == 2 and v not in exempt:
            report.add("Degree-2", v)
        elif degree >= 4:
            report.add("Degree-4", v)
    return report
