"""
Decomposição em pontes, decomposição alternada, abutments e seus fechos,
verificação de ordem total, correção local nas junções e extração do
subgrafo cuja contração é a rede hexagonal (brick-wall).

Índices: H-paths ``j = 1..J`` de baixo para cima, V-paths mantidos
``k = 1..K`` da esquerda para a direita. A faixa ``j`` fica entre
``H^j`` e ``H^{j+1}``.
"""

from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Optional, Set, Tuple

import networkx as nx

from core.crossings import CrossingPath, Orientation, PathSet, WorkCounter
from core.errors import BridgeDecompositionError, JunctionReductionError, TotalOrderViolation
from core.graph_state import hex_lattice_graph
from core.lattice import SiteGraph, VertexId, neighborhood
from utils.debug import get_debug_manager
from utils.logger import get_logger

HexNode = Tuple[int, int]


@dataclass(frozen=True)
class Bridge:
    j: int
    k: int
    vertices: Tuple[VertexId, ...]

    @property
    def s(self) -> VertexId:
        return self.vertices[0]

    @property
    def e(self) -> VertexId:
        return self.vertices[-1]

    def to_json(self) -> Dict:
        return {"j": self.j, "k": self.k, "s": self.s.to_json(), "e": self.e.to_json(),
                "vertices": [v.to_json() for v in self.vertices]}


@dataclass(frozen=True)
class BridgeDecomposition:
    bridges: Dict[Tuple[int, int], Bridge]
    retained: FrozenSet[Tuple[int, int]]
    J: int
    K: int
    alternating: bool = False

    @property
    def active(self) -> List[Bridge]:
        return [self.bridges[key] for key in sorted(self.retained)]

    def to_json(self) -> Dict:
        return {
            "J": self.J,
            "K": self.K,
            "alternating": self.alternating,
            "bridges": [b.to_json() for _, b in sorted(self.bridges.items())],
            "retained": [list(key) for key in sorted(self.retained)],
        }


@dataclass(frozen=True)
class Abutment:
    """Partes de H^j vizinhas da ponte acima (upper) e da ponte abaixo (lower).

    Os fechos são dados como intervalos fechados de posições em H^j.
    """
    j: int
    k: int
    upper: FrozenSet[VertexId]
    lower: FrozenSet[VertexId]
    closure_upper: Optional[Tuple[int, int]]
    closure_lower: Optional[Tuple[int, int]]
    closure_total: Tuple[int, int]

    def to_json(self) -> Dict:
        return {
            "j": self.j,
            "k": self.k,
            "upper": [v.to_json() for v in sorted(self.upper)],
            "lower": [v.to_json() for v in sorted(self.lower)],
            "closure_upper": list(self.closure_upper) if self.closure_upper else None,
            "closure_lower": list(self.closure_lower) if self.closure_lower else None,
            "closure_total": list(self.closure_total),
        }


@dataclass
class IdentifiedSubgraph:
    vertices: FrozenSet[VertexId]
    edges: Tuple[Tuple[VertexId, VertexId], ...]
    hex_map: Dict[VertexId, HexNode]
    J: int = 0
    K: int = 0
    spacers: FrozenSet[VertexId] = frozenset()
    warnings: List[str] = field(default_factory=list)

    def adjacency(self) -> Dict[VertexId, Set[VertexId]]:
        adj: Dict[VertexId, Set[VertexId]] = {v: set() for v in self.vertices}
        for a, b in self.edges:
            adj[a].add(b)
            adj[b].add(a)
        return adj

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(sorted(self.vertices))
        g.add_edges_from(self.edges)
        return g

    def to_json(self) -> Dict:
        return {
            "J": self.J,
            "K": self.K,
            "vertices": [v.to_json() for v in sorted(self.vertices)],
            "edges": [[a.to_json(), b.to_json()] for a, b in self.edges],
            "hex_map": [{"vertex": v.to_json(), "node": list(node)} for v, node in sorted(self.hex_map.items())],
            "spacers": [v.to_json() for v in sorted(self.spacers)],
            "warnings": list(self.warnings),
        }


@dataclass
class CorrectionResult:
    hset: PathSet
    subgraph: IdentifiedSubgraph
    junctions: Dict[HexNode, VertexId]
    spliced: List[Tuple[int, int, str]]

    def to_json(self) -> Dict:
        return {
            "hset": self.hset.to_json(),
            "junctions": [{"node": list(node), "vertex": v.to_json()} for node, v in sorted(self.junctions.items())],
            "spliced": [list(item) for item in self.spliced],
        }


# --- decomposição --------------------------------------------------------------

def _zone_labels(hset: PathSet, graph: SiteGraph) -> Dict[VertexId, int]:
    """Vértice -> j para Z_j = H^j ∪ N(H^j); as zonas são disjuntas."""
    labels: Dict[VertexId, int] = {}
    for path in hset.paths:
        zone = set(path.vertices) | neighborhood(graph, path.vertices)
        for v in zone:
            if v in labels:
                raise BridgeDecompositionError(
                    f"zonas de H^{labels[v]} e H^{path.index} se tocam em {tuple(v)}",
                    witness={"vertex": v.to_json()},
                )
            labels[v] = path.index
    return labels


def bridge_decomposition(
    hset: PathSet,
    vset: PathSet,
    graph: SiteGraph,
    counter: Optional[WorkCounter] = None,
) -> BridgeDecomposition:
    """Uma ponte por V-path e por faixa atravessada.

    ``s`` é o último vértice de V^k em N(H^j) antes da subida para
    N(H^{j+1}) e ``e`` o primeiro vértice seguinte em N(H^{j+1}); entre os
    dois nenhum vértice toca as zonas das duas H-paths.
    """
    labels = _zone_labels(hset, graph)
    J, K = len(hset), len(vset)
    bridges: Dict[Tuple[int, int], Bridge] = {}

    for vpath in vset.paths:
        if counter is not None:
            counter.add("bridges", len(vpath))
        marks = [(i, labels[v]) for i, v in enumerate(vpath.vertices) if v in labels]
        last_transition: Dict[int, Tuple[int, int]] = {}
        for (i, zi), (i2, zi2) in zip(marks, marks[1:]):
            if zi2 == zi + 1:
                last_transition[zi] = (i, i2)
        for j in range(1, J):
            if j not in last_transition:
                raise BridgeDecompositionError(
                    f"V^{vpath.index} não atravessa a faixa {j}",
                    witness={"k": vpath.index, "j": j, "vertices": [v.to_json() for v in vpath.vertices]},
                )
            start, end = last_transition[j]
            segment = vpath.vertices[start:end + 1]
            if segment[0] == segment[-1]:
                raise BridgeDecompositionError(f"ponte ({j},{vpath.index}) degenerada")
            bridges[(j, vpath.index)] = Bridge(j, vpath.index, tuple(segment))

    return BridgeDecomposition(bridges, frozenset(bridges), J, K, alternating=False)


def alternating_decomposition(bd: BridgeDecomposition) -> BridgeDecomposition:
    """Mantém as pontes com j+k par (remove as de paridade ímpar)."""
    retained = frozenset(key for key in bd.bridges if (key[0] + key[1]) % 2 == 0)
    return BridgeDecomposition(bd.bridges, retained, bd.J, bd.K, alternating=True)


# --- abutments -----------------------------------------------------------------

def _interval(positions: Iterable[int]) -> Optional[Tuple[int, int]]:
    positions = list(positions)
    if not positions:
        return None
    return (min(positions), max(positions))


def compute_abutments(bd: BridgeDecomposition, hset: PathSet, graph: SiteGraph) -> List[Abutment]:
    """Abutments das pontes ativas, ordenados ao longo de cada H-path."""
    active = {(b.j, b.k): b for b in bd.active}
    out: List[Abutment] = []
    for path in hset.paths:
        j = path.index
        positions = path.positions
        path_set = path.vertex_set
        found = []
        for k in range(1, bd.K + 1):
            above = active.get((j, k))
            below = active.get((j - 1, k))
            upper = frozenset(path_set & neighborhood(graph, above.vertices)) if above else frozenset()
            lower = frozenset(path_set & neighborhood(graph, below.vertices)) if below else frozenset()
            if not upper and not lower:
                continue
            total = _interval(positions[v] for v in upper | lower)
            found.append(Abutment(
                j, k, upper, lower,
                _interval(positions[v] for v in upper),
                _interval(positions[v] for v in lower),
                total,
            ))
        found.sort(key=lambda a: a.closure_total)
        out.extend(found)
    return out


def verify_total_order(abutments: Iterable[Abutment]) -> Tuple[bool, List[Dict]]:
    """Fechos disjuntos e na ordem dos V-paths ao longo de cada H-path."""
    witnesses: List[Dict] = []
    by_path: Dict[int, List[Abutment]] = {}
    for a in abutments:
        by_path.setdefault(a.j, []).append(a)
    for j, items in sorted(by_path.items()):
        items = sorted(items, key=lambda a: a.closure_total)
        for left, right in zip(items, items[1:]):
            if right.closure_total[0] <= left.closure_total[1]:
                witnesses.append({"j": j, "k": [left.k, right.k], "kind": "overlap",
                                  "intervals": [list(left.closure_total), list(right.closure_total)]})
            elif right.k < left.k:
                witnesses.append({"j": j, "k": [left.k, right.k], "kind": "order",
                                  "intervals": [list(left.closure_total), list(right.closure_total)]})
    return not witnesses, witnesses


# --- correção local ----------------------------------------------------------------

def _bridge_attachments(bd: BridgeDecomposition) -> Dict[Tuple[int, int], VertexId]:
    """(j, k) -> extremo da ponte ativa que toca H^j."""
    out = {}
    for b in bd.active:
        out[(b.j, b.k)] = b.s
        out[(b.j + 1, b.k)] = b.e
    return out


def correct_local_errors(
    hset: PathSet,
    bd: BridgeDecomposition,
    abutments: Iterable[Abutment],
    graph: SiteGraph,
    counter: Optional[WorkCounter] = None,
) -> CorrectionResult:
    """Reduz cada junção a um único vértice de grau 3.

    Abutment de um vértice: a junção é esse vértice de H^j. Caso contrário o
    interior do fecho é removido de H^j (os extremos ficam) e o extremo da
    ponte é inserido no caminho, tornando-se a junção. Cada extremo é
    tratado separadamente.
    """
    ok, witnesses = verify_total_order(abutments)
    if not ok:
        get_debug_manager().dump_witness("total_order", {"witnesses": witnesses})
        raise TotalOrderViolation("fechos de abutments se sobrepõem", witness={"witnesses": witnesses})

    attachments = _bridge_attachments(bd)
    active_keys = set(bd.retained)
    revised: List[CrossingPath] = []
    spliced: List[Tuple[int, int, str]] = []

    for path in hset.paths:
        j = path.index
        positions = path.positions
        splices = []
        for k in range(1, bd.K + 1):
            endpoint = attachments.get((j, k))
            if endpoint is None:
                continue
            touching = sorted(positions[v] for v in neighborhood(graph, [endpoint]) if v in positions)
            if not touching:
                raise JunctionReductionError(
                    f"extremo {tuple(endpoint)} não toca H^{j}",
                    witness={"j": j, "k": k, "endpoint": endpoint.to_json()},
                )
            if len(touching) > 1:
                side = "upper" if (j, k) in active_keys else "lower"
                splices.append((touching[0], touching[-1], endpoint, k, side))
        vertices = list(path.vertices)
        # da direita para a esquerda preserva as posições ainda não tratadas
        for first, last, endpoint, k, side in sorted(splices, reverse=True):
            vertices[first + 1:last] = [endpoint]
            spliced.append((j, k, side))
            if counter is not None:
                counter.add("correction", last - first + 1)
        revised.append(CrossingPath(Orientation.H, j, tuple(vertices)))

    revised_hset = PathSet(Orientation.H, tuple(revised), hset.provenance + "+corrected",
                           hset.found_count, hset.visits)
    subgraph, junctions = _extract(revised_hset, bd, graph)

    adjacency = subgraph.adjacency()
    junction_vertices = set(junctions.values())
    bad = [v for v, nbrs in adjacency.items()
           if len(nbrs) > (3 if v in junction_vertices else 2)]
    if bad:
        payload = {
            "vertices": [v.to_json() for v in sorted(bad)],
            "degrees": [len(adjacency[v]) for v in sorted(bad)],
            "subgraph": subgraph.to_json(),
        }
        get_debug_manager().dump_witness("junction_reduction", payload)
        raise JunctionReductionError(f"{len(bad)} vértices com grau excedente após a correção", witness=payload)

    subgraph.warnings.extend(_hh_contacts(revised_hset, graph))
    for message in subgraph.warnings:
        get_logger().warning(message)

    return CorrectionResult(revised_hset, subgraph, junctions, sorted(spliced))


def _hh_contacts(revised_hset: PathSet, graph: SiteGraph) -> List[str]:
    """Arestas da rede entre H^j e H^{j+1} revisados.

    Só registra; se o contato altera a topologia quem acusa é
    ``verify_topological_minor``.
    """
    owner = revised_hset.vertex_owner()
    out = []
    for path in revised_hset.paths:
        for v in path.vertices:
            for w in graph.neighbors(v):
                if owner.get(w) == path.index + 1:
                    out.append(f"contato H-H entre H^{path.index} e H^{path.index + 1} em {tuple(v)}-{tuple(w)}")
    return out


# --- extração ---------------------------------------------------------------------

def _junctions(revised_hset: PathSet, bd: BridgeDecomposition, graph: SiteGraph) -> Dict[HexNode, VertexId]:
    out: Dict[HexNode, VertexId] = {}
    for (j, k), endpoint in _bridge_attachments(bd).items():
        path_set = revised_hset[j - 1].vertex_set
        if endpoint in path_set:
            out[(j, k)] = endpoint
            continue
        touching = sorted(v for v in graph.neighbors(endpoint) if v in path_set)
        if len(touching) != 1:
            raise JunctionReductionError(
                f"junção ({j},{k}) ambígua: {len(touching)} vértices de H^{j} vizinhos de {tuple(endpoint)}",
                witness={"node": [j, k], "endpoint": endpoint.to_json()},
            )
        out[(j, k)] = touching[0]
    return out


def _spacers(revised_hset: PathSet, junctions: Dict[HexNode, VertexId], K: int) -> Dict[HexNode, VertexId]:
    """Vértice extra mantido nas H-paths de borda para nós sem ponte.

    Para o nó (j, k) usa o vértice logo após a junção (j, k-1); quando k=1,
    o vértice logo antes da junção (j, 2).
    """
    out: Dict[HexNode, VertexId] = {}
    for path in revised_hset.paths:
        j = path.index
        positions = path.positions
        for k in range(1, K + 1):
            if (j, k) in junctions:
                continue
            if (j, k - 1) in junctions:
                i = positions[junctions[(j, k - 1)]] + 1
            elif (j, k + 1) in junctions:
                i = positions[junctions[(j, k + 1)]] - 1
            else:
                raise JunctionReductionError(f"nó ({j},{k}) sem junção vizinha para espaçador")
            if not 0 <= i < len(path.vertices) or path.vertices[i] in junctions.values():
                raise JunctionReductionError(
                    f"sem vértice livre para o espaçador ({j},{k})",
                    witness={"node": [j, k], "path": [v.to_json() for v in path.vertices]},
                )
            out[(j, k)] = path.vertices[i]
    return out


def _extract(revised_hset: PathSet, bd: BridgeDecomposition, graph: SiteGraph) -> Tuple[IdentifiedSubgraph, Dict[HexNode, VertexId]]:
    if not revised_hset.paths:
        return IdentifiedSubgraph(frozenset(), (), {}, 0, bd.K), {}
    kept: Set[VertexId] = set()
    for path in revised_hset.paths:
        kept.update(path.vertices)
    for b in bd.active:
        kept.update(b.vertices)
    edges = tuple(sorted((v, w) for v in kept for w in graph.neighbors(v) if w in kept and v < w))

    junctions = _junctions(revised_hset, bd, graph)
    spacers = _spacers(revised_hset, junctions, bd.K)
    hex_map = {v: node for node, v in junctions.items()}
    hex_map.update({v: node for node, v in spacers.items()})
    sub = IdentifiedSubgraph(
        frozenset(kept), edges, hex_map, len(revised_hset), bd.K,
        spacers=frozenset(spacers.values()),
    )
    return sub, junctions


def extract_hex_minor(revised_hset: PathSet, bd: BridgeDecomposition, graph: SiteGraph) -> IdentifiedSubgraph:
    """Subgrafo mantido: H-paths revisadas e pontes ativas, com o mapa de junções."""
    sub, _ = _extract(revised_hset, bd, graph)
    return sub


# --- verificação da contração ---------------------------------------------------------

def verify_topological_minor(sub: IdentifiedSubgraph, J: int, K: int) -> bool:
    """True quando suprimir os vértices de grau 2 produz exatamente a rede hexagonal J×K.

    Pontas soltas fora do ``hex_map`` são podadas antes (seriam medidas em Z);
    o casamento é feito pelo ``hex_map``, sem busca de isomorfismo.
    """
    target = hex_lattice_graph(J, K)
    if sorted(sub.hex_map.values()) != sorted(target.nodes):
        return False
    adjacency = {v: set(nbrs) for v, nbrs in sub.adjacency().items()}
    hex_vertices = set(sub.hex_map)

    stack = [v for v, nbrs in adjacency.items() if v not in hex_vertices and len(nbrs) <= 1]
    while stack:
        v = stack.pop()
        if v not in adjacency:
            continue
        for w in adjacency.pop(v):
            adjacency[w].discard(v)
            if w not in hex_vertices and len(adjacency[w]) <= 1:
                stack.append(w)

    if any(len(nbrs) != 2 for v, nbrs in adjacency.items() if v not in hex_vertices):
        return False

    seen: Set[VertexId] = set()
    minor_edges: List[Tuple[HexNode, HexNode]] = []
    for h in sorted(hex_vertices):
        for first in sorted(adjacency[h]):
            prev, cur = h, first
            while cur not in hex_vertices:
                seen.add(cur)
                nxt = next(w for w in adjacency[cur] if w != prev)
                prev, cur = cur, nxt
            if cur == h:
                return False
            a, b = sub.hex_map[h], sub.hex_map[cur]
            if a < b:
                minor_edges.append((a, b))
    if len(seen) != sum(1 for v in adjacency if v not in hex_vertices):
        return False  # ciclo órfão
    if len(set(minor_edges)) != len(minor_edges):
        return False
    expected = {tuple(sorted(e)) for e in target.edges}
    return set(minor_edges) == expected
