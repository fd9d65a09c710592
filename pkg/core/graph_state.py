"""
Cálculo de medições de Pauli em graph states com referencial de Cliffords
locais.

O estado real é ``(⊗_v C_v) |G⟩``. As regras usadas:

* Z em ``a`` com resultado m: remove ``a``; para m = -1 compõe Z nos
  vizinhos.
* Y em ``a`` de grau 2 com resultado m: alterna a aresta entre os dois
  vizinhos, remove ``a`` e compõe S (m = +1) ou S† (m = -1) nos vizinhos.

A atualização do referencial é ``C'_w = C_w · U_w``. Como só aparecem Z, S
e S†, o referencial permanece diagonal; o observável físico que realiza
uma medição Y no nível do grafo é ``C Y C†``.
"""

import hashlib
from dataclasses import dataclass, field
from typing import Callable, Dict, Hashable, Iterable, List, Optional, Tuple

import networkx as nx

from core.clifford import IDENTITY, PAULI_Z, PHASE, PHASE_DAG, Clifford
from core.errors import MeasurementError
from utils.helpers import derive_seed

Qubit = Hashable


def hex_lattice_graph(J: int, K: int) -> nx.Graph:
    """Rede hexagonal brick-wall com J linhas de K junções.

    Nós ``(j, k)``; arestas horizontais ``(j,k)-(j,k+1)`` sempre e verticais
    ``(j,k)-(j+1,k)`` quando j+k é par. Nós internos têm grau 3.

    Convenção de borda: nada é aparado. Cantos sem aresta vertical ficam com
    grau 1, ``(2, 2)`` é um caminho de 4 nós e ``(1, 1)`` um nó isolado; o
    minor extraído segue a mesma convenção.
    """
    if J < 1 or K < 1:
        raise ValueError("J e K devem ser positivos")
    g = nx.Graph()
    g.add_nodes_from((j, k) for j in range(1, J + 1) for k in range(1, K + 1))
    for j in range(1, J + 1):
        for k in range(1, K):
            g.add_edge((j, k), (j, k + 1))
    for j in range(1, J):
        for k in range(1, K + 1):
            if (j + k) % 2 == 0:
                g.add_edge((j, k), (j + 1, k))
    return g


@dataclass(frozen=True)
class Measurement:
    """Medição no nível do grafo e o observável físico correspondente."""
    qubit: Qubit
    basis: str
    outcome: int
    physical_sign: int = 1
    physical_basis: str = ""

    def to_json(self) -> Dict:
        qubit = list(self.qubit) if isinstance(self.qubit, tuple) else self.qubit
        return {
            "qubit": qubit,
            "basis": self.basis,
            "outcome": self.outcome,
            "physical": ("-" if self.physical_sign < 0 else "+") + (self.physical_basis or self.basis),
        }


@dataclass
class MeasurementRecord:
    entries: List[Measurement] = field(default_factory=list)

    def append(self, entry: Measurement) -> None:
        if any(e.qubit == entry.qubit for e in self.entries):
            raise MeasurementError(f"qubit {entry.qubit!r} medido duas vezes")
        self.entries.append(entry)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def to_json(self) -> List[Dict]:
        return [e.to_json() for e in self.entries]


class GraphState:
    """Grafo simples mais referencial de Cliffords locais por qubit vivo."""

    def __init__(self, graph: nx.Graph, frame: Optional[Dict[Qubit, Clifford]] = None):
        self.graph = graph
        self.frame: Dict[Qubit, Clifford] = frame if frame is not None else {v: IDENTITY for v in graph.nodes}

    def copy(self) -> "GraphState":
        return GraphState(self.graph.copy(), dict(self.frame))

    @property
    def qubits(self) -> List[Qubit]:
        return sorted(self.graph.nodes)

    def _require(self, v: Qubit):
        if v not in self.graph:
            raise MeasurementError(f"qubit {v!r} não está vivo")

    def _compose(self, v: Qubit, u: Clifford):
        self.frame[v] = self.frame[v] * u

    def measure_z_inplace(self, v: Qubit, outcome: int) -> Measurement:
        self._require(v)
        _check_outcome(outcome)
        sign, pauli = self.frame[v].conjugate("Z")
        neighbors = list(self.graph.neighbors(v))
        self.graph.remove_node(v)
        del self.frame[v]
        if outcome == -1:
            for w in neighbors:
                self._compose(w, PAULI_Z)
        return Measurement(v, "Z", outcome, sign, pauli)

    def measure_y_deg2_inplace(self, v: Qubit, outcome: int) -> Measurement:
        self._require(v)
        _check_outcome(outcome)
        neighbors = sorted(self.graph.neighbors(v))
        if len(neighbors) != 2:
            raise MeasurementError(f"Y exige grau 2; qubit {v!r} tem grau {len(neighbors)}")
        sign, pauli = self.frame[v].conjugate("Y")
        a, b = neighbors
        if self.graph.has_edge(a, b):
            self.graph.remove_edge(a, b)
        else:
            self.graph.add_edge(a, b)
        self.graph.remove_node(v)
        del self.frame[v]
        correction = PHASE if outcome == 1 else PHASE_DAG
        for w in neighbors:
            self._compose(w, correction)
        return Measurement(v, "Y", outcome, sign, pauli)


def _check_outcome(outcome: int):
    if outcome not in (1, -1):
        raise MeasurementError(f"resultado deve ser +1 ou -1, recebido {outcome!r}")


def graph_state_from(graph: nx.Graph) -> GraphState:
    """Graph state com referencial identidade em todos os qubits."""
    if nx.number_of_selfloops(graph):
        raise MeasurementError("grafo com laços não define graph state")
    return GraphState(nx.Graph(graph))


def measure_z(state: GraphState, v: Qubit, outcome: int) -> GraphState:
    new = state.copy()
    new.measure_z_inplace(v, outcome)
    return new


def measure_y_deg2(state: GraphState, v: Qubit, outcome: int) -> GraphState:
    new = state.copy()
    new.measure_y_deg2_inplace(v, outcome)
    return new


# --- fontes de resultados ---------------------------------------------------------

def _repr_key(qubit: Qubit) -> int:
    # hash() de str muda entre processos
    return int.from_bytes(hashlib.sha256(repr(qubit).encode("utf-8")).digest()[:8], "little")


class SeededOutcomes:
    """Resultados determinísticos derivados de (seed, qubit)."""

    def __init__(self, seed: int):
        self.seed = int(seed)

    def __call__(self, qubit: Qubit, basis: str) -> int:
        parts = tuple(qubit) if isinstance(qubit, tuple) else (_repr_key(qubit),)
        return 1 if derive_seed(self.seed, *parts) & 1 == 0 else -1


class FixedOutcomes:
    """Resultados dados por dicionário; qubits ausentes usam ``default``."""

    def __init__(self, outcomes: Dict[Qubit, int], default: int = 1):
        self.outcomes = dict(outcomes)
        self.default = default

    def __call__(self, qubit: Qubit, basis: str) -> int:
        return self.outcomes.get(qubit, self.default)


OutcomeSource = Callable[[Qubit, str], int]


def contraction_schedule(graph: nx.Graph, keep: Iterable[Qubit], junctions: Iterable[Qubit]) -> List[Tuple[Qubit, str]]:
    """Ordem das medições: Z fora de ``keep``, Z em pontas soltas, Y nos fios.

    Não depende dos resultados: as regras de Z e Y alteram apenas o
    referencial de forma dependente do resultado, nunca o grafo.
    """
    work = nx.Graph(graph)
    keep = set(keep)
    protected = set(junctions)
    schedule: List[Tuple[Qubit, str]] = []

    for v in sorted(v for v in work.nodes if v not in keep):
        schedule.append((v, "Z"))
    work.remove_nodes_from([v for v in list(work.nodes) if v not in keep])

    stack = sorted((v for v in work.nodes if v not in protected and work.degree(v) <= 1), reverse=True)
    while stack:
        v = stack.pop()
        if v not in work:
            continue
        neighbors = list(work.neighbors(v))
        schedule.append((v, "Z"))
        work.remove_node(v)
        for w in neighbors:
            if w not in protected and work.degree(w) <= 1:
                stack.append(w)

    for v in sorted(v for v in work.nodes if v not in protected):
        if work.degree(v) != 2:
            raise MeasurementError(f"vértice {v!r} com grau {work.degree(v)} na etapa de contração")
        a, b = work.neighbors(v)
        if work.has_edge(a, b):
            work.remove_edge(a, b)
        else:
            work.add_edge(a, b)
        work.remove_node(v)
        schedule.append((v, "Y"))
    return schedule


def contract_to_hexagonal(
    state: GraphState,
    sub,
    outcomes: OutcomeSource,
) -> Tuple[GraphState, MeasurementRecord]:
    """Mede Z no complemento de ``sub``, Z nas pontas e Y nos vértices de grau 2.

    ``sub`` é um ``IdentifiedSubgraph``; os vértices do ``hex_map`` nunca
    são medidos. O grafo final, renomeado pelo ``hex_map``, é a rede
    hexagonal e o referencial acumula os subprodutos.
    """
    work = state.copy()
    record = MeasurementRecord()
    for v, basis in contraction_schedule(work.graph, sub.vertices, sub.hex_map):
        m = outcomes(v, basis)
        if basis == "Z":
            record.append(work.measure_z_inplace(v, m))
        else:
            record.append(work.measure_y_deg2_inplace(v, m))
    return work, record


def relabel_to_hex(state: GraphState, hex_map: Dict[Qubit, Tuple[int, int]]) -> nx.Graph:
    return nx.relabel_nodes(state.graph, hex_map, copy=True)
