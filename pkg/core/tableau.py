"""
Simulador de estabilizadores (tableau de destabilizadores e
estabilizadores) usado como oráculo independente das regras de medição.

Linhas ``0..n-1`` são destabilizadores, ``n..2n-1`` estabilizadores. Uma
linha com x=z=1 num qubit representa Y naquele qubit.
"""

from dataclasses import dataclass, field
from typing import Callable, Dict, Hashable, Iterable, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np

from core.clifford import Clifford
from core.errors import SizeLimitError

PauliRow = Tuple[np.ndarray, np.ndarray, int]


def _g(x1: np.ndarray, z1: np.ndarray, x2: np.ndarray, z2: np.ndarray) -> int:
    """Expoente de i ao multiplicar as Paulis (x1,z1)·(x2,z2), somado nos qubits."""
    x1, z1, x2, z2 = (a.astype(np.int64) for a in (x1, z1, x2, z2))
    term = np.where(
        (x1 == 1) & (z1 == 1), z2 - x2,
        np.where((x1 == 1) & (z1 == 0), z2 * (2 * x2 - 1),
                 np.where((x1 == 0) & (z1 == 1), x2 * (1 - 2 * z2), 0)))
    return int(term.sum())


def multiply_rows(a: PauliRow, b: PauliRow) -> PauliRow:
    """Produto de duas Paulis hermitianas que comutam (ordem a·b)."""
    xa, za, ra = a
    xb, zb, rb = b
    total = 2 * ra + 2 * rb + _g(xb, zb, xa, za)
    return (xa ^ xb, za ^ zb, 0 if total % 4 == 0 else 1)


class StabilizerTableau:
    """Tableau de Aaronson-Gottesman com rótulos opcionais por qubit."""

    def __init__(self, n: int, labels: Optional[Sequence[Hashable]] = None):
        self.n = n
        self.x = np.zeros((2 * n, n), dtype=np.uint8)
        self.z = np.zeros((2 * n, n), dtype=np.uint8)
        self.r = np.zeros(2 * n, dtype=np.uint8)
        for i in range(n):
            self.x[i, i] = 1          # destabilizador X_i
            self.z[n + i, i] = 1      # estabilizador Z_i  (estado |0...0>)
        self.labels: List[Hashable] = list(labels) if labels is not None else list(range(n))
        self.index: Dict[Hashable, int] = {q: i for i, q in enumerate(self.labels)}

    def copy(self) -> "StabilizerTableau":
        other = StabilizerTableau.__new__(StabilizerTableau)
        other.n = self.n
        other.x, other.z, other.r = self.x.copy(), self.z.copy(), self.r.copy()
        other.labels = list(self.labels)
        other.index = dict(self.index)
        return other

    def _q(self, qubit: Hashable) -> int:
        return self.index[qubit]

    # --- portas -------------------------------------------------------------------

    def h(self, qubit: Hashable):
        a = self._q(qubit)
        self.r ^= self.x[:, a] & self.z[:, a]
        self.x[:, a], self.z[:, a] = self.z[:, a].copy(), self.x[:, a].copy()

    def s(self, qubit: Hashable):
        a = self._q(qubit)
        self.r ^= self.x[:, a] & self.z[:, a]
        self.z[:, a] ^= self.x[:, a]

    def sdg(self, qubit: Hashable):
        for _ in range(3):
            self.s(qubit)

    def pauli_x(self, qubit: Hashable):
        self.r ^= self.z[:, self._q(qubit)]

    def pauli_z(self, qubit: Hashable):
        self.r ^= self.x[:, self._q(qubit)]

    def cnot(self, control: Hashable, target: Hashable):
        a, b = self._q(control), self._q(target)
        self.r ^= self.x[:, a] & self.z[:, b] & (self.x[:, b] ^ self.z[:, a] ^ 1)
        self.x[:, b] ^= self.x[:, a]
        self.z[:, a] ^= self.z[:, b]

    def cz(self, a: Hashable, b: Hashable):
        self.h(b)
        self.cnot(a, b)
        self.h(b)

    def apply_clifford(self, qubit: Hashable, element: Clifford):
        for gate in element.word:
            if gate == "H":
                self.h(qubit)
            else:
                self.s(qubit)

    # --- medição -----------------------------------------------------------------

    def _rowsum(self, h: int, i: int):
        self.x[h], self.z[h], self.r[h] = multiply_rows(
            (self.x[h], self.z[h], int(self.r[h])), (self.x[i], self.z[i], int(self.r[i])))

    def _measure_z(self, a: int, forced: Optional[int], rng: Optional[np.random.Generator]) -> Tuple[int, bool]:
        n = self.n
        hits = np.nonzero(self.x[n:, a])[0]
        if hits.size:
            p = n + int(hits[0])
            for i in np.nonzero(self.x[:, a])[0]:
                if i != p:
                    self._rowsum(int(i), p)
            self.x[p - n], self.z[p - n], self.r[p - n] = self.x[p], self.z[p], self.r[p]
            self.x[p] = 0
            self.z[p] = 0
            self.z[p, a] = 1
            if forced is None:
                forced = 1 if (rng or np.random.default_rng()).random() < 0.5 else -1
            self.r[p] = 0 if forced == 1 else 1
            return forced, True
        acc: PauliRow = (np.zeros(n, dtype=np.uint8), np.zeros(n, dtype=np.uint8), 0)
        for i in np.nonzero(self.x[:n, a])[0]:
            k = n + int(i)
            acc = multiply_rows(acc, (self.x[k], self.z[k], int(self.r[k])))
        return (1 if acc[2] == 0 else -1), False

    def measure(self, basis: str, qubit: Hashable, forced: Optional[int] = None,
                rng: Optional[np.random.Generator] = None) -> Tuple[int, bool]:
        """Mede X, Y ou Z; devolve (resultado ±1, se era aleatório).

        Quando o resultado é determinado pelo estado, ``forced`` é ignorado.
        """
        a = self._q(qubit)
        if basis == "Z":
            return self._measure_z(a, forced, rng)
        if basis == "X":
            self.h(qubit)
            out = self._measure_z(a, forced, rng)
            self.h(qubit)
            return out
        if basis == "Y":
            self.sdg(qubit)
            self.h(qubit)
            out = self._measure_z(a, forced, rng)
            self.h(qubit)
            self.s(qubit)
            return out
        raise ValueError(f"base desconhecida: {basis!r}")

    # --- grupo estabilizador ---------------------------------------------------------

    def stabilizers(self) -> List[PauliRow]:
        n = self.n
        return [(self.x[n + i].copy(), self.z[n + i].copy(), int(self.r[n + i])) for i in range(n)]

    def contains(self, row: PauliRow) -> bool:
        """True se a Pauli com sinal pertence ao grupo estabilizador."""
        n = self.n
        x, z, r = row
        sx, sz = self.x[n:].astype(np.int64), self.z[n:].astype(np.int64)
        if np.any((sx @ z.astype(np.int64) + sz @ x.astype(np.int64)) % 2):
            return False
        dx, dz = self.x[:n].astype(np.int64), self.z[:n].astype(np.int64)
        picks = np.nonzero((dx @ z.astype(np.int64) + dz @ x.astype(np.int64)) % 2)[0]
        acc: PauliRow = (np.zeros(n, dtype=np.uint8), np.zeros(n, dtype=np.uint8), 0)
        for i in picks:
            k = n + int(i)
            acc = multiply_rows(acc, (self.x[k], self.z[k], int(self.r[k])))
        return bool(np.array_equal(acc[0], x) and np.array_equal(acc[1], z) and acc[2] == r)

    def dump(self) -> str:
        """Um gerador por linha em notação ±{I,X,Y,Z}^n."""
        return "\n".join(format_pauli(row) for row in self.stabilizers())


def format_pauli(row: PauliRow) -> str:
    x, z, r = row
    chars = "".join("Y" if a and b else "X" if a else "Z" if b else "I" for a, b in zip(x, z))
    return ("-" if r else "+") + chars


def tableau_from_graph(graph: nx.Graph, labels: Optional[Sequence[Hashable]] = None) -> StabilizerTableau:
    """Tableau do graph state: K_v = X_v ∏_{w∈N(v)} Z_w, destabilizadores Z_v."""
    labels = list(labels) if labels is not None else sorted(graph.nodes)
    t = StabilizerTableau(len(labels), labels)
    n = t.n
    t.x[:] = 0
    t.z[:] = 0
    t.r[:] = 0
    for i, v in enumerate(labels):
        t.z[i, i] = 1
        t.x[n + i, i] = 1
        if v in graph:
            for w in graph.neighbors(v):
                t.z[n + i, t.index[w]] = 1
    return t


def stabilizer_groups_equal(t1: StabilizerTableau, t2: StabilizerTableau) -> bool:
    """Mesmo grupo estabilizador com sinais (pertinência nos dois sentidos)."""
    if t1.n != t2.n:
        raise ValueError("tableaux com números de qubits diferentes")
    return all(t1.contains(row) for row in t2.stabilizers()) and all(t2.contains(row) for row in t1.stabilizers())


def stabilizer_diff(t1: StabilizerTableau, t2: StabilizerTableau) -> List[str]:
    """Geradores de t2 ausentes do grupo de t1, para diagnóstico."""
    return [format_pauli(row) for row in t2.stabilizers() if not t1.contains(row)]


def prepare_eigenstate(t: StabilizerTableau, qubit: Hashable, basis: str, eigenvalue: int):
    """Leva um qubit isolado em |+⟩ ao autoestado de ``eigenvalue · basis``."""
    if basis == "Z":
        t.h(qubit)
        if eigenvalue == -1:
            t.pauli_x(qubit)
    elif basis == "Y":
        t.s(qubit)
        if eigenvalue == -1:
            t.pauli_z(qubit)
    elif basis == "X":
        if eigenvalue == -1:
            t.pauli_z(qubit)
    else:
        raise ValueError(f"base desconhecida: {basis!r}")


@dataclass
class OracleReport:
    passed: bool
    qubits: int
    measured: int
    diff: List[str] = field(default_factory=list)
    topology_ok: bool = True


def replay_and_compare(
    graph: nx.Graph,
    record: Iterable,
    final_state,
    target: nx.Graph,
    hex_map: Optional[Dict[Hashable, Hashable]] = None,
) -> OracleReport:
    """Refaz as medições físicas no tableau e compara com o estado previsto.

    ``target`` é o grafo esperado sobre os qubits vivos (nos rótulos do
    ``hex_map`` quando fornecido). Cada qubit medido deve terminar no
    autoestado do observável físico medido.
    """
    record = list(record)
    labels = sorted(graph.nodes)
    t = tableau_from_graph(graph, labels)
    for entry in record:
        forced = entry.physical_sign * entry.outcome
        t.measure(entry.physical_basis, entry.qubit, forced=forced)
    for v, element in final_state.frame.items():
        t.apply_clifford(v, element.inverse)

    live_map = hex_map or {v: v for v in final_state.graph.nodes}
    inverse_map = {node: v for v, node in live_map.items()}
    expected_graph = nx.Graph()
    expected_graph.add_nodes_from(labels)
    topology_ok = set(inverse_map) == set(target.nodes)
    for a, b in target.edges:
        if a in inverse_map and b in inverse_map:
            expected_graph.add_edge(inverse_map[a], inverse_map[b])
    expected = tableau_from_graph(expected_graph, labels)
    for entry in record:
        prepare_eigenstate(expected, entry.qubit, entry.physical_basis, entry.physical_sign * entry.outcome)

    passed = topology_ok and stabilizer_groups_equal(t, expected)
    diff = [] if passed else stabilizer_diff(t, expected)
    return OracleReport(passed, len(labels), len(record), diff, topology_ok)


def verify_concentration(grid, outcomes: Callable, limit: int = 400, target: Optional[nx.Graph] = None) -> bool:
    """Oráculo ponta a ponta: pipeline clássico, medições e comparação no tableau."""
    return concentration_report(grid, outcomes, limit, target).passed


def concentration_report(grid, outcomes: Callable, limit: int = 400, target: Optional[nx.Graph] = None) -> OracleReport:
    from core.graph_state import contract_to_hexagonal, graph_state_from, hex_lattice_graph
    from core.lattice import grid_to_graph
    from core.pipeline import run_classical

    if grid.occupied_count > limit:
        raise SizeLimitError(f"{grid.occupied_count} qubits excedem o limite do tableau ({limit})")
    classical = run_classical(grid)
    sub = classical.subgraph
    site_graph = grid_to_graph(grid).to_networkx()
    final_state, record = contract_to_hexagonal(graph_state_from(site_graph), sub, outcomes)
    target = target if target is not None else hex_lattice_graph(sub.J, sub.K)
    return replay_and_compare(site_graph, record, final_state, target, sub.hex_map)


def tableau_measure(
    tableau: StabilizerTableau,
    basis: str,
    qubit: Hashable,
    forced: Optional[int] = None,
    rng: Optional[np.random.Generator] = None,
) -> Tuple[int, StabilizerTableau]:
    """Mede numa cópia do tableau e devolve (resultado, tableau novo)."""
    new = tableau.copy()
    outcome, _ = new.measure(basis, qubit, forced=forced, rng=rng)
    return outcome, new
