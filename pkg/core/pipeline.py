"""
Execução encadeada dos estágios clássicos (caminhos, pontes, correção,
extração) e quânticos (medições Z e Y) sobre uma amostra.

Os dumps por estágio saem na ordem de execução: caminhos, decomposição
completa, decomposição alternada, rede corrigida, subgrafo identificado e
rede hexagonal final.
"""

from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Tuple

import networkx as nx

from core.bridges import (
    Abutment,
    BridgeDecomposition,
    CorrectionResult,
    IdentifiedSubgraph,
    alternating_decomposition,
    bridge_decomposition,
    compute_abutments,
    correct_local_errors,
    verify_topological_minor,
    verify_total_order,
)
from core.crossings import ErrorReport, PathSet, WorkCounter, audit_subgraph, find_h_paths, find_v_paths, validate_paths
from core.errors import InvariantViolation, PipelineNotApplicable
from core.graph_state import (
    GraphState,
    MeasurementRecord,
    OutcomeSource,
    contract_to_hexagonal,
    graph_state_from,
    hex_lattice_graph,
    relabel_to_hex,
)
from core.lattice import OccupancyGrid, SiteGraph, format_grid, grid_to_graph
from utils.debug import get_debug_manager, trace_stage
from utils.helpers import ensure_directory, write_json
from utils.logger import get_logger


@dataclass
class ClassicalResult:
    grid: OccupancyGrid
    graph: SiteGraph
    hset: PathSet
    vset: PathSet
    path_errors: ErrorReport
    complete: BridgeDecomposition
    complete_order_witnesses: List[Dict]
    alternating: BridgeDecomposition
    abutments: List[Abutment]
    correction: CorrectionResult
    audit: ErrorReport
    counter: WorkCounter = field(default_factory=WorkCounter)

    @property
    def subgraph(self) -> IdentifiedSubgraph:
        return self.correction.subgraph

    @property
    def J(self) -> int:
        return len(self.hset)

    @property
    def K(self) -> int:
        return len(self.vset)

    def stage_dumps(self) -> Dict[str, Dict]:
        return {
            "a_paths": {
                "hset": self.hset.to_json(),
                "vset": self.vset.to_json(),
                "errors": self.path_errors.to_json(),
            },
            "b_bridges": {
                "decomposition": self.complete.to_json(),
                "order_diagnostic": self.complete_order_witnesses,
            },
            "c_alternating": {
                "decomposition": self.alternating.to_json(),
                "abutments": [a.to_json() for a in self.abutments],
            },
            "d_corrected": self.correction.to_json(),
            "e_identified": {
                "subgraph": self.subgraph.to_json(),
                "audit": self.audit.to_json(),
            },
        }


@dataclass
class QuantumResult:
    state: GraphState
    record: MeasurementRecord
    hex_graph: nx.Graph

    def to_json(self) -> Dict:
        return {
            "nodes": [list(n) for n in sorted(self.hex_graph.nodes)],
            "edges": sorted([sorted([list(a), list(b)]) for a, b in self.hex_graph.edges]),
            "measurements": self.record.to_json(),
            "frame": {f"{v.row},{v.col}": element.name for v, element in sorted(self.state.frame.items())},
        }


def find_crossings(graph: SiteGraph, counter: WorkCounter) -> Tuple[PathSet, PathSet]:
    hset = find_h_paths(graph, counter)
    vset = find_v_paths(graph, counter)
    get_logger().log_stage("caminhos", H=len(hset), V=len(vset), V_encontrados=vset.found_count)
    return hset, vset


@trace_stage("clássico")
def run_classical(grid: OccupancyGrid, counter: Optional[WorkCounter] = None) -> ClassicalResult:
    """Estágios clássicos; falha com ``PipelineNotApplicable`` sem J, K ≥ 2."""
    counter = counter if counter is not None else WorkCounter()
    graph = grid_to_graph(grid)
    hset, vset = find_crossings(graph, counter)
    return run_from_paths(grid, graph, hset, vset, counter)


def run_from_paths(grid: OccupancyGrid, graph: SiteGraph, hset: PathSet, vset: PathSet,
                   counter: WorkCounter) -> ClassicalResult:
    """Pontes, correção e extração a partir dos caminhos já encontrados."""
    logger = get_logger()
    if len(hset) < 2 or len(vset) < 2:
        raise PipelineNotApplicable(
            f"cruzamentos insuficientes (H={len(hset)}, V={len(vset)}); a concentração exige ao menos 2 de cada",
            witness={"L": grid.L, "H": len(hset), "V": len(vset)},
        )
    path_errors = validate_paths(hset, vset, graph, counter)

    complete = bridge_decomposition(hset, vset, graph, counter)
    _, complete_witnesses = verify_total_order(compute_abutments(complete, hset, graph))
    if complete_witnesses:
        logger.debug(f"decomposição completa: {len(complete_witnesses)} sobreposições de fechos")

    alternating = alternating_decomposition(complete)
    abutments = compute_abutments(alternating, hset, graph)
    correction = correct_local_errors(hset, alternating, abutments, graph, counter)
    sub = correction.subgraph
    logger.log_stage("correção", emendas=len(correction.spliced), mantidos=len(sub.vertices))

    if not verify_topological_minor(sub, len(hset), len(vset)):
        payload = {"grid": format_grid(grid), "subgraph": sub.to_json()}
        get_debug_manager().dump_witness("topological_minor", payload)
        raise InvariantViolation("subgrafo identificado não contrai para a rede hexagonal", witness=payload)

    audit = audit_subgraph(sub.adjacency(), exempt=sub.hex_map)
    return ClassicalResult(grid, graph, hset, vset, path_errors, complete, complete_witnesses,
                           alternating, abutments, correction, audit, counter)


@trace_stage("quântico")
def run_quantum(classical: ClassicalResult, outcomes: OutcomeSource) -> QuantumResult:
    """Medições Z e Y sobre o graph state da amostra inteira."""
    state = graph_state_from(classical.graph.to_networkx())
    final, record = contract_to_hexagonal(state, classical.subgraph, outcomes)
    hex_graph = relabel_to_hex(final, classical.subgraph.hex_map)
    expected = hex_lattice_graph(classical.J, classical.K)
    if not _same_graph(hex_graph, expected):
        payload = {"edges": sorted(map(sorted, hex_graph.edges)), "J": classical.J, "K": classical.K}
        get_debug_manager().dump_witness("contraction", payload)
        raise InvariantViolation("contração não produziu a rede hexagonal", witness=payload)
    get_logger().log_stage("medições", total=len(record), vivos=final.graph.number_of_nodes())
    return QuantumResult(final, record, hex_graph)


def _same_graph(a: nx.Graph, b: nx.Graph) -> bool:
    return set(a.nodes) == set(b.nodes) and {frozenset(e) for e in a.edges} == {frozenset(e) for e in b.edges}


def write_stage_dumps(out_dir: Path, classical: ClassicalResult, quantum: Optional[QuantumResult] = None) -> List[Path]:
    """Um JSON por estágio em ``out_dir``; devolve os caminhos gravados."""
    out_dir = ensure_directory(str(out_dir))
    written = []
    for name, data in classical.stage_dumps().items():
        written.append(write_json(out_dir / f"{name}.json", data))
    if quantum is not None:
        written.append(write_json(out_dir / "f_hexagonal.json", quantum.to_json()))
    return written


@trace_stage("concentrate")
def concentrate(grid: OccupancyGrid, outcomes: OutcomeSource) -> Tuple[ClassicalResult, QuantumResult]:
    classical = run_classical(grid)
    return classical, run_quantum(classical, outcomes)
