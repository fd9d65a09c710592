"""
Comandos que executam o pipeline de concentração sobre um arquivo de grade.
"""

from pathlib import Path
from typing import Any, Dict, Optional

from core.errors import GridFormatError
from core.graph_state import SeededOutcomes, hex_lattice_graph
from core.lattice import OccupancyGrid, parse_grid
from core.manifest import RunManifest
from core.pipeline import concentrate, run_classical, write_stage_dumps
from core.tableau import concentration_report
from utils.debug import get_debug_manager
from utils.helpers import ensure_directory, write_json
from .base import Tool, ToolResult


def read_grid(grid_path: str) -> OccupancyGrid:
    try:
        with open(grid_path, "r", encoding="utf-8") as f:
            return parse_grid(f.read())
    except OSError as e:
        raise GridFormatError(f"não foi possível ler '{grid_path}': {e}") from e


class ConcentrateTool(Tool):
    """Pipeline completo: caminhos, pontes, correção e medições."""

    @property
    def name(self) -> str:
        return "concentrate"

    @property
    def description(self) -> str:
        return "Concentra a rede hexagonal a partir de uma grade diluída"

    @property
    def parameters(self) -> Dict[str, Any]:
        return {
            "type": "object",
            "properties": {
                "grid_path": {"type": "string", "description": "Arquivo de grade"},
                "seed": {"type": "integer", "description": "Semente dos resultados de medição"},
                "out_dir": {"type": "string", "description": "Diretório de saída"},
                "dump_stages": {"type": "boolean", "description": "Grava um JSON por estágio", "default": True},
            },
            "required": ["grid_path", "out_dir"]
        }

    def execute(self, grid_path: str = None, seed: int = 0, out_dir: str = None, dump_stages: bool = True,
                config: Optional[Dict[str, Any]] = None) -> ToolResult:
        grid = read_grid(grid_path)
        out = ensure_directory(out_dir)
        classical, quantum = concentrate(grid, SeededOutcomes(seed))

        manifest = RunManifest("concentrate", {"grid": Path(grid_path).name, **(config or {})}, int(seed))
        if dump_stages:
            for path in write_stage_dumps(out, classical, quantum):
                manifest.add_output(path, out)
        summary = {
            "J": classical.J,
            "K": classical.K,
            "junctions": len(quantum.hex_graph),
            "measurements": len(quantum.record),
            "kept_vertices": len(classical.subgraph.vertices),
            "warnings": list(classical.subgraph.warnings),
            "work": dict(sorted(classical.counter.counts.items())),
            "verdict": "hexagonal",
        }
        manifest.add_output(write_json(out / "result.json", {**summary, "hexagonal": quantum.to_json()}), out)
        manifest.summary = summary
        manifest.save(out)
        return ToolResult(success=True, content=summary, metadata={"out_dir": str(out)})


class VerifyTool(Tool):
    """Oráculo do tableau de estabilizadores sobre uma grade pequena."""

    @property
    def name(self) -> str:
        return "verify"

    @property
    def description(self) -> str:
        return "Verifica a concentração contra o simulador de estabilizadores"

    @property
    def parameters(self) -> Dict[str, Any]:
        return {
            "type": "object",
            "properties": {
                "grid_path": {"type": "string", "description": "Arquivo de grade"},
                "seed": {"type": "integer", "description": "Semente dos resultados de medição"},
                "limit": {"type": "integer", "description": "Máximo de qubits no tableau", "default": 400},
                "tamper": {"type": "boolean", "description": "Insere uma aresta espúria no alvo", "default": False},
                "out_dir": {"type": "string", "description": "Diretório para o manifesto (opcional)"},
            },
            "required": ["grid_path"]
        }

    def execute(self, grid_path: str = None, seed: int = 0, limit: int = 400, tamper: bool = False,
                out_dir: Optional[str] = None, config: Optional[Dict[str, Any]] = None) -> ToolResult:
        grid = read_grid(grid_path)
        target = None
        if tamper:
            classical = run_classical(grid)
            target = rogue_edge_target(classical.J, classical.K)
        report = concentration_report(grid, SeededOutcomes(seed), limit=int(limit), target=target)
        verdict = "PASS" if report.passed else "FAIL"
        content = {
            "verdict": verdict,
            "qubits": report.qubits,
            "measured": report.measured,
            "diff": report.diff,
        }
        if out_dir:
            out = ensure_directory(out_dir)
            manifest = RunManifest("verify", {"grid": Path(grid_path).name, "tamper": bool(tamper),
                                              **(config or {})}, int(seed))
            manifest.summary = content
            manifest.save(out)
        if report.passed:
            return ToolResult(success=True, content=content)
        if not tamper:
            get_debug_manager().dump_witness("oracle_mismatch", {"grid": grid_path, **content})
        return ToolResult(success=False, content=content, error="FAIL: grupos estabilizadores diferem", exit_code=3)


def rogue_edge_target(J: int, K: int):
    """Rede hexagonal com uma aresta espúria entre os cantos (1,1) e (J,K)."""
    target = hex_lattice_graph(J, K)
    target.add_edge((1, 1), (J, K))
    return target
