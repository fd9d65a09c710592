"""
Comando de geração de amostras diluídas.
"""

from pathlib import Path
from typing import Any, Dict, Optional

from core.errors import ConfigurationError
from core.lattice import LatticeConfig, format_grid, sample_grid
from core.manifest import RunManifest
from .base import Tool, ToolResult


class GenerateTool(Tool):
    """Sorteia uma grade L×L com ocupação p e grava no formato texto."""

    @property
    def name(self) -> str:
        return "generate"

    @property
    def description(self) -> str:
        return "Gera uma amostra de percolação de sítios e grava o arquivo de grade"

    @property
    def parameters(self) -> Dict[str, Any]:
        return {
            "type": "object",
            "properties": {
                "L": {"type": "integer", "description": "Tamanho linear da rede"},
                "p": {"type": "number", "description": "Probabilidade de ocupação"},
                "seed": {"type": "integer", "description": "Semente mestra"},
                "out": {"type": "string", "description": "Arquivo de saída"},
            },
            "required": ["L", "p", "seed", "out"]
        }

    def execute(self, L: int = None, p: float = None, seed: int = 0, out: Optional[str] = None,
                config: Optional[Dict[str, Any]] = None) -> ToolResult:
        if L is None or p is None or not out:
            raise ConfigurationError("parâmetros 'L', 'p' e 'out' são obrigatórios")
        lattice = LatticeConfig(int(L), float(p), int(seed))
        grid = sample_grid(lattice)

        path = Path(out)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8") as f:
            f.write(format_grid(grid))

        manifest = RunManifest("generate", {"L": lattice.L, "p": lattice.p, **(config or {})}, lattice.seed)
        manifest.add_output(path)
        manifest.summary = {"occupied": grid.occupied_count, "fraction": grid.fraction}
        manifest.save(path.parent)

        return ToolResult(
            success=True,
            content={"path": str(path), "occupied": grid.occupied_count, "fraction": grid.fraction},
            metadata={"L": lattice.L, "p": lattice.p, "seed": lattice.seed},
        )
