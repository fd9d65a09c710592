"""
Manifesto de execução gravado ao lado de cada saída.

Sem timestamps nem caminhos absolutos: o mesmo comando com a mesma
configuração produz um manifesto byte a byte idêntico.
"""

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional

from utils.helpers import write_json

ARTIFACT_VERSION = "1.0.0"
MANIFEST_NAME = "manifest.json"


@dataclass
class RunManifest:
    """Comando, configuração ecoada, semente, arquivos gerados e veredito."""
    command: str
    config: Dict[str, Any]
    master_seed: int
    outputs: List[str] = field(default_factory=list)
    summary: Dict[str, Any] = field(default_factory=dict)
    artifact_version: str = ARTIFACT_VERSION

    def add_output(self, path: Path, base: Optional[Path] = None):
        """Registra arquivo gerado, relativo ao diretório de saída."""
        path = Path(path)
        name = path.relative_to(base).as_posix() if base is not None else path.name
        if name not in self.outputs:
            self.outputs.append(name)

    def fingerprint(self) -> str:
        """Hash do que determina as saídas (comando, configuração e semente)."""
        payload = json.dumps({"command": self.command, "config": self.config, "seed": self.master_seed},
                             sort_keys=True, default=str)
        return hashlib.sha256(payload.encode("utf-8")).hexdigest()[:16]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "command": self.command,
            "config": self.config,
            "master_seed": self.master_seed,
            "artifact_version": self.artifact_version,
            "fingerprint": self.fingerprint(),
            "outputs": sorted(self.outputs),
            "summary": self.summary,
        }

    def save(self, out_dir: Path) -> Path:
        return write_json(Path(out_dir) / MANIFEST_NAME, self.to_dict())

    @classmethod
    def load(cls, path: Path) -> "RunManifest":
        with open(path, "r", encoding="utf-8") as f:
            data = json.load(f)
        return cls(
            command=data["command"],
            config=data.get("config", {}),
            master_seed=int(data["master_seed"]),
            outputs=list(data.get("outputs", [])),
            summary=data.get("summary", {}),
            artifact_version=data.get("artifact_version", ARTIFACT_VERSION),
        )
