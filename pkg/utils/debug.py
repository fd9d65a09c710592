"""
Sistema de debugging: trilha de estágios por sessão (JSON lines) e dumps de
testemunhas quando uma asserção interna do pipeline falha.
"""

import json
import os
import time
import traceback
from datetime import datetime
from functools import wraps
from pathlib import Path
from typing import Any, Callable, Dict, Optional

from .logger import get_logger


def _size_of(result: Any) -> Optional[int]:
    """Tamanho aproximado do resultado de um estágio (para a trilha)."""
    for attr in ("number_of_nodes", "__len__"):
        fn = getattr(result, attr, None)
        if callable(fn):
            try:
                return int(fn())
            except TypeError:
                return None
    return None


class DebugManager:
    """Trilha de eventos e testemunhas de uma execução do concentrador.

    Com debug desligado só as testemunhas são gravadas; a trilha de estágios
    (``trace.jsonl``) exige ``CLUSTER_DEBUG``.
    """

    def __init__(self, debug_dir: str = "debug", enabled: Optional[bool] = None):
        self.debug_dir = Path(debug_dir)
        self.logger = get_logger()
        if enabled is None:
            enabled = os.getenv("CLUSTER_DEBUG", "false").lower() in ("true", "1", "yes")
        self.enabled = enabled
        self.session_id = datetime.now().strftime("%Y%m%d_%H%M%S")
        self.trace_file = self.debug_dir / f"trace_{self.session_id}.jsonl"
        self._witnesses = 0

        if self.enabled and not self._ensure_dir():
            self.enabled = False

    def _ensure_dir(self) -> bool:
        try:
            self.debug_dir.mkdir(parents=True, exist_ok=True)
            return True
        except OSError as e:
            self.logger.error(f"Diretório de debug indisponível ({self.debug_dir}): {e}")
            return False

    def record(self, kind: str, **data: Any):
        """Acrescenta uma linha à trilha da sessão."""
        if not self.enabled:
            return
        line = json.dumps({"t": round(time.time(), 3), "kind": kind, **data}, default=str, sort_keys=True)
        try:
            with open(self.trace_file, "a", encoding="utf-8") as f:
                f.write(line + "\n")
        except OSError as e:
            self.logger.error(f"Falha ao gravar trilha de debug: {e}")

    def record_failure(self, error: Exception, **context: Any):
        """Registra uma falha de comando com código de saída e testemunha."""
        self.record(
            "failure",
            error=type(error).__name__,
            message=str(error),
            exit_code=getattr(error, "exit_code", 3),
            witness=getattr(error, "witness", None),
            traceback=traceback.format_exc(),
            **context,
        )
        self.logger.error(f"{type(error).__name__}: {error}")

    def dump_witness(self, kind: str, payload: Dict[str, Any]) -> Optional[Path]:
        """Serializa a testemunha de uma asserção violada.

        Sempre grava, mesmo com debug desligado: testemunhas são raras e
        necessárias para reproduzir a falha.
        """
        if not self._ensure_dir():
            return None
        self._witnesses += 1
        path = self.debug_dir / f"witness_{kind}_{self.session_id}_{self._witnesses:03d}.json"
        try:
            with open(path, "w", encoding="utf-8") as f:
                json.dump({"kind": kind, "session_id": self.session_id, "data": payload},
                          f, indent=2, default=str, sort_keys=True)
        except OSError as e:
            self.logger.error(f"Falha ao gravar testemunha '{kind}': {e}")
            return None
        self.record("witness", witness_kind=kind, path=str(path))
        self.logger.error(f"Testemunha '{kind}' gravada em {path}")
        return path


# Instância global
_debug_manager: Optional[DebugManager] = None


def get_debug_manager() -> DebugManager:
    global _debug_manager
    if _debug_manager is None:
        _debug_manager = DebugManager()
    return _debug_manager


def configure_debug_manager(debug_dir: str, enabled: bool) -> DebugManager:
    """Reconfigura o debug manager global (usado pela CLI e pelos testes)."""
    global _debug_manager
    _debug_manager = DebugManager(debug_dir, enabled)
    return _debug_manager


def trace_stage(stage: str):
    """Registra duração e tamanho do resultado de um estágio do pipeline."""
    def decorator(func: Callable) -> Callable:
        @wraps(func)
        def wrapper(*args, **kwargs):
            manager = get_debug_manager()
            if not manager.enabled:
                return func(*args, **kwargs)
            start = time.perf_counter()
            try:
                result = func(*args, **kwargs)
            except Exception as e:
                manager.record("stage_error", stage=stage, error=type(e).__name__,
                               seconds=round(time.perf_counter() - start, 6))
                raise
            manager.record("stage", stage=stage, seconds=round(time.perf_counter() - start, 6),
                           size=_size_of(result))
            return result
        return wrapper
    return decorator
