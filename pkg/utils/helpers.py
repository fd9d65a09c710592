"""
Funções auxiliares: sementes derivadas, faixas de parâmetros, execução
paralela de trials e escrita de CSV/JSON reprodutíveis.
"""

import csv
import json
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Any, Callable, Dict, Iterable, List, Sequence, TypeVar

import numpy as np

from core.errors import ConfigurationError

T = TypeVar("T")
R = TypeVar("R")

MASK64 = (1 << 64) - 1


def splitmix64(x: int) -> int:
    """Um passo do finalizador splitmix64 (inteiros Python)."""
    x = (x + 0x9E3779B97F4A7C15) & MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & MASK64
    return x ^ (x >> 31)


def derive_seed(*parts: int) -> int:
    """Deriva uma semente de 64 bits a partir de uma sequência de inteiros.

    A ordem das partes importa; a mesma sequência sempre gera a mesma semente,
    independente de processo ou ordem de execução.
    """
    h = 0x243F6A8885A308D3
    for part in parts:
        h = splitmix64(h ^ (int(part) & MASK64))
    return h


def splitmix64_array(x: np.ndarray) -> np.ndarray:
    """Versão vetorizada de ``splitmix64`` sobre ``uint64``."""
    x = x.astype(np.uint64, copy=True)
    with np.errstate(over="ignore"):
        x += np.uint64(0x9E3779B97F4A7C15)
        x = (x ^ (x >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
        x = (x ^ (x >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
        x ^= x >> np.uint64(31)
    return x


def parse_range(spec: str) -> List[float]:
    """Interpreta ``start:step:end`` (inclusivo), ``a,b,c`` ou um valor único."""
    text = spec.strip()
    if not text:
        raise ConfigurationError("faixa vazia")
    try:
        if ":" in text:
            parts = [float(x) for x in text.split(":")]
            if len(parts) != 3:
                raise ConfigurationError(f"faixa '{spec}' deve ter a forma start:step:end")
            start, step, end = parts
            if step <= 0 or end < start:
                raise ConfigurationError(f"faixa '{spec}' inválida")
            count = int(np.floor((end - start) / step + 1e-9)) + 1
            return [round(start + i * step, 10) for i in range(count)]
        return [float(x) for x in text.split(",")]
    except ValueError as e:
        raise ConfigurationError(f"faixa '{spec}' não numérica: {e}") from e


def parse_int_list(spec: str) -> List[int]:
    """Lista de inteiros; aceita a mesma sintaxe de ``parse_range``."""
    values = parse_range(spec)
    if any(v != int(v) for v in values):
        raise ConfigurationError(f"'{spec}' deve conter apenas inteiros")
    return [int(v) for v in values]


def ensure_directory(path: str) -> Path:
    """Cria diretório (e pais) se necessário."""
    directory = Path(path)
    directory.mkdir(parents=True, exist_ok=True)
    return directory


def map_trials(fn: Callable[[T], R], items: Sequence[T], jobs: int = 1) -> List[R]:
    """Aplica ``fn`` a cada item, em paralelo quando ``jobs > 1``.

    O resultado segue a ordem de ``items``; ``fn`` precisa ser picklável.
    """
    if jobs <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items, chunksize=max(1, len(items) // (4 * jobs))))


def write_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence[Any]], seed: int) -> Path:
    """Escreve CSV com linha de comentário da semente mestra antes do cabeçalho."""
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as f:
        f.write(f"# master_seed={seed}\n")
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_format_cell(cell) for cell in row])
    return path


def write_json(path: Path, data: Dict[str, Any]) -> Path:
    """JSON determinístico (chaves ordenadas, sem timestamps)."""
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(data, f, indent=2, sort_keys=True, ensure_ascii=False)
        f.write("\n")
    return path


def _format_cell(cell: Any) -> str:
    if isinstance(cell, (float, np.floating)):
        return repr(float(cell))
    if isinstance(cell, np.integer):
        return str(int(cell))
    return str(cell)
