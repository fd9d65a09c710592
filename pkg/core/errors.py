"""
Hierarquia de exceções do concentrador de cluster states.

Cada classe carrega o código de saída que a CLI deve usar:
0 sucesso, 1 erro de entrada/uso, 2 pipeline não aplicável,
3 asserção interna violada.
"""

from typing import Any, Dict, Optional


class ConcentratorError(Exception):
    """Erro base do projeto."""

    exit_code: int = 1

    def __init__(self, message: str, witness: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.witness = witness or {}


class ConfigurationError(ConcentratorError):
    """Configuração ou flags inválidas."""


class GridFormatError(ConcentratorError):
    """Arquivo de grade malformado."""


class SizeLimitError(ConcentratorError):
    """Instância grande demais para o método exato pedido."""


class MeasurementError(ConcentratorError):
    """Medição mal formada (qubit inexistente, grau errado, ...)."""


class BoundDomainError(ConcentratorError):
    """Parâmetros fora do domínio de gamma_epsilon."""


class PipelineNotApplicable(ConcentratorError):
    """A amostra não tem cruzamentos suficientes para a concentração."""

    exit_code = 2


class InvariantViolation(ConcentratorError):
    """Asserção interna falhou; nunca deveria ocorrer."""

    exit_code = 3


class CleanupError(InvariantViolation):
    """Subgrafo de um caminho não contém cruzamento."""


class BridgeDecompositionError(InvariantViolation):
    """Algum V-path não atravessa uma faixa."""


class TotalOrderViolation(InvariantViolation):
    """Fechos de abutments se sobrepõem ao longo de um H-path."""


class JunctionReductionError(InvariantViolation):
    """Junção não pôde ser reduzida a um único vértice de grau 3."""
