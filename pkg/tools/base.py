"""
Classes base para os comandos do concentrador.
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Any, Dict, List, Optional

from core.errors import ConcentratorError
from utils.debug import get_debug_manager
from utils.logger import get_logger


@dataclass
class ToolResult:
    """Resultado da execução de um comando."""
    success: bool
    content: Any
    error: Optional[str] = None
    metadata: Optional[Dict[str, Any]] = None
    exit_code: int = 0


class Tool(ABC):
    """Classe base para todos os comandos."""

    @property
    @abstractmethod
    def name(self) -> str:
        """Nome do comando."""
        pass

    @property
    @abstractmethod
    def description(self) -> str:
        """Descrição do comando."""
        pass

    @property
    @abstractmethod
    def parameters(self) -> Dict[str, Any]:
        """Schema dos parâmetros do comando."""
        pass

    @abstractmethod
    def execute(self, **kwargs) -> ToolResult:
        """Executa o comando com os parâmetros fornecidos."""
        pass

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "description": self.description,
            "parameters": self.parameters
        }


class ToolRegistry:
    """Registro central dos comandos disponíveis."""

    def __init__(self):
        self._tools: Dict[str, Tool] = {}

    def register(self, tool: Tool) -> None:
        self._tools[tool.name] = tool

    def get_tool(self, name: str) -> Optional[Tool]:
        return self._tools.get(name)

    def list_tools(self) -> List[str]:
        return list(self._tools.keys())

    def get_tools_description(self) -> List[Dict[str, Any]]:
        return [tool.to_dict() for tool in self._tools.values()]

    def execute_tool(self, name: str, **kwargs) -> ToolResult:
        """Executa um comando; exceções viram ToolResult com código de saída."""
        tool = self.get_tool(name)
        if not tool:
            return ToolResult(
                success=False,
                content=None,
                error=f"Comando '{name}' não encontrado",
                exit_code=1,
            )

        logger = get_logger()
        try:
            result = tool.execute(**kwargs)
        except ConcentratorError as e:
            result = ToolResult(
                success=False,
                content=None,
                error=str(e),
                metadata={"witness": e.witness} if e.witness else None,
                exit_code=e.exit_code,
            )
            if e.exit_code == 3:
                get_debug_manager().record_failure(e, tool=name)
        except Exception as e:
            get_debug_manager().record_failure(e, tool=name)
            result = ToolResult(
                success=False,
                content=None,
                error=f"Erro ao executar '{name}': {e}",
                exit_code=3,
            )
        logger.log_tool_execution(name, _printable(kwargs), result.success, result.error)
        return result


def _printable(params: Dict[str, Any]) -> Dict[str, Any]:
    return {k: v if isinstance(v, (int, float, str, bool, type(None))) else str(v) for k, v in params.items()}
