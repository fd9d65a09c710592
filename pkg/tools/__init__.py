"""
Comandos do concentrador de cluster states.
"""

from .base import Tool, ToolRegistry, ToolResult
from .lattice_tools import GenerateTool
from .pipeline_tools import ConcentrateTool, VerifyTool
from .sweep_tools import SweepTool

# Registro global de comandos
registry = ToolRegistry()

registry.register(GenerateTool())
registry.register(ConcentrateTool())
registry.register(VerifyTool())
registry.register(SweepTool())

__all__ = [
    'Tool', 'ToolRegistry', 'ToolResult', 'registry',
    'GenerateTool', 'ConcentrateTool', 'VerifyTool', 'SweepTool',
]
