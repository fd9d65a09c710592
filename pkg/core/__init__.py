"""
Módulo core do concentrador de cluster states.
"""

import sys
import os
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from core.config import Config, ConfigManager
from core.errors import ConcentratorError, InvariantViolation, PipelineNotApplicable

__all__ = [
    'Config', 'ConfigManager',
    'ConcentratorError', 'InvariantViolation', 'PipelineNotApplicable',
]
