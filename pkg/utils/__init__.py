"""
Utilitários do concentrador de cluster states.
"""

from .logger import setup_logger, get_logger
from .debug import DebugManager, get_debug_manager, configure_debug_manager
from .helpers import derive_seed, map_trials, parse_range, parse_int_list, write_csv, write_json

__all__ = [
    'setup_logger', 'get_logger',
    'DebugManager', 'get_debug_manager', 'configure_debug_manager',
    'derive_seed', 'map_trials', 'parse_range', 'parse_int_list', 'write_csv', 'write_json',
]
