"""
Sistema de logging do concentrador.
"""

import copy
import logging
import logging.handlers
from typing import Optional
from pathlib import Path


class ColoredFormatter(logging.Formatter):
    """Formatter com cores para logs no terminal."""

    # Códigos de cor ANSI
    COLORS = {
        'DEBUG': '\033[36m',    # Cyan
        'INFO': '\033[32m',     # Green
        'WARNING': '\033[33m',  # Yellow
        'ERROR': '\033[31m',    # Red
        'CRITICAL': '\033[35m', # Magenta
    }
    RESET = '\033[0m'

    def format(self, record):
        # Cópia: o handler de arquivo recebe o mesmo record
        record = copy.copy(record)
        if record.levelname in self.COLORS:
            record.levelname = f"{self.COLORS[record.levelname]}{record.levelname}{self.RESET}"
        return super().format(record)


class ConcentratorLogger:
    """Logger do pipeline de concentração e das varreduras."""

    def __init__(self, name: str = "cluster_concentrator", log_dir: str = "logs"):
        self.name = name
        self.log_dir = Path(log_dir).resolve()
        self.logger = logging.getLogger(name)
        self._setup_logger()

    def _setup_logger(self):
        """Configura handlers de console e arquivo."""
        self.logger.setLevel(logging.DEBUG)
        self.logger.handlers.clear()
        self.logger.propagate = False

        console_handler = logging.StreamHandler()
        console_handler.setLevel(logging.WARNING)
        console_handler.setFormatter(ColoredFormatter(
            '%(asctime)s - %(name)s - %(levelname)s - %(message)s',
            datefmt='%H:%M:%S'
        ))
        self.logger.addHandler(console_handler)

        if self._create_log_directory():
            file_handler = self._create_file_handler()
            if file_handler:
                self.logger.addHandler(file_handler)

    def _create_log_directory(self) -> bool:
        try:
            self.log_dir.mkdir(parents=True, exist_ok=True)
            return True
        except OSError as e:
            print(f"Erro ao criar diretório de logs: {e}")
            return False

    def _create_file_handler(self) -> Optional[logging.Handler]:
        """Handler com rotação (máximo 10MB, manter 5 arquivos)."""
        try:
            file_handler = logging.handlers.RotatingFileHandler(
                self.log_dir / f"{self.name}.log",
                maxBytes=10 * 1024 * 1024,
                backupCount=5,
                encoding='utf-8',
            )
            file_handler.setLevel(logging.DEBUG)
            file_handler.setFormatter(logging.Formatter(
                '%(asctime)s - %(name)s - %(levelname)s - %(funcName)s:%(lineno)d - %(message)s',
                datefmt='%Y-%m-%d %H:%M:%S'
            ))
            return file_handler
        except OSError as e:
            print(f"Erro ao configurar log de arquivo: {e}")
            return None

    def set_level(self, level: str):
        """Define nível do console (o arquivo sempre recebe DEBUG)."""
        value = logging.getLevelName(level.upper())
        if not isinstance(value, int):
            return
        for handler in self.logger.handlers:
            if not isinstance(handler, logging.FileHandler):
                handler.setLevel(value)

    def debug(self, message: str, **kwargs):
        self.logger.debug(message, extra=kwargs, stacklevel=2)

    def info(self, message: str, **kwargs):
        self.logger.info(message, extra=kwargs, stacklevel=2)

    def warning(self, message: str, **kwargs):
        self.logger.warning(message, extra=kwargs, stacklevel=2)

    def error(self, message: str, **kwargs):
        self.logger.error(message, extra=kwargs, stacklevel=2)

    def critical(self, message: str, **kwargs):
        self.logger.critical(message, extra=kwargs, stacklevel=2)

    def log_stage(self, stage: str, **counts):
        """Resumo de um estágio do pipeline (contagens por estágio)."""
        summary = ", ".join(f"{k}={v}" for k, v in sorted(counts.items()))
        self.logger.info(f"Estágio {stage}: {summary}", extra={"stage": stage}, stacklevel=2)

    def log_tool_execution(self, tool_name: str, parameters: dict, success: bool, error: Optional[str] = None):
        """Log de execução de um comando da CLI."""
        self.info(f"Comando {tool_name}: {parameters}", tool=tool_name, success=success)
        if not success:
            self.warning(f"Comando {tool_name} falhou: {error or 'erro desconhecido'}", tool=tool_name)

    def log_sweep_point(self, kind: str, L: int, p: float, trials: int):
        self.debug(f"Sweep {kind}: L={L} p={p} trials={trials}")


# Instância global do logger
_logger: Optional[ConcentratorLogger] = None


def setup_logger(
    name: str = "cluster_concentrator",
    log_dir: str = "logs",
    level: str = "WARNING"
) -> ConcentratorLogger:
    """Configura e retorna o logger global."""
    global _logger

    if _logger is None or _logger.log_dir != Path(log_dir).resolve():
        _logger = ConcentratorLogger(name, log_dir)

    _logger.set_level(level)
    return _logger


def get_logger() -> ConcentratorLogger:
    """Obtém o logger global."""
    global _logger

    if _logger is None:
        _logger = setup_logger()

    return _logger
