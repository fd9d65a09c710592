"""
Sistema de configuração do concentrador de cluster states.
"""

import os
import json
from typing import Dict, Any, List, Optional
from dataclasses import asdict, dataclass, fields

from core.errors import ConfigurationError


@dataclass
class Config:
    """Configuração do concentrador."""

    # Saídas
    output_dir: str = "resultados"
    log_dir: str = "logs"
    debug_dir: str = "debug"
    log_level: str = "WARNING"
    debug: bool = False

    # Reprodutibilidade e paralelismo
    default_seed: int = 0
    jobs: int = 1

    # Limites dos métodos exatos
    tableau_qubit_limit: int = 400
    width_vertex_limit: int = 12

    @classmethod
    def load(cls, config_path: Optional[str] = None) -> 'Config':
        """Carrega configuração de variáveis de ambiente e arquivo JSON."""
        config = cls()

        # 1. Variáveis de ambiente (.env incluso)
        config._load_from_env()

        # 2. Arquivo de configuração
        if config_path:
            if not os.path.exists(config_path):
                raise ConfigurationError(f"Arquivo de configuração '{config_path}' não encontrado")
            config._load_from_file(config_path)
        else:
            for path in config._get_default_config_paths():
                if os.path.exists(path):
                    config._load_from_file(path)
                    break

        return config

    def _load_from_env(self):
        """Carrega configuração de variáveis de ambiente."""
        try:
            from dotenv import load_dotenv
            load_dotenv()
        except ImportError:
            pass  # python-dotenv não instalado

        env_mappings = {
            'CLUSTER_OUTPUT_DIR': 'output_dir',
            'CLUSTER_LOG_DIR': 'log_dir',
            'CLUSTER_DEBUG_DIR': 'debug_dir',
            'CLUSTER_LOG_LEVEL': 'log_level',
            'CLUSTER_DEBUG': ('debug', bool),
            'CLUSTER_SEED': ('default_seed', int),
            'CLUSTER_JOBS': ('jobs', int),
            'CLUSTER_TABLEAU_LIMIT': ('tableau_qubit_limit', int),
            'CLUSTER_WIDTH_LIMIT': ('width_vertex_limit', int),
        }

        for env_var, config_attr in env_mappings.items():
            value = os.getenv(env_var)
            if not value:
                continue
            if isinstance(config_attr, tuple):
                attr_name, attr_type = config_attr
                if attr_type == bool:
                    value = value.lower() in ('true', '1', 'yes', 'on')
                else:
                    try:
                        value = attr_type(value)
                    except ValueError as e:
                        raise ConfigurationError(f"{env_var} inválido: {value!r}") from e
                setattr(self, attr_name, value)
            else:
                setattr(self, config_attr, value)

    def _load_from_file(self, config_path: str):
        """Carrega configuração de arquivo JSON."""
        try:
            with open(config_path, 'r', encoding='utf-8') as f:
                config_data = json.load(f)
        except (OSError, ValueError) as e:
            raise ConfigurationError(f"Erro ao carregar configuração de {config_path}: {e}") from e

        types = {f.name: f.type for f in fields(self)}
        for key, value in config_data.items():
            if key not in types:
                continue
            expected = types[key]
            if expected is int and (isinstance(value, bool) or not isinstance(value, int)):
                raise ConfigurationError(f"{config_path}: {key} deve ser inteiro, recebeu {value!r}")
            if expected is bool and not isinstance(value, bool):
                raise ConfigurationError(f"{config_path}: {key} deve ser booleano, recebeu {value!r}")
            if expected is str and not isinstance(value, str):
                raise ConfigurationError(f"{config_path}: {key} deve ser texto, recebeu {value!r}")
            setattr(self, key, value)

    def _get_default_config_paths(self) -> list:
        """Retorna caminhos padrão para arquivos de configuração."""
        return [
            ".cluster_config.json",
            os.path.expanduser("~/.cluster_config.json"),
            os.path.expanduser("~/.config/cluster-concentrator/config.json"),
        ]

    def validate(self) -> List[str]:
        """Valida configuração e retorna lista de erros."""
        errors = []

        if self.jobs < 1:
            errors.append("jobs deve ser maior que 0")

        if not 0 <= self.default_seed < 2 ** 64:
            errors.append("default_seed deve ser um inteiro de 64 bits sem sinal")

        if self.tableau_qubit_limit <= 0:
            errors.append("tableau_qubit_limit deve ser maior que 0")

        if not 1 <= self.width_vertex_limit <= 16:
            errors.append("width_vertex_limit deve estar entre 1 e 16")

        if self.log_level.upper() not in ('DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL'):
            errors.append(f"log_level desconhecido: {self.log_level}")

        return errors

    def to_dict(self) -> Dict[str, Any]:
        """Converte configuração para dicionário."""
        return asdict(self)


class ConfigManager:
    """Gerenciador de configuração."""

    def __init__(self, config_path: Optional[str] = None):
        self.config_path = config_path
        self.config = Config.load(config_path)

    def get_config(self) -> Config:
        return self.config

    def update_config(self, **kwargs):
        """Atualiza campos existentes; ignora valores None."""
        for key, value in kwargs.items():
            if value is not None and hasattr(self.config, key):
                setattr(self.config, key, value)

    def validate_config(self) -> None:
        """Levanta ConfigurationError com todos os problemas encontrados."""
        errors = self.config.validate()
        if errors:
            raise ConfigurationError("Erros na configuração: " + "; ".join(errors))

    def create_sample_config(self, path: str = ".cluster_config.json"):
        """Cria arquivo de configuração de exemplo."""
        sample_dict = Config().to_dict()
        sample_dict['_comment'] = "Configuração do concentrador - edite conforme necessário"
        with open(path, 'w', encoding='utf-8') as f:
            json.dump(sample_dict, f, indent=2, ensure_ascii=False, sort_keys=True)
        return path


def load_config(config_path: Optional[str] = None) -> Config:
    """Função helper para carregar configuração."""
    return Config.load(config_path)
