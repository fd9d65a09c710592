#!/usr/bin/env python3
"""
Cluster Concentrator - concentração de cluster states hexagonais a partir de
redes quadradas diluídas por percolação de sítios.

Códigos de saída: 0 sucesso, 1 erro de entrada/uso, 2 pipeline não
aplicável, 3 asserção interna violada.
"""

import sys
import os
import argparse
import json
from typing import List, Optional

# Adicionar o diretório atual ao PYTHONPATH
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from rich.console import Console
from rich.panel import Panel
from rich.table import Table

from core.config import ConfigManager
from core.errors import ConcentratorError
from tools import registry
from tools.base import ToolResult
from utils.debug import configure_debug_manager
from utils.logger import setup_logger


class UsageErrorParser(argparse.ArgumentParser):
    """ArgumentParser que sai com código 1 em erro de uso."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: erro: {message}\n")


class ClusterConcentrator:
    """Classe principal da CLI."""

    def __init__(self, config_path: Optional[str] = None, console: Optional[Console] = None, **overrides):
        self.console = console or Console()
        self.config_manager = ConfigManager(config_path)
        self.config_manager.update_config(**overrides)
        self.config_manager.validate_config()
        self.config = self.config_manager.get_config()

        self.logger = setup_logger(log_dir=self.config.log_dir, level=self.config.log_level)
        configure_debug_manager(self.config.debug_dir, self.config.debug)

    def _config_echo(self) -> dict:
        # apenas o que influencia as saídas
        return {"tableau_qubit_limit": self.config.tableau_qubit_limit,
                "width_vertex_limit": self.config.width_vertex_limit}

    def run(self, args: argparse.Namespace) -> int:
        seed = args.seed if getattr(args, "seed", None) is not None else self.config.default_seed
        command = args.command

        if command == "generate":
            result = registry.execute_tool("generate", L=args.L, p=args.p, seed=seed, out=args.out,
                                           config=self._config_echo())
        elif command == "concentrate":
            out_dir = args.out_dir or os.path.join(self.config.output_dir, "concentrate")
            result = registry.execute_tool("concentrate", grid_path=args.grid, seed=seed, out_dir=out_dir,
                                           dump_stages=args.dump_stages, config=self._config_echo())
        elif command == "verify":
            result = registry.execute_tool("verify", grid_path=args.grid, seed=seed,
                                           limit=self.config.tableau_qubit_limit, tamper=args.tamper,
                                           out_dir=args.out_dir, config=self._config_echo())
        elif command == "sweep":
            out_dir = args.out_dir or os.path.join(self.config.output_dir, args.kind)
            result = registry.execute_tool("sweep", kind=args.kind, L=args.L, p=args.p, trials=args.trials,
                                           seed=seed, jobs=self.config.jobs, out_dir=out_dir,
                                           width_limit=self.config.width_vertex_limit,
                                           config=self._config_echo())
        else:
            self.console.print(f"[red]Comando desconhecido: {command}[/red]")
            return 1

        self._show_result(command, result)
        return result.exit_code if not result.success else 0

    def _show_result(self, command: str, result: ToolResult):
        if command == "verify" and result.content:
            verdict = result.content["verdict"]
            style = "green" if verdict == "PASS" else "red"
            self.console.print(f"[bold {style}]{verdict}[/bold {style}] "
                               f"({result.content['qubits']} qubits, {result.content['measured']} medidos)")
            for line in result.content.get("diff", [])[:20]:
                self.console.print(f"  [red]{line}[/red]")
            return

        if not result.success:
            title = {2: " Pipeline não aplicável", 3: " Asserção interna"}.get(result.exit_code, " Erro")
            self.console.print(Panel(str(result.error), title=title, border_style="red"))
            return

        content = result.content or {}
        if command == "generate":
            self.console.print(f"[green] Grade gravada em {content['path']}[/green] "
                               f"(ocupação {content['fraction']:.4f})")
            return

        table = Table(title=command, show_header=True)
        table.add_column("campo", style="cyan")
        table.add_column("valor")
        for key, value in content.items():
            text = value if isinstance(value, str) else json.dumps(value, sort_keys=True)
            table.add_row(key, text)
        self.console.print(table)


def build_parser() -> argparse.ArgumentParser:
    parser = UsageErrorParser(
        prog="cluster_concentrator.py",
        description="Cluster Concentrator - rede hexagonal a partir de cluster states diluídos",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Exemplos de uso:
  cluster_concentrator.py generate --L 30 --p 0.592746 --seed 7 --out grade.txt
  cluster_concentrator.py concentrate grade.txt --seed 1 --out-dir resultados/run1
  cluster_concentrator.py verify grade.txt --seed 1
  cluster_concentrator.py sweep overhead --L 64 --p 0.55:0.05:1.0 --trials 2000
  cluster_concentrator.py --create-config                # Criar config de exemplo
        """
    )

    parser.add_argument("--config", "-c", type=str, help="Caminho para arquivo de configuração")
    parser.add_argument("--create-config", action="store_true", help="Criar arquivo de configuração de exemplo")
    parser.add_argument("--tools", action="store_true", help="Listar comandos disponíveis")
    parser.add_argument("--log-level", type=str, help="Nível de log no console")
    parser.add_argument("--debug", action="store_true", default=None, help="Ativa o registro de sessão de debug")
    parser.add_argument("--jobs", "-j", type=int, help="Processos paralelos nas varreduras")

    sub = parser.add_subparsers(dest="command")

    gen = sub.add_parser("generate", help="Sorteia uma grade diluída")
    gen.add_argument("--L", type=int, required=True, help="Tamanho linear")
    gen.add_argument("--p", type=float, required=True, help="Probabilidade de ocupação")
    gen.add_argument("--seed", type=int, help="Semente mestra")
    gen.add_argument("--out", type=str, required=True, help="Arquivo de grade de saída")

    conc = sub.add_parser("concentrate", help="Executa o pipeline completo")
    conc.add_argument("grid", type=str, help="Arquivo de grade")
    conc.add_argument("--seed", type=int, help="Semente dos resultados de medição")
    conc.add_argument("--out-dir", type=str, help="Diretório de saída")
    conc.add_argument("--dump-stages", dest="dump_stages", action="store_true", default=True,
                      help="Grava um JSON por estágio (padrão)")
    conc.add_argument("--no-dump-stages", dest="dump_stages", action="store_false",
                      help="Grava apenas o resultado final")

    ver = sub.add_parser("verify", help="Verifica a concentração no simulador de estabilizadores")
    ver.add_argument("grid", type=str, help="Arquivo de grade")
    ver.add_argument("--seed", type=int, help="Semente dos resultados de medição")
    ver.add_argument("--tamper", action="store_true", help="Insere uma aresta espúria no alvo")
    ver.add_argument("--out-dir", type=str, help="Diretório para o manifesto")

    sweep = sub.add_parser("sweep", help="Varreduras de Monte Carlo")
    sweep.add_argument("kind", choices=["crossing", "overhead", "threshold", "components", "runtime", "ewd"])
    sweep.add_argument("--L", type=str, required=True, help="Tamanhos: 'a,b,c' ou 'start:step:end'")
    sweep.add_argument("--p", type=str, help="Probabilidades: 'a,b,c' ou 'start:step:end'")
    sweep.add_argument("--trials", type=int, default=100, help="Tentativas por ponto")
    sweep.add_argument("--seed", type=int, help="Semente mestra")
    sweep.add_argument("--out-dir", type=str, help="Diretório de saída")

    return parser


def main(argv: Optional[List[str]] = None, console: Optional[Console] = None) -> int:
    """Função principal; devolve o código de saída."""
    parser = build_parser()
    args = parser.parse_args(argv)
    console = console or Console()

    if args.create_config:
        path = ConfigManager(args.config).create_sample_config()
        console.print(f"[green]Configuração de exemplo criada em {path}[/green]")
        return 0

    if args.tools:
        console.print("[bold blue]Comandos Disponíveis:[/bold blue]")
        for info in registry.get_tools_description():
            required = ", ".join(info["parameters"].get("required", []))
            console.print(f"  [cyan]{info['name']}[/cyan]: {info['description']} [dim]({required})[/dim]")
        return 0

    if not args.command:
        parser.print_help()
        return 1

    try:
        app = ClusterConcentrator(args.config, console=console, log_level=args.log_level,
                                  debug=args.debug, jobs=args.jobs)
        return app.run(args)
    except ConcentratorError as e:
        console.print(f"[red]Erro: {e}[/red]")
        return e.exit_code
    except KeyboardInterrupt:
        console.print("\n[yellow]Operação cancelada pelo usuário.[/yellow]")
        return 1


if __name__ == "__main__":
    sys.exit(main())
