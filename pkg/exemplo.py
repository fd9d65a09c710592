#!/usr/bin/env python3
"""
Exemplo: concentração da grade 9×9 cheia e verificação no tableau.
"""

import sys
import os

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

import numpy as np
from rich.console import Console

from core.graph_state import SeededOutcomes
from core.lattice import OccupancyGrid
from core.pipeline import concentrate
from core.tableau import verify_concentration


def main():
    console = Console()
    grid = OccupancyGrid(9, np.ones((9, 9), dtype=bool), p=1.0)
    classical, quantum = concentrate(grid, SeededOutcomes(1))

    console.print(f"H-paths: {[p.vertices[0].row for p in classical.hset]}")
    console.print(f"V-paths: {[p.vertices[0].col for p in classical.vset]}")
    console.print(f"pontes mantidas: {sorted(classical.alternating.retained)}")
    for node, vertex in sorted(classical.correction.junctions.items()):
        console.print(f"  junção {node} -> {tuple(vertex)}")
    console.print(f"medições: {len(quantum.record)}, arestas finais: {quantum.hex_graph.number_of_edges()}")

    ok = verify_concentration(grid, SeededOutcomes(1))
    console.print("[green]PASS[/green]" if ok else "[red]FAIL[/red]")


if __name__ == "__main__":
    main()
