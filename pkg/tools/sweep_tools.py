"""
Varreduras de Monte Carlo com saída em CSV e manifesto.
"""

import math
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence

from core.entanglement import subcritical_width_bound_check
from core.errors import ConfigurationError
from core.manifest import RunManifest
from core.percolation import (
    SweepConfig,
    crossing_curve,
    estimate_threshold,
    largest_component_scaling,
    overhead_curve,
    runtime_scaling,
)
from utils.helpers import ensure_directory, parse_int_list, parse_range, write_csv, write_json
from .base import Tool, ToolResult

SWEEP_KINDS = ("crossing", "overhead", "threshold", "components", "runtime", "ewd")


def _as_list(value, parser: Callable[[str], List]) -> List:
    if value is None:
        return []
    if isinstance(value, str):
        return parser(value)
    if isinstance(value, (int, float)):
        return [value]
    return list(value)


class SweepTool(Tool):
    """Despacha para as estatísticas de percolação ou de largura."""

    @property
    def name(self) -> str:
        return "sweep"

    @property
    def description(self) -> str:
        return "Executa uma varredura (crossing, overhead, threshold, components, runtime, ewd)"

    @property
    def parameters(self) -> Dict[str, Any]:
        return {
            "type": "object",
            "properties": {
                "kind": {"type": "string", "enum": list(SWEEP_KINDS)},
                "L": {"type": "string", "description": "Tamanhos: 'a,b,c' ou 'start:step:end'"},
                "p": {"type": "string", "description": "Probabilidades: 'a,b,c' ou 'start:step:end'"},
                "trials": {"type": "integer", "description": "Tentativas por ponto"},
                "seed": {"type": "integer", "description": "Semente mestra"},
                "jobs": {"type": "integer", "description": "Processos paralelos", "default": 1},
                "out_dir": {"type": "string", "description": "Diretório de saída"},
            },
            "required": ["kind", "L", "trials", "out_dir"]
        }

    def execute(self, kind: str = None, L=None, p=None, trials: int = 100, seed: int = 0, jobs: int = 1,
                out_dir: str = None, width_limit: int = 12, config: Optional[Dict[str, Any]] = None) -> ToolResult:
        if kind not in SWEEP_KINDS:
            raise ConfigurationError(f"tipo de varredura desconhecido: {kind!r} (use {', '.join(SWEEP_KINDS)})")
        Ls = [int(x) for x in _as_list(L, parse_int_list)]
        ps = [float(x) for x in _as_list(p, parse_range)]
        if not Ls:
            raise ConfigurationError("--L é obrigatório")
        if kind != "threshold" and not ps:
            raise ConfigurationError(f"--p é obrigatório para '{kind}'")
        if kind == "ewd" and len(ps) != 1:
            raise ConfigurationError("'ewd' aceita um único valor de p")
        trials, seed, jobs = int(trials), int(seed), int(jobs)
        if trials < 1:
            raise ConfigurationError("--trials deve ser >= 1")
        if jobs < 1:
            raise ConfigurationError("--jobs deve ser >= 1")

        out = ensure_directory(out_dir)
        handler = getattr(self, f"_{kind}")
        written, summary = handler(out, Ls, ps, trials, seed, jobs, width_limit)

        manifest = RunManifest(
            f"sweep {kind}",
            {"L": Ls, "p": ps, "trials": trials, **(config or {})},
            seed,
        )
        for path in written:
            manifest.add_output(path, out)
        manifest.summary = summary
        manifest.save(out)
        return ToolResult(success=True, content=summary, metadata={"files": [str(p) for p in written]})

    # --- tipos ----------------------------------------------------------------------

    def _crossing(self, out: Path, Ls, ps, trials, seed, jobs, _limit):
        points = crossing_curve(SweepConfig(tuple(Ls), tuple(ps), trials, seed, jobs))
        path = write_csv(out / "crossing.csv", ["L", "p", "crossing_probability", "stderr", "trials"],
                         ([pt.L, pt.p, pt.estimate, pt.stderr, pt.trials] for pt in points), seed)
        return [path], {"points": len(points)}

    def _overhead(self, out: Path, Ls, ps, trials, seed, jobs, _limit):
        points = overhead_curve(SweepConfig(tuple(Ls), tuple(ps), trials, seed, jobs))
        rows = [[pt.L, pt.p, pt.estimate, pt.stderr, pt.trials, pt.extra["achieved_pipeline_count"],
                 pt.extra["ideal_overhead"]] for pt in points]
        path = write_csv(out / "overhead.csv",
                         ["L", "p", "mean_mL_over_L", "stderr", "trials", "achieved_pipeline_count", "ideal_overhead"],
                         rows, seed)
        violations = _monotone_violations(points)
        return [path], {"points": len(points), "monotone_violations": violations}

    def _threshold(self, out: Path, Ls, ps, trials, seed, jobs, _limit):
        result = estimate_threshold(Ls, trials, seed, jobs)
        rows: List[Sequence] = [[pt.L, pt.estimate, pt.stderr, pt.trials] for pt in result.per_L]
        rows.append(["extrapolated" if result.extrapolated else "pseudo", result.estimate, result.stderr, trials])
        path = write_csv(out / "threshold.csv", ["L", "p_half", "stderr", "trials"], rows, seed)
        summary = {"estimate": result.estimate, "stderr": result.stderr, "extrapolated": result.extrapolated}
        if result.note:
            summary["note"] = result.note
        return [path], summary

    def _components(self, out: Path, Ls, ps, trials, seed, jobs, _limit):
        result = largest_component_scaling(ps, Ls, trials, seed, jobs)
        path = write_csv(out / "components.csv", ["L", "p", "N", "mean_largest", "stderr", "max_largest", "trials"],
                         ([r["L"], r["p"], r["N"], r["mean"], r["stderr"], r["max"], r["trials"]] for r in result.rows),
                         seed)
        fits = {str(p): {"slope": f.slope, "intercept": f.intercept, "r_squared": f.r_squared}
                for p, f in sorted(result.fits.items())}
        return [path], {"fits": fits}

    def _runtime(self, out: Path, Ls, ps, trials, seed, jobs, _limit):
        result = runtime_scaling(ps, Ls, trials, seed, jobs)
        path = write_csv(out / "runtime.csv", ["L", "p", "N", "work_per_site", "max_visits_per_occupied", "trials"],
                         ([r["L"], r["p"], r["N"], r["work_per_site"], r["max_visits_per_occupied"], r["trials"]]
                          for r in result.rows), seed)
        ratios = {str(p): (r if math.isfinite(r) else None) for p, r in sorted(result.ratios.items())}
        return [path], {"ratios": ratios, "bounded": result.bounded, "visits_within_bound": result.visits_within_bound}

    def _ewd(self, out: Path, Ls, ps, trials, seed, jobs, limit):
        report = subcritical_width_bound_check(ps[0], Ls, trials, seed, limit=int(limit), jobs=jobs)
        csv_path = write_csv(out / "ewd.csv", ["L", "trial", "s_max", "components", "exact_width"],
                             ([s["L"], s["trial"], s["s_max"], s["components"],
                               "" if s["exact_width"] is None else s["exact_width"]] for s in report.samples), seed)
        json_path = write_json(out / "ewd.json", report.to_json())
        return [csv_path, json_path], {"bound_holds": report.bound_holds, "fit": report.to_json()["fit"]}


def _monotone_violations(points) -> int:
    """Quedas de m_L/L entre valores crescentes de p, por L."""
    count = 0
    by_L: Dict[int, List] = {}
    for pt in points:
        by_L.setdefault(pt.L, []).append(pt)
    for items in by_L.values():
        items.sort(key=lambda pt: pt.p)
        count += sum(1 for a, b in zip(items, items[1:]) if b.estimate < a.estimate)
    return count
