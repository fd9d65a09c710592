"""
Estatísticas de Monte Carlo da percolação de sítios: probabilidade de
cruzamento, número máximo de cruzamentos disjuntos (m_L), curva de
overhead, limiar, escala do maior componente subcrítico, o expoente
gamma_epsilon e a escala linear do trabalho do pipeline.

Todas as amostras de uma tentativa usam os mesmos uniformes por sítio
(semente ``derive_seed(master, L, trial)``), de modo que valores de p
diferentes ficam acoplados: a ocupação é monótona em p por amostra.
"""

import math
from dataclasses import dataclass, field
from functools import partial
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy import sparse, stats
from scipy.sparse.csgraph import maximum_flow

from core.crossings import Orientation, WorkCounter, find_h_paths
from core.errors import BoundDomainError, ConfigurationError, PipelineNotApplicable
from core.lattice import OccupancyGrid, component_sizes, grid_to_graph, label_components, site_uniforms
from core.pipeline import find_crossings, run_from_paths
from utils.helpers import derive_seed, map_trials
from utils.logger import get_logger

P_C = 0.592746
FSS_EXPONENT = 0.75  # 1/nu com nu = 4/3
BOOTSTRAP_RESAMPLES = 200


@dataclass(frozen=True)
class SweepConfig:
    Ls: Tuple[int, ...]
    ps: Tuple[float, ...]
    trials: int
    master_seed: int
    jobs: int = 1

    def __post_init__(self):
        if self.trials < 1:
            raise ConfigurationError("trials deve ser >= 1")
        if not self.Ls or any(L < 1 for L in self.Ls):
            raise ConfigurationError("tamanhos L devem ser positivos")
        if not self.ps or any(not 0.0 <= p <= 1.0 for p in self.ps):
            raise ConfigurationError("probabilidades devem estar em [0, 1]")


@dataclass
class CurvePoint:
    L: int
    p: float
    estimate: float
    stderr: float
    trials: int
    extra: Dict[str, float] = field(default_factory=dict)


@dataclass(frozen=True)
class BoundParams:
    alpha: float
    beta: float
    p: float
    eps: float

    def __post_init__(self):
        if self.beta < 0:
            raise BoundDomainError("beta deve ser não negativo")
        if self.eps <= 0:
            raise BoundDomainError("eps deve ser positivo")
        if self.p - P_C - self.eps <= 0:
            raise BoundDomainError(f"p - p_c - eps = {self.p - P_C - self.eps:.6g} <= 0")


def trial_seed(master_seed: int, L: int, trial: int) -> int:
    """Semente por tentativa; não depende de p para manter o acoplamento."""
    return derive_seed(master_seed, L, trial)


def _stderr(values: np.ndarray) -> float:
    if values.size < 2:
        return 0.0
    return float(np.std(values, ddof=1) / math.sqrt(values.size))


# --- cruzamentos ----------------------------------------------------------------

def has_crossing(mask: np.ndarray, orientation: Orientation = Orientation.H) -> bool:
    """True se algum componente toca as duas bordas (esquerda/direita para H)."""
    if orientation is Orientation.V:
        mask = mask.T
    labels, count = label_components(mask)
    if count == 0:
        return False
    left = np.unique(labels[:, 0])
    right = np.unique(labels[:, -1])
    return bool(np.intersect1d(left[left > 0], right[right > 0]).size)


def crossing_threshold(uniforms: np.ndarray) -> float:
    """Menor p em que a amostra acoplada passa a ter cruzamento H.

    Busca binária sobre os uniformes ordenados: com ocupação ``u <= t`` o
    cruzamento é monótono em t.
    """
    values = np.sort(uniforms.ravel())
    lo, hi = 0, values.size - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if has_crossing(uniforms <= values[mid]):
            hi = mid
        else:
            lo = mid + 1
    return float(values[lo])


def _crossing_trial(trial: int, L: int, ps: Tuple[float, ...], master_seed: int) -> List[bool]:
    u = site_uniforms(L, trial_seed(master_seed, L, trial))
    return [has_crossing(u < p) for p in ps]


def crossing_curve(sweep: SweepConfig) -> List[CurvePoint]:
    points = []
    for L in sweep.Ls:
        fn = partial(_crossing_trial, L=L, ps=tuple(sweep.ps), master_seed=sweep.master_seed)
        hits = np.array(map_trials(fn, list(range(sweep.trials)), sweep.jobs), dtype=float)
        for i, p in enumerate(sweep.ps):
            q = float(hits[:, i].mean())
            points.append(CurvePoint(L, float(p), q, math.sqrt(q * (1 - q) / sweep.trials), sweep.trials))
            get_logger().log_sweep_point("crossing", L, p, sweep.trials)
    return points


def crossing_probability(L: int, p: float, trials: int, seed: int, jobs: int = 1) -> CurvePoint:
    """Fração de amostras com cruzamento horizontal, com erro binomial."""
    return crossing_curve(SweepConfig((L,), (p,), trials, seed, jobs))[0]


# --- m_L por fluxo máximo ----------------------------------------------------------

def max_disjoint_crossings(grid: Union[OccupancyGrid, np.ndarray], orientation: Orientation = Orientation.H) -> int:
    """Número máximo de cruzamentos disjuntos em vértices (Menger).

    Cada sítio ocupado vira um arco in->out de capacidade 1; a super-fonte
    liga a borda de partida e a borda de chegada liga o super-sumidouro.
    """
    mask = grid.occupied if isinstance(grid, OccupancyGrid) else np.asarray(grid, dtype=bool)
    if orientation is Orientation.V:
        mask = mask.T
    L = mask.shape[0]
    if not mask[:, 0].any() or not mask[:, -1].any():
        return 0
    index = -np.ones(mask.shape, dtype=np.int64)
    rows, cols = np.nonzero(mask)
    index[rows, cols] = np.arange(rows.size)
    n = rows.size
    source, sink = 2 * n, 2 * n + 1

    tails = [2 * index[rows, cols]]
    heads = [2 * index[rows, cols] + 1]
    for dr, dc in ((0, 1), (1, 0), (0, -1), (-1, 0)):
        r2, c2 = rows + dr, cols + dc
        ok = (r2 >= 0) & (r2 < L) & (c2 >= 0) & (c2 < L)
        r2c, c2c = np.where(ok, r2, 0), np.where(ok, c2, 0)
        ok &= mask[r2c, c2c]
        tails.append(2 * index[rows[ok], cols[ok]] + 1)
        heads.append(2 * index[r2[ok], c2[ok]])
    left = index[:, 0][mask[:, 0]]
    right = index[:, -1][mask[:, -1]]
    tails += [np.full(left.size, source), 2 * right + 1]
    heads += [2 * left, np.full(right.size, sink)]

    tail = np.concatenate(tails)
    head = np.concatenate(heads)
    capacity = sparse.csr_matrix(
        (np.ones(tail.size, dtype=np.int32), (tail, head)), shape=(2 * n + 2, 2 * n + 2))
    return int(maximum_flow(capacity, source, sink).flow_value)


# --- overhead ---------------------------------------------------------------------

def _overhead_trial(trial: int, L: int, ps: Tuple[float, ...], master_seed: int, pipeline: bool) -> List[Tuple[int, int]]:
    u = site_uniforms(L, trial_seed(master_seed, L, trial))
    out = []
    for p in ps:
        grid = OccupancyGrid(L, u < p)
        m = max_disjoint_crossings(grid)
        achieved = len(find_h_paths(grid_to_graph(grid))) if pipeline else 0
        out.append((m, achieved))
    return out


def overhead_curve(sweep: SweepConfig, pipeline: bool = True) -> List[CurvePoint]:
    """E[m_L]/L por (L, p) e a contagem média de H-paths do pipeline.

    ``extra`` traz ``ideal_overhead`` = (L/E[m_L])² (infinito quando
    E[m_L] = 0) e ``achieved_pipeline_count``.
    """
    points = []
    for L in sweep.Ls:
        fn = partial(_overhead_trial, L=L, ps=tuple(sweep.ps), master_seed=sweep.master_seed, pipeline=pipeline)
        results = np.array(map_trials(fn, list(range(sweep.trials)), sweep.jobs), dtype=float)
        for i, p in enumerate(sweep.ps):
            normalized = results[:, i, 0] / L
            mean = float(normalized.mean())
            points.append(CurvePoint(
                L, float(p), mean, _stderr(normalized), sweep.trials,
                extra={
                    "ideal_overhead": (1.0 / mean) ** 2 if mean > 0 else math.inf,
                    "achieved_pipeline_count": float(results[:, i, 1].mean()),
                },
            ))
            get_logger().log_sweep_point("overhead", L, p, sweep.trials)
    return points


def supercritical_concentration(L: int, p: float, trials: int, seed: int, jobs: int = 1) -> Dict[str, float]:
    """Dispersão de m_L/L: média, desvio padrão e fração a ±20% da média."""
    fn = partial(_overhead_trial, L=L, ps=(p,), master_seed=seed, pipeline=False)
    values = np.array([r[0][0] for r in map_trials(fn, list(range(trials)), jobs)], dtype=float) / L
    mean = float(values.mean())
    within = float(np.mean(np.abs(values - mean) <= 0.2 * mean)) if mean > 0 else 0.0
    return {
        "L": L,
        "p": p,
        "trials": trials,
        "mean": mean,
        "std": float(values.std(ddof=1)) if trials > 1 else 0.0,
        "fraction_within_20pct": within,
    }


# --- limiar -----------------------------------------------------------------------

@dataclass
class ThresholdEstimate:
    estimate: float
    stderr: float
    per_L: List[CurvePoint]
    extrapolated: bool
    note: str = ""


def _threshold_trial(trial: int, L: int, master_seed: int) -> float:
    return crossing_threshold(site_uniforms(L, trial_seed(master_seed, L, trial)))


def estimate_threshold(Ls: Sequence[int], trials: int, seed: int, jobs: int = 1) -> ThresholdEstimate:
    """Ponto de probabilidade de cruzamento 1/2 por L e extrapolação em L^(-3/4).

    Com o acoplamento, P(cruza em p) = P(limiar da amostra <= p), então o
    ponto 1/2 é a mediana dos limiares exatos por amostra.
    """
    if trials < 1 or not Ls:
        raise ConfigurationError("estimate_threshold exige tamanhos e trials >= 1")
    per_L = []
    for L in Ls:
        values = np.array(map_trials(partial(_threshold_trial, L=L, master_seed=seed), list(range(trials)), jobs))
        median = float(np.median(values))
        rng = np.random.default_rng(derive_seed(seed, L, 0xB007))
        boot = np.median(rng.choice(values, size=(BOOTSTRAP_RESAMPLES, values.size), replace=True), axis=1)
        per_L.append(CurvePoint(int(L), median, median, float(np.std(boot, ddof=1)), trials))
        get_logger().log_sweep_point("threshold", L, median, trials)

    if len(per_L) == 1:
        point = per_L[0]
        return ThresholdEstimate(point.estimate, point.stderr, per_L, extrapolated=False,
                                 note="um único L: pseudo-limiar sem extrapolação")
    x = np.array([pt.L for pt in per_L], dtype=float) ** (-FSS_EXPONENT)
    y = np.array([pt.estimate for pt in per_L])
    fit = stats.linregress(x, y)
    stderr = float(fit.intercept_stderr) if len(per_L) > 2 else max(pt.stderr for pt in per_L)
    return ThresholdEstimate(float(fit.intercept), stderr, per_L, extrapolated=True)


# --- componentes subcríticos ---------------------------------------------------------

@dataclass
class ScalingFit:
    slope: float
    intercept: float
    r_squared: float


@dataclass
class ComponentScaling:
    rows: List[Dict[str, float]]
    fits: Dict[float, ScalingFit]


def _largest_trial(trial: int, L: int, ps: Tuple[float, ...], master_seed: int) -> List[int]:
    u = site_uniforms(L, trial_seed(master_seed, L, trial))
    out = []
    for p in ps:
        sizes = component_sizes(u < p)
        out.append(int(sizes.max()) if sizes.size else 0)
    return out


def fit_log_n(Ls: Sequence[int], values: Sequence[float]) -> Optional[ScalingFit]:
    """Ajuste a + b·log N com N = L²; None com menos de dois tamanhos."""
    if len(Ls) < 2:
        return None
    x = np.log(np.asarray(Ls, dtype=float) ** 2)
    y = np.asarray(values, dtype=float)
    if np.all(y == y[0]):
        return ScalingFit(0.0, float(y[0]), 1.0)
    fit = stats.linregress(x, y)
    return ScalingFit(float(fit.slope), float(fit.intercept), float(fit.rvalue ** 2))


def largest_component_scaling(ps: Sequence[float], Ls: Sequence[int], trials: int, seed: int,
                              jobs: int = 1) -> ComponentScaling:
    """Média e máximo do maior componente por (L, p) e ajuste em log N."""
    if any(p >= 0.55 for p in ps):
        raise ConfigurationError("largest_component_scaling exige p < 0.55")
    sweep = SweepConfig(tuple(Ls), tuple(ps), trials, seed, jobs)
    rows = []
    for L in sweep.Ls:
        fn = partial(_largest_trial, L=L, ps=sweep.ps, master_seed=seed)
        sizes = np.array(map_trials(fn, list(range(trials)), jobs), dtype=float)
        for i, p in enumerate(sweep.ps):
            column = sizes[:, i]
            rows.append({"L": L, "p": float(p), "N": L * L, "mean": float(column.mean()),
                         "stderr": _stderr(column), "max": float(column.max()), "trials": trials})
            get_logger().log_sweep_point("components", L, p, trials)
    fits = {}
    for p in sweep.ps:
        selected = [r for r in rows if r["p"] == float(p)]
        fit = fit_log_n([r["L"] for r in selected], [r["mean"] for r in selected])
        if fit is not None:
            fits[float(p)] = fit
    return ComponentScaling(rows, fits)


# --- limite exponencial -------------------------------------------------------------

def gamma_epsilon(b: BoundParams) -> float:
    """alpha - beta·log(p/(p - p_c - eps))."""
    return b.alpha - b.beta * math.log(b.p / (b.p - P_C - b.eps))


def optimal_beta(alpha: Union[float, Callable[[float], float]], p: float,
                 eps_grid: Sequence[float]) -> Tuple[float, float]:
    """Maior beta que mantém gamma_epsilon positivo, varrendo eps.

    ``alpha`` pode ser constante ou função de eps. Devolve (beta, eps).
    Valores de eps fora do domínio são ignorados.
    """
    best: Optional[Tuple[float, float]] = None
    for eps in eps_grid:
        if eps <= 0 or p - P_C - eps <= 0:
            continue
        a = alpha(eps) if callable(alpha) else alpha
        beta = a / math.log(p / (p - P_C - eps))
        if best is None or beta > best[0]:
            best = (beta, float(eps))
    if best is None:
        raise BoundDomainError(f"nenhum eps da grade está no domínio para p={p}")
    return best


# --- escala do trabalho ---------------------------------------------------------------

def _runtime_trial(trial: int, L: int, p: float, master_seed: int) -> Tuple[int, int, int]:
    u = site_uniforms(L, trial_seed(master_seed, L, trial))
    grid = OccupancyGrid(L, u < p)
    graph = grid_to_graph(grid)
    counter = WorkCounter()
    hset, vset = find_crossings(graph, counter)
    try:
        run_from_paths(grid, graph, hset, vset, counter)
    except PipelineNotApplicable:
        pass
    return counter.total, max(hset.visits, vset.visits), grid.occupied_count


@dataclass
class RuntimeScaling:
    rows: List[Dict[str, float]]
    ratios: Dict[float, float]

    @property
    def bounded(self) -> bool:
        return all(r <= 1.5 for r in self.ratios.values())

    @property
    def visits_within_bound(self) -> bool:
        return all(r["max_visits_per_occupied"] <= 4.0 for r in self.rows)


def runtime_scaling(ps: Sequence[float], Ls: Sequence[int], trials: int, seed: int, jobs: int = 1) -> RuntimeScaling:
    """Contador de trabalho determinístico por sítio e sua variação entre tamanhos."""
    sweep = SweepConfig(tuple(Ls), tuple(ps), trials, seed, jobs)
    rows = []
    for p in sweep.ps:
        for L in sweep.Ls:
            fn = partial(_runtime_trial, L=L, p=p, master_seed=seed)
            results = np.array(map_trials(fn, list(range(trials)), jobs), dtype=float)
            work, visits, occupied = results[:, 0], results[:, 1], results[:, 2]
            per_occupied = np.divide(visits, occupied, out=np.zeros_like(visits), where=occupied > 0)
            rows.append({"L": L, "p": float(p), "N": L * L, "work_per_site": float(work.mean() / (L * L)),
                         "max_visits_per_occupied": float(per_occupied.max()), "trials": trials})
            get_logger().log_sweep_point("runtime", L, p, trials)
    ratios = {}
    for p in sweep.ps:
        values = [r["work_per_site"] for r in rows if r["p"] == float(p)]
        low = min(values)
        ratios[float(p)] = max(values) / low if low > 0 else (1.0 if max(values) == 0 else math.inf)
    return RuntimeScaling(rows, ratios)
