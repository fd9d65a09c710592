"""
Largura de emaranhamento de graph states em escala pequena.

Para graph states o posto de Schmidt através de (A, Ā) é 2^cut_rank(A),
então a largura por árvores subcúbicas coincide com a rank-width do
grafo. A busca exata é uma programação dinâmica sobre subconjuntos
(3^n); ``rank_width_exhaustive`` enumera as árvores diretamente e serve de
verificação cruzada até 9 vértices.
"""

from dataclasses import dataclass, field
from functools import partial
from typing import Dict, FrozenSet, Hashable, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

import networkx as nx
import numpy as np

from core.errors import ConfigurationError, SizeLimitError
from core.lattice import SiteGraph, connected_components, site_uniforms
from core.percolation import ScalingFit, fit_log_n, trial_seed
from utils.helpers import map_trials
from utils.logger import get_logger

DEFAULT_LIMIT = 12
EXHAUSTIVE_LIMIT = 9


@dataclass(frozen=True)
class Split:
    """Nó interno da árvore testemunha; folhas são os próprios vértices."""
    left: "WitnessTree"
    right: "WitnessTree"

    def to_json(self) -> List:
        return [_tree_json(self.left), _tree_json(self.right)]


WitnessTree = Union[Hashable, Split]


def _tree_json(tree: WitnessTree):
    if isinstance(tree, Split):
        return tree.to_json()
    return list(tree) if isinstance(tree, tuple) else tree


def gf2_rank(rows: Iterable[int]) -> int:
    """Posto sobre GF(2) de linhas codificadas como inteiros (base por XOR)."""
    basis: Dict[int, int] = {}
    for row in rows:
        while row:
            top = row.bit_length() - 1
            if top not in basis:
                basis[top] = row
                break
            row ^= basis[top]
    return len(basis)


@dataclass
class Gf2Matrix:
    """Submatriz de adjacência entre A (linhas) e o complemento (colunas)."""
    rows: List[Hashable]
    cols: List[Hashable]
    bits: List[int]

    @classmethod
    def from_cut(cls, graph: nx.Graph, A: Iterable[Hashable]) -> "Gf2Matrix":
        A = set(A)
        rows = sorted(v for v in graph.nodes if v in A)
        cols = sorted(v for v in graph.nodes if v not in A)
        position = {v: i for i, v in enumerate(cols)}
        bits = []
        for v in rows:
            word = 0
            for w in graph.neighbors(v):
                if w in position:
                    word |= 1 << position[w]
            bits.append(word)
        return cls(rows, cols, bits)

    def entry(self, i: int, j: int) -> int:
        return (self.bits[i] >> j) & 1

    def to_array(self) -> np.ndarray:
        return np.array([[self.entry(i, j) for j in range(len(self.cols))] for i in range(len(self.rows))],
                        dtype=np.uint8).reshape(len(self.rows), len(self.cols))

    @property
    def rank(self) -> int:
        return gf2_rank(self.bits)


def cut_rank(graph: nx.Graph, A: Iterable[Hashable]) -> int:
    """log2 do posto de Schmidt do graph state através de (A, V∖A)."""
    return Gf2Matrix.from_cut(graph, A).rank


@dataclass
class BranchDecompositionResult:
    width: int
    witness_tree: Optional[WitnessTree]
    vertices: Tuple[Hashable, ...] = field(default_factory=tuple)


class _CutTable:
    """cut_rank de todos os subconjuntos, indexados por máscara de bits."""

    def __init__(self, graph: nx.Graph):
        self.nodes = sorted(graph.nodes)
        n = len(self.nodes)
        index = {v: i for i, v in enumerate(self.nodes)}
        self.adj = [0] * n
        for a, b in graph.edges:
            self.adj[index[a]] |= 1 << index[b]
            self.adj[index[b]] |= 1 << index[a]
        self.full = (1 << n) - 1
        self.values = [0] * (1 << n)
        for S in range(1, self.full):
            complement = self.full & ~S
            rows = [self.adj[i] & complement for i in range(n) if S >> i & 1]
            self.values[S] = gf2_rank(rows)

    def __getitem__(self, S: int) -> int:
        return self.values[S]


def _check_limit(n: int, limit: int):
    if n > limit:
        raise SizeLimitError(f"{n} vértices excedem o limite da busca exata ({limit})")


def rank_width_bruteforce(graph: nx.Graph, limit: int = DEFAULT_LIMIT) -> BranchDecompositionResult:
    """Rank-width exata por DP em subconjuntos, com árvore testemunha.

    best(S) = min sobre divisões {A, S∖A} de max(cut(A), cut(S∖A),
    best(A), best(S∖A)); best({v}) = cut({v}).
    """
    n = graph.number_of_nodes()
    _check_limit(n, limit)
    if n == 0:
        return BranchDecompositionResult(0, None)
    table = _CutTable(graph)
    nodes = table.nodes
    if n == 1:
        return BranchDecompositionResult(0, nodes[0], tuple(nodes))

    best = [0] * (1 << n)
    choice = [0] * (1 << n)
    for i in range(n):
        best[1 << i] = table[1 << i]
    for S in range(1, 1 << n):
        if S & (S - 1) == 0:
            continue
        low = S & -S
        rest = S ^ low
        value = None
        # A percorre os subconjuntos de S que contêm o menor bit
        sub = rest
        while True:
            A = sub | low
            if A != S:
                B = S ^ A
                candidate = max(table[A], table[B], best[A], best[B])
                if value is None or candidate < value:
                    value, choice[S] = candidate, A
            if sub == 0:
                break
            sub = (sub - 1) & rest
        best[S] = value

    def build(S: int) -> WitnessTree:
        if S & (S - 1) == 0:
            return nodes[S.bit_length() - 1]
        A = choice[S]
        return Split(build(A), build(S ^ A))

    return BranchDecompositionResult(best[table.full], build(table.full), tuple(nodes))


def _walk(graph: nx.Graph, tree: WitnessTree) -> Tuple[List[Hashable], int]:
    if isinstance(tree, Split):
        leaves_l, width_l = _walk(graph, tree.left)
        leaves_r, width_r = _walk(graph, tree.right)
        leaves = leaves_l + leaves_r
        return leaves, max(width_l, width_r, cut_rank(graph, leaves))
    return [tree], cut_rank(graph, [tree])


def witness_width(graph: nx.Graph, tree: Optional[WitnessTree]) -> int:
    """Reavalia a largura induzida por uma árvore testemunha.

    Cada subárvore corresponde à aresta que a liga ao pai; as duas metades
    da raiz são unidas por uma única aresta.
    """
    if tree is None:
        return 0
    leaves, width = _walk(graph, tree)
    if len(leaves) != len(set(leaves)) or set(leaves) != set(graph.nodes):
        raise ValueError("folhas da testemunha não coincidem com os vértices")
    return width


def _insertions(tree, leaf: int) -> Iterator:
    """Todas as árvores obtidas subdividindo uma aresta e pendurando ``leaf``."""
    yield (tree, leaf)
    if isinstance(tree, tuple):
        left, right = tree
        for new_left in _insertions(left, leaf):
            yield (new_left, right)
        for new_right in _insertions(right, leaf):
            yield (left, new_right)


def _rooted_trees(leaves: Sequence[int]) -> Iterator:
    if len(leaves) == 1:
        yield leaves[0]
        return
    for tree in _rooted_trees(leaves[:-1]):
        yield from _insertions(tree, leaves[-1])


def _tree_width(tree, table: _CutTable) -> Tuple[int, int]:
    if not isinstance(tree, tuple):
        mask = 1 << tree
        return mask, table[mask]
    mask_l, width_l = _tree_width(tree[0], table)
    mask_r, width_r = _tree_width(tree[1], table)
    mask = mask_l | mask_r
    return mask, max(width_l, width_r, table[mask])


def rank_width_exhaustive(graph: nx.Graph, limit: int = EXHAUSTIVE_LIMIT) -> int:
    """Rank-width enumerando todas as árvores subcúbicas rotuladas.

    O vértice 0 fica fixo como folha; as demais formam uma árvore binária
    enraizada pendurada nele, o que cobre cada árvore não enraizada uma vez.
    """
    n = graph.number_of_nodes()
    _check_limit(n, limit)
    if n <= 1:
        return 0
    table = _CutTable(graph)
    best = None
    for tree in _rooted_trees(list(range(1, n))):
        _, width = _tree_width(tree, table)
        if best is None or width < best:
            best = width
    return best


def ewd_of_components(graph: nx.Graph, limit: int = DEFAULT_LIMIT) -> int:
    """Largura do produto de componentes: o máximo entre eles."""
    widths = [0]
    for component in nx.connected_components(graph):
        _check_limit(len(component), limit)
        widths.append(rank_width_bruteforce(graph.subgraph(component), limit).width)
    return max(widths)


# --- verificação subcrítica ------------------------------------------------------

def _shape_graph(shape: Tuple[Tuple[int, int], ...]) -> nx.Graph:
    size = 1 + max(max(r, c) for r, c in shape)
    return SiteGraph.from_vertices(size, shape).to_networkx()


def _normalize(component: FrozenSet) -> Tuple[Tuple[int, int], ...]:
    r0 = min(v.row for v in component)
    c0 = min(v.col for v in component)
    return tuple(sorted((v.row - r0, v.col - c0) for v in component))


def _width_trial(trial: int, L: int, p: float, master_seed: int, limit: int) -> Dict:
    u = site_uniforms(L, trial_seed(master_seed, L, trial))
    graph = SiteGraph(L, u < p)
    components = connected_components(graph)
    sizes = sorted((len(c) for c in components), reverse=True)
    s_max = sizes[0] if sizes else 0
    exact: Optional[int] = None
    if s_max <= limit:
        cache: Dict[Tuple, int] = {}
        exact = 0
        for component in components:
            if len(component) == 1:
                continue
            key = _normalize(component)
            if key not in cache:
                cache[key] = rank_width_bruteforce(_shape_graph(key), limit).width
            exact = max(exact, cache[key])
    return {"L": L, "trial": trial, "s_max": s_max, "components": len(sizes), "exact_width": exact}


@dataclass
class WidthBoundReport:
    p: float
    samples: List[Dict]
    fit: Optional[ScalingFit]

    @property
    def bound_holds(self) -> bool:
        return all(s["exact_width"] is None or s["exact_width"] <= s["s_max"] for s in self.samples)

    def mean_s_max(self) -> Dict[int, float]:
        out: Dict[int, List[int]] = {}
        for s in self.samples:
            out.setdefault(s["L"], []).append(s["s_max"])
        return {L: float(np.mean(v)) for L, v in sorted(out.items())}

    def to_json(self) -> Dict:
        return {
            "p": self.p,
            "samples": self.samples,
            "mean_s_max": {str(L): v for L, v in self.mean_s_max().items()},
            "fit": None if self.fit is None else {
                "slope": self.fit.slope, "intercept": self.fit.intercept, "r_squared": self.fit.r_squared},
            "bound_holds": self.bound_holds,
        }


def subcritical_width_bound_check(p: float, Ls: Sequence[int], trials: int, seed: int,
                                  limit: int = DEFAULT_LIMIT, jobs: int = 1) -> WidthBoundReport:
    """Maior componente por amostra como limite de E_wd e seu ajuste em log N.

    Amostras cujos componentes cabem no limite têm a largura exata calculada
    (formas repetidas são reaproveitadas dentro da amostra).
    """
    if p >= 0.55:
        raise ConfigurationError("subcritical_width_bound_check exige p < 0.55")
    if trials < 1:
        raise ConfigurationError("trials deve ser >= 1")
    samples: List[Dict] = []
    for L in Ls:
        fn = partial(_width_trial, L=L, p=p, master_seed=seed, limit=limit)
        samples.extend(map_trials(fn, list(range(trials)), jobs))
        get_logger().log_sweep_point("ewd", L, p, trials)
    report = WidthBoundReport(p, samples, None)
    means = report.mean_s_max()
    report.fit = fit_log_n(list(means), list(means.values()))
    return report
