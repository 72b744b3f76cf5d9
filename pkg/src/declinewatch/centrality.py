"""PageRank centrality over monthly snapshots, and the month-by-month pipeline.

Dependency edges point dependent -> dependency, so a package's score is
driven by how many packages depend on it and by how important those
dependents are. Because absolute scores dilute as the network grows, the
comparable signal is the ranking, stored negated (-1 = most central) so
that bigger is better, like other popularity metrics.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
from scipy import sparse

from .graph import EventCursor, GraphBuilder, GraphSnapshot, advance_to_month
from .ingest import DependencyChangeEvent
from .months import Month, month_range
from .store import SeriesStore

logger = logging.getLogger(__name__)


class EmptyGraph(ValueError):
    """PageRank is undefined on a graph with no nodes."""


@dataclass(frozen=True)
class PageRankConfig:
    damping: float = 0.85
    tolerance: float = 1e-9  # L1 change between iterations
    max_iterations: int = 200

    def __post_init__(self) -> None:
        if not 0.0 < self.damping < 1.0:
            raise ValueError(f"damping must be in (0,1): {self.damping}")
        if self.tolerance < 0:
            raise ValueError(f"tolerance must be >= 0: {self.tolerance}")
        if self.max_iterations < 1:
            raise ValueError(f"max_iterations must be >= 1: {self.max_iterations}")


@dataclass(frozen=True)
class PageRankResult:
    scores: Dict[str, float]
    iterations: int
    converged: bool  # False = iteration budget hit; scores are the last iterate


def pagerank_vector(
    snapshot: GraphSnapshot, config: PageRankConfig = PageRankConfig()
) -> Tuple[np.ndarray, int, bool]:
    """Power iteration on the snapshot; returns (scores by node id, iterations, converged).

    score(p) = (1-d)/n + d * (sum over dependents q of score(q)/outdeg(q)
    + dangling_mass/n); dangling nodes spread their mass uniformly. The
    iteration order is fixed, so results are bit-identical across runs.
    """
    n = snapshot.node_count
    if n == 0:
        raise EmptyGraph("snapshot has no nodes")

    srcs: List[int] = []
    dsts: List[int] = []
    for src, targets in snapshot.edges.items():
        for dst in targets:
            srcs.append(src)
            dsts.append(dst)
    src_arr = np.asarray(srcs, dtype=np.int64)
    dst_arr = np.asarray(dsts, dtype=np.int64)
    out_deg = np.bincount(src_arr, minlength=n).astype(np.float64) if len(src_arr) else np.zeros(n)

    d = config.damping
    base = (1.0 - d) / n
    dangling = out_deg == 0.0
    v = np.full(n, 1.0 / n, dtype=np.float64)

    if len(src_arr):
        weights = 1.0 / out_deg[src_arr]
        matrix = sparse.csr_matrix((weights, (dst_arr, src_arr)), shape=(n, n))
    else:
        matrix = None

    iterations = 0
    converged = False
    for iterations in range(1, config.max_iterations + 1):
        dangling_mass = float(v[dangling].sum()) if dangling.any() else 0.0
        flow = matrix.dot(v) if matrix is not None else np.zeros(n)
        new_v = base + d * (flow + dangling_mass / n)
        delta = float(np.abs(new_v - v).sum())
        v = new_v
        if delta < config.tolerance:
            converged = True
            break
    if not converged:
        logger.warning(
            "pagerank did not converge in %d iterations (month %s)",
            config.max_iterations,
            snapshot.month,
        )
    return v, iterations, converged


def pagerank(snapshot: GraphSnapshot, config: PageRankConfig = PageRankConfig()) -> PageRankResult:
    vector, iterations, converged = pagerank_vector(snapshot, config)
    scores = {snapshot.names[i]: float(vector[i]) for i in range(snapshot.node_count)}
    return PageRankResult(scores=scores, iterations=iterations, converged=converged)


def rank_scores(scores: Mapping[str, float]) -> Dict[str, int]:
    """Negated ranking: position r (1-based, by descending score) maps to -r.

    Ties break ascending by package identifier so the permutation is
    deterministic even when millions of leaf packages share the baseline
    score.
    """
    if not scores:
        raise ValueError("cannot rank an empty score map")
    ordered = sorted(scores, key=lambda name: (-scores[name], name))
    return {name: -(position + 1) for position, name in enumerate(ordered)}


@dataclass(frozen=True)
class CentralityRecord:
    package: str
    month: Month
    score: float
    rank_neg: int


@dataclass
class PipelineProgress:
    months_completed: List[Month]
    packages_ranked: int
    skipped_existing: int


def run_monthly_pipeline(
    events: Sequence[DependencyChangeEvent],
    start: Month,
    end: Month,
    config: PageRankConfig = PageRankConfig(),
    store: Optional[SeriesStore] = None,
    builder: Optional[GraphBuilder] = None,
    cursor: Optional[EventCursor] = None,
) -> PipelineProgress:
    """Advance the graph month by month and append rankings to the store.

    Months already present in the store are skipped (the graph is still
    advanced through them), so an interrupted run resumes from the last
    completed month.
    """
    if end < start:
        raise ValueError(f"pipeline range end {end} precedes start {start}")
    if store is None:
        store = SeriesStore.in_memory()
    builder = builder if builder is not None else GraphBuilder()
    cursor = cursor if cursor is not None else EventCursor()

    done = set(store.months)
    completed: List[Month] = []
    ranked = 0
    skipped = 0
    for month in month_range(start, end):
        snapshot = advance_to_month(builder, cursor, events, month)
        if month in done:
            skipped += 1
            continue
        if snapshot.node_count == 0:
            logger.info("month %s: empty graph, nothing to rank", month)
            continue
        vector, _, _ = pagerank_vector(snapshot, config)
        scores = {snapshot.names[i]: float(vector[i]) for i in range(snapshot.node_count)}
        ranks = rank_scores(scores)
        store.append_month(month, scores, ranks)
        completed.append(month)
        ranked += len(scores)
    return PipelineProgress(months_completed=completed, packages_ranked=ranked, skipped_existing=skipped)
