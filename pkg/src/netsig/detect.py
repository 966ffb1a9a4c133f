"""Community detection by significance-driven local search.

Pipeline: pick the unprocessed node with the highest clustering coefficient
(degree >= 3 by default), take it together with its neighbours as the
starting set, then greedily apply the single-node addition or removal that
most lowers the community's log p-value bound.  A community is kept when it
is large enough and significant at level alpha; detected communities that
overlap heavily are merged afterwards.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .graph import Graph, CommunityStats, clustering_coefficient, community_stats
from .significance import (
    EXACT,
    LogFactorialTable,
    log_binomial,
    log_pvalue_bound,
)

__all__ = [
    "DetectionConfig",
    "DetectedCommunity",
    "DetectionResult",
    "select_seed",
    "search_one_community",
    "merge_redundant",
    "detect",
]

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DetectionConfig:
    """Tunables of the detection pipeline.

    ``logp_delta`` is in natural-log units: a move must improve the log
    bound by at least this much to be applied, which stops the search once
    refinements become marginal.  ``max_iterations`` limits moves per local
    search and defaults to 10 * |V| when unset.
    """

    alpha: float = 0.01
    overlap_threshold: float = 0.7
    logp_delta: float = 5.0
    min_size: int = 3
    seed_min_degree: int = 3
    max_iterations: int | None = None

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise ValueError("alpha must be in (0, 1)")
        if not 0.0 <= self.overlap_threshold <= 1.0:
            raise ValueError("overlap_threshold must be in [0, 1]")
        if self.logp_delta < 0.0:
            raise ValueError("logp_delta must be >= 0")
        if self.min_size < 1:
            raise ValueError("min_size must be >= 1")
        if self.seed_min_degree < 0:
            raise ValueError("seed_min_degree must be >= 0")
        if self.max_iterations is not None and self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1 when given")

    def resolved_max_iterations(self, node_count: int) -> int:
        return self.max_iterations if self.max_iterations is not None else 10 * node_count


@dataclass(frozen=True)
class DetectedCommunity:
    """One detected community with its log p-value bound.

    ``merged_from`` lists the pre-merge community ids (detection order) when
    this entry is the union of overlapping detections, and is empty
    otherwise.  ``iterations`` counts applied local-search moves.
    """

    members: frozenset[int]
    log_p: float
    seed: int
    iterations: int
    merged_from: tuple[int, ...] = ()

    @property
    def size(self) -> int:
        return len(self.members)

    def p_value(self) -> float:
        return math.exp(self.log_p)


@dataclass(frozen=True)
class DetectionResult:
    communities: tuple[DetectedCommunity, ...]
    rejected_seeds: int = 0
    hit_iteration_cap: int = 0

    @property
    def covered_nodes(self) -> frozenset[int]:
        out: set[int] = set()
        for c in self.communities:
            out |= c.members
        return frozenset(out)


def select_seed(g: Graph, node_list: Iterable[int], cfg: DetectionConfig) -> int | None:
    """Highest-clustering-coefficient node of ``node_list``.

    Nodes below ``seed_min_degree`` never qualify (a node with only two
    neighbours always has a trivial neighbourhood).  Ties break by higher
    degree, then lower index; returns None when nothing qualifies.
    """
    best = None
    best_key = None
    for v in node_list:
        g._check_node(v)
        if len(g.adjacency[v]) < cfg.seed_min_degree:
            continue
        key = (clustering_coefficient(g, v), len(g.adjacency[v]), -v)
        if best_key is None or key > best_key:
            best_key = key
            best = v
    return best


class _BoundEvaluator:
    """Clamped log p-value bound with per-graph precomputation.

    Only the C(d_s, 2e) factor depends on both arguments; the two factors
    that depend on e alone are folded into one lookup so every candidate
    move costs a few list indexings.
    """

    __slots__ = ("lf", "shared", "m")

    def __init__(self, g: Graph, table: LogFactorialTable):
        m = g.edge_count
        self.m = m
        self.lf = table.values_list(2 * m)
        self.shared = [
            log_binomial(table, m, e) - log_binomial(table, 2 * m, 2 * e)
            for e in range(m + 1)
        ]

    def __call__(self, e_in: int, d_s: int) -> float:
        lf = self.lf
        raw = lf[d_s] - lf[2 * e_in] - lf[d_s - 2 * e_in] + self.shared[e_in]
        return raw if raw < 0.0 else 0.0


def _search(
    g: Graph,
    seed_set: Iterable[int],
    cfg: DetectionConfig,
    evaluator: _BoundEvaluator,
    seed_node: int | None,
):
    """Greedy descent core; returns (community, trajectory, hit_cap)."""
    members = set(seed_set)
    if not members:
        raise ValueError("seed set must not be empty")
    for v in members:
        g._check_node(v)

    adjacency = g.adjacency
    degrees = g.degrees
    links = [0] * g.node_count
    d_s = 0
    for v in members:
        d_s += degrees[v]
        for u in adjacency[v]:
            links[u] += 1
    e_in = sum(links[v] for v in members) // 2
    frontier = {
        u for v in members for u in adjacency[v] if u not in members
    }

    current = evaluator(e_in, d_s)
    trajectory = [current]
    visited = {frozenset(members)}
    cap = cfg.resolved_max_iterations(g.node_count)
    delta = cfg.logp_delta
    moves = 0
    hit_cap = False

    while True:
        if moves >= cap:
            hit_cap = True
            logger.warning(
                "local search hit the iteration cap (%d moves, seed %s)", moves, seed_node
            )
            break
        # pick the best single-node move; key order encodes the tie-breaks:
        # smallest log-p, additions before removals, lowest node index
        best_key = None
        for v in members:
            lp = evaluator(e_in - links[v], d_s - degrees[v])
            key = (lp, 1, v)
            if best_key is None or key < best_key:
                best_key = key
        for u in frontier:
            lp = evaluator(e_in + links[u], d_s + degrees[u])
            key = (lp, 0, u)
            if best_key is None or key < best_key:
                best_key = key

        best_lp, move_kind, node = best_key
        if not best_lp < current:
            break
        if current - best_lp < delta:
            break

        if move_kind == 0:  # addition
            members.add(node)
            frontier.discard(node)
            d_s += degrees[node]
            e_in += links[node]
            for u in adjacency[node]:
                links[u] += 1
                if u not in members:
                    frontier.add(u)
        else:  # removal
            members.remove(node)
            d_s -= degrees[node]
            e_in -= links[node]
            for u in adjacency[node]:
                links[u] -= 1
                if links[u] == 0 and u not in members:
                    frontier.discard(u)
            if links[node] > 0:
                frontier.add(node)

        assert best_lp < current, "p-value descent must be strict"
        current = best_lp
        snapshot = frozenset(members)
        assert snapshot not in visited, "local search revisited a node set"
        visited.add(snapshot)
        trajectory.append(current)
        moves += 1

    community = DetectedCommunity(
        members=frozenset(members),
        log_p=current,
        seed=seed_node if seed_node is not None else min(members),
        iterations=moves,
    )
    return community, trajectory, hit_cap


def search_one_community(
    g: Graph,
    seed_set: Iterable[int],
    cfg: DetectionConfig,
    *,
    table: LogFactorialTable | None = None,
    seed_node: int | None = None,
) -> DetectedCommunity:
    """Run the greedy log-p descent from ``seed_set`` until it stalls.

    Each step considers removing any member and adding any non-member with a
    neighbour in the current set, and applies the move with the strictly
    smallest resulting log bound, provided the improvement reaches
    ``cfg.logp_delta``.
    """
    if table is None:
        table = LogFactorialTable(2 * g.edge_count)
    community, _, _ = _search(g, seed_set, cfg, _BoundEvaluator(g, table), seed_node)
    return community


def merge_redundant(
    communities: Sequence[DetectedCommunity],
    g: Graph,
    cfg: DetectionConfig,
    *,
    table: LogFactorialTable | None = None,
) -> tuple[DetectedCommunity, ...]:
    """Union communities whose overlap ratio exceeds ``overlap_threshold``.

    The ratio is |A & B| / min(|A|, |B|).  Merging repeats until no pair
    qualifies, so chains collapse transitively; each union's log bound is
    recomputed from a fresh edge recount and kept even when it is no longer
    significant (the caller can flag that).
    """
    if table is None:
        table = LogFactorialTable(2 * g.edge_count)
    work = [
        (c, (i,) if not c.merged_from else c.merged_from)
        for i, c in enumerate(communities)
    ]
    while True:
        best_ratio = -1.0
        best_pair = None
        for i in range(len(work)):
            a = work[i][0].members
            for j in range(i + 1, len(work)):
                b = work[j][0].members
                ratio = len(a & b) / min(len(a), len(b))
                if ratio > best_ratio:
                    best_ratio = ratio
                    best_pair = (i, j)
        if best_pair is None or best_ratio <= cfg.overlap_threshold:
            break
        i, j = best_pair
        (ca, ids_a), (cb, ids_b) = work[i], work[j]
        union = ca.members | cb.members
        stats = community_stats(g, union)
        log_p = log_pvalue_bound(table, stats.e_in, stats.d_s, g.edge_count).log_bound
        merged = DetectedCommunity(
            members=union,
            log_p=log_p,
            seed=ca.seed,
            iterations=ca.iterations + cb.iterations,
            merged_from=tuple(sorted(ids_a + ids_b)),
        )
        work[i] = (merged, merged.merged_from)
        del work[j]
    return tuple(c for c, _ in work)


def detect(
    g: Graph,
    cfg: DetectionConfig | None = None,
    *,
    table: LogFactorialTable | None = None,
) -> DetectionResult:
    """Detect all significant communities of ``g``.

    Seeds are consumed from a worklist initially holding every node: an
    accepted community removes its members, a rejected one only its seed.
    The detected cover may overlap and may leave nodes unassigned.
    """
    if cfg is None:
        cfg = DetectionConfig()
    if table is None:
        table = LogFactorialTable(2 * g.edge_count)
    evaluator = _BoundEvaluator(g, table)
    n = g.node_count

    # precompute the seed ranking once; the worklist only ever shrinks, so
    # walking a static ranking is equivalent to re-selecting each round
    ranking = sorted(
        (v for v in range(n) if len(g.adjacency[v]) >= cfg.seed_min_degree),
        key=lambda v: (-clustering_coefficient(g, v), -len(g.adjacency[v]), v),
    )
    in_list = bytearray([1]) * n

    accepted: list[DetectedCommunity] = []
    rejected = 0
    capped = 0
    for seed in ranking:
        if not in_list[seed]:
            continue
        seed_set = {seed, *g.adjacency[seed]}
        community, _, hit_cap = _search(g, seed_set, cfg, evaluator, seed)
        capped += hit_cap
        if community.size >= cfg.min_size and community.p_value() < cfg.alpha:
            accepted.append(community)
            for v in community.members:
                in_list[v] = 0
        else:
            rejected += 1
            in_list[seed] = 0

    merged = merge_redundant(accepted, g, cfg, table=table)
    return DetectionResult(
        communities=merged, rejected_seeds=rejected, hit_iteration_cap=capped
    )
