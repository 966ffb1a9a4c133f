"""Agreement metrics between a detected cover and a ground-truth cover.

A cover is a set of communities over a fixed node universe; communities may
overlap and nodes may stay unassigned.  ONMI is entropy-based and judges the
whole universe.  The pair-counting metrics (Rand index, precision, recall,
F-measure) and purity follow the usual evaluation protocol for detectors
that may leave nodes unassigned: they are computed over the nodes that the
detected cover actually assigns somewhere (see :func:`evaluate_covers`),
while the plain functions below score whatever covers they are given, with
unassigned nodes acting as singletons.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np
from scipy.stats import rankdata

from .graph import GraphParseError, _open_text

__all__ = [
    "Cover",
    "PairConfusion",
    "MetricsReport",
    "onmi",
    "purity",
    "pair_confusion",
    "rand_index",
    "precision",
    "recall",
    "f_measure",
    "spearman",
    "evaluate_covers",
    "load_membership_file",
    "cover_from_memberships",
]


@dataclass(frozen=True)
class Cover:
    """Communities (index sets) over a universe of ``universe_size`` nodes."""

    communities: tuple[frozenset[int], ...]
    universe_size: int

    def __post_init__(self):
        if self.universe_size < 1:
            raise ValueError("universe_size must be >= 1")
        for c in self.communities:
            if not c:
                raise ValueError("communities must be non-empty")
            for v in c:
                if not 0 <= v < self.universe_size:
                    raise ValueError(f"node index {v} outside universe")

    @property
    def count(self) -> int:
        return len(self.communities)

    def covered_nodes(self) -> frozenset[int]:
        out: set[int] = set()
        for c in self.communities:
            out |= c
        return frozenset(out)

    def restrict(self, nodes: frozenset[int]) -> "Cover":
        """Re-index this cover onto the sub-universe ``nodes`` (sorted order).

        Communities that lose all members are dropped.
        """
        order = sorted(nodes)
        remap = {v: i for i, v in enumerate(order)}
        kept = []
        for c in self.communities:
            inside = frozenset(remap[v] for v in c if v in nodes)
            if inside:
                kept.append(inside)
        return Cover(tuple(kept), len(order))


# ---------------------------------------------------------------------------
# overlapping normalized mutual information
# ---------------------------------------------------------------------------

def _h(*probs: float) -> float:
    """Entropy (bits) of a probability vector; 0 log 0 = 0."""
    total = 0.0
    for p in probs:
        if p > 0.0:
            total -= p * math.log2(p)
    return total


def _normalized_conditional(xs: Sequence[frozenset[int]], ys: Sequence[frozenset[int]], n: int) -> float:
    """Average over X-communities of H(X_k | Y) / H(X_k).

    H(X_k | Y_l) = H(X_k, Y_l) - H(Y_l) on the binary membership variables;
    H(X_k | Y) takes the best (smallest) Y-community.  Communities whose
    marginal entropy is 0 contribute 0 by convention.
    """
    total = 0.0
    for a in xs:
        pa = len(a) / n
        hx = _h(pa, 1.0 - pa)
        if hx == 0.0:
            continue
        best = None
        for b in ys:
            n11 = len(a & b)
            n10 = len(a) - n11
            n01 = len(b) - n11
            n00 = n - n11 - n10 - n01
            pb = len(b) / n
            cond = _h(n11 / n, n10 / n, n01 / n, n00 / n) - _h(pb, 1.0 - pb)
            if best is None or cond < best:
                best = cond
        total += best / hx
    return total / len(xs)


def onmi(x: Cover, y: Cover) -> float:
    """Overlapping NMI between two covers on the same universe.

    1 - [H(X|Y)_norm + H(Y|X)_norm] / 2 with per-community normalisation.
    Returns 1.0 for identical covers.  If either cover has no communities
    there is nothing to compare against and the score is 0.0.
    """
    if x.universe_size != y.universe_size:
        raise ValueError("covers live on different universes")
    if not x.communities or not y.communities:
        return 0.0
    n = x.universe_size
    hxy = _normalized_conditional(x.communities, y.communities, n)
    hyx = _normalized_conditional(y.communities, x.communities, n)
    return 1.0 - (hxy + hyx) / 2.0


# ---------------------------------------------------------------------------
# purity and pair-counting metrics
# ---------------------------------------------------------------------------

def purity(det: Cover, truth: Cover) -> float:
    """(1/N) * sum over detected communities of their best truth overlap.

    Overlapping detected covers can push this above 1; the value is reported
    unclamped.  An empty detected cover scores 0.
    """
    if det.universe_size != truth.universe_size:
        raise ValueError("covers live on different universes")
    if not det.communities:
        return 0.0
    total = 0
    for c in det.communities:
        total += max((len(c & t) for t in truth.communities), default=0)
    return total / det.universe_size


@dataclass(frozen=True)
class PairConfusion:
    """Unordered node-pair counts: co-detected x co-labelled."""

    tp: int
    fp: int
    fn: int
    tn: int

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.fn + self.tn


def _membership_matrix(cover: Cover) -> np.ndarray:
    mat = np.zeros((cover.universe_size, len(cover.communities)), dtype=bool)
    for j, c in enumerate(cover.communities):
        mat[list(c), j] = True
    return mat


def pair_confusion(det: Cover, truth: Cover) -> PairConfusion:
    """Count all unordered node pairs by detected/truth co-membership.

    A pair is co-detected (resp. co-labelled) when some detected (resp.
    truth) community contains both nodes; nodes outside every community act
    as singletons and are never co-assigned.
    """
    if det.universe_size != truth.universe_size:
        raise ValueError("covers live on different universes")
    n = det.universe_size
    dm = _membership_matrix(det)
    tm = _membership_matrix(truth)
    tp = fp = fn = 0
    block = 1024
    for start in range(0, n, block):
        stop = min(start + block, n)
        co_det = (dm[start:stop] @ dm.T).astype(bool) if dm.shape[1] else np.zeros((stop - start, n), dtype=bool)
        co_tru = (tm[start:stop] @ tm.T).astype(bool) if tm.shape[1] else np.zeros((stop - start, n), dtype=bool)
        # strict upper triangle: columns j > global row index
        cols = np.arange(n)
        rows = np.arange(start, stop)[:, None]
        upper = cols[None, :] > rows
        both = co_det & co_tru & upper
        tp += int(both.sum())
        fp += int((co_det & ~co_tru & upper).sum())
        fn += int((~co_det & co_tru & upper).sum())
    total = n * (n - 1) // 2
    return PairConfusion(tp=tp, fp=fp, fn=fn, tn=total - tp - fp - fn)


def rand_index(pc: PairConfusion) -> float:
    if pc.total <= 0:
        raise ValueError("no node pairs to score")
    return (pc.tp + pc.tn) / pc.total


def precision(pc: PairConfusion) -> float:
    """TP / (TP + FP); 0 when nothing was co-detected."""
    denom = pc.tp + pc.fp
    return pc.tp / denom if denom else 0.0


def recall(pc: PairConfusion) -> float:
    """TP / (TP + FN); 0 when nothing is co-labelled."""
    denom = pc.tp + pc.fn
    return pc.tp / denom if denom else 0.0


def f_measure(pc: PairConfusion) -> float:
    """Harmonic mean of pair precision and recall (0 when both vanish)."""
    p = precision(pc)
    r = recall(pc)
    return 2.0 * p * r / (p + r) if p + r else 0.0


# ---------------------------------------------------------------------------
# rank correlation
# ---------------------------------------------------------------------------

def spearman(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Spearman rank correlation with average ranks for ties.

    Strictly co-monotone inputs return exactly +/-1.0 (their rank vectors
    are compared directly before any floating-point arithmetic).  Sequences
    shorter than 2 or with zero rank variance are rejected.
    """
    if len(xs) != len(ys):
        raise ValueError("sequences must have equal length")
    if len(xs) < 2:
        raise ValueError("need at least two observations")
    rx = rankdata(xs, method="average")
    ry = rankdata(ys, method="average")
    if np.all(rx == rx[0]) or np.all(ry == ry[0]):
        raise ValueError("zero rank variance: a sequence is constant")
    if np.array_equal(rx, ry):
        return 1.0
    if np.array_equal(rx, (len(xs) + 1.0) - ry):
        return -1.0
    dx = rx - rx.mean()
    dy = ry - ry.mean()
    return float(np.dot(dx, dy) / math.sqrt(np.dot(dx, dx) * np.dot(dy, dy)))


# ---------------------------------------------------------------------------
# membership files and whole-report evaluation
# ---------------------------------------------------------------------------

def load_membership_file(source) -> dict[str, tuple[str, ...]]:
    """Read ``node_label<TAB>community_id[,community_id...]`` lines.

    Returns an ordered mapping from node label to its community ids.  Lines
    starting with '#' or '%' and blank lines are skipped.
    """
    memberships: dict[str, tuple[str, ...]] = {}
    with _open_text(source) as fh:
        for line_no, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith(("#", "%")):
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                parts = line.split()
            if len(parts) != 2:
                raise GraphParseError(
                    f"expected 'node<TAB>communities', got {line!r}", line_no
                )
            label, ids = parts
            if label in memberships:
                raise GraphParseError(f"duplicate node label {label!r}", line_no)
            groups = tuple(tok for tok in ids.split(",") if tok)
            if not groups:
                raise GraphParseError(f"node {label!r} lists no community", line_no)
            memberships[label] = groups
    if not memberships:
        raise GraphParseError("membership file lists no nodes")
    return memberships


def cover_from_memberships(
    memberships: Mapping[str, Iterable[str]], label_order: Sequence[str]
) -> Cover:
    """Build a Cover over ``label_order`` (index = position in that list).

    Community ids keep their first-appearance order.  Labels in the mapping
    must all appear in ``label_order``.
    """
    index = {lab: i for i, lab in enumerate(label_order)}
    groups: dict[str, set[int]] = {}
    for label, ids in memberships.items():
        if label not in index:
            raise ValueError(f"node label {label!r} is not in the universe")
        for cid in ids:
            groups.setdefault(cid, set()).add(index[label])
    if not groups:
        raise ValueError("no communities given")
    return Cover(tuple(frozenset(s) for s in groups.values()), len(label_order))


@dataclass(frozen=True)
class MetricsReport:
    """Agreement summary between a detected cover and ground truth.

    ONMI is computed on the full universe.  Purity and the pair metrics are
    computed on the sub-universe of nodes the detected cover assigns to at
    least one community, so a detector is not penalised twice for nodes it
    deliberately leaves out (ONMI already accounts for them).
    """

    onmi: float
    purity: float
    rand_index: float
    precision: float
    recall: float
    f_measure: float
    detected_count: int
    truth_count: int
    covered_count: int
    universe_size: int


def evaluate_covers(det: Cover, truth: Cover) -> MetricsReport:
    if det.universe_size != truth.universe_size:
        raise ValueError("covers live on different universes")
    score_onmi = onmi(det, truth)
    covered = det.covered_nodes()
    if len(covered) >= 2:
        det_r = det.restrict(covered)
        truth_r = truth.restrict(covered)
        pur = purity(det_r, truth_r)
        pc = pair_confusion(det_r, truth_r)
        ri, p, r, f = rand_index(pc), precision(pc), recall(pc), f_measure(pc)
    elif len(covered) == 1:
        det_r = det.restrict(covered)
        truth_r = truth.restrict(covered)
        pur = purity(det_r, truth_r)
        ri = p = r = f = 0.0
    else:
        pur = ri = p = r = f = 0.0
    return MetricsReport(
        onmi=score_onmi,
        purity=pur,
        rand_index=ri,
        precision=p,
        recall=r,
        f_measure=f,
        detected_count=det.count,
        truth_count=truth.count,
        covered_count=len(covered),
        universe_size=det.universe_size,
    )
