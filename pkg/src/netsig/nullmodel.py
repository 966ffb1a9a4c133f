"""Ground truth for the significance bound: exhaustive and sampled pairings.

The null model keeps every node's degree and rewires uniformly at random:
each node contributes one labeled stub per incident edge, and the 2|E| stubs
are joined into |E| pairs.  Self-loops and multi-edges are legal outcomes.
This module enumerates every perfect matching for tiny graphs and samples
matchings for anything larger, so the closed-form p-value bound can be
checked against the real distribution.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, NamedTuple

import numpy as np

from .graph import Graph

__all__ = [
    "PairingOutcome",
    "MCPValue",
    "ENUMERATION_MAX_EDGES",
    "enumerate_pairing_outcomes",
    "exact_pvalue",
    "mc_pvalue",
]

ENUMERATION_MAX_EDGES = 8  # 15!! = 2,027,025 matchings; beyond this, sample.

# Histograms depend only on (edge count, number of marked stubs): relabeling
# stubs is a bijection on matchings that preserves the marked-pair count, so
# repeated calls with the same shape reuse the enumerated histogram.
_HISTOGRAM_CACHE: dict[tuple[int, int], tuple[int, ...]] = {}


class PairingOutcome(NamedTuple):
    """One bucket of the pairing histogram for a marked stub set."""

    internal_edges: int
    multiplicity: int


class MCPValue(NamedTuple):
    """Monte-Carlo estimate with its binomial standard error."""

    estimate: float
    stderr: float
    trials: int


def _marked_stub_count(g: Graph, s: Iterable[int]) -> int:
    members = set(s)
    for v in members:
        g._check_node(v)
    return sum(g.degree(v) for v in members)


def _enumerate_histogram(edge_count: int, marked: int) -> tuple[int, ...]:
    """Count matchings of 2*edge_count stubs by number of marked-marked pairs.

    Canonical recursion: the lowest unmatched stub is paired with each higher
    unmatched stub in turn, so every matching is visited exactly once.  Stubs
    0..marked-1 are the marked ones (any relabeling gives the same counts).
    """
    key = (edge_count, marked)
    cached = _HISTOGRAM_CACHE.get(key)
    if cached is not None:
        return cached
    total_stubs = 2 * edge_count
    hist = [0] * (edge_count + 1)

    def recurse(unmatched: list[int], internal: int) -> None:
        if not unmatched:
            hist[internal] += 1
            return
        first = unmatched[0]
        rest = unmatched[1:]
        for i, partner in enumerate(rest):
            both = internal + (1 if first < marked and partner < marked else 0)
            recurse(rest[:i] + rest[i + 1 :], both)

    recurse(list(range(total_stubs)), 0)
    result = tuple(hist)
    _HISTOGRAM_CACHE[key] = result
    return result


def enumerate_pairing_outcomes(g: Graph, s: Iterable[int]) -> tuple[PairingOutcome, ...]:
    """Exhaustive pairing histogram for the stubs of ``s`` inside ``g``.

    Returns one :class:`PairingOutcome` per internal-edge count that occurs;
    multiplicities sum to (2|E|-1)!!.
    """
    m = g.edge_count
    if m > ENUMERATION_MAX_EDGES:
        raise ValueError(
            f"graph has {m} edges, beyond the enumeration bound of "
            f"{ENUMERATION_MAX_EDGES}; use mc_pvalue instead"
        )
    hist = _enumerate_histogram(m, _marked_stub_count(g, s))
    return tuple(
        PairingOutcome(internal_edges=j, multiplicity=c)
        for j, c in enumerate(hist)
        if c
    )


def exact_pvalue(g: Graph, s: Iterable[int], e_in_threshold: int) -> Fraction:
    """Probability that a uniform pairing puts >= threshold edges inside s.

    Exact rational arithmetic over the full enumeration; only graphs with at
    most ``ENUMERATION_MAX_EDGES`` edges are accepted.
    """
    if e_in_threshold < 0:
        raise ValueError("e_in_threshold must be >= 0")
    outcomes = enumerate_pairing_outcomes(g, s)
    total = sum(o.multiplicity for o in outcomes)
    favorable = sum(o.multiplicity for o in outcomes if o.internal_edges >= e_in_threshold)
    return Fraction(favorable, total)


def mc_pvalue(
    g: Graph,
    s: Iterable[int],
    threshold: int,
    trials: int = 10_000,
    rng_seed: int = 0,
) -> MCPValue:
    """Estimate the tail probability by sampling uniform stub matchings.

    Each trial shuffles the 2|E| stubs and pairs consecutive entries, which
    is uniform over perfect matchings.  Returns the empirical frequency of
    {internal edges >= threshold} and its binomial standard error; the same
    seed always reproduces the same estimate.
    """
    if threshold < 0:
        raise ValueError("threshold must be >= 0")
    if trials < 1000:
        raise ValueError("trials must be >= 1000")
    marked = _marked_stub_count(g, s)
    total_stubs = 2 * g.edge_count
    is_marked = np.zeros(total_stubs, dtype=bool)
    is_marked[:marked] = True

    rng = np.random.default_rng(rng_seed)
    hits = 0
    remaining = trials
    batch_cap = max(1, min(trials, 1 << 14))
    template = np.arange(total_stubs, dtype=np.int32)
    while remaining:
        batch = min(batch_cap, remaining)
        perms = np.tile(template, (batch, 1))
        rng.permuted(perms, axis=1, out=perms)
        mask = is_marked[perms]
        internal = (mask[:, 0::2] & mask[:, 1::2]).sum(axis=1)
        hits += int((internal >= threshold).sum())
        remaining -= batch
    p_hat = hits / trials
    stderr = (p_hat * (1.0 - p_hat) / trials) ** 0.5
    return MCPValue(estimate=p_hat, stderr=stderr, trials=trials)
