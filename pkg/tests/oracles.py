"""Independent reference implementations used to cross-check the package.

Everything in this module is deliberately written with a different strategy
than the production code: exact rational arithmetic instead of log-space
floats, a different pairing recursion (highest unmatched stub first instead
of lowest), literal entropy formulas with explicit 2x2 joint tables, and an
O(N^2) membership double loop for pair counting.  Slow and obvious beats
fast and clever here.
"""

from __future__ import annotations

import functools
import math
from fractions import Fraction
from typing import Sequence


# ---------------------------------------------------------------------------
# p-value bound and exact tail probabilities
# ---------------------------------------------------------------------------

def bound_fraction(e_in: int, d_s: int, m: int) -> Fraction:
    """C(d_s, 2*e_in) * C(m, e_in) / C(2m, 2*e_in), clamped at 1, exactly."""
    raw = Fraction(math.comb(d_s, 2 * e_in) * math.comb(m, e_in), math.comb(2 * m, 2 * e_in))
    return min(raw, Fraction(1))


def double_factorial_odd(m: int) -> int:
    """(2m - 1)!! — the number of perfect pairings of 2m labelled stubs."""
    return math.prod(range(1, 2 * m, 2)) if m > 0 else 1


@functools.lru_cache(maxsize=None)
def pairing_histogram(edge_count: int, marked: int) -> dict[int, int]:
    """Pairings of 2*edge_count stubs keyed by internal-pair count.

    Stubs 0 .. marked-1 are the marked ones; a pair is internal when both
    stubs are marked.  Unlike the production enumerator this recursion picks
    the HIGHEST unmatched stub and tries every lower partner, so a shared
    bug would have to be shared arithmetic, not shared traversal order.
    Cached per shape (callers must not mutate the returned dict).
    """
    total = 2 * edge_count
    if not 0 <= marked <= total:
        raise ValueError("marked stub count out of range")
    hist: dict[int, int] = {}

    def recurse(unmatched: frozenset[int], internal: int) -> None:
        if not unmatched:
            hist[internal] = hist.get(internal, 0) + 1
            return
        hi = max(unmatched)
        rest = unmatched - {hi}
        for lo in rest:
            recurse(rest - {lo}, internal + (1 if hi < marked and lo < marked else 0))

    recurse(frozenset(range(total)), 0)
    return hist


def tail_fraction(edge_count: int, marked: int, threshold: int) -> Fraction:
    """P[internal pair count >= threshold] under uniform stub pairing."""
    hist = pairing_histogram(edge_count, marked)
    favourable = sum(count for k, count in hist.items() if k >= threshold)
    return Fraction(favourable, double_factorial_odd(edge_count))


# ---------------------------------------------------------------------------
# overlapping NMI, transcribed term by term
# ---------------------------------------------------------------------------

def _h(p: float) -> float:
    """Entropy contribution -p*log2(p), with the 0*log(0) = 0 convention."""
    return 0.0 if p <= 0.0 else -p * math.log2(p)


def _membership_entropy(size: int, n: int) -> float:
    p = size / n
    return _h(p) + _h(1.0 - p)


def _conditional_given_one(xk: frozenset[int], yl: frozenset[int], n: int) -> float:
    """H(X_k | Y_l) = H(X_k, Y_l) - H(Y_l) from the explicit 2x2 joint table."""
    both = len(xk & yl)
    only_x = len(xk) - both
    only_y = len(yl) - both
    neither = n - both - only_x - only_y
    joint = _h(both / n) + _h(only_x / n) + _h(only_y / n) + _h(neither / n)
    return joint - _membership_entropy(len(yl), n)


def _normalized_conditional(xs: Sequence[frozenset[int]], ys: Sequence[frozenset[int]], n: int) -> float:
    """H(X|Y) normalized: average over k of min_l H(X_k|Y_l) / H(X_k)."""
    terms = []
    for xk in xs:
        hxk = _membership_entropy(len(xk), n)
        if hxk == 0.0:
            terms.append(0.0)
            continue
        hxk_given_y = min(_conditional_given_one(xk, yl, n) for yl in ys)
        terms.append(hxk_given_y / hxk)
    return sum(terms) / len(terms)


def onmi_reference(xs: Sequence[frozenset[int]], ys: Sequence[frozenset[int]], n: int) -> float:
    """ONMI(X, Y) = 1 - [H(X|Y)_norm + H(Y|X)_norm] / 2 over covers of 0..n-1."""
    if not xs or not ys:
        return 0.0
    return 1.0 - 0.5 * (_normalized_conditional(xs, ys, n) + _normalized_conditional(ys, xs, n))


# ---------------------------------------------------------------------------
# pair-counting confusion by brute force
# ---------------------------------------------------------------------------

def pair_counts_reference(
    det: Sequence[frozenset[int]], truth: Sequence[frozenset[int]], n: int
) -> tuple[int, int, int, int]:
    """(tp, fp, fn, tn) over all node pairs; co-membership means sharing
    at least one community, so uncovered nodes behave as singletons."""

    def together(cover: Sequence[frozenset[int]], u: int, v: int) -> bool:
        return any(u in c and v in c for c in cover)

    tp = fp = fn = tn = 0
    for u in range(n):
        for v in range(u + 1, n):
            d = together(det, u, v)
            t = together(truth, u, v)
            if d and t:
                tp += 1
            elif d:
                fp += 1
            elif t:
                fn += 1
            else:
                tn += 1
    return tp, fp, fn, tn


# ---------------------------------------------------------------------------
# random-instance helpers shared by several test modules
# ---------------------------------------------------------------------------

def random_connected_edges(rng, node_count: int, extra_edges: int) -> list[tuple[int, int]]:
    """A random connected simple graph: random spanning tree plus extras."""
    nodes = list(range(node_count))
    rng.shuffle(nodes)
    edges = set()
    for i in range(1, node_count):
        u = nodes[rng.randrange(i)]
        v = nodes[i]
        edges.add((min(u, v), max(u, v)))
    candidates = [
        (u, v)
        for u in range(node_count)
        for v in range(u + 1, node_count)
        if (u, v) not in edges
    ]
    rng.shuffle(candidates)
    edges.update(candidates[:extra_edges])
    return sorted(edges)


def edges_to_text(edges: Sequence[tuple[int, int]], offset: int = 1) -> str:
    """Serialize index pairs as an edge-list document with 1-based labels."""
    return "".join(f"{u + offset} {v + offset}\n" for u, v in edges)


def random_cover(rng, n: int, max_communities: int = 5) -> list[frozenset[int]]:
    """Random cover of 0..n-1: overlapping communities of size 1..n-1.

    Sizes stay strictly below n so every community has nonzero membership
    entropy (the degenerate full-universe case is exercised separately).
    """
    count = rng.randrange(1, max_communities + 1)
    out = []
    for _ in range(count):
        size = rng.randrange(1, n)
        out.append(frozenset(rng.sample(range(n), size)))
    return out


# Exact rank correlation on small inputs, to double-check the production
# Spearman against something other than scipy.
def spearman_reference(xs: Sequence[float], ys: Sequence[float]) -> float:
    def ranks(values: Sequence[float]) -> list[Fraction]:
        order = sorted(range(len(values)), key=lambda i: values[i])
        out: list[Fraction] = [Fraction(0)] * len(values)
        i = 0
        while i < len(order):
            j = i
            while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
                j += 1
            mean_rank = Fraction(i + j + 2, 2)  # ranks are 1-based
            for k in range(i, j + 1):
                out[order[k]] = mean_rank
            i = j + 1
        return out

    rx, ry = ranks(xs), ranks(ys)
    n = len(rx)
    mx = sum(rx) / n
    my = sum(ry) / n
    cov = sum((a - mx) * (b - my) for a, b in zip(rx, ry))
    vx = sum((a - mx) ** 2 for a in rx)
    vy = sum((b - my) ** 2 for b in ry)
    if vx == 0 or vy == 0:
        raise ValueError("constant ranks")
    return float(cov / math.sqrt(vx * vy))
