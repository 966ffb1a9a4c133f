#!/usr/bin/env python3
"""Regenerate the committed test fixtures under tests/data/.

Networks come from external generators/sources, never from this package:
the karate club graph ships with networkx, and the LFR benchmark graphs are
produced by networkx's generator.  Fixture files are committed so the test
suite never depends on generator availability or version drift; rerun this
script only to refresh them deliberately.
"""

from __future__ import annotations

import gzip
import sys
from pathlib import Path

import networkx as nx

DATA = Path(__file__).resolve().parent.parent / "tests" / "data"

# Zachary's karate club: the 18/16 faction assignment reported in the
# original 1977 study (labels are the conventional 1-based node ids).
# networkx's `club` attribute instead reflects the post-split membership
# with node 9 on Mr. Hi's side; the faction alignment is the usual ground
# truth for community evaluation, so that is what we commit.
KARATE_HI = {1, 2, 3, 4, 5, 6, 7, 8, 11, 12, 13, 14, 17, 18, 20, 22}


def write_karate() -> None:
    g = nx.karate_club_graph()
    edges = sorted((u + 1, v + 1) for u, v in g.edges())
    (DATA / "karate.edges").write_text(
        "# Zachary karate club, 34 nodes / 78 edges, 1-based labels\n"
        + "".join(f"{u} {v}\n" for u, v in edges)
    )
    lines = []
    for v in range(1, 35):
        side = "hi" if v in KARATE_HI else "officer"
        lines.append(f"{v}\t{side}\n")
    (DATA / "karate.truth").write_text("".join(lines))
    print(f"karate: 34 nodes, {len(edges)} edges, factions 16/18")


def lfr(n: int, mu: float, seed: int, *, avg_deg: float = 15.0,
        max_deg: int = 45, cmin: int = 10, cmax: int = 50) -> nx.Graph:
    """One LFR benchmark realization; retries nearby seeds on failure."""
    last: Exception | None = None
    for attempt in range(seed, seed + 40):
        try:
            g = nx.LFR_benchmark_graph(
                n=n, tau1=2.0, tau2=1.1, mu=mu,
                average_degree=avg_deg, max_degree=max_deg,
                min_community=cmin, max_community=cmax,
                seed=attempt, max_iters=500,
            )
            g.remove_edges_from(nx.selfloop_edges(g))
            print(f"  LFR n={n} mu={mu}: seed {attempt} converged")
            return g
        except (nx.ExceededMaxIterations, nx.NetworkXError) as exc:
            last = exc
    raise SystemExit(f"LFR generation failed for n={n}, mu={mu}: {last}")


def write_lfr(name: str, g: nx.Graph, *, compress: bool = False) -> None:
    communities = {frozenset(g.nodes[v]["community"]) for v in g}
    comm_id = {c: i + 1 for i, c in enumerate(sorted(communities, key=sorted))}
    edge_text = "".join(f"{u + 1} {v + 1}\n" for u, v in sorted(g.edges()))
    truth_text = "".join(
        f"{v + 1}\t{comm_id[frozenset(g.nodes[v]['community'])]}\n"
        for v in sorted(g)
    )
    if compress:
        (DATA / "lfr" / f"{name}.edges.gz").write_bytes(gzip.compress(edge_text.encode()))
        (DATA / "lfr" / f"{name}.truth.gz").write_bytes(gzip.compress(truth_text.encode()))
    else:
        (DATA / "lfr" / f"{name}.edges").write_text(edge_text)
        (DATA / "lfr" / f"{name}.truth").write_text(truth_text)
    sizes = sorted(len(c) for c in communities)
    print(f"{name}: {g.number_of_nodes()} nodes, {g.number_of_edges()} edges, "
          f"{len(communities)} communities (sizes {sizes[0]}..{sizes[-1]})")


def main() -> None:
    (DATA / "lfr").mkdir(parents=True, exist_ok=True)
    write_karate()
    write_lfr("lfr_n1000_mu01", lfr(1000, 0.1, seed=7))
    write_lfr("lfr_n1000_mu07", lfr(1000, 0.7, seed=7))
    write_lfr("lfr_n10000_mu02", lfr(10_000, 0.2, seed=11, cmax=100),
              compress=True)


if __name__ == "__main__":
    sys.exit(main())
