"""Undirected simple-graph container and community edge statistics.

Graphs are loaded from whitespace-separated edge lists with arbitrary string
node labels.  Internally every node is a dense integer index assigned in
first-appearance order, which keeps downstream arrays small and makes runs
reproducible byte for byte.
"""

from __future__ import annotations

import gzip
import io
import os
from dataclasses import dataclass
from functools import cached_property
from typing import IO, Iterable, Iterator

__all__ = [
    "GraphParseError",
    "Graph",
    "CommunityStats",
    "load_edge_list",
    "loads_edge_list",
    "clustering_coefficient",
    "community_stats",
    "stats_add_node",
    "stats_remove_node",
]

_COMMENT_PREFIXES = ("#", "%")


class GraphParseError(ValueError):
    """Malformed edge-list or membership input."""

    def __init__(self, message: str, line_no: int | None = None):
        if line_no is not None:
            message = f"line {line_no}: {message}"
        super().__init__(message)
        self.line_no = line_no


@dataclass(frozen=True)
class Graph:
    """Immutable undirected simple graph with string node labels.

    Attributes
    ----------
    adjacency : tuple of tuples
        Sorted neighbour indices per node.
    labels : tuple of str
        External label of each node index.
    edge_count : int
        Number of kept (simple, deduplicated) edges.
    loops_dropped, duplicates_dropped : int
        Input lines discarded while loading.  The stored graph is always
        simple; these counters only document what the source contained.
    """

    adjacency: tuple[tuple[int, ...], ...]
    labels: tuple[str, ...]
    edge_count: int
    loops_dropped: int = 0
    duplicates_dropped: int = 0

    @property
    def node_count(self) -> int:
        return len(self.labels)

    @property
    def total_degree(self) -> int:
        """Sum of all degrees, i.e. 2|E|."""
        return 2 * self.edge_count

    @cached_property
    def degrees(self) -> tuple[int, ...]:
        return tuple(len(nbrs) for nbrs in self.adjacency)

    @cached_property
    def label_index(self) -> dict[str, int]:
        return {lab: i for i, lab in enumerate(self.labels)}

    @cached_property
    def neighbor_sets(self) -> tuple[frozenset[int], ...]:
        return tuple(frozenset(nbrs) for nbrs in self.adjacency)

    def degree(self, v: int) -> int:
        self._check_node(v)
        return len(self.adjacency[v])

    def index_of(self, label: str) -> int:
        try:
            return self.label_index[label]
        except KeyError:
            raise ValueError(f"unknown node label {label!r}") from None

    def edges(self) -> Iterator[tuple[int, int]]:
        for u, nbrs in enumerate(self.adjacency):
            for v in nbrs:
                if u < v:
                    yield (u, v)

    def _check_node(self, v: int) -> None:
        if not 0 <= v < self.node_count:
            raise ValueError(f"node index {v} out of range [0, {self.node_count})")


def _open_text(source) -> IO[str]:
    """Open a path (optionally .gz) or pass through an existing text stream."""
    if hasattr(source, "read"):
        data = source.read()
        if isinstance(data, bytes):
            data = data.decode("utf-8")
        return io.StringIO(data)
    path = os.fspath(source)
    if path.endswith(".gz"):
        return io.TextIOWrapper(gzip.open(path, "rb"), encoding="utf-8")
    return open(path, "r", encoding="utf-8")


def load_edge_list(source) -> Graph:
    """Parse an edge list into a :class:`Graph`.

    Parameters
    ----------
    source : path-like or readable stream
        Lines hold exactly two whitespace-separated node labels.  Blank
        lines and lines starting with ``#`` or ``%`` are skipped.  Self
        loops and repeated edges are dropped (but counted).

    Raises
    ------
    GraphParseError
        On a malformed line (with its line number) or when no edge survives.
    """
    with _open_text(source) as fh:
        return _parse_edge_lines(fh)


def loads_edge_list(text: str) -> Graph:
    """Parse an edge list from a string (convenience wrapper)."""
    return _parse_edge_lines(io.StringIO(text))


def _parse_edge_lines(fh: Iterable[str]) -> Graph:
    index: dict[str, int] = {}
    labels: list[str] = []
    adjacency: list[list[int]] = []
    seen: set[tuple[int, int]] = set()
    loops = 0
    dups = 0

    def intern(label: str) -> int:
        idx = index.get(label)
        if idx is None:
            idx = len(labels)
            index[label] = idx
            labels.append(label)
            adjacency.append([])
        return idx

    for line_no, raw in enumerate(fh, start=1):
        line = raw.strip()
        if not line or line.startswith(_COMMENT_PREFIXES):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise GraphParseError(
                f"expected two node labels, got {len(parts)}: {line!r}", line_no
            )
        u = intern(parts[0])
        v = intern(parts[1])
        if u == v:
            loops += 1
            continue
        key = (u, v) if u < v else (v, u)
        if key in seen:
            dups += 1
            continue
        seen.add(key)
        adjacency[u].append(v)
        adjacency[v].append(u)

    if not seen:
        raise GraphParseError("edge list contains no usable edges")
    return Graph(
        adjacency=tuple(tuple(sorted(nbrs)) for nbrs in adjacency),
        labels=tuple(labels),
        edge_count=len(seen),
        loops_dropped=loops,
        duplicates_dropped=dups,
    )


def clustering_coefficient(g: Graph, v: int) -> float:
    """Fraction of a node's neighbour pairs that are themselves connected.

    Nodes with fewer than two neighbours have no neighbour pair and score 0.
    """
    g._check_node(v)
    nbrs = g.adjacency[v]
    k = len(nbrs)
    if k < 2:
        return 0.0
    nbr_set = g.neighbor_sets[v]
    linked = 0
    for u in nbrs:
        linked += len(g.neighbor_sets[u] & nbr_set)
    # every connected neighbour pair was counted from both ends
    return (linked // 2) / (k * (k - 1) // 2)


@dataclass(frozen=True)
class CommunityStats:
    """Edge statistics of a node set S.

    ``e_in`` counts edges with both ends in S, ``e_out`` edges with exactly
    one end in S.  The degree sum ``d_s = 2*e_in + e_out`` is derived, so it
    can never drift out of sync.
    """

    members: frozenset[int]
    e_in: int
    e_out: int

    @property
    def d_s(self) -> int:
        return 2 * self.e_in + self.e_out

    @property
    def size(self) -> int:
        return len(self.members)


def community_stats(g: Graph, members: Iterable[int]) -> CommunityStats:
    """Count internal and boundary edges of ``members`` by full recount."""
    mset = frozenset(members)
    for v in mset:
        g._check_node(v)
    e_in2 = 0
    d_s = 0
    for v in mset:
        d_s += len(g.adjacency[v])
        for u in g.adjacency[v]:
            if u in mset:
                e_in2 += 1
    e_in = e_in2 // 2
    return CommunityStats(members=mset, e_in=e_in, e_out=d_s - 2 * e_in)


def _links_into(g: Graph, members: frozenset[int], v: int) -> int:
    return sum(1 for u in g.adjacency[v] if u in members)


def stats_add_node(g: Graph, s: CommunityStats, v: int) -> CommunityStats:
    """Stats of ``s.members | {v}`` in O(deg v)."""
    g._check_node(v)
    if v in s.members:
        raise ValueError(f"node {v} is already a member")
    k = _links_into(g, s.members, v)
    return CommunityStats(
        members=s.members | {v},
        e_in=s.e_in + k,
        e_out=s.e_out - k + (len(g.adjacency[v]) - k),
    )


def stats_remove_node(g: Graph, s: CommunityStats, v: int) -> CommunityStats:
    """Stats of ``s.members - {v}`` in O(deg v)."""
    g._check_node(v)
    if v not in s.members:
        raise ValueError(f"node {v} is not a member")
    others = s.members - {v}
    k = _links_into(g, others, v)
    return CommunityStats(
        members=others,
        e_in=s.e_in - k,
        e_out=s.e_out + k - (len(g.adjacency[v]) - k),
    )
