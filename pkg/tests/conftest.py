"""Shared fixtures: toy graphs, dataset paths, hypothesis profile."""

from __future__ import annotations

import os
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from netsig import Graph, loads_edge_list

settings.register_profile(
    "suite",
    deadline=None,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "suite"))

DATA_DIR = Path(__file__).parent / "data"

# Nine nodes, fourteen edges: a 4-clique (nodes 1-4) attached through node 4
# to a looser 5-node block (nodes 4-8 plus 9).  Small enough to hand-check
# every statistic, rich enough that the two blocks behave differently.
TWO_BLOCK_TEXT = """\
1 2
1 3
1 4
2 3
2 4
3 4
4 5
4 6
5 6
5 7
6 8
7 8
7 9
8 9
"""

CLIQUE_LABELS = frozenset({"1", "2", "3", "4"})
LOOSE_LABELS = frozenset({"4", "5", "6", "7", "8"})

# clique block: e_in=6, e_out=2, d_s=14; loose block: e_in=6, e_out=5, d_s=17
CLIQUE_STATS = (6, 2, 14)
LOOSE_STATS = (6, 5, 17)


def label_set(g: Graph, labels) -> frozenset[int]:
    return frozenset(g.index_of(lab) for lab in labels)


@pytest.fixture(scope="session")
def two_block() -> Graph:
    return loads_edge_list(TWO_BLOCK_TEXT)


@pytest.fixture(scope="session")
def karate() -> Graph:
    from netsig import load_edge_list

    return load_edge_list(DATA_DIR / "karate.edges")


@pytest.fixture(scope="session")
def karate_paths() -> tuple[Path, Path]:
    return DATA_DIR / "karate.edges", DATA_DIR / "karate.truth"


@pytest.fixture(scope="session")
def two_block_file(tmp_path_factory) -> Path:
    path = tmp_path_factory.mktemp("graphs") / "two_block.edges"
    path.write_text(TWO_BLOCK_TEXT)
    return path


def lfr_paths(tag: str) -> tuple[Path, Path]:
    base = DATA_DIR / "lfr"
    for suffix in ("", ".gz"):
        edges = base / f"{tag}.edges{suffix}"
        truth = base / f"{tag}.truth{suffix}"
        if edges.exists() and truth.exists():
            return edges, truth
    raise FileNotFoundError(f"LFR fixture {tag!r} not found under {base}")
