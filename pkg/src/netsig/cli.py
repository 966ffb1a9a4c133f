"""Command-line interface: detect, score, evaluate, correlate, oracle.

Output goes to stdout as TSV (default) or JSON carrying the same values.
TSV documents start with ``# key<TAB>value`` summary lines, then a header
row, then one row per record; the JSON mirror is ``{"summary": {...},
"records": [...]}``.  Printed p-values are 6-significant-digit scientific
strings in both formats; the natural-log field is the authoritative number.

Exit codes: 0 success, 2 bad command line (argparse), 3 unreadable or
malformed input files, 4 violated domain preconditions.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import dataclass, field
from typing import Callable, IO, Sequence

from .detect import DetectionConfig, detect
from .graph import Graph, GraphParseError, community_stats, load_edge_list, _open_text
from .metrics import (
    Cover,
    cover_from_memberships,
    evaluate_covers,
    load_membership_file,
    spearman,
)
from .nullmodel import exact_pvalue, mc_pvalue
from .significance import (
    EXACT,
    STIRLING,
    LogFactorialTable,
    conductance,
    log_pvalue_bound,
    modularity_single,
    ratio_cut,
)

__all__ = ["RunConfig", "build_parser", "run", "main"]

EXIT_OK = 0
EXIT_USAGE = 2  # argparse's own code for bad flags
EXIT_DATA = 3
EXIT_PRECONDITION = 4

_DETECT_DEFAULTS = DetectionConfig()


@dataclass(frozen=True)
class RunConfig:
    """Everything one invocation needs; defaults mirror DetectionConfig."""

    command: str
    input: str
    detection: DetectionConfig = field(default_factory=DetectionConfig)
    factorial_mode: str = EXACT
    output_format: str = "tsv"
    rng_seed: int = 0
    truth: str | None = None
    members: tuple[str, ...] = ()
    threshold: int | None = None
    trials: int | None = None


@dataclass(frozen=True)
class Document:
    """One command's output: summary pairs plus uniform records."""

    summary: tuple[tuple[str, object], ...]
    fields: tuple[str, ...]
    records: tuple[tuple, ...]


# ---------------------------------------------------------------------------
# rendering
# ---------------------------------------------------------------------------

def _sci(x: float) -> str:
    """Scientific notation with 6 significant digits (p-value policy)."""
    return f"{x:.5e}"


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, (list, tuple)):
        return ",".join(str(v) for v in value)
    return str(value)


def _json_value(value):
    if isinstance(value, tuple):
        return list(value)
    return value


def emit_tsv(doc: Document, out: IO[str]) -> None:
    for key, value in doc.summary:
        out.write(f"# {key}\t{_cell(value)}\n")
    out.write("\t".join(doc.fields) + "\n")
    for record in doc.records:
        out.write("\t".join(_cell(v) for v in record) + "\n")


def emit_json(doc: Document, out: IO[str]) -> None:
    payload = {
        "summary": {k: _json_value(v) for k, v in doc.summary},
        "records": [
            {f: _json_value(v) for f, v in zip(doc.fields, record)}
            for record in doc.records
        ],
    }
    json.dump(payload, out, indent=2)
    out.write("\n")


def _label_key(label: str):
    """Sort numeric labels numerically, everything else lexically after."""
    try:
        return (0, int(label), label)
    except ValueError:
        return (1, 0, label)


def _resolve_labels(g: Graph, labels: Sequence[str]) -> list[int]:
    if not labels:
        raise ValueError("no member labels given")
    index = g.label_index
    unknown = [lab for lab in labels if lab not in index]
    if unknown:
        raise ValueError("unknown node labels: " + ", ".join(dict.fromkeys(unknown)))
    return [index[lab] for lab in dict.fromkeys(labels)]


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_detect(cfg: RunConfig) -> Document:
    g = load_edge_list(cfg.input)
    table = LogFactorialTable(2 * g.edge_count, cfg.factorial_mode)
    result = detect(g, cfg.detection, table=table)
    records = []
    sizes = []
    for i, c in enumerate(result.communities, start=1):
        stats = community_stats(g, c.members)
        labels = sorted((g.labels[v] for v in c.members), key=_label_key)
        merged = tuple(orig + 1 for orig in c.merged_from)
        sizes.append(c.size)
        records.append(
            (
                i,
                c.size,
                tuple(labels),
                stats.e_in,
                stats.e_out,
                stats.d_s,
                c.log_p,
                _sci(c.p_value()),
                merged,
            )
        )
    summary = (
        ("communities", len(records)),
        ("max_size", max(sizes) if sizes else 0),
        ("min_size", min(sizes) if sizes else 0),
    )
    fields = (
        "id", "size", "members", "e_in", "e_out", "d_s",
        "log_p", "p_value", "merged_from",
    )
    return Document(summary, fields, tuple(records))


def cmd_score(cfg: RunConfig) -> Document:
    g = load_edge_list(cfg.input)
    members = _resolve_labels(g, cfg.members)
    stats = community_stats(g, members)
    table = LogFactorialTable(2 * g.edge_count, cfg.factorial_mode)
    lp = log_pvalue_bound(table, stats.e_in, stats.d_s, g.edge_count)
    try:
        rc = ratio_cut(stats, g.node_count)
    except ValueError:  # the whole node set has no outside to cut to
        rc = None
    record = (
        stats.size,
        stats.e_in,
        stats.e_out,
        stats.d_s,
        lp.log_bound,
        _sci(lp.bound),
        conductance(stats, g.total_degree),
        rc,
        modularity_single(stats, g.edge_count),
    )
    fields = (
        "size", "e_in", "e_out", "d_s", "log_p", "p_value",
        "conductance", "ratio_cut", "modularity",
    )
    return Document((), fields, (record,))


def _load_detected_communities(path: str) -> list[list[str]]:
    """Member-label lists from a prior `detect` run (TSV or JSON)."""
    with _open_text(path) as fh:
        text = fh.read()
    stripped = text.lstrip()
    if stripped.startswith("{"):
        try:
            payload = json.loads(text)
            return [list(rec["members"]) for rec in payload["records"]]
        except (json.JSONDecodeError, KeyError, TypeError) as exc:
            raise GraphParseError(f"not a detection JSON document: {exc}") from exc
    rows = [line for line in text.splitlines() if line and not line.startswith("#")]
    if not rows:
        raise GraphParseError("detection output has no header row")
    header = rows[0].split("\t")
    if "members" not in header:
        raise GraphParseError("detection output lacks a 'members' column")
    col = header.index("members")
    out = []
    for row in rows[1:]:
        cells = row.split("\t")
        if len(cells) != len(header):
            raise GraphParseError(f"detection row has {len(cells)} cells, expected {len(header)}")
        out.append([tok for tok in cells[col].split(",") if tok])
    return out


def cmd_evaluate(cfg: RunConfig) -> Document:
    detected = _load_detected_communities(cfg.input)
    truth_map = load_membership_file(cfg.truth)
    labels = list(truth_map)
    index = {lab: i for i, lab in enumerate(labels)}
    stray = sorted(
        {lab for comm in detected for lab in comm if lab not in index},
        key=_label_key,
    )
    if stray:
        raise ValueError(
            "universe mismatch: detected communities name nodes absent from "
            "the truth file: " + ", ".join(stray)
        )
    det_cover = Cover(
        tuple(frozenset(index[lab] for lab in comm) for comm in detected),
        len(labels),
    )
    truth_cover = cover_from_memberships(truth_map, labels)
    report = evaluate_covers(det_cover, truth_cover)
    fields = (
        "onmi", "purity", "rand_index", "precision", "recall", "f_measure",
        "detected_count", "truth_count", "covered_count", "universe_size",
    )
    record = tuple(getattr(report, f) for f in fields)
    return Document((), fields, (record,))


def _truth_communities(g: Graph, truth_path: str) -> list[tuple[str, list[int]]]:
    """Ground-truth communities as (id, node-index list), file order."""
    memberships = load_membership_file(truth_path)
    unknown = [lab for lab in memberships if lab not in g.label_index]
    if unknown:
        raise ValueError(
            "truth file names nodes absent from the graph: " + ", ".join(unknown)
        )
    groups: dict[str, list[int]] = {}
    for lab, ids in memberships.items():
        for cid in ids:
            groups.setdefault(cid, []).append(g.index_of(lab))
    return list(groups.items())


def cmd_correlate(cfg: RunConfig) -> Document:
    g = load_edge_list(cfg.input)
    groups = _truth_communities(g, cfg.truth)
    if len(groups) < 2:
        raise ValueError("need at least 2 ground-truth communities to correlate")
    table = LogFactorialTable(2 * g.edge_count, cfg.factorial_mode)
    records = []
    logps, conds, rcs, mods = [], [], [], []
    for cid, members in groups:
        stats = community_stats(g, members)
        lp = log_pvalue_bound(table, stats.e_in, stats.d_s, g.edge_count)
        cond = conductance(stats, g.total_degree)
        rc = ratio_cut(stats, g.node_count)
        mod = modularity_single(stats, g.edge_count)
        logps.append(lp.log_bound)
        conds.append(cond)
        rcs.append(rc)
        mods.append(mod)
        records.append(
            (cid, stats.size, stats.e_in, stats.e_out, stats.d_s,
             lp.log_bound, cond, rc, mod)
        )
    summary = (
        ("communities", len(groups)),
        ("spearman_conductance", spearman(logps, conds)),
        ("spearman_ratio_cut", spearman(logps, rcs)),
        ("spearman_modularity", spearman(logps, mods)),
    )
    fields = (
        "community", "size", "e_in", "e_out", "d_s",
        "log_p", "conductance", "ratio_cut", "modularity",
    )
    return Document(summary, fields, tuple(records))


def cmd_oracle(cfg: RunConfig) -> Document:
    g = load_edge_list(cfg.input)
    members = _resolve_labels(g, cfg.members)
    stats = community_stats(g, members)
    threshold = stats.e_in if cfg.threshold is None else cfg.threshold
    table = LogFactorialTable(2 * g.edge_count, cfg.factorial_mode)
    lp = log_pvalue_bound(table, threshold, stats.d_s, g.edge_count)
    if cfg.trials is not None:
        mc = mc_pvalue(g, members, threshold, trials=cfg.trials, rng_seed=cfg.rng_seed)
        method, p, stderr, trials = "mc", mc.estimate, mc.stderr, mc.trials
        holds = p <= lp.bound + 4.0 * stderr + 1e-12
        verdict = "bound holds" if holds else "bound violated"
    else:
        exact = exact_pvalue(g, members, threshold)
        method, p, stderr, trials = "exact", float(exact), None, None
        tight = (
            stats.e_out == 0
            and threshold == stats.e_in
            and abs(p - lp.bound) <= 1e-9
        )
        holds = p <= lp.bound + 1e-12
        verdict = "bound tight" if tight else ("bound holds" if holds else "bound violated")
    record = (
        method,
        stats.size,
        stats.e_in,
        stats.e_out,
        stats.d_s,
        threshold,
        _sci(p),
        None if stderr is None else _sci(stderr),
        trials,
        lp.log_bound,
        _sci(lp.bound),
        verdict,
    )
    fields = (
        "method", "size", "e_in", "e_out", "d_s", "threshold",
        "p_value", "stderr", "trials", "log_bound", "bound", "verdict",
    )
    return Document((), fields, (record,))


_DISPATCH: dict[str, Callable[[RunConfig], Document]] = {
    "detect": cmd_detect,
    "score": cmd_score,
    "evaluate": cmd_evaluate,
    "correlate": cmd_correlate,
    "oracle": cmd_oracle,
}


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="netsig",
        description="Significance-based community detection and scoring "
        "under the configuration model.",
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    def common(p: argparse.ArgumentParser, input_help: str) -> None:
        p.add_argument("input", help=input_help)
        p.add_argument(
            "--format", dest="output_format", choices=("tsv", "json"),
            default="tsv", help="output format (default: tsv)",
        )

    def combinatorics(p: argparse.ArgumentParser) -> None:
        p.add_argument(
            "--factorial-mode", choices=(EXACT, STIRLING), default=EXACT,
            help="ln-factorial backend for the p-value bound (default: exact)",
        )

    p_detect = sub.add_parser("detect", help="find significant communities")
    common(p_detect, "edge-list file (node<whitespace>node per line; .gz ok)")
    combinatorics(p_detect)
    p_detect.add_argument("--alpha", type=float, default=_DETECT_DEFAULTS.alpha,
                          help="significance level (default: %(default)s)")
    p_detect.add_argument("--overlap-threshold", type=float,
                          default=_DETECT_DEFAULTS.overlap_threshold,
                          help="merge when |A&B|/min exceeds this (default: %(default)s)")
    p_detect.add_argument("--logp-delta", type=float,
                          default=_DETECT_DEFAULTS.logp_delta,
                          help="minimum log-p improvement per move (default: %(default)s)")
    p_detect.add_argument("--min-size", type=int, default=_DETECT_DEFAULTS.min_size,
                          help="smallest reportable community (default: %(default)s)")
    p_detect.add_argument("--seed-min-degree", type=int,
                          default=_DETECT_DEFAULTS.seed_min_degree,
                          help="degree floor for seed nodes (default: %(default)s)")

    p_score = sub.add_parser("score", help="score one node set")
    common(p_score, "edge-list file")
    combinatorics(p_score)
    p_score.add_argument("--members", required=True,
                         help="comma-separated node labels")

    p_eval = sub.add_parser("evaluate", help="compare detection output to ground truth")
    common(p_eval, "detection output from `netsig detect` (TSV or JSON)")
    p_eval.add_argument("--truth", required=True,
                        help="truth file: node<TAB>community[,community...]")

    p_corr = sub.add_parser("correlate",
                            help="rank-correlate the p-bound with classic scores "
                                 "over the true communities")
    common(p_corr, "edge-list file")
    combinatorics(p_corr)
    p_corr.add_argument("--truth", required=True,
                        help="truth file: node<TAB>community[,community...]")

    p_oracle = sub.add_parser("oracle",
                              help="check the p-value bound against enumeration "
                                   "or Monte-Carlo sampling")
    common(p_oracle, "edge-list file")
    combinatorics(p_oracle)
    p_oracle.add_argument("--members", required=True,
                          help="comma-separated node labels")
    p_oracle.add_argument("--threshold", type=int, default=None,
                          help="internal-edge threshold (default: the set's e_in)")
    p_oracle.add_argument("--trials", type=int, default=None,
                          help="sample this many matchings instead of enumerating")
    p_oracle.add_argument("--seed", dest="rng_seed", type=int, default=0,
                          help="sampling seed (default: %(default)s)")
    return parser


def _run_config(args: argparse.Namespace) -> RunConfig:
    detection = DetectionConfig(
        alpha=getattr(args, "alpha", _DETECT_DEFAULTS.alpha),
        overlap_threshold=getattr(args, "overlap_threshold",
                                  _DETECT_DEFAULTS.overlap_threshold),
        logp_delta=getattr(args, "logp_delta", _DETECT_DEFAULTS.logp_delta),
        min_size=getattr(args, "min_size", _DETECT_DEFAULTS.min_size),
        seed_min_degree=getattr(args, "seed_min_degree",
                                _DETECT_DEFAULTS.seed_min_degree),
    )
    members = getattr(args, "members", None)
    return RunConfig(
        command=args.command,
        input=args.input,
        detection=detection,
        factorial_mode=getattr(args, "factorial_mode", EXACT),
        output_format=args.output_format,
        rng_seed=getattr(args, "rng_seed", 0),
        truth=getattr(args, "truth", None),
        members=tuple(tok for tok in members.split(",") if tok) if members else (),
        threshold=getattr(args, "threshold", None),
        trials=getattr(args, "trials", None),
    )


def run(argv: Sequence[str], out: IO[str] | None = None) -> int:
    """Parse ``argv``, run the command, write the document; returns exit code."""
    if out is None:
        out = sys.stdout
    args = build_parser().parse_args(argv)
    try:
        cfg = _run_config(args)
        doc = _DISPATCH[cfg.command](cfg)
    except GraphParseError as exc:
        print(f"netsig: {exc}", file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        print(f"netsig: {exc}", file=sys.stderr)
        return EXIT_DATA
    except ValueError as exc:
        print(f"netsig: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    if cfg.output_format == "json":
        emit_json(doc, out)
    else:
        emit_tsv(doc, out)
    return EXIT_OK


def main() -> None:
    logging.basicConfig(format="%(levelname)s %(name)s: %(message)s")
    try:
        code = run(sys.argv[1:])
        sys.stdout.flush()
    except BrokenPipeError:
        # the downstream consumer (e.g. `netsig detect g | head`) closed the
        # pipe; point stdout at devnull so interpreter shutdown cannot raise
        # while flushing, and exit with the conventional SIGPIPE status
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        code = 128 + 13
    raise SystemExit(code)


if __name__ == "__main__":
    main()
