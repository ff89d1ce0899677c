# -*- coding: utf-8 -*-
"""
Command Line
============

Batch runs of the whole analysis, one subcommand per stage:

===========  ==================================================  ==============================================================
Subcommand   Input                                               Output (in ``--out``)
===========  ==================================================  ==============================================================
fetch        RPC endpoint and block range                        ``raw_logs.jsonl``
parse        raw logs (file or RPC)                              ``transfers.csv``
graph        transfers                                           ``ncg.csv``, ``ntg.csv``, ``nhg.csv``, ``graphs.json``,
                                                                 ``quarterly_counts.csv``
stats        transfers or an NTG edge list                       ``metrics.json``
indicators   transfers, transaction values, labels, texts        ``series_indicators.csv``, ``nft_indicators.csv``,
                                                                 ``quarterly_volume.csv``, ``categories.json``,
                                                                 ``terms.csv``
detect       indicator tables, or transfers and values           ``detection.json``
gen          seed and market parameters                          ``transfers.csv``, ``tx_values.csv``, ``labels.csv``,
                                                                 ``wash_labels.csv``, ``ground_truth.json``, ``raw_logs.jsonl``
compare      NFT indicators (or transfers and values), labels    ``comparison.json``
===========  ==================================================  ==============================================================

Options may also be given in a TOML file passed with ``--config``:

.. code:: toml

    [input]
    transfers = "out/transfers.csv"
    tx_values = "data/tx_values.csv"

    [rpc]
    endpoint = "http://localhost:8545"
    from_block = 14000000
    to_block = 14099999
    chunk = 1000

    [detection]
    gate_mode = "either"
    n1 = 1.5

    [gen]
    n_series = 8
    wash_rings = [{ring_size = 3, nft_count = 2}]

    [run]
    out = "out"
    jobs = 4
    seed = 42

Command-line flags win over the file. Exit codes are 0 on success, 1 on
input and processing errors, and 2 on configuration errors.

"""

import argparse
import logging
import os
import sys
from dataclasses import dataclass, field, fields
from typing import List, Optional, Sequence

import toml

from .common.constants import STOPWORDS
from .common.exceptions import ConfigError, GraphError, NFTGraphError
from .common.records import TransferRecord
from .detection.bubbles import GateMode, Thresholds, detect_tables, detection_report
from .detection.compare import compare_labeled
from .graphs import CreateGraph, HoldGraph, TransferGraph, Role, load_edges_csv, quarterly_counts
from .indicators import (attach_values, category_summaries, compute_indicators, load_nft_indicators,
    load_series_indicators, quarterly_volume, write_nft_indicators, write_quarterly_volume, write_series_indicators)
from .ingest.decoders import LogParser
from .ingest.rpc import fetch_logs_rpc
from .ingest.texts import term_frequency
from .synthgen.generator import MarketSpec, generate, to_raw_logs
from .utils import io
from .utils.metrics import (clustering_coefficient, degree_assortativity, pagerank, pagerank_top, reciprocity, scc,
    top_nodes, wcc)
from .utils.powerlaw import degree_distribution, degree_summary, fit_power_law

logger = logging.getLogger(__name__)

COMMANDS = ("fetch", "parse", "graph", "stats", "indicators", "detect", "gen", "compare")
INPUT_KEYS = ("logs", "transfers", "tx_values", "labels", "texts", "wash_labels", "edges", "series_indicators", "nft_indicators")
RPC_KEYS = {"endpoint": "rpc", "from_block": "from_block", "to_block": "to_block", "chunk": "chunk"}
RUN_KEYS = ("out", "strict", "jobs", "seed")
THRESHOLD_KEYS = ("n1", "n2", "n3", "n4", "n5", "n6")

@dataclass
class RunConfig:
    """
    Merged configuration of a run.

    Values come from the TOML file, then from the command-line flags, which
    win. :meth:`validate` checks the result for a subcommand.
    """
    command: str
    logs: Optional[str] = None
    transfers: Optional[str] = None
    tx_values: Optional[str] = None
    labels: Optional[str] = None
    texts: Optional[str] = None
    wash_labels: Optional[str] = None
    edges: Optional[str] = None
    series_indicators: Optional[str] = None
    nft_indicators: Optional[str] = None
    rpc: Optional[str] = None
    from_block: Optional[int] = None
    to_block: Optional[int] = None
    chunk: int = 1000
    out: str = "out"
    strict: bool = False
    jobs: int = 1
    seed: Optional[int] = None
    thresholds: Thresholds = field(default_factory=Thresholds)
    gate_mode: GateMode = GateMode.EITHER
    gen: dict = field(default_factory=dict)
    raw_logs: bool = False

    @property
    def sources(self) -> List[str]:
        """Transfer sources given: log file, transfers file, RPC range."""
        found = []
        if self.logs:
            found.append("logs")
        if self.transfers:
            found.append("transfers")
        if self.rpc or self.from_block is not None or self.to_block is not None:
            found.append("rpc")
        return found

    def validate(self) -> "RunConfig":
        """
        Check the configuration for its subcommand.

        Raises
        ------
        ConfigError
            If transfer sources conflict or a required option is missing.

        """
        sources = self.sources
        if len(sources) > 1:
            raise ConfigError(f"Conflicting transfer sources: {', '.join(sources)}. Give exactly one")
        if "rpc" in sources and not (self.rpc and self.from_block is not None and self.to_block is not None):
            raise ConfigError("An RPC source needs an endpoint, from_block and to_block")
        if "rpc" in sources and not 0 <= self.from_block <= self.to_block:
            raise ConfigError(f"Invalid block range [{self.from_block}, {self.to_block}]")
        if self.jobs < 1:
            raise ConfigError(f"--jobs must be a positive integer. Got {self.jobs}")
        if self.chunk < 1:
            raise ConfigError(f"--chunk must be a positive integer. Got {self.chunk}")
        c = self.command
        if c == "fetch" and sources != ["rpc"]:
            raise ConfigError("fetch needs an RPC endpoint and block range")
        if c == "parse" and sources not in (["logs"], ["rpc"]):
            raise ConfigError("parse needs a raw log file or an RPC range")
        if c in ("graph", "indicators") and not sources:
            raise ConfigError(f"{c} needs a transfer source: --logs, --transfers or --rpc")
        if c == "stats" and not sources and not self.edges:
            raise ConfigError("stats needs a transfer source or an --edges list")
        if c == "stats" and sources and self.edges:
            raise ConfigError("stats takes either a transfer source or an --edges list, not both")
        if c == "detect" and not sources and not (self.series_indicators and self.nft_indicators):
            raise ConfigError("detect needs a transfer source or both --series-indicators and --nft-indicators")
        if c == "compare":
            if not self.wash_labels:
                raise ConfigError("compare needs --wash-labels")
            if not sources and not self.nft_indicators:
                raise ConfigError("compare needs a transfer source or --nft-indicators")
        if c == "gen" and self.seed is None:
            raise ConfigError("gen needs an explicit --seed")
        return self

def load_config_file(path: str) -> dict:
    """Read a TOML configuration file."""
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = toml.load(f)
    except FileNotFoundError:
        raise ConfigError(f"Configuration file not found: {path}") from None
    except toml.TomlDecodeError as e:
        raise ConfigError(f"Invalid configuration file {path}: {e}") from None
    unknown = set(data) - {"input", "rpc", "detection", "gen", "run"}
    if unknown:
        raise ConfigError(f"Unknown configuration tables: {', '.join(sorted(unknown))}")
    return data

def build_config(args: argparse.Namespace) -> RunConfig:
    """Merge the configuration file and the flags of a parsed command line."""
    data = load_config_file(args.config) if args.config else {}
    values = {}
    for key in INPUT_KEYS:
        values[key] = data.get("input", {}).get(key)
    for key, attr in RPC_KEYS.items():
        if key in data.get("rpc", {}):
            values[attr] = data["rpc"][key]
    for key in RUN_KEYS:
        if key in data.get("run", {}):
            values[key] = data["run"][key]
    detection = dict(data.get("detection", {}))
    gen = dict(data.get("gen", {}))
    # Flags win
    for key in INPUT_KEYS + tuple(RPC_KEYS.values()) + RUN_KEYS + ("raw_logs",):
        flag = getattr(args, key, None)
        if flag not in (None, False):
            values[key] = flag
    for key in THRESHOLD_KEYS + ("gate_mode",):
        flag = getattr(args, key, None)
        if flag is not None:
            detection[key] = flag
    for key in ("n_series", "n_accounts", "background_trades", "quarters"):
        flag = getattr(args, key, None)
        if flag is not None:
            gen[key] = flag
    unknown = set(detection) - set(THRESHOLD_KEYS) - {"gate_mode"}
    if unknown:
        raise ConfigError(f"Unknown [detection] keys: {', '.join(sorted(unknown))}")
    try:
        gate_mode = GateMode(detection.pop("gate_mode", GateMode.EITHER))
    except ValueError:
        raise ConfigError("gate_mode must be 'literal' or 'either'") from None
    thresholds = Thresholds(**detection)
    known = {f.name for f in fields(RunConfig)}
    try:
        cfg = RunConfig(command=args.command, thresholds=thresholds, gate_mode=gate_mode, gen=gen,
            **{k: v for k, v in values.items() if k in known and v is not None})
    except TypeError as e:
        raise ConfigError(str(e)) from None
    return cfg.validate()

def _path(cfg: RunConfig, name: str) -> str:
    return os.path.join(cfg.out, name)

def _fetch(cfg: RunConfig):
    return fetch_logs_rpc(cfg.rpc, int(cfg.from_block), int(cfg.to_block), chunk=cfg.chunk, jobs=cfg.jobs)

def load_records(cfg: RunConfig) -> List[TransferRecord]:
    """Transfer records of the configured source."""
    if cfg.transfers:
        return io.load_transfers_csv(cfg.transfers, strict=cfg.strict)
    events = io.load_raw_logs_jsonl(cfg.logs, strict=cfg.strict) if cfg.logs else _fetch(cfg)
    parser = LogParser(strict=cfg.strict, jobs=cfg.jobs)
    records = parser.parse(events)
    if parser.malformed:
        logger.warning("Skipped %d malformed logs", parser.malformed)
    return records

def _labels(cfg: RunConfig) -> dict:
    return io.load_category_labels(cfg.labels, strict=cfg.strict) if cfg.labels else {}

def _tx_values(cfg: RunConfig) -> dict:
    if not cfg.tx_values:
        logger.warning("No transaction values given: every NFT is unpriced")
        return {}
    return io.load_tx_values(cfg.tx_values, strict=cfg.strict)

def _indicator_tables(cfg: RunConfig):
    records = load_records(cfg)
    model = attach_values(records, _tx_values(cfg))
    ntg = TransferGraph(records)
    series_inds, nft_inds = compute_indicators(records, model, ntg)
    return records, model, series_inds, nft_inds

def cmd_fetch(cfg: RunConfig) -> str:
    events = _fetch(cfg)
    io.write_raw_logs_jsonl(events, _path(cfg, "raw_logs.jsonl"))
    return f"fetched {len(events)} logs from blocks {cfg.from_block}-{cfg.to_block}"

def cmd_parse(cfg: RunConfig) -> str:
    events = io.load_raw_logs_jsonl(cfg.logs, strict=cfg.strict) if cfg.logs else _fetch(cfg)
    parser = LogParser(strict=cfg.strict, jobs=cfg.jobs)
    records = parser.parse(events)
    io.write_transfers_csv(records, _path(cfg, "transfers.csv"))
    return f"parsed {len(records)} transfers from {len(events)} logs ({parser.dropped} dropped, {parser.malformed} malformed)"

def cmd_graph(cfg: RunConfig) -> str:
    records = load_records(cfg)
    ncg, ntg, nhg = CreateGraph(records), TransferGraph(records), HoldGraph(records)
    ncg.write_csv(_path(cfg, "ncg.csv"))
    ntg.write_csv(_path(cfg, "ntg.csv"))
    nhg.write_csv(_path(cfg, "nhg.csv"))
    rows = []
    for role in Role:
        rows.extend((q.quarter, role.value, q.standard, q.count) for q in quarterly_counts(records, role, ncg))
    io.write_table(rows, ["quarter", "role", "standard", "count"], _path(cfg, "quarterly_counts.csv"))
    io.write_json({"ncg": ncg.summary(), "ntg": ntg.summary(), "nhg": nhg.summary()}, _path(cfg, "graphs.json"))
    return f"built graphs: {ncg.num_edges} NFTs, {ntg.num_nodes} accounts, {ntg.num_edges} transfer edges"

def _distribution(g, direction: str, include_zero: bool = True) -> dict:
    d = degree_distribution(g, direction, include_zero=include_zero)
    try:
        fit = fit_power_law(d)._asdict()
    except GraphError as e:
        logger.info("No power-law fit for %s-degrees: %s", direction, e)
        fit = None
    return {"summary": degree_summary(d), "power_law": fit, "histogram": d.to_dict()["histogram"]}

def cmd_stats(cfg: RunConfig) -> str:
    records = None
    if cfg.edges:
        ntg = load_edges_csv(cfg.edges, strict=cfg.strict)
    else:
        records = load_records(cfg)
        ntg = TransferGraph(records)
    scc_count, scc_largest = scc(ntg)
    wcc_count, wcc_largest = wcc(ntg)
    metrics = {
        "accounts": ntg.num_nodes,
        "edges": ntg.num_edges,
        "transfers": ntg.total_weight,
        "clustering": clustering_coefficient(ntg),
        "assortativity": degree_assortativity(ntg),
        "reciprocity": reciprocity(ntg),
        "scc": {"count": scc_count, "largest": scc_largest},
        "wcc": {"count": wcc_count, "largest": wcc_largest,
            "largest_share": wcc_largest/ntg.num_nodes if ntg.num_nodes else None},
        "pagerank_top": [{"account": a, "score": s} for a, s in pagerank_top(pagerank(ntg), 10)] if ntg.num_nodes else [],
        "ntg": {
            "in_degree": _distribution(ntg, "in"),
            "out_degree": _distribution(ntg, "out"),
            "top_senders": top_nodes(ntg, "out"),
            "top_recipients": top_nodes(ntg, "in")}}
    if records is not None:
        ncg, nhg = CreateGraph(records), HoldGraph(records)
        metrics["summary"] = {"ncg": ncg.summary(), "ntg": ntg.summary(), "nhg": nhg.summary()}
        metrics["ncg"] = {"out_degree": _distribution(ncg, "out"), "top_creators": top_nodes(ncg, "out")}
        metrics["nhg"] = {"in_degree": _distribution(nhg, "in"), "top_holders": top_nodes(nhg, "in")}
    io.write_json(metrics, _path(cfg, "metrics.json"))
    return f"stats: {ntg.num_nodes} accounts, reciprocity {metrics['reciprocity']}, {scc_count} SCCs, {wcc_count} WCCs"

def cmd_indicators(cfg: RunConfig) -> str:
    records, model, series_inds, nft_inds = _indicator_tables(cfg)
    labels = _labels(cfg)
    write_series_indicators(series_inds, _path(cfg, "series_indicators.csv"))
    write_nft_indicators(nft_inds, _path(cfg, "nft_indicators.csv"))
    write_quarterly_volume(quarterly_volume(records, model, labels), _path(cfg, "quarterly_volume.csv"))
    io.write_json(category_summaries(series_inds, nft_inds, labels), _path(cfg, "categories.json"))
    if cfg.texts:
        terms = term_frequency(io.load_descriptive_texts(cfg.texts, strict=cfg.strict), STOPWORDS)
        io.write_table(terms, ["term", "count"], _path(cfg, "terms.csv"))
    return f"indicators: {len(series_inds)} series, {len(nft_inds)} NFTs"

def cmd_detect(cfg: RunConfig) -> str:
    if cfg.sources:
        _, _, series_inds, nft_inds = _indicator_tables(cfg)
    else:
        series_inds = load_series_indicators(cfg.series_indicators, strict=True)
        nft_inds = load_nft_indicators(cfg.nft_indicators, strict=True)
    labels = _labels(cfg) if cfg.labels else None
    reports = detect_tables(series_inds, nft_inds, cfg.thresholds, cfg.gate_mode, labels)
    report = detection_report(reports, cfg.thresholds, cfg.gate_mode)
    io.write_json(report, _path(cfg, "detection.json"))
    return f"detect ({cfg.gate_mode.value}): {report['flagged']} NFTs flagged in {sum(bool(r.flagged) for r in reports)} of {len(reports)} series"

def cmd_gen(cfg: RunConfig) -> str:
    spec = MarketSpec.from_dict(dict(cfg.gen, seed=int(cfg.seed)))
    records, tx_values, truth = generate(spec)
    io.write_transfers_csv(records, _path(cfg, "transfers.csv"))
    io.write_tx_values(tx_values, _path(cfg, "tx_values.csv"))
    io.write_category_labels(truth.labels, _path(cfg, "labels.csv"))
    io.write_wash_labels(truth.wash_nfts, _path(cfg, "wash_labels.csv"))
    io.write_json(dict(truth.to_dict(), spec=spec.to_dict()), _path(cfg, "ground_truth.json"))
    if cfg.raw_logs:
        io.write_raw_logs_jsonl(to_raw_logs(records), _path(cfg, "raw_logs.jsonl"))
    return f"generated {len(records)} transfers, {len(truth.wash_nfts)} wash NFTs (seed {spec.seed})"

def cmd_compare(cfg: RunConfig) -> str:
    if cfg.sources:
        _, _, _, nft_inds = _indicator_tables(cfg)
    else:
        nft_inds = load_nft_indicators(cfg.nft_indicators, strict=True)
    comparison = compare_labeled(nft_inds, io.load_wash_labels(cfg.wash_labels, strict=cfg.strict))
    io.write_json(comparison.to_dict(), _path(cfg, "comparison.json"))
    signs = ", ".join(f"{k} {comparison.gap_sign[k]}" for k in ("volume", "fratio", "p_value"))
    return f"compare: {comparison.labeled_count} labeled vs {comparison.unlabeled_count} unlabeled NFTs (median gap signs: {signs})"

HANDLERS = {
    "fetch": cmd_fetch,
    "parse": cmd_parse,
    "graph": cmd_graph,
    "stats": cmd_stats,
    "indicators": cmd_indicators,
    "detect": cmd_detect,
    "gen": cmd_gen,
    "compare": cmd_compare}

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="TOML configuration file")
    common.add_argument("--out", help="Output directory (default: out)")
    common.add_argument("--strict", action="store_true", default=None, help="Fail on the first malformed input")
    common.add_argument("--jobs", type=int, help="Worker processes for decoding and threads for RPC requests")
    common.add_argument("--seed", type=int, help="Seed of the synthetic market generator")
    verbosity = common.add_mutually_exclusive_group()
    verbosity.add_argument("-v", "--verbose", action="store_true", help="Log debug messages")
    verbosity.add_argument("-q", "--quiet", action="store_true", help="Log warnings and errors only")
    sources = argparse.ArgumentParser(add_help=False)
    sources.add_argument("--logs", help="Raw logs JSONL file")
    sources.add_argument("--transfers", help="Transfers CSV file")
    sources.add_argument("--rpc", help="JSON-RPC endpoint URL")
    sources.add_argument("--from-block", dest="from_block", type=int, help="First block of the RPC range")
    sources.add_argument("--to-block", dest="to_block", type=int, help="Last block of the RPC range")
    sources.add_argument("--chunk", type=int, help="Blocks per eth_getLogs request (default: 1000)")
    values = argparse.ArgumentParser(add_help=False)
    values.add_argument("--tx-values", dest="tx_values", help="Transaction values CSV file")
    values.add_argument("--labels", help="Category labels CSV file")
    detection = argparse.ArgumentParser(add_help=False)
    for key in THRESHOLD_KEYS:
        detection.add_argument(f"--{key}", type=int if key in ("n3", "n6") else float, help=f"Threshold {key}")
    detection.add_argument("--gate-mode", dest="gate_mode", choices=[m.value for m in GateMode], help="Series gate (default: either)")

    parser = argparse.ArgumentParser(prog="nftgraph", description="Graph analysis and bubble detection of NFT transfers")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("fetch", parents=[common, sources], help="Fetch NFT transfer logs from a JSON-RPC node")
    sub.add_parser("parse", parents=[common, sources], help="Decode raw logs into transfer records")
    sub.add_parser("graph", parents=[common, sources], help="Build the create, transfer and hold graphs")
    p = sub.add_parser("stats", parents=[common, sources], help="Network metrics of the transfer graph")
    p.add_argument("--edges", help="NTG edge list (from,to,weight) instead of a transfer source")
    p = sub.add_parser("indicators", parents=[common, sources, values], help="Series and NFT indicators")
    p.add_argument("--texts", help="Descriptive texts JSONL file")
    p = sub.add_parser("detect", parents=[common, sources, values, detection], help="Detect bubble NFTs")
    p.add_argument("--series-indicators", dest="series_indicators", help="Staged series indicators CSV")
    p.add_argument("--nft-indicators", dest="nft_indicators", help="Staged NFT indicators CSV")
    p = sub.add_parser("gen", parents=[common], help="Generate a synthetic market")
    p.add_argument("--n-series", dest="n_series", type=int, help="Number of series")
    p.add_argument("--n-accounts", dest="n_accounts", type=int, help="Number of background accounts")
    p.add_argument("--background-trades", dest="background_trades", type=int, help="Number of background trades")
    p.add_argument("--quarters", type=int, help="Length of the market in quarters")
    p.add_argument("--raw-logs", dest="raw_logs", action="store_true", help="Also write the market as raw logs")
    p = sub.add_parser("compare", parents=[common, sources, values], help="Compare wash-labeled NFTs with the others")
    p.add_argument("--wash-labels", dest="wash_labels", help="Wash-trade labels CSV file (contract,token_id)")
    p.add_argument("--nft-indicators", dest="nft_indicators", help="Staged NFT indicators CSV")
    return parser

def setup_logging(verbose: bool = False, quiet: bool = False) -> None:
    level = logging.DEBUG if verbose else logging.WARNING if quiet else logging.INFO
    logging.basicConfig(level=level, format="%(asctime)s %(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    for name in ("requests", "urllib3"):
        logging.getLogger(name).setLevel(logging.WARNING)

def main(argv: Sequence[str] = None) -> int:
    """
    Run a subcommand.

    Returns
    -------
    code : int
        0 on success, 1 on input or processing errors, 2 on configuration
        errors.

    """
    args = build_parser().parse_args(argv)
    setup_logging(args.verbose, args.quiet)
    try:
        cfg = build_config(args)
        summary = HANDLERS[cfg.command](cfg)
    except ConfigError as e:
        logger.error("Configuration error: %s", e)
        print(f"error: {e}", file=sys.stderr)
        return 2
    except (NFTGraphError, ValueError, OSError) as e:
        logger.error("%s failed: %s", args.command, e)
        print(f"error: {e}", file=sys.stderr)
        return 1
    print(summary)
    return 0
