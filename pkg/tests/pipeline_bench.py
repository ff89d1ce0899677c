# -*- coding: utf-8 -*-
"""
Pipeline Benchmark
==================

Times the load of a transfers file, the three graphs and the indicator
tables over a synthetic market of a million transfers.

Each step runs in its own interpreter, so the peak resident memory reported
by ``run`` belongs to the pipeline alone::

    python pipeline_bench.py gen DIR
    python pipeline_bench.py run DIR

Both steps print a JSON object on their last line of output.

"""

import json
import os
import resource
import sys
import time

from nftgraph.graphs import CreateGraph, HoldGraph, TransferGraph
from nftgraph.indicators import attach_values, compute_indicators
from nftgraph.synthgen import MarketSpec, generate
from nftgraph.utils import io

MILLION_MARKET = MarketSpec(seed=5, n_series=50, nfts_per_series=(100, 400), n_accounts=2_000, background_trades=1_000_000)

def peak_rss_mb() -> float:
    rss = resource.getrusage(resource.RUSAGE_SELF).ru_maxrss
    # bytes on macOS, kilobytes elsewhere
    return rss/2**20 if sys.platform == "darwin" else rss/2**10

def gen(directory: str) -> dict:
    records, tx_values, _ = generate(MILLION_MARKET)
    io.write_transfers_csv(records, os.path.join(directory, "transfers.csv"))
    io.write_tx_values(tx_values, os.path.join(directory, "tx_values.csv"))
    return {"records": len(records)}

def run(directory: str) -> dict:
    start = time.perf_counter()
    records = io.load_transfers_csv(os.path.join(directory, "transfers.csv"), strict=True)
    tx_values = io.load_tx_values(os.path.join(directory, "tx_values.csv"), strict=True)
    ncg, ntg, nhg = CreateGraph(records), TransferGraph(records), HoldGraph(records)
    model = attach_values(records, tx_values)
    series, nfts = compute_indicators(records, model, ntg)
    return {
        "records": len(records),
        "transfers": ntg.total_weight,
        "nfts": len(nfts),
        "created": ncg.num_edges,
        "held": nhg.num_edges,
        "series": len(series),
        "seconds": time.perf_counter() - start,
        "peak_rss_mb": peak_rss_mb()}

if __name__ == '__main__':
    step, directory = sys.argv[1:3]
    print(json.dumps({"gen": gen, "run": run}[step](directory)))
