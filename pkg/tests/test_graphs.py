# -*- coding: utf-8 -*-
"""
Test Graphs
===========

"""

import json
import os
import subprocess
import sys
import tempfile
import unittest
from collections import Counter

import networkx as nx

from nftgraph.common.exceptions import UnknownNFTError
from nftgraph.common.records import NftKey, Standard
from nftgraph.graphs import (CreateGraph, CreationEdge, HoldGraph, Role, TransferGraph, count_transferors,
    holder_values, load_edges_csv, quarterly_counts)
from nftgraph.synthgen import MarketSpec, WashRing, generate

from fixtures import ZERO, MarketBuilder, addr

A, B, C, D = addr(0xA), addr(0xB), addr(0xC), addr(0xD)
S = addr(0x5E)
X = NftKey(S, 1)
Q1_2022 = 1_642_204_800     # 2022-01-15
Q1_2022_LATE = 1_646_092_800    # 2022-03-01
Q2_2022 = 1_651_363_200     # 2022-05-01
Q3_2022 = 1_659_312_000     # 2022-08-01

def market(**kwargs):
    spec = dict(seed=11, n_series=4, background_trades=200, wash_rings=(WashRing(ring_size=3, nft_count=2),))
    spec.update(kwargs)
    return generate(MarketSpec(**spec))

class CreateGraphTest(unittest.TestCase):
    def test_single_mint(self):
        m = MarketBuilder()
        m.move(ZERO, A, S, 1, 5)
        m.move(A, B, S, 1, 9)
        g = CreateGraph(m.records)
        self.assertEqual(g.edges, {X: CreationEdge(A, X, 5, Standard.ERC721, False)})

    def test_duplicate_mint(self):
        m = MarketBuilder()
        m.move(ZERO, A, S, 1, 5)
        m.move(ZERO, B, S, 1, 7)
        g = CreateGraph(m.records)
        self.assertEqual(g.edges[X].creator, A)
        self.assertEqual(g.duplicate_mints, 1)

    def test_synthetic_edge(self):
        m = MarketBuilder()
        m.move(A, B, S, 1, 5)
        g = CreateGraph(m.records)
        self.assertTrue(g.edges[X].synthetic)
        self.assertEqual(g.edges[X].creator, A)
        self.assertEqual(g.creators(), Counter())
        self.assertEqual(g.summary()["synthetic_edges"], 1)

    def test_creators_of_market(self):
        records, _, truth = generate(MarketSpec(seed=3, n_series=3, nfts_per_series=(4, 4), erc1155_series=0, background_trades=0))
        g = CreateGraph(records)
        self.assertEqual(g.num_edges, 12)
        expected = Counter()
        for info in truth.series.values():
            expected[info["creator"]] += info["nft_count"]
        self.assertEqual(g.creators(), expected)
        labels, degrees = g.degree_sequence("out")
        self.assertEqual(dict(zip(labels, degrees.tolist())), dict(expected))

class TransferGraphTest(unittest.TestCase):
    def test_weights(self):
        m = MarketBuilder()
        m.move(A, B, S, 1, 1)
        m.move(A, B, S, 2, 2)
        m.move(B, A, S, 1, 3)
        g = TransferGraph(m.records)
        self.assertEqual(g.edges(), [(A, B, 2), (B, A, 1)])
        self.assertEqual(g.weight(A, B), 2)
        self.assertEqual(g.weight(B, C), 0)
        self.assertEqual(g.total_weight, 3)

    def test_empty(self):
        g = TransferGraph([])
        self.assertEqual((g.num_nodes, g.num_edges, g.total_weight), (0, 0, 0))
        self.assertEqual(g.edges(), [])

    def test_market_tallies(self):
        records, _, truth = market()
        g = TransferGraph(records)
        self.assertEqual(g.total_weight, len(records))
        self.assertEqual(g.num_edges, len(truth.pair_tallies))
        for (src, dst), w in truth.pair_tallies.items():
            self.assertEqual(g.weight(src, dst), w)

    def test_networkx_degrees(self):
        records, _, _ = market()
        g = TransferGraph(records)
        G = nx.MultiDiGraph()
        G.add_edges_from((r.sender, r.recipient) for r in records)
        for direction, degree in (("out", G.out_degree), ("in", G.in_degree)):
            labels, degrees = g.degree_sequence(direction)
            self.assertEqual(dict(zip(labels, degrees.tolist())), dict(degree()))

    def test_history(self):
        m = MarketBuilder()
        m.move(A, B, S, 1, 20)
        m.move(ZERO, A, S, 1, 10)
        g = TransferGraph(m.records)
        self.assertEqual([r.timestamp for r in g.transfer_history(X)], [10, 20])
        with self.assertRaises(UnknownNFTError):
            g.transfer_history(NftKey(S, 2))
        with self.assertRaises(KeyError):
            g.transfer_history(NftKey(S, 2))

    def test_count_transferors(self):
        m = MarketBuilder()
        m.move(ZERO, A, S, 1, 1)
        m.move(ZERO, A, S, 2, 1)
        for t, (u, v) in enumerate([(A, B), (B, A), (A, B)]):
            m.move(u, v, S, 2, 10 + t)
        m.move(ZERO, A, S, 3, 1)
        for t, (u, v) in enumerate([(A, B), (B, C), (C, D)]):
            m.move(u, v, S, 3, 10 + t)
        g = TransferGraph(m.records)
        self.assertEqual(count_transferors(g, NftKey(S, 1)), 1)
        self.assertEqual(count_transferors(g, NftKey(S, 2)), 2)
        self.assertEqual(count_transferors(g, NftKey(S, 3)), 4)

    def test_summary(self):
        m = MarketBuilder()
        m.move(ZERO, A, S, 1, 1)
        m.move(A, B, addr(0x5F), 1, 2, standard=Standard.ERC1155, amount=3)
        summary = TransferGraph(m.records).summary()
        self.assertEqual(summary["accounts"], 3)
        self.assertEqual(summary["accounts_in_both_standards"], 1)
        self.assertEqual(summary["ERC1155"], {"accounts": 2, "transfers": 1})

    def test_input_order(self):
        records, _, _ = market()
        shuffled = records[::-1]
        self.assertEqual(TransferGraph(shuffled).history, TransferGraph(records).history)
        self.assertEqual(TransferGraph(shuffled).edges(), TransferGraph(records).edges())
        self.assertEqual(CreateGraph(shuffled).edges, CreateGraph(records).edges)
        self.assertEqual(HoldGraph(shuffled).edges, HoldGraph(records).edges)

    def test_edge_list(self):
        records, _, _ = market()
        g = TransferGraph(records)
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "ntg.csv")
            g.write_csv(path)
            self.assertEqual(load_edges_csv(path, strict=True).edges(), g.edges())

    @unittest.skipUnless(os.environ.get("NFTGRAPH_BENCH") == "1", "set NFTGRAPH_BENCH=1 to run")
    def test_million_records(self):
        here = os.path.dirname(os.path.abspath(__file__))
        env = dict(os.environ, PYTHONPATH=os.pathsep.join(filter(None, [os.path.dirname(here), os.environ.get("PYTHONPATH")])))
        def step(name, directory):
            out = subprocess.run([sys.executable, os.path.join(here, "pipeline_bench.py"), name, directory],
                check=True, capture_output=True, text=True, env=env)
            return json.loads(out.stdout.strip().splitlines()[-1])
        with tempfile.TemporaryDirectory() as tmp:
            generated = step("gen", tmp)
            result = step("run", tmp)
        self.assertGreaterEqual(generated["records"], 1_000_000)
        self.assertEqual(result["records"], generated["records"])
        self.assertEqual(result["transfers"], generated["records"])
        self.assertEqual(result["created"], result["nfts"])
        self.assertEqual(result["held"], result["nfts"])
        self.assertLess(result["seconds"], 30.0)
        self.assertLess(result["peak_rss_mb"], 2048.0)

class HoldGraphTest(unittest.TestCase):
    def test_latest_holder(self):
        m = MarketBuilder()
        m.move(ZERO, A, S, 1, 1)
        m.move(A, B, S, 1, 2)
        m.move(B, C, S, 1, 3)
        self.assertEqual(HoldGraph(m.records).holder(X), C)

    def test_burn(self):
        m = MarketBuilder()
        m.move(ZERO, A, S, 1, 1)
        m.move(A, ZERO, S, 1, 2)
        self.assertEqual(HoldGraph(m.records).holder(X), ZERO)

    def test_same_timestamp(self):
        m = MarketBuilder()
        m.move(ZERO, A, S, 1, 1)
        second = m.move(A, B, S, 1, 2)
        first = m.move(B, C, S, 1, 2)
        records = [first._replace(log_index=3), second._replace(log_index=4), m.records[0]]
        self.assertEqual(HoldGraph(records).holder(X), B)

    def test_same_nfts_as_create_graph(self):
        records, _, _ = market()
        self.assertEqual(set(HoldGraph(records).edges), set(CreateGraph(records).edges))

    def test_holder_values(self):
        m = MarketBuilder()
        m.move(ZERO, A, S, 1, 1)
        m.move(ZERO, A, S, 2, 1)
        m.move(ZERO, B, addr(0x5F), 1, 1, standard=Standard.ERC1155)
        values = holder_values(HoldGraph(m.records), {X: 10, NftKey(addr(0x5F), 1): 4})
        self.assertEqual(values[A], (2, 0, 10))
        self.assertEqual(values[B], (0, 1, 4))

class QuarterlyTest(unittest.TestCase):
    def test_creators(self):
        m = MarketBuilder()
        m.move(ZERO, A, S, 1, Q1_2022)
        m.move(ZERO, A, S, 2, Q1_2022_LATE)
        creators = quarterly_counts(m.records, Role.CREATORS)
        created = quarterly_counts(m.records, "created_nfts")
        self.assertEqual([(q.quarter, q.count) for q in creators], [("2022Q1", 1)])
        self.assertEqual([(q.quarter, q.count) for q in created], [("2022Q1", 2)])

    def test_quarter_boundary(self):
        m = MarketBuilder()
        m.move(ZERO, A, S, 1, Q1_2022)
        m.move(A, B, S, 1, Q2_2022)
        counts = quarterly_counts(m.records, Role.TRANSFERS)
        self.assertEqual([(q.quarter, q.standard, q.count) for q in counts], [("2022Q1", Standard.ERC721, 1), ("2022Q2", Standard.ERC721, 1)])
        transferors = quarterly_counts(m.records, Role.TRANSFERORS)
        self.assertEqual([(q.quarter, q.count) for q in transferors], [("2022Q1", 1), ("2022Q2", 2)])

    def test_holders(self):
        m = MarketBuilder()
        m.move(ZERO, A, S, 1, Q1_2022)
        m.move(ZERO, A, S, 2, Q1_2022)
        m.move(A, B, S, 1, Q3_2022)
        holders = quarterly_counts(m.records, Role.HOLDERS)
        self.assertEqual([(q.quarter, q.count) for q in holders], [("2022Q1", 1), ("2022Q2", 1), ("2022Q3", 2)])

    def test_market_script(self):
        records, _, truth = market()
        transfers = {(q.quarter, q.standard.value): q.count for q in quarterly_counts(records, Role.TRANSFERS)}
        created = {(q.quarter, q.standard.value): q.count for q in quarterly_counts(records, Role.CREATED_NFTS)}
        self.assertEqual(transfers, dict(truth.quarterly["transfers"]))
        self.assertEqual(created, dict(truth.quarterly["created_nfts"]))

if __name__ == '__main__':
    unittest.main()
