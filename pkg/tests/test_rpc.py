# -*- coding: utf-8 -*-
"""
Test JSON-RPC Log Fetcher
=========================

The fetcher runs against a local JSON-RPC mock served by ``http.server`` in
a background thread.

"""

import json
import os
import tempfile
import threading
import unittest
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

from nftgraph.common.constants import NFT_TOPICS
from nftgraph.common.exceptions import RPCError
from nftgraph.ingest import RPCFetcher, fetch_logs_rpc
from nftgraph.utils.io import event_to_json, load_raw_logs_jsonl

from fixtures import ZERO, addr, erc721_log

def block_time(n: int) -> int:
    return 1_000_000 + 12*n

class MockNode(BaseHTTPRequestHandler):
    def do_POST(self):
        body = json.loads(self.rfile.read(int(self.headers["Content-Length"])))
        server = self.server
        server.calls.append(body["method"])
        if server.failures > 0:
            server.failures -= 1
            self.reply(503, "busy")
            return
        if body["method"] == "eth_getBlockByNumber":
            n = int(body["params"][0], 16)
            self.reply(200, json.dumps({"jsonrpc": "2.0", "id": body["id"], "result": {"number": hex(n), "timestamp": hex(block_time(n))}}))
            return
        f = body["params"][0]
        lo, hi = int(f["fromBlock"], 16), int(f["toBlock"], 16)
        server.filters.append(f["topics"])
        if server.error:
            error = {"code": -32000, "message": server.error}
            self.reply(200, json.dumps({"jsonrpc": "2.0", "id": body["id"], "error": error}))
            return
        if hi - lo + 1 > server.max_window:
            error = {"code": -32005, "message": "query returned more than 10000 results"}
            self.reply(200, json.dumps({"jsonrpc": "2.0", "id": body["id"], "error": error}))
            return
        logs = [log for n in range(lo, hi+1) for log in server.logs.get(n, [])]
        self.reply(200, json.dumps({"jsonrpc": "2.0", "id": body["id"], "result": logs}))

    def reply(self, status, text):
        data = text.encode()
        self.send_response(status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(data)))
        self.end_headers()
        self.wfile.write(data)

    def log_message(self, *args):
        pass

def node_log(block: int, log_index: int, token_id: int) -> dict:
    obj = event_to_json(erc721_log(ZERO, addr(1), token_id, block=block, log_index=log_index, tx=block*100 + log_index))
    del obj["timestamp"]
    obj["removed"] = False
    return obj

class RPCFetcherTest(unittest.TestCase):
    def setUp(self):
        self.server = ThreadingHTTPServer(("127.0.0.1", 0), MockNode)
        self.server.calls = []
        self.server.filters = []
        self.server.logs = {}
        self.server.failures = 0
        self.server.max_window = 10**9
        self.server.error = None
        self.thread = threading.Thread(target=self.server.serve_forever, daemon=True)
        self.thread.start()
        self.endpoint = "http://127.0.0.1:{}".format(self.server.server_address[1])
        self.waits = []

    def tearDown(self):
        self.server.shutdown()
        self.server.server_close()

    def fetcher(self, **kwargs):
        return RPCFetcher(self.endpoint, sleep=self.waits.append, **kwargs)

    def test_single_block(self):
        self.server.logs = {100: [node_log(100, 0, 1), node_log(100, 1, 2)]}
        events = self.fetcher().fetch(100, 100, progress=False)
        self.assertEqual(len(events), 2)
        self.assertEqual([ev.timestamp for ev in events], [block_time(100)]*2)
        self.assertEqual(self.server.calls.count("eth_getBlockByNumber"), 1)
        self.assertEqual(self.server.filters[0], [["0x" + t.hex() for t in NFT_TOPICS]])

    def test_reversed_range(self):
        with self.assertRaises(ValueError):
            self.fetcher().fetch(10, 9)

    def test_halving(self):
        self.server.max_window = 500
        self.server.logs = {10: [node_log(10, 0, 1)], 900: [node_log(900, 3, 2)], 999: [node_log(999, 0, 3)]}
        fetcher = self.fetcher(chunk=1000)
        events = fetcher.fetch(0, 999, progress=False)
        self.assertEqual([ev.block_number for ev in events], [10, 900, 999])
        self.assertEqual(fetcher.halvings, 1)

    def test_block_too_large(self):
        self.server.max_window = 0
        with self.assertRaises(RPCError):
            self.fetcher(chunk=4).fetch(0, 3, progress=False)

    def test_provider_limits(self):
        for message in ("query returned more than 10000 results", "Log response size exceeded. You can make eth_getLogs requests with up to a 2K block range",
                "block range is too large", "eth_getLogs is limited to a 10,000 maximum block range"):
            with self.subTest(message=message):
                self.server.error = message
                fetcher = self.fetcher(chunk=4)
                with self.assertRaises(RPCError):
                    fetcher.fetch(0, 3, progress=False)
                self.assertEqual(fetcher.halvings, 2)

    def test_unrelated_errors(self):
        for message in ("filter fromBlock is more than toBlock", "invalid block range params", "gas limit exceeded"):
            with self.subTest(message=message):
                self.server.error = message
                self.server.filters = []
                fetcher = self.fetcher(chunk=4)
                with self.assertRaises(RPCError):
                    fetcher.fetch(0, 3, progress=False)
                self.assertEqual(fetcher.halvings, 0)
                self.assertEqual(len(self.server.filters), 1)

    def test_retries(self):
        self.server.failures = 2
        self.server.logs = {5: [node_log(5, 0, 1)]}
        events = self.fetcher().fetch(5, 5, progress=False)
        self.assertEqual(len(events), 1)
        self.assertEqual(self.waits, [0.5, 1.0])

    def test_backoff_cap(self):
        self.server.failures = 100
        with self.assertRaises(RPCError):
            self.fetcher(max_retries=6).fetch(0, 0, progress=False)
        self.assertEqual(self.waits, [0.5, 1.0, 2.0, 4.0, 8.0, 8.0])

    def test_unreachable(self):
        fetcher = RPCFetcher("http://127.0.0.1:1", max_retries=2, sleep=self.waits.append, timeout=2.0)
        with self.assertRaises(RPCError):
            fetcher.fetch(0, 0, progress=False)
        self.assertEqual(len(self.waits), 2)

    def test_removed_and_attached_timestamps(self):
        stale = dict(node_log(7, 1, 9), removed=True)
        stamped = dict(node_log(7, 0, 8), blockTimestamp=hex(42))
        self.server.logs = {7: [stamped, stale]}
        events = self.fetcher().fetch(7, 7, progress=False)
        self.assertEqual([(ev.log_index, ev.timestamp) for ev in events], [(0, 42)])
        self.assertNotIn("eth_getBlockByNumber", self.server.calls)

    def test_concurrent_windows(self):
        self.server.logs = {n: [node_log(n, 0, n)] for n in range(0, 100, 7)}
        serial = self.fetcher(chunk=10).fetch(0, 99, progress=False)
        parallel = self.fetcher(chunk=10, jobs=4).fetch(0, 99, progress=False)
        self.assertEqual(serial, parallel)
        self.assertEqual([ev.block_number for ev in serial], list(range(0, 100, 7)))

    def test_fetch_to_file(self):
        self.server.logs = {3: [node_log(3, 0, 1)], 4: [node_log(4, 0, 2)]}
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "raw_logs.jsonl")
            events = fetch_logs_rpc(self.endpoint, 0, 9, chunk=5, out=path, sleep=self.waits.append)
            self.assertEqual(list(load_raw_logs_jsonl(path, strict=True)), events)
        self.assertEqual(len(events), 2)

if __name__ == '__main__':
    unittest.main()
