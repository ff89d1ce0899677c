# -*- coding: utf-8 -*-
"""
JSON-RPC Log Fetcher
====================

Retrieve NFT transfer logs from an Ethereum node with ``eth_getLogs``.

The block range is split in windows of ``chunk`` blocks. Each window is
requested with a topic filter matching any of the three NFT transfer
signatures, so ERC20 transfers come along too (they share the ``Transfer``
hash) and are discarded later by the decoders.

Providers cap the size of a response. When a window is rejected as too large
it is halved, recursively, down to a single block. A single block still
rejected raises :class:`RPCError`.

Connection errors, timeouts, HTTP 429 and 5xx responses are retried with a
capped exponential backoff:

.. math::
    t_k = \\min(b\\,2^k, t_{max})

where :math:`b` is the base ``backoff`` and :math:`t_{max}` its cap.

Logs carry no time, so each log receives the timestamp of its block, read
once per block with ``eth_getBlockByNumber`` and cached.

.. code:: python

    >>> fetcher = RPCFetcher("http://localhost:8545", chunk=500)
    >>> events = fetcher.fetch(14_000_000, 14_000_999)

"""

import itertools
import logging
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Dict, List, Optional, Tuple

import requests
from tqdm import tqdm

from ..common.constants import NFT_TOPICS, RPC_BACKOFF, RPC_BACKOFF_CAP, RPC_CHUNK, RPC_MAX_RETRIES, RPC_TIMEOUT
from ..common.exceptions import RPCError
from ..common.mathfuncs import hex_to_int
from ..common.records import RawLogEvent
from ..utils.io import event_from_json, write_raw_logs_jsonl

logger = logging.getLogger(__name__)

_TOO_LARGE_PATTERNS = (
    "query returned more than",
    "block range is too large",
    "block range too large",
    "maximum block range",
    "response size exceeded",
    "query timeout exceeded",
    "too many results")

class _ResponseTooLarge(RPCError):
    pass

class RPCFetcher:
    """
    Client of an Ethereum JSON-RPC 2.0 endpoint over HTTP.

    Parameters
    ----------
    endpoint : str
        URL of the node.
    chunk : int, default: 1000
        Number of blocks requested per ``eth_getLogs`` call.
    max_retries : int, default: 5
        Retries of a failed request before giving up.
    backoff : float, default: 0.5
        Base waiting time, in seconds, between retries.
    backoff_cap : float, default: 8.0
        Maximum waiting time, in seconds, between retries.
    timeout : float, default: 30.0
        HTTP timeout in seconds.
    jobs : int, default: 1
        Number of windows requested concurrently. The output is always
        ordered by ``(block_number, log_index)``.
    session : requests.Session, default: None
        HTTP session. A new one is created if not given.
    sleep : callable, default: time.sleep
        Waiting function, replaceable in tests.

    Attributes
    ----------
    requests_sent : int
        Number of HTTP requests issued.
    halvings : int
        Number of windows split because the response was too large.

    """
    def __init__(self,
        endpoint: str,
        chunk: int = RPC_CHUNK,
        max_retries: int = RPC_MAX_RETRIES,
        backoff: float = RPC_BACKOFF,
        backoff_cap: float = RPC_BACKOFF_CAP,
        timeout: float = RPC_TIMEOUT,
        jobs: int = 1,
        session: requests.Session = None,
        sleep: Callable[[float], None] = time.sleep):
        if chunk < 1:
            raise ValueError(f"Chunk must be at least 1 block. Got {chunk}")
        self.endpoint = endpoint
        self.chunk = int(chunk)
        self.max_retries = int(max_retries)
        self.backoff = backoff
        self.backoff_cap = backoff_cap
        self.timeout = timeout
        self.jobs = max(1, int(jobs))
        self.session = session if session is not None else requests.Session()
        self.sleep = sleep
        self.requests_sent = 0
        self.halvings = 0
        self._ids = itertools.count(1)
        self._timestamps: Dict[int, int] = {}
        self._lock = threading.Lock()

    def call(self, method: str, params: list):
        """
        Issue a JSON-RPC call and return its ``result``.

        Raises
        ------
        RPCError
            When the endpoint stays unreachable after all retries, or answers
            with a JSON-RPC error.

        """
        payload = {"jsonrpc": "2.0", "id": next(self._ids), "method": method, "params": params}
        last_error = None
        for attempt in range(self.max_retries+1):
            if attempt:
                wait = min(self.backoff*2**(attempt-1), self.backoff_cap)
                logger.warning("Retrying %s in %.2f s (attempt %d/%d): %s", method, wait, attempt, self.max_retries, last_error)
                self.sleep(wait)
            try:
                self.requests_sent += 1
                response = self.session.post(self.endpoint, json=payload, timeout=self.timeout)
            except (requests.ConnectionError, requests.Timeout) as e:
                last_error = e
                continue
            if response.status_code == 429 or response.status_code >= 500:
                if _is_too_large(response.text):
                    raise _ResponseTooLarge(f"{method}: {response.text[:200]}")
                last_error = f"HTTP {response.status_code}"
                continue
            if response.status_code != 200:
                raise RPCError(f"{method} failed with HTTP {response.status_code}: {response.text[:200]}")
            try:
                body = response.json()
            except ValueError as e:
                last_error = e
                continue
            if "error" in body and body["error"]:
                message = str(body["error"].get("message", body["error"]))
                if _is_too_large(message):
                    raise _ResponseTooLarge(f"{method}: {message}")
                raise RPCError(f"{method} returned error: {message}")
            return body.get("result")
        raise RPCError(f"Endpoint {self.endpoint} unreachable after {self.max_retries} retries: {last_error}")

    def get_logs(self, from_block: int, to_block: int) -> List[dict]:
        """
        Return the NFT-shaped logs of a block window, halving it as needed.

        Raises
        ------
        RPCError
            If a single block is still rejected as too large.

        """
        params = [{
            "fromBlock": hex(from_block),
            "toBlock": hex(to_block),
            "topics": [["0x" + t.hex() for t in NFT_TOPICS]]}]
        try:
            return self.call("eth_getLogs", params) or []
        except _ResponseTooLarge as e:
            if from_block == to_block:
                raise RPCError(f"Block {from_block} alone exceeds the provider response limit: {e}") from e
            middle = (from_block + to_block)//2
            self.halvings += 1
            logger.info("Window [%d, %d] too large; halving at %d", from_block, to_block, middle)
            return self.get_logs(from_block, middle) + self.get_logs(middle+1, to_block)

    def block_timestamp(self, number: int) -> int:
        """Timestamp of a block, read from the cache when possible."""
        with self._lock:
            if number in self._timestamps:
                return self._timestamps[number]
        block = self.call("eth_getBlockByNumber", [hex(number), False])
        if not block:
            raise RPCError(f"Block {number} not found")
        timestamp = hex_to_int(block["timestamp"])
        with self._lock:
            self._timestamps[number] = timestamp
        return timestamp

    def windows(self, from_block: int, to_block: int) -> List[Tuple[int, int]]:
        """Windows of ``chunk`` blocks covering ``[from_block, to_block]``."""
        return [(lo, min(lo+self.chunk-1, to_block)) for lo in range(from_block, to_block+1, self.chunk)]

    def _fetch_window(self, window: Tuple[int, int]) -> List[RawLogEvent]:
        events = []
        for obj in self.get_logs(*window):
            if obj.get("removed"):
                continue
            if obj.get("timestamp") is None and obj.get("blockTimestamp") is None:
                obj = dict(obj, timestamp=hex(self.block_timestamp(hex_to_int(obj["blockNumber"]))))
            elif obj.get("timestamp") is None:
                obj = dict(obj, timestamp=obj["blockTimestamp"])
            events.append(event_from_json(obj))
        return events

    def fetch(self, from_block: int, to_block: int, progress: Optional[bool] = None) -> List[RawLogEvent]:
        """
        Fetch every NFT-shaped log in ``[from_block, to_block]``.

        Parameters
        ----------
        from_block : int
            First block, included.
        to_block : int
            Last block, included.
        progress : bool, default: None
            Show a progress bar. By default only on a terminal.

        Returns
        -------
        events : list of RawLogEvent
            Logs with timestamps, ordered by ``(block_number, log_index)``.

        """
        if from_block > to_block:
            raise ValueError(f"from_block ({from_block}) must not exceed to_block ({to_block})")
        if from_block < 0:
            raise ValueError(f"Block numbers must be non-negative. Got {from_block}")
        windows = self.windows(from_block, to_block)
        bar = tqdm(total=len(windows), unit="window", disable=(progress is False) if progress is not None else None)
        results = []
        if self.jobs > 1:
            with ThreadPoolExecutor(max_workers=self.jobs) as pool:
                for events in pool.map(self._fetch_window, windows):
                    results.append(events)
                    bar.update()
        else:
            for window in windows:
                results.append(self._fetch_window(window))
                bar.update()
        bar.close()
        events = sorted((ev for part in results for ev in part), key=lambda ev: (ev.block_number, ev.log_index))
        logger.info("Fetched %d logs from blocks [%d, %d] in %d requests (%d halvings)",
            len(events), from_block, to_block, self.requests_sent, self.halvings)
        return events

def _is_too_large(message: str) -> bool:
    text = message.lower()
    return any(p in text for p in _TOO_LARGE_PATTERNS)

def fetch_logs_rpc(endpoint: str, from_block: int, to_block: int, chunk: int = RPC_CHUNK, out: str = None, **kwargs) -> List[RawLogEvent]:
    """
    Fetch NFT-shaped logs of a block range, optionally writing them as JSONL.

    Parameters
    ----------
    endpoint : str
        URL of the JSON-RPC node.
    from_block : int
        First block, included.
    to_block : int
        Last block, included.
    chunk : int, default: 1000
        Blocks per request window.
    out : str, default: None
        Path of the JSONL file to write.
    kwargs
        Further options of :class:`RPCFetcher`.

    Returns
    -------
    events : list of RawLogEvent
        Logs ordered by ``(block_number, log_index)``.

    """
    if from_block > to_block:
        raise ValueError(f"from_block ({from_block}) must not exceed to_block ({to_block})")
    progress = kwargs.pop("progress", None)
    events = RPCFetcher(endpoint, chunk=chunk, **kwargs).fetch(from_block, to_block, progress=progress)
    if out is not None:
        write_raw_logs_jsonl(events, out)
    return events
