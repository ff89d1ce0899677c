# -*- coding: utf-8 -*-
"""
Synthetic Markets
=================

Deterministic generator of NFT markets with known ground truth.

A market is generated in three stages:

1. **Mints.** Every series is created by one account. ERC721 series mint
   their NFTs one by one; ERC1155 series mint all of them in a single
   ``TransferBatch``. At least one mint of every series carries value, so
   every series has a floor price.
2. **Background trades.** NFTs change hands among a pool of accounts whose
   activity follows a power law: the account of rank :math:`i` is chosen
   with probability proportional to :math:`(i+1)^{-a}`. A share of the
   trades carries a value drawn from ``price_range``.
3. **Wash rings.** Each ring mints fresh NFTs into an existing series and
   trades them in circle among ``ring_size`` fresh accounts, at a high value
   and within a short time span.

As long as the upper end of ``price_range`` is less than :math:`10^3` times
its lower end, no background NFT reaches a Fratio of :math:`10^3`, and the
NFTs of rings worth at least :math:`10^{21}` wei are exactly the bubble NFTs
found with the default thresholds.

All randomness comes from a counter-based ``Philox`` generator seeded with
the ``seed`` of the ``MarketSpec`` and nothing else: the same spec always yields the
same records, byte for byte.

Example
-------
>>> spec = MarketSpec(seed=7, wash_rings=(WashRing(ring_size=2, nft_count=1, trades_per_nft=4),))
>>> records, tx_values, truth = generate(spec)
>>> len(truth.wash_nfts)
1

"""

import logging
from collections import Counter, defaultdict
from dataclasses import asdict, dataclass, field
from typing import Dict, List, Sequence, Set, Tuple

import numpy as np
from eth_abi import encode

from ..common.constants import (BLOCK_TIME, CATEGORIES, TRANSFER_BATCH_TOPIC, TRANSFER_SINGLE_TOPIC, TRANSFER_TOPIC,
    ZERO_ADDRESS)
from ..common.exceptions import ConfigError
from ..common.mathfuncs import quarter_of
from ..common.records import Category, NftKey, RawLogEvent, Standard, TransferRecord

logger = logging.getLogger(__name__)

RNG_NAME = "numpy.random.Philox"
BASE_BLOCK = 11_565_000
QUARTER_SECONDS = 7_776_000
INT64_MAX = 2**63 - 1

def _check(condition: bool, message: str) -> None:
    if not condition:
        raise ConfigError(message)

@dataclass(frozen=True)
class WashRing:
    """
    Circular trading of fresh NFTs among colluding accounts.

    Parameters
    ----------
    ring_size : int, default: 2
        Number of colluding accounts, at least 2.
    nft_count : int, default: 1
        NFTs minted for the ring.
    trades_per_nft : int, default: 4
        Trades of each NFT after its mint.
    value_wei : int, default: 1E+21
        Value of every trade.
    time_span_s : int, default: 3600
        Time between the mint and the last trade of each NFT. At least
        ``trades_per_nft`` seconds.

    """
    ring_size: int = 2
    nft_count: int = 1
    trades_per_nft: int = 4
    value_wei: int = 10**21
    time_span_s: int = 3_600

    def __post_init__(self):
        _check(self.ring_size >= 2, f"A wash ring needs at least 2 accounts. Got {self.ring_size}")
        _check(self.nft_count >= 0, f"nft_count must be non-negative. Got {self.nft_count}")
        _check(self.trades_per_nft >= 1, f"trades_per_nft must be positive. Got {self.trades_per_nft}")
        _check(self.value_wei >= 0, f"value_wei must be non-negative. Got {self.value_wei}")
        _check(self.time_span_s >= self.trades_per_nft, "time_span_s must allow one second per trade")
        object.__setattr__(self, "value_wei", int(self.value_wei))

@dataclass(frozen=True)
class MarketSpec:
    """
    Parameters of a synthetic market.

    Parameters
    ----------
    seed : int
        Seed of the random generator, the only source of entropy.
    n_series : int, default: 5
        Number of series (contracts).
    nfts_per_series : tuple, default: (5, 20)
        Range, both ends included, of the number of NFTs minted per series.
    n_accounts : int, default: 100
        Size of the pool of background accounts.
    activity : float, default: 1.2
        Power-law exponent of the activity of background accounts.
    background_trades : int, default: 300
        Number of background trades.
    price_range : tuple, default: (1E+15, 1E+17)
        Range of background trade values, in wei.
    priced_fraction : float, default: 0.6
        Share of background trades and mints carrying a value.
    erc1155_series : int, default: 1
        Number of series, among the last ones, following ERC1155.
    quarters : int, default: 4
        Length of the market, in quarters of 90 days.
    start_ts : int, default: 1609459200
        Start of the market (2021-01-01 UTC).
    wash_rings : tuple of WashRing, default: ()
        Rings to inject. Ring ``i`` mints its NFTs in series ``i % n_series``.

    """
    seed: int
    n_series: int = 5
    nfts_per_series: Tuple[int, int] = (5, 20)
    n_accounts: int = 100
    activity: float = 1.2
    background_trades: int = 300
    price_range: Tuple[int, int] = (10**15, 10**17)
    priced_fraction: float = 0.6
    erc1155_series: int = 1
    quarters: int = 4
    start_ts: int = 1_609_459_200
    wash_rings: Tuple[WashRing, ...] = ()

    def __post_init__(self):
        _check(isinstance(self.seed, (int, np.integer)) and not isinstance(self.seed, bool), f"The seed must be an integer. Got {self.seed!r}")
        _check(0 <= self.seed < 2**64, f"The seed must be a 64-bit unsigned integer. Got {self.seed}")
        _check(self.n_series >= 0, f"n_series must be non-negative. Got {self.n_series}")
        lo, hi = self.nfts_per_series
        _check(1 <= lo <= hi, f"nfts_per_series must be a range of positive counts. Got {self.nfts_per_series}")
        _check(self.n_accounts >= 2, f"n_accounts must be at least 2. Got {self.n_accounts}")
        _check(self.activity >= 0, f"activity must be non-negative. Got {self.activity}")
        _check(self.background_trades >= 0, f"background_trades must be non-negative. Got {self.background_trades}")
        plo, phi = (int(p) for p in self.price_range)
        _check(1 <= plo <= phi <= INT64_MAX, f"price_range must satisfy 1 <= low <= high < 2**63. Got {self.price_range}")
        _check(0.0 <= self.priced_fraction <= 1.0, f"priced_fraction must be in [0, 1]. Got {self.priced_fraction}")
        _check(0 <= self.erc1155_series <= self.n_series, f"erc1155_series must be in [0, n_series]. Got {self.erc1155_series}")
        _check(self.quarters >= 1, f"quarters must be positive. Got {self.quarters}")
        _check(self.start_ts >= 0, f"start_ts must be non-negative. Got {self.start_ts}")
        rings = tuple(r if isinstance(r, WashRing) else WashRing(**r) for r in self.wash_rings)
        _check(not rings or self.n_series > 0, "Wash rings need at least one series")
        for r in rings:
            _check(r.time_span_s < self.quarters*QUARTER_SECONDS, "A wash ring must fit in the market period")
        object.__setattr__(self, "nfts_per_series", (int(lo), int(hi)))
        object.__setattr__(self, "price_range", (plo, phi))
        object.__setattr__(self, "wash_rings", rings)

    @classmethod
    def from_dict(cls, d: dict) -> "MarketSpec":
        """Spec from a mapping, e.g. the ``[gen]`` table of a config file."""
        d = dict(d)
        try:
            for key in ("nfts_per_series", "price_range"):
                if key in d:
                    d[key] = tuple(int(v) for v in d[key])
            d["wash_rings"] = tuple(WashRing(**{k: int(v) for k, v in r.items()}) for r in d.get("wash_rings", ()))
            return cls(**d)
        except ConfigError:
            raise
        except (TypeError, ValueError, AttributeError) as e:
            raise ConfigError(f"Invalid market spec: {e}") from None

    def to_dict(self) -> dict:
        d = asdict(self)
        d["price_range"] = [str(p) for p in self.price_range]
        d["wash_rings"] = [dict(asdict(r), value_wei=str(r.value_wei)) for r in self.wash_rings]
        return d

@dataclass
class GroundTruth:
    """
    Facts of a generated market, known by construction.

    Attributes
    ----------
    wash_nfts : set of NftKey
        NFTs traded by wash rings.
    series : dict
        For each contract: standard, category, creator, ``nft_count``,
        non-mint ``transfer_count`` and ``turnover``.
    wash_history : dict
        For each wash NFT: number of transfers ``n`` (mint included) and
        ``transferors``.
    pair_tallies : Counter
        Transfers between every ordered pair of addresses.
    quarterly : dict
        ``transfers`` and ``created_nfts`` per (quarter, standard) and
        ``volume`` per (quarter, category).
    labels : dict
        Category of every contract.

    """
    seed: int
    rng: str = RNG_NAME
    wash_nfts: Set[NftKey] = field(default_factory=set)
    series: Dict[str, dict] = field(default_factory=dict)
    wash_history: Dict[NftKey, dict] = field(default_factory=dict)
    pair_tallies: Counter = field(default_factory=Counter)
    quarterly: Dict[str, Counter] = field(default_factory=lambda: {"transfers": Counter(), "created_nfts": Counter(), "volume": Counter()})
    labels: Dict[str, Category] = field(default_factory=dict)
    rings: List[dict] = field(default_factory=list)

    def to_dict(self) -> dict:
        nft = lambda k: {"contract": k.contract, "token_id": str(k.token_id)}
        return {
            "seed": self.seed,
            "rng": self.rng,
            "wash_nfts": [nft(k) for k in sorted(self.wash_nfts)],
            "series": {c: dict(s) for c, s in sorted(self.series.items())},
            "wash_history": [dict(nft(k), **v) for k, v in sorted(self.wash_history.items())],
            "pair_tallies": [{"from": a, "to": b, "weight": w} for (a, b), w in sorted(self.pair_tallies.items())],
            "quarterly": {
                role: [{"quarter": q, "key": k, "value": str(v) if role == "volume" else v} for (q, k), v in sorted(tally.items())]
                for role, tally in self.quarterly.items()},
            "labels": {c: l.value for c, l in sorted(self.labels.items())},
            "rings": self.rings}

class _Tx:
    # One transaction: its records share time, block and hash.
    __slots__ = ("timestamp", "seq", "value", "moves", "standard", "batch")

    def __init__(self, timestamp, seq, value, moves, standard, batch=False):
        self.timestamp = timestamp
        self.seq = seq
        self.value = value
        self.moves = moves
        self.standard = standard
        self.batch = batch

class MarketGenerator:
    """
    Generator of one synthetic market.

    Parameters
    ----------
    spec : MarketSpec
        Parameters of the market.

    """
    def __init__(self, spec: MarketSpec):
        self.spec = spec
        self.rng = np.random.Generator(np.random.Philox(spec.seed))
        self.truth = GroundTruth(seed=int(spec.seed))
        self._txs: List[_Tx] = []
        self._seq = 0
        self.start = spec.start_ts
        self.end = spec.start_ts + spec.quarters*QUARTER_SECONDS

    def _address(self) -> str:
        return "0x" + self.rng.bytes(20).hex()

    def _price(self) -> int:
        lo, hi = self.spec.price_range
        return int(self.rng.integers(lo, hi, endpoint=True))

    def _maybe_price(self) -> int:
        return self._price() if self.rng.random() < self.spec.priced_fraction else 0

    def _tx(self, timestamp: int, value: int, moves: list, standard: Standard, batch: bool = False) -> None:
        self._txs.append(_Tx(int(timestamp), self._seq, int(value), moves, standard, batch))
        self._seq += 1

    def run(self) -> Tuple[List[TransferRecord], Dict[str, int], GroundTruth]:
        spec = self.spec
        accounts = [self._address() for _ in range(spec.n_accounts)]
        weights = np.arange(1, spec.n_accounts+1, dtype=float)**(-spec.activity)
        weights /= weights.sum()
        middle = self.start + (self.end - self.start)//2
        contracts, standards, next_id = [], [], []
        nfts = []
        for s in range(spec.n_series):
            contract = self._address()
            standard = Standard.ERC1155 if s >= spec.n_series - spec.erc1155_series else Standard.ERC721
            creator = accounts[int(self.rng.choice(spec.n_accounts, p=weights))]
            count = int(self.rng.integers(spec.nfts_per_series[0], spec.nfts_per_series[1], endpoint=True))
            contracts.append(contract)
            standards.append(standard)
            next_id.append(count + 1)
            category = Category(CATEGORIES[s % len(CATEGORIES)])
            self.truth.labels[contract] = category
            self.truth.series[contract] = {"standard": standard.value, "category": category.value, "creator": creator,
                "nft_count": count, "transfer_count": 0}
            if standard is Standard.ERC1155:
                t = int(self.rng.integers(self.start, middle))
                moves = [(ZERO_ADDRESS, creator, contract, token_id) for token_id in range(1, count+1)]
                self._tx(t, self._price()*count, moves, standard, batch=True)
                nfts.extend((contract, token_id, t, creator, standard) for token_id in range(1, count+1))
            else:
                for token_id in range(1, count+1):
                    t = int(self.rng.integers(self.start, middle))
                    value = self._price() if token_id == 1 else self._maybe_price()
                    self._tx(t, value, [(ZERO_ADDRESS, creator, contract, token_id)], standard)
                    nfts.append((contract, token_id, t, creator, standard))
        self._background(nfts, accounts, weights)
        for i, ring in enumerate(spec.wash_rings):
            s = i % spec.n_series
            self._wash_ring(ring, contracts[s], standards[s], next_id[s])
            next_id[s] += ring.nft_count
            self.truth.series[contracts[s]]["nft_count"] += ring.nft_count
        for info in self.truth.series.values():
            info["turnover"] = info["transfer_count"]/info["nft_count"] if info["nft_count"] else None
        records, tx_values = self._emit()
        logger.info("Generated %d records in %d transactions (%d series, %d wash NFTs)",
            len(records), len(tx_values), spec.n_series, len(self.truth.wash_nfts))
        return records, tx_values, self.truth

    def _background(self, nfts: list, accounts: List[str], weights: np.ndarray) -> None:
        spec = self.spec
        if not nfts or not spec.background_trades:
            return
        times = defaultdict(list)
        for _ in range(spec.background_trades):
            k = int(self.rng.integers(len(nfts)))
            times[k].append(int(self.rng.integers(nfts[k][2] + 1, self.end)))
        for k in sorted(times):
            contract, token_id, _, holder, standard = nfts[k]
            for t in sorted(times[k]):
                j = int(self.rng.choice(spec.n_accounts, p=weights))
                recipient = accounts[j] if accounts[j] != holder else accounts[(j+1) % spec.n_accounts]
                self._tx(t, self._maybe_price(), [(holder, recipient, contract, token_id)], standard)
                self.truth.series[contract]["transfer_count"] += 1
                holder = recipient

    def _wash_ring(self, ring: WashRing, contract: str, standard: Standard, first_id: int) -> None:
        members = [self._address() for _ in range(ring.ring_size)]
        ring_nfts = []
        for token_id in range(first_id, first_id + ring.nft_count):
            t0 = int(self.rng.integers(self.start, self.end - ring.time_span_s))
            self._tx(t0, 0, [(ZERO_ADDRESS, members[0], contract, token_id)], standard)
            for j in range(1, ring.trades_per_nft+1):
                t = t0 + ring.time_span_s*j//ring.trades_per_nft
                sender, recipient = members[(j-1) % ring.ring_size], members[j % ring.ring_size]
                self._tx(t, ring.value_wei, [(sender, recipient, contract, token_id)], standard)
            nft = NftKey(contract, token_id)
            self.truth.wash_nfts.add(nft)
            self.truth.wash_history[nft] = {
                "n": ring.trades_per_nft + 1,
                "transferors": min(ring.ring_size, ring.trades_per_nft + 1)}
            ring_nfts.append(str(token_id))
        self.truth.series[contract]["transfer_count"] += ring.nft_count*ring.trades_per_nft
        self.truth.rings.append({"contract": contract, "accounts": members, "token_ids": ring_nfts})

    def _emit(self) -> Tuple[List[TransferRecord], Dict[str, int]]:
        records, tx_values = [], {}
        log_index = Counter()
        for tx in sorted(self._txs, key=lambda tx: (tx.timestamp, tx.seq)):
            block = BASE_BLOCK + (tx.timestamp - self.start)//BLOCK_TIME
            tx_hash = "0x" + self.rng.bytes(32).hex()
            tx_values[tx_hash] = tx.value
            quarter = quarter_of(tx.timestamp)
            category = None
            if tx.batch:
                index = log_index[block]
                log_index[block] += 1
            for pos, (sender, recipient, contract, token_id) in enumerate(tx.moves):
                if not tx.batch:
                    index = log_index[block]
                    log_index[block] += 1
                records.append(TransferRecord(tx.standard, sender, recipient, contract, token_id, 1, block,
                    tx.timestamp, tx_hash, index, pos if tx.batch else 0))
                self.truth.pair_tallies[(sender, recipient)] += 1
                self.truth.quarterly["transfers"][(quarter, tx.standard.value)] += 1
                if sender == ZERO_ADDRESS:
                    self.truth.quarterly["created_nfts"][(quarter, tx.standard.value)] += 1
                category = self.truth.labels[contract].value
            if tx.value:
                self.truth.quarterly["volume"][(quarter, category)] += tx.value
        return records, tx_values

def generate(spec: MarketSpec) -> Tuple[List[TransferRecord], Dict[str, int], GroundTruth]:
    """
    Generate a synthetic market.

    Parameters
    ----------
    spec : MarketSpec
        Parameters of the market.

    Returns
    -------
    records : list of TransferRecord
        Transfers in chronological order.
    tx_values : dict
        Value in wei of every transaction.
    truth : GroundTruth
        Facts of the market known by construction.

    """
    return MarketGenerator(spec).run()

def _word(value: int) -> bytes:
    return value.to_bytes(32, "big")

def _address_word(address: str) -> bytes:
    return bytes(12) + bytes.fromhex(address[2:])

def to_raw_logs(records: Sequence[TransferRecord]) -> List[RawLogEvent]:
    """
    Encode transfer records as the event logs that would have produced them.

    Records sharing a transaction and a log index form one ``TransferBatch``;
    other ERC1155 records become ``TransferSingle`` logs, with the sender as
    operator (the recipient for mints), and ERC721 records ``Transfer`` logs.

    Returns
    -------
    events : list of RawLogEvent
        Logs ordered by block number and log index.

    """
    groups = defaultdict(list)
    for r in records:
        groups[(r.block_number, r.log_index, r.tx_hash)].append(r)
    events = []
    for (block, index, tx_hash), group in sorted(groups.items()):
        group.sort(key=lambda r: r.batch_pos)
        first = group[0]
        operator = first.recipient if first.is_mint else first.sender
        if first.standard is Standard.ERC721:
            topics = (TRANSFER_TOPIC, _address_word(first.sender), _address_word(first.recipient), _word(first.token_id))
            data = b""
        elif len(group) == 1 and first.batch_pos == 0:
            topics = (TRANSFER_SINGLE_TOPIC, _address_word(operator), _address_word(first.sender), _address_word(first.recipient))
            data = _word(first.token_id) + _word(first.amount)
        else:
            topics = (TRANSFER_BATCH_TOPIC, _address_word(operator), _address_word(first.sender), _address_word(first.recipient))
            data = encode(["uint256[]", "uint256[]"], [[r.token_id for r in group], [r.amount for r in group]])
        events.append(RawLogEvent(first.contract, topics, data, block, first.timestamp, tx_hash, index))
    return events
