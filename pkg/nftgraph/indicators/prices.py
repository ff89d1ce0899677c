# -*- coding: utf-8 -*-
"""
Prices
======

Transfer logs carry no price. Prices come from the native currency (wei)
attached to the transactions that moved the NFTs.

Every transfer is credited with the value of its transaction. When a
transaction moves :math:`k` NFTs, its value :math:`v` is split equally:
each transfer receives :math:`\\lfloor v/k\\rfloor` and the first one, by log
index and batch position, also receives the remainder :math:`v \\bmod k`.
The credited values of a transaction therefore add up to its value exactly.

From the credited values:

- The **volume** of an NFT is the sum of the values credited to its
  transfers.
- The **price** of an NFT is the value credited to its latest transfer with
  a positive value. An NFT never moved with value is *unpriced* and has
  price 0.
- The **floor** and **highest** prices of a series are the minimum and
  maximum prices of its priced NFTs. They are undefined when no NFT of the
  series is priced.

All values are Python integers, so no wei is ever lost to rounding.

"""

from collections import Counter, defaultdict
from typing import Dict, Iterable, List, Mapping, Optional, Tuple

from ..common.records import NftKey, TransferRecord, chronological

TransferId = Tuple[str, int, int]

class PriceModel:
    """
    Values credited to transfers, and the resulting NFT prices and volumes.

    Attributes
    ----------
    credited : dict
        Value credited to each transfer, keyed by
        ``(tx_hash, log_index, batch_pos)``.
    nft_price : dict
        Price of every NFT in the transfer stream, 0 when unpriced.
    nft_volume : dict
        Volume of every NFT in the transfer stream.
    series_nfts : dict
        NFTs of each series (contract), in order of first appearance.

    """
    def __init__(self):
        self.credited: Dict[TransferId, int] = {}
        self.nft_price: Dict[NftKey, int] = {}
        self.nft_volume: Dict[NftKey, int] = {}
        self.series_nfts: Dict[str, List[NftKey]] = {}

    def value_of(self, r: TransferRecord) -> int:
        """Value credited to a transfer."""
        return self.credited.get((r.tx_hash, r.log_index, r.batch_pos), 0)

    def price(self, nft: NftKey) -> Optional[int]:
        """Price of an NFT, ``None`` when unpriced."""
        p = self.nft_price.get(nft, 0)
        return p if p > 0 else None

    @property
    def unpriced(self) -> List[NftKey]:
        return [nft for nft, p in self.nft_price.items() if p == 0]

def split_value(value: int, parts: int) -> List[int]:
    """
    Split a value in ``parts`` integer shares, the remainder going to the first.

    Examples
    --------
    >>> split_value(10, 3)
    [4, 3, 3]

    """
    if parts < 1:
        raise ValueError(f"Cannot split a value in {parts} parts")
    share, remainder = divmod(value, parts)
    return [share + remainder] + [share]*(parts-1)

def attach_values(records: Iterable[TransferRecord], tx_values: Mapping[str, int]) -> PriceModel:
    """
    Credit transaction values to transfers and derive prices and volumes.

    Parameters
    ----------
    records : iterable of TransferRecord
        Transfer stream.
    tx_values : mapping
        Value in wei of each transaction. Missing transactions are worth 0.

    Returns
    -------
    model : PriceModel
        Credited values, prices and volumes.

    Examples
    --------
    >>> model = attach_values(records, {tx1: 0, tx2: 5, tx3: 3})     # X moved in tx1, tx2, tx3
    >>> model.nft_volume[X], model.nft_price[X]
    (8, 3)

    """
    records = chronological(records)
    model = PriceModel()
    credited = model.credited
    per_tx = Counter(r.tx_hash for r in records)
    shared = defaultdict(list)
    for r in records:
        if per_tx[r.tx_hash] > 1:
            shared[r.tx_hash].append(r)
        else:
            credited[(r.tx_hash, r.log_index, r.batch_pos)] = _tx_value(tx_values, r.tx_hash)
    for tx_hash, group in shared.items():
        group.sort(key=lambda r: (r.log_index, r.batch_pos))
        for r, share in zip(group, split_value(_tx_value(tx_values, tx_hash), len(group))):
            credited[(r.tx_hash, r.log_index, r.batch_pos)] = share
    volume, price = model.nft_volume, model.nft_price
    for r in records:
        key = (r.contract, r.token_id)
        if key not in volume:
            nft = r.nft
            volume[nft] = price[nft] = 0
            model.series_nfts.setdefault(nft.series, []).append(nft)
        value = credited[(r.tx_hash, r.log_index, r.batch_pos)]
        volume[key] += value
        if value > 0:
            price[key] = value
    return model

def _tx_value(tx_values: Mapping[str, int], tx_hash: str) -> int:
    value = tx_values.get(tx_hash, 0)
    if value < 0:
        raise ValueError(f"Transaction {tx_hash} has a negative value: {value}")
    return value

def series_prices(series: str, model: PriceModel) -> Optional[Tuple[int, int]]:
    """
    Floor and highest prices of a series.

    Returns
    -------
    prices : tuple or None
        ``(floor, highest)`` in wei over the priced NFTs of the series, or
        ``None`` when none is priced.

    """
    prices = [model.nft_price[nft] for nft in model.series_nfts.get(series, []) if model.nft_price[nft] > 0]
    if not prices:
        return None
    return min(prices), max(prices)

def fratio(nft: NftKey, model: PriceModel, series_floor: Optional[int]) -> Optional[float]:
    """
    Price of an NFT over the floor price of its series.

    Returns ``None`` when the NFT is unpriced or the floor is undefined or
    zero.

    Examples
    --------
    >>> fratio(X, model, 10**14)     # price of X is 12499e14 wei
    12499.0

    """
    price = model.nft_price.get(nft, 0)
    if price <= 0 or not series_floor:
        return None
    return price/series_floor
