# -*- coding: utf-8 -*-
"""
Indicator Tables
================

Indicators of every series and every NFT of a transfer stream.

=================  ======================================================
Series indicator   Definition
=================  ======================================================
nft_count          Distinct NFTs of the series
transfer_count     Non-mint transfers of the series
turnover           ``transfer_count / nft_count``
floor_price        Lowest price among priced NFTs (wei)
highest_price      Highest price among priced NFTs (wei)
hfratio            ``highest_price / floor_price``
=================  ======================================================

==============  ============================================================
NFT indicator   Definition
==============  ============================================================
n               Transfers, mint included
p_value         Average time between transfers (seconds per transfer)
fratio          Price over the floor price of its series
volume          Sum of the values credited to its transfers (wei)
transferors     Distinct non-zero accounts in its history
==============  ============================================================

Undefined values (prices of a series without priced NFTs, ratios of
unpriced NFTs) are ``None`` and are written as empty cells.

"""

from collections import defaultdict
from typing import Dict, Iterable, List, Mapping, NamedTuple, Optional, Tuple

from ..common.constants import UNLABELED
from ..common.exceptions import IndicatorError
from ..common.mathfuncs import five_number_summary, quarter_of
from ..common.records import Category, NftKey, TransferRecord
from ..graphs.transfer import TransferGraph, count_transferors
from ..utils.io import (parse_address, parse_optional_float, parse_optional_uint, parse_rows, parse_uint,
    read_table, write_table)
from .activity import history_p_value, turnover_ratio
from .prices import PriceModel, fratio, series_prices

SERIES_COLUMNS = ["series", "nft_count", "transfer_count", "turnover", "floor_wei", "highest_wei", "hfratio"]
NFT_COLUMNS = ["contract", "token_id", "n", "p_value", "fratio", "volume_wei", "transferors"]
QUARTERLY_VOLUME_COLUMNS = ["quarter", "category", "volume_wei"]

class SeriesIndicators(NamedTuple):
    series: str
    nft_count: int
    transfer_count: int
    turnover: float
    floor_price: Optional[int]
    highest_price: Optional[int]
    hfratio: Optional[float]

    def to_row(self) -> list:
        return list(self)

    @classmethod
    def from_row(cls, row) -> "SeriesIndicators":
        turnover = parse_optional_float(row[3], "turnover")
        if turnover is None:
            raise ValueError("field 'turnover' is empty")
        return cls(
            parse_address(row[0], "series"),
            parse_uint(row[1], "nft_count"),
            parse_uint(row[2], "transfer_count"),
            turnover,
            parse_optional_uint(row[4], "floor_wei"),
            parse_optional_uint(row[5], "highest_wei"),
            parse_optional_float(row[6], "hfratio"))

class NftIndicators(NamedTuple):
    nft: NftKey
    n: int
    p_value: float
    fratio: Optional[float]
    volume: int
    transferors: int

    def to_row(self) -> list:
        return [self.nft.contract, self.nft.token_id, self.n, self.p_value, self.fratio, self.volume, self.transferors]

    @classmethod
    def from_row(cls, row) -> "NftIndicators":
        p = parse_optional_float(row[3], "p_value")
        if p is None:
            raise ValueError("field 'p_value' is empty")
        return cls(
            NftKey(parse_address(row[0], "contract"), parse_uint(row[1], "token_id")),
            parse_uint(row[2], "n"),
            p,
            parse_optional_float(row[4], "fratio"),
            parse_uint(row[5], "volume_wei"),
            parse_uint(row[6], "transferors"))

class QuarterlyVolume(NamedTuple):
    quarter: str
    category: str
    volume: int

def _series_row(series: str, nfts: int, transfers: int, model: PriceModel) -> SeriesIndicators:
    prices = series_prices(series, model)
    floor, highest = prices if prices is not None else (None, None)
    hfratio = highest/floor if floor else None
    return SeriesIndicators(series, nfts, transfers, turnover_ratio(transfers, nfts), floor, highest, hfratio)

def _nft_row(nft: NftKey, history: List[TransferRecord], model: PriceModel, floor: Optional[int], transferors: int) -> NftIndicators:
    return NftIndicators(nft, len(history), history_p_value(history), fratio(nft, model, floor), model.nft_volume.get(nft, 0), transferors)

def series_indicators(series: str, records: Iterable[TransferRecord], model: PriceModel) -> SeriesIndicators:
    """
    Indicators of one series.

    Raises
    ------
    IndicatorError
        If the series has no NFT in ``records``.

    """
    nfts = set()
    transfers = 0
    for r in records:
        if r.contract == series:
            nfts.add(r.token_id)
            transfers += not r.is_mint
    return _series_row(series, len(nfts), transfers, model)

def nft_indicators(nft: NftKey, records: Iterable[TransferRecord], model: PriceModel, ntg: TransferGraph) -> NftIndicators:
    """
    Indicators of one NFT.

    Parameters
    ----------
    nft : NftKey
        NFT to inspect.
    records : iterable of TransferRecord
        Transfer stream.
    model : PriceModel
        Prices of the stream.
    ntg : TransferGraph
        Transfer graph of the stream, source of the transferor count.

    Raises
    ------
    IndicatorError
        If the NFT has no transfer in ``records``.

    """
    history = [r for r in records if r.nft == nft]
    if not history:
        raise IndicatorError(f"NFT {nft.contract}/{nft.token_id} has no transfer history")
    prices = series_prices(nft.series, model)
    floor = prices[0] if prices is not None else None
    return _nft_row(nft, history, model, floor, count_transferors(ntg, nft))

def compute_indicators(records: Iterable[TransferRecord], model: PriceModel, ntg: TransferGraph = None) -> Tuple[List[SeriesIndicators], List[NftIndicators]]:
    """
    Indicators of every series and NFT of a transfer stream.

    Parameters
    ----------
    records : iterable of TransferRecord
        Transfer stream.
    model : PriceModel
        Prices of the stream, from :func:`attach_values`.
    ntg : TransferGraph, default: None
        Transfer graph of the stream. Built if not given.

    Returns
    -------
    series : list of SeriesIndicators
        Sorted by contract address.
    nfts : list of NftIndicators
        Sorted by contract address and token identifier.

    """
    if ntg is None:
        ntg = TransferGraph(records)
    by_series = defaultdict(list)
    for nft in ntg.history:
        by_series[nft.series].append(nft)
    series_rows, nft_rows = [], []
    for series in sorted(by_series):
        nfts = sorted(by_series[series])
        transfers = sum(not r.is_mint for nft in nfts for r in ntg.history[nft])
        row = _series_row(series, len(nfts), transfers, model)
        series_rows.append(row)
        for nft in nfts:
            nft_rows.append(_nft_row(nft, ntg.history[nft], model, row.floor_price, count_transferors(ntg, nft)))
    return series_rows, nft_rows

def category_of(contract: str, labels: Mapping[str, Category]) -> str:
    label = labels.get(contract)
    return label.value if label is not None else UNLABELED

def quarterly_volume(records: Iterable[TransferRecord], model: PriceModel, labels: Mapping[str, Category]) -> List[QuarterlyVolume]:
    """
    Traded value per UTC quarter and category.

    Contracts without a label are grouped under the ``unlabeled`` category.
    Quarters and categories without traded value are not reported.

    Examples
    --------
    >>> quarterly_volume(records, model, {contract: Category.GAMING})     # 5 wei in May 2022
    [QuarterlyVolume(quarter='2022Q2', category='gaming', volume=5)]

    """
    totals = defaultdict(int)
    for r in records:
        value = model.value_of(r)
        if value:
            totals[(quarter_of(r.timestamp), category_of(r.contract, labels))] += value
    return [QuarterlyVolume(q, c, v) for (q, c), v in sorted(totals.items())]

def category_summaries(series_inds: Iterable[SeriesIndicators], nft_inds: Iterable[NftIndicators], labels: Mapping[str, Category]) -> Dict[str, dict]:
    """
    Five-number summaries of the indicators of each category.

    Returns
    -------
    summaries : dict
        For each category, summaries of ``turnover`` and ``hfratio`` over its
        series and of ``p_value``, ``fratio`` and ``volume`` over its NFTs.
        Undefined values are left out; a summary without values is ``None``.

    """
    series_by_cat = defaultdict(list)
    for s in series_inds:
        series_by_cat[category_of(s.series, labels)].append(s)
    nfts_by_cat = defaultdict(list)
    for x in nft_inds:
        nfts_by_cat[category_of(x.nft.series, labels)].append(x)
    out = {}
    for cat in sorted(set(series_by_cat) | set(nfts_by_cat)):
        series, nfts = series_by_cat[cat], nfts_by_cat[cat]
        out[cat] = {
            "series": len(series),
            "nfts": len(nfts),
            "turnover": five_number_summary(s.turnover for s in series),
            "hfratio": five_number_summary(s.hfratio for s in series),
            "p_value": five_number_summary(x.p_value for x in nfts),
            "fratio": five_number_summary(x.fratio for x in nfts),
            "volume": five_number_summary(x.volume for x in nfts)}
    return out

def write_series_indicators(rows: Iterable[SeriesIndicators], path: str) -> None:
    write_table((r.to_row() for r in rows), SERIES_COLUMNS, path)

def load_series_indicators(path: str, strict: bool = True) -> List[SeriesIndicators]:
    rows, _ = parse_rows(read_table(path, SERIES_COLUMNS), path, SeriesIndicators.from_row, strict)
    return rows

def write_nft_indicators(rows: Iterable[NftIndicators], path: str) -> None:
    write_table((r.to_row() for r in rows), NFT_COLUMNS, path)

def load_nft_indicators(path: str, strict: bool = True) -> List[NftIndicators]:
    rows, _ = parse_rows(read_table(path, NFT_COLUMNS), path, NftIndicators.from_row, strict)
    return rows

def write_quarterly_volume(rows: Iterable[QuarterlyVolume], path: str) -> None:
    write_table(rows, QUARTERLY_VOLUME_COLUMNS, path)
