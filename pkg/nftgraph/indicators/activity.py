# -*- coding: utf-8 -*-
"""
Activeness
==========

Indicators of how actively NFTs change hands.

Turnover Ratio
--------------

The turnover ratio of a series is the number of its transfers divided by
the number of its NFTs, over its whole history:

.. math::
    \\mathrm{turnover} = \\frac{|\\{\\mathrm{non\\text{-}mint\\ transfers}\\}|}{|\\{\\mathrm{NFTs}\\}|}

Mints are left out. Counting them would add 1.0 to the ratio of every
series.

P Value
-------

The P value of an NFT is the average time between its transfers:

.. math::
    P = \\frac{|T_{last} - T_{first}|}{N}

where :math:`T_{first}` and :math:`T_{last}` are the times of its first and
last transfers and :math:`N` the number of transfers, mint included, in
seconds per transfer. A small P means the trades concentrate in a short
period. An NFT transferred once has :math:`P=0`.

"""

from typing import Iterable, List

from ..common.exceptions import IndicatorError
from ..common.records import NftKey, TransferRecord

def turnover_ratio(transfer_count: int, nft_count: int) -> float:
    """Turnover ratio from its counts."""
    if nft_count < 1:
        raise IndicatorError("Turnover of a series without NFTs is undefined")
    return transfer_count/nft_count

def turnover(series: str, records: Iterable[TransferRecord]) -> float:
    """
    Turnover ratio of a series.

    Parameters
    ----------
    series : str
        Contract address of the series.
    records : iterable of TransferRecord
        Transfer stream. Records of other series are ignored.

    Raises
    ------
    IndicatorError
        If the series has no NFT in ``records``.

    Examples
    --------
    >>> turnover(series, records)     # 10 NFTs, 35 transfers besides the mints
    3.5

    """
    nfts = set()
    transfers = 0
    for r in records:
        if r.contract != series:
            continue
        nfts.add(r.token_id)
        if not r.is_mint:
            transfers += 1
    return turnover_ratio(transfers, len(nfts))

def history_p_value(history: List[TransferRecord]) -> float:
    """P value of a non-empty transfer history."""
    if not history:
        raise IndicatorError("P value of an NFT without transfers is undefined")
    times = [r.timestamp for r in history]
    return abs(max(times) - min(times))/len(history)

def p_value(nft: NftKey, records: Iterable[TransferRecord]) -> float:
    """
    P value of an NFT, in seconds per transfer.

    Parameters
    ----------
    nft : NftKey
        NFT to inspect.
    records : iterable of TransferRecord
        Transfer stream. Records of other NFTs are ignored.

    Raises
    ------
    IndicatorError
        If the NFT has no transfer in ``records``.

    Examples
    --------
    >>> p_value(nft, records)     # transfers at t = 0, 100, 200
    66.66666666666667

    """
    return history_p_value([r for r in records if r.contract == nft.contract and r.token_id == nft.token_id])
