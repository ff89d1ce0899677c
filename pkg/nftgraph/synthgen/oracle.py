# -*- coding: utf-8 -*-
"""
Indicator Oracle
================

Brute-force recomputation of the series and NFT indicators, straight from
their definitions and independent from :mod:`nftgraph.indicators`.

Only meant for desk-scale markets, to check the indicator tables.

"""

from typing import Dict, Iterable, Mapping, Tuple

from ..common.constants import ZERO_ADDRESS
from ..common.records import NftKey, TransferRecord

def oracle_indicators(records: Iterable[TransferRecord], tx_values: Mapping[str, int]) -> Tuple[Dict[str, dict], Dict[NftKey, dict]]:
    """
    Indicators of every series and NFT, by direct enumeration.

    Returns
    -------
    series : dict
        For each contract: ``nft_count``, ``transfer_count``, ``turnover``,
        ``floor``, ``highest`` and ``hfratio``.
    nfts : dict
        For each NFT: ``n``, ``p_value``, ``fratio``, ``volume`` and
        ``transferors``.

    """
    records = list(records)
    # Value credited to every transfer
    by_tx = {}
    for r in records:
        by_tx.setdefault(r.tx_hash, []).append(r)
    credit = {}
    for tx, moved in by_tx.items():
        moved = sorted(moved, key=lambda r: (r.log_index, r.batch_pos))
        value = tx_values.get(tx, 0)
        for i, r in enumerate(moved):
            credit[(r.tx_hash, r.log_index, r.batch_pos)] = value//len(moved) + (value % len(moved) if i == 0 else 0)
    histories = {}
    for r in records:
        histories.setdefault((r.contract, r.token_id), []).append(r)
    nfts = {}
    prices = {}
    for (contract, token_id), history in histories.items():
        history.sort(key=lambda r: (r.timestamp, r.block_number, r.log_index, r.batch_pos))
        values = [credit[(r.tx_hash, r.log_index, r.batch_pos)] for r in history]
        positive = [v for v in values if v > 0]
        prices[(contract, token_id)] = positive[-1] if positive else 0
        accounts = {r.sender for r in history} | {r.recipient for r in history}
        accounts.discard(ZERO_ADDRESS)
        nfts[NftKey(contract, token_id)] = {
            "n": len(history),
            "p_value": (history[-1].timestamp - history[0].timestamp)/len(history),
            "volume": sum(values),
            "transferors": len(accounts)}
    by_series = {}
    for k in histories:
        by_series.setdefault(k[0], []).append(k)
    series = {}
    for contract in sorted(by_series):
        keys = by_series[contract]
        transfers = sum(1 for k in keys for r in histories[k] if r.sender != ZERO_ADDRESS)
        priced = [prices[k] for k in keys if prices[k] > 0]
        floor = min(priced) if priced else None
        highest = max(priced) if priced else None
        series[contract] = {
            "nft_count": len(keys),
            "transfer_count": transfers,
            "turnover": transfers/len(keys),
            "floor": floor,
            "highest": highest,
            "hfratio": highest/floor if floor else None}
        for k in keys:
            nfts[NftKey(*k)]["fratio"] = prices[k]/floor if floor and prices[k] > 0 else None
    return series, nfts
