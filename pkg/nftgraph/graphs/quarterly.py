# -*- coding: utf-8 -*-
"""
Quarterly Activity
==================

Counts of graph activity per UTC calendar quarter and token standard.

==============  ==========================================================================
Role            Count per quarter and standard
==============  ==========================================================================
creators        Distinct accounts receiving a mint (synthetic creations excluded)
created_nfts    NFTs minted (synthetic creations excluded)
transferors     Distinct non-zero addresses sending or receiving a transfer
transfers       Transfers, mints and burns included
holders         Distinct addresses (zero address included) holding an NFT at quarter end
==============  ==========================================================================

Activity roles only report quarters with activity. Holders are reported for
every quarter between the first and the last record of the dataset, and for
every standard seen in it.

"""

from collections import defaultdict
from enum import Enum
from typing import Dict, Iterable, List, NamedTuple, Optional

from ..common.constants import ZERO_ADDRESS
from ..common.mathfuncs import quarter_of, quarter_range
from ..common.records import Standard, TransferRecord, chronological
from .create import CreateGraph

class Role(str, Enum):
    CREATORS = "creators"
    CREATED_NFTS = "created_nfts"
    TRANSFERORS = "transferors"
    TRANSFERS = "transfers"
    HOLDERS = "holders"

    def __str__(self) -> str:
        return self.value

class QuarterlyCount(NamedTuple):
    quarter: str
    standard: Standard
    count: int

def quarterly_counts(records: Iterable[TransferRecord], role: str, ncg: Optional[CreateGraph] = None) -> List[QuarterlyCount]:
    """
    Count accounts, NFTs or transfers per quarter.

    Parameters
    ----------
    records : iterable of TransferRecord
        Transfer stream.
    role : str or Role
        What to count. See the table above.
    ncg : CreateGraph, default: None
        Create graph of ``records``, built if not given and needed.

    Returns
    -------
    counts : list of QuarterlyCount
        Sorted by quarter, then standard.

    Examples
    --------
    >>> quarterly_counts(records, "created_nfts")     # 2 mints to A in 2022Q1
    [QuarterlyCount(quarter='2022Q1', standard=<Standard.ERC721: 'ERC721'>, count=2)]

    """
    role = Role(role)
    records = chronological(records)
    if role in (Role.CREATORS, Role.CREATED_NFTS):
        ncg = ncg if ncg is not None else CreateGraph(records)
        edges = [e for e in ncg.edges.values() if not e.synthetic]
        if role is Role.CREATED_NFTS:
            return _tally((quarter_of(e.timestamp), e.standard, e.nft) for e in edges)
        return _tally((quarter_of(e.timestamp), e.standard, e.creator) for e in edges)
    if role is Role.TRANSFERS:
        return _tally((quarter_of(r.timestamp), r.standard, i) for i, r in enumerate(records))
    if role is Role.TRANSFERORS:
        items = []
        for r in records:
            q = quarter_of(r.timestamp)
            items.extend((q, r.standard, a) for a in (r.sender, r.recipient) if a != ZERO_ADDRESS)
        return _tally(items)
    return _holders_at_quarter_end(records)

def _tally(items) -> List[QuarterlyCount]:
    buckets = defaultdict(set)
    for quarter, standard, member in items:
        buckets[(quarter, standard)].add(member)
    return [QuarterlyCount(q, s, len(m)) for (q, s), m in sorted(buckets.items(), key=lambda kv: (kv[0][0], kv[0][1].value))]

def _holders_at_quarter_end(records: List[TransferRecord]) -> List[QuarterlyCount]:
    if not records:
        return []
    standards = sorted({r.standard for r in records}, key=lambda s: s.value)
    holder = {}
    held: Dict[Standard, Dict[str, int]] = {s: defaultdict(int) for s in standards}
    counts = []
    i = 0
    for quarter in quarter_range(quarter_of(records[0].timestamp), quarter_of(records[-1].timestamp)):
        while i < len(records) and quarter_of(records[i].timestamp) <= quarter:
            r = records[i]
            previous = holder.get(r.nft)
            if previous is not None:
                held[r.standard][previous] -= 1
                if not held[r.standard][previous]:
                    del held[r.standard][previous]
            holder[r.nft] = r.recipient
            held[r.standard][r.recipient] += 1
            i += 1
        counts.extend(QuarterlyCount(quarter, s, len(held[s])) for s in standards)
    return counts
