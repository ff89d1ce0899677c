# -*- coding: utf-8 -*-
"""
NFT Hold Graph
==============

The hold graph (NHG) links every NFT to the account holding it most recently:
the recipient of its latest transfer, mint included. Transfers with equal
timestamps are ordered by their position on chain, i.e. by block number, log
index and position within a batch.

A burned NFT is held by the zero address, which therefore usually appears as
the largest holder.

Holdings are not balances: an ERC1155 token is attributed to the recipient
of its latest transfer, whatever the amounts moved.

"""

from collections import Counter
from typing import Dict, Iterable, List, Mapping, NamedTuple, Tuple

import numpy as np

from ..common.records import NftKey, Standard, TransferRecord, chronological
from ..utils.io import write_table

NHG_COLUMNS = ["contract", "token_id", "holder", "since"]

class Holding(NamedTuple):
    """Latest holder of an NFT and the time it received it."""
    holder: str
    since: int
    standard: Standard

class HolderValue(NamedTuple):
    """NFTs held by one account and their total price."""
    erc721: int
    erc1155: int
    value_wei: int

class HoldGraph:
    """
    NFT hold graph.

    Parameters
    ----------
    records : iterable of TransferRecord, default: None
        Transfers, in any order.

    Attributes
    ----------
    edges : dict
        :class:`Holding` of each NFT, keyed by :class:`NftKey`.

    """
    def __init__(self, records: Iterable[TransferRecord] = None):
        self.edges: Dict[NftKey, Holding] = {}
        if records is not None:
            latest = {(r.contract, r.token_id): r for r in chronological(records)}
            for key, r in latest.items():
                nft = NftKey(*key)
                self.edges[nft] = Holding(r.recipient, r.timestamp, r.standard)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def holder(self, nft: NftKey) -> str:
        return self.edges[nft].holder

    def holdings(self) -> Counter:
        """Number of NFTs held by each account."""
        return Counter(h.holder for h in self.edges.values())

    def degree_sequence(self, direction: str = "in", weighted: bool = True) -> Tuple[List, np.ndarray]:
        """
        Degrees of one side of the graph.

        The in-degree is taken over holders (NFTs held) and the out-degree over
        NFTs, each of which has one holder.
        """
        if direction == "in":
            counts = self.holdings()
            labels = sorted(counts)
            return labels, np.array([counts[a] for a in labels], dtype=np.int64)
        if direction == "out":
            labels = sorted(self.edges)
            return labels, np.ones(len(labels), dtype=np.int64)
        raise ValueError(f"Direction must be 'in' or 'out'. Got '{direction}'")

    def summary(self) -> dict:
        """Counts of NFTs and holders, per standard and overall."""
        per_standard = {s: {h.holder for h in self.edges.values() if h.standard is s} for s in Standard}
        out = {
            "nfts": self.num_edges,
            "holders": len({h.holder for h in self.edges.values()}),
            "holders_in_both_standards": len(per_standard[Standard.ERC721] & per_standard[Standard.ERC1155])}
        for s in Standard:
            out[str(s)] = {
                "nfts": sum(h.standard is s for h in self.edges.values()),
                "holders": len(per_standard[s])}
        return out

    def write_csv(self, path: str) -> None:
        """Write the edge list as ``contract,token_id,holder,since``."""
        rows = ((nft.contract, nft.token_id, h.holder, h.since) for nft, h in sorted(self.edges.items()))
        write_table(rows, NHG_COLUMNS, path)

def build_nhg(records: Iterable[TransferRecord]) -> HoldGraph:
    """Build the hold graph of a transfer stream."""
    return HoldGraph(records)

def holder_values(nhg: HoldGraph, prices: Mapping[NftKey, int]) -> Dict[str, HolderValue]:
    """
    NFTs held by each account, per standard, and their total price.

    Parameters
    ----------
    nhg : HoldGraph
        Hold graph.
    prices : mapping
        Price in wei of each priced NFT, e.g. ``PriceModel.nft_price``.
        Unpriced NFTs add nothing to the value.

    Returns
    -------
    values : dict
        :class:`HolderValue` of each holder.

    """
    erc721, erc1155, value = Counter(), Counter(), Counter()
    for nft, h in nhg.edges.items():
        (erc721 if h.standard is Standard.ERC721 else erc1155)[h.holder] += 1
        value[h.holder] += prices.get(nft, 0)
    holders = set(erc721) | set(erc1155)
    return {a: HolderValue(erc721[a], erc1155[a], value[a]) for a in sorted(holders)}
