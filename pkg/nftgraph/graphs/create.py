# -*- coding: utf-8 -*-
"""
NFT Create Graph
================

The create graph (NCG) is a directed bipartite graph whose edges go from an
account to each NFT it created, labeled with the creation time.

An NFT is created by its mint: the first transfer whose sender is the zero
address. The creator is the recipient of that mint.

Datasets that start after an NFT was minted show it first in the middle of
its life. Such an NFT still receives one creation edge, from the sender of
its first transfer, flagged as ``synthetic`` so statistics can exclude it.
Hence the create graph has exactly one edge per NFT, as many as the hold
graph.

A second mint of the same NFT (possible after a burn, or with ERC1155) does
not replace the first one. It is counted in :attr:`CreateGraph.duplicate_mints`.

"""

import logging
from collections import Counter
from typing import Dict, Iterable, List, NamedTuple, Tuple

import numpy as np

from ..common.records import NftKey, Standard, TransferRecord, chronological
from ..utils.io import write_table

logger = logging.getLogger(__name__)

NCG_COLUMNS = ["creator", "contract", "token_id", "timestamp"]

class CreationEdge(NamedTuple):
    """Creation of one NFT."""
    creator: str
    nft: NftKey
    timestamp: int
    standard: Standard
    synthetic: bool = False

class CreateGraph:
    """
    NFT create graph.

    Parameters
    ----------
    records : iterable of TransferRecord, default: None
        Transfers, in any order.

    Attributes
    ----------
    edges : dict
        Creation edge of each NFT, keyed by :class:`NftKey`.
    duplicate_mints : int
        Mints of NFTs that already had a creation edge.

    Examples
    --------
    >>> ncg = CreateGraph(records)
    >>> ncg.num_edges
    12
    >>> ncg.edges[NftKey("0xabc...", 7)].creator
    '0x5a1e...'

    """
    def __init__(self, records: Iterable[TransferRecord] = None):
        self.edges: Dict[NftKey, CreationEdge] = {}
        self.duplicate_mints = 0
        if records is not None:
            for r in chronological(records):
                self.add(r)
            if self.duplicate_mints:
                logger.warning("Ignored %d duplicate mints; the first mint of each NFT is kept", self.duplicate_mints)

    def add(self, r: TransferRecord) -> None:
        """Fold one transfer into the graph. Transfers must come in chronological order."""
        current = self.edges.get((r.contract, r.token_id))
        if r.is_mint:
            if current is None or current.synthetic:
                nft = current.nft if current is not None else r.nft
                self.edges[nft] = CreationEdge(r.recipient, nft, r.timestamp, r.standard, False)
            else:
                self.duplicate_mints += 1
        elif current is None:
            nft = r.nft
            self.edges[nft] = CreationEdge(r.sender, nft, r.timestamp, r.standard, True)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    @property
    def num_synthetic(self) -> int:
        return sum(e.synthetic for e in self.edges.values())

    def creators(self, include_synthetic: bool = False) -> Counter:
        """Number of NFTs created by each account."""
        return Counter(e.creator for e in self.edges.values() if include_synthetic or not e.synthetic)

    def degree_sequence(self, direction: str = "out", weighted: bool = True) -> Tuple[List, np.ndarray]:
        """
        Degrees of one side of the graph.

        The out-degree is taken over creators (NFTs created, synthetic edges
        excluded) and the in-degree over NFTs, each of which has one creator.
        The graph has no parallel edges, so ``weighted`` has no effect.
        """
        if direction == "out":
            counts = self.creators()
            labels = sorted(counts)
            return labels, np.array([counts[a] for a in labels], dtype=np.int64)
        if direction == "in":
            labels = sorted(self.edges)
            return labels, np.ones(len(labels), dtype=np.int64)
        raise ValueError(f"Direction must be 'in' or 'out'. Got '{direction}'")

    def summary(self) -> dict:
        """Counts of NFTs and creators, per standard and overall."""
        real = [e for e in self.edges.values() if not e.synthetic]
        out = {
            "nfts": self.num_edges,
            "synthetic_edges": self.num_synthetic,
            "duplicate_mints": self.duplicate_mints,
            "creators": len({e.creator for e in real})}
        for standard in Standard:
            edges = [e for e in real if e.standard is standard]
            out[str(standard)] = {"nfts": len(edges), "creators": len({e.creator for e in edges})}
        return out

    def write_csv(self, path: str) -> None:
        """Write the edge list as ``creator,contract,token_id,timestamp``."""
        rows = ((e.creator, e.nft.contract, e.nft.token_id, e.timestamp) for _, e in sorted(self.edges.items()))
        write_table(rows, NCG_COLUMNS, path)

def build_ncg(records: Iterable[TransferRecord]) -> CreateGraph:
    """Build the create graph of a transfer stream."""
    return CreateGraph(records)
