# -*- coding: utf-8 -*-
"""
NFT Transfer Graph
==================

The transfer graph (NTG) is a directed weighted graph among accounts. Each
transfer of an NFT from account :math:`u` to account :math:`v` adds 1 to the
weight of the edge :math:`(u, v)`, so that

.. math::
    \\sum_{(u,v)\\in E} w_{uv} = |\\mathrm{transfers}|

Mints and burns are transfers too: they link the zero address to creators
and holders.

Besides the weighted edges, the graph keeps the chronological transfer
history of every NFT, from which the activeness indicators are computed.

Accounts are indexed in order of first appearance and the weights are held
in a sparse adjacency matrix :math:`\\mathbf{A}\\in\\mathbb{R}^{n\\times n}`
with :math:`A_{uv} = w_{uv}`.

"""

import logging
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple

import numpy as np
import pandas as pd
import scipy.sparse as sp

from ..common.constants import ZERO_ADDRESS
from ..common.exceptions import UnknownNFTError
from ..common.records import NftKey, Standard, TransferRecord, chronological
from ..utils.io import parse_address, parse_rows, parse_uint, read_table, write_table

logger = logging.getLogger(__name__)

NTG_COLUMNS = ["from", "to", "weight"]

class TransferGraph:
    """
    NFT transfer graph.

    Parameters
    ----------
    records : iterable of TransferRecord, default: None
        Transfers, in any order.

    Attributes
    ----------
    nodes : list of str
        Account addresses, in order of first appearance.
    history : dict
        Chronological list of the transfers of each NFT.
    accounts : dict
        Set of accounts involved in transfers of each standard.
    transfers : dict
        Number of transfers of each standard.

    Examples
    --------
    >>> g = TransferGraph(records)
    >>> g.num_nodes, g.num_edges, g.total_weight
    (1204, 3377, 5120)
    >>> g.weight("0xa...", "0xb...")
    2

    """
    def __init__(self, records: Iterable[TransferRecord] = None):
        self.nodes: List[str] = []
        self.index: Dict[str, int] = {}
        self.history: Dict[NftKey, List[TransferRecord]] = {}
        self.accounts: Dict[Standard, Set[str]] = {s: set() for s in Standard}
        self.transfers: Dict[Standard, int] = {s: 0 for s in Standard}
        self._src: Sequence[int] = []
        self._dst: Sequence[int] = []
        self._data: Optional[List[float]] = None
        self._adjacency = None
        if records is not None:
            self._build(list(records))

    def _build(self, records: List[TransferRecord]) -> None:
        n = len(records)
        endpoints = np.empty(2*n, dtype=object)
        endpoints[0::2] = [r.sender for r in records]
        endpoints[1::2] = [r.recipient for r in records]
        codes, uniques = pd.factorize(endpoints)
        self.nodes = uniques.tolist()
        self.index = {a: i for i, a in enumerate(self.nodes)}
        self._src, self._dst = codes[0::2], codes[1::2]
        erc1155 = np.fromiter((r.standard is Standard.ERC1155 for r in records), dtype=bool, count=n)
        for standard, mask in ((Standard.ERC721, ~erc1155), (Standard.ERC1155, erc1155)):
            ids = np.unique(np.concatenate((self._src[mask], self._dst[mask])))
            self.accounts[standard] = {self.nodes[i] for i in ids}
            self.transfers[standard] = int(np.count_nonzero(mask))
        history = self.history
        for r in chronological(records):
            key = (r.contract, r.token_id)
            h = history.get(key)
            if h is None:
                h = history[NftKey(*key)] = []
            h.append(r)

    @classmethod
    def from_edges(cls, edges: Iterable[Tuple[str, str, int]]) -> "TransferGraph":
        """
        Build a graph from weighted edges ``(from, to, weight)``.

        The resulting graph has no per-NFT history. Repeated edges add their
        weights.
        """
        g = cls()
        g._data = []
        for src, dst, w in edges:
            if w < 1:
                raise ValueError(f"Edge weights must be at least 1. Got {w} for ({src}, {dst})")
            g._src.append(g._node(src))
            g._dst.append(g._node(dst))
            g._data.append(float(w))
        return g

    def _node(self, address: str) -> int:
        i = self.index.get(address)
        if i is None:
            i = self.index[address] = len(self.nodes)
            self.nodes.append(address)
        return i

    def adjacency(self) -> sp.csr_matrix:
        """Sparse weighted adjacency matrix, rows are senders."""
        if self._adjacency is None:
            n = len(self.nodes)
            data = self._data if self._data is not None else np.ones(len(self._src))
            A = sp.coo_matrix((data, (self._src, self._dst)), shape=(n, n), dtype=np.float64)
            self._adjacency = A.tocsr()
            self._adjacency.sum_duplicates()
        return self._adjacency

    @property
    def num_nodes(self) -> int:
        return len(self.nodes)

    @property
    def num_edges(self) -> int:
        """Number of distinct ordered pairs of accounts linked by transfers."""
        return self.adjacency().nnz

    @property
    def total_weight(self) -> int:
        return int(round(self.adjacency().sum()))

    @property
    def nfts(self) -> List[NftKey]:
        return list(self.history)

    def weight(self, src: str, dst: str) -> int:
        """Number of transfers from ``src`` to ``dst``."""
        if src not in self.index or dst not in self.index:
            return 0
        return int(self.adjacency()[self.index[src], self.index[dst]])

    def edges(self) -> List[Tuple[str, str, int]]:
        """Weighted edges sorted by sender and recipient address."""
        A = self.adjacency().tocoo()
        rows = [(self.nodes[i], self.nodes[j], int(w)) for i, j, w in zip(A.row, A.col, A.data)]
        return sorted(rows)

    def transfer_history(self, nft: NftKey) -> List[TransferRecord]:
        """
        Chronological transfers of an NFT.

        Raises
        ------
        UnknownNFTError
            If the NFT never moved in the graph.

        """
        try:
            return self.history[nft]
        except KeyError:
            raise UnknownNFTError(f"NFT {nft.contract}/{nft.token_id} has no transfer history") from None

    def degree_sequence(self, direction: str = "out", weighted: bool = True) -> Tuple[List[str], np.ndarray]:
        """
        Degree of every account.

        Parameters
        ----------
        direction : str, default: 'out'
            ``'out'`` counts transfers sent, ``'in'`` transfers received.
        weighted : bool, default: True
            If True, the degree is the number of transfers. Otherwise it is the
            number of distinct counterparties.

        Returns
        -------
        labels : list of str
            Account addresses, aligned with the degrees.
        degrees : numpy.ndarray
            Degrees as integers.

        """
        A = self.adjacency()
        if not weighted:
            A = (A > 0).astype(np.float64)
        if direction == "out":
            d = np.asarray(A.sum(axis=1)).ravel()
        elif direction == "in":
            d = np.asarray(A.sum(axis=0)).ravel()
        else:
            raise ValueError(f"Direction must be 'in' or 'out'. Got '{direction}'")
        return list(self.nodes), np.rint(d).astype(np.int64)

    def summary(self) -> dict:
        """
        Node and edge counts per standard and for the whole graph.

        Accounts active in both standards are counted once in the union,
        which is why the per-standard account counts may add up to more than
        the total.
        """
        out = {
            "accounts": self.num_nodes,
            "edges": self.num_edges,
            "transfers": self.total_weight,
            "nfts": len(self.history),
            "transfers_per_account": self.total_weight/self.num_nodes if self.num_nodes else None,
            "accounts_in_both_standards": len(self.accounts[Standard.ERC721] & self.accounts[Standard.ERC1155])}
        for s in Standard:
            out[str(s)] = {"accounts": len(self.accounts[s]), "transfers": self.transfers[s]}
        return out

    def write_csv(self, path: str) -> None:
        """Write the edge list as ``from,to,weight``."""
        write_table(self.edges(), NTG_COLUMNS, path)

def build_ntg(records: Iterable[TransferRecord]) -> TransferGraph:
    """Build the transfer graph of a transfer stream."""
    return TransferGraph(records)

def load_edges_csv(path: str, strict: bool = False) -> TransferGraph:
    """Read a ``from,to,weight`` edge list written by :meth:`TransferGraph.write_csv`."""
    parse = lambda row: (parse_address(row[0], "from"), parse_address(row[1], "to"), parse_uint(row[2], "weight"))
    edges, _ = parse_rows(read_table(path, NTG_COLUMNS), path, parse, strict)
    return TransferGraph.from_edges(edges)

def count_transferors(g: TransferGraph, nft: NftKey) -> int:
    """
    Number of distinct accounts that sent or received an NFT.

    The zero address, sender of the mint and recipient of a burn, is not an
    account and is not counted.

    Parameters
    ----------
    g : TransferGraph
        Transfer graph holding the history of the NFT.
    nft : NftKey
        NFT to inspect.

    Raises
    ------
    UnknownNFTError
        If the NFT has no history in ``g``.

    Examples
    --------
    >>> count_transferors(g, nft)     # mint to A, then A->B, B->A, A->B
    2

    """
    accounts = set()
    for r in g.transfer_history(nft):
        accounts.add(r.sender)
        accounts.add(r.recipient)
    accounts.discard(ZERO_ADDRESS)
    return len(accounts)
