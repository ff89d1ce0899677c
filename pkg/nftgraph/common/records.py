# -*- coding: utf-8 -*-
"""
Records
=======

Canonical record types shared by every submodule.

Addresses and hashes are lower-case ``0x``-prefixed hexadecimal strings.
Token identifiers, amounts and wei values are Python integers, which hold any
unsigned 256-bit value exactly.

The records are named tuples: they are immutable, hashable, cheap to hold by
the million, and compare element-wise.

"""

from enum import Enum
from operator import attrgetter
from typing import Iterable, List, NamedTuple, Tuple

from .constants import ZERO_ADDRESS

class Standard(str, Enum):
    """Token standard of a transfer."""
    ERC721 = "ERC721"
    ERC1155 = "ERC1155"

    def __str__(self) -> str:
        return self.value

class Category(str, Enum):
    """Category label of an NFT series."""
    ART = "art"
    COLLECTIBLES = "collectibles"
    ENS = "ens"
    MUSIC = "music"
    SPORTS = "sports"
    GAMING = "gaming"
    DECENTRALAND = "decentraland"

    def __str__(self) -> str:
        return self.value

class RawLogEvent(NamedTuple):
    """
    Undecoded Ethereum event log.

    Attributes
    ----------
    contract_address : str
        Emitting contract.
    topics : tuple of bytes
        Indexed 32-byte words. ``topics[0]`` is the event signature hash.
    data : bytes
        Non-indexed, ABI-encoded payload.
    block_number : int
        Block containing the log.
    timestamp : int
        Block timestamp in unix seconds.
    tx_hash : str
        Hash of the emitting transaction.
    log_index : int
        Position of the log within its block.

    """
    contract_address: str
    topics: Tuple[bytes, ...]
    data: bytes
    block_number: int
    timestamp: int
    tx_hash: str
    log_index: int

class NftKey(NamedTuple):
    """Identity of a single NFT. Its series is the contract alone."""
    contract: str
    token_id: int

    @property
    def series(self) -> str:
        return self.contract

class TransferRecord(NamedTuple):
    """
    One decoded NFT movement.

    A record whose ``sender`` is the zero address is a mint; one whose
    ``recipient`` is the zero address is a burn. ``amount`` is always 1 for
    ERC721. ``batch_pos`` is the position of the pair inside an ERC1155
    ``TransferBatch`` and 0 otherwise.
    """
    standard: Standard
    sender: str
    recipient: str
    contract: str
    token_id: int
    amount: int
    block_number: int
    timestamp: int
    tx_hash: str
    log_index: int
    batch_pos: int = 0

    @property
    def nft(self) -> NftKey:
        return NftKey(self.contract, self.token_id)

    @property
    def is_mint(self) -> bool:
        return self.sender == ZERO_ADDRESS

    @property
    def order_key(self) -> Tuple[int, int, int, int]:
        """Chronological key: timestamp, then position on chain."""
        return _ORDER_KEY(self)

_ORDER_KEY = attrgetter("timestamp", "block_number", "log_index", "batch_pos")

def chronological(records: Iterable[TransferRecord]) -> List[TransferRecord]:
    """
    Transfers sorted by :attr:`TransferRecord.order_key`.

    The sort is stable, so transfers with equal keys keep their input order.
    """
    return sorted(records, key=_ORDER_KEY)

class TxValueRecord(NamedTuple):
    """Native currency (wei) attached to a transaction."""
    tx_hash: str
    value_wei: int

class CategoryLabel(NamedTuple):
    """Category of an NFT series."""
    contract: str
    category: Category

class DescriptiveText(NamedTuple):
    """Name and description of an NFT series."""
    contract: str
    name: str
    description: str
