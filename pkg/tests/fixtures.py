# -*- coding: utf-8 -*-
"""
Test Fixtures
=============

Builders of addresses, event logs and small hand-made markets shared by the
test modules.

"""

from eth_abi import encode

from nftgraph.common.constants import TRANSFER_BATCH_TOPIC, TRANSFER_SINGLE_TOPIC, TRANSFER_TOPIC, ZERO_ADDRESS
from nftgraph.common.records import NftKey, RawLogEvent, Standard, TransferRecord

ZERO = ZERO_ADDRESS

def addr(i: int) -> str:
    """Address ``0x00..0i``. ``addr(0)`` is the zero address."""
    return "0x" + format(i, "040x")

def txh(i: int) -> str:
    return "0x" + format(i, "064x")

def word(value: int) -> bytes:
    return value.to_bytes(32, "big")

def address_word(address: str) -> bytes:
    return bytes(12) + bytes.fromhex(address[2:])

def erc721_log(sender, recipient, token_id, contract=None, block=1, log_index=0, tx=1, timestamp=1_000):
    topics = (TRANSFER_TOPIC, address_word(sender), address_word(recipient), word(token_id))
    return RawLogEvent(contract or addr(0xC0), topics, b"", block, timestamp, txh(tx), log_index)

def erc20_log(sender, recipient, amount, contract=None, block=1, log_index=0, tx=1, timestamp=1_000):
    topics = (TRANSFER_TOPIC, address_word(sender), address_word(recipient))
    return RawLogEvent(contract or addr(0xE0), topics, word(amount), block, timestamp, txh(tx), log_index)

def single_log(sender, recipient, token_id, amount, contract=None, block=1, log_index=0, tx=1, timestamp=1_000):
    topics = (TRANSFER_SINGLE_TOPIC, address_word(sender), address_word(sender), address_word(recipient))
    return RawLogEvent(contract or addr(0xC1), topics, word(token_id) + word(amount), block, timestamp, txh(tx), log_index)

def batch_log(sender, recipient, ids, values, contract=None, block=1, log_index=0, tx=1, timestamp=1_000, data=None):
    topics = (TRANSFER_BATCH_TOPIC, address_word(sender), address_word(sender), address_word(recipient))
    if data is None:
        data = encode(["uint256[]", "uint256[]"], [list(ids), list(values)])
    return RawLogEvent(contract or addr(0xC1), topics, data, block, timestamp, txh(tx), log_index)

class MarketBuilder:
    """Hand-made market: one transaction per transfer."""
    def __init__(self):
        self.records = []
        self.tx_values = {}
        self._n = 0

    def move(self, sender, recipient, contract, token_id, timestamp, value=0, standard=Standard.ERC721, amount=1):
        self._n += 1
        tx = txh(self._n)
        r = TransferRecord(standard, sender, recipient, contract, token_id, amount, timestamp//12, timestamp, tx, self._n, 0)
        self.records.append(r)
        self.tx_values[tx] = value
        return r

# Series whose NFT #1 was pushed up by two accounts trading it back and forth:
# turnover 1.26, HFratio 6.6E+16, and NFT #1 with volume 1E+19 wei, Fratio
# 12499, P value 2.05E+7 s and 2 transferors.
EMOJI_SERIES = addr(0xE5)
EMOJI_NFT = NftKey(EMOJI_SERIES, 1)
EMOJI_FLOOR = 10**14
EMOJI_HIGHEST = 66*10**29
T0 = 1_600_000_000

def emoji_ens_market() -> MarketBuilder:
    m = MarketBuilder()
    minter, a, b, c, d, f, g = addr(0x10), addr(0xA), addr(0xB), addr(0xC), addr(0xD), addr(0xF), addr(0x11)
    # NFT 1: mint to A, then A->B, B->A, A->B over 8.2E+7 s
    m.move(ZERO, a, EMOJI_SERIES, 1, T0 + 1)
    m.move(a, b, EMOJI_SERIES, 1, T0 + 1_000, 4*10**18)
    m.move(b, a, EMOJI_SERIES, 1, T0 + 2_000, 47_501*10**14)
    m.move(a, b, EMOJI_SERIES, 1, T0 + 1 + 82_000_000, 12_499*10**14)
    # NFT 2 at the floor, NFT 3 at the highest price, held by 3 accounts over years
    m.move(ZERO, minter, EMOJI_SERIES, 2, T0 + 2, EMOJI_FLOOR)
    m.move(ZERO, minter, EMOJI_SERIES, 3, T0 + 3, EMOJI_HIGHEST)
    m.move(minter, f, EMOJI_SERIES, 3, T0 + 3 + 10**9)
    m.move(f, g, EMOJI_SERIES, 3, T0 + 3 + 2*10**9)
    # NFT 4: 121 unpriced transfers between C and D
    m.move(ZERO, c, EMOJI_SERIES, 4, T0 + 4)
    for k in range(121):
        sender, recipient = (c, d) if k % 2 == 0 else (d, c)
        m.move(sender, recipient, EMOJI_SERIES, 4, T0 + 10_000 + 10*k)
    for token_id in range(5, 101):
        m.move(ZERO, minter, EMOJI_SERIES, token_id, T0 + token_id)
    return m
