# -*- coding: utf-8 -*-
"""
Event Log Decoders
==================

Decode raw Ethereum event logs into :class:`TransferRecord` following the
token standards ERC721 [EIP721]_ and ERC1155 [EIP1155]_.

Three events move NFTs:

=====================  ==========  =======================================
Event                  Topics      Payload (``data``)
=====================  ==========  =======================================
``Transfer``           4           empty; ``from``, ``to`` and ``tokenId``
                                   are indexed
``TransferSingle``     4           ``id`` and ``value`` as two words
``TransferBatch``      4           ``ids`` and ``values`` as two dynamic
                                   ``uint256[]`` arrays
=====================  ==========  =======================================

ERC20 emits a ``Transfer`` event with the same signature hash, but with only
``from`` and ``to`` indexed (3 topics). A log is therefore decoded as ERC721
only when it carries exactly 4 topics.

Each decoder returns ``None`` (or an empty list) for logs of another shape,
and raises :class:`DecodeError` when the shape matches but the payload is
malformed.

A stream of logs is decoded with :class:`LogParser`, which drops non-NFT logs
silently and, in lenient mode, counts and skips malformed ones:

.. code:: python

    >>> parser = LogParser(strict=False)
    >>> records = parser.parse(events)
    >>> parser.dropped, parser.malformed
    (1, 0)

References
----------
.. [EIP721] W. Entriken, D. Shirley, J. Evans, N. Sachs. ERC-721: Non-Fungible
    Token Standard. (https://eips.ethereum.org/EIPS/eip-721)
.. [EIP1155] W. Radomski, A. Cooke, P. Castonguay, J. Therien, E. Binet,
    R. Sandford. ERC-1155: Multi Token Standard.
    (https://eips.ethereum.org/EIPS/eip-1155)

"""

import logging
from concurrent.futures import ProcessPoolExecutor
from typing import List, Optional, Sequence

from eth_abi import decode as abi_decode
from eth_abi.exceptions import DecodingError

from ..common.constants import TRANSFER_TOPIC, TRANSFER_SINGLE_TOPIC, TRANSFER_BATCH_TOPIC, WORD_BYTES
from ..common.exceptions import DecodeError
from ..common.mathfuncs import word_to_address, word_to_int
from ..common.records import RawLogEvent, Standard, TransferRecord

logger = logging.getLogger(__name__)

def decode_erc721_transfer(ev: RawLogEvent) -> Optional[TransferRecord]:
    """
    Decode an ERC721 ``Transfer(address,address,uint256)`` log.

    Parameters
    ----------
    ev : RawLogEvent
        Raw log.

    Returns
    -------
    record : TransferRecord or None
        Decoded transfer with ``amount=1``, or ``None`` if the log is not an
        ERC721 transfer (other signature, or the 3-topic ERC20 shape).

    Raises
    ------
    DecodeError
        If an address topic has nonzero padding.

    """
    topics = ev.topics
    if len(topics) != 4 or topics[0] != TRANSFER_TOPIC:
        return None
    if len(topics[3]) != WORD_BYTES:
        raise DecodeError(f"Field 'tokenId' must be a {WORD_BYTES}-byte word")
    return TransferRecord(
        Standard.ERC721,
        word_to_address(topics[1], "from"),
        word_to_address(topics[2], "to"),
        ev.contract_address,
        word_to_int(topics[3]),
        1,
        ev.block_number,
        ev.timestamp,
        ev.tx_hash,
        ev.log_index,
        0)

def decode_erc1155_single(ev: RawLogEvent) -> Optional[TransferRecord]:
    """
    Decode an ERC1155 ``TransferSingle`` log.

    The indexed topics are ``operator``, ``from`` and ``to``. The payload holds
    ``id`` and ``value`` as two 32-byte words.

    Raises
    ------
    DecodeError
        If the payload is shorter than 64 bytes, or an address topic has
        nonzero padding.

    """
    topics = ev.topics
    if len(topics) != 4 or topics[0] != TRANSFER_SINGLE_TOPIC:
        return None
    data = ev.data
    if len(data) < 2*WORD_BYTES:
        raise DecodeError(f"TransferSingle data must hold {2*WORD_BYTES} bytes. Got {len(data)}")
    return TransferRecord(
        Standard.ERC1155,
        word_to_address(topics[2], "from"),
        word_to_address(topics[3], "to"),
        ev.contract_address,
        word_to_int(data[:WORD_BYTES]),
        word_to_int(data[WORD_BYTES:2*WORD_BYTES]),
        ev.block_number,
        ev.timestamp,
        ev.tx_hash,
        ev.log_index,
        0)

def decode_erc1155_batch(ev: RawLogEvent) -> List[TransferRecord]:
    """
    Decode an ERC1155 ``TransferBatch`` log.

    The payload is the ABI encoding of ``(uint256[] ids, uint256[] values)``:
    two offset words, then for each array a length word followed by its
    elements. One record is emitted per ``(id, value)`` pair, with
    ``batch_pos`` set to the position in the arrays.

    Returns
    -------
    records : list of TransferRecord
        Empty if the log is not a ``TransferBatch`` or both arrays are empty.

    Raises
    ------
    DecodeError
        If the arrays have different lengths, or an offset or length points
        outside of the payload.

    """
    topics = ev.topics
    if len(topics) != 4 or topics[0] != TRANSFER_BATCH_TOPIC:
        return []
    sender = word_to_address(topics[2], "from")
    recipient = word_to_address(topics[3], "to")
    try:
        ids, values = abi_decode(["uint256[]", "uint256[]"], ev.data)
    except (DecodingError, OverflowError, ValueError) as e:
        raise DecodeError(f"TransferBatch data is not a valid (uint256[], uint256[]) encoding: {e}") from e
    if len(ids) != len(values):
        raise DecodeError(f"TransferBatch arrays differ in length: {len(ids)} ids, {len(values)} values")
    return [TransferRecord(
        Standard.ERC1155, sender, recipient, ev.contract_address, token_id, amount,
        ev.block_number, ev.timestamp, ev.tx_hash, ev.log_index, pos)
        for pos, (token_id, amount) in enumerate(zip(ids, values))]

def decode_event(ev: RawLogEvent) -> List[TransferRecord]:
    """
    Apply the three decoders to a single log.

    Returns
    -------
    records : list of TransferRecord
        Empty for non-NFT logs.

    """
    if not ev.topics:
        return []
    topic0 = ev.topics[0]
    if topic0 == TRANSFER_TOPIC:
        record = decode_erc721_transfer(ev)
        return [] if record is None else [record]
    if topic0 == TRANSFER_SINGLE_TOPIC:
        record = decode_erc1155_single(ev)
        return [] if record is None else [record]
    if topic0 == TRANSFER_BATCH_TOPIC:
        return decode_erc1155_batch(ev)
    return []

class LogParser:
    """
    Decoder of log streams.

    Parameters
    ----------
    strict : bool, default: False
        If True, the first malformed log raises :class:`DecodeError`.
        Otherwise malformed logs are counted and skipped.
    jobs : int, default: 1
        Number of worker processes. The stream is split in contiguous
        partitions whose results are concatenated in order.

    Attributes
    ----------
    dropped : int
        Logs that are not NFT transfers.
    malformed : int
        Logs skipped because their payload could not be decoded.
    decoded : int
        Logs that produced at least one record.

    """
    def __init__(self, strict: bool = False, jobs: int = 1):
        self.strict = strict
        self.jobs = max(1, int(jobs))
        self.reset()

    def reset(self) -> None:
        self.dropped = 0
        self.malformed = 0
        self.decoded = 0

    def parse(self, events: Sequence[RawLogEvent]) -> List[TransferRecord]:
        """
        Decode a stream of logs ordered by ``(block_number, log_index)``.

        The output keeps the input order, with batch pairs in array order.
        Counters accumulate over successive calls until :meth:`reset`.

        """
        events = list(events)
        if self.jobs > 1 and len(events) > self.jobs:
            size = -(-len(events)//self.jobs)
            parts = [events[i:i+size] for i in range(0, len(events), size)]
            with ProcessPoolExecutor(max_workers=self.jobs) as pool:
                results = list(pool.map(_parse_partition, parts, [self.strict]*len(parts)))
        else:
            results = [_parse_partition(events, self.strict)]
        records = []
        for part, dropped, malformed, decoded in results:
            records.extend(part)
            self.dropped += dropped
            self.malformed += malformed
            self.decoded += decoded
        logger.info("Decoded %d records from %d logs (%d non-NFT dropped, %d malformed skipped)",
            len(records), len(events), self.dropped, self.malformed)
        return records

def _is_batch(ev: RawLogEvent) -> bool:
    return len(ev.topics) == 4 and ev.topics[0] == TRANSFER_BATCH_TOPIC

def _parse_partition(events: Sequence[RawLogEvent], strict: bool):
    records = []
    dropped = malformed = decoded = 0
    for ev in events:
        try:
            out = decode_event(ev)
        except DecodeError as e:
            if strict:
                raise DecodeError(f"Log {ev.tx_hash}:{ev.log_index}: {e}") from e
            logger.debug("Skipping malformed log %s:%d: %s", ev.tx_hash, ev.log_index, e)
            malformed += 1
            continue
        if out or _is_batch(ev):
            records.extend(out)
            decoded += 1
        else:
            dropped += 1
    return records, dropped, malformed, decoded

def parse_log_stream(events: Sequence[RawLogEvent], strict: bool = False, jobs: int = 1) -> List[TransferRecord]:
    """
    Decode a stream of logs into transfer records.

    Shortcut for ``LogParser(strict, jobs).parse(events)``. Use
    :class:`LogParser` directly to read the dropped and malformed counts.

    """
    return LogParser(strict=strict, jobs=jobs).parse(events)
