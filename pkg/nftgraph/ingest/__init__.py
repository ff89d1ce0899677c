# -*- coding: utf-8 -*-
"""
Acquisition of NFT transfers: raw logs from a JSON-RPC node, their decoding
into transfer records, and word counts of series descriptions.

"""

from .decoders import decode_erc721_transfer, decode_erc1155_single, decode_erc1155_batch, decode_event
from .decoders import LogParser, parse_log_stream
from .rpc import RPCFetcher, fetch_logs_rpc
from .texts import tokenize, term_frequency
