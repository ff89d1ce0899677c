# -*- coding: utf-8 -*-
"""
NFT Graph
=========

Graph analysis of NFT trading on Ethereum and detection of NFTs whose prices
were inflated by trades among a few accounts.

Transfers of ERC721 and ERC1155 tokens are decoded from event logs and
arranged in three graphs: who created which NFT, who sent NFTs to whom, and
who holds which NFT. Indicators of activeness and value computed over series
and single NFTs feed a threshold-based bubble detector.

"""

from . import common
from . import utils
from . import ingest
from . import graphs
from . import indicators
from . import detection
from . import synthgen
