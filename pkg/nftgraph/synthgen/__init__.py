# -*- coding: utf-8 -*-
"""
Synthetic NFT markets with known ground truth, and a brute-force indicator
oracle to check the pipeline against.

"""

from .generator import RNG_NAME, WashRing, MarketSpec, GroundTruth, MarketGenerator, generate, to_raw_logs
from .oracle import oracle_indicators
