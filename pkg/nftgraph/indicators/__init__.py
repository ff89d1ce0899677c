# -*- coding: utf-8 -*-
"""
Activeness and value indicators of NFT series and single NFTs.

"""

from .prices import PriceModel, attach_values, split_value, series_prices, fratio
from .activity import turnover, p_value
from .tables import SeriesIndicators, NftIndicators, QuarterlyVolume
from .tables import series_indicators, nft_indicators, compute_indicators, quarterly_volume, category_summaries
from .tables import write_series_indicators, load_series_indicators, write_nft_indicators, load_nft_indicators
from .tables import write_quarterly_volume
