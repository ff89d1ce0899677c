# -*- coding: utf-8 -*-
"""
Wash-Trade Label Comparison
===========================

Compare the indicators of NFTs labeled as wash traded against those of all
other NFTs.

Wash trades tend to move NFTs at high values, far above the floor of their
series, and in quick succession. Labeled NFTs are thus expected to show a
higher median volume and Fratio, and a lower median P value:

=========  =====================
Indicator  Expected median gap
=========  =====================
volume     positive
fratio     positive
p_value    negative
=========  =====================

The gap is the labeled median minus the unlabeled median.

"""

from dataclasses import dataclass, field
from typing import AbstractSet, Dict, Iterable, Optional

import numpy as np

from ..common.mathfuncs import five_number_summary
from ..common.records import NftKey
from ..indicators.tables import NftIndicators

INDICATORS = ("volume", "fratio", "p_value")
EXPECTED_SIGNS = {"volume": 1, "fratio": 1, "p_value": -1}

@dataclass
class LabeledComparison:
    """
    Summaries of labeled and unlabeled NFT populations.

    Attributes
    ----------
    labeled : dict
        Five-number summary of each indicator over labeled NFTs, ``None``
        when no labeled NFT has a value.
    unlabeled : dict
        Same over the other NFTs.
    median_gap : dict
        Labeled minus unlabeled median, ``None`` when a side is unavailable.
    gap_sign : dict
        Sign of the median gap: -1, 0 or 1.

    """
    labeled_count: int
    unlabeled_count: int
    labeled: Dict[str, Optional[dict]] = field(default_factory=dict)
    unlabeled: Dict[str, Optional[dict]] = field(default_factory=dict)
    median_gap: Dict[str, Optional[float]] = field(default_factory=dict)
    gap_sign: Dict[str, Optional[int]] = field(default_factory=dict)

    def matches_expected(self) -> bool:
        """Whether every available gap has the sign expected from wash trading."""
        return all(self.gap_sign[k] == EXPECTED_SIGNS[k] for k in INDICATORS if self.gap_sign.get(k) is not None)

    def to_dict(self) -> dict:
        return {
            "labeled_count": self.labeled_count,
            "unlabeled_count": self.unlabeled_count,
            **{k: {
                "labeled": self.labeled[k],
                "unlabeled": self.unlabeled[k],
                "median_gap": self.median_gap[k],
                "gap_sign": self.gap_sign[k]} for k in INDICATORS}}

def compare_labeled(nft_inds: Iterable[NftIndicators], wash_labels: AbstractSet[NftKey]) -> LabeledComparison:
    """
    Compare indicators of wash-labeled NFTs with the rest of the population.

    Parameters
    ----------
    nft_inds : iterable of NftIndicators
        Indicators of the population.
    wash_labels : set of NftKey
        NFTs labeled as wash traded. Labels of NFTs absent from the
        population are ignored.

    Returns
    -------
    comparison : LabeledComparison
        Summaries of volume, fratio and p_value on each side, and the signs
        of the median gaps. Undefined Fratios are left out of the
        summaries.

    """
    labeled, unlabeled = [], []
    for x in nft_inds:
        (labeled if x.nft in wash_labels else unlabeled).append(x)
    result = LabeledComparison(len(labeled), len(unlabeled))
    for k in INDICATORS:
        a = five_number_summary(float(getattr(x, k)) if getattr(x, k) is not None else None for x in labeled)
        b = five_number_summary(float(getattr(x, k)) if getattr(x, k) is not None else None for x in unlabeled)
        result.labeled[k], result.unlabeled[k] = a, b
        if a is None or b is None:
            result.median_gap[k] = result.gap_sign[k] = None
        else:
            gap = a["median"] - b["median"]
            result.median_gap[k] = gap
            result.gap_sign[k] = int(np.sign(gap))
    return result
