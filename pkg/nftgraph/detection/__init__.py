# -*- coding: utf-8 -*-
"""
Detection of bubble NFTs and comparison with wash-trade labels.

"""

from .bubbles import GateMode, Reason, Thresholds, FlaggedNft, BubbleReport
from .bubbles import passes_gate, flag_reason, detect_bubbles, detect_tables, detect_all, flagged_nfts, detection_report
from .compare import LabeledComparison, compare_labeled
