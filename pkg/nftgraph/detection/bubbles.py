# -*- coding: utf-8 -*-
"""
Bubble NFTs
===========

Detection of NFTs whose activeness and value are out of proportion, a
symptom of hype or wash trading.

The detection works on the indicator tables of a series and of its NFTs.
First the series must look abnormal, by its turnover ratio and the ratio of
its highest to floor price. Then every NFT worth a large volume and priced
far above the floor is flagged if its trades concentrate in a short time or
among few accounts:

.. code-block:: none

    if not gate(X.turnover >= n1, X.hfratio >= n2):
        return {}
    flagged = {}
    for x in X:
        if x.volume < n3 or x.fratio < n4:
            continue
        if x.p_value < n5:
            flagged[x] = concentrated_p
        elif x.transferors < n6:
            flagged[x] = few_transferors
    return flagged

================  ================  ==========================================
Threshold         Default           Compared with
================  ================  ==========================================
``n1``            1.5               Turnover ratio of the series
``n2``            5E+3              HFratio of the series
``n3``            1E+18 wei         Volume of the NFT
``n4``            1E+3              Fratio of the NFT
``n5``            1E+7 s            P value of the NFT (seconds per transfer)
``n6``            3                 Transferors of the NFT
================  ================  ==========================================

The series gate has two modes:

- ``literal`` requires both ``turnover >= n1`` **and** ``hfratio >= n2``.
- ``either`` (default) requires ``turnover >= n1`` **or** ``hfratio >= n2``.

Under the literal gate, a series with a modest turnover but an extreme
HFratio (1.26 and 6.6E+16, say) is never inspected, although such series
hold some of the most blatant bubble NFTs. Both modes agree on every series
passing both conditions.

Undefined ratios (unpriced NFTs, series without priced NFTs) never pass a
``>=`` condition.

"""

import logging
from dataclasses import asdict, dataclass
from enum import Enum
from typing import Dict, Iterable, List, Mapping, NamedTuple, Optional

from ..common.constants import N1, N2, N3, N4, N5, N6
from ..common.exceptions import ConfigError
from ..common.records import Category
from ..graphs.transfer import TransferGraph
from ..indicators.prices import PriceModel
from ..indicators.tables import NftIndicators, SeriesIndicators, category_of, compute_indicators

logger = logging.getLogger(__name__)

class GateMode(str, Enum):
    LITERAL = "literal"
    EITHER = "either"

    def __str__(self) -> str:
        return self.value

class Reason(str, Enum):
    CONCENTRATED_P = "concentrated_p"
    FEW_TRANSFERORS = "few_transferors"

    def __str__(self) -> str:
        return self.value

@dataclass(frozen=True)
class Thresholds:
    """
    Thresholds of the bubble detection.

    Raises
    ------
    ConfigError
        If a threshold is negative or not a number, or if the volume or
        transferor threshold is not an integer.

    """
    n1: float = N1
    n2: float = N2
    n3: int = N3
    n4: float = N4
    n5: float = N5
    n6: int = N6

    def __post_init__(self):
        for name in ("n1", "n2", "n4", "n5"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, float)) or value != value:
                raise ConfigError(f"Threshold {name} must be a number. Got {value!r}")
            if value < 0:
                raise ConfigError(f"Threshold {name} must be non-negative. Got {value}")
            object.__setattr__(self, name, float(value))
        for name in ("n3", "n6"):
            value = getattr(self, name)
            if isinstance(value, float) and value.is_integer():
                value = int(value)
            if isinstance(value, bool) or not isinstance(value, int):
                raise ConfigError(f"Threshold {name} must be an integer. Got {value!r}")
            if value < 0:
                raise ConfigError(f"Threshold {name} must be non-negative. Got {value}")
            object.__setattr__(self, name, value)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["n3"] = str(self.n3)
        return d

class FlaggedNft(NamedTuple):
    indicators: NftIndicators
    reason: Reason

@dataclass
class BubbleReport:
    """
    Outcome of the detection on one series.

    Attributes
    ----------
    series : str
        Contract address of the series.
    turnover : float
        Turnover ratio of the series.
    hfratio : float or None
        HFratio of the series.
    gate_passed : bool
        Whether the series passed the gate.
    mode : GateMode
        Gate mode used.
    flagged : list of FlaggedNft
        Flagged NFTs, by token identifier. Empty if the gate failed.
    category : str, default: None
        Category of the series, when known.

    """
    series: str
    turnover: float
    hfratio: Optional[float]
    gate_passed: bool
    mode: GateMode
    flagged: List[FlaggedNft]
    category: Optional[str] = None

    def to_dict(self) -> dict:
        d = {
            "series": self.series,
            "gate": {"turnover": self.turnover, "hfratio": self.hfratio, "passed": self.gate_passed, "mode": self.mode.value},
            "flagged": [{
                "contract": f.indicators.nft.contract,
                "token_id": str(f.indicators.nft.token_id),
                "reason": f.reason.value,
                "volume_wei": str(f.indicators.volume),
                "fratio": f.indicators.fratio,
                "p_value": f.indicators.p_value,
                "transferors": f.indicators.transferors} for f in self.flagged]}
        if self.category is not None:
            d["category"] = self.category
        return d

def passes_gate(series_ind: SeriesIndicators, th: Thresholds, mode: GateMode = GateMode.EITHER) -> bool:
    """Whether a series passes the gate of the detection."""
    busy = series_ind.turnover >= th.n1
    spread = series_ind.hfratio is not None and series_ind.hfratio >= th.n2
    if GateMode(mode) is GateMode.LITERAL:
        return busy and spread
    return busy or spread

def flag_reason(x: NftIndicators, th: Thresholds) -> Optional[Reason]:
    """Reason to flag an NFT of a series that passed the gate, or ``None``."""
    if x.volume < th.n3 or x.fratio is None or x.fratio < th.n4:
        return None
    if x.p_value < th.n5:
        return Reason.CONCENTRATED_P
    if x.transferors < th.n6:
        return Reason.FEW_TRANSFERORS
    return None

def detect_bubbles(series_ind: SeriesIndicators, nft_inds: Iterable[NftIndicators], th: Thresholds = None,
    gate_mode: GateMode = GateMode.EITHER, category: str = None) -> BubbleReport:
    """
    Detect the bubble NFTs of one series.

    Parameters
    ----------
    series_ind : SeriesIndicators
        Indicators of the series.
    nft_inds : iterable of NftIndicators
        Indicators of NFTs of the series.
    th : Thresholds, default: None
        Thresholds. Defaults are used if not given.
    gate_mode : GateMode or str, default: 'either'
        ``'literal'`` or ``'either'``.
    category : str, default: None
        Category reported with the series.

    Returns
    -------
    report : BubbleReport
        Gate outcome and flagged NFTs.

    Raises
    ------
    ValueError
        If an NFT does not belong to the series.
    ConfigError
        If the gate mode is unknown.

    Examples
    --------
    >>> s = SeriesIndicators(series, 100, 353, 3.53, 10**8, 2*10**21, 2.0e13)
    >>> x = NftIndicators(NftKey(series, 1), 4, 8.1e3, 3.0e12, 3*10**21, 3)
    >>> detect_bubbles(s, [x]).flagged[0].reason
    <Reason.CONCENTRATED_P: 'concentrated_p'>

    """
    th = th if th is not None else Thresholds()
    try:
        mode = GateMode(gate_mode)
    except ValueError:
        raise ConfigError(f"Unknown gate mode '{gate_mode}'. Use 'literal' or 'either'") from None
    passed = passes_gate(series_ind, th, mode)
    flagged = []
    for x in nft_inds:
        if x.nft.contract != series_ind.series:
            raise ValueError(f"NFT {x.nft.contract}/{x.nft.token_id} is not in series {series_ind.series}")
        if not passed:
            continue
        reason = flag_reason(x, th)
        if reason is not None:
            flagged.append(FlaggedNft(x, reason))
    flagged.sort(key=lambda f: f.indicators.nft.token_id)
    return BubbleReport(series_ind.series, series_ind.turnover, series_ind.hfratio, passed, mode, flagged, category)

def detect_tables(series_inds: Iterable[SeriesIndicators], nft_inds: Iterable[NftIndicators], th: Thresholds = None,
    gate_mode: GateMode = GateMode.EITHER, labels: Mapping[str, Category] = None) -> List[BubbleReport]:
    """
    Detect the bubble NFTs of every series of indicator tables.

    Reports are sorted by contract address.
    """
    th = th if th is not None else Thresholds()
    by_series: Dict[str, List[NftIndicators]] = {}
    for x in nft_inds:
        by_series.setdefault(x.nft.contract, []).append(x)
    reports = []
    for s in sorted(series_inds, key=lambda s: s.series):
        category = category_of(s.series, labels) if labels is not None else None
        reports.append(detect_bubbles(s, by_series.get(s.series, []), th, gate_mode, category))
    flagged = sum(len(r.flagged) for r in reports)
    logger.info("Detection (%s gate): %d of %d series passed, %d NFTs flagged",
        GateMode(gate_mode).value, sum(r.gate_passed for r in reports), len(reports), flagged)
    return reports

def detect_all(records, model: PriceModel, labels: Mapping[str, Category] = None, th: Thresholds = None,
    gate_mode: GateMode = GateMode.EITHER, ntg: TransferGraph = None) -> List[BubbleReport]:
    """
    Compute the indicators of a transfer stream and detect its bubble NFTs.

    Parameters
    ----------
    records : list of TransferRecord
        Transfer stream.
    model : PriceModel
        Prices of the stream.
    labels : mapping, default: None
        Category of each contract, reported with its series.
    th : Thresholds, default: None
        Thresholds. Defaults are used if not given.
    gate_mode : GateMode or str, default: 'either'
        Gate mode.
    ntg : TransferGraph, default: None
        Transfer graph of the stream, built if not given.

    Returns
    -------
    reports : list of BubbleReport
        One report per series, sorted by contract address.

    """
    series_inds, nft_inds = compute_indicators(records, model, ntg)
    return detect_tables(series_inds, nft_inds, th, gate_mode, labels)

def flagged_nfts(reports: Iterable[BubbleReport]) -> Dict:
    """Reason of every flagged NFT of a list of reports."""
    return {f.indicators.nft: f.reason for r in reports for f in r.flagged}

def detection_report(reports: List[BubbleReport], th: Thresholds, gate_mode: GateMode) -> dict:
    """JSON document of a detection run."""
    return {
        "mode": GateMode(gate_mode).value,
        "thresholds": th.to_dict(),
        "flagged": sum(len(r.flagged) for r in reports),
        "series": [r.to_dict() for r in reports]}
