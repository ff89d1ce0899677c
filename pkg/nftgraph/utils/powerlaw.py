# -*- coding: utf-8 -*-
"""
Degree Distributions
====================

Histograms of node degrees and their power-law fit.

A degree distribution follows a power law when the share of nodes with
degree :math:`x` decays as

.. math::
    p(x) \\propto x^{-\\alpha}

Its complementary cumulative distribution (CCDF) then decays as
:math:`P(X\\geq x)\\propto x^{-(\\alpha-1)}`, a straight line of slope
:math:`1-\\alpha` in log-log scale. The exponent is estimated by least
squares on the points :math:`(\\log_{10}x, \\log_{10}P(X\\geq x))` of the
observed degrees not smaller than :math:`x_{min}`:

.. math::
    \\alpha = 1 - \\mathrm{slope}

with the coefficient of determination :math:`r^2` as goodness of fit.

The CCDF is preferred over the raw histogram because it has no empty bins
and is far less noisy in the tail.

References
----------
.. [Clauset] A. Clauset, C. R. Shalizi, M. E. J. Newman. Power-law
    distributions in empirical data. SIAM Review 51 (4), 661-703. 2009.

"""

from collections import Counter
from typing import Dict, NamedTuple, Tuple

import numpy as np
from scipy.stats import linregress

from ..common.constants import POWERLAW_MIN_DEGREES, POWERLAW_XMIN
from ..common.exceptions import GraphError

class DegreeDistribution:
    """
    Histogram of degrees.

    Parameters
    ----------
    histogram : dict
        Number of nodes with each degree.
    direction : str
        ``'in'`` or ``'out'``.

    """
    def __init__(self, histogram: Dict[int, int], direction: str):
        if direction not in ("in", "out"):
            raise ValueError(f"Direction must be 'in' or 'out'. Got '{direction}'")
        if any(k < 0 or c < 0 for k, c in histogram.items()):
            raise ValueError("Degrees and counts must be non-negative")
        self.histogram = {int(k): int(c) for k, c in sorted(histogram.items()) if c > 0}
        self.direction = direction

    def __repr__(self) -> str:
        return f"DegreeDistribution({self.histogram}, direction='{self.direction}')"

    def __eq__(self, other) -> bool:
        return isinstance(other, DegreeDistribution) and (self.histogram, self.direction) == (other.histogram, other.direction)

    @property
    def num_nodes(self) -> int:
        return sum(self.histogram.values())

    def degrees(self) -> np.ndarray:
        """Degree of every counted node, in increasing order."""
        k = np.array(list(self.histogram), dtype=np.int64)
        c = np.array(list(self.histogram.values()), dtype=np.int64)
        return np.repeat(k, c)

    def ccdf(self, xmin: int = 0) -> Tuple[np.ndarray, np.ndarray]:
        """
        Complementary cumulative distribution over degrees ``>= xmin``.

        Returns
        -------
        x : numpy.ndarray
            Distinct degrees.
        p : numpy.ndarray
            Share of nodes with degree at least ``x``.

        """
        items = [(k, c) for k, c in self.histogram.items() if k >= xmin]
        if not items:
            return np.zeros(0), np.zeros(0)
        x = np.array([k for k, _ in items], dtype=float)
        c = np.array([c for _, c in items], dtype=float)
        tail = np.cumsum(c[::-1])[::-1]
        return x, tail/tail[0]

    def to_dict(self) -> dict:
        return {"direction": self.direction, "histogram": {str(k): c for k, c in self.histogram.items()}}

class PowerLawFit(NamedTuple):
    alpha: float
    r2: float
    xmin: int

def degree_distribution(g, direction: str = "out", include_zero: bool = True, weighted: bool = True) -> DegreeDistribution:
    """
    Degree distribution of a create, transfer or hold graph.

    Parameters
    ----------
    g : CreateGraph, TransferGraph or HoldGraph
        Graph to inspect.
    direction : str, default: 'out'
        ``'out'`` or ``'in'``.
    include_zero : bool, default: True
        Count nodes of degree zero.
    weighted : bool, default: True
        Use transfer counts rather than distinct counterparties. Only the
        transfer graph has parallel transfers.

    Examples
    --------
    >>> g = TransferGraph.from_edges([(center, leaf, 1) for leaf in leaves])     # 5 leaves
    >>> degree_distribution(g, "out").histogram
    {0: 5, 5: 1}

    """
    _, d = g.degree_sequence(direction, weighted)
    if not include_zero:
        d = d[d > 0]
    return DegreeDistribution(Counter(d.tolist()), direction)

def fit_power_law(d: DegreeDistribution, xmin: int = POWERLAW_XMIN) -> PowerLawFit:
    """
    Fit a power law to a degree distribution.

    Parameters
    ----------
    d : DegreeDistribution
        Distribution to fit.
    xmin : int, default: 1
        Smallest degree taken into account. Must be positive.

    Returns
    -------
    fit : PowerLawFit
        Exponent :math:`\\alpha`, coefficient of determination and
        :math:`x_{min}`.

    Raises
    ------
    GraphError
        If fewer than 3 distinct degrees are at least ``xmin``.

    """
    if xmin < 1:
        raise ValueError(f"xmin must be a positive degree. Got {xmin}")
    x, p = d.ccdf(xmin)
    if x.size < POWERLAW_MIN_DEGREES:
        raise GraphError(f"A power-law fit needs at least {POWERLAW_MIN_DEGREES} distinct degrees >= {xmin}. Got {x.size}")
    result = linregress(np.log10(x), np.log10(p))
    return PowerLawFit(float(1.0 - result.slope), float(result.rvalue**2), int(xmin))

def degree_summary(d: DegreeDistribution) -> dict:
    """
    Summary of a degree distribution.

    Returns
    -------
    summary : dict
        Number of nodes, share of nodes with degree 1, 90th and 99th
        percentiles and maximum degree. Percentiles are ``None`` for an
        empty distribution.

    """
    n = d.num_nodes
    if n == 0:
        return {"nodes": 0, "share_degree_one": None, "p90": None, "p99": None, "max": None}
    degrees = d.degrees()
    p90, p99 = np.percentile(degrees, [90, 99])
    return {
        "nodes": n,
        "share_degree_one": d.histogram.get(1, 0)/n,
        "p90": float(p90),
        "p99": float(p99),
        "max": int(degrees[-1])}
