# -*- coding: utf-8 -*-
"""
File formats, network metrics and degree distributions.

"""

from . import io
from .metrics import pagerank, pagerank_top, top_nodes, clustering_coefficient, degree_assortativity, reciprocity, scc, wcc
from .powerlaw import DegreeDistribution, PowerLawFit, degree_distribution, fit_power_law, degree_summary
