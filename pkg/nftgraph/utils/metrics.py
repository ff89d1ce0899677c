# -*- coding: utf-8 -*-
"""
Metrics
=======

Network metrics of the transfer graph.

The functions accept any graph exposing a list of ``nodes`` and a sparse
weighted ``adjacency()`` matrix whose rows are sources, such as
:class:`~nftgraph.graphs.transfer.TransferGraph`.

Clustering and assortativity are measured on the undirected, unweighted
projection of the graph without self-loops, with adjacency

.. math::
    U_{ij} = \\begin{cases}1 & i\\neq j \\,\\wedge\\, (A_{ij}>0 \\vee A_{ji}>0) \\\\ 0 & \\mathrm{otherwise}\\end{cases}

Coefficients that are undefined on a graph (no edges, constant degrees) are
returned as ``None``.

References
----------
.. [Page] L. Page, S. Brin, R. Motwani, T. Winograd. The PageRank Citation
    Ranking: Bringing Order to the Web. Stanford InfoLab. 1999.
.. [Watts] D. J. Watts, S. H. Strogatz. Collective dynamics of 'small-world'
    networks. Nature 393, 440-442. 1998.
.. [Newman] M. E. J. Newman. Assortative Mixing in Networks. Physical Review
    Letters 89, 208701. 2002.
.. [Pearce] D. J. Pearce. A Space-Efficient Algorithm for Finding Strongly
    Connected Components. Information Processing Letters 116 (1), 47-52. 2016.

"""

import logging
from typing import Dict, List, Optional, Tuple

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components

from ..common.constants import PAGERANK_DAMPING, PAGERANK_MAXITER, PAGERANK_TOL
from ..common.exceptions import GraphError

logger = logging.getLogger(__name__)

def undirected_projection(g) -> sp.csr_matrix:
    """Binary symmetric adjacency of the graph, without self-loops."""
    A = g.adjacency()
    if A.shape[0] == 0:
        return sp.csr_matrix(A.shape)
    U = ((A + A.T) > 0).astype(np.float64).tocsr()
    U = (U - sp.diags(U.diagonal())).tocsr()
    U.eliminate_zeros()
    return U

def pagerank(g, damping: float = PAGERANK_DAMPING, tol: float = PAGERANK_TOL, max_iter: int = PAGERANK_MAXITER) -> Dict[str, float]:
    """
    Weighted PageRank of every node [Page]_.

    Starting from the uniform vector, the scores are iterated as

    .. math::
        \\mathbf{x}_{k+1} = d\\Big(\\mathbf{P}^T\\mathbf{x}_k + \\frac{1}{n}\\sum_{i\\in D} x_{k,i}\\Big) + \\frac{1-d}{n}

    where :math:`P_{ij} = w_{ij}/\\sum_j w_{ij}` is the transition matrix,
    :math:`D` the set of dangling nodes (no outgoing edge), whose mass is
    spread uniformly, and :math:`d` the damping factor. The iteration stops
    when the L1 change falls below ``tol`` or after ``max_iter`` iterations,
    in which case the last iterate is returned with a warning.

    Parameters
    ----------
    g : TransferGraph
        Graph to rank.
    damping : float, default: 0.85
        Damping factor in (0, 1).
    tol : float, default: 1e-9
        Convergence threshold of the L1 change between iterations.
    max_iter : int, default: 100
        Maximum number of iterations.

    Returns
    -------
    scores : dict
        Score of every node. Scores add up to 1.

    Raises
    ------
    GraphError
        If the graph has no nodes.

    Examples
    --------
    >>> g = TransferGraph.from_edges([("0xa..", "0xb..", 1), ("0xb..", "0xc..", 1), ("0xc..", "0xa..", 1)])
    >>> pagerank(g)
    {'0xa..': 0.3333333333333333, '0xb..': 0.3333333333333333, '0xc..': 0.3333333333333333}

    """
    if not 0.0 < damping < 1.0:
        raise ValueError(f"Damping factor must be in (0, 1). Got {damping}")
    if max_iter < 1:
        raise ValueError(f"max_iter must be a positive integer. Got {max_iter}")
    A = g.adjacency()
    n = A.shape[0]
    if n == 0:
        raise GraphError("PageRank of an empty graph is undefined")
    out_weight = np.asarray(A.sum(axis=1)).ravel()
    dangling = out_weight == 0
    inverse = np.divide(1.0, out_weight, out=np.zeros(n), where=~dangling)
    PT = (sp.diags(inverse) @ A).T.tocsr()
    x = np.full(n, 1.0/n)
    for k in range(max_iter):
        x_new = damping*(PT @ x + x[dangling].sum()/n) + (1.0-damping)/n
        delta = np.abs(x_new - x).sum()
        x = x_new
        if delta < tol:
            logger.debug("PageRank converged after %d iterations", k+1)
            break
    else:
        logger.warning("PageRank did not converge in %d iterations (last L1 change %.3e)", max_iter, delta)
    return dict(zip(g.nodes, x.tolist()))

def pagerank_top(scores: Dict[str, float], k: int = 10) -> List[Tuple[str, float]]:
    """The ``k`` highest-ranked nodes, ties broken by address."""
    return sorted(scores.items(), key=lambda kv: (-kv[1], kv[0]))[:k]

def top_nodes(g, direction: str = "out", k: int = 10, weighted: bool = True) -> List[Tuple[str, int]]:
    """
    The ``k`` nodes with the largest degree.

    Works with the create, transfer and hold graphs: largest creators
    (``'out'`` of a create graph), busiest senders and recipients of a
    transfer graph, largest holders (``'in'`` of a hold graph).
    """
    labels, degrees = g.degree_sequence(direction, weighted)
    pairs = [(a, int(d)) for a, d in zip(labels, degrees)]
    return sorted(pairs, key=lambda p: (-p[1], p[0]))[:k]

def clustering_coefficient(g) -> Optional[float]:
    """
    Average local clustering coefficient [Watts]_.

    The local coefficient of a node with :math:`k_i` neighbours in the
    undirected projection is

    .. math::
        c_i = \\frac{(\\mathbf{U}^3)_{ii}}{k_i(k_i-1)}

    and zero when :math:`k_i<2`. The average runs over all nodes.

    Returns
    -------
    c : float or None
        Average clustering in [0, 1]. ``None`` for a graph without nodes.

    """
    U = undirected_projection(g)
    n = U.shape[0]
    if n == 0:
        return None
    k = np.asarray(U.sum(axis=1)).ravel()
    closed = np.asarray((U @ U).multiply(U).sum(axis=1)).ravel()
    pairs = k*(k-1)
    local = np.divide(closed, pairs, out=np.zeros(n), where=pairs > 0)
    return float(local.mean())

def degree_assortativity(g) -> Optional[float]:
    """
    Degree assortativity coefficient [Newman]_.

    Pearson correlation between the degrees at both ends of each edge of
    the undirected projection, every edge taken in both orientations.

    Returns
    -------
    r : float or None
        Coefficient in [-1, 1]. ``None`` when the graph has no edges or all
        edge ends have the same degree.

    """
    U = undirected_projection(g).tocoo()
    if U.nnz == 0:
        return None
    k = np.asarray(U.sum(axis=1)).ravel()
    x, y = k[U.row], k[U.col]
    sx = x - x.mean()
    sy = y - y.mean()
    variance = np.sqrt((sx*sx).sum()*(sy*sy).sum())
    if variance == 0.0 or not np.isfinite(variance):
        return None
    return float((sx*sy).sum()/variance)

def reciprocity(g) -> Optional[float]:
    """
    Share of directed edges :math:`(u,v)` whose reverse :math:`(v,u)` also exists.

    Self-loops are left out of both counts. ``None`` when no other edge
    exists.
    """
    B = (g.adjacency() > 0).astype(np.float64).tocsr()
    if B.shape[0] == 0:
        return None
    B = (B - sp.diags(B.diagonal())).tocsr()
    B.eliminate_zeros()
    if B.nnz == 0:
        return None
    return B.multiply(B.T).nnz/B.nnz

def scc(g) -> Tuple[int, int]:
    """
    Strongly connected components [Pearce]_.

    Returns
    -------
    count : int
        Number of components. Isolated nodes are singleton components.
    largest : int
        Number of nodes in the largest component.

    """
    return _components(g, "strong")

def wcc(g) -> Tuple[int, int]:
    """Weakly connected components, as ``(count, largest)``."""
    return _components(g, "weak")

def _components(g, connection: str) -> Tuple[int, int]:
    A = g.adjacency()
    if A.shape[0] == 0:
        return 0, 0
    count, labels = connected_components(A, directed=True, connection=connection, return_labels=True)
    return int(count), int(np.bincount(labels).max())
