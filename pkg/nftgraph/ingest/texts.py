# -*- coding: utf-8 -*-
"""
Descriptive Texts
=================

Word counts over the descriptions of NFT series, used to characterize what a
category of NFTs is about.

Descriptions are case-folded and split on any run of characters that is not
a letter or a digit. Underscores separate words too.

"""

import re
from collections import Counter
from typing import AbstractSet, Iterable, List, Optional, Tuple

from ..common.records import DescriptiveText

_WORD = re.compile(r"[^\W_]+")

def tokenize(text: str) -> List[str]:
    """Case-folded words of a text."""
    return _WORD.findall(text.casefold())

def term_frequency(texts: Iterable[DescriptiveText], stopwords: Optional[AbstractSet[str]] = None) -> List[Tuple[str, int]]:
    """
    Count the words used in the descriptions of NFT series.

    Parameters
    ----------
    texts : iterable of DescriptiveText
        Descriptions to count. Only the ``description`` field is used.
    stopwords : set of str, default: None
        Words to ignore. They are compared after case folding.

    Returns
    -------
    terms : list of tuple
        Pairs ``(term, count)`` sorted by decreasing count, ties broken
        lexicographically.

    Examples
    --------
    >>> term_frequency([DescriptiveText("0x..", "x", "art art game")])
    [('art', 2), ('game', 1)]

    """
    stop = {w.casefold() for w in stopwords} if stopwords else set()
    counts = Counter()
    for t in texts:
        counts.update(w for w in tokenize(t.description) if w not in stop)
    return sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
