# -*- coding: utf-8 -*-
"""
Common routines on words, hexadecimal strings, calendar quarters and
summaries.

"""

import datetime
import re
from typing import Dict, Iterable, List, Optional

import numpy as np

from .constants import ADDRESS_BYTES, WORD_BYTES
from .exceptions import DecodeError

_HEX = re.compile(r"^0x[0-9a-f]*$")

def word_to_int(word: bytes) -> int:
    """
    Return the unsigned integer encoded in a big-endian 32-byte word.

    Parameters
    ----------
    word : bytes
        32-byte ABI word.

    Returns
    -------
    value : int
        Unsigned integer in :math:`[0, 2^{256})`.

    Examples
    --------
    >>> from nftgraph.common.mathfuncs import word_to_int
    >>> word_to_int(bytes(31) + b'\\x2a')
    42

    """
    return int.from_bytes(word, "big")

def word_to_address(word: bytes, field: str = "address") -> str:
    """
    Return the address held in the low 20 bytes of a 32-byte word.

    Parameters
    ----------
    word : bytes
        32-byte ABI word.
    field : str, default: 'address'
        Name of the decoded field, used in the error message.

    Returns
    -------
    address : str
        Lower-case ``0x``-prefixed address.

    Raises
    ------
    DecodeError
        If the word is not 32 bytes long or its 12 high bytes are not zero.

    """
    if len(word) != WORD_BYTES:
        raise DecodeError(f"Field '{field}' must be a {WORD_BYTES}-byte word. Got {len(word)} bytes")
    if any(word[:WORD_BYTES-ADDRESS_BYTES]):
        raise DecodeError(f"Field '{field}' has nonzero address padding: 0x{word.hex()}")
    return "0x" + word[WORD_BYTES-ADDRESS_BYTES:].hex()

def hex_to_bytes(value: str) -> bytes:
    """
    Convert a ``0x``-prefixed hexadecimal string into bytes.

    Raises
    ------
    ValueError
        If the prefix is missing, a digit is not hexadecimal, or the number of
        digits is odd.

    """
    s = value.strip().lower()
    if not _HEX.match(s):
        raise ValueError(f"Invalid hexadecimal string: {value!r}")
    if len(s) % 2:
        raise ValueError(f"Hexadecimal string has an odd digit count: {value!r}")
    return bytes.fromhex(s[2:])

def hex_to_int(value: str) -> int:
    """Convert a JSON-RPC hex quantity (e.g. ``'0x1b4'``) into an integer."""
    if isinstance(value, int):
        return value
    s = value.strip().lower()
    if not s.startswith("0x") or len(s) < 3:
        raise ValueError(f"Invalid hex quantity: {value!r}")
    return int(s, 16)

def normalize_hex(value: str, num_bytes: int) -> str:
    """
    Validate a fixed-size hexadecimal field and return it in lower case.

    Parameters
    ----------
    value : str
        ``0x``-prefixed hexadecimal string.
    num_bytes : int
        Expected size: 20 for addresses, 32 for hashes.

    Raises
    ------
    ValueError
        If the value is not valid hexadecimal or has the wrong size.

    """
    s = value.strip().lower()
    raw = hex_to_bytes(s)
    if len(raw) != num_bytes:
        raise ValueError(f"Expected {num_bytes} bytes, got {len(raw)}: {value!r}")
    return s

def quarter_of(timestamp: int) -> str:
    """
    Return the UTC calendar quarter of a unix timestamp.

    Examples
    --------
    >>> quarter_of(1640995200)      # 2022-01-01T00:00:00Z
    '2022Q1'
    >>> quarter_of(1656633599)      # 2022-06-30T23:59:59Z
    '2022Q2'

    """
    d = datetime.datetime.fromtimestamp(timestamp, tz=datetime.timezone.utc)
    return f"{d.year}Q{(d.month-1)//3+1}"

def next_quarter(quarter: str) -> str:
    """Return the quarter following ``quarter``."""
    year, q = int(quarter[:4]), int(quarter[5:])
    return f"{year+1}Q1" if q == 4 else f"{year}Q{q+1}"

def quarter_range(first: str, last: str) -> List[str]:
    """Contiguous list of quarters from ``first`` to ``last``, both included."""
    quarters = []
    q = first
    while q <= last:
        quarters.append(q)
        q = next_quarter(q)
    return quarters

def five_number_summary(values: Iterable[float]) -> Optional[Dict[str, float]]:
    """
    Five-number summary of a population.

    Parameters
    ----------
    values : iterable of numbers
        Population. ``None`` values are ignored.

    Returns
    -------
    summary : dict or None
        Keys ``count``, ``min``, ``q1``, ``median``, ``q3`` and ``max``.
        ``None`` when the population is empty.

    Examples
    --------
    >>> five_number_summary([1, 2, 3, 4, 5])
    {'count': 5, 'min': 1.0, 'q1': 2.0, 'median': 3.0, 'q3': 4.0, 'max': 5.0}

    """
    x = np.array([float(v) for v in values if v is not None], dtype=float)
    if x.size == 0:
        return None
    q = np.percentile(x, [0, 25, 50, 75, 100])
    return dict(zip(["count", "min", "q1", "median", "q3", "max"], [int(x.size)] + [float(v) for v in q]))
