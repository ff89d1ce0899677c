# -*- coding: utf-8 -*-
"""
Exceptions
==========

All errors raised by nftgraph derive from :class:`NFTGraphError` and from the
builtin exception that best describes them, so callers may catch either.

The command line maps :class:`ConfigError` to exit code 2 and every other
:class:`NFTGraphError` to exit code 1.

"""

class NFTGraphError(Exception):
    """Base class of all nftgraph errors."""

class DecodeError(NFTGraphError, ValueError):
    """An event log matched an NFT signature but its payload is malformed."""

class InputError(NFTGraphError, ValueError):
    """An input file is missing, malformed, or has an invalid row."""

class RPCError(NFTGraphError, ConnectionError):
    """The JSON-RPC endpoint failed after all retries."""

class GraphError(NFTGraphError, ValueError):
    """A graph metric cannot be computed on the given graph."""

class UnknownNFTError(NFTGraphError, KeyError):
    """The requested NFT has no transfer history in the graph."""

class IndicatorError(NFTGraphError, ValueError):
    """An indicator is requested for an empty series or history."""

class ConfigError(NFTGraphError, ValueError):
    """Invalid configuration: thresholds, sources or command-line options."""
