# -*- coding: utf-8 -*-
"""
NFTGraph: Versioning
====================

Single source of the package version, read by ``setup.py``. Versions follow
PEP 440: ``0.1.0`` for releases, ``0.2.0rc1`` for pre-releases.

"""

VERSION = (0, 1, 0)
PRERELEASE = ""         # "a1", "b2", "rc1", ...

def get_version(short: bool = False) -> str:
    base = ".".join(str(v) for v in VERSION)
    if short or not PRERELEASE:
        return base
    return base + PRERELEASE

if __name__ == '__main__':
    print(get_version())
