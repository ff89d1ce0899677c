# -*- coding: utf-8 -*-
"""
Test module imports
===================

"""

import os
import runpy
import sys

def test_module_imports():
    try:
        import nftgraph
    except ModuleNotFoundError:
        sys.exit("[ERROR] Package nftgraph not found. Go to root directory of package and type:\n\n\tpip install .\n")
    try:
        import numpy, scipy, pandas, requests, eth_abi, eth_utils, toml, tqdm
    except ModuleNotFoundError:
        sys.exit("[ERROR] You don't have the required packages. Try reinstalling the package.")

def test_subpackages():
    import nftgraph
    for name in ("common", "utils", "ingest", "graphs", "indicators", "detection", "synthgen"):
        assert hasattr(nftgraph, name)
    from nftgraph.cli import main
    assert callable(main)

def test_docs_version():
    root = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
    versioning = runpy.run_path(os.path.join(root, "tools", "versioning.py"))
    conf = runpy.run_path(os.path.join(root, "docs", "source", "conf.py"))
    assert conf["release"] == versioning["get_version"]()
    assert conf["version"] == versioning["get_version"](short=True)
