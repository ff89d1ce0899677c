# Configuration file for the Sphinx documentation builder.

# -- Path setup --------------------------------------------------------------
import os
import sys
from datetime import datetime
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..', '..')))
from tools.versioning import get_version

# -- Project information -----------------------------------------------------
project = 'NFTGraph'
author = 'NFTGraph developers'
copyright = '2022-{}, {}'.format(datetime.now().year, author)
release = get_version()
version = get_version(short=True)

# -- General configuration ---------------------------------------------------
extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.mathjax',
    'sphinx.ext.napoleon']

# Napoleon settings
napoleon_numpy_docstring = True
napoleon_use_ivar = True            # List attributes with :ivar:

# Heavy dependencies are not needed to render the docstrings
autodoc_mock_imports = ['eth_abi', 'eth_utils', 'requests', 'tqdm']

templates_path = ['_templates']
source_suffix = '.rst'
master_doc = 'index'
exclude_patterns = ['build']
pygments_style = 'sphinx'

# -- Options for HTML output -------------------------------------------------
html_theme = 'sphinx_rtd_theme'
html_static_path = ['_static']
