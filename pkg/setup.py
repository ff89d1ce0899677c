# -*- coding: utf-8 -*-
"""
NFTGraph builds the creation, transfer and holding graphs of NFT trading on
Ethereum and detects NFTs whose prices were pushed up by a few accounts
trading among themselves.

It provides:

- decoders of ERC721 and ERC1155 transfer events and a JSON-RPC log fetcher.
- the three graphs of NFT activity and their network metrics.
- activeness and value indicators of NFT series and single NFTs.
- a threshold-based bubble detector and a synthetic market generator.
- a command line running every stage in batch.

NFTGraph is compatible with Python 3.8 and above.

"""

import sys
from setuptools import setup, find_packages
from tools.versioning import get_version

if sys.version_info < (3, 8):
    raise SystemError("Python version >= 3.8 required.")

__version__ = get_version()

with open("README.md", "r") as fh:
    long_description = fh.read()

metadata = dict(
    name='nftgraph',
    version=__version__,
    description='Graph analysis and bubble detection of NFT trading.',
    long_description=long_description,
    long_description_content_type='text/markdown',
    install_requires=[
        'numpy>=1.20',
        'scipy>=1.6',
        'pandas>=1.2',
        'requests>=2.25',
        'eth-utils>=1.10',
        'eth-hash[pycryptodome]>=0.3',
        'eth-abi>=4.0',
        'toml>=0.10',
        'tqdm>=4.50'],
    extras_require={
        'test': ['pytest>=6.0', 'hypothesis>=6.0', 'networkx>=2.5']},
    entry_points={
        'console_scripts': ['nftgraph=nftgraph.cli:main']},
    classifiers=[
        'Development Status :: 3 - Alpha',
        'Intended Audience :: Developers',
        'Intended Audience :: Science/Research',
        'License :: OSI Approved :: MIT License',
        'Operating System :: OS Independent',
        'Programming Language :: Python :: 3.8',
        'Programming Language :: Python :: 3.9',
        'Programming Language :: Python :: 3.10',
        'Topic :: Scientific/Engineering',
        'Topic :: Scientific/Engineering :: Information Analysis',
        'Topic :: Software Development :: Libraries :: Python Modules'
    ],
    include_package_data=True,
    packages=find_packages(exclude=['tests', 'tools', 'examples', 'examples.*'])
)

setup(**metadata)
