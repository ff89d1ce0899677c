# -*- coding: utf-8 -*-
"""
Records, constants and routines shared by all submodules.

"""

from . import constants
from . import mathfuncs
from . import records
from . import exceptions

from .records import Standard, Category, RawLogEvent, TransferRecord, NftKey
from .records import TxValueRecord, CategoryLabel, DescriptiveText
from .exceptions import *
