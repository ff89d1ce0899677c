# -*- coding: utf-8 -*-
"""
Input and Output
================

Readers and writers of every file format used by nftgraph.

======================  =========  ==================================================================================
File                    Format     Columns or keys
======================  =========  ==================================================================================
Transfers               CSV        ``standard,from,to,contract,token_id,amount,block_number,timestamp,tx_hash,log_index,batch_pos``
Transaction values      CSV        ``tx_hash,value_wei``
Category labels         CSV        ``contract,category``
Wash-trade labels       CSV        ``contract,token_id``
Descriptive texts       JSONL      ``contract``, ``name``, ``description``
Raw logs                JSONL      ``address``, ``topics``, ``data``, ``blockNumber``, ``timestamp``, ``transactionHash``, ``logIndex``
======================  =========  ==================================================================================

Addresses and hashes are written as lower-case ``0x``-hexadecimal strings.
Integers (token identifiers, amounts, wei values) are written as exact
decimal strings, so 256-bit values survive the round trip. Floating-point
values are written with their shortest exact representation and undefined
values as empty cells.

The readers validate every row. In strict mode the first invalid row raises
:class:`InputError` naming the file and the line; otherwise invalid rows are
skipped and counted in the ``skipped`` attribute of the returned container.
Files keyed by transaction or contract keep the last of duplicated keys and
count the overrides in ``duplicates``.

"""

import json
import logging
import math
import os
from enum import Enum
from functools import partial
from typing import Any, Callable, Dict, Iterable, List, Mapping, Sequence, Set, Tuple

import numpy as np
import pandas as pd

from ..common.exceptions import InputError
from ..common.mathfuncs import hex_to_bytes, hex_to_int, normalize_hex
from ..common.records import Category, CategoryLabel, DescriptiveText, NftKey, RawLogEvent, Standard, TransferRecord, TxValueRecord

logger = logging.getLogger(__name__)

TRANSFER_COLUMNS = ["standard", "from", "to", "contract", "token_id", "amount", "block_number", "timestamp", "tx_hash", "log_index", "batch_pos"]
TX_VALUE_COLUMNS = ["tx_hash", "value_wei"]
LABEL_COLUMNS = ["contract", "category"]
WASH_LABEL_COLUMNS = ["contract", "token_id"]
UINT256_MAX = 2**256 - 1

class LoadedList(list):
    """List of loaded items, with the number of skipped rows."""
    skipped = 0

class LoadedMap(dict):
    """Mapping of loaded items, with the number of skipped rows and overridden keys."""
    skipped = 0
    duplicates = 0

# Field parsers. They raise ValueError naming the field.

def parse_uint(value: str, field: str, upper: int = UINT256_MAX) -> int:
    """Parse a non-negative decimal integer."""
    s = value.strip()
    if not s.isdigit():
        raise ValueError(f"field '{field}' is not a non-negative decimal integer: {value!r}")
    n = int(s)
    if n > upper:
        raise ValueError(f"field '{field}' exceeds {upper}: {value!r}")
    return n

def parse_address(value: str, field: str) -> str:
    try:
        return normalize_hex(value, 20)
    except ValueError as e:
        raise ValueError(f"field '{field}': {e}") from None

def parse_hash(value: str, field: str) -> str:
    try:
        return normalize_hex(value, 32)
    except ValueError as e:
        raise ValueError(f"field '{field}': {e}") from None

def parse_optional_float(value: str, field: str):
    """Parse a real number. An empty cell is ``None``."""
    s = value.strip()
    if not s:
        return None
    try:
        x = float(s)
    except ValueError:
        raise ValueError(f"field '{field}' is not a number: {value!r}") from None
    if math.isnan(x):
        raise ValueError(f"field '{field}' is NaN")
    return x

def parse_optional_uint(value: str, field: str):
    """Parse a non-negative integer. An empty cell is ``None``."""
    return parse_uint(value, field) if value.strip() else None

def format_cell(value: Any) -> str:
    """
    Text of a value in a CSV cell.

    ``None`` becomes an empty cell, floats their shortest round-trip
    representation, enumerations their value and integers exact decimals.
    """
    if value is None:
        return ""
    if isinstance(value, Enum):
        return str(value.value)
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        return repr(value)
    return str(value)

# Generic tables

def read_table(path: str, columns: Sequence[str]) -> pd.DataFrame:
    """
    Read a CSV file as text cells and check its header.

    Raises
    ------
    InputError
        If the file is missing, empty, unparsable, or its header differs from
        ``columns``.

    """
    try:
        df = pd.read_csv(path, dtype=str, keep_default_na=False, na_filter=False)
    except FileNotFoundError:
        raise InputError(f"{path}: file not found") from None
    except pd.errors.EmptyDataError:
        raise InputError(f"{path}: empty file, expected header {','.join(columns)}") from None
    except pd.errors.ParserError as e:
        raise InputError(f"{path}: {e}") from None
    if list(df.columns) != list(columns):
        raise InputError(f"{path}: header must be {','.join(columns)}. Got {','.join(map(str, df.columns))}")
    return df

def parse_rows(df: pd.DataFrame, path: str, parse: Callable[[tuple], Any], strict: bool = False) -> Tuple[List[Any], int]:
    """
    Apply a row parser to every row of a table.

    Returns the parsed items and the number of skipped rows. Line numbers in
    error messages count the header as line 1.
    """
    items = []
    skipped = 0
    for line, row in enumerate(df.itertuples(index=False, name=None), start=2):
        try:
            items.append(parse(row))
        except (ValueError, TypeError, AttributeError) as e:
            if strict:
                raise InputError(f"{path}:{line}: {e}") from e
            logger.debug("%s:%d skipped: %s", path, line, e)
            skipped += 1
    if skipped:
        logger.warning("%s: skipped %d malformed rows", path, skipped)
    return items, skipped

def write_table(rows: Iterable[Sequence[Any]], columns: Sequence[str], path: str) -> None:
    """Write rows of values as a CSV file with the given header."""
    cells = [[format_cell(v) for v in row] for row in rows]
    _ensure_parent(path)
    pd.DataFrame(cells, columns=list(columns), dtype=object).to_csv(path, index=False)

def _ensure_parent(path: str) -> None:
    parent = os.path.dirname(os.fspath(path))
    if parent:
        os.makedirs(parent, exist_ok=True)

def _load_keyed(path: str, columns: Sequence[str], parse: Callable[[tuple], Tuple[Any, Any]], strict: bool, what: str) -> LoadedMap:
    pairs, skipped = parse_rows(read_table(path, columns), path, parse, strict)
    result = LoadedMap()
    for key, value in pairs:
        if key in result:
            result.duplicates += 1
        result[key] = value
    result.skipped = skipped
    if result.duplicates:
        logger.warning("%s: %d duplicated %s overridden (last wins)", path, result.duplicates, what)
    return result

# Transfers

def parse_standard(value: str) -> Standard:
    try:
        return Standard(value.strip())
    except ValueError:
        raise ValueError(f"field 'standard' must be ERC721 or ERC1155: {value!r}") from None

TRANSFER_FIELDS = [
    parse_standard,
    partial(parse_address, field="from"),
    partial(parse_address, field="to"),
    partial(parse_address, field="contract"),
    partial(parse_uint, field="token_id"),
    partial(parse_uint, field="amount"),
    partial(parse_uint, field="block_number"),
    partial(parse_uint, field="timestamp"),
    partial(parse_hash, field="tx_hash"),
    partial(parse_uint, field="log_index"),
    partial(parse_uint, field="batch_pos")]

def _check_amount(standard: Standard, amount: int) -> None:
    if standard is Standard.ERC721 and amount != 1:
        raise ValueError(f"field 'amount' must be 1 for ERC721. Got {amount}")

def transfer_from_row(row: Sequence[str]) -> TransferRecord:
    """Build a :class:`TransferRecord` from the text cells of a transfers row."""
    if len(row) != len(TRANSFER_COLUMNS):
        raise ValueError(f"expected {len(TRANSFER_COLUMNS)} fields, got {len(row)}")
    standard, amount = parse_standard(row[0]), parse_uint(row[5], "amount")
    _check_amount(standard, amount)
    return TransferRecord._make(parse(cell) for parse, cell in zip(TRANSFER_FIELDS, row))

def transfer_to_row(r: TransferRecord) -> list:
    return [r.standard, r.sender, r.recipient, r.contract, r.token_id, r.amount, r.block_number, r.timestamp, r.tx_hash, r.log_index, r.batch_pos]

def parse_column(cells: pd.Series, parse: Callable[[str], Any]) -> Tuple[np.ndarray, np.ndarray]:
    """
    Parse a column of text cells, each distinct cell once.

    Returns
    -------
    values : numpy.ndarray
        Object array of parsed values, aligned with ``cells``. Cells that do
        not parse hold ``None``.
    valid : numpy.ndarray
        Boolean mask of the cells that parsed.

    """
    codes, uniques = pd.factorize(cells)
    values = np.empty(len(uniques), dtype=object)
    valid = np.ones(len(uniques), dtype=bool)
    for i, cell in enumerate(uniques):
        try:
            values[i] = parse(cell)
        except ValueError:
            valid[i] = False
    return values[codes], valid[codes]

def load_transfers_csv(path: str, strict: bool = False) -> LoadedList:
    """
    Read transfer records.

    Columns are validated as a whole, every distinct cell being parsed
    once. Invalid rows are parsed again one by one to report their error.

    Parameters
    ----------
    path : str
        CSV file with header
        ``standard,from,to,contract,token_id,amount,block_number,timestamp,tx_hash,log_index,batch_pos``.
    strict : bool, default: False
        Raise on the first invalid row instead of skipping it.

    Returns
    -------
    records : LoadedList
        Records in file order.

    Raises
    ------
    InputError
        If the file cannot be read, or in strict mode for an invalid row.

    """
    df = read_table(path, TRANSFER_COLUMNS)
    columns = []
    valid = np.ones(len(df), dtype=bool)
    for name, parse in zip(TRANSFER_COLUMNS, TRANSFER_FIELDS):
        values, ok = parse_column(df[name], parse)
        columns.append(values)
        valid &= ok
    valid &= np.fromiter((s is not Standard.ERC721 or a == 1 for s, a in zip(columns[0], columns[5])), dtype=bool, count=len(df))
    invalid = np.flatnonzero(~valid)
    for i in invalid:
        try:
            transfer_from_row(tuple(df.iloc[i]))
        except ValueError as e:
            if strict:
                raise InputError(f"{path}:{i+2}: {e}") from e
            logger.debug("%s:%d skipped: %s", path, i+2, e)
    del df
    result = LoadedList(map(TransferRecord._make, zip(*(values[valid] for values in columns))))
    result.skipped = len(invalid)
    if result.skipped:
        logger.warning("%s: skipped %d malformed rows", path, result.skipped)
    logger.info("Loaded %d transfers from %s", len(result), path)
    return result

def write_transfers_csv(records: Iterable[TransferRecord], path: str) -> None:
    """Write transfer records, readable by :func:`load_transfers_csv`."""
    write_table((transfer_to_row(r) for r in records), TRANSFER_COLUMNS, path)

# Transaction values

def load_tx_values(path: str, strict: bool = False) -> LoadedMap:
    """
    Read transaction values.

    Returns
    -------
    values : LoadedMap
        Map of transaction hash to value in wei.

    """
    parse = lambda row: TxValueRecord(parse_hash(row[0], "tx_hash"), parse_uint(row[1], "value_wei"))
    return _load_keyed(path, TX_VALUE_COLUMNS, parse, strict, "transactions")

def write_tx_values(values: Mapping[str, int], path: str) -> None:
    write_table(sorted(values.items()), TX_VALUE_COLUMNS, path)

# Labels

def _label_from_row(row: Sequence[str]) -> CategoryLabel:
    contract = parse_address(row[0], "contract")
    try:
        return CategoryLabel(contract, Category(row[1].strip().lower()))
    except ValueError:
        raise ValueError(f"field 'category' is not a known category: {row[1]!r}") from None

def load_category_labels(path: str, strict: bool = False) -> LoadedMap:
    """
    Read category labels.

    Returns
    -------
    labels : LoadedMap
        Map of contract address to :class:`Category`. A contract labeled
        twice keeps its last label and increments ``duplicates``.

    """
    return _load_keyed(path, LABEL_COLUMNS, _label_from_row, strict, "contracts")

def write_category_labels(labels: Mapping[str, Category], path: str) -> None:
    write_table(sorted(labels.items()), LABEL_COLUMNS, path)

def load_wash_labels(path: str, strict: bool = False) -> Set[NftKey]:
    """Read the set of NFTs labeled as wash traded."""
    parse = lambda row: NftKey(parse_address(row[0], "contract"), parse_uint(row[1], "token_id"))
    keys, _ = parse_rows(read_table(path, WASH_LABEL_COLUMNS), path, parse, strict)
    return set(keys)

def write_wash_labels(keys: Iterable[NftKey], path: str) -> None:
    write_table(sorted(keys), WASH_LABEL_COLUMNS, path)

# JSON lines

def read_jsonl(path: str, parse: Callable[[dict], Any], strict: bool = False) -> LoadedList:
    """Parse every non-blank line of a JSONL file."""
    result = LoadedList()
    try:
        f = open(path, "r", encoding="utf-8")
    except FileNotFoundError:
        raise InputError(f"{path}: file not found") from None
    with f:
        for line, text in enumerate(f, start=1):
            if not text.strip():
                continue
            try:
                obj = json.loads(text)
                if not isinstance(obj, dict):
                    raise ValueError("line is not a JSON object")
                result.append(parse(obj))
            except (ValueError, KeyError, TypeError) as e:
                if strict:
                    raise InputError(f"{path}:{line}: {e}") from e
                logger.debug("%s:%d skipped: %s", path, line, e)
                result.skipped += 1
    if result.skipped:
        logger.warning("%s: skipped %d malformed lines", path, result.skipped)
    return result

def write_jsonl(objects: Iterable[dict], path: str) -> None:
    _ensure_parent(path)
    with open(path, "w", encoding="utf-8") as f:
        for obj in objects:
            f.write(json.dumps(obj, separators=(",", ":")) + "\n")

def _text_from_json(obj: dict) -> DescriptiveText:
    name, description = obj.get("name", ""), obj.get("description", "")
    if not isinstance(name, str) or not isinstance(description, str):
        raise ValueError("'name' and 'description' must be strings")
    return DescriptiveText(parse_address(obj["contract"], "contract"), name, description)

def load_descriptive_texts(path: str, strict: bool = False) -> LoadedList:
    """Read names and descriptions of NFT series, in file order."""
    return read_jsonl(path, _text_from_json, strict)

def write_descriptive_texts(texts: Iterable[DescriptiveText], path: str) -> None:
    write_jsonl(({"contract": t.contract, "name": t.name, "description": t.description} for t in texts), path)

def event_from_json(obj: dict) -> RawLogEvent:
    """
    Build a :class:`RawLogEvent` from an ``eth_getLogs`` log object.

    Quantities may be hexadecimal strings, as returned by the node, or plain
    integers. The ``timestamp`` key is the one attached by the fetcher.
    """
    topics = tuple(hex_to_bytes(t) for t in obj["topics"])
    if not 1 <= len(topics) <= 4:
        raise ValueError(f"a log has 1 to 4 topics. Got {len(topics)}")
    if any(len(t) != 32 for t in topics):
        raise ValueError("every topic must be a 32-byte word")
    if obj.get("timestamp") is None:
        raise ValueError("missing 'timestamp'")
    return RawLogEvent(
        parse_address(obj["address"], "address"),
        topics,
        hex_to_bytes(obj.get("data") or "0x"),
        hex_to_int(obj["blockNumber"]),
        hex_to_int(obj["timestamp"]),
        parse_hash(obj["transactionHash"], "transactionHash"),
        hex_to_int(obj["logIndex"]))

def event_to_json(ev: RawLogEvent) -> Dict[str, Any]:
    return {
        "address": ev.contract_address,
        "topics": ["0x" + t.hex() for t in ev.topics],
        "data": "0x" + ev.data.hex(),
        "blockNumber": hex(ev.block_number),
        "timestamp": hex(ev.timestamp),
        "transactionHash": ev.tx_hash,
        "logIndex": hex(ev.log_index)}

def load_raw_logs_jsonl(path: str, strict: bool = False) -> LoadedList:
    """Read raw event logs written by :func:`write_raw_logs_jsonl` or the fetcher."""
    return read_jsonl(path, event_from_json, strict)

def write_raw_logs_jsonl(events: Iterable[RawLogEvent], path: str) -> None:
    write_jsonl((event_to_json(ev) for ev in events), path)

# Reports

def _json_default(obj):
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, (set, frozenset)):
        return sorted(obj)
    if hasattr(obj, "item"):
        return obj.item()
    raise TypeError(f"Object of type {type(obj).__name__} is not JSON serializable")

def write_json(obj: Any, path: str) -> None:
    """Write a report as indented JSON. Non-finite floats are rejected."""
    _ensure_parent(path)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(obj, f, indent=2, sort_keys=False, allow_nan=False, default=_json_default)
        f.write("\n")
