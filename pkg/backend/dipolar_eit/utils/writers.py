"""
Output writers. Every CSV carries its units in the header, e.g. "delta_p [gamma]",
and is written with a fixed float format so identical runs give identical bytes.
"""
import json
import logging
import os
from typing import Any, Dict

import pandas as pd

logger = logging.getLogger(__name__)

FLOAT_FORMAT = '%.12g'


def unit_header(column, unit):
    return f'{column} [{unit}]' if unit else column


def write_table(table, path, units: Dict[str, str]):
    """
    Write a table as CSV with unit-labelled headers.

    Args:
        table: DataFrame or mapping of column name to values
        path: Output file path
        units: Unit label per column ('' for dimensionless)

    Returns:
        The path written
    """
    frame = table if isinstance(table, pd.DataFrame) else pd.DataFrame(table)
    missing = [c for c in frame.columns if c not in units]
    if missing:
        raise KeyError(f"No unit declared for column(s): {missing}")
    frame = frame.rename(columns={c: unit_header(c, units[c]) for c in frame.columns})
    frame.to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator='\n')
    logger.debug(f"Wrote {len(frame)} row(s) to {path}")
    return path


def read_table(path):
    """Read a CSV written by write_table, stripping the unit labels from the headers"""
    frame = pd.read_csv(path)
    return frame.rename(columns={c: c.split(' [', 1)[0] for c in frame.columns})


def write_json(path, obj: Any):
    with open(path, 'w', encoding='utf-8') as f:
        json.dump(obj, f, indent=2, sort_keys=True, default=float)
        f.write('\n')
    return path


def ensure_output_dir(path):
    if not os.path.exists(path):
        os.makedirs(path)
    return path
