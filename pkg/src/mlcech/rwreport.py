"""Report reading and writing: canonical JSON and fixed-column CSV."""

import json
import math
import sys
from fractions import Fraction
from logging import getLogger
from typing import Any, Dict, List, NamedTuple, Optional, Sequence

import numpy as np
import pandas as pd

from mlcech.exact import INF, FnDivisor, GaussianRational, Poly, RationalFunction

logger = getLogger(__name__)

SCHEMA_VERSION = 1


class ColumnSpecs(NamedTuple):
    name: str
    format: str


RR_COLUMNS = [
    ColumnSpecs(name="divisor", format="str"),
    ColumnSpecs(name="degree", format="int"),
    ColumnSpecs(name="window", format="int"),
    ColumnSpecs(name="h0", format="int"),
    ColumnSpecs(name="h1", format="int"),
    ColumnSpecs(name="lhs", format="int"),
    ColumnSpecs(name="rhs", format="int"),
    ColumnSpecs(name="holds", format="bool"),
]
GRID_COLUMNS = [
    ColumnSpecs(name="z_re", format="float"),
    ColumnSpecs(name="z_im", format="float"),
    ColumnSpecs(name="f_re", format="float"),
    ColumnSpecs(name="f_im", format="float"),
    ColumnSpecs(name="bound", format="float"),
]
TABLE_COLUMNS = [
    ColumnSpecs(name="table", format="str"),
    ColumnSpecs(name="n", format="int"),
    ColumnSpecs(name="p", format="int"),
    ColumnSpecs(name="q", format="int"),
    ColumnSpecs(name="value", format="int"),
]
KEY_VALUE_COLUMNS = [
    ColumnSpecs(name="key", format="str"),
    ColumnSpecs(name="value", format="str"),
]


def format_rational(x: Fraction) -> str:
    """"p/q", or "p" when q is 1."""
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def format_point(point: Any) -> str:
    """The dictionary-key form of a point of ℙ¹: "inf", "p/q" or "a+bi"."""
    if point is INF:
        return "inf"
    return str(GaussianRational.coerce(point))


def format_float(x: float) -> Optional[float]:
    """JSON has no NaN or infinities; both become null."""
    x = float(x)
    return x if math.isfinite(x) else None


def encode(obj: Any) -> Any:
    """Converts a report value to plain JSON types.

    Gaussian rationals become {"re": "p/q", "im": "p/q"}, points "inf", complex
    floats {"re": x, "im": y}, divisors {point: n}, polynomials and rational
    functions their coefficient lists.
    """
    if obj is None or isinstance(obj, (bool, str)):
        return obj
    if obj is INF:
        return "inf"
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, Fraction):
        return format_rational(obj)
    if isinstance(obj, GaussianRational):
        return {"re": format_rational(obj.re), "im": format_rational(obj.im)}
    if isinstance(obj, (float, np.floating)):
        return format_float(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return {"re": format_float(obj.real), "im": format_float(obj.imag)}
    if isinstance(obj, FnDivisor):
        return {format_point(p): n for p, n in obj.items()}
    if isinstance(obj, Poly):
        return [encode(c) for c in obj.coeffs]
    if isinstance(obj, RationalFunction):
        return {"num": encode(obj.num), "den": encode(obj.den)}
    if hasattr(obj, "_asdict"):
        return {k: encode(v) for k, v in obj._asdict().items()}
    if isinstance(obj, dict):
        return {str(k): encode(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [encode(v) for v in obj]
    raise TypeError(f"Cannot encode {type(obj).__name__} in a report")


def dumps(report: Dict[str, Any], command: str) -> str:
    """Canonical JSON: sorted keys, two-space indent, trailing newline."""
    doc = encode(report)
    doc["schema_version"] = SCHEMA_VERSION
    doc["command"] = command
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def df_count_na(df: pd.DataFrame, subset: Optional[List[str]] = None) -> int:
    """Counts the rows with a `na` value in `subset` (every column by default).

    The rows are kept; a CSV writes their `na` cells empty.

    Args:
        df (pd.DataFrame): The dataframe.
        subset (Optional[List[str]]): The columns to check.

    Returns:
        A[n] `int`, the number of incomplete rows.
    """
    na = df[subset or list(df.columns)].isna().any(axis=1)
    count = int(na.sum())
    if count:
        logger.info(f"{count} rows have `na` values")
    return count


def df_drop_duplicates(df: pd.DataFrame, subset: Optional[List[str]] = None) -> pd.DataFrame:
    """Drops repeated rows, keeping the first.

    Args:
        df (pd.DataFrame): The original dataframe.
        subset (Optional[List[str]]): The columns that identify a row.

    Returns:
        A[n] `pd.DataFrame` without duplicates.
    """
    dup = df.duplicated(subset=subset)
    if dup.any():
        logger.warning(f"Dropping {int(dup.sum())} duplicate rows:\n{df[dup]}")
        return df[~dup].reset_index(drop=True)
    return df


def to_frame(rows: Sequence[Dict[str, Any]], columns: Sequence[ColumnSpecs]) -> pd.DataFrame:
    """A dataframe with exactly `columns`, in order and with their dtypes."""
    names = [c.name for c in columns]
    df = pd.DataFrame(list(rows), columns=names)
    return df.astype({c.name: c.format for c in columns})


def key_value_frame(report: Dict[str, Any]) -> pd.DataFrame:
    """One row per top-level key, values in compact canonical JSON."""
    doc = encode(report)
    rows = [
        {"key": k, "value": json.dumps(doc[k], sort_keys=True, ensure_ascii=False)}
        for k in sorted(doc)
    ]
    return to_frame(rows, KEY_VALUE_COLUMNS)


def to_csv(df: pd.DataFrame) -> str:
    return df.to_csv(index=False, lineterminator="\n")


def write_report(text: str, path: Optional[str]) -> None:
    """Writes a fully rendered report to `path`, or to stdout if it is `None`.

    Raises:
        OSError: If the file cannot be written.
    """
    if path is None or path == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    logger.info(f"Writing report to {path}")
    with open(path, "w", newline="") as f:
        f.write(text)
