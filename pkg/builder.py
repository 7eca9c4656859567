"""builder

Tabulate search reports with pandas: one CSV row per (N, K, L) search and a per-(N, K) minimal-L summary.
"""

import io
import pandas as pd
from datamodel.search import CSV_COLUMNS, Verdict


def reports_to_frame(reports) -> pd.DataFrame:
    df = pd.DataFrame([r.csv_row() for r in reports], columns=CSV_COLUMNS)
    return df.astype({"n": "int64", "k": "int64", "l": "int64", "nodes": "int64", "seconds": "float64",
                      "memory_bits": "float64"})


def to_csv(reports, include_seconds=True) -> str:
    """CSV text with columns n,k,l,verdict,nodes,seconds,memory_bits; seconds are zeroed for replayable output."""
    df = reports_to_frame(reports)
    if not include_seconds:
        df["seconds"] = 0.0
    _buffer = io.StringIO()
    df.to_csv(_buffer, index=False)
    return _buffer.getvalue()


def summarize_min_l(df: pd.DataFrame) -> pd.DataFrame:
    """Per (n, k): smallest l with verdict exists, largest l searched, and whether every smaller l was impossible."""
    df = df.sort_values(["n", "k", "l"])
    _rows = []
    for (_n, _k), _group in df.groupby(["n", "k"], sort=True):
        _feasible = _group[_group.verdict == Verdict.exists]
        _min_l = int(_feasible.l.min()) if len(_feasible) else None
        _below = _group[_group.l < _min_l] if _min_l is not None else _group
        _certain = _min_l is not None and bool((_below.verdict == Verdict.impossible).all()) \
            and len(_below) == _min_l - 1
        _rows.append({"n": int(_n), "k": int(_k), "min_l": _min_l, "l_searched": int(_group.l.max()),
                      "certain": _certain})
    return pd.DataFrame(_rows, columns=["n", "k", "min_l", "l_searched", "certain"]).astype({"min_l": "Int64"})
