"""Wigner matrix tables as CSV or JSON.

Floats are written with ``repr``, the shortest decimal string that reads
back to the same double, so a table survives a write/read cycle bit for bit.
"""

from __future__ import annotations

import csv
import io
import json

import numpy as np

from .group import index_range

CSV_HEADER = ["two_ell", "two_m", "two_s", "re", "im"]


def table_rows(two_ell: int, D: np.ndarray):
    for i, tm in enumerate(index_range(two_ell)):
        for j, ts in enumerate(index_range(two_ell)):
            z = complex(D[i, j])
            yield two_ell, tm, ts, z.real, z.imag


def table_to_csv(two_ell: int, D: np.ndarray) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for n, tm, ts, re, im in table_rows(two_ell, D):
        w.writerow([n, tm, ts, repr(re), repr(im)])
    return buf.getvalue()


def table_to_json(two_ell: int, D: np.ndarray) -> str:
    entries = [
        {"two_ell": n, "two_m": tm, "two_s": ts, "re": re, "im": im}
        for n, tm, ts, re, im in table_rows(two_ell, D)
    ]
    return json.dumps({"two_ell": two_ell, "entries": entries}, indent=1)


def _fill(two_ell: int, records) -> np.ndarray:
    D = np.zeros((two_ell + 1, two_ell + 1), dtype=complex)
    for n, tm, ts, re, im in records:
        if n != two_ell:
            raise ValueError("table mixes degrees")
        D[(tm + two_ell) // 2, (ts + two_ell) // 2] = complex(re, im)
    return D


def table_from_csv(text: str):
    reader = csv.reader(io.StringIO(text))
    header = next(reader)
    if header != CSV_HEADER:
        raise ValueError(f"unexpected header {header}")
    records = [(int(a), int(b), int(c), float(d), float(e)) for a, b, c, d, e in reader]
    two_ell = records[0][0]
    return two_ell, _fill(two_ell, records)


def table_from_json(text: str):
    obj = json.loads(text)
    two_ell = int(obj["two_ell"])
    records = [(e["two_ell"], e["two_m"], e["two_s"], e["re"], e["im"]) for e in obj["entries"]]
    return two_ell, _fill(two_ell, records)
