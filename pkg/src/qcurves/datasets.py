"""Bundled example data.

The guinea pig survival data come from a tuberculosis study (Bjerkedal,
1960): survival times in days for a control group of 64 animals and for 60
animals injected with virulent tubercle bacilli, in the paired listing used
by Doksum (1974).
"""

from __future__ import annotations

import csv
from importlib.resources import files

import numpy as np

__all__ = ["load_guinea_pigs"]


def load_guinea_pigs() -> dict:
    """Survival times in days: {'control': 64 values, 'treated': 60 values}."""
    path = files("qcurves").joinpath("data/guinea_pigs.csv")
    with path.open(newline="") as fh:
        rows = list(csv.reader(fh))
    header = rows[0]
    out = {name: [] for name in header}
    for row in rows[1:]:
        for name, cell in zip(header, row):
            if cell.strip():
                out[name].append(float(cell))
    return {name: np.array(values) for name, values in out.items()}
