"""
CSV / JSON export of character tables.

CSV layout: the header row lists "degree" and the mu index in text form, the
first body row ("class_size") carries the superclass sizes, and each further
row is one lambda with its degree followed by the character values.
"""

import os
import sys
import json
from typing import Any, Dict, Optional

import pandas as pd

sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from libs.chars import CharTable
from libs.qarith import as_integer
from utils import get_logger

logger = get_logger(__name__)


def table_to_frame(table: CharTable) -> pd.DataFrame:
    """Character table as a DataFrame of Python ints (object dtype, no overflow)."""
    labels = [mu.to_text() for mu in table.index]
    columns = ["degree"] + labels
    records = [[""] + [as_integer(size, "class size") for size in table.class_sizes]]
    row_labels = ["class_size"]
    for lam, degree, row in zip(table.index, table.degrees, table.values):
        row_labels.append(lam.to_text())
        records.append([as_integer(degree, "degree")] + [as_integer(v, "character value") for v in row])
    frame = pd.DataFrame(records, index=row_labels, columns=columns, dtype=object)
    frame.index.name = "tableau"
    return frame


def table_to_csv(table: CharTable, output_path: Optional[str] = None) -> str:
    """Render (and optionally write) the CSV form; returns the text."""
    text = table_to_frame(table).to_csv(lineterminator="\n")
    if output_path:
        os.makedirs(os.path.dirname(output_path) or ".", exist_ok=True)
        with open(output_path, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
        logger.info(f"Wrote CSV table to {output_path}")
    return text


def table_to_document(table: CharTable) -> Dict[str, Any]:
    poly = table.polytope
    return {
        "beta": list(poly.beta.parts),
        "poset": [list(pair) for pair in poly.poset.pairs()],
        "q": table.q,
        "index": [lam.to_text() for lam in table.index],
        "degrees": [as_integer(d, "degree") for d in table.degrees],
        "class_sizes": [as_integer(s, "class size") for s in table.class_sizes],
        "values": table.as_integers(),
    }


def table_to_json(table: CharTable, output_path: Optional[str] = None) -> str:
    """Render (and optionally write) the JSON document; returns the text."""
    text = json.dumps(table_to_document(table), indent=2) + "\n"
    if output_path:
        os.makedirs(os.path.dirname(output_path) or ".", exist_ok=True)
        with open(output_path, "w", encoding="utf-8") as handle:
            handle.write(text)
        logger.info(f"Wrote JSON table to {output_path}")
    return text
