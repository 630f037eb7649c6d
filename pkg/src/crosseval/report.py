"""Serialization of cross-test results: CSV, JSON, markdown and SVG.

Machine-readable outputs store EERs as fractions. In the CSV files and the
heatmap, rows are spoof subsets and columns are bona fide subsets.
"""

from __future__ import annotations

import csv
import io
import json
import math
from decimal import ROUND_HALF_UP, Decimal
from xml.sax.saxutils import escape, quoteattr

from .crosstest import CrossTestMatrix, PooledRow
from .metrics import EerOutcome

CELL = 18
FONT = 11
CHAR_W = 7


def _csv(rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerows(rows)
    return buf.getvalue()


def _grid(matrix: CrossTestMatrix, fmt):
    rows = [["spoof_id", *matrix.bonafide_ids]]
    for m, sid in enumerate(matrix.spoof_ids):
        rows.append([sid, *(fmt(matrix.cells[k][m]) for k in range(len(matrix.bonafide_ids)))])
    return rows


def matrix_csv(matrix: CrossTestMatrix) -> str:
    return _csv(_grid(matrix, lambda c: f"{c.eer:.6f}"))


def thresholds_csv(matrix: CrossTestMatrix) -> str:
    return _csv(_grid(matrix, lambda c: repr(c.threshold)))


def matrix_to_dict(matrix: CrossTestMatrix, metadata=None) -> dict:
    return {
        "metadata": dict(metadata or {}),
        "bonafide_ids": list(matrix.bonafide_ids),
        "spoof_ids": list(matrix.spoof_ids),
        "cells": [[c.as_dict() for c in row] for row in matrix.cells],
    }


def matrix_json(matrix: CrossTestMatrix, metadata=None) -> str:
    return json.dumps(matrix_to_dict(matrix, metadata), indent=1, ensure_ascii=False) + "\n"


def matrix_from_json(text: str) -> CrossTestMatrix:
    d = json.loads(text)
    cells = [[EerOutcome.from_dict(c) for c in row] for row in d["cells"]]
    return CrossTestMatrix(list(d["bonafide_ids"]), list(d["spoof_ids"]), cells)


def emit_matrix(matrix: CrossTestMatrix, metadata=None) -> dict[str, str]:
    return {
        "matrix_csv": matrix_csv(matrix),
        "thresholds_csv": thresholds_csv(matrix),
        "matrix_json": matrix_json(matrix, metadata),
    }


def round2(x: float) -> str:
    """Two decimals, halves rounded away from zero on the shortest decimal repr."""
    return str(Decimal(repr(float(x))).quantize(Decimal("0.01"), rounding=ROUND_HALF_UP))


def _md_row(cells):
    return "| " + " | ".join(cells) + " |"


def emit_pooled(rows: list[PooledRow], n_spoof: int | None = None) -> str:
    """Markdown table of max- and mean-pooled EERs, one column per bona fide subset.

    The trailing ``avg.`` column is the mean over bona fide subsets; it is a
    display aggregate only.
    """
    if not rows:
        raise ValueError("no pooled rows")
    m = f"M={n_spoof} " if n_spoof is not None else ""
    maxes = [r.max_eer for r in rows]
    means = [r.mean_eer for r in rows]
    lines = [
        "# Pooled EER per bona fide subset",
        "",
        _md_row(["", *(r.bonafide_id for r in rows), "avg."]),
        _md_row([":--", *(["--:"] * (len(rows) + 1))]),
        _md_row([f"max. EER of {m}synthesizers", *map(round2, maxes), round2(math.fsum(maxes) / len(maxes))]),
        _md_row(["hardest synthesizer", *(r.argmax_spoof_id for r in rows), ""]),
        _md_row([f"avg. EER of {m}synthesizers", *map(round2, means), round2(math.fsum(means) / len(means))]),
        "",
        "EER values are fractions in [0, 1] (0.25 means 25%).",
        "The avg. column averages over bona fide subsets for display only; "
        "rows are not meant to be pooled across bona fide types.",
        "",
    ]
    return "\n".join(lines)


def gray_level(eer: float) -> int:
    return int(math.floor(255 * (1.0 - eer) + 0.5))


def fill_for(eer: float) -> str:
    g = gray_level(eer)
    return f"#{g:02x}{g:02x}{g:02x}"


def render_heatmap(matrix: CrossTestMatrix) -> str:
    """Grayscale SVG heatmap; darker cells have higher EER.

    Rows are spoof subsets, columns bona fide subsets. Output bytes depend
    only on the matrix.
    """
    n_cols, n_rows = len(matrix.bonafide_ids), len(matrix.spoof_ids)
    left = CHAR_W * max(len(s) for s in matrix.spoof_ids) + 8
    top = CHAR_W * max(len(s) for s in matrix.bonafide_ids) + 8
    width = left + n_cols * CELL + 1
    height = top + n_rows * CELL + 1
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="monospace" font-size="{FONT}">',
        '<g class="col-labels">',
    ]
    for k, bid in enumerate(matrix.bonafide_ids):
        x = left + k * CELL + CELL // 2 + FONT // 3
        out.append(f'<text x="{x}" y="{top - 4}" transform="rotate(-90 {x} {top - 4})">{escape(bid)}</text>')
    out.append("</g>")
    out.append('<g class="row-labels" text-anchor="end">')
    for m, sid in enumerate(matrix.spoof_ids):
        y = top + m * CELL + CELL // 2 + FONT // 3
        out.append(f'<text x="{left - 4}" y="{y}">{escape(sid)}</text>')
    out.append("</g>")
    out.append('<g class="cells" stroke="#808080" stroke-width="0.5">')
    for m, sid in enumerate(matrix.spoof_ids):
        for k, bid in enumerate(matrix.bonafide_ids):
            e = matrix.cells[k][m].eer
            title = escape(f"{bid} x {sid}: EER {e:.6f}")
            out.append(
                f'<rect class="cell" x="{left + k * CELL}" y="{top + m * CELL}" width="{CELL}" '
                f'height="{CELL}" fill="{fill_for(e)}" data-bonafide={quoteattr(bid)} '
                f"data-spoof={quoteattr(sid)}><title>{title}</title></rect>"
            )
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def outcomes_csv(ids, outcomes) -> str:
    """One row per (subset id, EER outcome)."""
    rows = [["subset_id", "eer", "threshold", "fpr", "fnr"]]
    for sid, o in zip(ids, outcomes):
        rows.append([sid, f"{o.eer:.6f}", repr(o.threshold), f"{o.fpr_at_threshold:.6f}", f"{o.fnr_at_threshold:.6f}"])
    return _csv(rows)


def curve_csv(points) -> str:
    """Error-rate curve as CSV (threshold, fpr, fnr)."""
    rows = [["threshold", "fpr", "fnr"]]
    rows.extend([repr(p.threshold), repr(p.fpr), repr(p.fnr)] for p in points)
    return _csv(rows)


def drift_csv(report) -> str:
    rows = [["inclusion_fraction", "threshold", "eer", "distance_to_reference"]]
    for f, t, e, d in zip(report.inclusion_fractions, report.thresholds, report.eers, report.distances()):
        rows.append([repr(f), repr(t), f"{e:.6f}", repr(d)])
    rows.append(["omitted", repr(report.reference_threshold), f"{report.reference_eer:.6f}", "0.0"])
    return _csv(rows)


def outcome_json(outcome: EerOutcome, metadata=None) -> str:
    d = {"metadata": dict(metadata or {}), **outcome.as_dict()}
    return json.dumps(d, indent=1) + "\n"
