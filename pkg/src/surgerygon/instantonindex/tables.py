"""Reference decomposition tables and their regeneration by exhaustive search."""

from __future__ import annotations

import time
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from ..weightlattice import format_rational
from .formulas import energy, index_Xbar
from .search import DEFAULT_WINDOW, DecompRow, nice_decomposition_search

__all__ = ["TableRow", "ReferenceTable", "REFERENCE_TABLES", "RowResult", "regenerate", "format_text", "to_json"]


@dataclass(frozen=True)
class TableRow:
    v: Tuple[int, ...]
    s: Tuple[int, ...]
    example: Tuple[Tuple[int, ...], ...]  # one decomposition listed for the row
    kappa: Fraction
    ind_plus_h0: Optional[int] = None


@dataclass(frozen=True)
class ReferenceTable:
    number: int
    N: int
    k: int
    rows: Tuple[TableRow, ...]

    @property
    def has_index(self) -> bool:
        return any(r.ind_plus_h0 is not None for r in self.rows)


def _row(v, s, ws, kappa, ind=None) -> TableRow:
    return TableRow(tuple(v), tuple(s), tuple(tuple(w) for w in ws), Fraction(kappa), ind)


_Z2, _Z3, _Z4 = (0, 0), (0, 0, 0), (0, 0, 0, 0)

REFERENCE_TABLES: Tuple[ReferenceTable, ...] = (
    ReferenceTable(1, 2, 2, (
        _row((0, 0), (0, 0), [_Z2, _Z2], 0),
        _row((0, 0), (1, 1), [(0, 1), (1, 0)], "1/2"),
        _row((0, 1), (0, 1), [(0, 0), (0, 1)], "1/8"),
    )),
    ReferenceTable(2, 2, 3, (
        _row((0, 0), (0, 0, 0), [_Z2] * 3, 0),
        _row((0, 0), (0, 1, 1), [(0, 0), (0, 1), (1, 0)], "1/2"),
        _row((0, 1), (0, 0, 1), [(0, 0), (0, 0), (0, 1)], "1/6"),
        _row((0, 1), (1, 1, 1), [(0, 1), (0, 1), (1, 0)], "2/3"),
    )),
    ReferenceTable(3, 3, 2, (
        _row(_Z3, (0, 0), [_Z3, _Z3], 0),
        _row(_Z3, (1, 2), [(0, 0, 1), (1, 1, 0)], "2/3"),
        _row((0, 0, 1), (0, 1), [_Z3, (0, 0, 1)], "1/6"),
        _row((0, 0, 1), (2, 2), [(0, 1, 1), (1, 0, 1)], "1/2"),
    )),
    ReferenceTable(4, 3, 3, (
        _row(_Z3, (0, 0, 0), [_Z3] * 3, 0),
        _row(_Z3, (0, 1, 2), [_Z3, (0, 0, 1), (1, 1, 0)], "2/3"),
        _row(_Z3, (1, 1, 1), [(0, 0, 1), (0, 1, 0), (1, 0, 0)], 1),
        _row((0, 0, 1), (0, 0, 1), [_Z3, _Z3, (0, 0, 1)], "2/9"),
        _row((0, 0, 1), (1, 1, 2), [(0, 0, 1), (0, 1, 0), (1, 0, 1)], "8/9"),
        _row((0, 0, 1), (0, 2, 2), [_Z3, (1, 0, 1), (0, 1, 1)], "5/9"),
        _row((0, 1, 2), (0, 0, 0), [_Z3, _Z3, (-1, 0, 1)], "2/3"),
        _row((0, 1, 2), (0, 1, 2), [_Z3, (0, 0, 1), (0, 1, 1)], "1/3"),
        _row((0, 1, 2), (1, 1, 1), [(0, 0, 1), (0, 0, 1), (0, 1, 0)], "2/3"),
    )),
    ReferenceTable(5, 4, 2, (
        _row(_Z4, (1, 3), [(0, 0, 0, 1), (0, 0, 0, -1)], "3/4"),
        _row(_Z4, (0, 0), [_Z4, _Z4], 0),
        _row(_Z4, (2, 2), [(0, 0, 1, 1), (0, 0, -1, -1)], 1),
        _row((0, 0, 0, 1), (1, 0), [(0, 0, 0, 1), _Z4], "3/16"),
        _row((0, 0, 0, 1), (2, 3), [(0, 0, 1, 1), (0, 0, -1, 0)], "11/16"),
        _row((0, 0, 1, 1), (2, 0), [(0, 0, 1, 1), _Z4], "1/4"),
        _row((0, 0, 1, 1), (1, 1), [(0, 0, 0, 1), (0, 0, 1, 0)], "1/2"),
    )),
    ReferenceTable(6, 4, 3, (
        _row(_Z4, (0, 0, 0), [_Z4] * 3, 0, -8),
        _row(_Z4, (1, 1, 2), [(0, 0, 0, 1), (0, 0, 1, 0), (0, 0, -1, -1)], "5/4", 8),
        _row(_Z4, (2, 2, 0), [(0, 0, 1, 1), (0, 0, -1, -1), _Z4], 1, 4),
        _row(_Z4, (0, 1, 3), [_Z4, (0, 0, 0, 1), (0, 0, 0, -1)], "3/4", 2),
        _row((0, 0, 0, 1), (0, 0, 1), [_Z4, _Z4, (0, 0, 0, 1)], "1/4", -4),
        _row((0, 0, 0, 1), (1, 1, 3), [(0, 0, 0, 1), (0, 0, 0, 1), (0, 0, 0, -1)], 1, 4),
        _row((0, 0, 0, 1), (2, 2, 1), [(0, 0, -1, -1), (0, 0, 1, 1), (0, 0, 0, 1)], "5/4", 8),
        _row((0, 0, 0, 1), (3, 3, 3), [(0, 1, 1, 1), (0, -1, 0, 0), (0, 0, -1, 0)], 1, 4),
        _row((0, 0, 0, 1), (0, 2, 3), [_Z4, (0, 0, 1, 1), (0, 0, -1, 0)], "3/4", 2),
    )),
    ReferenceTable(7, 4, 3, (
        _row((0, 0, 1, 1), (0, 0, 2), [_Z4, _Z4, (0, 0, 1, 1)], "1/3", -4),
        _row((0, 0, 1, 1), (1, 1, 0), [(0, 0, 0, 1), (0, 0, 1, 0), _Z4], "7/12", 0),
        _row((0, 0, 1, 1), (2, 2, 2), [(0, 0, 1, 1), (1, 1, 0, 0), (-1, -1, 0, 0)], "4/3", 8),
        _row((0, 0, 1, 1), (1, 2, 3), [(0, 0, 0, 1), (0, 0, 1, 1), (0, 0, 0, -1)], "13/12", 6),
        _row((0, 0, 1, 2), (0, 0, 3), [_Z4, _Z4, (0, 0, 1, 2)], "11/12", 4),
        _row((0, 0, 1, 2), (1, 1, 1), [(0, 0, 0, 1), (0, 0, 1, 0), (0, 0, 0, 1)], "2/3", 0),
        _row((0, 0, 1, 2), (3, 3, 1), [(0, 1, 1, 1), (0, -1, 0, 0), (0, 0, 0, 1)], "2/3", 0),
        _row((0, 0, 1, 2), (0, 1, 2), [_Z4, (0, 0, 0, 1), (0, 0, 1, 1)], "5/12", -2),
    )),
)


@dataclass(frozen=True)
class RowResult:
    table: int
    reference: TableRow
    found: DecompRow

    @property
    def kappa_ok(self) -> bool:
        return self.found.kappa == self.reference.kappa

    @property
    def index_ok(self) -> bool:
        return self.reference.ind_plus_h0 is None or self.found.ind_plus_h0 == self.reference.ind_plus_h0

    @property
    def ok(self) -> bool:
        return self.kappa_ok and self.index_ok


def regenerate(
    window: int = DEFAULT_WINDOW,
    tables: Optional[Sequence[int]] = None,
    accelerate: Optional[bool] = None,
) -> Tuple[List[RowResult], float]:
    """Search every reference row; returns the results and the wall time in seconds."""
    t0 = time.perf_counter()
    out = []
    for tab in REFERENCE_TABLES:
        if tables is not None and tab.number not in tables:
            continue
        for row in tab.rows:
            found = nice_decomposition_search(row.v, row.s, tab.k, window=window, accelerate=accelerate)
            out.append(RowResult(tab.number, row, found))
    return out, time.perf_counter() - t0


def _vec(v) -> str:
    return "(" + ",".join(str(x) for x in v) + ")"


def format_text(results: Sequence[RowResult]) -> str:
    """Aligned text, one block per table."""
    lines: List[str] = []
    by_table = {}
    for r in results:
        by_table.setdefault(r.table, []).append(r)
    for tab in REFERENCE_TABLES:
        rows = by_table.get(tab.number)
        if not rows:
            continue
        lines.append(f"Table {tab.number}: N={tab.N}, k={tab.k}")
        header = ["v", "s", "w_1..w_k", "kappa"]
        if tab.has_index:
            header.append("ind+h0")
        header.append("check")
        body = []
        for r in rows:
            cells = [
                _vec(r.reference.v),
                _vec(r.reference.s),
                " ".join(_vec(w) for w in r.found.ensemble.vectors),
                format_rational(r.found.kappa),
            ]
            if tab.has_index:
                cells.append(str(r.found.ind_plus_h0))
            cells.append("ok" if r.ok else "MISMATCH")
            body.append(cells)
        widths = [max(len(c[i]) for c in [header] + body) for i in range(len(header))]
        for cells in [header] + body:
            lines.append("  " + "  ".join(c.ljust(w) for c, w in zip(cells, widths)).rstrip())
        lines.append("")
    return "\n".join(lines)


def to_json(results: Sequence[RowResult], elapsed: Optional[float] = None) -> dict:
    rows = []
    for r in results:
        d = r.found.to_json()
        d.update(
            table=r.table,
            expected_kappa=format_rational(r.reference.kappa),
            expected_ind_plus_h0=r.reference.ind_plus_h0,
            ok=r.ok,
        )
        rows.append(d)
    out = {"rows": rows, "all_ok": all(r.ok for r in results)}
    if elapsed is not None:
        out["seconds"] = round(elapsed, 3)
    return out


def check_examples() -> List[Tuple[int, TableRow, bool]]:
    """Do the listed example decompositions reproduce the listed values themselves?"""
    out = []
    for tab in REFERENCE_TABLES:
        for row in tab.rows:
            ok = energy(row.example) == row.kappa
            if row.ind_plus_h0 is not None:
                ok = ok and index_Xbar(row.example) == row.ind_plus_h0
            out.append((tab.number, row, ok))
    return out
