"""Behavioral model of the analog CAM array.

Each cell stores a voltage interval [LB, UB]; a search drives the cell's two
data lines and the cell matches when V_LDL >= LB and V_UDL <= UB.  Character
cells use the four fixed intervals below, the dummy MM cell stores an
inverted interval that mismatches every character drive, and a deactivated
(don't-care) column is driven with (V_DD, 0) so it matches any content.

Voltages are exact two-decimal constants; comparisons use Decimal so that
interval endpoints behave exactly (endpoint membership is inclusive).  The
windowed search is vectorized over integer hundredths of a volt, which is
the same arithmetic without object overhead.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import Decimal

import numpy as np

from .seqio import DnaSequence, Pattern

V_DD = Decimal("0.80")

MM = "MM"
DONT_CARE_KIND = "*"


class GeometryError(ValueError):
    """Array geometry constraint violated."""


class TextTooLong(GeometryError):
    def __init__(self, length: int, capacity: int) -> None:
        super().__init__(f"text of {length} characters exceeds array capacity {capacity}")


class PatternTooLong(GeometryError):
    def __init__(self, p: int, width: int) -> None:
        super().__init__(f"pattern length {p} exceeds data width {width}")


class WindowOutOfRange(IndexError):
    def __init__(self, window: int, width: int) -> None:
        super().__init__(f"window {window} outside [0, {width})")


@dataclass(frozen=True)
class MatchInterval:
    lower: Decimal
    upper: Decimal


@dataclass(frozen=True)
class CellContent:
    """Stored cell state: the character (or MM) with its interval and resistances."""

    kind: str
    interval: MatchInterval
    r_lb_kohm: float
    r_ub_kohm: float


@dataclass(frozen=True)
class SearchDrive:
    """Per-column data-line drive for one search cycle."""

    kind: str
    v_ldl: Decimal
    v_udl: Decimal


def _interval(lo: str, hi: str) -> MatchInterval:
    return MatchInterval(Decimal(lo), Decimal(hi))


# Character encoding: programmed resistance pair and the resulting interval.
CHAR_CELLS: dict[str, CellContent] = {
    "A": CellContent("A", _interval("0.19", "0.31"), 2500.0, 186.32),
    "C": CellContent("C", _interval("0.32", "0.44"), 163.3, 27.6),
    "G": CellContent("G", _interval("0.46", "0.59"), 24.9, 9.69),
    "T": CellContent("T", _interval("0.63", "0.79"), 8.9, 5.06),
}

# Dummy cell: R_LB takes the last interval's R_UB and vice versa, producing an
# inverted interval (LB > UB) that no character drive can satisfy.
MM_CELL = CellContent(MM, _interval("0.79", "0.19"), 5.06, 2500.0)

# Midpoint drive voltage applied to both data lines when searching a character.
SEARCH_MIDPOINTS: dict[str, Decimal] = {
    "A": Decimal("0.25"),
    "C": Decimal("0.38"),
    "G": Decimal("0.53"),
    "T": Decimal("0.71"),
}

DONT_CARE = SearchDrive(DONT_CARE_KIND, V_DD, Decimal("0.00"))


def encode_char(c: str) -> CellContent:
    """Cell content for one nucleotide character."""
    try:
        return CHAR_CELLS[c]
    except KeyError:
        raise ValueError(f"no encoding for character {c!r}") from None


def drive_for(c: str | None) -> SearchDrive:
    """Data-line drive for searching character ``c``; None (or '*') deactivates."""
    if c is None or c == DONT_CARE_KIND:
        return DONT_CARE
    try:
        mid = SEARCH_MIDPOINTS[c]
    except KeyError:
        raise ValueError(f"no search drive for character {c!r}") from None
    return SearchDrive(c, mid, mid)


def cell_matches(cell: CellContent, drive: SearchDrive) -> bool:
    """Single-cell match: the lower subcircuit mismatches when V_LDL < LB,
    the upper one when V_UDL > UB."""
    return drive.v_ldl >= cell.interval.lower and drive.v_udl <= cell.interval.upper


def _centivolts(v: Decimal) -> int:
    return int(v * 100)


class AcamArray:
    """M x (W + p - 1) grid of cells, split into B equal row blocks.

    Columns 0..W-1 hold text data; the trailing p-1 columns of row i replicate
    the first p-1 data cells of row i+1 so a pattern window can straddle a row
    boundary.  The last row replicates MM, and data cells past the end of the
    text also hold MM.  Immutable once built.
    """

    def __init__(self, rows: int, data_width: int, pattern_len: int, blocks: int,
                 cells: list[list[CellContent]]):
        if rows % blocks != 0:
            raise GeometryError(f"rows {rows} not divisible into {blocks} blocks")
        self.rows = rows
        self.data_width = data_width
        self.pattern_len = pattern_len
        self.blocks = blocks
        self.cells = tuple(tuple(row) for row in cells)
        lb = [[_centivolts(c.interval.lower) for c in row] for row in cells]
        ub = [[_centivolts(c.interval.upper) for c in row] for row in cells]
        self._lb = np.array(lb, dtype=np.int16)
        self._ub = np.array(ub, dtype=np.int16)

    @property
    def total_cols(self) -> int:
        return self.data_width + self.pattern_len - 1

    @property
    def rows_per_block(self) -> int:
        return self.rows // self.blocks

    def cell(self, row: int, col: int) -> CellContent:
        return self.cells[row][col]


def load_text(text: DnaSequence | str, rows: int, data_width: int,
              pattern_len: int, blocks: int) -> AcamArray:
    """Load DNA text row by row and fill the replication columns.

    Row i receives text[i*W : (i+1)*W]; the final partial row and any rows
    past the text hold MM in the unused data cells.
    """
    symbols = str(text)
    if pattern_len < 1:
        raise GeometryError("pattern length must be at least 1")
    if pattern_len > data_width:
        raise PatternTooLong(pattern_len, data_width)
    capacity = rows * data_width
    if len(symbols) > capacity:
        raise TextTooLong(len(symbols), capacity)

    data: list[list[CellContent]] = []
    for r in range(rows):
        chunk = symbols[r * data_width:(r + 1) * data_width]
        row = [CHAR_CELLS[ch] for ch in chunk]
        row.extend([MM_CELL] * (data_width - len(chunk)))
        data.append(row)

    repl = pattern_len - 1
    grid = []
    for r in range(rows):
        if r + 1 < rows:
            tail = data[r + 1][:repl]
        else:
            tail = [MM_CELL] * repl
        grid.append(data[r] + tail)
    return AcamArray(rows, data_width, pattern_len, blocks, grid)


def _window_drives_cv(array: AcamArray, window: int, pattern: str) -> tuple[np.ndarray, np.ndarray]:
    vl = np.full(array.total_cols, _centivolts(V_DD), dtype=np.int16)
    vu = np.zeros(array.total_cols, dtype=np.int16)
    for k, ch in enumerate(pattern):
        mid = _centivolts(SEARCH_MIDPOINTS[ch])
        vl[window + k] = mid
        vu[window + k] = mid
    return vl, vu


def search_cycle(array: AcamArray, block: int, window: int,
                 pattern: Pattern | str) -> list[bool]:
    """One search cycle: drive columns window..window+p-1 with the pattern,
    everything else don't-care, and AND each row of the selected block.

    Only the selected block produces tags; other blocks stay deactivated.
    """
    pat = str(pattern)
    if len(pat) != array.pattern_len:
        raise GeometryError(
            f"pattern length {len(pat)} does not match array pattern length {array.pattern_len}")
    if not 0 <= block < array.blocks:
        raise GeometryError(f"block {block} outside [0, {array.blocks})")
    if not 0 <= window < array.data_width:
        raise WindowOutOfRange(window, array.data_width)

    vl, vu = _window_drives_cv(array, window, pat)
    r0 = block * array.rows_per_block
    r1 = r0 + array.rows_per_block
    matched = (vl >= array._lb[r0:r1]) & (vu <= array._ub[r0:r1])
    return matched.all(axis=1).tolist()


def run_block_search(array: AcamArray, block: int,
                     pattern: Pattern | str) -> np.ndarray:
    """All W windows over one block; entry (row, i) is the tag of window i.

    Issues exactly W search cycles.
    """
    m = array.rows_per_block
    out = np.zeros((m, array.data_width), dtype=bool)
    for i in range(array.data_width):
        out[:, i] = search_cycle(array, block, i, pattern)
    return out
