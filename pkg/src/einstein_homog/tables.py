"""Embedded expected root-count grids and grid formatting.

The package ships the known counts of positive quartic roots for the
three-block family over k = 3..20, l = 1..20 as CSV data.  The table command
recomputes the grid with exact Sturm counts and diffs it against these files
cell by cell.
"""

from __future__ import annotations

from importlib import resources

from .spaces import GroupFamily

EMBEDDED_K_RANGE = range(3, 21)
EMBEDDED_L_RANGE = range(1, 21)

_FILES = {
    GroupFamily.ORTHOGONAL: "table_so.csv",
    GroupFamily.SYMPLECTIC: "table_sp.csv",
}


def expected_counts(family: GroupFamily) -> dict:
    """Embedded grid as a {(k, l): count} mapping."""
    text = resources.files("einstein_homog.data").joinpath(_FILES[family]).read_text()
    out = {}
    ks = None
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        cells = line.split(",")
        if ks is None:
            ks = [int(c) for c in cells[1:]]
            continue
        l = int(cells[0])
        for k, val in zip(ks, cells[1:]):
            out[(k, l)] = int(val)
    return out


def grid_csv(grid: dict, k_values, l_values) -> str:
    lines = ["l\\k," + ",".join(str(k) for k in k_values)]
    for l in l_values:
        lines.append(str(l) + "," + ",".join(str(grid[(k, l)]) for k in k_values))
    return "\n".join(lines) + "\n"


def grid_text(grid: dict, k_values, l_values, title: str = "") -> str:
    ks = list(k_values)
    width = max(3, max(len(str(k)) for k in ks) + 1)
    lines = []
    if title:
        lines.append(title)
    lines.append("l\\k" + "".join(str(k).rjust(width) for k in ks))
    for l in l_values:
        lines.append(str(l).ljust(3) + "".join(str(grid[(k, l)]).rjust(width) for k in ks))
    return "\n".join(lines) + "\n"


def compare_with_expected(family: GroupFamily, grid: dict) -> list:
    """Cells where the computed grid disagrees with the embedded one.

    Cells outside the embedded coverage are skipped.  Returns a list of
    (k, l, computed, expected).
    """
    expected = expected_counts(family)
    mismatches = []
    for (k, l), got in sorted(grid.items(), key=lambda kv: (kv[0][1], kv[0][0])):
        if (k, l) in expected and expected[(k, l)] != got:
            mismatches.append((k, l, got, expected[(k, l)]))
    return mismatches
