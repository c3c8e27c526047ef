"""Board drawings: shaded-region diagrams as ASCII art and SVG.

A model is drawn as its board with every cell belonging to an absent
region shaded.  The SVG output is deterministic text (no timestamps, no
floating-point noise), so figures can be diffed and golden-tested.
"""

from __future__ import annotations

from .board import Board, ConstraintSet, region_cells

SHADED = "###"
UNSHADED = " . "

CELL_PX = 40
THIN = 1
THICK = 3
SHADE_FILL = "#555555"
SHADE_OPACITY = "0.35"


def shaded_cells(cset: ConstraintSet) -> frozenset[int]:
    """Flat indices of cells covered by at least one absent region."""
    out = set()
    for cid in cset.missing_ids:
        out.update(region_cells(cid, cset.board))
    return frozenset(out)


def render_ascii(cset: ConstraintSet) -> str:
    """Box-bordered text drawing; at order 3 the frame is 13x37 characters.

    Shaded cells print as ``###``, unshaded ones as `` . ``.
    """
    board = cset.board
    n = board.n
    side = board.side
    shaded = shaded_cells(cset)
    border = "+" + "+".join("-" * (4 * n - 1) for _ in range(n)) + "+"
    lines = [border]
    for row in range(1, side + 1):
        cells = [SHADED if board.cell_index(row, col) in shaded else UNSHADED
                 for col in range(1, side + 1)]
        chunks = [" ".join(cells[i:i + n]) for i in range(0, side, n)]
        lines.append("|" + "|".join(chunks) + "|")
        if row % n == 0:
            lines.append(border)
    return "\n".join(lines)


def _svg_board_fragment(cset: ConstraintSet, ox: int, oy: int) -> list[str]:
    """SVG elements for one board with its top-left corner at (ox, oy)."""
    board = cset.board
    n = board.n
    side = board.side
    size = side * CELL_PX
    shaded = shaded_cells(cset)
    parts = [f'<rect x="{ox}" y="{oy}" width="{size}" height="{size}" '
             f'fill="white"/>']
    for cell in sorted(shaded):
        r, c = board.cell_coords(cell)
        parts.append(f'<rect x="{ox + (c - 1) * CELL_PX}" '
                     f'y="{oy + (r - 1) * CELL_PX}" '
                     f'width="{CELL_PX}" height="{CELL_PX}" '
                     f'fill="{SHADE_FILL}" fill-opacity="{SHADE_OPACITY}"/>')
    for i in range(side + 1):
        w = THICK if i % n == 0 else THIN
        p = i * CELL_PX
        parts.append(f'<line x1="{ox}" y1="{oy + p}" x2="{ox + size}" '
                     f'y2="{oy + p}" stroke="black" stroke-width="{w}"/>')
        parts.append(f'<line x1="{ox + p}" y1="{oy}" x2="{ox + p}" '
                     f'y2="{oy + size}" stroke="black" stroke-width="{w}"/>')
    return parts


def render_svg(cset: ConstraintSet) -> str:
    """Standalone SVG drawing of one model.

    Box borders are drawn thick, cell borders thin, and cells of absent
    regions are filled translucently so overlaps stay readable.
    """
    size = cset.board.side * CELL_PX
    margin = THICK
    total = size + 2 * margin
    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{total}" '
             f'height="{total}" viewBox="0 0 {total} {total}">']
    parts.extend(_svg_board_fragment(cset, margin, margin))
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def render_sheet(csets, title: str, columns: int = 8) -> str:
    """One SVG sheet of board thumbnails, each captioned by missing labels.

    Used for appendix-style overviews of a whole classification run.
    """
    if columns < 1:
        raise ValueError("columns must be positive")
    csets = list(csets)
    caption_px = 18
    pad = 12
    cell = (csets[0].board.side if csets else 9) * CELL_PX
    step_x = cell + pad
    step_y = cell + caption_px + pad
    rows = (len(csets) + columns - 1) // columns
    width = columns * step_x + pad
    height = rows * step_y + pad + 2 * caption_px
    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
             f'height="{height}" viewBox="0 0 {width} {height}" '
             f'font-family="monospace" font-size="14">',
             f'<text x="{pad}" y="{caption_px}">{title} '
             f'({len(csets)} classes)</text>']
    for i, cset in enumerate(csets):
        ox = pad + (i % columns) * step_x
        oy = 2 * caption_px + (i // columns) * step_y
        parts.extend(_svg_board_fragment(cset, ox, oy))
        label = cset.missing_labels() or "none"
        parts.append(f'<text x="{ox}" y="{oy + cell + caption_px - 4}" '
                     f'font-size="11">{label}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def render_class_sheets(report) -> dict[str, str]:
    """Thumbnail sheets of a ClassificationReport, one per verdict group."""
    sheets = {}
    groups = (("sudoku", report.sudoku_classes),
              ("non-sudoku", report.non_sudoku_classes),
              ("unresolved", report.unresolved_classes))
    for name, csets in groups:
        if csets:
            title = f"Missing({report.n_missing}) {name} classes"
            sheets[name] = render_sheet(csets, title)
    return sheets
