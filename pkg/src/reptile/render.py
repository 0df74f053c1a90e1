"""SVG figures of tilings: one traced polygon per piece inside the region outline."""

from __future__ import annotations

import colorsys
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from .exact_cover import TilingSolution, verify_solution
from .grid import Polyomino
from .placements import CoverInstance

GOLDEN = 0.6180339887498949


class InvalidSolution(ValueError):
    """Rendering was asked for placements that do not tile the region."""


def golden_palette(index: int) -> str:
    """Hue steps by the golden ratio; adjacent ids get well separated hues."""
    h = (index * GOLDEN) % 1.0
    r, g, b = colorsys.hls_to_rgb(h, 0.62, 0.62)
    return "#{:02x}{:02x}{:02x}".format(round(r * 255), round(g * 255), round(b * 255))


@dataclass(frozen=True)
class RenderStyle:
    cell_px: int = 20
    stroke: float = 1.5
    show_grid: bool = False
    palette: Callable[[int], str] = golden_palette

    def __post_init__(self):
        if self.cell_px < 1:
            raise ValueError(f"cell_px must be at least 1, got {self.cell_px}")
        if self.stroke < 0:
            raise ValueError("stroke must be nonnegative")


def _edges(cells: Iterable[tuple[int, int]]) -> dict[tuple[int, int], list[tuple[int, int]]]:
    """Directed boundary edges, clockwise on screen (y down), keyed by start."""
    cellset = set(cells)
    out: dict[tuple[int, int], list[tuple[int, int]]] = {}
    for x, y in cellset:
        for nb, a, b in (
            ((x, y - 1), (x, y), (x + 1, y)),
            ((x + 1, y), (x + 1, y), (x + 1, y + 1)),
            ((x, y + 1), (x + 1, y + 1), (x, y + 1)),
            ((x - 1, y), (x, y + 1), (x, y)),
        ):
            if nb not in cellset:
                out.setdefault(a, []).append(b)
    return out


def _turn_rank(prev, cur, nxt) -> int:
    # prefer turning right (into the piece) at pinch vertices so loops stay simple
    dx1, dy1 = cur[0] - prev[0], cur[1] - prev[1]
    dx2, dy2 = nxt[0] - cur[0], nxt[1] - cur[1]
    cross = dx1 * dy2 - dy1 * dx2
    return 0 if cross > 0 else (1 if cross == 0 else 2)


def trace_loops(cells: Iterable[tuple[int, int]]) -> list[list[tuple[int, int]]]:
    """Boundary loops of a cell set with collinear unit edges merged.

    Each loop lists its corner vertices once, starting from the smallest.
    """
    edges = _edges(cells)
    for v in edges.values():
        v.sort()
    loops = []
    while edges:
        start = min(edges)
        path = [start]
        cur = start
        prev = None
        while True:
            options = edges[cur]
            if prev is not None and len(options) > 1:
                options.sort(key=lambda n: _turn_rank(prev, cur, n))
            nxt = options.pop(0)
            if not options:
                del edges[cur]
            prev, cur = cur, nxt
            if cur == start:
                break
            path.append(cur)
        loops.append(_merge_collinear(path))
    return loops


def _merge_collinear(path):
    n = len(path)
    keep = []
    for i in range(n):
        a, b, c = path[i - 1], path[i], path[(i + 1) % n]
        if (b[0] - a[0]) * (c[1] - b[1]) - (b[1] - a[1]) * (c[0] - b[0]) != 0:
            keep.append(b)
    i = keep.index(min(keep))
    return keep[i:] + keep[:i]


def shoelace(loop: Sequence[tuple[float, float]]) -> float:
    s = 0.0
    for i in range(len(loop)):
        x1, y1 = loop[i - 1]
        x2, y2 = loop[i]
        s += x1 * y2 - x2 * y1
    return s / 2


def _num(v: float) -> str:
    return f"{v:.2f}".rstrip("0").rstrip(".")


def _path_d(loops, px: int, m: float) -> str:
    parts = []
    for loop in loops:
        pts = " L ".join(f"{_num(x * px + m)} {_num(y * px + m)}" for x, y in loop)
        parts.append(f"M {pts} Z")
    return " ".join(parts)


def render_cells(region: Polyomino, pieces: Sequence[tuple[int, Sequence[tuple[int, int]]]],
                 style: RenderStyle = RenderStyle(), title: str = "") -> str:
    """SVG for ``(colour key, cells)`` pieces drawn inside ``region``."""
    px = style.cell_px
    m = max(style.stroke, 1.0)
    w = region.width * px + 2 * m
    h = region.height * px + 2 * m
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{_num(w)}" height="{_num(h)}" '
        f'viewBox="0 0 {_num(w)} {_num(h)}">',
    ]
    if title:
        out.append(f"<title>{title}</title>")
    out.append(f'<g class="pieces" stroke="#222222" stroke-width="{_num(style.stroke)}" stroke-linejoin="round">')
    for key, cells in pieces:
        d = _path_d(trace_loops(cells), px, m)
        out.append(f'<path data-piece="{key}" fill="{style.palette(key)}" d="{d}"/>')
    out.append("</g>")
    if style.show_grid:
        out.append('<g class="grid" stroke="#ffffff" stroke-opacity="0.5" stroke-width="0.5">')
        cells = region.cellset
        seen = set()
        for x, y in region.cells:
            for (a, b) in (((x + 1, y), (x + 1, y + 1)), ((x, y + 1), (x + 1, y + 1))):
                inner = (x + 1, y) in cells if a[0] == b[0] else (x, y + 1) in cells
                if inner and (a, b) not in seen:
                    seen.add((a, b))
                    out.append(f'<line x1="{_num(a[0] * px + m)}" y1="{_num(a[1] * px + m)}" '
                               f'x2="{_num(b[0] * px + m)}" y2="{_num(b[1] * px + m)}"/>')
        out.append("</g>")
    d = _path_d(trace_loops(region.cells), px, m)
    out.append(f'<path class="outline" fill="none" stroke="#000000" stroke-width="{_num(2 * style.stroke)}" d="{d}"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def render_svg(instance: CoverInstance, solution: TilingSolution,
               style: RenderStyle = RenderStyle()) -> str:
    if not verify_solution(instance, solution):
        raise InvalidSolution(f"{len(solution)} placements do not tile the {instance.n_cells}-cell region")
    pieces = [(pid, instance.placement_cells(pid)) for pid in solution]
    return render_cells(instance.region, pieces, style, f"{instance.base_name} k={instance.k}")


def render_coarse(region: Polyomino, groups: Sequence[Sequence[tuple[int, int]]],
                  style: RenderStyle = RenderStyle()) -> str:
    """SVG of a coarse tiling given the cells of each meta-piece image."""
    covered = sorted(c for g in groups for c in g)
    if covered != sorted(map(tuple, region.cells)):
        raise InvalidSolution("meta-piece images do not partition the region")
    return render_cells(region, list(enumerate(groups)), style)
