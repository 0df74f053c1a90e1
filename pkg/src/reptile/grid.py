"""Polyomino geometry on the integer grid.

Cells are ``(x, y)`` pairs with ``y`` growing downward, matching the text
shape format where row 0 is the top line.  Every :class:`Polyomino` is kept
normalized (bounding box anchored at the origin) and its cells are stored as
a sorted tuple, so two equal shapes always compare and hash equal.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, NamedTuple


class Cell(NamedTuple):
    x: int
    y: int


NEIGHBOURS = ((1, 0), (-1, 0), (0, 1), (0, -1))


class ShapeError(ValueError):
    """Base class for invalid polyomino input."""


class EmptyShape(ShapeError):
    pass


class Disconnected(ShapeError):
    def __init__(self, cell):
        super().__init__(f"cell {tuple(cell)} is not edge-connected to the rest of the shape")
        self.cell = Cell(*cell)


class HoleError(ShapeError):
    def __init__(self, cell):
        super().__init__(f"cell {tuple(cell)} is an interior hole")
        self.cell = Cell(*cell)


class NotASquare(ValueError):
    """A rep-n count that cannot belong to any polyomino rep-tile."""

    def __init__(self, n):
        super().__init__(f"rep-{n} is impossible for polyominoes: {n} is not a perfect square")
        self.n = n


@dataclass(frozen=True)
class Polyomino:
    cells: tuple[Cell, ...]
    name: str | None = None

    def __post_init__(self):
        if not self.cells:
            raise EmptyShape("a polyomino needs at least one cell")
        if min(c.x for c in self.cells) != 0 or min(c.y for c in self.cells) != 0:
            raise ShapeError("polyomino cells must be normalized; use normalize()")

    @classmethod
    def from_cells(cls, cells: Iterable, name: str | None = None) -> "Polyomino":
        return normalize(cells, name=name)

    @classmethod
    def from_text(cls, text: str, name: str | None = None) -> "Polyomino":
        """Parse a ``#``/``.`` grid, one row per line."""
        cells = []
        rows = [line.strip() for line in text.strip("\n").splitlines()]
        for y, row in enumerate(rows):
            for x, ch in enumerate(row):
                if ch == "#":
                    cells.append((x, y))
                elif ch not in ".":
                    raise ShapeError(f"unexpected character {ch!r} in shape text")
        return normalize(cells, name=name)

    def __len__(self):
        return len(self.cells)

    def __iter__(self):
        return iter(self.cells)

    def __contains__(self, cell):
        return Cell(*cell) in self.cellset

    @property
    def cellset(self) -> frozenset[Cell]:
        # cached lazily; frozen dataclass forbids normal assignment
        try:
            return self.__dict__["_cellset"]
        except KeyError:
            s = frozenset(self.cells)
            object.__setattr__(self, "_cellset", s)
            return s

    @property
    def width(self) -> int:
        return max(c.x for c in self.cells) + 1

    @property
    def height(self) -> int:
        return max(c.y for c in self.cells) + 1

    def is_rectangle(self) -> bool:
        return len(self.cells) == self.width * self.height

    def same_shape(self, other: "Polyomino") -> bool:
        """Equality of cell sets, ignoring names."""
        return self.cells == other.cells

    def to_text(self) -> str:
        s = self.cellset
        return "\n".join(
            "".join("#" if (x, y) in s else "." for x in range(self.width))
            for y in range(self.height)
        )

    def with_name(self, name: str) -> "Polyomino":
        return Polyomino(self.cells, name)


def _check_connected(cells: frozenset) -> None:
    start = min(cells)
    seen = {start}
    queue = deque([start])
    while queue:
        x, y = queue.popleft()
        for dx, dy in NEIGHBOURS:
            n = (x + dx, y + dy)
            if n in cells and n not in seen:
                seen.add(n)
                queue.append(n)
    if len(seen) != len(cells):
        raise Disconnected(min(cells - seen))


def normalize(cells: Iterable, name: str | None = None) -> Polyomino:
    """Translate ``cells`` so the bounding box starts at the origin."""
    raw = [tuple(c) for c in cells]
    if not raw:
        raise EmptyShape("a polyomino needs at least one cell")
    unique = frozenset(raw)
    if len(unique) != len(raw):
        raise ShapeError("duplicate cells")
    _check_connected(unique)
    mx = min(x for x, _ in unique)
    my = min(y for _, y in unique)
    return Polyomino(tuple(sorted(Cell(x - mx, y - my) for x, y in unique)), name)


# 2x2 integer matrices (a, b, c, d) acting as (x, y) -> (a*x + b*y, c*x + d*y).
# Quarter turn: (x, y) -> (-y, x).  Reflection: (x, y) -> (-x, y), applied first.
def _matmul(m, n):
    a, b, c, d = m
    e, f, g, h = n
    return (a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)


_QUARTER = (0, -1, 1, 0)
_MIRROR = (-1, 0, 0, 1)


@dataclass(frozen=True)
class Transform:
    """An element of the dihedral group of the square."""

    rotation: int = 0
    reflected: bool = False

    def __post_init__(self):
        if self.rotation not in (0, 90, 180, 270):
            raise ValueError(f"rotation must be a multiple of 90 in [0, 270], got {self.rotation}")

    @property
    def matrix(self):
        m = _MIRROR if self.reflected else (1, 0, 0, 1)
        for _ in range(self.rotation // 90):
            m = _matmul(_QUARTER, m)
        return m

    def apply_cell(self, cell) -> Cell:
        a, b, c, d = self.matrix
        x, y = cell
        return Cell(a * x + b * y, c * x + d * y)

    def then(self, other: "Transform") -> "Transform":
        """The transform that applies ``self`` first and ``other`` second."""
        return _FROM_MATRIX[_matmul(other.matrix, self.matrix)]

    def inverse(self) -> "Transform":
        for t in ALL_TRANSFORMS:
            if self.then(t) == IDENTITY:
                return t
        raise AssertionError("dihedral group is not closed")  # pragma: no cover


def compose(t1: Transform, t2: Transform) -> Transform:
    """Apply ``t1`` then ``t2``."""
    return t1.then(t2)


ALL_TRANSFORMS: tuple[Transform, ...] = tuple(
    Transform(r, f) for f in (False, True) for r in (0, 90, 180, 270)
)
IDENTITY = ALL_TRANSFORMS[0]
_FROM_MATRIX = {t.matrix: t for t in ALL_TRANSFORMS}
assert len(_FROM_MATRIX) == 8


def apply_transform(p: Polyomino, t: Transform) -> Polyomino:
    return normalize((t.apply_cell(c) for c in p.cells), name=p.name)


def distinct_orientations(p: Polyomino, one_sided: bool = False) -> list[Polyomino]:
    """Images of ``p`` under D4 (rotations only if ``one_sided``), deduplicated.

    Sorted lexicographically on their cell tuples.
    """
    group = [t for t in ALL_TRANSFORMS if not (one_sided and t.reflected)]
    images = {apply_transform(p, t).cells for t in group}
    return [Polyomino(cells, p.name) for cells in sorted(images)]


def orientation_transforms(p: Polyomino, one_sided: bool = False) -> list[Transform]:
    """One representative transform per entry of :func:`distinct_orientations`."""
    group = [t for t in ALL_TRANSFORMS if not (one_sided and t.reflected)]
    reps: dict[tuple, Transform] = {}
    for t in group:
        reps.setdefault(apply_transform(p, t).cells, t)
    return [reps[cells] for cells in sorted(reps)]


def canonical(p: Polyomino) -> tuple[Cell, ...]:
    """Orientation-independent key: the smallest cell tuple over D4."""
    return distinct_orientations(p)[0].cells


def scale(p: Polyomino, k: int) -> Polyomino:
    if k < 1:
        raise ValueError(f"scale factor must be positive, got {k}")
    cells = [
        Cell(k * x + i, k * y + j) for x, y in p.cells for i in range(k) for j in range(k)
    ]
    name = f"{p.name}x{k}" if p.name else None
    return Polyomino(tuple(sorted(cells)), name)


def neighbour_count(cells, cell) -> int:
    x, y = cell
    return sum((x + dx, y + dy) in cells for dx, dy in NEIGHBOURS)


def _outside_frontier(p: Polyomino):
    s = p.cellset
    seen = set()
    for x, y in p.cells:
        for dx, dy in NEIGHBOURS:
            n = Cell(x + dx, y + dy)
            if n not in s and n not in seen:
                seen.add(n)
                yield n


def concave_squares(p: Polyomino) -> list[Cell]:
    """Outside cells sharing exactly three edges with ``p``, in row-major order.

    Raises :class:`HoleError` for an outside cell enclosed on all four sides.
    """
    s = p.cellset
    found = []
    for n in _outside_frontier(p):
        count = neighbour_count(s, n)
        if count == 4:
            raise HoleError(n)
        if count == 3:
            found.append(n)
    return sorted(found, key=lambda c: (c.y, c.x))


def has_hole(p: Polyomino) -> bool:
    """True if some empty cell cannot reach the outside of the bounding box."""
    s = p.cellset
    w, h = p.width, p.height
    seen = set()
    queue = deque()
    for x in range(-1, w + 1):
        for y in (-1, h):
            seen.add((x, y))
            queue.append((x, y))
    for y in range(h):
        for x in (-1, w):
            seen.add((x, y))
            queue.append((x, y))
    while queue:
        x, y = queue.popleft()
        for dx, dy in NEIGHBOURS:
            n = (x + dx, y + dy)
            if -1 <= n[0] <= w and -1 <= n[1] <= h and n not in s and n not in seen:
                seen.add(n)
                queue.append(n)
    return len(seen) + len(s) < (w + 2) * (h + 2)


def is_convex(p: Polyomino) -> bool:
    """No concave square and no hole (the filter used for meta-pieces)."""
    if has_hole(p):
        return False
    return not concave_squares(p)


def validate_rep_count(n: int) -> int:
    """Return ``k`` with ``k*k == n`` or raise :class:`NotASquare`."""
    if n < 1:
        raise ValueError(f"rep count must be positive, got {n}")
    k = math.isqrt(n)
    if k * k != n:
        raise NotASquare(n)
    return k


_LIBRARY_TEXT = {
    "stair": "###\n##.\n#..",
    "J": "###\n#..\n##.",
    "F": "##\n#.\n##\n#.",
    "domino": "##",
    "monomino": "#",
}

SHAPES: dict[str, Polyomino] = {
    name: Polyomino.from_text(text, name) for name, text in _LIBRARY_TEXT.items()
}


def load_shape(spec: str) -> Polyomino:
    """Resolve a library name (case-insensitive) or a path to a shape file."""
    for name, shape in SHAPES.items():
        if spec.lower() == name.lower():
            return shape
    path = Path(spec)
    if not path.is_file():
        raise ShapeError(f"unknown shape {spec!r}: not a library name and not a file")
    return Polyomino.from_text(path.read_text(), name=path.stem)
