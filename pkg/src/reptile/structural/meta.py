"""Meta-pieces: convex unions of a few base copies used to coarsen searches."""

from __future__ import annotations

from dataclasses import dataclass

from ..exact_cover import TilingSolution, enumerate_all
from ..grid import (
    ALL_TRANSFORMS,
    Cell,
    NEIGHBOURS,
    SHAPES,
    Polyomino,
    apply_transform,
    canonical,
    distinct_orientations,
    is_convex,
)
from ..placements import instance_from_region


@dataclass(frozen=True)
class MetaPiece:
    shape: Polyomino
    multiplicity: int
    name: str
    partitions: int = 1
    flip_degrees: int = 0

    @property
    def area(self) -> int:
        return len(self.shape)


def _fast_canonical(cells) -> tuple:
    """Smallest normalized image over D4 of an iterable of (x, y) tuples."""
    best = None
    pts = list(cells)
    for t in ALL_TRANSFORMS:
        a, b, c, d = t.matrix
        img = [(a * x + b * y, c * x + d * y) for x, y in pts]
        mx = min(p[0] for p in img)
        my = min(p[1] for p in img)
        key = tuple(sorted((x - mx, y - my) for x, y in img))
        if best is None or key < best:
            best = key
    return best


def internal_partitions(base: Polyomino, shape: Polyomino) -> list[TilingSolution]:
    inst = instance_from_region(base, shape)
    found: list[TilingSolution] = []
    enumerate_all(inst, sink=found.append)
    return found


def _partition_cells(base, shape, sol):
    inst = instance_from_region(base, shape)
    return frozenset(frozenset(inst.placement_cells(p)) for p in sol)


def _mirror_pair(base: Polyomino, shape: Polyomino, sols) -> bool:
    """True if the two partitions are exchanged by a symmetry of ``shape``."""
    a, b = (_partition_cells(base, shape, s) for s in sols)
    for t in ALL_TRANSFORMS[1:]:
        if apply_transform(shape, t).cells != shape.cells:
            continue
        img = []
        for piece in a:
            moved = [t.apply_cell(c) for c in piece]
            img.append(moved)
        # re-anchor with the shape's own offset under t
        all_pts = [p for piece in img for p in piece]
        mx = min(p[0] for p in all_pts)
        my = min(p[1] for p in all_pts)
        mapped = frozenset(frozenset((x - mx, y - my) for x, y in piece) for piece in img)
        if mapped == b:
            return True
    return False


def make_meta_piece(base: Polyomino, shape: Polyomino, name: str | None = None) -> MetaPiece:
    """Wrap ``shape`` after checking it splits into copies of ``base``."""
    if len(shape) % len(base):
        raise ValueError(f"area {len(shape)} is not a multiple of the base area {len(base)}")
    copies = len(shape) // len(base)
    sols = internal_partitions(base, shape)
    if not sols:
        raise ValueError(f"{name or 'shape'} admits no partition into {copies} copies of {base.name}")
    flip = 1 if shape.is_rectangle() and len(sols) == 2 and _mirror_pair(base, shape, sols) else 0
    label = name or catalog_name(base, shape) or f"{base.name or 'P'}{copies}?"
    return MetaPiece(shape.with_name(label), copies, label, len(sols), flip)


def unions(base: Polyomino, copies: int) -> list[Polyomino]:
    """All distinct (up to D4) edge-joined unions of ``copies`` base copies."""
    if copies < 1:
        raise ValueError("copies must be positive")
    orients = [o.cells for o in distinct_orientations(base)]
    level = {_fast_canonical(base.cells): frozenset(base.cells)}
    for _ in range(copies - 1):
        nxt: dict[tuple, frozenset] = {}
        for U in level.values():
            border = {(x + dx, y + dy) for x, y in U for dx, dy in NEIGHBOURS} - U
            tried = set()
            for o in orients:
                for nx, ny in border:
                    for qx, qy in o:
                        ox, oy = nx - qx, ny - qy
                        if (o, ox, oy) in tried:
                            continue
                        tried.add((o, ox, oy))
                        placed = [(x + ox, y + oy) for x, y in o]
                        if any(p in U for p in placed):
                            continue
                        key = _fast_canonical(U.union(placed))
                        if key not in nxt:
                            nxt[key] = frozenset(key)
        level = nxt
    return [Polyomino(tuple(Cell(*c) for c in key)) for key in sorted(level)]


def compose_meta_pieces(base: Polyomino, copies: int, require_convex: bool = True) -> list[MetaPiece]:
    """Meta-pieces made of ``copies`` base copies, deduplicated up to symmetry.

    Rectangles come first, then by bounding-box area and cell tuple.
    """
    if copies not in (2, 3, 4):
        raise ValueError(f"copies must be 2, 3 or 4, got {copies}")
    shapes = unions(base, copies)
    if require_convex:
        shapes = [s for s in shapes if is_convex(s)]
    shapes.sort(key=lambda s: (not s.is_rectangle(), s.width * s.height, s.cells))
    out = []
    for i, s in enumerate(shapes):
        name = catalog_name(base, s) or f"{base.name or 'P'}{copies}-{i}"
        out.append(make_meta_piece(base, s, name))
    return out


# Named meta-pieces; shapes are matched up to D4.
_CATALOG_TEXT = {
    "J": {
        "J-rect": "###\n###\n###\n###",
        "J-S": "##..\n####\n####\n..##",
    },
    "F": {
        "F20": "###\n###\n###\n###",
        "F21": "##.\n###\n###\n###\n..#",
        "F22": "#..\n##.\n###\n###\n.##\n..#",
        "F30": "#....\n##...\n###..\n###..\n.##..\n.###.\n.####",
        "F31": "##...\n###..\n###..\n###..\n.###.\n.####",
        # convex, but dropping one or two copies always leaves a concave remainder
        "F-windmill": "...##.\n#####.\n#####.\n.#####\n.#####\n.##...",
    },
    "stair": {
        "S20": "###\n###\n###\n###",
        "S30": "#.....\n#####.\n#####.\n...##.\n...##.\n...###",
        "S21": "#....\n#####\n#####\n....#",
    },
}

def _build_catalog():
    cat: dict[str, dict[str, Polyomino]] = {}
    for base_name, entries in _CATALOG_TEXT.items():
        cat[base_name] = {}
        for name, text in entries.items():
            cat[base_name][name] = Polyomino.from_text(text, name)
    return cat


CATALOG = _build_catalog()


def catalog_name(base: Polyomino, shape: Polyomino) -> str | None:
    entries = CATALOG.get(base.name or "", {})
    key = canonical(shape)
    for name, s in entries.items():
        if len(s) == len(shape) and canonical(s) == key:
            return name
    return None


def library_meta_piece(name: str) -> MetaPiece:
    """A named catalog piece (``J-rect``, ``F21``, ``S20`` ...) as a MetaPiece."""
    for base_name, entries in CATALOG.items():
        if name in entries:
            return make_meta_piece(SHAPES[base_name], entries[name], name)
    raise KeyError(f"no catalog meta-piece named {name!r}")


def unit_piece(base: Polyomino) -> MetaPiece:
    """The base itself as a one-copy meta-piece."""
    return MetaPiece(base, 1, base.name or "P", 1, 0)
