"""Placement enumeration and the exact-one cover instance."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

from .grid import Cell, Polyomino, distinct_orientations, scale


class CellOutOfRange(IndexError):
    pass


@dataclass(frozen=True)
class Placement:
    id: int
    orientation_index: int
    offset: Cell
    covered: tuple[int, ...]
    piece: int = 0


def row_major(cells) -> list[Cell]:
    return sorted((Cell(*c) for c in cells), key=lambda c: (c.y, c.x))


def enumerate_placements(
    base: Polyomino,
    region: Polyomino,
    cell_ids: dict[Cell, int] | None = None,
    one_sided: bool = False,
    piece: int = 0,
    first_id: int = 0,
) -> list[Placement]:
    """Every orientation/translation of ``base`` lying inside ``region``.

    Ordered by orientation index, then offset in row-major order; ids are the
    positions in that order.
    """
    if cell_ids is None:
        cell_ids = {c: i for i, c in enumerate(row_major(region.cells))}
    out: list[Placement] = []
    for oi, orient in enumerate(distinct_orientations(base, one_sided)):
        for dy in range(region.height - orient.height + 1):
            for dx in range(region.width - orient.width + 1):
                ids = []
                for x, y in orient.cells:
                    cid = cell_ids.get((x + dx, y + dy))
                    if cid is None:
                        break
                    ids.append(cid)
                else:
                    out.append(Placement(
                        first_id + len(out), oi, Cell(dx, dy), tuple(sorted(ids)), piece))
    return out


@dataclass(frozen=True)
class CoverInstance:
    base: Polyomino
    k: int
    region: Polyomino
    placements: tuple[Placement, ...]
    cells: tuple[Cell, ...] = field(repr=False)
    one_sided: bool = False
    pieces: tuple[Polyomino, ...] = ()

    def __post_init__(self):
        if not self.pieces:
            object.__setattr__(self, "pieces", (self.base,))

    @property
    def base_name(self) -> str:
        return self.base.name or "custom"

    @property
    def n_cells(self) -> int:
        return len(self.cells)

    @property
    def cell_ids(self) -> dict[Cell, int]:
        try:
            return self.__dict__["_cell_ids"]
        except KeyError:
            ids = {c: i for i, c in enumerate(self.cells)}
            object.__setattr__(self, "_cell_ids", ids)
            return ids

    @property
    def columns(self) -> list[list[int]]:
        """For each cell id, the ids of the placements covering it."""
        try:
            return self.__dict__["_columns"]
        except KeyError:
            cols: list[list[int]] = [[] for _ in self.cells]
            for p in self.placements:
                for c in p.covered:
                    cols[c].append(p.id)
            object.__setattr__(self, "_columns", cols)
            return cols

    @property
    def uncoverable(self) -> list[int]:
        """Cell ids no placement covers; non-empty means trivially unsatisfiable."""
        return [c for c, ps in enumerate(self.columns) if not ps]

    @property
    def trivially_unsat(self) -> bool:
        unit = math.gcd(*(len(p) for p in self.pieces))
        return bool(self.uncoverable) or self.n_cells % unit != 0

    def rows(self) -> list[tuple[int, ...]]:
        return [p.covered for p in self.placements]

    def placement_cells(self, pid: int) -> list[Cell]:
        return [self.cells[c] for c in self.placements[pid].covered]

    def to_json(self) -> str:
        doc = {
            "base": {"name": self.base.name, "cells": [list(c) for c in self.base.cells]},
            "k": self.k,
            "cells": [list(c) for c in self.cells],
            "placements": [
                {
                    "id": p.id,
                    "orientation": p.orientation_index,
                    "offset": list(p.offset),
                    "covered": list(p.covered),
                    **({"piece": p.piece} if len(self.pieces) > 1 else {}),
                }
                for p in self.placements
            ],
        }
        return json.dumps(doc, separators=(",", ":"), sort_keys=True)


def instance_from_region(
    base: Polyomino, region: Polyomino, k: int = 1, one_sided: bool = False
) -> CoverInstance:
    cells = tuple(row_major(region.cells))
    ids = {c: i for i, c in enumerate(cells)}
    placements = enumerate_placements(base, region, ids, one_sided)
    return CoverInstance(base, k, region, tuple(placements), cells, one_sided)


def multi_piece_instance(
    pieces, region: Polyomino, k: int = 1, one_sided: bool = False
) -> CoverInstance:
    """Cover instance whose rows are placements of several distinct pieces.

    Placements are grouped by piece (in the given order), then ordered as in
    :func:`enumerate_placements`.
    """
    pieces = tuple(pieces)
    cells = tuple(row_major(region.cells))
    ids = {c: i for i, c in enumerate(cells)}
    placements: list[Placement] = []
    for index, piece in enumerate(pieces):
        placements += enumerate_placements(piece, region, ids, one_sided, index, len(placements))
    return CoverInstance(pieces[0], k, region, tuple(placements), cells, one_sided, pieces)


def build_instance(base: Polyomino, k: int, one_sided: bool = False) -> CoverInstance:
    if k < 1:
        raise ValueError(f"scale factor must be positive, got {k}")
    return instance_from_region(base, scale(base, k), k, one_sided)


def cell_constraint(instance: CoverInstance, cell_id: int) -> list[int]:
    if not 0 <= cell_id < instance.n_cells:
        raise CellOutOfRange(f"cell id {cell_id} outside 0..{instance.n_cells - 1}")
    return list(instance.columns[cell_id])
