"""Tilings of a region by meta-pieces."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

from ..exact_cover import (
    UNLIMITED,
    BudgetExhausted,
    SearchBudget,
    TilingSolution,
    count_cached,
    enumerate_all,
    make_matrix,
    solve_first,
    verify_solution,
)
from ..grid import Cell, Polyomino, Transform, apply_transform, orientation_transforms, scale
from ..placements import CoverInstance, multi_piece_instance
from .meta import MetaPiece


@dataclass(frozen=True)
class CoarsePlacement:
    piece: str
    transform: Transform
    offset: Cell


@dataclass(frozen=True)
class CoarseTiling:
    placements: tuple[CoarsePlacement, ...]

    def count(self, name: str) -> int:
        return sum(1 for p in self.placements if p.piece == name)


def coarse_instance(region: Polyomino, pieces: Sequence[MetaPiece]) -> CoverInstance:
    return multi_piece_instance([p.shape for p in pieces], region)


def to_coarse_tiling(instance: CoverInstance, pieces: Sequence[MetaPiece], sol) -> CoarseTiling:
    transforms = [orientation_transforms(p.shape) for p in pieces]
    out = []
    for pid in sol:
        pl = instance.placements[pid]
        out.append(CoarsePlacement(
            pieces[pl.piece].name, transforms[pl.piece][pl.orientation_index], pl.offset))
    return CoarseTiling(tuple(out))


def coarse_tilings(region: Polyomino, pieces: Sequence[MetaPiece],
                   budget: SearchBudget = UNLIMITED,
                   sink: Callable[[CoarseTiling], object] | None = None,
                   method: str = "auto") -> int:
    """Count tilings of ``region`` by the meta-pieces, streaming them to ``sink``.

    ``method`` is ``dlx`` (enumeration), ``cached`` (memoized counting, no
    stream) or ``auto`` (cached unless a sink is given).
    """
    pieces = list(pieces)
    areas = {p.area for p in pieces}
    if not pieces or any(len(region) % a and len(areas) == 1 for a in areas):
        return 0
    inst = coarse_instance(region, pieces)
    if method == "auto":
        method = "dlx" if sink is not None else "cached"
    if method == "cached":
        if sink is not None:
            raise ValueError("cached counting cannot stream tilings")
        return count_cached(inst, budget)
    if method != "dlx":
        raise ValueError(f"unknown method {method!r}")
    inner = None
    if sink is not None:
        def inner(sol: TilingSolution):
            sink(to_coarse_tiling(inst, pieces, sol))
    return enumerate_all(inst, budget, inner)


class _Marked:
    """Cover instance plus one extra column that exactly one seed copy covers."""

    def __init__(self, instance: CoverInstance, seed_index: int):
        self.inner = instance
        marker = instance.n_cells
        self.n_cells = instance.n_cells + 1
        self._rows = [p.covered for p in instance.placements]
        self._origin = list(range(len(instance.placements)))
        for p in instance.placements:
            if p.piece == seed_index:
                self._rows.append(p.covered + (marker,))
                self._origin.append(p.id)
        self.trivially_unsat = bool(instance.uncoverable)

    def rows(self):
        return self._rows

    def original(self, rows) -> TilingSolution:
        return TilingSolution(tuple(self._origin[r] for r in rows))


def forced_cluster_search(base: Polyomino, k: int, seed_pattern: MetaPiece,
                          companions: Sequence[MetaPiece],
                          budget: SearchBudget = UNLIMITED,
                          tie_break: int = 0) -> CoarseTiling | None:
    """A tiling of ``scale(base, k)`` using the seed at least once, or None.

    None means the search was exhaustive; running out of budget raises
    :class:`BudgetExhausted`.
    """
    pieces = [seed_pattern] + [c for c in companions if c.shape.cells != seed_pattern.shape.cells]
    region = scale(base, k)
    inst = coarse_instance(region, pieces)
    marked = _Marked(inst, 0)
    if marked.trivially_unsat or not any(p.piece == 0 for p in inst.placements):
        return None
    found: list[list[int]] = []

    def keep(rows):
        found.append(rows)
        return True

    status, _count, nodes = make_matrix(marked).search(
        max_nodes=budget.max_nodes or 0,
        max_seconds=budget.max_seconds or 0.0,
        on_solution=keep,
        tie_break=tie_break,
    )
    if found:
        sol = marked.original(found[0])
        if not verify_solution(inst, sol):  # pragma: no cover - kernel bug guard
            raise AssertionError("forced search returned a non-partition")
        return to_coarse_tiling(inst, pieces, sol)
    if status != 0:
        raise BudgetExhausted(f"forced search ran out of budget after {nodes} nodes", nodes=nodes)
    return None


def solve_coarse(region: Polyomino, pieces: Sequence[MetaPiece],
                 budget: SearchBudget = UNLIMITED) -> CoarseTiling | None:
    inst = coarse_instance(region, pieces)
    res = solve_first(inst, budget)
    if res.solution is None:
        if res.reason:
            raise BudgetExhausted(f"coarse search ran out of budget after {res.nodes} nodes", nodes=res.nodes)
        return None
    return to_coarse_tiling(inst, pieces, res.solution)


def expand(base: Polyomino, region: Polyomino, tiling: CoarseTiling,
           pieces: Sequence[MetaPiece]) -> list[list[Cell]]:
    """Cells of every meta-piece image in ``tiling`` (for rendering and checks)."""
    by_name = {p.name: p for p in pieces}
    out = []
    for cp in tiling.placements:
        shape = by_name[cp.piece].shape
        img = apply_transform(shape, cp.transform)
        out.append([Cell(x + cp.offset.x, y + cp.offset.y) for x, y in img.cells])
    return out
