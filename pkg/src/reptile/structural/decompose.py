"""Concavity-driven decomposition of J tilings, parity, and constants checks."""

from __future__ import annotations

import enum
import time
from dataclasses import dataclass, field

from ..exact_cover import (
    BudgetExhausted,
    CacheOverflow,
    SearchBudget,
    TilingSolution,
    count_cached,
    verify_solution,
)
from ..grid import SHAPES, Polyomino, canonical, concave_squares, scale
from ..placements import CoverInstance, build_instance
from .identities import Constants, product_count, verify_identity
from .meta import CATALOG, library_meta_piece
from .coarse import coarse_tilings


class ParityVerdict(enum.Enum):
    IMPOSSIBLE_ODD_K = "ImpossibleOddK"
    UNKNOWN = "Unknown"


def j_parity_check(k: int) -> ParityVerdict:
    """Odd ``k > 1`` is ruled out for J without any search.

    J copies pair up into 12-cell meta-pieces, so ``6 k**2`` must be a
    multiple of 12.
    """
    if k < 2:
        raise ValueError(f"parity check needs k >= 2, got {k}")
    return ParityVerdict.IMPOSSIBLE_ODD_K if k % 2 else ParityVerdict.UNKNOWN


class DecompositionFailed(ValueError):
    """A J tiling that does not split into the two pair meta-pieces."""


@dataclass
class DecompositionReport:
    solution: TilingSolution
    groups: list[tuple[str, tuple[int, int]]]
    leftover: list[int] = field(default_factory=list)

    def tally(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for name, _ in self.groups:
            out[name] = out.get(name, 0) + 1
        return out


class _PairTable:
    """Per-instance caches for J pairing: concave cell per placement, pair names."""

    def __init__(self, instance: CoverInstance):
        self.instance = instance
        ids = instance.cell_ids
        base = instance.base
        concave = concave_squares(base)
        if len(concave) != 1:
            raise DecompositionFailed("base must have exactly one concave square")
        from ..grid import orientation_transforms

        transforms = orientation_transforms(base)
        by_orient = []
        for t in transforms:
            img = [t.apply_cell(c) for c in base.cells]
            mx = min(x for x, _ in img)
            my = min(y for _, y in img)
            cx, cy = t.apply_cell(concave[0])
            by_orient.append((cx - mx, cy - my))
        self.concave_of: list[int] = []
        for p in instance.placements:
            dx, dy = by_orient[p.orientation_index]
            cell = (dx + p.offset[0], dy + p.offset[1])
            self.concave_of.append(ids.get(cell, -1))
        self.shapes = {canonical(s): name for name, s in CATALOG["J"].items()}
        self._names: dict[tuple[int, int], str | None] = {}
        self._partners: dict[int, list[int]] = {}

    def partners(self, pid: int) -> list[int]:
        """Placements that pair mutually with ``pid`` into a named meta-piece."""
        if pid not in self._partners:
            cc = self.concave_of[pid]
            mates = []
            if cc >= 0:
                mine = set(self.instance.placements[pid].covered)
                for q in self.instance.columns[cc]:
                    qc = self.concave_of[q]
                    if q != pid and qc in mine and not mine.intersection(self.instance.placements[q].covered):
                        if self.pair_name(pid, q) is not None:
                            mates.append(q)
            self._partners[pid] = mates
        return self._partners[pid]

    def diagnose(self, pid: int, chosen) -> str:
        cc = self.concave_of[pid]
        if cc < 0:
            return f"placement {pid} has its concave square outside the region"
        mate = next((q for q in self.instance.columns[cc] if q in chosen), None)
        if mate is None:
            return f"no placement covers the concave square of {pid}"
        if self.instance.placements[pid].covered.count(self.concave_of[mate]) == 0:
            return f"placements {pid} and {mate} do not fill each other's concave squares"
        return f"placements {pid} and {mate} form an unnamed shape"

    def pair_name(self, a: int, b: int):
        key = (a, b) if a < b else (b, a)
        if key not in self._names:
            cells = self.instance.placement_cells(a) + self.instance.placement_cells(b)
            try:
                name = self.shapes.get(canonical(Polyomino.from_cells(cells)))
            except ValueError:
                name = None
            self._names[key] = name
        return self._names[key]


_TABLES: dict[int, _PairTable] = {}


def _table(instance: CoverInstance) -> _PairTable:
    t = _TABLES.get(id(instance))
    if t is None or t.instance is not instance:
        t = _PairTable(instance)
        _TABLES.clear()
        _TABLES[id(instance)] = t
    return t


def pair_decompose_j(instance: CoverInstance, solution: TilingSolution,
                     check: bool = True) -> DecompositionReport:
    """Pair each J copy with the copy filling its concave square.

    The pairing must be mutual and every pair must be the 3x4 rectangle or
    the S-pair; anything else raises :class:`DecompositionFailed`.
    """
    if instance.base.cells != SHAPES["J"].cells or len(instance.pieces) != 1:
        raise DecompositionFailed(f"pair decomposition applies to J tilings, not {instance.base_name}")
    if check and not verify_solution(instance, solution):
        raise DecompositionFailed("not a verified tiling")
    table = _table(instance)
    chosen = set(solution)
    groups = []
    done = set()
    for pid in solution:
        if pid in done:
            continue
        mate = next((q for q in table.partners(pid) if q in chosen), None)
        if mate is None:
            raise DecompositionFailed(table.diagnose(pid, chosen))
        done.update((pid, mate))
        groups.append((table.pair_name(pid, mate), (min(pid, mate), max(pid, mate))))
    groups.sort(key=lambda g: g[1])
    return DecompositionReport(solution, groups, [])


# constants verification ----------------------------------------------------

# Largest k per shape whose exact table cell is recounted by default.
FEASIBLE_K = {"stair": 8, "J": 9, "F": 9}


@dataclass
class CheckRow:
    kind: str  # identity, count, coarse
    name: str
    expected: int | None
    actual: int | None
    ok: bool | None  # None means skipped
    detail: str = ""
    elapsed: float = 0.0

    @property
    def verdict(self) -> str:
        return {True: "pass", False: "FAIL", None: "skip"}[self.ok]


def _region(spec: dict) -> Polyomino:
    if "rectangle" in spec:
        w, h = spec["rectangle"]
        return Polyomino.from_cells([(x, y) for x in range(w) for y in range(h)])
    return scale(SHAPES[spec["shape"]], int(spec["k"]))


def verify_constants(constants: Constants, run_counts: bool = True,
                     budget: SearchBudget | None = None,
                     feasible_k: dict[str, int] | None = None) -> list[CheckRow]:
    """Check every identity; with ``run_counts`` also recount feasible cells."""
    feasible_k = FEASIBLE_K if feasible_k is None else feasible_k
    budget = budget or SearchBudget(max_seconds=600)
    rows: list[CheckRow] = []
    for ident in constants.identities:
        ok = verify_identity(ident)
        detail = ""
        if ok and ident.matches_table:
            try:
                cell = constants.cell(ident.shape, ident.k)
            except KeyError:
                ok, detail = False, "no table cell"
            else:
                if cell.count != ident.total:
                    ok, detail = False, f"table cell says {cell.count}"
        rows.append(CheckRow("identity", ident.name, ident.total, ident.value, ok, detail))
    if not run_counts:
        return rows
    for chk in constants.coarse:
        t0 = time.perf_counter()
        pieces = [library_meta_piece(n) for n in chk.pieces]
        try:
            got = coarse_tilings(_region(chk.region), pieces, budget)
            ok, detail = got == chk.count, ""
        except (BudgetExhausted, CacheOverflow) as exc:
            got, ok, detail = None, None, str(exc)
        rows.append(CheckRow("coarse", chk.name, chk.count, got, ok, detail, time.perf_counter() - t0))
        # a single flippable rectangle piece gives the full count as coarse x 2^pieces
        if ok and "k" in chk.region and len(pieces) == 1 and pieces[0].flip_degrees:
            try:
                cell = constants.cell(chk.region["shape"], chk.region["k"])
            except KeyError:
                continue
            if cell.status == "exact":
                flips = len(_region(chk.region)) // pieces[0].area
                prod = product_count(got, flips)
                rows.append(CheckRow("product", f"{chk.name} x 2^{flips}", cell.count, prod,
                                     prod == cell.count))
    for cell in constants.cells:
        if cell.status != "exact" or cell.k > feasible_k.get(cell.shape, 0):
            continue
        t0 = time.perf_counter()
        name = f"{cell.shape} k={cell.k}"
        try:
            got = count_cached(build_instance(SHAPES[cell.shape], cell.k), budget)
            ok, detail = got == cell.count, ""
        except (BudgetExhausted, CacheOverflow) as exc:
            got, ok, detail = None, None, str(exc)
        rows.append(CheckRow("count", name, cell.count, got, ok, detail, time.perf_counter() - t0))
    return rows
