"""Algorithm X over dancing links, plus memoized counting.

The dancing-links kernel is compiled with Cython when available; otherwise,
or when ``REPTILE_PURE_PYTHON=1`` is set, the pure-Python kernel is used.
``KERNEL`` names the active one.
"""

from __future__ import annotations

import enum
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

from . import _dlx_py
from .cached import CacheStats, CachedCounter, DEFAULT_CACHE_BYTES, cache_cap_from_env
from .errors import BudgetExhausted, CacheOverflow

if os.environ.get("REPTILE_PURE_PYTHON") == "1":
    _kernel = _dlx_py
else:
    try:
        from . import _dlx_c as _kernel
    except ImportError:  # extension not built
        _kernel = _dlx_py

KERNEL = "cython" if _kernel is not _dlx_py else "python"
KERNELS = {"python": _dlx_py}
if KERNEL == "cython":
    KERNELS["cython"] = _kernel

__all__ = [
    "BudgetExhausted", "CacheOverflow", "CacheStats", "CachedCounter", "KERNEL",
    "SearchBudget", "SolveResult", "Status", "TilingSolution", "count_cached",
    "enumerate_all", "make_matrix", "solve_first", "verify_solution",
]

_REASONS = {
    _dlx_py.NODE_LIMIT: "nodes",
    _dlx_py.TIME_LIMIT: "time",
    _dlx_py.SOLUTION_LIMIT: "solutions",
    _dlx_py.STOPPED: "stopped",
}


@dataclass(frozen=True)
class SearchBudget:
    max_nodes: int | None = None
    max_seconds: float | None = None
    max_solutions: int | None = None

    def __post_init__(self):
        for name in ("max_nodes", "max_seconds", "max_solutions"):
            value = getattr(self, name)
            if value is not None and value <= 0:
                raise ValueError(f"{name} must be positive when given, got {value}")


UNLIMITED = SearchBudget()


@dataclass(frozen=True)
class TilingSolution:
    placements: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "placements", tuple(sorted(self.placements)))

    def __len__(self):
        return len(self.placements)

    def __iter__(self):
        return iter(self.placements)


class Status(enum.Enum):
    SAT = "SAT"
    UNSAT = "UNSAT"
    UNKNOWN = "UNKNOWN"


@dataclass
class SolveResult:
    status: Status
    solution: TilingSolution | None = None
    nodes: int = 0
    elapsed: float = 0.0
    reason: str | None = None

    @property
    def found(self) -> bool:
        return self.status is Status.SAT


def make_matrix(instance, kernel: str | None = None):
    mod = KERNELS[kernel] if kernel else _kernel
    return mod.DancingLinks(instance.n_cells, instance.rows())


def _trivially_unsat(instance) -> bool:
    flag = getattr(instance, "trivially_unsat", None)
    return bool(flag)


def verify_solution(instance, s) -> bool:
    """True iff the placements of ``s`` partition the region exactly."""
    seen = bytearray(instance.n_cells)
    n = 0
    rows = instance.placements
    for pid in s:
        if not 0 <= pid < len(rows):
            return False
        for c in rows[pid].covered:
            if seen[c]:
                return False
            seen[c] = 1
            n += 1
    return n == instance.n_cells


def solve_first(instance, budget: SearchBudget = UNLIMITED, tie_break: int = 0,
                kernel: str | None = None, progress=None, progress_every: int = 0) -> SolveResult:
    """Find one tiling, prove there is none, or run out of budget."""
    start = time.monotonic()
    if _trivially_unsat(instance):
        return SolveResult(Status.UNSAT, nodes=0, elapsed=time.monotonic() - start)
    found: list[list[int]] = []

    def keep(rows):
        found.append(rows)
        return True

    m = make_matrix(instance, kernel)
    status, _count, nodes = m.search(
        max_nodes=budget.max_nodes or 0,
        max_seconds=budget.max_seconds or 0.0,
        on_solution=keep,
        tie_break=tie_break,
        progress=progress,
        progress_every=progress_every,
    )
    elapsed = time.monotonic() - start
    if found:
        sol = TilingSolution(tuple(found[0]))
        if not verify_solution(instance, sol):  # pragma: no cover - kernel bug guard
            raise AssertionError("solver returned a non-partition")
        return SolveResult(Status.SAT, sol, nodes, elapsed)
    if status == _dlx_py.COMPLETE:
        return SolveResult(Status.UNSAT, nodes=nodes, elapsed=elapsed)
    return SolveResult(Status.UNKNOWN, nodes=nodes, elapsed=elapsed, reason=_REASONS.get(status))


@dataclass
class EnumerationReport:
    count: int = 0
    nodes: int = 0
    elapsed: float = 0.0
    workers: int = 1
    root_branches: int = 0
    extra: dict = field(default_factory=dict)


def enumerate_all(instance, budget: SearchBudget = UNLIMITED,
                  sink: Callable[[TilingSolution], object] | None = None,
                  tie_break: int = 0, threads: int = 1, kernel: str | None = None,
                  progress=None, progress_every: int = 0,
                  report: EnumerationReport | None = None) -> int:
    """Count every tiling, delivering each to ``sink`` in DFS order.

    With ``threads > 1`` the root column's rows are split across workers that
    each own a link structure; counts are unchanged but streamed order is not
    deterministic.  Raises :class:`BudgetExhausted` with the partial count.
    """
    start = time.monotonic()
    report = report if report is not None else EnumerationReport()
    if _trivially_unsat(instance):
        report.elapsed = time.monotonic() - start
        return 0
    on_solution = None
    if sink is not None:
        def on_solution(rows):
            sink(TilingSolution(tuple(rows)))
            return False

    kwargs = dict(
        max_nodes=budget.max_nodes or 0,
        max_seconds=budget.max_seconds or 0.0,
        max_solutions=budget.max_solutions or 0,
        on_solution=on_solution,
        tie_break=tie_break,
        progress=progress,
        progress_every=progress_every,
    )
    if threads <= 1:
        status, count, nodes = make_matrix(instance, kernel).search(**kwargs)
        statuses = [status]
    else:
        branches = _root_rows(instance)
        report.root_branches = len(branches)
        report.workers = threads

        def work(row):
            return make_matrix(instance, kernel).search(forced=(row,), **kwargs)

        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(work, branches))
        statuses = [r[0] for r in results]
        count = sum(r[1] for r in results)
        nodes = 1 + sum(r[2] for r in results)
    report.count, report.nodes = count, nodes
    report.elapsed = time.monotonic() - start
    bad = [s for s in statuses if s != _dlx_py.COMPLETE]
    if bad:
        raise BudgetExhausted(
            f"enumeration stopped early ({_REASONS.get(bad[0], bad[0])}) after {count} solutions",
            nodes=nodes, partial_count=count, reason=_REASONS.get(bad[0], "nodes"),
        )
    return count


def _root_rows(instance) -> list[int]:
    """Rows of the column the kernel would branch on first (MRV, lowest id)."""
    cols = instance.columns
    best = min(range(len(cols)), key=lambda c: (len(cols[c]), c))
    return list(cols[best])


def count_cached(instance, budget: SearchBudget = UNLIMITED, cache_bytes: int | None = None,
                 split: bool = False, stats: CacheStats | None = None) -> int:
    """Exact tiling count with residual-subproblem memoization.

    Raises :class:`CacheOverflow` once the memo table passes ``cache_bytes``
    (default ``REPTILE_CACHE_BYTES`` or 4 GiB).  Pass a :class:`CacheStats`
    to receive the table statistics.
    """
    if _trivially_unsat(instance):
        return 0
    counter = CachedCounter(instance, cache_bytes=cache_bytes, split=split,
                            max_nodes=budget.max_nodes, max_seconds=budget.max_seconds)
    try:
        return counter.count()
    finally:
        if stats is not None:
            stats.__dict__.update(counter.stats.__dict__)
