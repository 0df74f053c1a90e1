"""Exact counting with memoized residual subproblems.

The search always fills the first uncovered cell in scan order, so the
residual region is determined by a thin frontier and repeats often; each
residual is memoized on the bitmask of its uncovered cells.  With
``split=True`` a small enclosed pocket next to the frontier is counted on its
own and the two counts multiplied, which also prunes pockets whose area is
not a multiple of the piece areas.
"""

from __future__ import annotations

import math
import os
import sys
import time
from dataclasses import dataclass

from .errors import BudgetExhausted, CacheOverflow

DEFAULT_CACHE_BYTES = 4 << 30
ENTRY_OVERHEAD = 104  # dict slot + hash + value object, measured on CPython 3.10
TIME_CHECK_MASK = (1 << 10) - 1


def cache_cap_from_env() -> int:
    raw = os.environ.get("REPTILE_CACHE_BYTES")
    if not raw:
        return DEFAULT_CACHE_BYTES
    value = int(raw)
    if value <= 0:
        raise ValueError("REPTILE_CACHE_BYTES must be positive")
    return value


@dataclass
class CacheStats:
    entries: int = 0
    hits: int = 0
    nodes: int = 0
    bytes: int = 0
    pockets: int = 0
    dead_pockets: int = 0
    elapsed: float = 0.0

    def as_dict(self) -> dict:
        return {
            "entries": self.entries,
            "hits": self.hits,
            "nodes": self.nodes,
            "bytes": self.bytes,
            "pockets": self.pockets,
            "dead_pockets": self.dead_pockets,
            "elapsed": round(self.elapsed, 6),
        }


def _scan_order(cells) -> list[int]:
    """Cell ids ordered row-major, or column-major when that frontier is shorter."""
    width = max(c.x for c in cells) - min(c.x for c in cells) + 1
    height = max(c.y for c in cells) - min(c.y for c in cells) + 1
    if width <= height:
        key = lambda i: (cells[i].y, cells[i].x)
    else:
        key = lambda i: (cells[i].x, cells[i].y)
    return sorted(range(len(cells)), key=key)


class CachedCounter:
    """Memoized tiling counter over an exact-cover instance with grid cells.

    ``instance`` needs ``cells`` (one coordinate per column) and ``rows()``.
    """

    def __init__(self, instance, cache_bytes: int | None = None, split: bool = False,
                 pocket_limit: int | None = None, max_nodes: int | None = None,
                 max_seconds: float | None = None):
        self.cache_bytes = cache_cap_from_env() if cache_bytes is None else cache_bytes
        self.split = split
        self.max_nodes = max_nodes
        self.max_seconds = max_seconds
        cells = list(instance.cells)
        rows = instance.rows()
        self.n = len(cells)
        order = _scan_order(cells) if cells else []
        pos = {cid: i for i, cid in enumerate(order)}
        self._by_first: list[list[int]] = [[] for _ in range(self.n)]
        sizes = set()
        for row in rows:
            bits = sorted(pos[c] for c in row)
            if not bits:
                continue
            mask = 0
            for b in bits:
                mask |= 1 << b
            self._by_first[bits[0]].append(mask)
            sizes.add(len(bits))
        self.unit = math.gcd(*sizes) if sizes else 1
        self.pocket_limit = pocket_limit if pocket_limit is not None else 4 * max(sizes, default=1)
        coord = {pos[cid]: (c.x, c.y) for cid, c in enumerate(cells)}
        at = {xy: b for b, xy in coord.items()}
        self._nbrs = [
            [at[n] for n in ((x + 1, y), (x - 1, y), (x, y + 1), (x, y - 1)) if n in at]
            for b, (x, y) in sorted(coord.items())
        ]
        self.stats = CacheStats()
        self._memo: dict[int, int] = {}

    def count(self) -> int:
        """Count all exact covers of the whole region."""
        self.stats = CacheStats()
        self._memo = {}
        self._deadline = time.monotonic() + self.max_seconds if self.max_seconds else None
        start = time.monotonic()
        limit = sys.getrecursionlimit()
        sys.setrecursionlimit(max(limit, 4 * self.n + 1000))
        try:
            if self.n % self.unit:
                return 0
            return self._count((1 << self.n) - 1)
        finally:
            sys.setrecursionlimit(limit)
            self.stats.elapsed = time.monotonic() - start

    def _pocket(self, R: int, c: int) -> int:
        """Cells of the component of ``R`` holding ``c``, or 0 if it exceeds the limit."""
        seen = 1 << c
        stack = [c]
        size = 1
        nbrs = self._nbrs
        limit = self.pocket_limit
        while stack:
            for n in nbrs[stack.pop()]:
                bit = 1 << n
                if R & bit and not seen & bit:
                    seen |= bit
                    size += 1
                    if size > limit:
                        return 0
                    stack.append(n)
        return seen

    def _count(self, R: int) -> int:
        if R == 0:
            return 1
        memo = self._memo
        v = memo.get(R)
        if v is not None:
            self.stats.hits += 1
            return v
        st = self.stats
        st.nodes += 1
        if self.max_nodes and st.nodes > self.max_nodes:
            raise BudgetExhausted("node limit reached in cached counting", nodes=st.nodes)
        if self._deadline is not None and not (st.nodes & TIME_CHECK_MASK) \
                and time.monotonic() > self._deadline:
            raise BudgetExhausted("time limit reached in cached counting", nodes=st.nodes)
        c = (R & -R).bit_length() - 1
        if self.split:
            pocket = self._pocket(R, c)
            if pocket and pocket != R:
                st.pockets += 1
                if pocket.bit_count() % self.unit:
                    st.dead_pockets += 1
                    total = 0
                else:
                    inner = self._count(pocket)
                    total = inner * self._count(R ^ pocket) if inner else 0
                self._store(R, total)
                return total
        total = 0
        for p in self._by_first[c]:
            if p & R == p:
                total += self._count(R ^ p)
        self._store(R, total)
        return total

    def _store(self, key: int, value: int) -> None:
        self._memo[key] = value
        st = self.stats
        st.entries += 1
        st.bytes += sys.getsizeof(key) + ENTRY_OVERHEAD
        if st.bytes > self.cache_bytes:
            raise CacheOverflow(
                f"memo table exceeded {self.cache_bytes} bytes after {st.entries} entries",
                entries=st.entries, bytes=st.bytes, nodes=st.nodes,
            )
