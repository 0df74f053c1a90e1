"""Exact count identities and the shipped table of published counts."""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path


@dataclass(frozen=True)
class CountIdentity:
    """``sum(coefficient * 2**exponent) == total`` in exact integers."""

    terms: tuple[tuple[int, int], ...]
    total: int
    name: str = ""
    source: str = ""
    shape: str = ""
    k: int = 0
    matches_table: bool = False  # total is the whole table cell, not a partial sum

    def __post_init__(self):
        terms = tuple((int(c), int(e)) for c, e in self.terms)
        if any(c < 0 or e < 0 for c, e in terms):
            raise ValueError("identity terms must be nonnegative")
        object.__setattr__(self, "terms", terms)

    @property
    def value(self) -> int:
        return sum(c << e for c, e in self.terms)


def verify_identity(identity: CountIdentity) -> bool:
    return identity.value == identity.total


def product_count(coarse_count: int, flip_exponent: int, symmetry_factor: int = 1) -> int:
    """``symmetry_factor * coarse_count * 2**flip_exponent``."""
    if coarse_count < 0 or flip_exponent < 0 or symmetry_factor < 0:
        raise ValueError("product_count takes nonnegative inputs")
    return symmetry_factor * coarse_count << flip_exponent


@dataclass(frozen=True)
class TableCell:
    shape: str
    k: int
    status: str  # "exact", "positive" or "unknown"
    count: int | None
    source: str = ""


@dataclass(frozen=True)
class CoarseCheck:
    name: str
    region: dict
    pieces: tuple[str, ...]
    count: int
    source: str = ""


@dataclass(frozen=True)
class Constants:
    cells: tuple[TableCell, ...]
    identities: tuple[CountIdentity, ...]
    coarse: tuple[CoarseCheck, ...]

    def cell(self, shape: str, k: int) -> TableCell:
        for c in self.cells:
            if c.shape == shape and c.k == k:
                return c
        raise KeyError((shape, k))


def parse_constants(doc: dict) -> Constants:
    cells = tuple(
        TableCell(c["shape"], int(c["k"]), c["status"], c.get("count"), c.get("source", ""))
        for c in doc.get("cells", [])
    )
    for c in cells:
        if c.status not in ("exact", "positive", "unknown"):
            raise ValueError(f"bad status {c.status!r} for {c.shape} k={c.k}")
        if (c.status == "exact") != (c.count is not None):
            raise ValueError(f"{c.shape} k={c.k}: exact cells carry a count, others do not")
    identities = tuple(
        CountIdentity(tuple(map(tuple, i["terms"])), int(i["total"]), i.get("name", ""),
                      i.get("source", ""), i.get("shape", ""), int(i.get("k", 0)),
                      bool(i.get("matches_table", False)))
        for i in doc.get("identities", [])
    )
    coarse = tuple(
        CoarseCheck(c["name"], dict(c["region"]), tuple(c["pieces"]), int(c["count"]), c.get("source", ""))
        for c in doc.get("coarse", [])
    )
    return Constants(cells, identities, coarse)


def load_constants(path: str | Path | None = None) -> Constants:
    """Load the shipped constants table, or a replacement file at ``path``."""
    if path is None:
        text = resources.files("reptile").joinpath("data/constants.json").read_text()
    else:
        text = Path(path).read_text()
    return parse_constants(json.loads(text))
