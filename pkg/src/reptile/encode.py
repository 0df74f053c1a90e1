"""Exporters for external solvers: DIMACS CNF, OPB pseudo-Boolean, LP.

Placement ``p`` is variable ``p.id + 1`` in every format (``x<p.id+1>`` in
OPB and LP).  CNF auxiliaries from the sequential at-most-one encoding are
numbered after all placement variables, cell by cell.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from .exact_cover import TilingSolution, verify_solution
from .placements import CoverInstance

PAIRWISE_MAX = 30
AMO_ENCODINGS = ("pairwise", "sequential", "auto")


class NotAPartition(ValueError):
    """An assignment whose true placements overlap or leave a gap."""


def _describe(instance: CoverInstance) -> str:
    return f"base={instance.base_name} k={instance.k} cells={instance.n_cells} placements={len(instance.placements)}"


@dataclass
class PbDocument:
    n_vars: int
    constraints: list[list[tuple[int, int]]]  # (weight, var) terms, each "= 1"
    comments: list[str] = field(default_factory=list)
    rhs: int = 1

    def to_text(self) -> str:
        lines = [f"* #variable= {self.n_vars} #constraint= {len(self.constraints)}"]
        lines += [f"* {c}" for c in self.comments]
        for terms in self.constraints:
            body = " ".join(f"{w:+d} x{v}" for w, v in terms)
            lines.append(f"{body} = {self.rhs} ;")
        return "\n".join(lines) + "\n"


@dataclass
class CnfDocument:
    n_vars: int
    clauses: list[list[int]]
    projection: list[int]
    comments: list[str] = field(default_factory=list)

    def to_text(self) -> str:
        lines = [f"c {c}" for c in self.comments]
        lines.append(f"p cnf {self.n_vars} {len(self.clauses)}")
        lines.append("c p show " + " ".join(map(str, self.projection)) + " 0")
        lines += [" ".join(map(str, cl)) + " 0" for cl in self.clauses]
        return "\n".join(lines) + "\n"

    def projection_text(self) -> str:
        return "".join(f"{v}\n" for v in self.projection)


@dataclass
class LpDocument:
    n_vars: int
    rows: list[list[int]]
    comments: list[str] = field(default_factory=list)

    def to_text(self) -> str:
        names = [f"x{v}" for v in range(1, self.n_vars + 1)]
        lines = [f"\\ {c}" for c in self.comments]
        lines.append("Minimize")
        lines.append(" obj: " + (" + ".join(names) if names else "0"))
        lines.append("Subject To")
        for i, row in enumerate(self.rows):
            lines.append(f" c{i}: " + " + ".join(f"x{v}" for v in row) + " = 1")
        lines.append("Binaries")
        lines += [f" {n}" for n in names]
        lines.append("End")
        return "\n".join(lines) + "\n"


def to_pb(instance: CoverInstance) -> PbDocument:
    constraints = [[(1, p + 1) for p in cover] for cover in instance.columns]
    return PbDocument(len(instance.placements), constraints, [_describe(instance)])


def _amo_pairwise(xs):
    return [[-a, -b] for i, a in enumerate(xs) for b in xs[i + 1:]]


def _amo_sequential(xs, next_var):
    """Sinz's ladder; returns (clauses, next free variable)."""
    n = len(xs)
    if n <= 1:
        return [], next_var
    s = list(range(next_var, next_var + n - 1))
    clauses = [[-xs[0], s[0]]]
    for i in range(1, n - 1):
        clauses.append([-xs[i], s[i]])
        clauses.append([-s[i - 1], s[i]])
        clauses.append([-xs[i], -s[i - 1]])
    clauses.append([-xs[n - 1], -s[n - 2]])
    return clauses, next_var + n - 1


def to_cnf(instance: CoverInstance, amo_encoding: str = "auto") -> CnfDocument:
    """Exact-one per cell: one at-least-one clause plus an at-most-one encoding.

    ``auto`` picks pairwise for cells with at most 30 covering placements and
    the sequential ladder above that.
    """
    if amo_encoding not in AMO_ENCODINGS:
        raise ValueError(f"amo_encoding must be one of {AMO_ENCODINGS}, got {amo_encoding!r}")
    n_place = len(instance.placements)
    next_var = n_place + 1
    clauses: list[list[int]] = []
    n_seq = 0
    for cover in instance.columns:
        xs = [p + 1 for p in cover]
        clauses.append(list(xs))
        seq = amo_encoding == "sequential" or (amo_encoding == "auto" and len(xs) > PAIRWISE_MAX)
        if seq:
            more, next_var = _amo_sequential(xs, next_var)
            n_seq += 1
        else:
            more = _amo_pairwise(xs)
        clauses += more
    comments = [_describe(instance), f"amo={amo_encoding} sequential_cells={n_seq}"]
    return CnfDocument(next_var - 1, clauses, list(range(1, n_place + 1)), comments)


def to_lp(instance: CoverInstance) -> LpDocument:
    rows = [[p + 1 for p in cover] for cover in instance.columns]
    comments = [_describe(instance), f"any feasible point has objective {instance.k ** 2}"]
    return LpDocument(len(instance.placements), rows, comments)


def decode_assignment(instance: CoverInstance, true_variable_ids) -> TilingSolution:
    """Map the true variables of an external model back to a verified tiling.

    Ids beyond the placement variables are encoder auxiliaries and ignored.
    """
    n = len(instance.placements)
    pids = []
    for v in true_variable_ids:
        v = int(v)
        if v < 1:
            raise ValueError(f"variable ids are positive, got {v}")
        if v <= n:
            pids.append(v - 1)
    sol = TilingSolution(tuple(pids))
    if not verify_solution(instance, sol):
        raise NotAPartition(f"{len(pids)} placements do not partition the {instance.n_cells}-cell region")
    return sol


def read_cnf(text: str) -> CnfDocument:
    """Parse DIMACS (with an optional ``c p show`` projection line)."""
    n_vars = 0
    clauses: list[list[int]] = []
    projection: list[int] | None = None
    comments = []
    current: list[int] = []
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        if line.startswith("c p show"):
            projection = [int(t) for t in line.split()[3:] if t != "0"]
        elif line.startswith("c"):
            comments.append(line[1:].strip())
        elif line.startswith("p"):
            n_vars = int(line.split()[2])
        else:
            for tok in line.split():
                lit = int(tok)
                if lit == 0:
                    clauses.append(current)
                    current = []
                else:
                    current.append(lit)
    if projection is None:
        projection = list(range(1, n_vars + 1))
    return CnfDocument(n_vars, clauses, projection, comments)


def write_documents(instance: CoverInstance, formats, out_prefix: str | Path,
                    amo_encoding: str = "auto") -> dict:
    """Write the requested formats next to ``out_prefix``; returns a manifest."""
    out_prefix = Path(out_prefix)
    manifest: dict = {"base": instance.base_name, "k": instance.k, "files": {}}
    for fmt in formats:
        if fmt == "cnf":
            doc = to_cnf(instance, amo_encoding)
            path = out_prefix.with_suffix(".cnf")
            path.write_text(doc.to_text())
            show = out_prefix.with_suffix(".show")
            show.write_text(doc.projection_text())
            manifest["files"]["cnf"] = {
                "path": str(path), "projection_path": str(show), "variables": doc.n_vars,
                "clauses": len(doc.clauses), "projection": len(doc.projection),
            }
        elif fmt == "opb":
            doc = to_pb(instance)
            path = out_prefix.with_suffix(".opb")
            path.write_text(doc.to_text())
            manifest["files"]["opb"] = {
                "path": str(path), "variables": doc.n_vars, "constraints": len(doc.constraints),
            }
        elif fmt == "lp":
            doc = to_lp(instance)
            path = out_prefix.with_suffix(".lp")
            path.write_text(doc.to_text())
            manifest["files"]["lp"] = {
                "path": str(path), "variables": doc.n_vars, "constraints": len(doc.rows),
            }
        else:
            raise ValueError(f"unknown format {fmt!r}; expected cnf, opb or lp")
    return manifest
