"""Command-line front end: ``reptile solve|count|encode|analyze|verify-constants|render``."""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

from .exact_cover import (
    KERNEL,
    BudgetExhausted,
    CacheOverflow,
    CacheStats,
    SearchBudget,
    Status,
    TilingSolution,
    count_cached,
    enumerate_all,
    solve_first,
)
from .exact_cover.cached import cache_cap_from_env
from .exact_cover import EnumerationReport
from .grid import NotASquare, ShapeError, load_shape, scale, validate_rep_count
from .placements import build_instance

EXIT_SAT = 0
EXIT_BAD_INPUT = 2
EXIT_FAIL = 1
EXIT_UNSAT = 20
EXIT_UNKNOWN = 30

DEFAULT_SECONDS = 600.0
DEFAULT_NODES = 10**9


class InputError(Exception):
    """Bad command-line input; reported with exit status 2."""


@dataclass
class RunConfig:
    command: str
    shape: str = ""
    k: int | None = None
    budget_seconds: float = DEFAULT_SECONDS
    budget_nodes: int = DEFAULT_NODES
    threads: int = 1
    out: str | None = None
    mode: str = "enumerate"
    formats: list[str] = field(default_factory=list)
    amo: str = "auto"
    extra: dict = field(default_factory=dict)

    @property
    def budget(self) -> SearchBudget:
        return SearchBudget(max_nodes=self.budget_nodes, max_seconds=self.budget_seconds)


def _emit(doc: dict) -> None:
    print(json.dumps(doc, sort_keys=True))


def _progress(nodes, level):
    print(f"progress nodes={nodes} depth={level}", file=sys.stderr, flush=True)


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    k = getattr(ns, "k", None)
    rep = getattr(ns, "rep", None)
    if rep is not None:
        try:
            rk = validate_rep_count(rep)
        except (NotASquare, ValueError) as exc:
            raise InputError(str(exc)) from exc
        if k is not None and k != rk:
            raise InputError(f"--k {k} disagrees with --rep {rep}")
        k = rk
    if k is not None and k < 1:
        raise InputError(f"k must be positive, got {k}")
    seconds = getattr(ns, "budget_seconds", DEFAULT_SECONDS)
    nodes = getattr(ns, "budget_nodes", DEFAULT_NODES)
    if seconds is not None and seconds <= 0 or nodes is not None and nodes <= 0:
        raise InputError("budgets must be positive")
    threads = getattr(ns, "threads", 1)
    if threads < 1:
        raise InputError("--threads must be at least 1")
    formats = getattr(ns, "formats", None) or ""
    return RunConfig(
        command=ns.command,
        shape=getattr(ns, "shape", "") or "",
        k=k,
        budget_seconds=seconds,
        budget_nodes=int(nodes),
        threads=threads,
        out=getattr(ns, "out", None),
        mode=getattr(ns, "mode", "enumerate"),
        formats=[f.strip() for f in formats.split(",") if f.strip()],
        amo=getattr(ns, "amo", "auto"),
    )


def _instance(cfg: RunConfig):
    if cfg.k is None:
        raise InputError("one of --k or --rep is required")
    try:
        base = load_shape(cfg.shape)
    except (ShapeError, OSError) as exc:
        raise InputError(str(exc)) from exc
    return base, build_instance(base, cfg.k)


def _write_text(path: str, text: str) -> None:
    try:
        Path(path).write_text(text)
    except OSError as exc:
        raise InputError(f"cannot write {path}: {exc}") from exc


def solution_doc(instance, sol: TilingSolution, index: int = 0) -> dict:
    return {"shape": instance.base_name, "k": instance.k,
            "solution_index": index, "placements": list(sol.placements)}


# commands -------------------------------------------------------------------

def cmd_solve(cfg: RunConfig, ns=None) -> int:
    _base, inst = _instance(cfg)
    progress = _progress if ns is not None and ns.progress else None
    res = solve_first(inst, cfg.budget, tie_break=getattr(ns, "tie_break", 0) or 0,
                      progress=progress, progress_every=1_000_000)
    report = {
        "command": "solve", "shape": inst.base_name, "k": inst.k, "verdict": res.status.value,
        "nodes": res.nodes, "elapsed": round(res.elapsed, 6), "kernel": KERNEL,
        "placements": len(inst.placements),
    }
    if res.reason:
        report["reason"] = res.reason
    if res.solution is not None:
        if cfg.out:
            _write_text(cfg.out, json.dumps(solution_doc(inst, res.solution)) + "\n")
            report["solution_file"] = cfg.out
        else:
            report["solution"] = list(res.solution.placements)
    _emit(report)
    return {Status.SAT: EXIT_SAT, Status.UNSAT: EXIT_UNSAT}.get(res.status, EXIT_UNKNOWN)


def cmd_count(cfg: RunConfig, ns=None) -> int:
    _base, inst = _instance(cfg)
    report = {"command": "count", "shape": inst.base_name, "k": inst.k, "mode": cfg.mode,
              "kernel": KERNEL}
    t0 = time.monotonic()
    stream = None
    if cfg.out and cfg.mode == "enumerate":
        try:
            stream = open(cfg.out, "w")
        except OSError as exc:
            raise InputError(f"cannot write {cfg.out}: {exc}") from exc
    status = EXIT_SAT
    try:
        if cfg.mode == "cached":
            stats = CacheStats()
            try:
                report["count"] = count_cached(inst, cfg.budget, cache_cap_from_env(), stats=stats)
            except CacheOverflow as exc:
                report.update(count=None, reason="cache", error=str(exc))
                status = EXIT_UNKNOWN
            except BudgetExhausted as exc:
                report.update(count=None, reason=exc.reason, error=str(exc))
                status = EXIT_UNKNOWN
            report["nodes"] = stats.nodes
            report["cache_stats"] = stats.as_dict()
        else:
            sink = None
            if stream is not None:
                index = iter(range(1 << 62))

                def sink(sol):
                    stream.write(json.dumps({"solution_index": next(index),
                                             "placements": list(sol.placements)}) + "\n")
            er = EnumerationReport()
            progress = _progress if ns is not None and ns.progress else None
            try:
                report["count"] = enumerate_all(inst, cfg.budget, sink, threads=cfg.threads,
                                                report=er, progress=progress,
                                                progress_every=1_000_000)
            except BudgetExhausted as exc:
                report.update(count=None, partial_count=exc.partial_count, reason=exc.reason,
                              error=str(exc))
                status = EXIT_UNKNOWN
            report["nodes"] = er.nodes
            report["cache_stats"] = None
            if cfg.threads > 1:
                report["threads"] = cfg.threads
    finally:
        if stream is not None:
            stream.close()
    report["elapsed"] = round(time.monotonic() - t0, 6)
    if stream is not None:
        report["solutions_file"] = cfg.out
    _emit(report)
    return status


def cmd_encode(cfg: RunConfig, ns=None) -> int:
    from .encode import write_documents

    _base, inst = _instance(cfg)
    formats = cfg.formats or ["cnf", "opb", "lp"]
    bad = [f for f in formats if f not in ("cnf", "opb", "lp")]
    if bad:
        raise InputError(f"unknown format(s) {', '.join(bad)}; choose from cnf, opb, lp")
    prefix = cfg.out or f"{inst.base_name}_k{inst.k}"
    try:
        manifest = write_documents(inst, formats, prefix, cfg.amo)
    except OSError as exc:
        raise InputError(f"cannot write under {prefix}: {exc}") from exc
    manifest["command"] = "encode"
    manifest["placements"] = len(inst.placements)
    manifest["cells"] = inst.n_cells
    _emit(manifest)
    return 0


def cmd_analyze(cfg: RunConfig, ns=None) -> int:
    from .structural import (
        coarse_tilings,
        compose_meta_pieces,
        forced_cluster_search,
        j_parity_check,
        library_meta_piece,
        product_count,
    )
    from .grid import SHAPES

    try:
        base = load_shape(cfg.shape)
    except (ShapeError, OSError) as exc:
        raise InputError(str(exc)) from exc
    report: dict = {"command": "analyze", "shape": base.name, "k": cfg.k}
    if base.cells == SHAPES["J"].cells and cfg.k is not None and cfg.k >= 2:
        report["parity"] = j_parity_check(cfg.k).value
    if ns is not None and ns.copies:
        report["meta_pieces"] = [
            {"name": m.name, "copies": m.multiplicity, "partitions": m.partitions,
             "flip_degrees": m.flip_degrees, "shape": m.shape.to_text()}
            for c in ns.copies for m in compose_meta_pieces(base, c)
        ]
    try:
        pieces = [library_meta_piece(n) for n in (ns.pieces.split(",") if ns and ns.pieces else [])]
        seed = library_meta_piece(ns.seed) if ns is not None and ns.seed else None
    except KeyError as exc:
        raise InputError(str(exc.args[0])) from exc
    status = 0
    if pieces and cfg.k is not None:
        region = scale(base, cfg.k)
        t0 = time.monotonic()
        try:
            n = coarse_tilings(region, pieces, cfg.budget)
            report["coarse_count"] = n
            if len(pieces) == 1 and pieces[0].flip_degrees:
                flips = len(region) // pieces[0].area
                report["product_count"] = product_count(n, flips)
                report["flip_exponent"] = flips
        except (BudgetExhausted, CacheOverflow) as exc:
            report["coarse_count"] = None
            report["error"] = str(exc)
            status = EXIT_UNKNOWN
        report["coarse_elapsed"] = round(time.monotonic() - t0, 6)
    if seed is not None and cfg.k is not None:
        t0 = time.monotonic()
        try:
            found = forced_cluster_search(base, cfg.k, seed, pieces, cfg.budget)
            report["forced"] = {"seed": seed.name, "found": found is not None}
            if found is not None:
                report["forced"]["uses"] = {p.name: found.count(p.name) for p in [seed, *pieces]}
        except BudgetExhausted as exc:
            report["forced"] = {"seed": seed.name, "found": None, "error": str(exc)}
            status = EXIT_UNKNOWN
        report["forced_elapsed"] = round(time.monotonic() - t0, 6)
    _emit(report)
    return status


def cmd_verify_constants(cfg: RunConfig, ns=None) -> int:
    from .structural import load_constants, verify_constants

    try:
        constants = load_constants(ns.constants if ns is not None else None)
    except (OSError, ValueError, KeyError) as exc:
        raise InputError(f"cannot read constants: {exc}") from exc
    rows = verify_constants(constants, run_counts=not (ns is not None and ns.identities_only),
                            budget=cfg.budget)
    for r in rows:
        extra = f"  ({r.detail})" if r.detail else ""
        print(f"{r.verdict:4}  {r.kind:8}  {r.name}{extra}")
    failed = [r.name for r in rows if r.ok is False]
    summary = {"command": "verify-constants", "rows": len(rows), "failed": failed,
               "skipped": [r.name for r in rows if r.ok is None]}
    _emit(summary)
    return EXIT_FAIL if failed else 0


def cmd_render(cfg: RunConfig, ns=None) -> int:
    from .render import InvalidSolution, RenderStyle, render_svg

    _base, inst = _instance(cfg)
    if ns is not None and ns.solution:
        try:
            doc = json.loads(Path(ns.solution).read_text().splitlines()[0])
            sol = TilingSolution(tuple(int(p) for p in doc["placements"]))
        except (OSError, ValueError, KeyError, IndexError) as exc:
            raise InputError(f"cannot read solution {ns.solution}: {exc}") from exc
    else:
        res = solve_first(inst, cfg.budget)
        if res.solution is None:
            _emit({"command": "render", "verdict": res.status.value})
            return EXIT_UNSAT if res.status is Status.UNSAT else EXIT_UNKNOWN
        sol = res.solution
    style = RenderStyle(cell_px=ns.cell_px if ns is not None else 20,
                        show_grid=bool(ns is not None and ns.grid))
    try:
        svg = render_svg(inst, sol, style)
    except InvalidSolution as exc:
        raise InputError(str(exc)) from exc
    out = cfg.out or f"{inst.base_name}_k{inst.k}.svg"
    _write_text(out, svg)
    _emit({"command": "render", "shape": inst.base_name, "k": inst.k, "svg": out,
           "pieces": len(sol)})
    return 0


COMMANDS = {
    "solve": cmd_solve,
    "count": cmd_count,
    "encode": cmd_encode,
    "analyze": cmd_analyze,
    "verify-constants": cmd_verify_constants,
    "render": cmd_render,
}


def _add_instance_args(p: argparse.ArgumentParser, required: bool = True) -> None:
    p.add_argument("--shape", required=required, help="library name (stair, J, F, domino, monomino) or shape file")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--k", type=int, help="scale factor")
    g.add_argument("--rep", type=int, help="number of copies k*k (must be a perfect square)")


def _add_budget_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--budget-seconds", type=float, default=DEFAULT_SECONDS)
    p.add_argument("--budget-nodes", type=float, default=DEFAULT_NODES)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="reptile", description="Polyomino rep-tile solver")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="decide whether scale(shape, k) tiles with k*k copies")
    _add_instance_args(p)
    _add_budget_args(p)
    p.add_argument("--out", help="write the solution JSON here")
    p.add_argument("--tie-break", type=int, choices=(0, 1), default=0)
    p.add_argument("--progress", action="store_true", help="report search progress on stderr")

    p = sub.add_parser("count", help="count all tilings")
    _add_instance_args(p)
    _add_budget_args(p)
    p.add_argument("--mode", choices=("enumerate", "cached"), default="enumerate")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--out", help="stream solutions as JSON lines (enumerate mode)")
    p.add_argument("--progress", action="store_true")

    p = sub.add_parser("encode", help="export CNF / OPB / LP instances")
    _add_instance_args(p)
    p.add_argument("--formats", default="cnf,opb,lp", help="comma list of cnf, opb, lp")
    p.add_argument("--amo", choices=("pairwise", "sequential", "auto"), default="auto")
    p.add_argument("--out", help="output path prefix")

    p = sub.add_parser("analyze", help="meta-pieces, parity and coarse tilings")
    _add_instance_args(p)
    _add_budget_args(p)
    p.add_argument("--copies", type=int, action="append", choices=(2, 3, 4),
                   help="list convex meta-pieces of this many copies (repeatable)")
    p.add_argument("--pieces", help="comma list of catalog meta-pieces for a coarse count")
    p.add_argument("--seed", help="catalog meta-piece that must appear (forced search)")

    p = sub.add_parser("verify-constants", help="check the shipped count table")
    _add_budget_args(p)
    p.add_argument("--constants", help="alternative constants JSON file")
    p.add_argument("--identities-only", action="store_true", help="skip the recounts")

    p = sub.add_parser("render", help="draw a tiling as SVG")
    _add_instance_args(p)
    _add_budget_args(p)
    p.add_argument("--solution", help="solution JSON from solve or count --out")
    p.add_argument("--out", help="SVG path")
    p.add_argument("--cell-px", type=int, default=20)
    p.add_argument("--grid", action="store_true")
    return parser


def main(argv: list[str] | None = None) -> int:
    ns = build_parser().parse_args(argv)
    try:
        cfg = config_from_args(ns)
        return COMMANDS[ns.command](cfg, ns)
    except InputError as exc:
        print(f"reptile: error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
