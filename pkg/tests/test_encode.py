from itertools import product

import pytest

from reptile.encode import (
    NotAPartition,
    PAIRWISE_MAX,
    decode_assignment,
    read_cnf,
    to_cnf,
    to_lp,
    to_pb,
    write_documents,
)
from reptile.exact_cover import TilingSolution, enumerate_all, solve_first
from reptile.grid import SHAPES, Polyomino
from reptile.placements import build_instance, instance_from_region
from oracles import brute_models, parse_dimacs, parse_lp, parse_opb, projected_count


def small_instances():
    """Every instance here has at most 12 placement variables."""
    out = []
    for name in SHAPES:
        for k in (1, 2, 3):
            inst = build_instance(SHAPES[name], k)
            if len(inst.placements) <= 12:
                out.append((f"{name}-k{k}", inst))
    regions = {
        "2x3": "##\n##\n##",
        "3x3-minus": "###\n###\n##.",
        "ell": "#..\n#..\n###",
        "tee": "###\n.#.\n.#.",
        "2x4": "####\n####",
    }
    bases = {"domino": SHAPES["domino"], "tromino": Polyomino.from_text("###"),
             "ell3": Polyomino.from_text("#.\n##")}
    for rn, rt in regions.items():
        for bn, b in bases.items():
            inst = instance_from_region(b, Polyomino.from_text(rt))
            if len(inst.placements) <= 12:
                out.append((f"{bn}-in-{rn}", inst))
    return out


SMALL = small_instances()


def test_small_instance_pool():
    assert len(SMALL) >= 10
    assert all(len(i.placements) <= 12 for _, i in SMALL)
    assert any(enumerate_all(i) > 1 for _, i in SMALL)
    assert any(enumerate_all(i) == 0 for _, i in SMALL)


def test_pb_domino_k2():
    inst = build_instance(SHAPES["domino"], 2)
    doc = to_pb(inst)
    assert doc.n_vars == 10 and len(doc.constraints) == 8
    text = doc.to_text()
    assert text.splitlines()[0] == "* #variable= 10 #constraint= 8"
    cons = parse_opb(text)
    assert all(rhs == 1 and all(w == 1 for w, _ in t) for t, rhs in cons)


def test_pb_monomino_and_j6():
    assert to_pb(build_instance(SHAPES["monomino"], 1)).to_text().splitlines()[-1] == "+1 x1 = 1 ;"
    assert len(to_pb(build_instance(SHAPES["J"], 6)).constraints) == 216


def test_cnf_monomino_single_unit_clause():
    doc = to_cnf(build_instance(SHAPES["monomino"], 1), "pairwise")
    assert doc.clauses == [[1]] and doc.n_vars == 1


@pytest.mark.parametrize("label,inst", SMALL, ids=[s[0] for s in SMALL])
def test_cnf_counts_equal_tilings(label, inst):
    tilings = {frozenset(p + 1 for p in s) for s in _all(inst)}
    n, clauses, show = parse_dimacs(to_cnf(inst, "pairwise").to_text())
    assert n == len(inst.placements)
    assert set(brute_models(n, clauses)) == tilings
    n, clauses, show = parse_dimacs(to_cnf(inst, "sequential").to_text())
    assert show == list(range(1, len(inst.placements) + 1))
    assert projected_count(n, clauses, show) == len(tilings)


@pytest.mark.parametrize("label,inst", SMALL, ids=[s[0] for s in SMALL])
def test_pb_models_are_tilings(label, inst):
    tilings = {s.placements for s in _all(inst)}
    cons = parse_opb(to_pb(inst).to_text())
    n = len(inst.placements)
    models = set()
    for bits in product((0, 1), repeat=n):
        if all(sum(w * bits[v - 1] for w, v in t) == rhs for t, rhs in cons):
            sol = decode_assignment(inst, [i + 1 for i, b in enumerate(bits) if b])
            models.add(sol.placements)
    assert models == tilings


def _all(inst):
    out = []
    enumerate_all(inst, sink=out.append)
    return out


def test_domino_k2_model_counts():
    inst = build_instance(SHAPES["domino"], 2)
    n, clauses, _ = parse_dimacs(to_cnf(inst, "pairwise").to_text())
    assert n == 10 and len(brute_models(n, clauses)) == 5
    n, clauses, show = parse_dimacs(to_cnf(inst, "sequential").to_text())
    assert n > 10 and projected_count(n, clauses, show) == 5


def test_auto_switches_to_sequential_on_dense_cells():
    inst = build_instance(SHAPES["J"], 6)
    dense = max(len(c) for c in inst.columns)
    doc = to_cnf(inst, "auto")
    if dense > PAIRWISE_MAX:
        assert doc.n_vars > len(inst.placements)
    pw = to_cnf(inst, "pairwise")
    assert pw.n_vars == len(inst.placements)
    assert pw.projection == list(range(1, len(inst.placements) + 1))
    seq = to_cnf(inst, "sequential")
    for cl in seq.clauses:
        assert cl and all(l != 0 and abs(l) <= seq.n_vars for l in cl)


def test_bad_amo():
    with pytest.raises(ValueError):
        to_cnf(build_instance(SHAPES["domino"], 2), "ladder")


def test_read_cnf_round_trip():
    inst = build_instance(SHAPES["domino"], 3)
    doc = to_cnf(inst, "sequential")
    again = read_cnf(doc.to_text())
    assert (again.n_vars, again.clauses, again.projection) == (doc.n_vars, doc.clauses, doc.projection)


def test_lp_document():
    inst = build_instance(SHAPES["domino"], 2)
    obj, rows, bins = parse_lp(to_lp(inst).to_text())
    assert obj == bins == list(range(1, 11))
    assert len(rows) == 8 and all(rhs == 1 for _, rhs in rows)
    assert len(parse_lp(to_lp(build_instance(SHAPES["stair"], 11)).to_text())[1]) == 726


def _milp(inst):
    scipy = pytest.importorskip("scipy")
    import numpy as np
    from scipy.optimize import Bounds, LinearConstraint, milp

    obj, rows, bins = parse_lp(to_lp(inst).to_text())
    n = len(bins)
    a = np.zeros((len(rows), n))
    for i, (vs, _) in enumerate(rows):
        for v in vs:
            a[i, v - 1] = 1
    return milp(
        c=np.ones(n), constraints=LinearConstraint(a, 1, 1),
        integrality=np.ones(n), bounds=Bounds(0, 1),
    )


@pytest.mark.parametrize("name,k", [("domino", 2), ("monomino", 2), ("domino", 3)])
def test_lp_objective_is_k_squared(name, k):
    inst = build_instance(SHAPES[name], k)
    res = _milp(inst)
    assert res.success and round(res.fun) == k * k
    sol = decode_assignment(inst, [i + 1 for i, v in enumerate(res.x) if v > 0.5])
    assert len(sol) == k * k


def test_lp_stair_k2_infeasible():
    res = _milp(build_instance(SHAPES["stair"], 2))
    assert not res.success and res.status == 2


def test_decode_assignment():
    inst = build_instance(SHAPES["domino"], 2)
    sol = solve_first(inst).solution
    ids = [p + 1 for p in sol]
    assert decode_assignment(inst, ids) == sol
    assert decode_assignment(inst, ids + [11, 12]) == sol  # auxiliaries are ignored
    with pytest.raises(NotAPartition):
        decode_assignment(inst, ids[:3])
    with pytest.raises(ValueError):
        decode_assignment(inst, [0])


def test_decode_round_trip_j6():
    inst = build_instance(SHAPES["J"], 6)
    sol = solve_first(inst).solution
    assert decode_assignment(inst, [p + 1 for p in sol.placements]) == sol


def test_write_documents(tmp_path):
    inst = build_instance(SHAPES["domino"], 2)
    man = write_documents(inst, ["cnf", "opb", "lp"], tmp_path / "dk2", "sequential")
    assert man["files"]["opb"] == {"path": str(tmp_path / "dk2.opb"), "variables": 10, "constraints": 8}
    assert (tmp_path / "dk2.show").read_text().split() == [str(i) for i in range(1, 11)]
    assert man["files"]["cnf"]["projection"] == 10
    assert (tmp_path / "dk2.lp").exists()
    with pytest.raises(ValueError):
        write_documents(inst, ["xml"], tmp_path / "x")


def test_documents_are_deterministic():
    for k in (2, 3):
        a = build_instance(SHAPES["J"], k)
        b = build_instance(SHAPES["J"], k)
        assert to_cnf(a).to_text() == to_cnf(b).to_text()
        assert to_pb(a).to_text() == to_pb(b).to_text()
        assert to_lp(a).to_text() == to_lp(b).to_text()
