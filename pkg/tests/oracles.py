"""Reference implementations that share no code with the package.

Shapes are re-parsed from text here and every helper is written from
scratch, so agreement with the package is evidence rather than tautology.
"""

from itertools import product

SHAPE_TEXT = {
    "stair": ["###", "##.", "#.."],
    "J": ["###", "#..", "##."],
    "F": ["##", "#.", "##", "#."],
    "domino": ["##"],
    "monomino": ["#"],
}


def parse(rows):
    return {(x, y) for y, row in enumerate(rows) for x, ch in enumerate(row) if ch == "#"}


def shift_to_origin(cells):
    mx = min(x for x, _ in cells)
    my = min(y for _, y in cells)
    return frozenset((x - mx, y - my) for x, y in cells)


def images(cells):
    """All 8 rotations/reflections, deduplicated, as origin-anchored sets."""
    out = set()
    for flip in (False, True):
        pts = [(-x, y) if flip else (x, y) for x, y in cells]
        for _ in range(4):
            pts = [(y, -x) for x, y in pts]
            out.add(shift_to_origin(pts))
    return out


def magnify(cells, k):
    return {(k * x + i, k * y + j) for x, y in cells for i in range(k) for j in range(k)}


def naive_count(cells, k, limit=None):
    """Tilings of the k-scaled shape, filling the first empty cell each time."""
    region = magnify(cells, k)
    order = sorted(region, key=lambda c: (c[1], c[0]))
    shapes = []
    for img in images(cells):
        pts = sorted(img, key=lambda c: (c[1], c[0]))
        ax, ay = pts[0]
        shapes.append([(x - ax, y - ay) for x, y in pts])
    filled = set()
    count = 0

    def go(i):
        nonlocal count
        while i < len(order) and order[i] in filled:
            i += 1
        if i == len(order):
            count += 1
            return
        cx, cy = order[i]
        for s in shapes:
            cs = [(cx + dx, cy + dy) for dx, dy in s]
            if all(c in region and c not in filled for c in cs):
                filled.update(cs)
                go(i + 1)
                filled.difference_update(cs)
                if limit is not None and count >= limit:
                    return

    if len(region) % len(cells) == 0:
        go(0)
    return count


def naive_rect_tilings(w, h, pw, ph):
    """Tilings of a w x h rectangle by pw x ph rectangles in both orientations."""
    region = {(x, y) for x in range(w) for y in range(h)}
    return _tile_with(region, [[(x, y) for x in range(a) for y in range(b)]
                               for a, b in {(pw, ph), (ph, pw)}])


def _tile_with(region, shapes):
    order = sorted(region, key=lambda c: (c[1], c[0]))
    anchored = []
    for s in shapes:
        pts = sorted(s, key=lambda c: (c[1], c[0]))
        ax, ay = pts[0]
        anchored.append([(x - ax, y - ay) for x, y in pts])
    filled = set()

    def go(i):
        while i < len(order) and order[i] in filled:
            i += 1
        if i == len(order):
            return 1
        cx, cy = order[i]
        total = 0
        for s in anchored:
            cs = [(cx + dx, cy + dy) for dx, dy in s]
            if all(c in region and c not in filled for c in cs):
                filled.update(cs)
                total += go(i + 1)
                filled.difference_update(cs)
        return total

    return go(0)


# CNF ------------------------------------------------------------------------

def parse_dimacs(text):
    n = 0
    clauses, cur, show = [], [], None
    for line in text.splitlines():
        tok = line.split()
        if not tok:
            continue
        if tok[0] == "c":
            if tok[1:3] == ["p", "show"]:
                show = [int(t) for t in tok[3:] if t != "0"]
            continue
        if tok[0] == "p":
            n = int(tok[2])
            continue
        for t in tok:
            v = int(t)
            if v == 0:
                clauses.append(cur)
                cur = []
            else:
                cur.append(v)
    return n, clauses, show


def brute_models(n, clauses):
    """Every satisfying assignment as a frozenset of true variables."""
    out = []
    for bits in product((False, True), repeat=n):
        if all(any(bits[abs(l) - 1] == (l > 0) for l in cl) for cl in clauses):
            out.append(frozenset(i + 1 for i, b in enumerate(bits) if b))
    return out


def projected_count(n, clauses, show):
    """Distinct restrictions to ``show`` of satisfying assignments (DPLL-free
    enumeration over the shown variables, satisfiability of the rest by DPLL)."""
    show = list(show)
    hidden = [v for v in range(1, n + 1) if v not in set(show)]
    count = 0
    for bits in product((False, True), repeat=len(show)):
        fixed = {v: b for v, b in zip(show, bits)}
        if dpll_sat(clauses, fixed, hidden):
            count += 1
    return count


def dpll_sat(clauses, fixed, free):
    def simplify(cls, assign):
        out = []
        for cl in cls:
            keep = []
            sat = False
            for l in cl:
                v = abs(l)
                if v in assign:
                    if assign[v] == (l > 0):
                        sat = True
                        break
                else:
                    keep.append(l)
            if sat:
                continue
            if not keep:
                return None
            out.append(keep)
        return out

    def solve(cls, assign):
        cls = simplify(cls, assign)
        if cls is None:
            return False
        if not cls:
            return True
        units = [cl[0] for cl in cls if len(cl) == 1]
        if units:
            a = dict(assign)
            for l in units:
                if a.get(abs(l), l > 0) != (l > 0):
                    return False
                a[abs(l)] = l > 0
            return solve(cls, a)
        v = abs(cls[0][0])
        return solve(cls, {**assign, v: True}) or solve(cls, {**assign, v: False})

    return solve(clauses, dict(fixed))


# OPB / LP ---------------------------------------------------------------------

def parse_opb(text):
    """List of (terms, rhs) with terms as (weight, var)."""
    cons = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("*"):
            continue
        lhs, rhs = line.rstrip(";").split("=")
        tok = lhs.split()
        terms = [(int(tok[i]), int(tok[i + 1][1:])) for i in range(0, len(tok), 2)]
        cons.append((terms, int(rhs)))
    return cons


def parse_lp(text):
    """(objective vars, equality rows, binaries) of an equality-only LP file."""
    obj, rows, bins = [], [], []
    section = None
    for line in text.splitlines():
        s = line.strip()
        if not s or s.startswith("\\"):
            continue
        low = s.lower()
        if low in ("minimize", "maximize", "subject to", "binaries", "end"):
            section = low
            continue
        if section == "minimize":
            obj += [int(t[1:]) for t in s.split(":", 1)[1].split() if t.startswith("x")]
        elif section == "subject to":
            body = s.split(":", 1)[1]
            lhs, rhs = body.split("=")
            rows.append(([int(t[1:]) for t in lhs.split() if t.startswith("x")], int(rhs)))
        elif section == "binaries":
            bins += [int(t[1:]) for t in s.split()]
    return obj, rows, bins
