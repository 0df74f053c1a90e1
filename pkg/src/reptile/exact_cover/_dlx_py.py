"""Pure-Python dancing-links kernel.

Same interface as the compiled ``_dlx_c`` module; chosen at import when the
extension is not built (or ``REPTILE_PURE_PYTHON=1``).

Node 0 is the root, nodes ``1..n_cols`` are column headers (column ``c`` is
node ``c + 1``), row nodes follow.
"""

import hashlib
import time

COMPLETE = 0
NODE_LIMIT = 1
TIME_LIMIT = 2
SOLUTION_LIMIT = 3
STOPPED = 4

TIME_CHECK_MASK = (1 << 12) - 1


class DancingLinks:
    compiled = False

    def __init__(self, n_cols, rows):
        n_cols = int(n_cols)
        self.n_cols = n_cols
        self.n_rows = len(rows)
        n_nodes = 1 + n_cols + sum(len(r) for r in rows)
        L = list(range(n_nodes))
        R = list(range(n_nodes))
        U = list(range(n_nodes))
        D = list(range(n_nodes))
        C = [0] * n_nodes
        ROW = [-1] * n_nodes
        S = [0] * (n_cols + 1)
        # header ring
        for h in range(n_cols + 1):
            L[h] = h - 1 if h > 0 else n_cols
            R[h] = h + 1 if h < n_cols else 0
            C[h] = h
        node = n_cols + 1
        for r, row in enumerate(rows):
            first = node
            prev = None
            for col in row:
                if not 0 <= col < n_cols:
                    raise ValueError(f"row {r} references column {col} outside 0..{n_cols - 1}")
                h = col + 1
                C[node] = h
                ROW[node] = r
                U[node] = U[h]
                D[node] = h
                D[U[h]] = node
                U[h] = node
                S[h] += 1
                if prev is not None:
                    L[node] = prev
                    R[prev] = node
                prev = node
                node += 1
            if prev is not None:
                L[first] = prev
                R[prev] = first
        self.L, self.R, self.U, self.D, self.C, self.ROW, self.S = L, R, U, D, C, ROW, S
        self._row_first = {}
        for nd in range(n_cols + 1, n_nodes):
            self._row_first.setdefault(ROW[nd], nd)

    # -- primitive operations -------------------------------------------------
    def cover(self, c):
        """Cover column ``c`` (0-based column id)."""
        self._cover(c + 1)

    def uncover(self, c):
        self._uncover(c + 1)

    def _cover(self, c):
        L, R, U, D, C, S = self.L, self.R, self.U, self.D, self.C, self.S
        L[R[c]] = L[c]
        R[L[c]] = R[c]
        i = D[c]
        while i != c:
            j = R[i]
            while j != i:
                U[D[j]] = U[j]
                D[U[j]] = D[j]
                S[C[j]] -= 1
                j = R[j]
            i = D[i]

    def _uncover(self, c):
        L, R, U, D, C, S = self.L, self.R, self.U, self.D, self.C, self.S
        i = U[c]
        while i != c:
            j = L[i]
            while j != i:
                S[C[j]] += 1
                U[D[j]] = j
                D[U[j]] = j
                j = L[j]
            i = U[i]
        L[R[c]] = c
        R[L[c]] = c

    def column_size(self, c):
        return self.S[c + 1]

    def active_columns(self):
        out = []
        j = self.R[0]
        while j != 0:
            out.append(j - 1)
            j = self.R[j]
        return out

    def digest(self):
        h = hashlib.sha256()
        for arr in (self.L, self.R, self.U, self.D, self.S):
            h.update(repr(arr).encode())
        return h.hexdigest()

    def check(self):
        """Verify every active column ring and its size counter."""
        U, D, S, R = self.U, self.D, self.S, self.R
        j = R[0]
        while j != 0:
            n = 0
            i = D[j]
            while i != j:
                if D[U[i]] != i:
                    return False
                n += 1
                i = D[i]
            if n != S[j]:
                return False
            j = R[j]
        return True

    # -- search ---------------------------------------------------------------
    def _force(self, rows):
        """Select ``rows`` up front; returns covered headers or None on conflict."""
        covered = []
        active = set(self.active_columns())
        for r in rows:
            first = self._row_first.get(r)
            if first is None:
                continue
            nd = first
            cols = []
            while True:
                cols.append(self.C[nd])
                nd = self.R[nd]
                if nd == first:
                    break
            if any(h - 1 not in active for h in cols):
                for h in reversed(covered):
                    self._uncover(h)
                return None
            for h in cols:
                self._cover(h)
                active.discard(h - 1)
                covered.append(h)
        return covered

    def search(
        self,
        max_nodes=0,
        max_seconds=0.0,
        max_solutions=0,
        on_solution=None,
        tie_break=0,
        progress=None,
        progress_every=0,
        forced=(),
    ):
        """Run Algorithm X.  Returns ``(status, solutions, nodes)``."""
        covered = self._force(forced)
        if covered is None:
            return COMPLETE, 0, 0
        try:
            return self._search(
                max_nodes, max_seconds, max_solutions, on_solution,
                tie_break, progress, progress_every, list(forced),
            )
        finally:
            for h in reversed(covered):
                self._uncover(h)

    def _search(self, max_nodes, max_seconds, max_solutions, on_solution,
                tie_break, progress, progress_every, prefix):
        L, R, U, D, C, S, ROW = self.L, self.R, self.U, self.D, self.C, self.S, self.ROW
        cover, uncover = self._cover, self._uncover
        deadline = time.monotonic() + max_seconds if max_seconds > 0 else None
        x = []
        nodes = 0
        count = 0
        status = COMPLETE
        level = 0
        state = "forward"
        c = 0
        while True:
            if state == "forward":
                nodes += 1
                if max_nodes and nodes > max_nodes:
                    nodes -= 1
                    status = NODE_LIMIT
                    break
                if deadline is not None and not (nodes & TIME_CHECK_MASK) and time.monotonic() > deadline:
                    status = TIME_LIMIT
                    break
                if progress is not None and progress_every and nodes % progress_every == 0:
                    progress(nodes, level)
                if R[0] == 0:
                    count += 1
                    if on_solution is not None:
                        if on_solution(prefix + [ROW[n] for n in x[:level]]):
                            status = STOPPED
                            break
                    if max_solutions and count >= max_solutions:
                        status = SOLUTION_LIMIT
                        break
                    state = "backup"
                    continue
                # minimum remaining values
                j = R[0]
                c = j
                s = S[j]
                if tie_break == 0:
                    while j != 0 and s:
                        if S[j] < s:
                            c, s = j, S[j]
                        j = R[j]
                else:
                    while j != 0:
                        if S[j] <= s:
                            c, s = j, S[j]
                        j = R[j]
                cover(c)
                if len(x) <= level:
                    x.append(D[c])
                else:
                    x[level] = D[c]
                state = "advance"
            elif state == "advance":
                r = x[level]
                if r == c:
                    uncover(c)
                    state = "backup"
                    continue
                j = R[r]
                while j != r:
                    cover(C[j])
                    j = R[j]
                level += 1
                state = "forward"
            elif state == "backup":
                if level == 0:
                    break
                level -= 1
                r = x[level]
                c = C[r]
                j = L[r]
                while j != r:
                    uncover(C[j])
                    j = L[j]
                x[level] = D[r]
                state = "advance"
        if status != COMPLETE:
            # unwind to a clean structure
            while level > 0:
                level -= 1
                r = x[level]
                j = L[r]
                while j != r:
                    uncover(C[j])
                    j = L[j]
                uncover(C[r])
        return status, count, nodes
