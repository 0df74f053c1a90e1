# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled dancing-links kernel; mirrors ``_dlx_py`` exactly."""

import hashlib

from cpython.mem cimport PyMem_Malloc, PyMem_Free
from posix.time cimport clock_gettime, timespec, CLOCK_MONOTONIC

COMPLETE = 0
NODE_LIMIT = 1
TIME_LIMIT = 2
SOLUTION_LIMIT = 3
STOPPED = 4

DEF TIME_CHECK_MASK = 4095


cdef inline double _now() noexcept nogil:
    cdef timespec ts
    clock_gettime(CLOCK_MONOTONIC, &ts)
    return ts.tv_sec + ts.tv_nsec * 1e-9


cdef class DancingLinks:
    cdef int *L
    cdef int *R
    cdef int *U
    cdef int *D
    cdef int *C
    cdef int *ROW
    cdef int *S
    cdef int *X
    cdef int n_nodes
    cdef readonly int n_cols
    cdef readonly int n_rows
    cdef dict _row_first
    cdef object _prefix
    cdef object _error
    cdef object _on_solution
    cdef object _progress
    compiled = True

    def __cinit__(self, n_cols, rows):
        self.L = NULL

    def __init__(self, n_cols, rows):
        cdef int nc = n_cols
        cdef int total = 0
        cdef int h, node, first, prev, col, r
        for row in rows:
            total += len(row)
        self.n_cols = nc
        self.n_rows = len(rows)
        self.n_nodes = 1 + nc + total
        n = self.n_nodes
        self.L = <int *> PyMem_Malloc(n * sizeof(int))
        self.R = <int *> PyMem_Malloc(n * sizeof(int))
        self.U = <int *> PyMem_Malloc(n * sizeof(int))
        self.D = <int *> PyMem_Malloc(n * sizeof(int))
        self.C = <int *> PyMem_Malloc(n * sizeof(int))
        self.ROW = <int *> PyMem_Malloc(n * sizeof(int))
        self.S = <int *> PyMem_Malloc((nc + 1) * sizeof(int))
        self.X = <int *> PyMem_Malloc((nc + 2) * sizeof(int))
        if not (self.L and self.R and self.U and self.D and self.C and self.ROW and self.S and self.X):
            raise MemoryError()
        for h in range(n):
            self.L[h] = h
            self.R[h] = h
            self.U[h] = h
            self.D[h] = h
            self.C[h] = 0
            self.ROW[h] = -1
        for h in range(nc + 1):
            self.S[h] = 0
            self.L[h] = h - 1 if h > 0 else nc
            self.R[h] = h + 1 if h < nc else 0
            self.C[h] = h
        node = nc + 1
        self._row_first = {}
        for r in range(len(rows)):
            first = node
            prev = -1
            for pycol in rows[r]:
                col = pycol
                if col < 0 or col >= nc:
                    raise ValueError(f"row {r} references column {col} outside 0..{nc - 1}")
                h = col + 1
                self.C[node] = h
                self.ROW[node] = r
                self.U[node] = self.U[h]
                self.D[node] = h
                self.D[self.U[h]] = node
                self.U[h] = node
                self.S[h] += 1
                if prev >= 0:
                    self.L[node] = prev
                    self.R[prev] = node
                prev = node
                node += 1
            if prev >= 0:
                self.L[first] = prev
                self.R[prev] = first
                self._row_first[r] = first

    def __dealloc__(self):
        if self.L != NULL:
            PyMem_Free(self.L)
            PyMem_Free(self.R)
            PyMem_Free(self.U)
            PyMem_Free(self.D)
            PyMem_Free(self.C)
            PyMem_Free(self.ROW)
            PyMem_Free(self.S)
            PyMem_Free(self.X)

    cdef inline void _cover(self, int c) noexcept nogil:
        cdef int *L = self.L
        cdef int *R = self.R
        cdef int *U = self.U
        cdef int *D = self.D
        cdef int *C = self.C
        cdef int *S = self.S
        cdef int i, j
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

    cdef inline void _uncover(self, int c) noexcept nogil:
        cdef int *L = self.L
        cdef int *R = self.R
        cdef int *U = self.U
        cdef int *D = self.D
        cdef int *C = self.C
        cdef int *S = self.S
        cdef int i, j
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

    def cover(self, int c):
        self._cover(c + 1)

    def uncover(self, int c):
        self._uncover(c + 1)

    def column_size(self, int c):
        return self.S[c + 1]

    def active_columns(self):
        out = []
        cdef int j = self.R[0]
        while j != 0:
            out.append(j - 1)
            j = self.R[j]
        return out

    def digest(self):
        h = hashlib.sha256()
        for arr in (self._dump(0), self._dump(1), self._dump(2), self._dump(3), self._dump(4)):
            h.update(repr(arr).encode())
        return h.hexdigest()

    def _dump(self, int which):
        cdef int *a
        cdef int n = self.n_nodes
        if which == 0:
            a = self.L
        elif which == 1:
            a = self.R
        elif which == 2:
            a = self.U
        elif which == 3:
            a = self.D
        else:
            a = self.S
            n = self.n_cols + 1
        return [a[i] for i in range(n)]

    def check(self):
        cdef int j = self.R[0]
        cdef int i, n
        while j != 0:
            n = 0
            i = self.D[j]
            while i != j:
                if self.D[self.U[i]] != i:
                    return False
                n += 1
                i = self.D[i]
            if n != self.S[j]:
                return False
            j = self.R[j]
        return True

    def _force(self, rows):
        covered = []
        active = set(self.active_columns())
        cdef int nd, first
        for r in rows:
            if r not in self._row_first:
                continue
            first = self._row_first[r]
            cols = []
            nd = first
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

    def search(self, max_nodes=0, max_seconds=0.0, max_solutions=0, on_solution=None,
               tie_break=0, progress=None, progress_every=0, forced=()):
        """Run Algorithm X.  Returns ``(status, solutions, nodes)``."""
        covered = self._force(forced)
        if covered is None:
            return COMPLETE, 0, 0
        cdef long long nodes = 0
        cdef long long count = 0
        cdef int status
        cdef long long mn = max_nodes or 0
        cdef double ms = max_seconds or 0.0
        cdef long long msol = max_solutions or 0
        cdef int tb = tie_break
        cdef long long pe = progress_every or 0
        cdef bint has_cb = on_solution is not None
        cdef bint has_progress = progress is not None and pe > 0
        self._prefix = list(forced)
        self._on_solution = on_solution
        self._progress = progress
        self._error = None
        try:
            if not has_cb and not has_progress:
                with nogil:
                    status = self._run(mn, ms, msol, 0, tb, 0, 0, &nodes, &count)
            else:
                status = self._run(mn, ms, msol, has_cb, tb, has_progress, pe, &nodes, &count)
        finally:
            for h in reversed(covered):
                self._uncover(h)
            self._on_solution = None
            self._progress = None
        if status < 0:
            raise self._error
        return status, count, nodes

    cdef int _emit(self, int level) noexcept with gil:
        sol = list(self._prefix)
        for i in range(level):
            sol.append(self.ROW[self.X[i]])
        try:
            return 1 if self._on_solution(sol) else 0
        except BaseException as exc:
            self._error = exc
            return -1

    cdef int _report(self, long long nodes, int level) noexcept with gil:
        try:
            self._progress(nodes, level)
        except BaseException as exc:
            self._error = exc
            return -1
        return 0

    cdef int _run(self, long long max_nodes, double max_seconds, long long max_solutions,
                  bint has_cb, int tie_break, bint has_progress, long long progress_every,
                  long long *nodes_out, long long *count_out) noexcept nogil:
        cdef int *L = self.L
        cdef int *R = self.R
        cdef int *D = self.D
        cdef int *C = self.C
        cdef int *S = self.S
        cdef int *X = self.X
        cdef long long nodes = 0
        cdef long long count = 0
        cdef int status = 0
        cdef int level = 0
        cdef int c = 0, j, r, s, rc
        cdef double deadline = 0.0
        if max_seconds > 0:
            deadline = _now() + max_seconds
        # states: 0 forward, 1 advance, 2 backup
        cdef int state = 0
        while True:
            if state == 0:
                nodes += 1
                if max_nodes and nodes > max_nodes:
                    nodes -= 1
                    status = 1
                    break
                if deadline > 0 and (nodes & TIME_CHECK_MASK) == 0 and _now() > deadline:
                    status = 2
                    break
                if has_progress and nodes % progress_every == 0:
                    if self._report(nodes, level) < 0:
                        status = -1
                        break
                if R[0] == 0:
                    count += 1
                    if has_cb:
                        rc = self._emit(level)
                        if rc < 0:
                            status = -1
                            break
                        if rc:
                            status = 4
                            break
                    if max_solutions and count >= max_solutions:
                        status = 3
                        break
                    state = 2
                    continue
                j = R[0]
                c = j
                s = S[j]
                if tie_break == 0:
                    while j != 0 and s:
                        if S[j] < s:
                            c = j
                            s = S[j]
                        j = R[j]
                else:
                    while j != 0:
                        if S[j] <= s:
                            c = j
                            s = S[j]
                        j = R[j]
                self._cover(c)
                X[level] = D[c]
                state = 1
            elif state == 1:
                r = X[level]
                if r == c:
                    self._uncover(c)
                    state = 2
                    continue
                j = R[r]
                while j != r:
                    self._cover(C[j])
                    j = R[j]
                level += 1
                state = 0
            else:
                if level == 0:
                    break
                level -= 1
                r = X[level]
                c = C[r]
                j = L[r]
                while j != r:
                    self._uncover(C[j])
                    j = L[j]
                X[level] = D[r]
                state = 1
        if status != 0:
            while level > 0:
                level -= 1
                r = X[level]
                j = L[r]
                while j != r:
                    self._uncover(C[j])
                    j = L[j]
                self._uncover(C[r])
        nodes_out[0] = nodes
        count_out[0] = count
        return status
