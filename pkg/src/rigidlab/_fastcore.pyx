# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled exact integer kernels.

Same API and same algorithms as rigidlab._purecore; coefficients stay
arbitrary-precision Python ints, Cython only removes the interpreter
overhead from the inner loops.  The small-int tree kernels additionally
run on C arrays.
"""

from cpython.mem cimport PyMem_Free, PyMem_Malloc

BACKEND_NAME = "compiled"


def xgcd(a, b):
    """Return (g, x, y) with g = gcd(a, b) >= 0 and g == x*a + y*b."""
    x, next_x = 1, 0
    y, next_y = 0, 1
    g, next_g = a, b
    while next_g:
        q = g // next_g
        x, next_x = next_x, x - q * next_x
        y, next_y = next_y, y - q * next_y
        g, next_g = next_g, g - q * next_g
    if g < 0:
        x, y, g = -x, -y, -g
    return g, x, y


cdef class IntLattice:
    """Subgroup of Z^n spanned by added integer vectors, kept in row HNF.

    See rigidlab._purecore.IntLattice for the full contract; the two
    implementations produce identical bases and certificates.
    """

    cdef public Py_ssize_t ncols
    cdef public list rows
    cdef public list pivots
    cdef public bint track
    cdef public list combos
    cdef public Py_ssize_t nadded

    def __init__(self, ncols, track=False):
        self.ncols = ncols
        self.rows = []
        self.pivots = []
        self.track = track
        self.combos = [] if track else None
        self.nadded = 0

    def rank(self):
        return len(self.rows)

    def basis(self):
        return [list(row) for row in self.rows]

    cdef Py_ssize_t _leading(self, list vec):
        cdef Py_ssize_t j
        for j in range(len(vec)):
            if vec[j]:
                return j
        return -1

    def add(self, vec):
        cdef Py_ssize_t i, j, k, lead, pos, idx
        cdef list v, row, new_row, new_v
        if len(vec) != self.ncols:
            raise ValueError("vector length mismatch")
        v = list(vec)
        idx = self.nadded
        self.nadded = idx + 1
        c = {idx: 1} if self.track else None
        rows = self.rows
        pivots = self.pivots
        i = 0
        while i < len(rows):
            j = <Py_ssize_t> pivots[i]
            lead = self._leading(v)
            if lead == -1:
                self._normalize()
                return
            if lead < j:
                break
            if lead > j:
                i += 1
                continue
            row = <list> rows[i]
            a = row[j]
            b = v[j]
            if b % a == 0:
                q = b // a
                for k in range(j, self.ncols):
                    v[k] = v[k] - q * row[k]
                if self.track:
                    rc = self.combos[i]
                    for key, val in rc.items():
                        c[key] = c.get(key, 0) - q * val
                i += 1
            else:
                g, x, y = xgcd(a, b)
                ag = a // g
                bg = b // g
                new_row = [x * row[k] + y * v[k] for k in range(self.ncols)]
                new_v = [ag * v[k] - bg * row[k] for k in range(self.ncols)]
                rows[i] = new_row
                v = new_v
                if self.track:
                    rc = self.combos[i]
                    new_rc = {}
                    for key, val in rc.items():
                        new_rc[key] = x * val
                    for key, val in c.items():
                        new_rc[key] = new_rc.get(key, 0) + y * val
                    new_c = {}
                    for key, val in c.items():
                        new_c[key] = ag * val
                    for key, val in rc.items():
                        new_c[key] = new_c.get(key, 0) - bg * val
                    self.combos[i] = {k2: x2 for k2, x2 in new_rc.items() if x2}
                    c = {k2: x2 for k2, x2 in new_c.items() if x2}
                i += 1
        lead = self._leading(v)
        if lead == -1:
            self._normalize()
            return
        if v[lead] < 0:
            v = [-x for x in v]
            if self.track:
                c = {k2: -x2 for k2, x2 in c.items()}
        pos = 0
        while pos < len(pivots) and <Py_ssize_t> pivots[pos] < lead:
            pos += 1
        rows.insert(pos, v)
        pivots.insert(pos, lead)
        if self.track:
            self.combos.insert(pos, c)
        self._normalize()

    cdef _normalize(self):
        cdef Py_ssize_t i, k, j, col, n
        cdef list rows = self.rows
        cdef list pivots = self.pivots
        cdef list rk, ri
        n = len(rows)
        for i in range(n - 1, -1, -1):
            for k in range(i + 1, n):
                j = <Py_ssize_t> pivots[k]
                rk = <list> rows[k]
                ri = <list> rows[i]
                p = rk[j]
                q = ri[j] // p
                if q:
                    for col in range(j, self.ncols):
                        ri[col] = ri[col] - q * rk[col]
                    if self.track:
                        ci = self.combos[i]
                        for key, val in self.combos[k].items():
                            new = ci.get(key, 0) - q * val
                            if new:
                                ci[key] = new
                            elif key in ci:
                                del ci[key]

    def reduce(self, vec):
        """Reduce vec by the lattice; return (remainder, combo)."""
        cdef Py_ssize_t i, j, k
        cdef list v, row
        if len(vec) != self.ncols:
            raise ValueError("vector length mismatch")
        v = list(vec)
        c = {} if self.track else None
        col_of = {}
        for i in range(len(self.pivots)):
            col_of[self.pivots[i]] = i
        for j in range(self.ncols):
            if not v[j]:
                continue
            ii = col_of.get(j)
            if ii is None:
                continue
            i = <Py_ssize_t> ii
            row = <list> self.rows[i]
            p = row[j]
            if v[j] % p:
                continue
            q = v[j] // p
            for k in range(j, self.ncols):
                v[k] = v[k] - q * row[k]
            if self.track:
                for key, val in self.combos[i].items():
                    new = c.get(key, 0) + q * val
                    if new:
                        c[key] = new
                    elif key in c:
                        del c[key]
        return v, c

    def contains(self, vec):
        rem, _ = self.reduce(vec)
        return not any(rem)


def right_kernel_lattice(rows, ncols):
    """Basis of {x in Z^ncols : M x = 0}, canonical HNF, saturated."""
    cdef Py_ssize_t nrows = len(rows)
    cdef Py_ssize_t i, j, k
    lat = IntLattice(nrows + ncols)
    for j in range(ncols):
        aug = [row[j] for row in rows]
        aug.extend(1 if k == j else 0 for k in range(ncols))
        lat.add(aug)
    out = IntLattice(ncols)
    for i in range(len(lat.pivots)):
        if <Py_ssize_t> lat.pivots[i] >= nrows:
            out.add((<list> lat.rows[i])[nrows:])
    return out.basis()


def smith_normal_form(rows, ncols):
    """Nonzero diagonal of the Smith normal form, as a divisibility chain."""
    cdef Py_ssize_t nrows = len(rows)
    cdef Py_ssize_t r, c, i, j, pr, pc
    cdef bint done, changed
    m = [list(row) for row in rows]
    diag = []
    r = 0
    c = 0
    while r < nrows and c < ncols:
        pr = pc = -1
        best = 0
        for i in range(r, nrows):
            for j in range(c, ncols):
                v = m[i][j]
                if v and (best == 0 or abs(v) < best):
                    best = abs(v)
                    pr, pc = i, j
        if pr < 0:
            break
        m[r], m[pr] = m[pr], m[r]
        for i in range(nrows):
            row = m[i]
            row[c], row[pc] = row[pc], row[c]
        while True:
            pivot = m[r][c]
            done = True
            for i in range(r + 1, nrows):
                if m[i][c]:
                    if m[i][c] % pivot == 0:
                        q = m[i][c] // pivot
                        for j in range(c, ncols):
                            m[i][j] = m[i][j] - q * m[r][j]
                    else:
                        g, x, y = xgcd(pivot, m[i][c])
                        a = pivot // g
                        b = m[i][c] // g
                        for j in range(c, ncols):
                            top = x * m[r][j] + y * m[i][j]
                            bot = a * m[i][j] - b * m[r][j]
                            m[r][j] = top
                            m[i][j] = bot
                        done = False
                        break
            if not done:
                continue
            pivot = m[r][c]
            for j in range(c + 1, ncols):
                if m[r][j]:
                    if m[r][j] % pivot == 0:
                        q = m[r][j] // pivot
                        for i in range(r, nrows):
                            m[i][j] = m[i][j] - q * m[i][c]
                    else:
                        g, x, y = xgcd(pivot, m[r][j])
                        a = pivot // g
                        b = m[r][j] // g
                        for i in range(r, nrows):
                            left = x * m[i][c] + y * m[i][j]
                            right = a * m[i][j] - b * m[i][c]
                            m[i][c] = left
                            m[i][j] = right
                        done = False
                        break
            if done:
                break
        diag.append(abs(m[r][c]))
        r += 1
        c += 1
    changed = True
    while changed:
        changed = False
        for i in range(len(diag) - 1):
            a = diag[i]
            b = diag[i + 1]
            if b % a:
                g, _, _ = xgcd(a, b)
                l = (a // g) * b
                diag[i] = g
                diag[i + 1] = l
                changed = True
    return diag


cdef int* _to_c_array(list xs) except NULL:
    cdef Py_ssize_t n = len(xs)
    cdef int* buf = <int*> PyMem_Malloc(n * sizeof(int) if n else sizeof(int))
    cdef Py_ssize_t i
    if buf == NULL:
        raise MemoryError()
    for i in range(n):
        buf[i] = <int> xs[i]
    return buf


def tree_embed_dp(parents1, labels1, parents2, labels2, leq, nlabels):
    """Height/order-preserving, label-nondecreasing embedding test (DP)."""
    cdef Py_ssize_t n1 = len(parents1)
    cdef Py_ssize_t n2 = len(parents2)
    cdef int nl = <int> nlabels
    cdef int *p1 = NULL
    cdef int *l1 = NULL
    cdef int *p2 = NULL
    cdef int *l2 = NULL
    cdef int *lq = NULL
    cdef int *h1 = NULL
    cdef int *h2 = NULL
    cdef char *emb = NULL
    cdef Py_ssize_t i, u, v, c, d
    cdef int h, maxh1, maxh2
    cdef bint ok, hit, result
    try:
        p1 = _to_c_array(list(parents1))
        l1 = _to_c_array(list(labels1))
        p2 = _to_c_array(list(parents2))
        l2 = _to_c_array(list(labels2))
        lq = _to_c_array(list(leq))
        h1 = <int*> PyMem_Malloc(n1 * sizeof(int))
        h2 = <int*> PyMem_Malloc(n2 * sizeof(int))
        if h1 == NULL or h2 == NULL:
            raise MemoryError()
        h1[0] = 0
        maxh1 = 0
        for i in range(1, n1):
            h1[i] = h1[p1[i]] + 1
            if h1[i] > maxh1:
                maxh1 = h1[i]
        h2[0] = 0
        maxh2 = 0
        for i in range(1, n2):
            h2[i] = h2[p2[i]] + 1
            if h2[i] > maxh2:
                maxh2 = h2[i]
        if maxh1 > maxh2:
            return False
        emb = <char*> PyMem_Malloc(n1 * n2 * sizeof(char))
        if emb == NULL:
            raise MemoryError()
        for i in range(n1 * n2):
            emb[i] = 0
        for h in range(maxh1, -1, -1):
            for u in range(n1):
                if h1[u] != h:
                    continue
                for v in range(n2):
                    if h2[v] != h:
                        continue
                    if not lq[l1[u] * nl + l2[v]]:
                        continue
                    ok = True
                    for c in range(1, n1):
                        if p1[c] != u:
                            continue
                        hit = False
                        for d in range(1, n2):
                            if p2[d] != v:
                                continue
                            if emb[c * n2 + d]:
                                hit = True
                                break
                        if not hit:
                            ok = False
                            break
                    if ok:
                        emb[u * n2 + v] = 1
        result = emb[0] != 0
        return result
    finally:
        PyMem_Free(p1)
        PyMem_Free(l1)
        PyMem_Free(p2)
        PyMem_Free(l2)
        PyMem_Free(lq)
        PyMem_Free(h1)
        PyMem_Free(h2)
        PyMem_Free(emb)


def tree_embed_search(parents1, labels1, parents2, labels2, leq, nlabels):
    """Backtracking enumeration of whole height-preserving node maps."""
    cdef Py_ssize_t n1 = len(parents1)
    cdef Py_ssize_t n2 = len(parents2)
    cdef int nl = <int> nlabels
    cdef int *p1 = NULL
    cdef int *l1 = NULL
    cdef int *p2 = NULL
    cdef int *l2 = NULL
    cdef int *lq = NULL
    cdef int *h1 = NULL
    cdef int *h2 = NULL
    cdef int *assign = NULL
    cdef int *stack_v = NULL
    cdef Py_ssize_t i
    cdef int depth, v
    cdef bint result
    try:
        p1 = _to_c_array(list(parents1))
        l1 = _to_c_array(list(labels1))
        p2 = _to_c_array(list(parents2))
        l2 = _to_c_array(list(labels2))
        lq = _to_c_array(list(leq))
        h1 = <int*> PyMem_Malloc(n1 * sizeof(int))
        h2 = <int*> PyMem_Malloc(n2 * sizeof(int))
        assign = <int*> PyMem_Malloc(n1 * sizeof(int))
        stack_v = <int*> PyMem_Malloc((n1 + 1) * sizeof(int))
        if h1 == NULL or h2 == NULL or assign == NULL or stack_v == NULL:
            raise MemoryError()
        h1[0] = 0
        for i in range(1, n1):
            h1[i] = h1[p1[i]] + 1
        h2[0] = 0
        for i in range(1, n2):
            h2[i] = h2[p2[i]] + 1
        # iterative DFS: stack_v[d] = next candidate for node d
        depth = 0
        stack_v[0] = 0
        result = False
        while depth >= 0:
            if depth == <int> n1:
                result = True
                break
            v = stack_v[depth]
            if v >= <int> n2:
                depth -= 1
                if depth >= 0:
                    stack_v[depth] += 1
                continue
            if (h2[v] == h1[depth]
                    and (depth == 0 or p2[v] == assign[p1[depth]])
                    and lq[l1[depth] * nl + l2[v]]):
                assign[depth] = v
                depth += 1
                stack_v[depth] = 0
            else:
                stack_v[depth] += 1
        return result
    finally:
        PyMem_Free(p1)
        PyMem_Free(l1)
        PyMem_Free(p2)
        PyMem_Free(l2)
        PyMem_Free(lq)
        PyMem_Free(h1)
        PyMem_Free(h2)
        PyMem_Free(assign)
        PyMem_Free(stack_v)
