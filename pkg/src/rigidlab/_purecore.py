"""Pure-Python exact integer kernels.

The equivalent of rigidlab._fastcore, implemented entirely with Python
lists and big ints.  Slower than the compiled version, but always
available; rigidlab.kernels picks whichever can be imported.

All routines are deterministic: identical inputs produce identical
bases, whichever backend runs them.
"""

from __future__ import annotations

BACKEND_NAME = "python"


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


class IntLattice:
    """Subgroup of Z^n spanned by added integer vectors, kept in row HNF.

    Pivots are positive, pivot columns strictly increase by row, and every
    entry above a pivot is reduced into [0, pivot).  The HNF basis of a
    lattice is unique, so `basis()` does not depend on insertion order.

    With track=True each basis row also carries its expression as an
    integer combination of the added vectors, which `reduce` uses to
    emit membership certificates.
    """

    __slots__ = ("ncols", "rows", "pivots", "track", "combos", "nadded")

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
        return [row[:] for row in self.rows]

    def _leading(self, vec):
        for j, v in enumerate(vec):
            if v:
                return j
        return -1

    def add(self, vec):
        if len(vec) != self.ncols:
            raise ValueError("vector length mismatch")
        v = list(vec)
        track = self.track
        idx = self.nadded
        self.nadded = idx + 1
        c = {idx: 1} if track else None
        rows = self.rows
        pivots = self.pivots
        i = 0
        while i < len(rows):
            j = pivots[i]
            lead = self._leading(v)
            if lead == -1:
                self._normalize()
                return
            if lead < j:
                break
            if lead > j:
                i += 1
                continue
            row = rows[i]
            a = row[j]
            b = v[j]
            if b % a == 0:
                q = b // a
                for k in range(j, self.ncols):
                    v[k] -= q * row[k]
                if track:
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
                if track:
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
                    self.combos[i] = {k: x for k, x in new_rc.items() if x}
                    c = {k: x for k, x in new_c.items() if x}
                i += 1
        lead = self._leading(v)
        if lead == -1:
            self._normalize()
            return
        if v[lead] < 0:
            v = [-x for x in v]
            if track:
                c = {k: -x for k, x in c.items()}
        pos = 0
        while pos < len(pivots) and pivots[pos] < lead:
            pos += 1
        rows.insert(pos, v)
        pivots.insert(pos, lead)
        if track:
            self.combos.insert(pos, c)
        self._normalize()

    def _normalize(self):
        rows = self.rows
        pivots = self.pivots
        track = self.track
        n = len(rows)
        for i in range(n - 1, -1, -1):
            for k in range(i + 1, n):
                j = pivots[k]
                p = rows[k][j]
                q = rows[i][j] // p
                if q:
                    rk = rows[k]
                    ri = rows[i]
                    for col in range(j, self.ncols):
                        ri[col] -= q * rk[col]
                    if track:
                        ci = self.combos[i]
                        for key, val in self.combos[k].items():
                            new = ci.get(key, 0) - q * val
                            if new:
                                ci[key] = new
                            elif key in ci:
                                del ci[key]

    def reduce(self, vec):
        """Reduce vec by the lattice; return (remainder, combo).

        remainder is vec minus a lattice member; combo expresses that
        member over the added vectors (None unless tracking).  The
        remainder is the zero vector exactly when vec is in the lattice.
        """
        if len(vec) != self.ncols:
            raise ValueError("vector length mismatch")
        v = list(vec)
        track = self.track
        c = {} if track else None
        col_of = {j: i for i, j in enumerate(self.pivots)}
        for j in range(self.ncols):
            if not v[j]:
                continue
            i = col_of.get(j)
            if i is None:
                continue
            row = self.rows[i]
            p = row[j]
            if v[j] % p:
                continue
            q = v[j] // p
            for k in range(j, self.ncols):
                v[k] -= q * row[k]
            if track:
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
    """Basis of {x in Z^ncols : M x = 0} for the integer matrix M.

    The result is the canonical HNF basis of the (saturated) kernel
    lattice; it also spans the rational kernel of M.
    """
    nrows = len(rows)
    lat = IntLattice(nrows + ncols)
    for j in range(ncols):
        aug = [rows[i][j] for i in range(nrows)]
        aug.extend(1 if k == j else 0 for k in range(ncols))
        lat.add(aug)
    out = IntLattice(ncols)
    for i, piv in enumerate(lat.pivots):
        if piv >= nrows:
            out.add(lat.rows[i][nrows:])
    return out.basis()


def smith_normal_form(rows, ncols):
    """Nonzero diagonal of the Smith normal form, as a divisibility chain."""
    m = [list(r) for r in rows]
    nrows = len(m)
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
            m[i][c], m[i][pc] = m[i][pc], m[i][c]
        while True:
            pivot = m[r][c]
            done = True
            for i in range(r + 1, nrows):
                if m[i][c]:
                    if m[i][c] % pivot == 0:
                        q = m[i][c] // pivot
                        for j in range(c, ncols):
                            m[i][j] -= q * m[r][j]
                    else:
                        g, x, y = xgcd(pivot, m[i][c])
                        a = pivot // g
                        b = m[i][c] // g
                        for j in range(c, ncols):
                            top = x * m[r][j] + y * m[i][j]
                            bot = a * m[i][j] - b * m[r][j]
                            m[r][j], m[i][j] = top, bot
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
                            m[i][j] -= q * m[i][c]
                    else:
                        g, x, y = xgcd(pivot, m[r][j])
                        a = pivot // g
                        b = m[r][j] // g
                        for i in range(r, nrows):
                            left = x * m[i][c] + y * m[i][j]
                            right = a * m[i][j] - b * m[i][c]
                            m[i][c], m[i][j] = left, right
                        done = False
                        break
            if done:
                break
        diag.append(abs(m[r][c]))
        r += 1
        c += 1
    # enforce the divisibility chain d1 | d2 | ...
    changed = True
    while changed:
        changed = False
        for i in range(len(diag) - 1):
            a, b = diag[i], diag[i + 1]
            if b % a:
                g, _, _ = xgcd(a, b)
                l = a // g * b
                diag[i], diag[i + 1] = g, l
                changed = True
    return diag


def _tree_children(parents):
    n = len(parents)
    children = [[] for _ in range(n)]
    for i in range(1, n):
        children[parents[i]].append(i)
    return children


def _tree_heights(parents):
    n = len(parents)
    heights = [0] * n
    for i in range(1, n):
        heights[i] = heights[parents[i]] + 1
    return heights


def tree_embed_dp(parents1, labels1, parents2, labels2, leq, nlabels):
    """Height- and order-preserving, label-nondecreasing embedding test.

    Nodes are indexed with parents before children (root = 0).  leq is a
    flattened nlabels x nlabels 0/1 matrix.  Computes, bottom-up, for each
    same-height pair (u, v) whether the subtree relation holds:
    emb(u, v) iff leq[l1[u]][l2[v]] and every child of u embeds into some
    child of v.
    """
    n1 = len(parents1)
    n2 = len(parents2)
    ch1 = _tree_children(parents1)
    ch2 = _tree_children(parents2)
    h1 = _tree_heights(parents1)
    h2 = _tree_heights(parents2)
    maxh = max(h1)
    if maxh > max(h2):
        return False
    by_h1 = [[] for _ in range(maxh + 1)]
    for i in range(n1):
        by_h1[h1[i]].append(i)
    by_h2 = [[] for _ in range(maxh + 1)]
    for i in range(n2):
        if h2[i] <= maxh:
            by_h2[h2[i]].append(i)
    emb = [[False] * n2 for _ in range(n1)]
    for h in range(maxh, -1, -1):
        for u in by_h1[h]:
            lu = labels1[u]
            cu = ch1[u]
            for v in by_h2[h]:
                if not leq[lu * nlabels + labels2[v]]:
                    continue
                ok = True
                for c in cu:
                    hit = False
                    for d in ch2[v]:
                        if emb[c][d]:
                            hit = True
                            break
                    if not hit:
                        ok = False
                        break
                emb[u][v] = ok
    return emb[0][0]


def tree_embed_search(parents1, labels1, parents2, labels2, leq, nlabels):
    """Backtracking search over whole height-preserving node maps.

    Independent of tree_embed_dp: enumerates global assignments node by
    node (parents first), pruning on height, order (parent consistency)
    and label compatibility.  Exhaustive over the map space.
    """
    n1 = len(parents1)
    n2 = len(parents2)
    h1 = _tree_heights(parents1)
    h2 = _tree_heights(parents2)
    by_h2 = {}
    for v in range(n2):
        by_h2.setdefault(h2[v], []).append(v)
    assign = [-1] * n1

    def rec(i):
        if i == n1:
            return True
        cands = by_h2.get(h1[i])
        if not cands:
            return False
        p = parents1[i]
        li = labels1[i]
        for v in cands:
            if i > 0 and parents2[v] != assign[p]:
                continue
            if not leq[li * nlabels + labels2[v]]:
                continue
            assign[i] = v
            if rec(i + 1):
                return True
            assign[i] = -1
        return False

    return rec(0)
