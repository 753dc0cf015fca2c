"""Brute-force oracles, written independently of the code they check.

``tau_rigid_pairs`` shares nothing with the package beyond ``exactlin``.  The
Yoneda counter uses field-level Hom spaces from ``repmod`` but none of the
algebra-entry machinery behind ``morcat.ext1_p``.
"""

from __future__ import annotations

import itertools

import numpy as np

from ptilt import exactlin as el


# ranks by counting ------------------------------------------------------------

def span_size(m: np.ndarray, p: int) -> int:
    """Number of distinct F_p-combinations of the rows of m."""
    rows = [np.mod(r, p) for r in m]
    seen = set()
    for coeffs in itertools.product(range(p), repeat=len(rows)):
        v = np.zeros(m.shape[1], dtype=np.int64)
        for c, r in zip(coeffs, rows):
            v = (v + c * r) % p
        seen.add(v.tobytes())
    return len(seen)


def brute_rank(m: np.ndarray, p: int) -> int:
    n = span_size(m, p)
    r = 0
    while p ** r < n:
        r += 1
    return r


# Yoneda classes of conflations in the morphism category -----------------------

def _all_elements(basis, p):
    if not basis:
        return [None]
    out = []
    for coeffs in itertools.product(range(p), repeat=len(basis)):
        out.append(coeffs)
    return out


def _combo(basis, coeffs, src_dims, tgt_dims, p):
    comps = [np.zeros((tgt_dims[v], src_dims[v]), dtype=np.int64) for v in range(len(src_dims))]
    if coeffs is None:
        return comps
    for c, f in zip(coeffs, basis):
        for v in range(len(comps)):
            comps[v] = (comps[v] + c * f.comps[v]) % p
    return comps


def _middle(dy, dx, h, v, p):
    """Block matrix of the middle term at vertex v: [[dY, h], [0, dX]]."""
    top = np.concatenate([dy.comps[v], h[v]], axis=1)
    bot = np.concatenate([np.zeros((dx.target.dims[v], dy.source.dims[v]), dtype=np.int64), dx.comps[v]], axis=1)
    return np.concatenate([top, bot], axis=0) % p


def yoneda_ext_count(x, y) -> int:
    """Number of equivalence classes of conflations y >-> E ->> x.

    Every conflation is degreewise split, so E is determined by a block
    matrix [[dY, h], [0, dX]].  Two of them are equivalent when some pair of
    unitriangular automorphisms [[1, s], [0, 1]] in the two degrees conjugates
    one middle map into the other; this is checked blockwise by brute force.
    """
    from ptilt.repmod import hom_space

    dx, dy = x.field_map, y.field_map
    p = x.alg.p
    n = x.alg.n
    hb = hom_space(dx.source, dy.target)
    s1b = hom_space(dx.source, dy.source)
    s0b = hom_space(dx.target, dy.target)
    hs = [_combo(hb, c, dx.source.dims, dy.target.dims, p) for c in _all_elements(hb, p)]
    s1s = [_combo(s1b, c, dx.source.dims, dy.source.dims, p) for c in _all_elements(s1b, p)]
    s0s = [_combo(s0b, c, dx.target.dims, dy.target.dims, p) for c in _all_elements(s0b, p)]

    def unitri(s, v, rows_y, cols_x):
        a = np.eye(rows_y + cols_x, dtype=np.int64)
        a[:rows_y, rows_y:] = s[v]
        return a

    def key(mids):
        return b"".join(m.tobytes() for m in mids)

    remaining = {key([_middle(dy, dx, h, v, p) for v in range(n)]): h for h in hs}
    classes = 0
    while remaining:
        k0, h = next(iter(remaining.items()))
        classes += 1
        mids = [_middle(dy, dx, h, v, p) for v in range(n)]
        for s1 in s1s:
            for s0 in s0s:
                conj = []
                for v in range(n):
                    a0 = unitri(s0, v, dy.target.dims[v], dx.target.dims[v])
                    a1 = unitri(s1, v, dy.source.dims[v], dx.source.dims[v])
                    a1inv = el.inverse(a1, p)
                    conj.append(el.mul(el.mul(a0, mids[v], p), a1inv, p))
                remaining.pop(key(conj), None)
        remaining.pop(k0, None)
    return classes


def log_p(n: int, p: int) -> int:
    d = 0
    while p ** d < n:
        d += 1
    assert p ** d == n, (n, p)
    return d


# support tau-tilting pairs from the definitions --------------------------------

class Quiver:
    """Acyclic quiver with zero relations: vertices 0..n-1, arrows (src, tgt).

    ``zero`` lists arrow words (in traversal order) that vanish.
    """

    def __init__(self, n: int, arrows, zero=()):
        self.n = n
        self.arrows = list(arrows)
        self.zero = [tuple(w) for w in zero]

    def vanishes(self, word) -> bool:
        return any(word[i:i + len(z)] == z for z in self.zero for i in range(len(word) - len(z) + 1))

    def paths_from(self, v):
        out = [(v, ())]
        stack = [(v, ())]
        while stack:
            end, word = stack.pop()
            for a, (s, t) in enumerate(self.arrows):
                if s == end and not self.vanishes(word + (a,)):
                    item = (t, word + (a,))
                    out.append(item)
                    stack.append(item)
        return out


class Module:
    def __init__(self, quiver: Quiver, dims, mats, p: int):
        self.q = quiver
        self.dims = tuple(dims)
        self.mats = [np.asarray(m, dtype=np.int64).reshape(dims[t], dims[s]) % p
                     for m, (s, t) in zip(mats, quiver.arrows)]
        self.p = p

    def along(self, start: int, word) -> np.ndarray:
        m = np.eye(self.dims[start], dtype=np.int64)
        for a in word:
            m = el.mul(self.mats[a], m, self.p)
        return m


def all_modules(q: Quiver, bound, p: int):
    for dims in itertools.product(*[range(b + 1) for b in bound]):
        if sum(dims) == 0:
            continue
        sizes = [dims[t] * dims[s] for s, t in q.arrows]
        for flat in itertools.product(range(p), repeat=sum(sizes)):
            mats, pos = [], 0
            for sz in sizes:
                mats.append(np.array(flat[pos:pos + sz], dtype=np.int64))
                pos += sz
            m = Module(q, dims, mats, p)
            if all(not m.along(q.arrows[z[0]][0], z).any() for z in q.zero):
                yield m


def hom_basis(m: Module, n: Module) -> list[list[np.ndarray]]:
    """Basis of module maps, each a list of per-vertex matrices."""
    q, p = m.q, m.p
    offs, total = [], 0
    for v in range(q.n):
        offs.append(total)
        total += n.dims[v] * m.dims[v]
    eqs = []
    for a, (s, t) in enumerate(q.arrows):
        # n_a phi_s - phi_t m_a = 0, entrywise
        for i in range(n.dims[t]):
            for j in range(m.dims[s]):
                row = np.zeros(total, dtype=np.int64)
                for k in range(n.dims[s]):
                    row[offs[s] + k * m.dims[s] + j] += n.mats[a][i, k]
                for k in range(m.dims[t]):
                    row[offs[t] + i * m.dims[t] + k] -= m.mats[a][k, j]
                eqs.append(row % p)
    sysm = np.array(eqs, dtype=np.int64).reshape(len(eqs), total)
    kb = el.kernel_basis(sysm, p) if eqs else np.eye(total, dtype=np.int64)
    out = []
    for c in range(kb.shape[1]):
        col = kb[:, c]
        out.append([col[offs[v]:offs[v] + n.dims[v] * m.dims[v]].reshape(n.dims[v], m.dims[v])
                    for v in range(q.n)])
    return out


def _elements(basis, m, n, p):
    for coeffs in itertools.product(range(p), repeat=len(basis)):
        yield [sum((c * f[v] for c, f in zip(coeffs, basis)),
                   np.zeros((n.dims[v], m.dims[v]), dtype=np.int64)) % p for v in range(m.q.n)]


def is_indecomposable(m: Module) -> bool:
    p = m.p
    for f in _elements(hom_basis(m, m), m, m, p):
        idem = all(np.array_equal(el.mul(c, c, p), c) for c in f)
        zero = not any(c.any() for c in f)
        one = all(np.array_equal(c, np.eye(c.shape[0], dtype=np.int64)) for c in f)
        if idem and not zero and not one:
            return False
    return True


def isomorphic(m: Module, n: Module) -> bool:
    if m.dims != n.dims:
        return False
    p = m.p
    for f in _elements(hom_basis(m, n), m, n, p):
        if all(el.rank(c, p) == c.shape[0] for c in f):
            return True
    return False


def _complement(sub: np.ndarray, dim: int, p: int) -> list[np.ndarray]:
    """Standard basis vectors extending the column span of sub to the whole space."""
    cur = sub.copy()
    out = []
    for i in range(dim):
        e = np.zeros((dim, 1), dtype=np.int64)
        e[i, 0] = 1
        trial = np.concatenate([cur, e], axis=1)
        if el.rank(trial, p) > el.rank(cur, p):
            cur = trial
            out.append(e[:, 0])
    return out


class Presentation:
    """Minimal projective presentation P1 -> P0 -> M of a module over a path algebra."""

    def __init__(self, m: Module):
        q, p = m.q, m.p
        self.m = m
        # generators of M: complements of the radical at each vertex
        self.gens = []  # (vertex, vector in M_v)
        for v in range(q.n):
            imgs = [m.mats[a] for a, (s, t) in enumerate(q.arrows) if t == v]
            rad = np.concatenate(imgs, axis=1) if imgs else np.zeros((m.dims[v], 0), dtype=np.int64)
            for g in _complement(rad % p, m.dims[v], p):
                self.gens.append((v, g))
        # P0 at vertex u: basis (j, word) for paths from vertex of gen j ending at u
        self.p0_basis = {u: [] for u in range(q.n)}
        for j, (v, _) in enumerate(self.gens):
            for end, word in q.paths_from(v):
                self.p0_basis[end].append((j, word))
        # pi: P0 -> M at each vertex, and its kernel K
        self.kernel = {}
        for u in range(q.n):
            cols = [el.mul(m.along(self.gens[j][0], word), self.gens[j][1].reshape(-1, 1), p)[:, 0]
                    for j, word in self.p0_basis[u]]
            pim = np.array(cols, dtype=np.int64).T.reshape(m.dims[u], len(cols))
            self.kernel[u] = el.kernel_basis(pim, p) if m.dims[u] else np.eye(len(cols), dtype=np.int64)
        # generators of K: complement of rad K inside K at each vertex
        self.rel_gens = []  # (vertex, coordinate vector in P0_u)
        for u in range(q.n):
            rad_cols = []
            for a, (s, t) in enumerate(q.arrows):
                if t != u:
                    continue
                for c in range(self.kernel[s].shape[1]):
                    rad_cols.append(self._push(self.kernel[s][:, c], s, a))
            radk = np.array(rad_cols, dtype=np.int64).T.reshape(len(self.p0_basis[u]), len(rad_cols))
            kb = self.kernel[u]
            # choose kernel columns not in the span of rad K
            cur = radk
            for c in range(kb.shape[1]):
                trial = np.concatenate([cur, kb[:, c:c + 1]], axis=1)
                if el.rank(trial, p) > el.rank(cur, p):
                    cur = trial
                    self.rel_gens.append((u, kb[:, c]))

    def _push(self, vec, s, a):
        """Action of arrow a on an element of P0 at vertex s."""
        u = self.m.q.arrows[a][1]
        out = np.zeros(len(self.p0_basis[u]), dtype=np.int64)
        for coeff, (j, word) in zip(vec, self.p0_basis[s]):
            if coeff and not self.m.q.vanishes(word + (a,)):
                out[self.p0_basis[u].index((j, word + (a,)))] += coeff
        return out % self.m.p

    def hom_surjective(self, n: Module) -> bool:
        """Is Hom(P0, N) -> Hom(P1, N) onto?  Equivalent to Hom(N, tau M) = 0."""
        p = n.p
        cols_dom = sum(n.dims[v] for v, _ in self.gens)
        rows = sum(n.dims[u] for u, _ in self.rel_gens)
        if rows == 0:
            return True
        mat = np.zeros((rows, cols_dom), dtype=np.int64)
        goffs, acc = [], 0
        for v, _ in self.gens:
            goffs.append(acc)
            acc += n.dims[v]
        r = 0
        for u, vec in self.rel_gens:
            for coeff, (j, word) in zip(vec, self.p0_basis[u]):
                if coeff:
                    v = self.gens[j][0]
                    blk = n.along(v, word)
                    mat[r:r + n.dims[u], goffs[j]:goffs[j] + n.dims[v]] += coeff * blk
            r += n.dims[u]
        return el.rank(mat % p, p) == rows


def indecomposables(q: Quiver, bound, p: int) -> list[Module]:
    out = []
    for m in all_modules(q, bound, p):
        if is_indecomposable(m) and not any(isomorphic(m, x) for x in out):
            out.append(m)
    return out


def tau_rigid_pairs(q: Quiver, bound, p: int = 2, complete: bool = False) -> list[tuple[tuple, tuple]]:
    """Basic tau-rigid pairs as (sorted dimension vectors of M, vertices of P).

    With ``complete`` only pairs with |M| + |P| = n, the support tau-tilting ones.
    """
    ind = indecomposables(q, bound, p)
    pres = [Presentation(m) for m in ind]
    ok = [[pres[i].hom_surjective(ind[j]) for j in range(len(ind))] for i in range(len(ind))]
    out = []
    for r in range(q.n + 1):
        for sub in itertools.combinations(range(len(ind)), r):
            if not all(ok[i][j] for i in sub for j in sub):
                continue
            support = {v for i in sub for v in range(q.n) if ind[i].dims[v]}
            free = [v for v in range(q.n) if v not in support]
            sizes = [q.n - r] if complete else range(len(free) + 1)
            for k in sizes:
                for ps in itertools.combinations(free, k):
                    out.append((tuple(sorted(ind[i].dims for i in sub)), ps))
    return out


def stt_pairs(q: Quiver, bound, p: int = 2) -> list[tuple[tuple, tuple]]:
    return tau_rigid_pairs(q, bound, p, complete=True)
