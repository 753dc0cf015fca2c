"""Finite-dimensional modules over a bound quiver algebra, as representations.

A module stores one matrix per arrow; ``act[k]`` maps the space at the
source of arrow k to the space at its target.  Projective modules built by
:func:`proj_sum` carry the path basis, which lets maps between them be
written as matrices with algebra entries (see :func:`proj_map`).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import exactlin as el
from .algebra import Algebra, Path

__all__ = [
    "RepError",
    "ResourceRefusal",
    "Rep",
    "RepMap",
    "ProjPres",
    "Ext1",
    "zero_rep",
    "direct_sum",
    "projective",
    "simple",
    "injective",
    "proj_sum",
    "proj_map",
    "proj_matrix",
    "compose_mats",
    "hom_space",
    "hom_dim",
    "kernel",
    "image",
    "cokernel",
    "radical",
    "top",
    "socle",
    "projective_cover",
    "min_proj_pres",
    "syzygy",
    "ext1",
    "middle_term",
    "dual",
    "transpose",
    "ar_translate",
    "ar_translate_inv",
    "nakayama",
    "nakayama_proj",
    "decompose",
    "indecomposable_summands",
    "is_indecomposable",
    "is_isomorphic",
    "is_projective",
    "is_injective",
    "enumerate_indecomposables",
]


class RepError(ValueError):
    """Invalid module data or a violated precondition."""


class ResourceRefusal(RuntimeError):
    """A search would exceed its configured budget."""


def _mat(a: np.ndarray, rows: int, cols: int) -> np.ndarray:
    a = np.asarray(a, dtype=np.int64)
    if a.size == 0:
        return np.zeros((rows, cols), dtype=np.int64)
    return a.reshape(rows, cols)


class Rep:
    """A representation: dimension vector plus one matrix per arrow."""

    def __init__(self, alg: Algebra, dims, act, check: bool = True):
        self.alg = alg
        self.dims = tuple(int(d) for d in dims)
        q = alg.quiver
        if len(self.dims) != q.n:
            raise RepError("dimension vector has the wrong length")
        if len(act) != len(q.arrows):
            raise RepError("one matrix per arrow is required")
        mats = []
        for k, (lab, s, t) in enumerate(q.arrows):
            m = np.zeros((0, 0), dtype=np.int64) if act[k] is None else np.asarray(act[k], dtype=np.int64)
            if m.size == 0:
                m = np.zeros((self.dims[t], self.dims[s]), dtype=np.int64)
            if m.shape != (self.dims[t], self.dims[s]):
                raise RepError(f"arrow {lab}: expected shape {(self.dims[t], self.dims[s])}, got {m.shape}")
            mats.append(np.mod(m, alg.p))
        self.act = tuple(mats)
        if check:
            self._check_relations()

    def _check_relations(self):
        for rel in self.alg.relations:
            if not rel:
                continue
            s, t = rel[0][1].src, rel[0][1].tgt
            total = np.zeros((self.dims[t], self.dims[s]), dtype=np.int64)
            for c, path in rel:
                total = total + c * self.raw_path_matrix(path)
            if np.mod(total, self.alg.p).any():
                raise RepError("a relation does not vanish on the representation")

    def raw_path_matrix(self, path: Path) -> np.ndarray:
        p = self.alg.p
        m = np.eye(self.dims[path.src], dtype=np.int64)
        for a in path.arrows:
            m = el.mul(self.act[a], m, p)
        return m

    @cached_property
    def path_mats(self) -> list[np.ndarray]:
        """Action matrix of every basis path of the algebra."""
        return [self.raw_path_matrix(b) for b in self.alg.basis]

    @property
    def p(self) -> int:
        return self.alg.p

    @property
    def dim(self) -> int:
        return sum(self.dims)

    def is_zero(self) -> bool:
        return self.dim == 0

    def key(self) -> tuple:
        return (self.dims, tuple(a.tobytes() for a in self.act))

    def __repr__(self) -> str:
        return f"Rep(dims={self.dims})"


@dataclass
class RepMap:
    source: Rep
    target: Rep
    comps: tuple  # per vertex, target.dims[v] x source.dims[v]

    def __post_init__(self):
        s, t = self.source, self.target
        comps = []
        for v in range(s.alg.n):
            comps.append(np.mod(_mat(self.comps[v], t.dims[v], s.dims[v]), s.p))
        self.comps = tuple(comps)

    def check(self) -> bool:
        p = self.source.p
        for k, (_, a, b) in enumerate(self.source.alg.quiver.arrows):
            lhs = el.mul(self.target.act[k], self.comps[a], p)
            rhs = el.mul(self.comps[b], self.source.act[k], p)
            if not np.array_equal(lhs, rhs):
                return False
        return True

    def after(self, other: "RepMap") -> "RepMap":
        """self o other."""
        p = self.source.p
        return RepMap(other.source, self.target,
                      tuple(el.mul(self.comps[v], other.comps[v], p) for v in range(len(self.comps))))

    def is_zero(self) -> bool:
        return not any(c.any() for c in self.comps)

    def is_iso(self) -> bool:
        if self.source.dims != self.target.dims:
            return False
        p = self.source.p
        return all(el.rank(c, p) == c.shape[0] for c in self.comps)

    def scaled_sum(self, other: "RepMap", c: int = 1) -> "RepMap":
        return RepMap(self.source, self.target,
                      tuple(a + c * b for a, b in zip(self.comps, other.comps)))

    def vector(self) -> np.ndarray:
        return np.concatenate([c.reshape(-1) for c in self.comps]) if self.comps else np.zeros(0, np.int64)


def identity_map(m: Rep) -> RepMap:
    return RepMap(m, m, tuple(np.eye(d, dtype=np.int64) for d in m.dims))


def zero_map(m: Rep, n: Rep) -> RepMap:
    return RepMap(m, n, tuple(np.zeros((n.dims[v], m.dims[v]), dtype=np.int64) for v in range(m.alg.n)))


def zero_rep(alg: Algebra) -> Rep:
    return Rep(alg, [0] * alg.n, [None] * len(alg.quiver.arrows), check=False)


def _block_diag(mats, rows: int, cols: int) -> np.ndarray:
    out = np.zeros((rows, cols), dtype=np.int64)
    r = c = 0
    for m in mats:
        out[r:r + m.shape[0], c:c + m.shape[1]] = m
        r += m.shape[0]
        c += m.shape[1]
    return out


def direct_sum(alg: Algebra, reps) -> Rep:
    reps = list(reps)
    if not reps:
        return zero_rep(alg)
    dims = [sum(r.dims[v] for r in reps) for v in range(alg.n)]
    act = []
    for k, (_, s, t) in enumerate(alg.quiver.arrows):
        act.append(_block_diag([r.act[k] for r in reps], dims[t], dims[s]))
    return Rep(alg, dims, act, check=False)


def direct_sum_maps(maps, source: Rep, target: Rep) -> RepMap:
    """Block-diagonal sum of maps, given precomputed sum objects."""
    n = source.alg.n
    return RepMap(source, target, tuple(
        _block_diag([f.comps[v] for f in maps], target.dims[v], source.dims[v]) for v in range(n)))


# projectives in path basis --------------------------------------------------

def proj_sum(alg: Algebra, verts) -> Rep:
    """Direct sum of indecomposable projectives in their path bases."""
    verts = tuple(verts)
    return _proj_sum_cached(alg, verts)


_PROJ_CACHE: dict = {}


def _proj_sum_cached(alg: Algebra, verts: tuple) -> Rep:
    key = (id(alg), verts)
    hit = _PROJ_CACHE.get(key)
    if hit is not None and hit.alg is alg:
        return hit
    n = alg.n
    dims = [sum(len(alg.between[(v, w)]) for v in verts) for w in range(n)]
    act = []
    for k, (_, s, t) in enumerate(alg.quiver.arrows):
        m = np.zeros((dims[t], dims[s]), dtype=np.int64)
        a_el = alg.reduce(Path(s, t, (k,)))
        ro = co = 0
        for v in verts:
            cs = alg.between[(v, s)]
            rs = alg.between[(v, t)]
            for jj, b in enumerate(cs):
                prod = alg.times(a_el, _unit(alg, b))
                for ii, c in enumerate(rs):
                    m[ro + ii, co + jj] = prod[c]
            ro += len(rs)
            co += len(cs)
        act.append(m)
    rep = Rep(alg, dims, act, check=False)
    _PROJ_CACHE[key] = rep
    return rep


def _unit(alg: Algebra, i: int) -> np.ndarray:
    out = np.zeros(alg.dim, dtype=np.int64)
    out[i] = 1
    return out


def projective(alg: Algebra, v: int) -> Rep:
    if not 0 <= v < alg.n:
        raise RepError(f"unknown vertex {v}")
    return proj_sum(alg, (v,))


def simple(alg: Algebra, v: int) -> Rep:
    if not 0 <= v < alg.n:
        raise RepError(f"unknown vertex {v}")
    dims = [1 if w == v else 0 for w in range(alg.n)]
    return Rep(alg, dims, [None] * len(alg.quiver.arrows), check=False)


def injective(alg: Algebra, v: int) -> Rep:
    return dual(projective(alg.opposite(), v))


def _offsets(alg: Algebra, verts, w: int) -> list[int]:
    out = [0]
    for v in verts:
        out.append(out[-1] + len(alg.between[(v, w)]))
    return out


def proj_map(alg: Algebra, dom, cod, mat: np.ndarray) -> RepMap:
    """Field-level map between projective sums from an algebra-entry matrix.

    ``mat[i, j]`` is the image of the generator of summand j of ``dom``
    inside summand i of ``cod``: a combination of paths from ``cod[i]`` to
    ``dom[j]``.
    """
    dom, cod = tuple(dom), tuple(cod)
    P, Q = proj_sum(alg, dom), proj_sum(alg, cod)
    mat = np.asarray(mat, dtype=np.int64).reshape(len(cod), len(dom), alg.dim)
    comps = []
    for w in range(alg.n):
        m = np.zeros((Q.dims[w], P.dims[w]), dtype=np.int64)
        ro = _offsets(alg, cod, w)
        co = _offsets(alg, dom, w)
        for j, v in enumerate(dom):
            bs = alg.between[(v, w)]
            if not bs:
                continue
            for i, u in enumerate(cod):
                cs = alg.between[(u, w)]
                if not cs or not mat[i, j].any():
                    continue
                # image of path b is b * mat[i, j]
                blk = np.einsum("k,bkc->cb", mat[i, j], alg.mult[bs][:, :, cs])
                m[ro[i]:ro[i + 1], co[j]:co[j + 1]] = blk
        comps.append(np.mod(m, alg.p))
    return RepMap(P, Q, tuple(comps))


def proj_matrix(alg: Algebra, dom, cod, f: RepMap) -> np.ndarray:
    """Inverse of :func:`proj_map`: read generator images off a module map."""
    dom, cod = tuple(dom), tuple(cod)
    mat = np.zeros((len(cod), len(dom), alg.dim), dtype=np.int64)
    for j, v in enumerate(dom):
        co = _offsets(alg, dom, v)
        gen = co[j] + alg.between[(v, v)].index(alg.trivial_index[v])
        col = f.comps[v][:, gen]
        ro = _offsets(alg, cod, v)
        for i, u in enumerate(cod):
            for ii, c in enumerate(alg.between[(u, v)]):
                mat[i, j, c] = col[ro[i] + ii]
    return mat


def compose_mats(alg: Algebra, g: np.ndarray, f: np.ndarray) -> np.ndarray:
    """Algebra-entry matrix of g o f (f applied first)."""
    if f.shape[0] == 0 or g.shape[1] == 0:
        return np.zeros((g.shape[0], f.shape[1], alg.dim), dtype=np.int64)
    # (g o f)[k, j] = sum_i f[i, j] * g[k, i]
    out = np.einsum("ija,kib,abc->kjc", f, g, alg.mult)
    return np.mod(out, alg.p)


def map_from_generators(m: Rep, gens) -> RepMap:
    """The map from proj_sum(verts) to m sending generator j to vector x_j."""
    alg = m.alg
    verts = tuple(v for v, _ in gens)
    P = proj_sum(alg, verts)
    comps = []
    for w in range(alg.n):
        cols = []
        for v, x in gens:
            for b in alg.between[(v, w)]:
                cols.append(el.mul(m.path_mats[b], np.asarray(x, dtype=np.int64).reshape(-1, 1), m.p))
        if cols:
            comps.append(np.concatenate(cols, axis=1))
        else:
            comps.append(np.zeros((m.dims[w], 0), dtype=np.int64))
    return RepMap(P, m, tuple(comps))


# Hom --------------------------------------------------------------------

def _hom_system(m: Rep, n: Rep):
    alg = m.alg
    sizes = [n.dims[v] * m.dims[v] for v in range(alg.n)]
    off = np.concatenate([[0], np.cumsum(sizes)]).astype(int)
    eqs = []
    for k, (_, s, t) in enumerate(alg.quiver.arrows):
        r = n.dims[t] * m.dims[s]
        if r == 0:
            continue
        block = np.zeros((r, off[-1]), dtype=np.int64)
        # N_a phi_s  (row-major vec: kron(A, I))
        if sizes[s]:
            block[:, off[s]:off[s + 1]] += np.kron(n.act[k], np.eye(m.dims[s], dtype=np.int64))
        # - phi_t M_a  (row-major vec: kron(I, B^T))
        if sizes[t]:
            block[:, off[t]:off[t + 1]] -= np.kron(np.eye(n.dims[t], dtype=np.int64), m.act[k].T)
        eqs.append(block)
    if eqs:
        sysm = np.mod(np.concatenate(eqs, axis=0), alg.p)
    else:
        sysm = np.zeros((0, off[-1]), dtype=np.int64)
    return sysm, off


def _unvec(m: Rep, n: Rep, vec: np.ndarray, off) -> RepMap:
    comps = []
    for v in range(m.alg.n):
        comps.append(vec[off[v]:off[v + 1]].reshape(n.dims[v], m.dims[v]))
    return RepMap(m, n, tuple(comps))


def hom_basis_matrix(m: Rep, n: Rep) -> tuple[np.ndarray, np.ndarray]:
    sysm, off = _hom_system(m, n)
    return el.kernel_basis(sysm, m.p), off


def hom_space(m: Rep, n: Rep) -> list[RepMap]:
    """Basis of Hom(m, n)."""
    if m.alg is not n.alg:
        raise RepError("modules over different algebras")
    basis, off = hom_basis_matrix(m, n)
    return [_unvec(m, n, basis[:, j], off) for j in range(basis.shape[1])]


def hom_dim(m: Rep, n: Rep) -> int:
    if m.dim == 0 or n.dim == 0:
        return 0
    sysm, off = _hom_system(m, n)
    return int(off[-1]) - el.rank(sysm, m.p)


# sub and quotient ---------------------------------------------------------

def _column_basis(a: np.ndarray, p: int) -> np.ndarray:
    if a.shape[1] == 0 or a.shape[0] == 0:
        return np.zeros((a.shape[0], 0), dtype=np.int64)
    return el.row_space_basis(a.T, p).T


def subrep(m: Rep, bases) -> tuple[Rep, RepMap]:
    """Subrepresentation spanned by given column bases (assumed invariant)."""
    alg = m.alg
    p = m.p
    dims = [b.shape[1] for b in bases]
    act = []
    for k, (lab, s, t) in enumerate(alg.quiver.arrows):
        img = el.mul(m.act[k], bases[s], p)
        x = el.solve_right(bases[t], img, p)
        if x is None:
            raise RepError(f"subspace is not invariant under {lab}")
        act.append(x)
    sub = Rep(alg, dims, act, check=False)
    return sub, RepMap(sub, m, tuple(bases))


def quotient_rep(m: Rep, bases) -> tuple[Rep, RepMap]:
    """Quotient by an invariant subspace given by column bases."""
    alg = m.alg
    p = m.p
    qs = []
    for v in range(alg.n):
        b = bases[v]
        if b.shape[1] == 0:
            qs.append(np.eye(m.dims[v], dtype=np.int64))
        else:
            qs.append(el.kernel_basis(b.T, p).T)
    dims = [q.shape[0] for q in qs]
    act = []
    for k, (_, s, t) in enumerate(alg.quiver.arrows):
        y = el.mul(qs[t], m.act[k], p)
        if dims[t] == 0 or dims[s] == 0:
            act.append(np.zeros((dims[t], dims[s]), dtype=np.int64))
            continue
        xt = el.solve_right(qs[s].T, y.T, p)
        if xt is None:
            raise RepError("subspace is not invariant")
        act.append(xt.T)
    quo = Rep(alg, dims, act, check=False)
    return quo, RepMap(m, quo, tuple(qs))


def kernel(f: RepMap) -> tuple[Rep, RepMap]:
    p = f.source.p
    return subrep(f.source, [el.kernel_basis(c, p) if c.shape[1] else np.zeros((0, 0), np.int64)
                             for c in f.comps])


def image(f: RepMap) -> tuple[Rep, RepMap]:
    p = f.source.p
    return subrep(f.target, [_column_basis(c, p) for c in f.comps])


def cokernel(f: RepMap) -> tuple[Rep, RepMap]:
    p = f.source.p
    return quotient_rep(f.target, [_column_basis(c, p) for c in f.comps])


def radical_bases(m: Rep) -> list[np.ndarray]:
    alg = m.alg
    out = []
    for v in range(alg.n):
        cols = [m.act[k] for k, (_, s, t) in enumerate(alg.quiver.arrows) if t == v]
        if cols:
            out.append(_column_basis(np.concatenate(cols, axis=1), m.p))
        else:
            out.append(np.zeros((m.dims[v], 0), dtype=np.int64))
    return out


def radical(m: Rep) -> tuple[Rep, RepMap]:
    return subrep(m, radical_bases(m))


def top(m: Rep) -> tuple[Rep, RepMap]:
    return quotient_rep(m, radical_bases(m))


def socle(m: Rep) -> tuple[Rep, RepMap]:
    alg = m.alg
    bases = []
    for v in range(alg.n):
        rows = [m.act[k] for k, (_, s, t) in enumerate(alg.quiver.arrows) if s == v]
        if rows and m.dims[v]:
            bases.append(el.kernel_basis(np.concatenate(rows, axis=0), m.p))
        else:
            bases.append(np.eye(m.dims[v], dtype=np.int64))
    return subrep(m, bases)


def top_generators(m: Rep) -> list[tuple[int, np.ndarray]]:
    """Vectors whose classes form a basis of top(m), vertex by vertex."""
    p = m.p
    gens = []
    rad = radical_bases(m)
    for v in range(m.alg.n):
        cur = rad[v].T.copy()
        r = el.rank(cur, p) if cur.size else 0
        for i in range(m.dims[v]):
            e = np.zeros((1, m.dims[v]), dtype=np.int64)
            e[0, i] = 1
            trial = np.concatenate([cur, e], axis=0) if cur.size else e
            r2 = el.rank(trial, p)
            if r2 > r:
                cur, r = trial, r2
                gens.append((v, e[0].copy()))
    return gens


def projective_cover(m: Rep) -> tuple[tuple[int, ...], RepMap]:
    gens = top_generators(m)
    f = map_from_generators(m, gens)
    return tuple(v for v, _ in gens), f


def is_projective(m: Rep) -> bool:
    verts, f = projective_cover(m)
    return f.source.dim == m.dim


def is_injective(m: Rep) -> bool:
    return is_projective(dual(m))


@dataclass
class ProjPres:
    """A projective presentation p1 -> p0 -> m -> 0 in path bases."""

    p1: tuple[int, ...]
    p0: tuple[int, ...]
    mat: np.ndarray  # algebra-entry matrix of d, shape (len(p0), len(p1), dim)
    d: RepMap
    cover: RepMap  # p0 -> m
    m: Rep
    syzygy: Rep
    syzygy_incl: RepMap  # syzygy -> p0
    minimal: bool = True


def min_proj_pres(m: Rep) -> ProjPres:
    alg = m.alg
    p0, cover = projective_cover(m)
    k, incl = kernel(cover)
    p1, cover1 = projective_cover(k)
    d = incl.after(cover1)
    mat = proj_matrix(alg, p1, p0, d)
    return ProjPres(p1, p0, mat, d, cover, m, k, incl, True)


def syzygy(m: Rep) -> Rep:
    p0, cover = projective_cover(m)
    return kernel(cover)[0]


@dataclass
class Ext1:
    dim: int
    cocycles: list  # RepMaps syzygy -> n
    pres: ProjPres
    target: Rep


def ext1(m: Rep, n: Rep) -> Ext1:
    """Ext^1(m, n) as Hom(syzygy m, n) modulo maps extending over p0."""
    pres = min_proj_pres(m)
    k = pres.syzygy
    p = m.p
    hb, off = hom_basis_matrix(k, n)
    if hb.shape[1] == 0:
        return Ext1(0, [], pres, n)
    P0 = pres.cover.source
    restr = []
    for g in hom_space_from_projective(pres.p0, n):
        restr.append(g.after(pres.syzygy_incl).vector())
    # coordinates of Hom(k, n) vectors are given by hb columns
    if restr:
        sub = np.mod(np.array(restr), p)
    else:
        sub = np.zeros((0, hb.shape[0]), dtype=np.int64)
    base_rank = el.rank(sub, p) if sub.shape[0] else 0
    cur = sub
    reps = []
    for j in range(hb.shape[1]):
        trial = np.concatenate([cur, hb[:, j].reshape(1, -1)], axis=0)
        r = el.rank(trial, p)
        if r > (el.rank(cur, p) if cur.shape[0] else 0):
            cur = trial
            reps.append(_unvec(k, n, hb[:, j], off))
    dim_ = hb.shape[1] - base_rank
    assert len(reps) == dim_
    del P0
    return Ext1(dim_, reps, pres, n)


def hom_space_from_projective(verts, n: Rep) -> list[RepMap]:
    """Basis of Hom(proj_sum(verts), n) via generator images."""
    out = []
    verts = tuple(verts)
    for j, v in enumerate(verts):
        for i in range(n.dims[v]):
            gens = []
            for jj, vv in enumerate(verts):
                x = np.zeros(n.dims[vv], dtype=np.int64)
                if jj == j:
                    x[i] = 1
                gens.append((vv, x))
            out.append(map_from_generators(n, gens))
    return out


def middle_term(m: Rep, n: Rep, cocycle: RepMap | None, pres: ProjPres | None = None
                ) -> tuple[Rep, RepMap, RepMap]:
    """Pushout realizing a class of Ext^1(m, n): returns (E, n -> E, E -> m)."""
    alg = m.alg
    p = m.p
    if pres is None:
        pres = min_proj_pres(m)
    k = pres.syzygy
    if cocycle is None:
        cocycle = zero_map(k, n)
    P0 = pres.cover.source
    s = direct_sum(alg, [P0, n])
    comps = []
    for v in range(alg.n):
        comps.append(np.concatenate([pres.syzygy_incl.comps[v], (-cocycle.comps[v]) % p], axis=0))
    f = RepMap(k, s, tuple(comps))
    e, q = cokernel(f)
    inj_n = RepMap(n, e, tuple(
        el.mul(q.comps[v], np.concatenate([np.zeros((P0.dims[v], n.dims[v]), np.int64),
                                          np.eye(n.dims[v], dtype=np.int64)], axis=0), p)
        for v in range(alg.n)))
    # E -> m induced by the cover on the P0 part and zero on n
    proj_m = []
    for v in range(alg.n):
        top_part = np.concatenate([pres.cover.comps[v], np.zeros((m.dims[v], n.dims[v]), np.int64)], axis=1)
        if e.dims[v] == 0:
            proj_m.append(np.zeros((m.dims[v], 0), dtype=np.int64))
            continue
        x = el.solve_right(q.comps[v].T, top_part.T, p)
        proj_m.append(x.T)
    return e, inj_n, RepMap(e, m, tuple(proj_m))


# dualities ----------------------------------------------------------------

def dual(m: Rep) -> Rep:
    """Base-field dual, a module over the opposite algebra."""
    op = m.alg.opposite()
    return Rep(op, m.dims, [a.T.copy() for a in m.act], check=False)


def dual_map(f: RepMap) -> RepMap:
    return RepMap(dual(f.target), dual(f.source), tuple(c.T.copy() for c in f.comps))


def star_matrix(alg: Algebra, mat: np.ndarray) -> np.ndarray:
    """Hom(-, algebra) applied to an algebra-entry matrix: transpose and reverse paths."""
    op = alg.opposite()
    r, c = mat.shape[0], mat.shape[1]
    out = np.zeros((c, r, op.dim), dtype=np.int64)
    for i in range(r):
        for j in range(c):
            if mat[i, j].any():
                out[j, i] = alg.to_op(mat[i, j])
    return out


def transpose(m: Rep) -> Rep:
    """Tr m: cokernel of the dualized minimal presentation, over the opposite algebra."""
    alg = m.alg
    pres = min_proj_pres(m)
    op = alg.opposite()
    smat = star_matrix(alg, pres.mat)
    f = proj_map(op, pres.p0, pres.p1, smat)
    return cokernel(f)[0]


def ar_translate(m: Rep) -> Rep:
    """tau m = D Tr m."""
    return dual(transpose(m))


def ar_translate_inv(m: Rep) -> Rep:
    """tau^- m = Tr D m."""
    return transpose(dual(m))


def nakayama_proj(alg: Algebra, verts) -> Rep:
    """nu of a sum of indecomposable projectives: the matching injectives."""
    return dual(proj_sum(alg.opposite(), tuple(verts)))


def hom_to_algebra(m: Rep) -> Rep:
    """Hom(m, algebra) as a module over the opposite algebra."""
    alg = m.alg
    op = alg.opposite()
    p = m.p
    bases = []
    for w in range(alg.n):
        hb, off = hom_basis_matrix(m, projective(alg, w))
        bases.append((hb, off))
    dims = [b[0].shape[1] for b in bases]
    act = []
    for k, (_, s, t) in enumerate(alg.quiver.arrows):
        # post-compose with P_t -> P_s given by the arrow
        mat = np.zeros((1, 1, alg.dim), dtype=np.int64)
        mat[0, 0] = alg.reduce(Path(s, t, (k,)))
        rho = proj_map(alg, (t,), (s,), mat)
        hb_t, off_t = bases[t]
        hb_s, _ = bases[s]
        cols = []
        for j in range(hb_t.shape[1]):
            g = _unvec(m, projective(alg, t), hb_t[:, j], off_t)
            cols.append(rho.after(g).vector())
        if cols and hb_s.shape[1]:
            x = el.solve_right(hb_s, np.array(cols).T, p)
            act.append(x)
        else:
            act.append(np.zeros((dims[s], dims[t]), dtype=np.int64))
    return Rep(op, dims, act, check=False)


def nakayama(m: Rep) -> Rep:
    """nu m = D Hom(m, algebra)."""
    return dual(hom_to_algebra(m))


# decomposition ------------------------------------------------------------

EXHAUSTIVE_LIMIT = 1 << 10
RANDOM_TRIALS = 128


def _mat_pow(a: np.ndarray, e: int, p: int) -> np.ndarray:
    out = np.eye(a.shape[0], dtype=np.int64)
    base = a
    while e:
        if e & 1:
            out = el.mul(out, base, p)
        base = el.mul(base, base, p)
        e >>= 1
    return out


def _combos(basis_mat: np.ndarray, p: int, rng: np.random.Generator):
    """Candidate coefficient vectors: basis, then exhaustive or random."""
    d = basis_mat.shape[1]
    for j in range(d):
        c = np.zeros(d, dtype=np.int64)
        c[j] = 1
        yield c
    if p ** d <= EXHAUSTIVE_LIMIT:
        for tup in itertools.product(range(p), repeat=d):
            if sum(1 for x in tup if x) > 1:
                yield np.array(tup, dtype=np.int64)
    else:
        for _ in range(RANDOM_TRIALS):
            yield rng.integers(0, p, size=d, dtype=np.int64)


def _find_splitter(m: Rep, rng: np.random.Generator):
    p = m.p
    hb, off = hom_basis_matrix(m, m)
    if hb.shape[1] <= 1:
        return None
    for c in _combos(hb, p, rng):
        vec = np.mod(hb @ c, p)
        phi = _unvec(m, m, vec, off)
        powers = [_mat_pow(phi.comps[v], m.dims[v], p) if m.dims[v] else phi.comps[v]
                  for v in range(m.alg.n)]
        ranks = [el.rank(x, p) if x.size else 0 for x in powers]
        if sum(ranks) == 0 or all(r == d for r, d in zip(ranks, m.dims)):
            continue
        return powers
    return None


def indecomposable_summands(m: Rep, seed: int = 0) -> list[Rep]:
    """Indecomposable summands (with repetition) via Fitting splitting."""
    rng = np.random.default_rng(seed)
    out = []
    stack = [m]
    while stack:
        x = stack.pop()
        if x.dim == 0:
            continue
        powers = _find_splitter(x, rng)
        if powers is None:
            out.append(x)
            continue
        p = x.p
        im = [_column_basis(a, p) for a in powers]
        ke = [el.kernel_basis(a, p) if a.shape[1] else np.zeros((0, 0), np.int64) for a in powers]
        stack.append(subrep(x, ke)[0])
        stack.append(subrep(x, im)[0])
    return out


def is_indecomposable(m: Rep, seed: int = 0) -> bool:
    if m.dim == 0:
        return False
    return _find_splitter(m, np.random.default_rng(seed)) is None


def fingerprint(m: Rep) -> tuple:
    """Isomorphism invariant used for canonical ordering and quick rejection."""
    return (m.dims, top(m)[0].dims, socle(m)[0].dims, hom_dim(m, m))


def decompose(m: Rep, seed: int = 0) -> list[tuple[Rep, int]]:
    """Pairwise non-isomorphic indecomposable summands with multiplicities."""
    parts = indecomposable_summands(m, seed)
    groups: list[list] = []
    for x in parts:
        fx = fingerprint(x)
        for g in groups:
            if g[1] == fx and is_isomorphic(g[0], x, seed):
                g[2] += 1
                break
        else:
            groups.append([x, fx, 1])
    groups.sort(key=lambda g: (g[1], g[0].key()))
    return [(g[0], g[2]) for g in groups]


def is_isomorphic(m: Rep, n: Rep, seed: int = 0) -> bool:
    if m.alg is not n.alg:
        raise RepError("modules over different algebras")
    if m.dims != n.dims:
        return False
    if m.dim == 0:
        return True
    p = m.p
    hb, off = hom_basis_matrix(m, n)
    d = hb.shape[1]
    if d == 0:
        return False
    if hom_dim(m, m) != d or hom_dim(n, m) != d:
        return False
    rng = np.random.default_rng(seed)

    def test(c):
        return _unvec(m, n, np.mod(hb @ c, p), off).is_iso()

    for c in _combos(hb, p, rng):
        if test(c):
            return True
    if p ** d <= EXHAUSTIVE_LIMIT:
        return False
    # deterministic fallback: compare decompositions summand by summand
    dm, dn = decompose(m, seed), decompose(n, seed)
    if len(dm) != len(dn):
        return False
    used = [False] * len(dn)
    for x, k in dm:
        for j, (y, kk) in enumerate(dn):
            if not used[j] and k == kk and x.dims == y.dims and _iso_indec(x, y, seed):
                used[j] = True
                break
        else:
            return False
    return True


def _iso_indec(x: Rep, y: Rep, seed: int) -> bool:
    # isomorphisms form the complement of a proper subspace-like set, so a
    # random search succeeds with probability at least 1 - 1/p per trial
    p = x.p
    hb, off = hom_basis_matrix(x, y)
    if hb.shape[1] == 0:
        return False
    rng = np.random.default_rng(seed + 1)
    for _ in range(4 * RANDOM_TRIALS):
        c = rng.integers(0, p, size=hb.shape[1], dtype=np.int64)
        if _unvec(x, y, np.mod(hb @ c, p), off).is_iso():
            return True
    return False


# enumeration --------------------------------------------------------------

def _radical_quotient(alg: Algebra, v: int, k: int) -> Rep:
    pv = projective(alg, v)
    bases = []
    for w in range(alg.n):
        idx = alg.between[(v, w)]
        cols = [i for i, b in enumerate(idx) if len(alg.basis[b]) >= k]
        b = np.zeros((len(idx), len(cols)), dtype=np.int64)
        for j, i in enumerate(cols):
            b[i, j] = 1
        bases.append(b)
    return quotient_rep(pv, bases)[0]


def enumerate_indecomposables(alg: Algebra, mode: str = "uniserial", bound=None,
                              cap: int = 1 << 16, seed: int = 0) -> list[Rep]:
    """Indecomposable modules, deduplicated up to isomorphism.

    ``uniserial``: all quotients P_v / rad^k P_v; complete for Nakayama
    algebras only.  ``brute``: every representation with dims <= bound;
    refuses when the number of candidate matrix tuples exceeds ``cap``.
    """
    found: list[Rep] = []
    prints: list[tuple] = []

    def add(x: Rep):
        fx = fingerprint(x)
        for y, fy in zip(found, prints):
            if fx == fy and is_isomorphic(x, y, seed):
                return
        found.append(x)
        prints.append(fx)

    if mode == "uniserial":
        for v in range(alg.n):
            maxlen = max(len(alg.basis[b]) for w in range(alg.n) for b in alg.between[(v, w)])
            for k in range(1, maxlen + 2):
                x = _radical_quotient(alg, v, k)
                if x.dim:
                    add(x)
    elif mode == "brute":
        if bound is None or len(bound) != alg.n:
            raise RepError("brute mode needs a per-vertex dimension bound")
        arrows = alg.quiver.arrows
        ranges = [range(b + 1) for b in bound]
        total = 0
        dvecs = []
        for dv in itertools.product(*ranges):
            if sum(dv) == 0:
                continue
            free = sum(dv[t] * dv[s] for _, s, t in arrows)
            total += alg.p ** free
            dvecs.append((dv, free))
        if total > cap:
            raise ResourceRefusal(f"brute enumeration needs {total} candidates (cap {cap})")
        for dv, free in dvecs:
            shapes = [(dv[t], dv[s]) for _, s, t in arrows]
            for flat in itertools.product(range(alg.p), repeat=free):
                act = []
                pos = 0
                for r, c in shapes:
                    act.append(np.array(flat[pos:pos + r * c], dtype=np.int64).reshape(r, c))
                    pos += r * c
                try:
                    x = Rep(alg, dv, act)
                except RepError:
                    continue
                if is_indecomposable(x, seed):
                    add(x)
    else:
        raise RepError(f"unknown enumeration mode {mode!r}")
    order = sorted(range(len(found)), key=lambda i: (prints[i], found[i].key()))
    return [found[i] for i in order]


class Catalog:
    """A fixed list of pairwise non-isomorphic indecomposables with names.

    Names follow the usual conventions: ``P<v>`` for an indecomposable
    projective, else ``S<v>`` or ``I<v>``, else ``M<k>``.
    """

    def __init__(self, alg: Algebra, indecs, seed: int = 0):
        self.alg = alg
        self.seed = seed
        self.indecs: list[Rep] = list(indecs)
        self.prints = [fingerprint(x) for x in self.indecs]
        self.proj_vertex: list[int | None] = []
        self.names: list[str] = []
        labels = alg.quiver.vertices
        builtins = []
        for v in range(alg.n):
            builtins.append(("P" + labels[v], projective(alg, v), v))
        for v in range(alg.n):
            builtins.append(("S" + labels[v], simple(alg, v), None))
        for v in range(alg.n):
            builtins.append(("I" + labels[v], injective(alg, v), None))
        extra = 0
        for x in self.indecs:
            for nm, b, pv in builtins:
                if b.dims == x.dims and is_isomorphic(b, x, seed):
                    self.names.append(nm)
                    self.proj_vertex.append(pv)
                    break
            else:
                extra += 1
                self.names.append(f"M{extra}")
                self.proj_vertex.append(None)
        self._cache: dict = {}

    @classmethod
    def build(cls, alg: Algebra, mode: str = "uniserial", bound=None, seed: int = 0,
              cap: int = 1 << 16) -> "Catalog":
        return cls(alg, enumerate_indecomposables(alg, mode, bound, cap=cap, seed=seed), seed)

    def __len__(self) -> int:
        return len(self.indecs)

    def find(self, m: Rep) -> int | None:
        f = fingerprint(m)
        for i, (x, fx) in enumerate(zip(self.indecs, self.prints)):
            if fx == f and is_isomorphic(x, m, self.seed):
                return i
        return None

    def index(self, m: Rep) -> int:
        i = self.find(m)
        if i is None:
            raise RepError(f"module with dims {m.dims} is not in the catalog")
        return i

    def decompose(self, m: Rep) -> tuple[int, ...]:
        """Sorted catalog indices of the indecomposable summands, with repetition."""
        key = m.key()
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        out = []
        for x in indecomposable_summands(m, self.seed):
            out.append(self.index(x))
        res = tuple(sorted(out))
        self._cache[key] = res
        return res

    def is_projective(self, i: int) -> bool:
        return self.proj_vertex[i] is not None

    def projective_index(self, v: int) -> int:
        return self.proj_vertex.index(v)

    def sum_of(self, idx) -> Rep:
        return direct_sum(self.alg, [self.indecs[i] for i in idx])

    def label(self, idx) -> str:
        idx = list(idx)
        if not idx:
            return "0"
        return "+".join(self.names[i] for i in sorted(idx))
