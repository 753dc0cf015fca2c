"""tau-rigid pairs and support tau-tilting pairs."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .algebra import Algebra
from .repmod import (
    Catalog,
    Rep,
    RepError,
    ar_translate,
    hom_dim,
    is_isomorphic,
    nakayama_proj,
    proj_sum,
)

__all__ = [
    "TauPair",
    "is_tau_rigid",
    "is_tau_rigid_pair",
    "is_support_tau_tilting",
    "hom_p_nu_duality_check",
    "tau_table",
    "enumerate_tau_rigid_pairs",
    "enumerate_support_tau_tilting",
    "dagger",
]


@dataclass(frozen=True)
class TauPair:
    """A pair (M, P): M given by catalog indices of its summands, P by vertices.

    Both tuples are sorted; basicness means neither has repeats.
    """

    catalog: Catalog
    m: tuple[int, ...]
    p: tuple[int, ...]

    @property
    def alg(self) -> Algebra:
        return self.catalog.alg

    def module(self) -> Rep:
        return self.catalog.sum_of(self.m)

    def projective(self) -> Rep:
        return proj_sum(self.alg, self.p)

    def is_basic(self) -> bool:
        return len(set(self.m)) == len(self.m) and len(set(self.p)) == len(self.p)

    def key(self) -> tuple:
        return (self.m, self.p)

    def label(self) -> str:
        verts = self.alg.quiver.vertices
        pp = "+".join("P" + verts[v] for v in self.p) or "0"
        return f"({self.catalog.label(self.m)}, {pp})"

    def __eq__(self, other) -> bool:
        return isinstance(other, TauPair) and self.catalog is other.catalog and self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())


def make_pair(catalog: Catalog, m, p) -> TauPair:
    return TauPair(catalog, tuple(sorted(m)), tuple(sorted(p)))


def is_tau_rigid(m: Rep) -> bool:
    if m.dim == 0:
        return True
    return hom_dim(m, ar_translate(m)) == 0


def is_tau_rigid_pair(m: Rep, pverts) -> bool:
    return is_tau_rigid(m) and hom_dim(proj_sum(m.alg, pverts), m) == 0


def is_support_tau_tilting(pair: TauPair) -> bool:
    if not pair.is_basic():
        raise RepError("support tau-tilting check needs basic data")
    m = pair.module()
    return is_tau_rigid_pair(m, pair.p) and len(pair.m) + len(pair.p) == pair.alg.n


def hom_p_nu_duality_check(m: Rep, pverts) -> tuple[bool, bool]:
    """(Hom(P, M) = 0, Hom(M, nu P) = 0); the two flags always agree."""
    pverts = tuple(pverts)
    if m.dim == 0 or not pverts:
        return True, True
    a = hom_dim(proj_sum(m.alg, pverts), m) == 0
    b = hom_dim(m, nakayama_proj(m.alg, pverts)) == 0
    return a, b


def tau_table(catalog: Catalog) -> list[list[int]]:
    """dim Hom(X_i, tau X_j) for all catalog members."""
    taus = [ar_translate(x) for x in catalog.indecs]
    return [[hom_dim(x, t) if t.dim else 0 for t in taus] for x in catalog.indecs]


def enumerate_tau_rigid_pairs(catalog: Catalog, table=None) -> list[TauPair]:
    """All basic tau-rigid pairs built from catalog members, canonically sorted."""
    alg = catalog.alg
    if table is None:
        table = tau_table(catalog)
    k = len(catalog)
    out = []
    for size in range(k + 1):
        for sub in itertools.combinations(range(k), size):
            if any(table[i][j] for i in sub for j in sub):
                continue
            support = {v for i in sub for v in range(alg.n) if catalog.indecs[i].dims[v]}
            free = [v for v in range(alg.n) if v not in support]
            for r in range(len(free) + 1):
                for ps in itertools.combinations(free, r):
                    out.append(make_pair(catalog, sub, ps))
    out.sort(key=lambda t: (len(t.m) + len(t.p), t.m, t.p))
    return out


def enumerate_support_tau_tilting(catalog: Catalog, table=None) -> list[TauPair]:
    n = catalog.alg.n
    return [t for t in enumerate_tau_rigid_pairs(catalog, table) if len(t.m) + len(t.p) == n]


def dagger(pair: TauPair, op_catalog: Catalog) -> TauPair:
    """Cok o star o Min: a support tau-tilting pair over the opposite algebra."""
    from . import morcat

    x = morcat.min_map(pair)
    y = morcat.star_dual(x)
    return morcat.cok_map(y, op_catalog)


def same_pair_up_to_iso(a: TauPair, b: TauPair) -> bool:
    if a.p != b.p or len(a.m) != len(b.m):
        return False
    return is_isomorphic(a.module(), b.module())



def duality_check(catalog: Catalog, op_catalog: Catalog) -> tuple[int, int, list]:
    """Counts on both sides and failures of dagger as an involutive bijection.

    Also checks that the two Hom-vanishing formulations of tau-rigidity agree
    on every enumerated pair.
    """
    left = enumerate_support_tau_tilting(catalog)
    right = enumerate_support_tau_tilting(op_catalog)
    failures = []
    images = []
    for pr in left:
        d = dagger(pr, op_catalog)
        images.append(d)
        if not is_support_tau_tilting(d):
            failures.append(("dagger image not support tau-tilting", pr.label(), d.label()))
        if dagger(d, catalog) != pr:
            failures.append(("dagger not involutive", pr.label()))
    if sorted(set(images), key=_pair_order) != sorted(right, key=_pair_order):
        failures.append(("dagger is not onto the opposite enumeration",))
    for pr in enumerate_tau_rigid_pairs(catalog):
        a, b = hom_p_nu_duality_check(pr.module(), pr.p)
        if a != b:
            failures.append(("Hom(P, M) and Hom(M, nu P) vanish differently", pr.label()))
    return len(left), len(right), failures


def _pair_order(t: TauPair) -> tuple:
    return (t.m, t.p)
