import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import oracles
from ptilt.morcat import (
    MorError,
    PCatalog,
    PObj,
    almost_split_at_type_c,
    bongartz_complete,
    cok_map,
    direct_sum_p,
    enumerate_silting,
    enumerate_tilting,
    ext1_p_dim,
    hom_p_dim,
    min_map,
    random_basic_pobj,
    rigid_check,
    star_dual,
    tau_p,
    theorem_a_check,
    theorem_b_check,
    tilting_check,
    type_split,
    u_map,
    v_map,
)
from ptilt.repmod import Catalog
from ptilt.taucore import enumerate_support_tau_tilting


def _pcat(session):
    return PCatalog.of(session.catalog)


@pytest.mark.parametrize("name", ["A2", "EX1"])
def test_ext_matches_brute_force_class_count(sessions, name):
    pcat = _pcat(sessions[name])
    p = pcat.alg.p
    for x, y in itertools.product(pcat.objs, repeat=2):
        assert ext1_p_dim(x, y) == oracles.log_p(oracles.yoneda_ext_count(x, y), p)


def test_ext_on_small_sums_matches_brute_force(a2):
    pcat = _pcat(a2)
    objs = pcat.objs
    for i, j in [(0, 5), (2, 4), (5, 6)]:
        x = direct_sum_p(pcat.alg, [objs[i], objs[j]])
        for y in (objs[0], objs[6]):
            assert ext1_p_dim(x, y) == oracles.log_p(oracles.yoneda_ext_count(x, y), pcat.alg.p)


def test_catalog_sizes(sessions):
    # 3n objects of types a, b, c plus one X[M] per non-projective indecomposable
    expect = {"k": 3, "A2": 7, "EX1": 11, "A3": 12}
    for name, n in expect.items():
        assert len(_pcat(sessions[name])) == n


def test_entry_outside_the_path_space_is_rejected(a2):
    alg = a2.algebra
    mat = np.zeros((1, 1, alg.dim), dtype=np.int64)
    mat[0, 0] = alg.idempotent(0)
    with pytest.raises(MorError):
        PObj(alg, (0,), (1,), mat)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_decompose_recovers_disguised_sums(ex1, seed):
    pcat = _pcat(ex1)
    x, idx = random_basic_pobj(pcat, np.random.default_rng(seed))
    assert pcat.decompose(x) == idx


def test_type_split_parts(ex1):
    pcat = _pcat(ex1)
    idx = (pcat.pos[("a", 0)], pcat.pos[("b", 1)], pcat.pos[("c", 2)], len(pcat) - 1)
    ts = type_split(pcat.sum_of(idx), pcat)
    assert [len(ts.parts[k]) for k in "mabc"] == [1, 1, 1, 1]
    assert ts.mb.dom == ts.mb.cod == (1,)


@pytest.mark.parametrize("name", ["k", "A2", "EX1"])
def test_cok_inverts_min(sessions, name):
    cat = sessions[name].catalog
    for pr in enumerate_support_tau_tilting(cat):
        assert cok_map(min_map(pr), cat) == pr


@pytest.mark.parametrize("name,count", [("k", 2), ("A2", 5), ("EX1", 12), ("A3", 14)])
def test_tilting_and_support_tau_tilting_counts_agree(sessions, name, count):
    rep = theorem_a_check(_pcat(sessions[name]))
    assert (rep.left, rep.right) == (count, count)
    assert rep.failures == []


@pytest.mark.parametrize("name,count", [("k", 2), ("A2", 5), ("EX1", 12)])
def test_silting_and_tilting_correspond(sessions, name, count):
    rep = theorem_b_check(_pcat(sessions[name]), samples=60, seed=1)
    assert (rep.left, rep.right) == (count, count)
    assert rep.failures == []


def test_u_and_v_reject_wrong_inputs(a2):
    pcat = _pcat(a2)
    tilt = pcat.sum_of(enumerate_tilting(pcat)[0])
    sil = pcat.sum_of(enumerate_silting(pcat)[0])
    with pytest.raises(MorError):
        v_map(sil, pcat)
    with pytest.raises(MorError):
        u_map(pcat.objs[0], pcat)
    # a tilting object is silting once its (P=P) summands are stripped
    assert pcat.decompose(u_map(tilt, pcat)) == pcat.decompose(tilt)
    assert tilting_check(u_map(sil, pcat), pcat)


def test_tilting_check_requires_basic(a2):
    pcat = _pcat(a2)
    b = pcat.objs[pcat.pos[("b", 0)]]
    with pytest.raises(MorError):
        tilting_check(direct_sum_p(pcat.alg, [b, b]), pcat)


def test_bongartz_completion_is_tilting(ex1):
    pcat = _pcat(ex1)
    tilts = set(enumerate_tilting(pcat))
    for k in range(len(pcat)):
        x = pcat.objs[k]
        if not rigid_check(x):
            continue
        y = bongartz_complete(x, pcat)
        assert pcat.decompose(y) in tilts
        assert k in pcat.decompose(y)


def test_star_dual_is_involutive(sessions):
    for s in sessions.values():
        for x in _pcat(s).objs:
            back = star_dual(star_dual(x))
            assert back.key() == x.key()


def test_star_dual_swaps_types_a_and_c(a2):
    pcat = _pcat(a2)
    op = PCatalog.of(Catalog.build(a2.algebra.opposite()))
    for v in range(pcat.alg.n):
        d = star_dual(pcat.objs[pcat.pos[("a", v)]])
        assert op.decompose(d) == (op.pos[("c", v)],)


def test_translate_of_type_c_and_of_simples(ex1):
    pcat = _pcat(ex1)
    cat = ex1.catalog
    s2 = pcat.pos[("m", cat.names.index("S2"))]
    s3 = pcat.pos[("m", cat.names.index("S3"))]
    assert pcat.decompose(tau_p(pcat.objs[s2], pcat)) == (pcat.pos[("a", 0)],)
    assert pcat.decompose(tau_p(pcat.objs[s3], pcat)) == (s2,)
    with pytest.raises(MorError):
        tau_p(pcat.objs[pcat.pos[("a", 0)]], pcat)


@pytest.mark.parametrize("name", ["A2", "EX1", "A3"])
def test_almost_split_sequences_do_not_split(sessions, name):
    pcat = _pcat(sessions[name])
    for v in range(pcat.alg.n):
        c = almost_split_at_type_c(v, pcat)
        assert c.middle.dom == c.first.dom + c.last.dom
        split = tuple(sorted(pcat.decompose(c.first) + pcat.decompose(c.last)))
        assert pcat.decompose(c.middle) != split
        assert pcat.decompose(c.first) == pcat.decompose(tau_p(c.last, pcat))


def test_hom_between_type_b_objects(a2):
    pcat = _pcat(a2)
    b0, b1 = (pcat.objs[pcat.pos[("b", v)]] for v in (0, 1))
    assert hom_p_dim(b0, b0) == hom_p_dim(b1, b1) == 1
    assert sorted([hom_p_dim(b1, b0), hom_p_dim(b0, b1)]) == [0, 1]
