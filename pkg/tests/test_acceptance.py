"""Acceptance criteria 1 to 10, one pass/fail line each.

Run with ``pytest tests/test_acceptance.py`` (the lines appear in the terminal
summary) or directly with ``python tests/test_acceptance.py``.
Criteria whose literal statement does not hold are strict xfails: the check
runs in full, prints FAIL with the counterexample and is expected to fail.
"""

import itertools
import sys
import time

import numpy as np
import pytest

import conftest
import oracles
from ptilt import workbench as wb
from ptilt.icecat import (
    INCONCLUSIVE,
    ModuleWorld,
    MorphismWorld,
    _injective_map,
    cok_equals_fac_check,
    complete_from_right_exact,
    random_short_exact,
    six_term_sequence,
    syzygy2_right_exact,
    theorem_c_bijection,
    theorem_d_check,
    theorem_e_check,
    witnesses,
)
from ptilt.morcat import ext1_p_dim, theorem_a_check, theorem_b_check
from ptilt.repmod import Catalog, ar_translate, ar_translate_inv, is_isomorphic
from ptilt.taucore import (
    duality_check,
    enumerate_support_tau_tilting,
    enumerate_tau_rigid_pairs,
    is_support_tau_tilting,
)

CORPUS = conftest.CORPUS


def record(n, ok: bool, detail: str):
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'} {detail}"
    conftest.ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def _timed(fn):
    t = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t


@pytest.mark.xfail(strict=True, reason="the example has 15 tau-rigid modules; the published table lists 14")
def test_criterion_1_table(ex1):
    rep, secs = _timed(lambda: wb.cmd_table1(ex1))
    ok = rep.status == "pass" and len(rep.rows) == 14 and secs < 10
    detail = "; ".join(" ".join(map(str, f)) for f in rep.failures)
    assert record(1, ok, f"{len(rep.rows)} rows in {secs:.2f}s {detail}".strip())


def test_criterion_2_min_cok(sessions):
    msgs, ok, total = [], True, 0.0
    for name in CORPUS:
        rep, secs = _timed(lambda: theorem_a_check(sessions[name].pcat))
        total += secs
        ok = ok and rep.ok
        msgs.append(f"{name} {rep.left}={rep.right}")
    ok = ok and total < 60
    assert record(2, ok, ", ".join(msgs) + f" in {total:.1f}s")


def test_criterion_3_silting(sessions):
    msgs, ok, total = [], True, 0.0
    for name in CORPUS:
        rep, secs = _timed(lambda: theorem_b_check(sessions[name].pcat, samples=200, seed=0))
        total += secs
        ok = ok and rep.ok
        msgs.append(f"{name} {rep.left}={rep.right}")
    ok = ok and total < 60
    assert record(3, ok, ", ".join(msgs) + f", 200 samples each in {total:.1f}s")


def test_criterion_4_ext_oracle(sessions):
    t = time.perf_counter()
    bad, pairs = [], 0
    for name in ("A2", "EX1"):
        pcat = sessions[name].pcat
        for i, j in itertools.product(range(len(pcat)), repeat=2):
            x, y = pcat.objs[i], pcat.objs[j]
            pairs += 1
            if ext1_p_dim(x, y) != oracles.log_p(oracles.yoneda_ext_count(x, y), 2):
                bad.append((name, pcat.name(i), pcat.name(j)))
    secs = time.perf_counter() - t
    assert record(4, not bad and secs < 30, f"{pairs} ordered pairs, {len(bad)} mismatches in {secs:.2f}s")


def test_criterion_5_translate(ex1, sessions):
    cat = ex1.catalog
    by = {n: cat.indecs[cat.names.index(n)] for n in ("S2", "S3", "P1")}
    ok = is_isomorphic(ar_translate(by["S2"]), by["P1"]) and is_isomorphic(ar_translate(by["S3"]), by["S2"])
    checked = 0
    for s in sessions.values():
        c = s.catalog
        for i in range(len(c)):
            if c.is_projective(i):
                continue
            checked += 1
            ok = ok and is_isomorphic(ar_translate_inv(ar_translate(c.indecs[i])), c.indecs[i])
    assert record(5, ok, f"tau S2 = P1, tau S3 = S2, inverse round trip on {checked} modules")


def test_criterion_6_second_syzygy(sessions):
    t = time.perf_counter()
    bad = []
    for name in ("EX1", "A3"):
        cat = sessions[name].catalog
        rng = np.random.default_rng(2024)
        for k in range(100):
            lam = random_short_exact(cat, rng)
            rep = syzygy2_right_exact(lam, cat)
            if not (lam.check() and rep.q0 == () and rep.left_exact_witness and rep.components_ok):
                bad.append((name, k))
    secs = time.perf_counter() - t
    assert record(6, not bad and secs < 120, f"200 sequences, {len(bad)} failures in {secs:.1f}s")


def test_criterion_7_ice_bijections(sessions):
    t = time.perf_counter()
    msgs, ok = [], True
    for name in CORPUS:
        s = sessions[name]
        world = MorphismWorld(s.pcat)
        mworld = ModuleWorld(s.catalog)
        reps = [theorem_c_bijection(world), theorem_d_check(world, s.catalog), theorem_e_check(world, mworld)]
        ok = ok and all(r.ok for r in reps)
        msgs.append(name + " " + " ".join(f"{r.name}:{r.left}={r.right}" for r in reps))
    secs = time.perf_counter() - t
    assert record(7, ok and secs < 600, "; ".join(msgs) + f" in {secs:.1f}s")


def test_criterion_8a_cok_is_fac(sessions):
    n = 0
    bad = []
    for name in CORPUS:
        mworld = ModuleWorld(sessions[name].catalog)
        for pr in enumerate_support_tau_tilting(sessions[name].catalog):
            n += 1
            if not cok_equals_fac_check(pr, mworld):
                bad.append((name, pr.label()))
    assert record("8a", not bad, f"Cok M = Fac M on {n} support tau-tilting pairs, {len(bad)} failures")


@pytest.mark.xfail(strict=True, reason="the sequence has the stated shape only when the projective part is zero")
def test_criterion_8b_six_term(sessions):
    n, bad = 0, []
    for name in CORPUS:
        for pr in enumerate_support_tau_tilting(sessions[name].catalog):
            n += 1
            seq = six_term_sequence(pr, form="stated")
            if seq is INCONCLUSIVE or not seq.ok:
                bad.append(f"{name}:{pr.label()}")
    assert record("8b", not bad, f"{n - len(bad)}/{n} pairs; first failures {', '.join(bad[:3])}")


@pytest.mark.xfail(strict=True, reason="a witness with non-injective first map need not lead to a completion")
def test_criterion_8c_completion(sessions):
    n, bad = 0, []
    for name in CORPUS:
        for pr in enumerate_tau_rigid_pairs(sessions[name].catalog):
            for w in witnesses(pr):
                n += 1
                out = complete_from_right_exact(pr, w)
                if not (is_support_tau_tilting(out) and out.m == pr.m):
                    bad.append(f"{name}:{pr.label()}")
    assert record("8c", not bad, f"{n - len(bad)}/{n} witnesses; e.g. {', '.join(sorted(set(bad))[:3])}")


def test_criterion_8_supplement(sessions):
    n, bad = 0, []
    for name in CORPUS:
        cat = sessions[name].catalog
        for pr in enumerate_support_tau_tilting(cat):
            seq = six_term_sequence(pr, form="unpulled")
            if seq is INCONCLUSIVE or not seq.ok:
                bad.append(pr.label())
        for pr in enumerate_tau_rigid_pairs(cat):
            for w in witnesses(pr):
                if not _injective_map(w.f):
                    continue
                n += 1
                out = complete_from_right_exact(pr, w)
                if not (is_support_tau_tilting(out) and out.m == pr.m):
                    bad.append(pr.label())
    assert record("8+", not bad, f"unpulled six-term form on all pairs, {n} injective witnesses complete")


def test_criterion_9_duality(sessions):
    msgs, ok = [], True
    for name in CORPUS:
        cat = sessions[name].catalog
        left, right, failures = duality_check(cat, Catalog.build(cat.alg.opposite()))
        ok = ok and left == right and not failures
        msgs.append(f"{name} {left}={right}")
    assert record(9, ok, ", ".join(msgs))


def test_criterion_10_oracle_counts(sessions):
    got = {
        "k": (len(enumerate_support_tau_tilting(sessions["k"].catalog)),
              len(oracles.stt_pairs(oracles.Quiver(1, []), (1,)))),
        "A2": (len(enumerate_support_tau_tilting(sessions["A2"].catalog)),
               len(oracles.stt_pairs(oracles.Quiver(2, [(1, 0)]), (1, 1)))),
    }
    ok = got == {"k": (2, 2), "A2": (5, 5)}
    assert record(10, ok, ", ".join(f"{k} enumerator {a} oracle {b}" for k, (a, b) in got.items()))


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
