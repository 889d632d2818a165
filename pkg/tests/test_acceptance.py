"""
Acceptance suite: one test per criterion, each printing a PASS/FAIL line
(run with `pytest tests/test_acceptance.py -v -s` to see them).

Criterion 7 needs the full 78-letter GL15 word, which only exists as a
hand transcription of a string diagram; the test looks for it (see
_find_gl15_transcription) and skips with an explanation when absent.
"""
import itertools
import json
import os
import random
import time
from fractions import Fraction
from pathlib import Path

import pytest

from heckekit import cli, coxeter, demazure, hecke, spherical, subexpr, worddata
from heckekit.laurent import ONE, LaurentPoly, v_power

S4_SUBSETS = [frozenset(c) for r in range(4)
              for c in itertools.combinations((1, 2, 3), r)]


def _report(num, ok, detail=""):
    tag = "PASS" if ok else "FAIL"
    print(f"{tag} criterion {num}: {detail}")
    assert ok, f"criterion {num}: {detail}"


# ---------------------------------------------------------------------------
# 1. Intersection-form vector, exact

PUBLISHED_VECTOR = [-2, -2, 0, -2, -2, 0, -2, -2, -2, 2, 0, 0]


def test_criterion_1_intersection_form_vector(capsys):
    t0 = time.perf_counter()
    code = cli.main(["intersection-form", "--expr", "paper-GL15",
                     "--p", "2"])
    out = capsys.readouterr().out
    payload = json.loads(out)
    elapsed = time.perf_counter() - t0
    with capsys.disabled():
        assert code == 0
        assert payload["rank_over_Q"] == 1
        assert payload["rank_over_p"] == 0
        assert elapsed < 1.0, f"took {elapsed:.2f}s, expected < 1s"
        # The published 12-tuple.  The shipped expression (whose erase-4
        # value -2 matches the published worked example) evaluates to
        # (-2,-2,0,-2,-2,0,-2,-2,0,-2,0,0): positions 9 and 10 differ from
        # the published tuple as a multiset, so no erasure numbering can
        # reconcile them.  Both vectors have rank 1 over Q, rank 0 over F_2.
        _report(1, payload["entries"] == PUBLISHED_VECTOR,
                f"erasure vector {payload['entries']} == published "
                f"{PUBLISHED_VECTOR}, ranks (Q, F2) = "
                f"({payload['rank_over_Q']}, {payload['rank_over_p']})")


# ---------------------------------------------------------------------------
# 2. Degree vanishing

def test_criterion_2_degree_vanishing():
    t0 = time.perf_counter()
    value = demazure.eval_expr(demazure.builtin_expr("paper-GL15"))
    elapsed = time.perf_counter() - t0
    assert elapsed < 1.0, f"took {elapsed:.2f}s, expected < 1s"
    _report(2, not value,
            f"full 12-operator evaluation is the zero polynomial "
            f"({elapsed:.3f}s)")


# ---------------------------------------------------------------------------
# 3. Deodhar oracle (exhaustive, words of length <= 8 over S_4, all A)

def test_criterion_3_deodhar_oracle_exhaustive():
    t0 = time.perf_counter()
    checked = 0
    for m in range(0, 9):
        for word in itertools.product((1, 2, 3), repeat=m):
            for A in S4_SUBSETS:
                exp = spherical.deodhar_expand(word, 4, A)
                bs = spherical.bott_samelson_spherical(word, 4, A)
                assert exp == bs, (word, sorted(A))
                checked += 1
    elapsed = time.perf_counter() - t0
    _report(3, True,
            f"deodhar_expand == bott_samelson_spherical on {checked} "
            f"(word, A) instances, every word of length <= 8 over S_4 "
            f"({elapsed:.1f}s)")


# ---------------------------------------------------------------------------
# 4. KL cross-checks on S_4

def test_criterion_4_kl_cross_checks():
    t0 = time.perf_counter()
    checked = 0
    for x in coxeter.all_permutations(4):
        b = hecke.kl_basis(x)
        assert hecke.bar_involution(b) == b, x
        assert b.coefficient(x) == ONE
        for y, c in b.coeffs.items():
            if y != x:
                assert c.is_nonnegative_powers() and c.coefficient(0) == 0
        checked += 1
    for A in S4_SUBSETS:
        wA = coxeter.longest_element(A, 4)
        for x in coxeter.min_coset_reps(A, 4):
            cx = spherical.spherical_kl_basis(x, A)
            bxwA = hecke.kl_basis(coxeter.multiply(x, wA))
            assert spherical.phi_embed(cx) == bxwA, (sorted(A), x)
            for y in coxeter.min_coset_reps(A, 4):
                assert cx.coefficient(y) == \
                    bxwA.coefficient(coxeter.multiply(y, wA)), (A, x, y)
            checked += 1
    elapsed = time.perf_counter() - t0
    _report(4, True,
            f"bar-invariance, degree bounds, phi(c_x) = b_(x wA) and "
            f"gamma = beta on {checked} instances over S_4 ({elapsed:.1f}s)")


# ---------------------------------------------------------------------------
# 5. Pairing axioms

def _rand_hecke(rng, n, perms):
    el = hecke.HeckeElement.zero(n)
    for _ in range(3):
        el = el + hecke.h(rng.choice(perms)).scale(
            LaurentPoly({rng.randrange(-2, 3): rng.randrange(-3, 4)}))
    return el


def test_criterion_5_pairing_axioms():
    t0 = time.perf_counter()
    # exhaustive on standard-basis pairs in S_3
    perms3 = list(coxeter.all_permutations(3))
    p = LaurentPoly({-2: 3, 1: -1})
    q = LaurentPoly({0: 2, 3: 1})
    for x, y in itertools.product(perms3, perms3):
        hx, hy = hecke.h(x), hecke.h(y)
        base = hecke.pairing(hx, hy)
        assert hecke.pairing(hx.scale(p), hy.scale(q)) == p.bar() * q * base
        for i in (1, 2):
            assert hecke.pairing(hecke.mult_by_gen(hx, i, "left", "b"), hy) \
                == hecke.pairing(hx, hecke.mult_by_gen(hy, i, "left", "b"))
            assert hecke.pairing(hecke.mult_by_gen(hx, i, "right", "b"), hy) \
                == hecke.pairing(hx, hecke.mult_by_gen(hy, i, "right", "b"))
    # exhaustive spherical standard-basis pairs in S_3, every A
    for A in [frozenset(c) for r in range(3)
              for c in itertools.combinations((1, 2), r)]:
        reps = list(coxeter.min_coset_reps(A, 3))
        for x, y in itertools.product(reps, reps):
            mx, my = spherical.m(x, A), spherical.m(y, A)
            base = spherical.spherical_pairing(mx, my)  # exact division
            assert spherical.spherical_pairing(mx.scale(p), my.scale(q)) == \
                p.bar() * q * base
            for i in (1, 2):
                assert spherical.spherical_pairing(
                    spherical.act_by_gen(i, mx), my) == \
                    spherical.spherical_pairing(
                        mx, spherical.act_by_gen(i, my))
    # 1000 random pairs in S_4
    rng = random.Random(20240817)
    perms4 = list(coxeter.all_permutations(4))
    reps4 = {A: list(coxeter.min_coset_reps(A, 4)) for A in S4_SUBSETS}
    pairs = 0
    while pairs < 1000:
        a = _rand_hecke(rng, 4, perms4)
        b = _rand_hecke(rng, 4, perms4)
        pp = LaurentPoly({rng.randrange(-2, 3): rng.randrange(1, 4)})
        base = hecke.pairing(a, b)
        assert hecke.pairing(a.scale(pp), b) == pp.bar() * base
        assert hecke.pairing(a, b.scale(pp)) == pp * base
        i = rng.randrange(1, 4)
        assert hecke.pairing(hecke.mult_by_gen(a, i, "left", "b"), b) == \
            hecke.pairing(a, hecke.mult_by_gen(b, i, "left", "b"))
        assert hecke.pairing(hecke.mult_by_gen(a, i, "right", "b"), b) == \
            hecke.pairing(a, hecke.mult_by_gen(b, i, "right", "b"))
        A = rng.choice(S4_SUBSETS)
        xs = reps4[A]
        ma = spherical.m(rng.choice(xs), A).scale(pp) + \
            spherical.m(rng.choice(xs), A)
        mb = spherical.m(rng.choice(xs), A)
        sbase = spherical.spherical_pairing(ma, mb)  # raises if inexact
        assert spherical.spherical_pairing(ma.scale(pp), mb) == \
            pp.bar() * sbase
        assert spherical.spherical_pairing(
            spherical.act_by_gen(i, ma), mb) == \
            spherical.spherical_pairing(ma, spherical.act_by_gen(i, mb))
        pairs += 1
    elapsed = time.perf_counter() - t0
    _report(5, True,
            f"pairing axioms exhaustive on S_3 and on {pairs} random "
            f"S_4 pairs, with exact spherical divisibility ({elapsed:.1f}s)")


# ---------------------------------------------------------------------------
# 6. Pruning soundness

def _random_pruning_instance(rng):
    """A (word, A, B) instance shaped like the certificate run: A and B
    disjoint (so w_B is a minimal representative) and the word carrying
    exactly len(w_B) letters from B, which is what forces every
    interval-relevant subexpression to pick all of them."""
    n = rng.choice((4, 5))
    gens = list(range(1, n))
    while True:
        B = frozenset(g for g in gens if rng.random() < 0.4)
        A = frozenset(g for g in gens if g not in B and rng.random() < 0.5)
        lb = coxeter.length(coxeter.longest_element(B, n))
        m = rng.randrange(max(2, lb), 13)
        if m < lb:
            continue
        b_letters = sorted(B)
        word = []
        quota = lb
        for k in range(m):
            remaining = m - k
            if remaining == quota:
                word.append(rng.choice(b_letters))
                quota -= 1
            elif quota and rng.random() < quota / remaining:
                word.append(rng.choice(b_letters))
                quota -= 1
            else:
                word.append(rng.choice([g for g in gens if g not in B]
                                       or gens))
        word = tuple(word)
        if sum(1 for t in word if t in B) != lb:
            continue
        return n, word, A, B


def test_criterion_6_pruning_soundness():
    t0 = time.perf_counter()
    rng = random.Random(6174)
    instances = 0
    while instances < 120:
        n, word, A, B = _random_pruning_instance(rng)
        wB = coxeter.longest_element(B, n)
        assert coxeter.is_min_coset_rep(wB, A)
        x = wB
        w = coxeter.min_coset_rep(coxeter.evaluate_word(word, n), A)
        constraint = subexpr.EnumConstraint.forced_letters(word, B)
        constrained = spherical.deodhar_expand(word, n, A, constraint)
        full = spherical.deodhar_expand(word, n, A)
        rx = coxeter.rank_table(x)
        rw = coxeter.rank_table(w)
        cosets = set(constrained.coeffs) | set(full.coeffs)
        for z in cosets:
            rz = coxeter.rank_table(z)
            if coxeter.rank_table_dominates(rx, rz) and \
                    coxeter.rank_table_dominates(rz, rw):
                assert constrained.coefficient(z) == full.coefficient(z), \
                    (n, word, sorted(A), sorted(B), z)
        instances += 1
    elapsed = time.perf_counter() - t0
    _report(6, True,
            f"constrained == unconstrained on every interval coefficient "
            f"for {instances} randomized (word, A, B) instances in S_4/S_5 "
            f"({elapsed:.1f}s)")


# ---------------------------------------------------------------------------
# 7. Full certificate (conditional on the word transcription)

def _find_gl15_transcription():
    env = os.environ.get("HECKEKIT_GL15_WORD")
    candidates = [env] if env else []
    here = Path(__file__).resolve().parent.parent
    candidates += [here / "data" / "gl15_word.json",
                   here / "gl15_word.json"]
    for c in candidates:
        if c and Path(c).exists():
            return Path(c)
    return None


def test_criterion_7_full_certificate(capsys):
    path = _find_gl15_transcription()
    if path is None:
        with capsys.disabled():
            print("SKIP criterion 7: the 78-letter word exists only as a "
                  "string diagram; provide a transcription via "
                  "HECKEKIT_GL15_WORD or data/gl15_word.json")
        pytest.skip("no GL15 word transcription available")
    wd = worddata.load_word_data(path)
    # splice in the documented census/prefix so the transcription is
    # checked against everything that is known about the word
    partial = worddata.load_word_data("gl15-partial")
    wd.census = wd.census or partial.census
    wd.word_prefix = wd.word_prefix or partial.word_prefix
    report = worddata.validate_word_data(wd)
    assert report.ok and report.complete, report.to_json_dict()
    threads = max(1, int(os.environ.get(cli.THREADS_ENV, "8")))
    t0 = time.perf_counter()
    code = cli.main(["certify", "--word", str(path), "--p", "2",
                     "--threads", str(threads)])
    out = capsys.readouterr().out
    elapsed = time.perf_counter() - t0
    payload = json.loads(out)
    with capsys.disabled():
        assert payload["histogram_at_x"].get("-1") == 1, \
            "exactly one defect -1 subexpression at x"
        assert payload["histogram_at_x"].get("1") == 12, \
            "exactly twelve defect +1 subexpressions at x"
        assert payload["word"]["subexpressions"] == 2 ** 23
        assert payload["interval"]["status"] == "ok"
        assert payload["verdict"] is True and code == 0
        _report(7, True,
                f"full certificate verified in {elapsed:.0f}s at "
                f"{threads} threads (target 120s)")


# ---------------------------------------------------------------------------
# 8. Determinism

def test_criterion_8_determinism(capsys):
    t0 = time.perf_counter()
    jobs = [
        ["certify", "--word", "demo-s4-fail"],
        ["certify", "--word", "demo-s4-pass"],
        ["defect-stats", "--n", "5", "--parabolic", "2 4",
         "--word", "1 2 3 4 3 2 1 2 3 4", "--forced-letters", "4"],
        ["deodhar", "--n", "5", "--parabolic", "1 2",
         "--word", "4 3 2 1 2 3 4 3"],
    ]
    for argv in jobs:
        outs = []
        for threads in ("1", "8"):
            cli.main(argv + ["--threads", threads])
            payload = json.loads(capsys.readouterr().out)
            if isinstance(payload, dict):
                payload.pop("timings", None)
            outs.append(json.dumps(payload, sort_keys=True,
                                   separators=(",", ":")).encode())
        assert outs[0] == outs[1], argv
    elapsed = time.perf_counter() - t0
    _report(8, True,
            f"--threads 1 and --threads 8 byte-identical (modulo timings) "
            f"on {len(jobs)} commands ({elapsed:.1f}s)")
