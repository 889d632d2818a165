import itertools
import random

import pytest

from heckekit import coxeter, hecke, spherical
from heckekit.coxeter import evaluate_word, identity, length, min_coset_reps
from heckekit.hecke import kl_basis, mult_by_gen
from heckekit.laurent import ONE, V, InexactDivision, LaurentPoly, v_power
from heckekit.spherical import (
    SphericalElement,
    act_by_gen,
    bott_samelson_spherical,
    deodhar_expand,
    interval_condition_check,
    is_perverse_spherical,
    m,
    m_id,
    phi_embed,
    pi_tilde,
    spherical_kl_basis,
    spherical_pairing,
)
from heckekit.subexpr import EnumConstraint


def all_subsets(n):
    gens = tuple(range(1, n))
    for r in range(n):
        yield from map(frozenset, itertools.combinations(gens, r))


V_PLUS_VINV = LaurentPoly({1: 1, -1: 1})


def test_act_examples():
    assert act_by_gen(2, m_id(3, {2})) == m_id(3, {2}).scale(V_PLUS_VINV)
    got = act_by_gen(1, m_id(3, {2}))
    s1 = evaluate_word((1,), 3)
    assert got == m(s1, {2}) + m_id(3, {2}).scale(V)


def test_act_degenerate_parabolic_matches_hecke():
    rng = random.Random(1)
    for _ in range(40):
        n = 3
        word = tuple(rng.randrange(1, n) for _ in range(rng.randrange(6)))
        mm = bott_samelson_spherical(word, n, set())
        hh = hecke.bott_samelson_char(word, n)
        assert mm.coeffs == hh.coeffs


def test_bott_samelson_examples():
    assert bott_samelson_spherical((), 3, {2}) == m_id(3, {2})
    assert bott_samelson_spherical((2,), 3, {2}) == \
        m_id(3, {2}).scale(V_PLUS_VINV)
    s1 = evaluate_word((1,), 3)
    assert bott_samelson_spherical((1,), 3, {2}) == \
        m(s1, {2}) + m_id(3, {2}).scale(V)


def test_minrep_key_enforced():
    with pytest.raises(ValueError):
        m(evaluate_word((2,), 3), {2})


def test_phi_examples():
    got = phi_embed(m_id(3, {2}))
    assert got == hecke.bott_samelson_char((2,), 3)  # b_{w_A} for A={s2}
    s1 = evaluate_word((1,), 3)
    assert phi_embed(m(s1, set())) == hecke.h(s1)


def test_phi_intertwines_exhaustive_s4():
    for A in all_subsets(4):
        for u in min_coset_reps(A, 4):
            mu = m(u, A)
            image = phi_embed(mu)
            for i in (1, 2, 3):
                lhs = phi_embed(act_by_gen(i, mu))
                rhs = mult_by_gen(image, i, side="left", kind="b")
                assert lhs == rhs, (A, u, i)


def test_pi_tilde():
    assert pi_tilde(set(), 3) == ONE
    assert pi_tilde({2}, 3) == LaurentPoly({0: 1, 2: 1})
    # S_3 block: (1)(1+v^2)(1+v^2+v^4)
    assert pi_tilde({1, 2}, 3) == \
        LaurentPoly({0: 1, 2: 1}) * LaurentPoly({0: 1, 2: 1, 4: 1})
    got = pi_tilde({1, 2}, 3)
    brute = LaurentPoly.zero()
    for u in coxeter.parabolic_elements({1, 2}, 3):
        brute = brute + v_power(2 * length(u))
    assert got == brute


def test_spherical_pairing_examples():
    assert spherical_pairing(m_id(3, {2}), m_id(3, {2})) == ONE
    # A empty: coincides with the Hecke pairing
    rng = random.Random(3)
    for _ in range(20):
        word = tuple(rng.randrange(1, 3) for _ in range(rng.randrange(5)))
        a = bott_samelson_spherical(word, 3, set())
        b = m_id(3, set())
        assert spherical_pairing(a, b) == \
            hecke.pairing(phi_embed(a), phi_embed(b))
    # sesquilinearity instance
    a = m_id(3, {2})
    assert spherical_pairing(a.scale(V), a) == v_power(-1)


def test_spherical_pairing_properties_random_s4():
    rng = random.Random(5)
    reps = {A: list(min_coset_reps(A, 4)) for A in all_subsets(4)}
    for _ in range(80):
        A = rng.choice(list(reps))
        xs = reps[A]
        a = SphericalElement.zero(4, A)
        b = SphericalElement.zero(4, A)
        for _ in range(2):
            a = a + m(rng.choice(xs), A).scale(
                LaurentPoly({rng.randrange(-2, 3): rng.randrange(-3, 4)}))
            b = b + m(rng.choice(xs), A).scale(
                LaurentPoly({rng.randrange(-2, 3): rng.randrange(-3, 4)}))
        p = LaurentPoly({rng.randrange(-2, 3): rng.randrange(1, 4)})
        # exact divisibility is implicit: spherical_pairing raises otherwise
        base = spherical_pairing(a, b)
        assert spherical_pairing(a.scale(p), b) == p.bar() * base
        assert spherical_pairing(a, b.scale(p)) == p * base
        i = rng.randrange(1, 4)
        assert spherical_pairing(act_by_gen(i, a), b) == \
            spherical_pairing(a, act_by_gen(i, b))


def test_spherical_kl_examples():
    assert spherical_kl_basis(identity(3), {2}) == m_id(3, {2})
    s1 = evaluate_word((1,), 3)
    assert spherical_kl_basis(s1, {2}) == m(s1, {2}) + m_id(3, {2}).scale(V)
    for x in coxeter.all_permutations(3):
        got = spherical_kl_basis(x, set())
        assert got.coeffs == kl_basis(x).coeffs


def test_phi_sends_ckl_to_kl_exhaustive_s4():
    for A in all_subsets(4):
        wA = coxeter.longest_element(A, 4)
        for x in min_coset_reps(A, 4):
            cx = spherical_kl_basis(x, A)
            assert phi_embed(cx) == kl_basis(coxeter.multiply(x, wA)), (A, x)


def test_spherical_kl_equals_parabolic_kl_restriction_s4():
    """gamma_{y,x} = beta_{y*wA, x*wA} for all x, y in W^A."""
    for A in all_subsets(4):
        wA = coxeter.longest_element(A, 4)
        for x in min_coset_reps(A, 4):
            cx = spherical_kl_basis(x, A)
            bxwA = kl_basis(coxeter.multiply(x, wA))
            for y in min_coset_reps(A, 4):
                gamma = cx.coefficient(y)
                beta = bxwA.coefficient(coxeter.multiply(y, wA))
                assert gamma == beta, (A, x, y)


def test_is_perverse_spherical():
    s1 = evaluate_word((1,), 3)
    assert is_perverse_spherical(spherical_kl_basis(s1, {2})).is_perverse
    assert not is_perverse_spherical(
        m_id(3, {2}).scale(V_PLUS_VINV)).is_perverse
    rep = is_perverse_spherical(bott_samelson_spherical((1,), 3, {2}))
    assert rep.is_perverse
    assert rep.expansion == {s1: ONE}


def test_deodhar_examples():
    assert deodhar_expand((2,), 3, {2}) == m_id(3, {2}).scale(V_PLUS_VINV)
    assert deodhar_expand((1, 2), 3, {2}) == \
        bott_samelson_spherical((1, 2), 3, {2})
    # all bits forced to 1: a single subexpression lands on minrep(w)
    word = (1, 2, 1)
    ones = EnumConstraint(((1,),) * 3)
    got = deodhar_expand(word, 3, {2}, ones)
    w = coxeter.min_coset_rep(evaluate_word(word, 3), {2})
    assert got.support() == [w]


def test_deodhar_identity_sample():
    """Unconstrained Deodhar expansion equals the Bott-Samelson element
    (the exhaustive length <= 8 run lives in the acceptance suite)."""
    rng = random.Random(7)
    for _ in range(150):
        n = rng.choice((3, 4))
        word = tuple(rng.randrange(1, n) for _ in range(rng.randrange(6)))
        A = frozenset(i for i in range(1, n) if rng.random() < 0.5)
        assert deodhar_expand(word, n, A) == \
            bott_samelson_spherical(word, n, A), (n, word, sorted(A))


def test_deodhar_identity_s5_longer_words():
    rng = random.Random(11)
    for _ in range(60):
        word = tuple(rng.randrange(1, 5) for _ in range(rng.randrange(11)))
        A = frozenset(i for i in range(1, 5) if rng.random() < 0.4)
        assert deodhar_expand(word, 5, A) == \
            bott_samelson_spherical(word, 5, A), (word, sorted(A))


def test_interval_condition_check():
    A = frozenset({2})
    x = identity(3)
    s1 = evaluate_word((1,), 3)
    w = coxeter.min_coset_rep(evaluate_word((2, 1, 2), 3), A)
    # coefficient 1 on m_w alone: pass
    rep = interval_condition_check(m(w, A), x, w)
    assert rep.passed and len(rep.entries) == 1

    # v^-1 inside the interval: fail at that coset
    bad = m(s1, A).scale(v_power(-1)) + m(w, A)
    rep = interval_condition_check(bad, x, w)
    assert not rep.passed
    assert [e.coset for e in rep.failures()] == [s1]

    # v^-1 outside the interval (z not >= x): no condition
    rep = interval_condition_check(
        m(s1, A).scale(v_power(-1)) + m(w, A), s1, w)
    assert rep.passed  # z = s1 is not strictly above x = s1
    rep2 = interval_condition_check(m_id(3, A).scale(v_power(-1)), s1, w)
    assert rep2.passed and rep2.outside == 1


def test_json_roundtrip():
    el = bott_samelson_spherical((1, 2, 1), 3, {2})
    assert SphericalElement.from_json_dict(el.to_json_dict()) == el
