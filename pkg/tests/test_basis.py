import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from thetak.arith import Laurent, W, mod_pn
from thetak.basis import (
    BasisError, basis_exponents, display, evaluation_matrix, exact_expansion, interpolate, monomial_body,
    sample_points, theta_basis_expand, theta_values,
)
from thetak.kk import BIG_THETA, THETA, NumFun, is_numerical, random_numfun, theta
from thetak.modlinalg import rank_mod_p


@pytest.mark.parametrize("p,level,family", [(2, 5, BIG_THETA), (3, 3, THETA), (5, 2, THETA)])
def test_theta_values_match_exact_evaluation(p, level, family):
    N = 6
    for x in sample_points(p, level, family)[:40]:
        got = theta_values(x, p, level, N, family)
        want = [mod_pn(theta(s, p, family)(x), p, N) for s in range(level + 1)]
        assert got == want


@pytest.mark.parametrize("p,level,family", [(2, 4, BIG_THETA), (2, 3, THETA), (3, 2, THETA), (3, 3, THETA),
                                            (5, 2, THETA), (7, 1, THETA)])
def test_evaluation_matrix_invertible_mod_p(p, level, family):
    pts = sample_points(p, level, family)
    M = evaluation_matrix(pts, p, level, 1, family)
    assert len(M) == len(basis_exponents(p, level, family))
    assert rank_mod_p(M, p) == len(M)


def test_small_solve_matches_brute_force():
    # level 1, N = 3: enumerate all coefficient vectors mod 8
    f = NumFun(2, (1 - W**4) / 16)
    exps = basis_exponents(2, 1, BIG_THETA)
    pts = sample_points(2, 1, BIG_THETA)
    targets = [mod_pn(f(x), 2, 3) for x in pts]
    vals = [[mod_pn(monomial_body(2, e, BIG_THETA)(x), 2, 3) for e in exps] for x in pts]
    sols = [c for c in itertools.product(range(8), repeat=len(exps))
            if all(sum(a * b for a, b in zip(c, row)) % 8 == t for row, t in zip(vals, targets))]
    assert len(sols) == 1
    exp = theta_basis_expand(f, 1, 3, certify=False)
    assert tuple(exp.coeffs.get(e, 0) for e in exps) == sols[0]


def test_e_invariant_generator_expansion():
    exp = theta_basis_expand(NumFun(2, (1 - W**4) / 16), 6, 16)
    assert exp.certified
    assert exp.balanced_coeffs() == {(0, 0, 1, 0, 0, 0, 0): 8, (0, 1, 0, 0, 0, 0, 0): -3}
    assert str(exp) == "8*Theta[2] - 3*Theta[1]"
    T1, T2 = theta(1, 2, BIG_THETA), theta(2, 2, BIG_THETA)
    assert exp.to_numfun() == T2 * 8 - T1 * 3
    assert T2 * 8 - T1 * 3 == T2 * 2 - T1**2 * 3 + (T1**2 - T1 + T2 * 2) * 3


@pytest.mark.parametrize("k", range(-4, 9))
def test_powers_of_w_certify(k):
    exp = theta_basis_expand(NumFun(2, W**k), 6, 16)
    assert exp.certified


def test_roundtrip_at_random_units():
    rng = random.Random(7)
    for _ in range(5):
        f = random_numfun(2, rng)
        exp = theta_basis_expand(f, 6, 16)
        for _ in range(50):
            a = rng.randrange(1, 2**16, 2)
            assert exp.evaluate(a) == mod_pn(f(a), 2, 16)


def test_p3_solve():
    exp = theta_basis_expand(NumFun(3, W**2 + theta(1, 3).body * 4), 4, 9)
    assert exp.certified
    # w^2 is not a basis monomial at p = 3, so equality holds mod 3^9 only
    diff = W**2 + theta(1, 3).body * 4 - exp.to_numfun().body
    assert diff and is_numerical(diff / 3**9, 3)


def test_level_too_small_raises():
    with pytest.raises(BasisError, match="level insufficient"):
        theta_basis_expand(NumFun(2, W**40), 1, 16)


def test_interpolate_reports_bad_points():
    pts = sample_points(2, 2, BIG_THETA) + [17, 19]
    f = NumFun(2, theta(1, 2, BIG_THETA).body)
    vals = [mod_pn(f(x), 2, 4) for x in pts]
    exp, bad = interpolate(pts, vals, 2, 2, 4)
    assert bad == []
    vals[-1] += 1
    _, bad = interpolate(pts, vals, 2, 2, 4)
    assert bad == [19]


@given(st.dictionaries(st.integers(-3, 8), st.integers(-20, 20), max_size=5))
def test_exact_expansion_reconstructs(coeffs):
    f = Laurent(coeffs)
    k, out = exact_expansion(f, BIG_THETA, 2)
    acc = Laurent()
    for e, c in out.items():
        acc = acc + monomial_body(2, e, BIG_THETA) * c
    assert acc.shift(k) == f


def test_display():
    assert display(theta(0, 2, BIG_THETA)) == "Theta[0]"
    assert display(NumFun(2, (1 - W**4) / 16)) == "8*Theta[2] - 3*Theta[1]"
    assert display(NumFun(2, W)) == "-2*Theta[0] + 1"
    assert display(NumFun(2, W**-1)) == "w^-1"
