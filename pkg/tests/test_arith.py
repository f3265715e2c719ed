import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from conftest import laurents, naive_mul, small_rationals
from thetak.arith import (
    Laurent, MultiLaurent, W, balanced, fermat_quotient, format_laurent, is_p_integral, legendre, mod_pn,
    multinomial_valuation, unit_residues, vp_int,
)

eval_points = st.sampled_from([Fraction(3), Fraction(-2), Fraction(5, 7), Fraction(-1, 3), Fraction(11, 2)])


@given(laurents(), laurents(), eval_points)
def test_ring_ops_commute_with_evaluation(f, g, x):
    assert (f + g)(x) == f(x) + g(x)
    assert (f - g)(x) == f(x) - g(x)
    assert (f * g)(x) == f(x) * g(x)


@given(laurents(), laurents())
def test_mul_matches_naive_convolution(f, g):
    assert (f * g).coeffs == naive_mul(f, g)


def test_large_mul_matches_naive():
    # above the schoolbook threshold, exercising the big-integer path
    rng = random.Random(1)
    f = Laurent({k: Fraction(rng.randint(-10**6, 10**6), rng.randint(1, 9)) for k in range(-50, 150)})
    g = Laurent({k: Fraction(rng.randint(-10**6, 10**6), rng.randint(1, 9)) for k in range(-80, 120)})
    assert (f * g).coeffs == naive_mul(f, g)
    assert (f * f).coeffs == naive_mul(f, f)


@given(laurents(max_terms=3), st.integers(0, 5), eval_points)
def test_pow(f, n, x):
    assert (f**n)(x) == f(x) ** n


def test_negative_pow_of_monomial():
    assert W**-3 * W**3 == Laurent.const(1)
    assert (Laurent.monomial(2, Fraction(1, 2)) ** -1) == Laurent.monomial(-2, 2)


@given(laurents(), eval_points)
def test_variable_maps(f, x):
    assert f.invert_variable()(x) == f(1 / x)
    assert f.compose_power(3)(x) == f(x**3)
    assert f.shift(2)(x) == x**2 * f(x)


@given(laurents(lo=-3, hi=3, max_terms=3), eval_points, eval_points)
def test_to_multi(f, x, y):
    assert f.to_multi((1, 1))(x, y) == f(x * y)
    assert f.to_multi((1, 0))(x, y) == f(x)


def test_equality_and_zero():
    assert Laurent({1: 0}) == Laurent()
    assert Laurent() == 0
    assert not Laurent()
    assert Laurent.const(3) == 3
    assert hash(Laurent({1: Fraction(1, 2)})) == hash(Laurent.monomial(1, Fraction(1, 2)))


def test_format_increasing_exponents():
    assert str(Laurent({2: -Fraction(3, 64), 0: Fraction(7, 128), 4: -Fraction(1, 128)})) == \
        "7/128 - 3/64*w^2 - 1/128*w^4"
    assert str(W**-1 - 1) == "w^-1 - 1"
    assert format_laurent({}) == "0"


def test_max_denominator_valuation():
    assert ((1 - W) / 8).max_denominator_valuation(2) == 3
    assert ((1 - W) / 8).max_denominator_valuation(3) == 0


@given(st.integers(-10**9, 10**9).filter(bool), st.sampled_from([2, 3, 5, 7]))
def test_vp_int(n, p):
    v = 0
    m = abs(n)
    while m % p == 0:
        m //= p
        v += 1
    assert vp_int(n, p) == v


@given(st.integers(0, 400), st.sampled_from([2, 3, 5]))
def test_legendre_matches_factorial(n, p):
    assert legendre(n, p) == vp_int(math.factorial(n), p)


@pytest.mark.parametrize("p", [2, 3, 5])
@pytest.mark.parametrize("r", [0, 1, 2])
def test_multinomial_valuation_exact(p, r):
    # p parts of size p^r summing to p^(r+1)
    c = math.factorial(p ** (r + 1)) // math.factorial(p**r) ** p
    assert multinomial_valuation(p, r) == vp_int(c, p) == 1


@given(st.integers(-1000, 1000), st.sampled_from([2, 3, 5, 7]))
def test_fermat_quotient(a, p):
    q = fermat_quotient(a, p)
    assert q == Fraction(a - a**p, p)
    assert q.denominator == 1


@given(small_rationals, st.sampled_from([2, 3, 5]), st.integers(1, 8))
def test_mod_pn(x, p, n):
    if x.denominator % p == 0:
        with pytest.raises(ValueError):
            mod_pn(x, p, n)
        return
    r = mod_pn(x, p, n)
    assert 0 <= r < p**n
    assert (x - r).numerator % p**n == 0


def test_misc_helpers():
    assert unit_residues(2, 3) == [1, 3, 5, 7]
    assert len(unit_residues(5, 2)) == 20
    assert balanced(255, 256) == -1
    assert balanced(3, 256) == 3
    assert is_p_integral(Fraction(1, 3), 2)
    assert not is_p_integral(Fraction(1, 6), 2)


def test_multilaurent_ops():
    w1 = MultiLaurent.variable(0, 2)
    w2 = MultiLaurent.variable(1, 2)
    f = (w1 * w2) ** 2 - w1 / 3
    assert f(2, 3) == 36 - Fraction(2, 3)
    assert f.substitute(0, Fraction(1)).to_laurent()(3) == 9 - Fraction(1, 3)
