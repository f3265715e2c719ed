import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from thetak.arith import Laurent, MultiLaurent, W, vp_int
from thetak.kk import (
    BIG_THETA, THETA, GradedElt, NumFun, Q, Qtilde, adams, antipode, artin_schreier_check, check_idempotents,
    coproduct, counit, dual_action, einvariant, etale_idempotents, is_numerical, numfun, pair, primitive_check,
    random_numfun, theta,
)
from thetak.padic import PrecisionError

primes = st.sampled_from([2, 3, 5])


def brute_numerical(f: Laurent, p: int, bound: int = 600) -> bool:
    """Oracle: p-integral at every integer unit up to bound (plus negatives)."""
    return all(f(a).denominator % p for a in range(-bound, bound) if a % p)


def binom_w(k: int) -> Laurent:
    acc = Laurent.const(1)
    for i in range(k):
        acc = acc * (W - i)
    return acc / math.factorial(k)


# -- theta families -----------------------------------------------------------


def test_theta_small_cases():
    assert theta(0, 2).body == W
    assert theta(1, 2).body == (W - W**2) / 2
    assert theta(1, 3).body == (W - W**3) / 3
    assert theta(0, 2, BIG_THETA).body == (1 - W) / 2
    t0 = (1 - W) / 2
    assert theta(1, 2, BIG_THETA).body == (t0 - t0**2) / 2
    with pytest.raises(ValueError):
        theta(0, 3, BIG_THETA)


def test_displayed_identities():
    T1, T2 = theta(1, 2, BIG_THETA).body, theta(2, 2, BIG_THETA).body
    assert 1 - W**2 == T1 * 8
    assert 1 - W**4 == T2 * 32 - T1**2 * 48
    assert W**4 == 1 - (T1 - T1**2) * 16 + T1**2 * 48


def test_q_of_one_is_zero():
    for p in (2, 3, 5):
        assert Q(NumFun(p, Laurent.const(1))) == NumFun(p, Laurent())
        assert Q(Fraction(1), p) == 0


@pytest.mark.parametrize("p", [2, 3, 5])
def test_qtilde_identity_on_theta(p):
    for s in range(3):
        t = theta(s, p)
        assert Qtilde(t) == t


# -- numericality --------------------------------------------------------------


@pytest.mark.parametrize("p", [2, 3, 5])
@pytest.mark.parametrize("k", range(0, 7))
def test_binomials_are_numerical(p, k):
    f = binom_w(k)
    assert is_numerical(f, p)
    assert brute_numerical(f, p)


def test_non_numerical_witness():
    cert = is_numerical((1 - W) / 4, 2)
    assert not cert
    assert cert.witness == 3
    assert cert.value == Fraction(-1, 2)
    with pytest.raises(ValueError):
        numfun(W / 2, 2)


@given(st.dictionaries(st.integers(-3, 5), st.fractions(max_denominator=16, min_value=-8, max_value=8),
                       max_size=4), primes)
def test_is_numerical_matches_oracle(coeffs, p):
    f = Laurent(coeffs)
    assert bool(is_numerical(f, p)) == brute_numerical(f, p)


@pytest.mark.parametrize("p", [2, 3, 5])
def test_random_numfun_is_numerical(p):
    rng = random.Random(p)
    for _ in range(30):
        f = random_numfun(p, rng)
        assert is_numerical(f.body, p)
        assert brute_numerical(f.body, p, 200)


# -- Hopf structure ------------------------------------------------------------


@pytest.mark.parametrize("p", [2, 3])
def test_hopf_axioms(p):
    rng = random.Random(10 + p)
    for _ in range(20):
        f = random_numfun(p, rng)
        psi = coproduct(f)
        x, y = Fraction(3, 5), Fraction(-7, 11)
        assert psi(x, y) == f(x * y)
        assert counit(f) == f(1)
        assert antipode(antipode(f)) == f
        # m (chi x id) Psi = eta epsilon
        conv = psi.body.map_exponents(lambda k: (-k[0], k[1]), 2).map_exponents(lambda k: (k[0] + k[1],), 1)
        assert conv.to_laurent() == Laurent.const(f(1))


@given(primes, st.integers(1, 40), st.integers(1, 40))
def test_adams_composition_and_pairing(p, a, b):
    if a % p == 0 or b % p == 0:
        return
    f = NumFun(p, theta(1, p).body + W**-2)
    assert adams(adams(f, a), b) == adams(f, a * b)
    assert pair(b, adams(f, a)) == f(Fraction(b, a))
    assert dual_action(a, f) == adams(f, a)


def test_adams_rejects_non_units():
    with pytest.raises(ValueError):
        adams(theta(1, 2), 4)


# -- primitives and e-invariants ---------------------------------------------------


def brute_exponent(n: int, p: int, M: int = 12) -> int:
    """min over all units a mod p^M of v_p(a^n - 1), for exponents below M."""
    m = p**M
    return min(vp_int((pow(a, n, m) - 1) % m or m, p) for a in range(1, m) if a % p)


@pytest.mark.parametrize("p,M", [(2, 12), (3, 8), (5, 6)])
@pytest.mark.parametrize("n", range(1, 9))
def test_einvariant_matches_brute_force(p, M, n):
    e = einvariant(n, p, 16)
    assert e.exponent == brute_exponent(n, p, M)
    assert e.generator.body == (1 - W**n) / p**e.exponent
    assert primitive_check(GradedElt(n, e.generator))


def test_einvariant_table():
    T = lambda n: theta(n, 2, BIG_THETA)  # noqa: E731
    assert (einvariant(1).order, einvariant(1).generator) == (2, T(0))
    assert (einvariant(2).order, einvariant(2).generator) == (8, T(1))
    assert (einvariant(4).order, einvariant(4).generator) == (16, T(2) * 2 - T(1) ** 2 * 3)


def test_einvariant_precision_error():
    # at p = 2 and n = 2^k the 2-adic valuation exceeds tiny precision
    with pytest.raises(PrecisionError):
        einvariant(8, 2, precision=3)


def test_primitivity():
    T = lambda n: theta(n, 2, BIG_THETA)  # noqa: E731
    assert primitive_check(GradedElt(1, T(0)))
    assert primitive_check(GradedElt(2, T(1)))
    assert primitive_check(GradedElt(4, T(2) * 2 - T(1) ** 2 * 3))
    assert not primitive_check(GradedElt(1, NumFun(2, W)))
    assert not primitive_check(GradedElt(2, T(0)))


# -- Artin-Schreier and etale reduction ----------------------------------------------


@pytest.mark.parametrize("p,smax", [(2, 6), (3, 3), (5, 2)])
def test_artin_schreier(p, smax):
    for s in range(smax + 1):
        assert artin_schreier_check(s, p).is_zero()
    for s in range(3 if p == 2 else 0):
        assert artin_schreier_check(s, 2, BIG_THETA).is_zero()


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_etale_idempotents(p):
    assert check_idempotents(p)
    assert len(etale_idempotents(p)) == p
