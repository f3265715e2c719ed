import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from thetak.arith import mod_pn
from thetak.padic import PadicNum, PrecisionError, primitive_root, teichmuller

primes = st.sampled_from([2, 3, 5, 7])
units = st.fractions(min_value=-500, max_value=500, max_denominator=50)


def _unit(x: Fraction, p: int) -> bool:
    return x != 0 and x.numerator % p and x.denominator % p


@given(units, units, primes)
def test_ring_ops_match_rationals(x, y, p):
    if not (_unit(x, p) and _unit(y, p)):
        return
    N = 10
    a, b = PadicNum.from_rational(x, p, N), PadicNum.from_rational(y, p, N)
    assert (a * b).residue(N) == mod_pn(x * y, p, N)
    assert (a / b).residue(N) == mod_pn(x / y, p, N)
    s = a + b
    if x + y != 0:
        assert s.residue(min(N, s.abs_prec)) == mod_pn(x + y, p, min(N, s.abs_prec))


@given(units, primes, st.integers(-4, 6))
def test_pow(x, p, n):
    if not _unit(x, p):
        return
    a = PadicNum.from_rational(x, p, 8)
    assert (a**n).residue(8) == mod_pn(x**n, p, 8)


def test_valuation_and_cancellation():
    a = PadicNum.from_int(12, 2, 10)
    assert a.val == 2
    d = PadicNum.from_int(1 + 2**12, 2, 10) - PadicNum.from_int(1, 2, 10)
    # difference is zero to the known precision
    assert d.is_zero
    with pytest.raises(PrecisionError):
        PadicNum.from_int(3, 2, 4).residue(6)


def test_teichmuller():
    for p in (3, 5, 7):
        g = primitive_root(p)
        t = teichmuller(g, p, 12)
        assert (t ** (p - 1)).residue(12) == 1
        assert t.residue(1) == g % p
        # primitive root: order exactly p - 1 mod p
        assert all(pow(g, k, p) != 1 for k in range(1, p - 1))


def test_random_unit_is_unit():
    rng = random.Random(0)
    for p in (2, 3, 5):
        for _ in range(50):
            u = PadicNum.random_unit(p, 6, rng)
            assert u.val == 0 and u.unit % p
