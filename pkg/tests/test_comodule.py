import itertools
import random
from fractions import Fraction

import pytest

from thetak.arith import Laurent, W
from thetak.comodule import (
    ComoduleError, FinComodule, action_table, action_to_comodule, comodule_to_action, fixture_names, invariants,
    is_fixed, matmul_mod, same_mod_pn, shipped_fixture,
)
from thetak.modlinalg import span_set

FIXTURES = fixture_names()


@pytest.mark.parametrize("name", FIXTURES)
def test_fixture_axioms(name):
    M = shipped_fixture(name)
    assert M.counit_ok()
    assert M.coassociative()
    assert FinComodule.from_json(M.to_json()).entries == M.entries


def test_trivial_and_weight_one():
    T = shipped_fixture("trivial2")
    for g in (3, 5, Fraction(7, 3)):
        assert comodule_to_action(T, g) == [[int(i == j) for j in range(T.rank)] for i in range(T.rank)]
    M = shipped_fixture("weight1")
    assert comodule_to_action(M, 3) == [[pow(3, -1, 256)]]


def test_extension_at_five():
    M = shipped_fixture("extension")
    A = comodule_to_action(M, 5)
    inv5 = pow(5, -1, 256)
    # Theta0(1/5) = (1 - 1/5)/2 = 2/5
    assert A == [[1, 2 * inv5 % 256], [0, inv5]]


@pytest.mark.parametrize("name", FIXTURES)
def test_homomorphism(name):
    M = shipped_fixture(name)
    rng = random.Random(name)
    m = 2**M.N
    for _ in range(25):
        a, b = rng.randrange(1, 2**16, 2), rng.randrange(1, 2**16, 2)
        assert matmul_mod(comodule_to_action(M, a), comodule_to_action(M, b), m) == comodule_to_action(M, a * b)


@pytest.mark.parametrize("name", FIXTURES)
def test_roundtrip(name):
    M = shipped_fixture(name)
    T = action_table(M, level=4)
    assert T.invertible() and T.composition_ok()
    assert same_mod_pn(action_to_comodule(T, level=4), M)


def test_inconsistent_samples_detected():
    M = shipped_fixture("weight1")
    T = action_table(M, level=4)
    g = next(iter(T.table))
    T.table[g] = [[(T.table[g][0][0] + 1) % 256]]
    with pytest.raises(ComoduleError, match="samples inconsistent"):
        action_to_comodule(T, level=4)


def brute_invariants(M: FinComodule, N: int) -> set:
    """All vectors mod p^N fixed by every unit mod p^(N+3)."""
    m = M.p**N
    units = [a for a in range(1, M.p ** (N + 3)) if a % M.p]
    mats = [[[x % m for x in row] for row in comodule_to_action(M, a, N)] for a in units]
    fixed = set()
    for v in itertools.product(range(m), repeat=M.rank):
        if all(all(sum(a * x for a, x in zip(row, v)) % m == v[i] for i, row in enumerate(A)) for A in mats):
            fixed.add(v)
    return fixed


@pytest.mark.parametrize("name", FIXTURES)
def test_invariants_match_brute_force(name):
    M = shipped_fixture(name)
    small = FinComodule(M.p, 3 if M.rank <= 2 else 2, M.entries, M.name)
    gens = invariants(small)
    assert span_set(gens, small.p, small.N, small.rank) == brute_invariants(small, small.N)


def test_invariants_known_values():
    assert invariants(shipped_fixture("weight1")) == [[128]]
    inv = invariants(shipped_fixture("extension"))
    M = shipped_fixture("extension")
    assert all(is_fixed(M, v, [3, 5, 7, 15]) for v in inv)
