"""Reproducibility suites behind `thetak verify`.

Each suite returns a list of Check results. Randomized checks draw from a
seeded random.Random so a run is determined by (seed, trials).
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction

from .arith import Laurent, MultiLaurent, W, fermat_quotient, mod_pn, multinomial_valuation
from .basis import BasisError, theta_basis_expand
from .comodule import (
    action_table, action_to_comodule, comodule_to_action, fixture_names, invariant_test_units,
    invariants, is_fixed, matmul_mod, same_mod_pn, shipped_fixture,
)
from .free import (
    MixedTensor, ThetaPoly, artin_schreier_relation, as_quotient_normal_form, coaction,
    coassociativity_check, comodule_morphism_check, eta_assignment, free_Q, preset_generators,
    specialize, theta_var,
)
from .kk import (
    BIG_THETA, GradedElt, NumFun, NumFun2, Q, Qtilde, adams, antipode, artin_schreier_check,
    check_idempotents, coproduct, counit, dual_action, einvariant, is_numerical, primitive_check,
    random_numfun, random_plocal, random_unit, theta,
)
from .ko import Q_ko, is_in_ko, ko_basis_check
from .padic import PadicNum

PRIMES = (2, 3, 5)


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""
    trials: int = 0
    seconds: float = 0.0


@dataclass
class SuiteConfig:
    trials: int = 200
    seed: int = 0
    primes: tuple[int, ...] = PRIMES
    level: int = 6
    precision: int = 16


def _random_fn(p: int, rng: random.Random) -> NumFun:
    # keep degrees moderate so p-th powers stay cheap at p = 5
    if p == 2:
        return random_numfun(p, rng, terms=3, max_deg=3, max_level=2)
    if p == 3:
        return random_numfun(p, rng, terms=3, max_deg=2, max_level=2)
    return random_numfun(p, rng, terms=2, max_deg=2, max_level=1)


def randomized(name: str, law, cfg: SuiteConfig, salt: int = 0) -> Check:
    """Run law(p, rng) -> (ok, repro) for cfg.trials trials per prime."""
    t0 = time.perf_counter()
    count = 0
    for p in cfg.primes:
        rng = random.Random(f"{cfg.seed}:{name}:{p}:{salt}")
        for _ in range(cfg.trials):
            ok, repro = law(p, rng)
            count += 1
            if not ok:
                return Check(name, False, f"p={p}: {repro}", count, time.perf_counter() - t0)
    return Check(name, True, "", count, time.perf_counter() - t0)


def exact(name: str, fn) -> Check:
    t0 = time.perf_counter()
    try:
        ok, detail = fn()
    except Exception as exc:  # a crash is a failed check, reported with its message
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    return Check(name, bool(ok), detail, 1, time.perf_counter() - t0)


# -- theta-operation laws ------------------------------------------------------------


def law_additivity(p, rng):
    x, y = _random_fn(p, rng), _random_fn(p, rng)
    lhs = Q(x + y)
    rhs = Q(x) + Q(y) + (x**p + y**p - (x + y) ** p) / p
    return lhs == rhs, f"x={x}, y={y}"


def law_cartan(p, rng):
    x, y = _random_fn(p, rng), _random_fn(p, rng)
    lhs = Q(x * y)
    rhs = y**p * Q(x) + x**p * Q(y) + Q(x) * Q(y) * p
    return lhs == rhs, f"x={x}, y={y}"


def law_qtilde_hom(p, rng):
    x, y = _random_fn(p, rng), _random_fn(p, rng)
    ok = (
        Qtilde(x + y) == Qtilde(x) + Qtilde(y)
        and Qtilde(x * y) == Qtilde(x) * Qtilde(y)
        and Qtilde(NumFun(p, Laurent.const(1))) == 1
    )
    return ok, f"x={x}, y={y}"


def law_qtilde_identity(p, rng):
    x = _random_fn(p, rng)
    return Qtilde(x) == x, f"x={x}"


def law_scalar(p, rng):
    x, a = _random_fn(p, rng), random_plocal(p, rng)
    lhs = Q(x * a)
    rhs = Q(x) * a + x**p * fermat_quotient(a, p)
    return lhs == rhs, f"x={x}, a={a}"


def law_chi_q(p, rng):
    x = _random_fn(p, rng)
    return antipode(Q(x)) == Q(antipode(x)), f"x={x}"


def law_psi_q(p, rng):
    x = _random_fn(p, rng)
    return coproduct(Q(x)) == Q(coproduct(x)), f"x={x}"


def law_eigenvector(p, rng):
    d = rng.randint(-4, 4)
    alpha = random_unit(p, rng)
    x = NumFun(p, W**d)
    eig = alpha ** (-d)
    ok = adams(x, alpha) == x * eig and adams(Qtilde(x), alpha) == Qtilde(x) * eig
    return ok, f"d={d}, alpha={alpha}"


def law_dual_action(p, rng):
    x, alpha = _random_fn(p, rng), random_unit(p, rng)
    return dual_action(alpha, x) == adams(x, alpha), f"x={x}, alpha={alpha}"


THETA_LAWS = {
    "additivity correction": law_additivity,
    "Cartan rule": law_cartan,
    "Qtilde ring homomorphism": law_qtilde_hom,
    "Qtilde identity": law_qtilde_identity,
    "scalar rule": law_scalar,
    "chi Q = Q chi": law_chi_q,
    "Psi Q = Q Psi": law_psi_q,
    "Adams eigenvector": law_eigenvector,
    "dual action = Adams": law_dual_action,
}


def suite_cartan(cfg: SuiteConfig) -> list[Check]:
    names = ["additivity correction", "Cartan rule", "Qtilde ring homomorphism", "Qtilde identity",
             "scalar rule", "Adams eigenvector"]
    out = [randomized(n, THETA_LAWS[n], cfg) for n in names]
    out.append(exact("Q(1) = 0", lambda: (Q(NumFun(2, Laurent.const(1))) == 0, "")))
    out.append(exact("multinomial valuation = 1", lambda: (
        all(multinomial_valuation(p, r) == 1 for p in (2, 3, 5, 7) for r in range(5)), "")))
    return out


# -- Hopf structure ----------------------------------------------------------------


def law_coassociative(p, rng):
    x = _random_fn(p, rng)
    psi = coproduct(x).body
    left = psi.map_exponents(lambda k: (k[0], k[0], k[1]), 3)  # (Psi ⊗ id)
    right = psi.map_exponents(lambda k: (k[0], k[1], k[1]), 3)  # (id ⊗ Psi)
    return left == right == x.body.to_multi((1, 1, 1)), f"x={x}"


def law_counit(p, rng):
    x = _random_fn(p, rng)
    psi = coproduct(x).body
    ok = psi.substitute(1, 1).to_laurent() == x.body and psi.substitute(0, 1).to_laurent() == x.body
    return ok, f"x={x}"


def law_antipode(p, rng):
    x = _random_fn(p, rng)
    # chi involutive, and the antipode axiom m(chi ⊗ id)Psi = unit∘counit
    psi = coproduct(x).body
    conv = psi.map_exponents(lambda k: (k[1] - k[0],), 1).to_laurent()
    return antipode(antipode(x)) == x and conv == Laurent.const(counit(x)), f"x={x}"


def law_adams_composition(p, rng):
    x, a, b = _random_fn(p, rng), random_unit(p, rng), random_unit(p, rng)
    return adams(adams(x, a), b) == adams(x, a * b), f"x={x}, a={a}, b={b}"


def law_numerical(p, rng):
    x = _random_fn(p, rng)
    return bool(is_numerical(Q(x), p)) and bool(is_numerical(coproduct(x).body.substitute(0, 1).to_laurent(), p)), f"x={x}"


def suite_hopf(cfg: SuiteConfig) -> list[Check]:
    out = [
        randomized("coassociativity", law_coassociative, cfg),
        randomized("counit", law_counit, cfg),
        randomized("antipode", law_antipode, cfg),
        randomized("Adams composition", law_adams_composition, cfg),
        randomized("closure under Q", law_numerical, cfg),
    ]
    out += [randomized(n, THETA_LAWS[n], cfg) for n in ("chi Q = Q chi", "Psi Q = Q Psi", "dual action = Adams")]

    def theta0_coproduct():
        T0 = theta(0, 2, BIG_THETA)
        rhs = T0.body.to_multi((1, 0)) + MultiLaurent.variable(0) * T0.body.to_multi((0, 1))
        return coproduct(T0) == rhs, ""

    out.append(exact("Psi(Theta0) = Theta0 (x) 1 + w (x) Theta0", theta0_coproduct))
    return out


def suite_theta_laws(cfg: SuiteConfig) -> list[Check]:
    """All randomized theta-operation laws (used by the acceptance gate)."""
    return [randomized(n, law, cfg) for n, law in THETA_LAWS.items()]


# -- Artin-Schreier ----------------------------------------------------------------


def suite_artin_schreier(cfg: SuiteConfig) -> list[Check]:
    bounds = {2: 10, 3: 5, 5: 5}
    out = []
    for p, smax in bounds.items():
        out.append(exact(f"theta_s^p - theta_s + p theta_(s+1) = 0, p={p}, s<={smax}", lambda p=p, smax=smax: (
            all(artin_schreier_check(s, p).is_zero() for s in range(smax + 1)), "")))
    out.append(exact("Theta-family relation, p=2, s<=10", lambda: (
        all(artin_schreier_check(s, 2, BIG_THETA).is_zero() for s in range(11)), "")))
    out.append(exact("normal form kills relations", lambda: (
        all(not as_quotient_normal_form(artin_schreier_relation(p, "x", s))
            for p in (2, 3, 5) for s in range(4)), "")))
    out.append(exact("etale idempotents p in {2,3,5}", lambda: (all(check_idempotents(p) for p in (2, 3, 5)), "")))
    return out


# -- digits ------------------------------------------------------------------------


def binary_digit(a: int, r: int) -> int:
    """a_r where 1 - a = sum_j 2^(j+1) a_j."""
    return ((1 - a) >> (r + 1)) & 1


def suite_digits(cfg: SuiteConfig, rmax: int = 8) -> list[Check]:
    def literal():
        for r in range(rmax + 1):
            T = theta(r, 2, BIG_THETA).body
            for a in range(1, 2 ** (r + 3), 2):
                v = T(a)
                if v.denominator % 2 == 0 or (v.numerator - binary_digit(a, r)) % 2:
                    return False, f"r={r}, a={a}: Theta_r(a)={v}, a_r={binary_digit(a, r)}"
        return True, f"r<={rmax}, all units mod 2^(r+3)"

    def triangular():
        # Theta_r(a) + a_r mod 2 depends only on a_0..a_(r-1)
        for r in range(rmax + 1):
            T = theta(r, 2, BIG_THETA).body
            seen: dict[tuple, int] = {}
            for a in range(1, 2 ** (r + 3), 2):
                low = tuple(binary_digit(a, j) for j in range(r))
                c = (mod_pn(T(a), 2, 1) + binary_digit(a, r)) % 2
                if seen.setdefault(low, c) != c:
                    return False, f"r={r}, a={a}"
        return True, f"r<={rmax}"

    return [exact("Theta_r(a) = a_r mod 2", literal),
            exact("Theta_r(a) = a_r + g(a_0..a_(r-1)) mod 2", triangular)]


# -- e-invariants --------------------------------------------------------------------

EINVARIANT_TABLE = {1: (2, "Theta0"), 2: (8, "Theta1"), 4: (16, "2*Theta2 - 3*Theta1^2")}


def suite_einvariant(cfg: SuiteConfig) -> list[Check]:
    from .expr import parse_numfun

    out = []
    for n, (order, gen) in EINVARIANT_TABLE.items():
        def run(n=n, order=order, gen=gen):
            e = einvariant(n, 2, cfg.precision)
            return e.order == order and e.generator == parse_numfun(gen, 2), f"order {e.order}, generator {e.generator}"

        out.append(exact(f"e-invariant n={n}: order {order}, generator {gen}", run))

    def orders_divide():
        rng = random.Random(f"{cfg.seed}:einv")
        for p in cfg.primes:
            for n in range(1, 9):
                e = einvariant(n, p, cfg.precision)
                if not primitive_check(GradedElt(n, e.generator)):
                    return False, f"p={p}, n={n}: generator not primitive"
                for _ in range(100):
                    a = PadicNum.random_unit(p, cfg.precision, rng)
                    d = a**n - 1
                    if not d.is_zero and d.val < e.exponent:
                        return False, f"p={p}, n={n}, alpha={a}"
        return True, ""

    out.append(exact("order divides alpha^n - 1 over 100 random units", orders_divide))
    T = lambda n: theta(n, 2, BIG_THETA)  # noqa: E731
    out.append(exact("primitivity of the three generators; w not primitive", lambda: (
        primitive_check(GradedElt(1, T(0))) and primitive_check(GradedElt(2, T(1)))
        and primitive_check(GradedElt(4, T(2) * 2 - T(1) ** 2 * 3))
        and not primitive_check(GradedElt(1, NumFun(2, W))), "")))
    return out


# -- coactions ---------------------------------------------------------------------

PSI_QX2 = "w*Q(x2) + w*Theta0*x2^2 - w*Theta0*x2 + Theta1"


def suite_coaction(cfg: SuiteConfig) -> list[Check]:
    g = preset_generators()
    T = lambda n: theta(n, 2, BIG_THETA)  # noqa: E731
    x2, x4, x8 = (theta_var(2, f"x{k}") for k in (2, 4, 8))
    out = [
        exact("Psi(x2) = w x2 + Theta0", lambda: (
            coaction(x2, [g["eta"]]) == _mixed({((("x2", 0), 1),): W, (): T(0).body}), "")),
        exact("Psi(Q x2) text", lambda: (str(coaction(free_Q(x2), [g["eta"]])) == PSI_QX2,
                                         str(coaction(free_Q(x2), [g["eta"]])))),
        exact("Psi(x4) = w^2 x4 + 2 Theta1", lambda: (
            coaction(x4, [g["nu"]]) == _mixed({((("x4", 0), 1),): W**2, (): (T(1) * 2).body}), "")),
        exact("Psi(x8) = w^4 x8 + 2 Theta2 - 3 Theta1^2", lambda: (
            coaction(x8, [g["sigma"]]) == _mixed({((("x8", 0), 1),): W**4, (): (T(2) * 2 - T(1) ** 2 * 3).body}), "")),
    ]
    samples = [x2, free_Q(x2), free_Q(free_Q(x2)), x2**3 + free_Q(x2) * 2, ThetaPoly.const(2, 1)]
    out.append(exact("comodule morphism x2 -> Theta0", lambda: (
        all(comodule_morphism_check(e, eta_assignment(), [g["eta"]]) for e in samples), "")))
    out.append(exact("coassociativity of Psi", lambda: (
        all(coassociativity_check(e, [g["eta"]]) for e in samples)
        and coassociativity_check(free_Q(x4), [g["nu"]]) and coassociativity_check(free_Q(x8), [g["sigma"]]), "")))
    out.append(exact("counit of Psi", lambda: (
        all(coaction(e, [g["eta"]]).counit() == e for e in samples), "")))
    out.append(exact("Q^s x2 -> Theta_s, s<=6", lambda: (
        all(_specialize_theta(s) for s in range(7)), "")))
    return out


def _mixed(terms):
    return MixedTensor(2, terms)


def _specialize_theta(s: int) -> bool:
    return specialize(theta_var(2, "x2", s), eta_assignment()) == theta(s, 2, BIG_THETA)


# -- comodules and actions ---------------------------------------------------------


def suite_appendix(cfg: SuiteConfig) -> list[Check]:
    out = []
    rng = random.Random(f"{cfg.seed}:appendix")
    for name in fixture_names():
        M = shipped_fixture(name)
        out.append(exact(f"{name}: counit and coassociativity", lambda M=M: (M.counit_ok() and M.coassociative(), "")))

        def hom(M=M):
            M16 = type(M)(M.p, 16, M.entries, M.name)
            m = 2**16
            for _ in range(100):
                a = rng.randrange(1, 2**20) | 1
                b = rng.randrange(1, 2**20) | 1
                if matmul_mod(comodule_to_action(M16, a), comodule_to_action(M16, b), m) != comodule_to_action(M16, a * b):
                    return False, f"gamma1={a}, gamma2={b}"
            return True, "100 random pairs mod 2^16"

        out.append(exact(f"{name}: action is a homomorphism", hom))

        def roundtrip(M=M):
            level = min(cfg.level, 6)
            M2 = action_to_comodule(action_table(M, level), level)
            return same_mod_pn(M, M2), ""

        out.append(exact(f"{name}: action -> comodule round trip", roundtrip))

        def inv(M=M):
            gens = invariants(M)
            units = invariant_test_units(M.p, M.N + M.max_denominator_valuation())
            return all(is_fixed(M, v, units) for v in gens), f"{len(gens)} generators"

        out.append(exact(f"{name}: invariants are fixed", inv))
    return out


# -- basis ---------------------------------------------------------------------------


def suite_basis(cfg: SuiteConfig) -> list[Check]:
    def roundtrip():
        rng = random.Random(f"{cfg.seed}:basis")
        level, N = cfg.level, cfg.precision
        m = 2**N
        for _ in range(10):
            f = random_numfun(2, rng, terms=3, max_deg=4, max_level=3)
            e = theta_basis_expand(f, level, N)
            for _ in range(50):
                a = rng.randrange(1, m, 2)
                if e.evaluate(a) != mod_pn(f.body(a), 2, N):
                    return False, f"f={f}, a={a}"
        return True, ""

    def odd():
        try:
            f = NumFun(3, theta(2, 3).body * 3 + W**2 - W)
            theta_basis_expand(f, 4, 9)
            return True, "solved"
        except BasisError as exc:
            return "basis solve failed" in str(exc), str(exc)

    return [exact(f"round trip at level {cfg.level}, 2^{cfg.precision}", roundtrip),
            exact("p=3 solve at level 4, 3^9", odd)]


# -- KO -----------------------------------------------------------------------------


def random_even(rng: random.Random) -> NumFun:
    f = random_numfun(2, rng, terms=3, max_deg=3, max_level=2)
    return NumFun(2, f.body.compose_power(2))


def suite_ko(cfg: SuiteConfig) -> list[Check]:
    def closure():
        rng = random.Random(f"{cfg.seed}:ko")
        for _ in range(100):
            f, g = random_even(rng), random_even(rng)
            a = random_unit(2, rng)
            if not (is_in_ko(f) and Q_ko(f) == Q(f) and is_in_ko(Q_ko(f)) and is_in_ko(f + g)
                    and is_in_ko(f * g) and is_in_ko(adams(f, a))):
                return False, f"f={f}, g={g}, a={a}"
        return True, "100 random even numerical functions"

    def report():
        r1, r2 = ko_basis_check(3, 4), ko_basis_check(3, 4)
        ok = r1.to_json() == r2.to_json() and not r1.theta0_in_ko
        return ok, "; ".join(r1.lines()[1:2] + [r1.lines()[-1]])

    return [exact("Q_ko closure and agreement with Q", closure), exact("check-basis report", report)]


SUITES = {
    "hopf": suite_hopf,
    "cartan": suite_cartan,
    "artin-schreier": suite_artin_schreier,
    "digits": suite_digits,
    "einvariant": suite_einvariant,
    "coaction": suite_coaction,
    "appendix": suite_appendix,
    "ko": suite_ko,
    "basis": suite_basis,
}


def run_suite(name: str, cfg: SuiteConfig) -> list[Check]:
    if name == "all":
        out = []
        for n, fn in SUITES.items():
            out += fn(cfg)
        return out
    if name not in SUITES:
        raise KeyError(name)
    return SUITES[name](cfg)
