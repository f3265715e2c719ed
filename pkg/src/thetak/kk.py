"""K∨₀K as numerical Laurent polynomials: power operations and Hopf structure."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .arith import Laurent, MultiLaurent, NotPLocal, W, as_fraction, is_p_integral, valuation, vp_int
from .padic import PadicNum, PrecisionError, primitive_root, teichmuller

THETA = "theta"  # theta_0 = w
BIG_THETA = "Theta"  # Theta_0 = (1 - w)/2, p = 2 only


def _check_unit(a, p: int):
    if isinstance(a, PadicNum):
        if a.is_zero or a.val != 0:
            raise ValueError(f"{a} is not a {p}-adic unit")
        return a
    a = as_fraction(a)
    if a == 0 or valuation(a, p) != 0:
        raise ValueError(f"{a} is not a {p}-adic unit")
    return a


@dataclass(frozen=True)
class NumFun:
    """A numerical Laurent polynomial f(w) at the prime p."""

    p: int
    body: Laurent

    def _lift(self, other):
        if isinstance(other, NumFun):
            if other.p != self.p:
                raise ValueError("prime mismatch")
            return other.body
        if isinstance(other, Laurent):
            return other
        if isinstance(other, (int, Fraction)):
            return Laurent.const(other)
        raise TypeError

    def __add__(self, other):
        try:
            return NumFun(self.p, self.body + self._lift(other))
        except TypeError:
            return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        try:
            return NumFun(self.p, self.body - self._lift(other))
        except TypeError:
            return NotImplemented

    def __rsub__(self, other):
        try:
            return NumFun(self.p, self._lift(other) - self.body)
        except TypeError:
            return NotImplemented

    def __neg__(self):
        return NumFun(self.p, -self.body)

    def __mul__(self, other):
        try:
            return NumFun(self.p, self.body * self._lift(other))
        except TypeError:
            return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return NumFun(self.p, self.body / other)
        if isinstance(other, NumFun) and len(other.body) == 1:
            return NumFun(self.p, self.body / other.body)
        return NotImplemented

    def __pow__(self, n: int):
        return NumFun(self.p, self.body**n)

    def __eq__(self, other):
        if isinstance(other, NumFun):
            return self.p == other.p and self.body == other.body
        if isinstance(other, (Laurent, int, Fraction)):
            return self.body == other
        return NotImplemented

    def __hash__(self):
        return hash((self.p, self.body))

    def __call__(self, a):
        return self.body(a)

    def __str__(self):
        return str(self.body)


@dataclass(frozen=True)
class NumFun2:
    """A numerical Laurent polynomial in w1, ..., wk (k = body.nvars)."""

    p: int
    body: MultiLaurent

    def __add__(self, other):
        o = other.body if isinstance(other, NumFun2) else other
        return NumFun2(self.p, self.body + o)

    __radd__ = __add__

    def __sub__(self, other):
        o = other.body if isinstance(other, NumFun2) else other
        return NumFun2(self.p, self.body - o)

    def __rsub__(self, other):
        return NumFun2(self.p, other - self.body)

    def __neg__(self):
        return NumFun2(self.p, -self.body)

    def __mul__(self, other):
        o = other.body if isinstance(other, NumFun2) else other
        return NumFun2(self.p, self.body * o)

    __rmul__ = __mul__

    def __truediv__(self, c):
        return NumFun2(self.p, self.body / c)

    def __pow__(self, n: int):
        return NumFun2(self.p, self.body**n)

    def __eq__(self, other):
        if isinstance(other, NumFun2):
            return self.p == other.p and self.body == other.body
        if isinstance(other, (MultiLaurent, int, Fraction)):
            return self.body == other
        return NotImplemented

    def __hash__(self):
        return hash((self.p, self.body))

    def __call__(self, *xs):
        return self.body(*xs)

    def __str__(self):
        return str(self.body)


@dataclass(frozen=True)
class GradedElt:
    """u^n * f(w), an element of degree 2n."""

    n: int
    body: NumFun

    def __add__(self, other):
        if not isinstance(other, GradedElt):
            if self.n != 0:
                raise ValueError("cannot add elements of different degrees")
            return GradedElt(0, self.body + other)
        if other.n != self.n:
            raise ValueError("cannot add elements of different degrees")
        return GradedElt(self.n, self.body + other.body)

    __radd__ = __add__

    def __neg__(self):
        return GradedElt(self.n, -self.body)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, GradedElt):
            return GradedElt(self.n + other.n, self.body * other.body)
        return GradedElt(self.n, self.body * other)

    __rmul__ = __mul__

    def __truediv__(self, c):
        return GradedElt(self.n, self.body / c)

    def __pow__(self, k: int):
        return GradedElt(self.n * k, self.body**k)

    def __str__(self):
        u = "" if self.n == 0 else ("u" if self.n == 1 else f"u^{self.n}")
        if not u:
            return str(self.body)
        b = str(self.body)
        if b == "1":
            return u
        return f"{u}*({b})"


# -- generators ----------------------------------------------------------------


@lru_cache(maxsize=None)
def _theta_body(n: int, p: int, family: str) -> Laurent:
    if n == 0:
        return W if family == THETA else (1 - W) / 2
    t = _theta_body(n - 1, p, family)
    return (t - t**p) / p


def theta(n: int, p: int = 2, family: str = THETA) -> NumFun:
    """theta_n (theta_0 = w) or, at p = 2, Theta_n (Theta_0 = (1-w)/2)."""
    if n < 0:
        raise ValueError("theta index must be >= 0")
    if family == BIG_THETA and p != 2:
        raise ValueError("the Theta family is only defined at p = 2")
    if family not in (THETA, BIG_THETA):
        raise ValueError(f"unknown family {family!r}")
    return NumFun(p, _theta_body(n, p, family))


def w(p: int) -> NumFun:
    return NumFun(p, W)


# -- power operations ------------------------------------------------------------


def Q(f, p: int | None = None):
    """(f - f^p)/p, for NumFun, NumFun2 or a bare Laurent/MultiLaurent (p given)."""
    if isinstance(f, NumFun):
        return NumFun(f.p, Q(f.body, f.p))
    if isinstance(f, NumFun2):
        return NumFun2(f.p, Q(f.body, f.p))
    if p is None:
        raise ValueError("Q needs a prime")
    if isinstance(f, (int, Fraction)):
        f = as_fraction(f)
        return (f - f**p) / p
    return (f - f**p) / p


def Qtilde(f, p: int | None = None):
    if isinstance(f, (NumFun, NumFun2)):
        p = f.p
    return Q(f, p) * p + f**p


def adams(f: NumFun, a) -> NumFun:
    """psi^a f (w) = f(a^-1 w) for a rational unit a."""
    a = _check_unit(a, f.p)
    if isinstance(a, PadicNum):
        raise TypeError("use adams_table for p-adic units")
    return NumFun(f.p, f.body.scale_variable(1 / a))


def adams_table(f: NumFun, a: PadicNum, samples) -> dict:
    """Values of psi^a f at the sample units, as PadicNums."""
    _check_unit(a, f.p)
    ainv = a.inverse()
    out = {}
    for b in samples:
        bb = b if isinstance(b, PadicNum) else PadicNum.from_rational(b, f.p, a.prec)
        out[b] = f.body.eval_padic(ainv * bb)
    return out


def pair(a, f: NumFun):
    """<psi^a | f> = f(a)."""
    a = _check_unit(a, f.p)
    return f.body(a)


def coproduct(f: NumFun) -> NumFun2:
    return NumFun2(f.p, f.body.to_multi((1, 1)))


def antipode(f):
    if isinstance(f, NumFun):
        return NumFun(f.p, f.body.invert_variable())
    raise TypeError("antipode expects a NumFun")


def counit(f: NumFun) -> Fraction:
    return f.body(1)


def dual_action(alpha, f: NumFun) -> NumFun:
    """sum <alpha | chi(x')> x'' computed from the coproduct."""
    alpha = _check_unit(alpha, f.p)
    psi = coproduct(f).body
    chi_first = psi.map_exponents(lambda k: (-k[0], k[1]), 2)
    return NumFun(f.p, chi_first.substitute(0, alpha).to_laurent())


# -- numericality ------------------------------------------------------------------


@dataclass(frozen=True)
class NumericalCertificate:
    numerical: bool
    witness: int | None = None
    value: Fraction | None = None

    def __bool__(self):
        return self.numerical


def is_numerical(f, p: int) -> NumericalCertificate:
    """Decide whether f(a) is p-integral at every p-local unit a.

    Two complete tests, whichever is cheaper: all units mod p^e (e the worst
    coefficient denominator exponent), or the points r + p*j with
    0 < r < p, 0 <= j <= deg, which suffice because a polynomial of degree d
    integral at d+1 consecutive integers is integer-valued.
    """
    body = f.body if isinstance(f, NumFun) else Laurent.coerce(f)
    e = body.max_denominator_valuation(p)
    if e == 0:
        return NumericalCertificate(True)
    span = body.max_exp - body.min_exp
    n_units = (p - 1) * p ** (e - 1)
    n_points = (p - 1) * (span + 1)
    if n_units <= n_points:
        points = (a for a in range(1, p**e + 1) if a % p)
    else:
        points = sorted(r + p * j for r in range(1, p) for j in range(span + 1))
    ev = vp_int(body.denominator, p)
    for a in points:
        if not body.is_p_integral_at(a, p, ev):
            return NumericalCertificate(False, a, body(a))
    return NumericalCertificate(True)


def numfun(body, p: int, check: bool = True) -> NumFun:
    f = NumFun(p, Laurent.coerce(body))
    if check:
        cert = is_numerical(f, p)
        if not cert:
            raise NotPLocal(f"not numerical: value {cert.value} at {cert.witness}")
    return f


# -- primitives and e-invariants -------------------------------------------------


def primitive_check(x: GradedElt) -> bool:
    """f(w1 w2) == f(w1) + w1^n f(w2) as two-variable Laurent polynomials."""
    f = x.body.body
    lhs = f.to_multi((1, 1))
    rhs = f.to_multi((1, 0)) + MultiLaurent.variable(0, 2, x.n) * f.to_multi((0, 1))
    return lhs == rhs


def topological_generators(p: int, prec: int) -> list[PadicNum]:
    if p == 2:
        return [PadicNum.from_int(-1, 2, prec), PadicNum.from_int(3, 2, prec)]
    return [teichmuller(primitive_root(p), p, prec), PadicNum.from_int(1 + p, p, prec)]


def unit_power_valuation(n: int, p: int, prec: int) -> int:
    """min over topological generators alpha of v_p(alpha^n - 1)."""
    resolved, bounds = [], []
    for a in topological_generators(p, prec):
        d = a**n - 1
        if d.is_zero:
            bounds.append(d.val)
        else:
            resolved.append(d.val)
    if not resolved:
        raise PrecisionError(f"every alpha^{n}-1 vanishes to precision {prec}; increase precision")
    k = min(resolved)
    if bounds and k >= min(bounds):
        raise PrecisionError(f"cannot resolve v_{p}(alpha^{n}-1) at precision {prec}; increase precision")
    return k


@dataclass(frozen=True)
class EInvariant:
    p: int
    n: int
    exponent: int
    generator: NumFun
    expansion: object = None  # ThetaBasisExpansion, filled in when requested

    @property
    def order(self) -> int:
        return self.p**self.exponent


def einvariant(n: int, p: int = 2, precision: int = 16, level: int | None = None,
               family: str | None = None) -> EInvariant:
    """Order p^k and generator (1 - w^n)/p^k of the e-invariant group in degree 2n."""
    if n < 1:
        raise ValueError("n must be >= 1")
    k = unit_power_valuation(n, p, precision)
    gen = NumFun(p, (1 - W**n) / p**k)
    if not primitive_check(GradedElt(n, gen)):
        raise AssertionError("e-invariant generator is not primitive")
    expansion = None
    if level is not None:
        from .basis import theta_basis_expand

        expansion = theta_basis_expand(gen, level, precision, family=family)
    return EInvariant(p, n, k, gen, expansion)


# -- Artin-Schreier and etale reduction ------------------------------------------


def artin_schreier_check(s: int, p: int = 2, family: str = THETA) -> Laurent:
    """theta_s^p - theta_s + p theta_(s+1); identically zero."""
    t = theta(s, p, family).body
    return t**p - t + theta(s + 1, p, family).body * p


def _polymul_mod(a: list[int], b: list[int], p: int) -> list[int]:
    """Product in F_p[X]/(X^p - X), coefficient lists of length p."""
    out = [0] * (2 * p - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    # X^k = X^(k-(p-1)) for k >= p
    for k in range(2 * p - 2, p - 1, -1):
        out[k - (p - 1)] += out[k]
        out[k] = 0
    return [c % p for c in out[:p]]


def etale_idempotents(p: int) -> list[list[int]]:
    """e_r = 1 - (X - r)^(p-1) in F_p[X]/(X^p - X), r = 0..p-1 (coefficients low to high)."""
    out = []
    for r in range(p):
        # (X - r)^(p-1) by binomial expansion
        e = [0] * p
        for k in range(p):
            e[k] = -math.comb(p - 1, k) * (-r) ** (p - 1 - k) % p
        e[0] = (e[0] + 1) % p
        out.append(e)
    return out


def check_idempotents(p: int) -> bool:
    es = etale_idempotents(p)
    one = [1] + [0] * (p - 1)
    for i, a in enumerate(es):
        if _polymul_mod(a, a, p) != a:
            return False
        for b in es[i + 1:]:
            if any(_polymul_mod(a, b, p)):
                return False
        # e_r(s) = [r == s]
        for s in range(p):
            if sum(c * s**k for k, c in enumerate(a)) % p != int(s == i):
                return False
    total = [sum(c) % p for c in zip(*es)]
    return total == one


# -- random numerical functions --------------------------------------------------


def random_numfun(p: int, rng: random.Random, terms: int = 3, max_deg: int = 3,
                  max_level: int = 2) -> NumFun:
    """Random integer combination of w^k and theta_s(w^k)."""
    acc = Laurent.const(rng.randint(-5, 5))
    for _ in range(terms):
        k = rng.choice([d for d in range(-max_deg, max_deg + 1) if d])
        c = rng.randint(-9, 9)
        if rng.random() < 0.5:
            acc = acc + Laurent.monomial(k, c)
        else:
            s = rng.randint(1, max_level)
            acc = acc + theta(s, p).body.compose_power(k) * c
    return NumFun(p, acc)


def random_unit(p: int, rng: random.Random, bound: int = 10**6) -> Fraction:
    """Random rational p-adic unit with small numerator and denominator."""
    while True:
        a = Fraction(rng.randint(-bound, bound), rng.randint(1, 50))
        if a and valuation(a, p) == 0:
            return a


def random_plocal(p: int, rng: random.Random) -> Fraction:
    while True:
        a = Fraction(rng.randint(-1000, 1000), rng.randint(1, 60))
        if is_p_integral(a, p):
            return a
