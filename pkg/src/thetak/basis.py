"""Expansion of numerical functions in monomials of the theta_n or Theta_n.

At p = 2 the default family is Theta_0 = (1-w)/2, Theta_n = Q(Theta_(n-1)),
with exponents in {0, 1}. The theta family (theta_0 = w) uses e_0 in
{0..p-2} and e_i in {0..p-1} for i >= 1; e_0 = p-1 is excluded because
w^(p-1) = 1 mod p on units, which would make the evaluation matrix singular.

Coefficients are solved mod p^N from values at one representative of each
unit residue class (mod 2^(l+2) for Theta, mod p^(l+1) for theta), then the
result is certified exactly: f - sum c_e m_e must be p^N times a numerical
function.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .arith import Laurent, balanced, format_terms, mod_pn
from .kk import BIG_THETA, THETA, NumFun, is_numerical, theta
from .modlinalg import SingularModP, inverse_mod, matvec_mod


class BasisError(ArithmeticError):
    pass


def default_family(p: int) -> str:
    return BIG_THETA if p == 2 else THETA


def basis_exponents(p: int, level: int, family: str) -> list[tuple[int, ...]]:
    if family == BIG_THETA:
        ranges = [range(2)] * (level + 1)
    else:
        ranges = [range(p - 1)] + [range(p)] * level
    # e_0 varies fastest; ordering by sum e_i * base^i
    return [tuple(reversed(e)) for e in itertools.product(*reversed(ranges))]


def sample_points(p: int, level: int, family: str) -> list[int]:
    k = level + 2 if family == BIG_THETA else level + 1
    return [a for a in range(1, p**k + 1) if a % p]


def theta_values(x: int, p: int, level: int, N: int, family: str) -> list[int]:
    """theta_s(x) mod p^N for s = 0..level, by iterating (y - y^p)/p on residues."""
    M = N + level
    if family == BIG_THETA:
        big = 2 ** (M + 1)
        y = ((1 - x % big) % big) // 2
    else:
        y = x % p**M
    out = [y % p**N]
    for _ in range(level):
        m = p**M
        y = ((y - pow(y, p, m)) % m) // p
        M -= 1
        out.append(y % p**N)
    return out


def monomial_value(vals: list[int], e: tuple[int, ...], m: int) -> int:
    acc = 1
    for v, k in zip(vals, e):
        if k:
            acc = acc * pow(v, k, m) % m
    return acc


def evaluation_matrix(points, p: int, level: int, N: int, family: str) -> list[list[int]]:
    m = p**N
    exps = basis_exponents(p, level, family)
    rows = []
    for x in points:
        vals = theta_values(x, p, level, N, family)
        rows.append([monomial_value(vals, e, m) for e in exps])
    return rows


@lru_cache(maxsize=64)
def _inverse_at(points: tuple[int, ...], p: int, level: int, N: int, family: str):
    M = evaluation_matrix(points, p, level, N, family)
    try:
        return inverse_mod(M, p, N)
    except SingularModP as exc:
        raise BasisError(f"basis solve failed: increase level ({exc})") from None


def _inverse(p: int, level: int, N: int, family: str):
    return _inverse_at(tuple(sample_points(p, level, family)), p, level, N, family)


@lru_cache(maxsize=None)
def monomial_body(p: int, e: tuple[int, ...], family: str) -> Laurent:
    acc = Laurent.const(1)
    for s, k in enumerate(e):
        if k:
            acc = acc * theta(s, p, family).body ** k
    return acc


def monomial_name(e: tuple[int, ...], family: str) -> str:
    parts = []
    for s, k in enumerate(e):
        if k:
            parts.append(f"{family}[{s}]" + (f"^{k}" if k > 1 else ""))
    return "*".join(parts)


def _degree(e: tuple[int, ...], base: int) -> int:
    return sum(k * base**s for s, k in enumerate(e))


def format_expansion(coeffs: dict[tuple[int, ...], Fraction], family: str, base: int) -> str:
    """Highest w-degree first, so the leading monomial comes first."""
    order = sorted(coeffs, key=lambda e: -_degree(e, base))
    return format_terms((coeffs[e], monomial_name(e, family)) for e in order)


@dataclass
class ThetaBasisExpansion:
    p: int
    level: int
    N: int
    family: str
    coeffs: dict[tuple[int, ...], int] = field(default_factory=dict)  # residues mod p^N
    certified: bool = False

    @property
    def modulus(self) -> int:
        return self.p**self.N

    def balanced_coeffs(self) -> dict[tuple[int, ...], int]:
        m = self.modulus
        return {e: balanced(c, m) for e, c in self.coeffs.items() if c % m}

    def padic_coeffs(self):
        from .padic import PadicNum

        return {e: PadicNum.from_int(c, self.p, self.N) for e, c in self.balanced_coeffs().items()}

    def evaluate(self, a: int) -> int:
        """sum c_e m_e(a) mod p^N at an integer unit a."""
        m = self.modulus
        vals = theta_values(a, self.p, self.level, self.N, self.family)
        return sum(c * monomial_value(vals, e, m) for e, c in self.coeffs.items()) % m

    def to_numfun(self) -> NumFun:
        acc = Laurent()
        for e, c in self.balanced_coeffs().items():
            acc = acc + monomial_body(self.p, e, self.family) * c
        return NumFun(self.p, acc)

    def __str__(self):
        base = 2 if self.family == BIG_THETA else self.p
        return format_expansion({e: Fraction(c) for e, c in self.balanced_coeffs().items()}, self.family, base)

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "level": self.level,
            "precision": self.N,
            "family": self.family,
            "coefficients": [
                {"exponents": list(e), "value": str(c)} for e, c in sorted(self.balanced_coeffs().items())
            ],
            "text": str(self),
        }


def _solve(values: list[int], p: int, level: int, N: int, family: str, points=None) -> dict:
    m = p**N
    inv = _inverse(p, level, N, family) if points is None else _inverse_at(tuple(points), p, level, N, family)
    c = matvec_mod(inv, values, m)
    exps = basis_exponents(p, level, family)
    return {e: x for e, x in zip(exps, c) if x}


def theta_basis_expand(f, level: int, N: int, family: str | None = None, p: int | None = None,
                       certify: bool = True) -> ThetaBasisExpansion:
    """Coefficients c_e mod p^N with f = sum c_e m_e mod p^N on all p-adic units."""
    if not isinstance(f, NumFun):
        f = NumFun(p, Laurent.coerce(f))
    p = f.p
    family = family or default_family(p)
    if family == BIG_THETA and p != 2:
        raise ValueError("the Theta family is only defined at p = 2")
    pts = sample_points(p, level, family)
    values = [mod_pn(f.body(x), p, N) for x in pts]
    exp = ThetaBasisExpansion(p, level, N, family, _solve(values, p, level, N, family))
    if certify:
        residual = f.body - exp.to_numfun().body
        cert = is_numerical(residual / p**N, p)
        if not cert:
            raise BasisError(
                f"level insufficient for requested precision: residual not divisible by "
                f"{p}^{N} at unit {cert.witness}"
            )
        exp.certified = True
    return exp


def interpolate(points: list[int], values: list[int], p: int, level: int, N: int,
                family: str | None = None) -> tuple[ThetaBasisExpansion, list[int]]:
    """Fit basis coefficients to values at arbitrary integer units.

    The first len(basis) points must hit every unit residue class used by
    the basis; the rest are checked. Returns the expansion and the points
    where it disagrees with the given values.
    """
    family = family or default_family(p)
    n = len(basis_exponents(p, level, family))
    if len(points) < n:
        raise BasisError(f"need at least {n} sample points at level {level}")
    m = p**N
    exp = ThetaBasisExpansion(p, level, N, family,
                              _solve([v % m for v in values[:n]], p, level, N, family, points[:n]))
    bad = [x for x, v in zip(points, values) if exp.evaluate(x) != v % m]
    return exp, bad


# -- exact display expansion -----------------------------------------------------


def exact_expansion(f, family: str | None = None, p: int | None = None):
    """Exact rational expansion of a Laurent polynomial as w^k * sum c_e m_e, k <= 0.

    Monomials with digit exponents have distinct w-degrees (sum e_s base^s),
    so a triangular elimination from the top degree is exact. Returns
    (k, {exponents: coefficient}).
    """
    if isinstance(f, NumFun):
        p, body = f.p, f.body
    else:
        body = Laurent.coerce(f)
    family = family or default_family(p)
    base = 2 if family == BIG_THETA else p
    if not body:
        return 0, {}
    k = min(body.min_exp, 0)
    g = body.shift(-k)
    out = {}
    while g:
        d = g.max_exp
        digits, r = [], d
        while r:
            digits.append(r % base)
            r //= base
        e = tuple(digits)
        mono = monomial_body(p, e, family)
        c = g[d] / mono[d]
        out[e] = c
        g = g - mono * c
    return k, out


def display(f, family: str | None = None, p: int | None = None) -> str:
    """Text form in the theta basis, e.g. '8*Theta[2] - 3*Theta[1]'."""
    if isinstance(f, NumFun):
        p = f.p
    family = family or default_family(p)
    base = 2 if family == BIG_THETA else p
    k, coeffs = exact_expansion(f, family, p)
    text = format_expansion(coeffs, family, base)
    if k == 0:
        return text
    shift = f"w^{k}"
    if text == "1":
        return shift
    return f"{shift}*({text})"
