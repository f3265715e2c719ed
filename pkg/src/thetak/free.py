"""Free theta-algebras on even generators and their K∨₀K-coactions.

A variable is a pair (generator name, s) standing for theta^s(g) = Q^s(g).
Monomials are sorted tuples of ((name, s), exponent).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .arith import Laurent, MultiLaurent, W, _fmt_rational, as_fraction, format_terms, is_p_integral
from .basis import exact_expansion, format_expansion
from .kk import BIG_THETA, THETA, NumFun, NumFun2, Q, coproduct, is_numerical, theta

Var = tuple[str, int]
Mono = tuple[tuple[Var, int], ...]

ONE: Mono = ()


class CoactionError(ArithmeticError):
    pass


def mono_mul(a: Mono, b: Mono) -> Mono:
    d = dict(a)
    for v, k in b:
        d[v] = d.get(v, 0) + k
    return tuple(sorted(d.items()))


def mono_degree(m: Mono) -> int:
    return sum(k for _, k in m)


def var_name(v: Var) -> str:
    g, s = v
    out = g
    for _ in range(s):
        out = f"Q({out})"
    return out


def mono_name(m: Mono) -> str:
    return "*".join(var_name(v) + (f"^{k}" if k > 1 else "") for v, k in m)


def _gen_index(name: str) -> tuple:
    m = re.fullmatch(r"x_?(\d+)", name)
    return (0, int(m.group(1)), name) if m else (1, 0, name)


def _sort_key(p: int):
    def key(m: Mono):
        weighted = sum(k * p**s for (_, s), k in m)
        levels = tuple(sorted((-s for (_, s), _ in m)))
        gens = tuple(_gen_index(g) for (g, _), _ in m)
        return (-weighted, levels, gens)

    return key


class _Poly:
    """Polynomial in theta-variables with coefficients in a commutative ring."""

    __slots__ = ("p", "terms")
    _zero = Fraction(0)

    def __init__(self, p: int, terms=None):
        self.p = p
        self.terms = {m: c for m, c in (terms or {}).items() if c}

    def _coerce_coeff(self, c):
        return as_fraction(c)

    def _new(self, terms):
        return type(self)(self.p, terms)

    def _coerce(self, other):
        if isinstance(other, type(self)):
            if other.p != self.p:
                raise ValueError("prime mismatch")
            return other
        return self._new({ONE: self._coerce_coeff(other)})

    @classmethod
    def variable(cls, p: int, gen: str, s: int = 0):
        return cls(p, {(((gen, s), 1),): cls._one()})

    @classmethod
    def _one(cls):
        return Fraction(1)

    @classmethod
    def const(cls, p: int, c):
        obj = cls(p)
        return obj._new({ONE: obj._coerce_coeff(c)})

    def __add__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out[m] + c if m in out else c
        return self._new(out)

    __radd__ = __add__

    def __neg__(self):
        return self._new({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self._new({m: c * other for m, c in self.terms.items()})
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        out = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = mono_mul(m1, m2)
                c = c1 * c2
                out[m] = out[m] + c if m in out else c
        return self._new(out)

    __rmul__ = __mul__

    def __truediv__(self, c):
        c = as_fraction(c)
        return self._new({m: x / c for m, x in self.terms.items()})

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        result = self._new({ONE: self._one()})
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self.p == other.p and self.terms == other.terms

    def __hash__(self):
        return hash((self.p, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def variables(self) -> set[Var]:
        return {v for m in self.terms for v, _ in m}

    def generators(self) -> set[str]:
        return {g for g, _ in self.variables()}

    def sorted_terms(self):
        key = _sort_key(self.p)
        return [(m, self.terms[m]) for m in sorted(self.terms, key=key)]


class ThetaPoly(_Poly):
    """Element of Z_(p)[theta^s(g)] with rational p-integral coefficients."""

    __slots__ = ()

    def is_p_integral(self) -> bool:
        return all(is_p_integral(c, self.p) for c in self.terms.values())

    def __str__(self):
        return format_terms((c, mono_name(m)) for m, c in self.sorted_terms())

    def __repr__(self):
        return f"ThetaPoly({str(self)!r}, p={self.p})"

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "terms": [
                {"monomial": [[g, s, k] for (g, s), k in m], "coeff": _fmt_rational(c)}
                for m, c in self.sorted_terms()
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> "ThetaPoly":
        terms = {}
        for t in data["terms"]:
            m = tuple(sorted(((g, s), k) for g, s, k in t["monomial"]))
            terms[m] = Fraction(t["coeff"])
        return cls(data["p"], terms)


class MixedTensor(_Poly):
    """Element of K∨₀K ⊗ Z_(p)[theta^s(g)]: monomial -> Laurent coefficient."""

    __slots__ = ()

    def _coerce_coeff(self, c):
        if isinstance(c, NumFun):
            return c.body
        return Laurent.coerce(c)

    def _coerce(self, other):
        if isinstance(other, ThetaPoly):
            return MixedTensor(self.p, {m: Laurent.const(c) for m, c in other.terms.items()})
        return super()._coerce(other)

    @classmethod
    def _one(cls):
        return Laurent.const(1)

    @classmethod
    def from_poly(cls, e: ThetaPoly) -> "MixedTensor":
        return cls(e.p, {m: Laurent.const(c) for m, c in e.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (Laurent, NumFun)):
            other = self._new({ONE: self._coerce_coeff(other)})
        return super().__mul__(other)

    __rmul__ = __mul__

    def counit(self) -> ThetaPoly:
        """Evaluate the K∨₀K factor at w = 1."""
        return ThetaPoly(self.p, {m: c(1) for m, c in self.terms.items()})

    def __str__(self):
        return format_mixed(self)

    def __repr__(self):
        return f"MixedTensor({str(self)!r}, p={self.p})"

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "terms": [
                {
                    "monomial": [[g, s, k] for (g, s), k in m],
                    "coeff": {str(e): _fmt_rational(x) for e, x in c.coeffs.items()},
                    "text": coefficient_text(c, self.p),
                }
                for m, c in self.sorted_terms()
            ],
            "text": str(self),
        }

    @classmethod
    def from_json(cls, data: dict) -> "MixedTensor":
        terms = {}
        for t in data["terms"]:
            m = tuple(sorted(((g, s), k) for g, s, k in t["monomial"]))
            terms[m] = Laurent({int(e): Fraction(x) for e, x in t["coeff"].items()})
        return cls(data["p"], terms)


# -- display of K∨₀K coefficients ------------------------------------------------


def _compact(family: str, base: int):
    def name(e):
        parts = []
        for s, k in enumerate(e):
            if k:
                parts.append(f"{family}{s}" + (f"^{k}" if k > 1 else ""))
        return "*".join(parts)

    return name


def coefficient_terms(c: Laurent, p: int) -> tuple[int, list[tuple[Fraction, str]]]:
    """w^k times a theta-basis expansion, with k the lowest exponent of c."""
    family = BIG_THETA if p == 2 else THETA
    k = c.min_exp
    _, coeffs = exact_expansion(NumFun(p, c.shift(-k)), family)
    base = 2 if family == BIG_THETA else p
    name = _compact(family, base)
    order = sorted(coeffs, key=lambda e: -sum(x * base**s for s, x in enumerate(e)))
    return k, [(coeffs[e], name(e)) for e in order]


def _wpow(k: int) -> str:
    return "" if k == 0 else ("w" if k == 1 else f"w^{k}")


def _join(*parts: str) -> str:
    return "*".join(x for x in parts if x)


def coefficient_text(c: Laurent, p: int) -> str:
    k, terms = coefficient_terms(c, p)
    inner = format_terms(terms)
    if len(terms) == 1:
        a, m = terms[0]
        return format_terms([(a, _join(_wpow(k), m))])
    return _join(_wpow(k), f"({inner})") if k else inner


def format_mixed(t: MixedTensor) -> str:
    out = []
    for m, c in t.sorted_terms():
        k, terms = coefficient_terms(c, t.p)
        if len(terms) == 1:
            a, name = terms[0]
            out.append((a, _join(_wpow(k), name, mono_name(m))))
        else:
            out.append((Fraction(1), _join(_wpow(k), "(" + format_terms(terms) + ")", mono_name(m))))
    return format_terms(out)


# -- theta-operations on free algebras -------------------------------------------


def _qtilde_var(p: int, v: Var, cls):
    g, s = v
    x = cls.variable(p, g, s)
    return cls.variable(p, g, s + 1) * p + x**p


def qtilde(e):
    """The additive and multiplicative Frobenius lift; identity on K∨₀K coefficients."""
    cls = type(e)
    acc = cls(e.p)
    cache = {}
    for m, c in e.terms.items():
        term = cls(e.p, {ONE: c})
        for v, k in m:
            if v not in cache:
                cache[v] = _qtilde_var(e.p, v, cls)
            term = term * cache[v] ** k
        acc = acc + term
    return acc


def free_Q(e):
    """Q(e) = (Qtilde(e) - e^p)/p, with the division checked."""
    p = e.p
    diff = qtilde(e) - e**p
    if isinstance(e, ThetaPoly):
        if not all(is_p_integral(c / p, p) for c in diff.terms.values()):
            raise ArithmeticError("internal error: Q produced a non p-integral coefficient")
        return diff / p
    out = diff / p
    for m, c in out.terms.items():
        cert = is_numerical(c, p)
        if not cert:
            raise CoactionError(
                f"coaction data inconsistent: coefficient of {mono_name(m) or '1'} "
                f"is not numerical (value {cert.value} at {cert.witness})"
            )
    return out


def theta_var(p: int, gen: str, s: int = 0) -> ThetaPoly:
    return ThetaPoly.variable(p, gen, s)


def as_quotient_normal_form(e: ThetaPoly) -> ThetaPoly:
    """Rewrite (theta^s x)^p -> theta^s x - p theta^(s+1) x until all exponents are < p."""
    p = e.p

    @lru_cache(maxsize=None)
    def nf(m: Mono) -> tuple:
        for i, (v, k) in enumerate(m):
            if k >= p:
                g, s = v
                rest = m[:i] + (((v, k - p),) if k > p else ()) + m[i + 1:]
                out = {}
                for mm, c in nf(mono_mul(rest, ((v, 1),))):
                    out[mm] = out.get(mm, 0) + c
                for mm, c in nf(mono_mul(rest, (((g, s + 1), 1),))):
                    out[mm] = out.get(mm, 0) - p * c
                return tuple((mm, c) for mm, c in out.items() if c)
        return ((m, 1),)

    out: dict = {}
    for m, c in e.terms.items():
        for mm, cc in nf(m):
            out[mm] = out.get(mm, 0) + c * cc
    return ThetaPoly(p, out)


def artin_schreier_relation(p: int, gen: str, s: int) -> ThetaPoly:
    x = theta_var(p, gen, s)
    return x**p - x + theta_var(p, gen, s + 1) * p


# -- coactions ---------------------------------------------------------------------


@dataclass(frozen=True)
class ThetaGen:
    """Generator x_(2m) with coaction Psi(x) = w^twist ⊗ x + c ⊗ 1."""

    name: str
    degree: int
    twist: int
    c: NumFun

    @property
    def m(self) -> int:
        return self.degree // 2


def preset_generators(p: int = 2) -> dict[str, ThetaGen]:
    if p != 2:
        raise ValueError("the eta, nu, sigma coactions are defined at p = 2")
    T = lambda n: theta(n, 2, BIG_THETA)  # noqa: E731
    return {
        "eta": ThetaGen("x2", 2, 1, T(0)),
        "nu": ThetaGen("x4", 4, 2, T(1) * 2),
        "sigma": ThetaGen("x8", 8, 4, T(2) * 2 - T(1) ** 2 * 3),
    }


class Coaction:
    """Psi on a free theta-algebra, memoized on theta^s(g)."""

    def __init__(self, p: int, gens: dict[str, ThetaGen] | list[ThetaGen]):
        if not isinstance(gens, dict):
            gens = {g.name: g for g in gens}
        self.p = p
        self.gens = {g.name: g for g in gens.values()}
        self._cache: dict[Var, MixedTensor] = {}

    def of_var(self, v: Var) -> MixedTensor:
        if v in self._cache:
            return self._cache[v]
        g, s = v
        if g not in self.gens:
            raise KeyError(f"no coaction data for generator {g}")
        if s == 0:
            gen = self.gens[g]
            out = MixedTensor(self.p, {((v, 1),): W**gen.twist}) + gen.c.body
        else:
            out = free_Q(self.of_var((g, s - 1)))
        self._cache[v] = out
        return out

    def __call__(self, e) -> MixedTensor:
        if isinstance(e, MixedTensor):
            raise TypeError("coaction expects a ThetaPoly")
        acc = MixedTensor(self.p)
        for m, c in e.terms.items():
            term = MixedTensor.const(self.p, Laurent.const(c))
            for v, k in m:
                term = term * self.of_var(v) ** k
            acc = acc + term
        return acc


def coaction(e: ThetaPoly, generators) -> MixedTensor:
    return Coaction(e.p, generators)(e)


def specialize(e, assignment: dict[str, NumFun]):
    """theta^s(g) -> Q^s(assignment[g]); on a MixedTensor acts on the second factor."""
    p = e.p
    cache: dict[Var, NumFun] = {}

    def val(v: Var) -> NumFun:
        if v not in cache:
            g, s = v
            cache[v] = NumFun(p, assignment[g].body) if s == 0 else Q(val((g, s - 1)))
        return cache[v]

    if isinstance(e, MixedTensor):
        acc = MultiLaurent(nvars=2)
        for m, c in e.terms.items():
            t = c.to_multi((1, 0))
            for v, k in m:
                t = t * (val(v).body ** k).to_multi((0, 1))
            acc = acc + t
        return NumFun2(p, acc)
    acc = Laurent()
    for m, c in e.terms.items():
        t = Laurent.const(c)
        for v, k in m:
            t = t * val(v).body ** k
        acc = acc + t
    return NumFun(p, acc)


def comodule_morphism_check(e: ThetaPoly, assignment: dict[str, NumFun], generators) -> bool:
    """Psi_kk(specialize(e)) == (id ⊗ specialize)(Psi(e))."""
    lhs = coproduct(specialize(e, assignment))
    rhs = specialize(coaction(e, generators), assignment)
    return lhs == rhs


def coassociativity_check(e: ThetaPoly, generators) -> bool:
    """(Psi_kk ⊗ id) Psi(e) == (id ⊗ Psi) Psi(e), compared monomial by monomial."""
    psi = Coaction(e.p, generators)
    first = psi(e)
    left: dict[Mono, MultiLaurent] = {}
    for m, c in first.terms.items():
        left[m] = c.to_multi((1, 1))
    right: dict[Mono, MultiLaurent] = {}
    for m, c in first.terms.items():
        inner = psi(ThetaPoly(e.p, {m: Fraction(1)}))
        a = c.to_multi((1, 0))
        for mm, cc in inner.terms.items():
            t = a * cc.to_multi((0, 1))
            right[mm] = right[mm] + t if mm in right else t
    clean = lambda d: {k: v for k, v in d.items() if v}  # noqa: E731
    return clean(left) == clean(right)


def eta_assignment() -> dict[str, NumFun]:
    return {"x2": theta(0, 2, BIG_THETA)}
