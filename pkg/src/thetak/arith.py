"""Exact rational helpers and Laurent polynomial rings over Q.

`Laurent` is a one-variable Laurent polynomial stored as a sparse map
exponent -> integer numerator over a single positive common denominator.
`MultiLaurent` is the n-variable analogue (used for coproducts and other
identities in several tensor factors).
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import reduce
from typing import Iterable, Mapping, Union

try:
    import gmpy2
except ImportError:  # pragma: no cover - gmpy2 is a declared dependency
    gmpy2 = None

Scalar = Union[int, Fraction]

# products with more term pairs than this go through Kronecker substitution
_SCHOOLBOOK_LIMIT = 6000


class NotPLocal(ValueError):
    """Raised when a p-integral rational was required."""


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot interpret {x!r} as a rational")


def vp_int(n: int, p: int) -> int:
    """p-adic valuation of a nonzero integer."""
    if n == 0:
        raise ValueError("vp_int(0)")
    n = abs(n)
    if n % p:
        return 0
    v = 0
    # strip large powers first; matters for 1000-bit denominators
    step, pk = 1, p
    while n % pk == 0:
        n //= pk
        v += step
        step, pk = step * 2, pk * pk
    while n % p == 0:
        n //= p
        v += 1
    return v


def valuation(x, p: int) -> float | int:
    """p-adic valuation of a rational (or PadicNum); math.inf for zero."""
    if hasattr(x, "valuation") and not isinstance(x, (int, Fraction)):
        return x.valuation()
    x = as_fraction(x)
    if x == 0:
        return math.inf
    return vp_int(x.numerator, p) - vp_int(x.denominator, p)


def is_p_integral(x, p: int) -> bool:
    return as_fraction(x).denominator % p != 0


def fermat_quotient(a, p: int) -> Fraction:
    """(a - a^p)/p for a p-integral rational a."""
    a = as_fraction(a)
    if not is_p_integral(a, p):
        raise NotPLocal("not p-local")
    return (a - a**p) / p


def unit_residues(p: int, k: int) -> list[int]:
    """Representatives 1..p^k of (Z/p^k)^x."""
    if k < 1:
        raise ValueError("k must be >= 1")
    return [a for a in range(1, p**k + 1) if a % p]


def legendre(n: int, p: int) -> int:
    """v_p(n!) via digit sums."""
    s, m = 0, n
    while m:
        s += m % p
        m //= p
    return (n - s) // (p - 1)


def multinomial_valuation(p: int, r: int) -> int:
    """v_p of the multinomial coefficient (p^(r+1); p^r, ..., p^r)."""
    return legendre(p ** (r + 1), p) - p * legendre(p**r, p)


def mod_pn(x, p: int, n: int) -> int:
    """Reduce a p-integral rational into [0, p^n)."""
    x = as_fraction(x)
    m = p**n
    if x.denominator % p == 0:
        raise NotPLocal(f"{x} is not p-integral (p={p})")
    return x.numerator * pow(x.denominator, -1, m) % m


def balanced(r: int, m: int) -> int:
    r %= m
    return r - m if r > m // 2 else r


def _fmt_rational(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


# ---------------------------------------------------------------------------
# big integer polynomial products


def _pack(values: list[int], nbytes: int) -> int:
    return int.from_bytes(b"".join(v.to_bytes(nbytes, "little") for v in values), "little")


def _bigmul(x: int, y: int) -> int:
    if gmpy2 is not None:
        return int(gmpy2.mpz(x) * gmpy2.mpz(y))
    return x * y


def _kronecker(a: dict[int, int], b: dict[int, int]) -> dict[int, int]:
    lo_a, lo_b = min(a), min(b)
    na, nb = max(a) - lo_a + 1, max(b) - lo_b + 1
    bound = max(map(abs, a.values())) * max(map(abs, b.values())) * min(na, nb)
    nbytes = (bound.bit_length() + 2 + 7) // 8
    half = 1 << (8 * nbytes - 1)

    def encode(d, lo, n):
        pos = [0] * n
        neg = [0] * n
        for k, v in d.items():
            if v > 0:
                pos[k - lo] = v
            else:
                neg[k - lo] = -v
        return _pack(pos, nbytes) - _pack(neg, nbytes)

    xa = encode(a, lo_a, na)
    xb = xa if a is b else encode(b, lo_b, nb)
    n = na + nb - 1
    prod = _bigmul(xa, xb)
    prod += _pack([half] * n, nbytes)
    raw = prod.to_bytes(n * nbytes, "little")
    out = {}
    lo = lo_a + lo_b
    for i in range(n):
        c = int.from_bytes(raw[i * nbytes:(i + 1) * nbytes], "little") - half
        if c:
            out[lo + i] = c
    return out


def _mul_nums(a: dict[int, int], b: dict[int, int]) -> dict[int, int]:
    if not a or not b:
        return {}
    if len(a) * len(b) > _SCHOOLBOOK_LIMIT:
        return _kronecker(a, b)
    out: dict[int, int] = {}
    for i, x in a.items():
        for j, y in b.items():
            k = i + j
            out[k] = out.get(k, 0) + x * y
    return out


def _normalize(nums: dict, den: int):
    nums = {k: v for k, v in nums.items() if v}
    if not nums:
        return {}, 1
    if den < 0:
        den = -den
        nums = {k: -v for k, v in nums.items()}
    g = den
    for v in nums.values():
        if g == 1:
            break
        g = math.gcd(g, v)
    if g > 1:
        nums = {k: v // g for k, v in nums.items()}
        den //= g
    return nums, den


def _common(coeffs: Mapping) -> tuple[dict, int]:
    fr = {k: as_fraction(v) for k, v in coeffs.items()}
    den = reduce(lambda x, y: x * y // math.gcd(x, y), (c.denominator for c in fr.values()), 1)
    return {k: c.numerator * (den // c.denominator) for k, c in fr.items()}, den


class Laurent:
    """Element of Q[w, w^-1]; immutable."""

    __slots__ = ("_num", "_den", "_hash")

    def __init__(self, coeffs: Mapping[int, Scalar] | None = None):
        nums, den = _common(coeffs or {})
        self._num, self._den = _normalize(nums, den)
        self._hash = None

    @classmethod
    def _raw(cls, nums: dict[int, int], den: int, normalized: bool = False) -> "Laurent":
        obj = cls.__new__(cls)
        obj._num, obj._den = (nums, den) if normalized else _normalize(nums, den)
        obj._hash = None
        return obj

    @classmethod
    def const(cls, c: Scalar) -> "Laurent":
        return cls({0: c})

    @classmethod
    def monomial(cls, k: int, c: Scalar = 1) -> "Laurent":
        return cls({k: c})

    @classmethod
    def coerce(cls, x) -> "Laurent":
        if isinstance(x, Laurent):
            return x
        if isinstance(x, (int, Fraction)):
            return cls.const(x)
        raise TypeError(f"cannot coerce {type(x).__name__} to Laurent")

    # -- inspection ---------------------------------------------------------

    @property
    def denominator(self) -> int:
        return self._den

    @property
    def numerators(self) -> dict[int, int]:
        return dict(self._num)

    @property
    def coeffs(self) -> dict[int, Fraction]:
        return {k: Fraction(v, self._den) for k, v in sorted(self._num.items())}

    def __getitem__(self, k: int) -> Fraction:
        return Fraction(self._num.get(k, 0), self._den)

    def __len__(self) -> int:
        return len(self._num)

    def __bool__(self) -> bool:
        return bool(self._num)

    def is_zero(self) -> bool:
        return not self._num

    @property
    def min_exp(self) -> int:
        return min(self._num)

    @property
    def max_exp(self) -> int:
        return max(self._num)

    def is_constant(self) -> bool:
        return not self._num or set(self._num) == {0}

    def constant_value(self) -> Fraction:
        return self[0]

    def max_denominator_valuation(self, p: int) -> int:
        """max over coefficients of max(0, -v_p(coefficient))."""
        if not self._num:
            return 0
        e = vp_int(self._den, p)
        if e == 0:
            return 0
        g = 0
        for v in self._num.values():
            g = math.gcd(g, v)
        return max(0, e - vp_int(g, p))

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Laurent.const(other)
        if not isinstance(other, Laurent):
            return NotImplemented
        return self._den == other._den and self._num == other._num

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self._den, frozenset(self._num.items())))
        return self._hash

    # -- ring operations ----------------------------------------------------

    def _add(self, other: "Laurent", sign: int) -> "Laurent":
        d1, d2 = self._den, other._den
        g = math.gcd(d1, d2)
        den = d1 // g * d2
        m1, m2 = den // d1, den // d2
        nums = {k: v * m1 for k, v in self._num.items()}
        for k, v in other._num.items():
            nums[k] = nums.get(k, 0) + sign * v * m2
        return Laurent._raw(nums, den)

    def __add__(self, other):
        try:
            other = Laurent.coerce(other)
        except TypeError:
            return NotImplemented
        return self._add(other, 1)

    __radd__ = __add__

    def __sub__(self, other):
        try:
            other = Laurent.coerce(other)
        except TypeError:
            return NotImplemented
        return self._add(other, -1)

    def __rsub__(self, other):
        try:
            other = Laurent.coerce(other)
        except TypeError:
            return NotImplemented
        return other._add(self, -1)

    def __neg__(self) -> "Laurent":
        return Laurent._raw({k: -v for k, v in self._num.items()}, self._den, normalized=True)

    def scale(self, c: Scalar) -> "Laurent":
        c = as_fraction(c)
        return Laurent._raw({k: v * c.numerator for k, v in self._num.items()}, self._den * c.denominator)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, Laurent):
            return NotImplemented
        return Laurent._raw(_mul_nums(self._num, other._num), self._den * other._den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division of Laurent polynomial by zero")
            return self.scale(1 / as_fraction(other))
        if isinstance(other, Laurent) and len(other) == 1:
            (k, v), = other._num.items()
            return self.shift(-k).scale(Fraction(other._den, v))
        return NotImplemented

    def __pow__(self, n: int) -> "Laurent":
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            if len(self) != 1:
                raise ValueError("negative power of a non-monomial")
            (k, v), = self._num.items()
            return Laurent.monomial(k * n, Fraction(self._den, v) ** (-n))
        result = Laurent.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def shift(self, k: int) -> "Laurent":
        """Multiply by w^k."""
        return Laurent._raw({e + k: v for e, v in self._num.items()}, self._den, normalized=True)

    # -- substitutions ------------------------------------------------------

    def scale_variable(self, c: Scalar) -> "Laurent":
        """f(w) -> f(c*w) for nonzero rational c."""
        c = as_fraction(c)
        if c == 0:
            raise ZeroDivisionError("scale_variable(0)")
        return Laurent({k: Fraction(v, self._den) * c**k for k, v in self._num.items()})

    def invert_variable(self) -> "Laurent":
        """f(w) -> f(w^-1)."""
        return Laurent._raw({-k: v for k, v in self._num.items()}, self._den, normalized=True)

    def compose_power(self, m: int) -> "Laurent":
        """f(w) -> f(w^m), m != 0."""
        if m == 0:
            return Laurent.const(self(1))
        return Laurent._raw({k * m: v for k, v in self._num.items()}, self._den, normalized=True)

    def to_multi(self, pattern: tuple[int, ...]) -> "MultiLaurent":
        """Send w^k to the monomial with exponent vector k*pattern."""
        return MultiLaurent._raw(
            {tuple(k * s for s in pattern): v for k, v in self._num.items()}, self._den, len(pattern)
        )

    # -- evaluation ---------------------------------------------------------

    def _numer_at(self, x: int) -> int:
        """sum_k num_k x^(k - min_exp) for an integer x."""
        lo, hi = self.min_exp, self.max_exp
        acc = 0
        num = self._num
        for k in range(hi, lo - 1, -1):
            acc = acc * x + num.get(k, 0)
        return acc

    def __call__(self, x):
        if not isinstance(x, (int, Fraction)):
            if hasattr(x, "p") and hasattr(x, "prec"):
                return self.eval_padic(x)
            x = as_fraction(x)
        if not self._num:
            return Fraction(0)
        lo, hi = self.min_exp, self.max_exp
        if lo < 0 and x == 0:
            raise ZeroDivisionError("negative exponent evaluated at 0")
        x = as_fraction(x)
        n, d = x.numerator, x.denominator
        num = self._num
        if d == 1:
            acc = self._numer_at(n)
        else:
            acc, dpow = 0, 1
            for k in range(hi, lo - 1, -1):
                acc = acc * n + num.get(k, 0) * dpow
                dpow *= d
            acc = Fraction(acc, d ** (hi - lo))
        return Fraction(acc, self._den) * x**lo

    def eval_padic(self, a):
        """Evaluate at a PadicNum unit; precision is tracked by PadicNum arithmetic."""
        from .padic import PadicNum

        if self._num and self.min_exp < 0 and a.valuation() != 0:
            raise ZeroDivisionError("negative exponents need a unit argument")
        total = PadicNum.zero(a.p, a.prec)
        for k, c in self.coeffs.items():
            term = PadicNum.from_rational(c, a.p, a.prec) * (a**k)
            total = total + term
        return total

    def is_p_integral_at(self, x: int, p: int, e: int | None = None) -> bool:
        """v_p(f(x)) >= 0 for an integer unit x (fast path for numericality checks)."""
        if e is None:
            e = vp_int(self._den, p)
        if e == 0 or not self._num:
            return True
        m = p**e
        lo, hi = self.min_exp, self.max_exp
        acc = 0
        num = self._num
        xm = x % m
        for k in range(hi, lo - 1, -1):
            acc = (acc * xm + num.get(k, 0)) % m
        return acc == 0

    # -- display ------------------------------------------------------------

    def __str__(self) -> str:
        return format_laurent(self.coeffs, "w")

    def __repr__(self) -> str:
        return f"Laurent({str(self)!r})"


def _mono_str(var: str, k: int) -> str:
    if k == 0:
        return ""
    if k == 1:
        return var
    return f"{var}^{k}"


def format_terms(terms: Iterable[tuple[Fraction, str]]) -> str:
    """Join (coefficient, monomial-string) pairs as 'a*m + b*n - ...'."""
    parts = []
    for c, mono in terms:
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if mono:
            body = mono if a == 1 else f"{_fmt_rational(a)}*{mono}"
        else:
            body = _fmt_rational(a)
        parts.append((sign, body))
    if not parts:
        return "0"
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


def format_laurent(coeffs: Mapping[int, Fraction], var: str = "w") -> str:
    return format_terms((coeffs[k], _mono_str(var, k)) for k in sorted(coeffs))


class MultiLaurent:
    """Element of Q[w1^+-1, ..., wn^+-1]; immutable."""

    __slots__ = ("_num", "_den", "nvars", "_hash")

    def __init__(self, coeffs: Mapping[tuple[int, ...], Scalar] | None = None, nvars: int = 2):
        nums, den = _common(coeffs or {})
        for k in nums:
            if len(k) != nvars:
                raise ValueError(f"exponent {k} does not have {nvars} entries")
        self._num, self._den = _normalize(nums, den)
        self.nvars = nvars
        self._hash = None

    @classmethod
    def _raw(cls, nums: dict, den: int, nvars: int) -> "MultiLaurent":
        obj = cls.__new__(cls)
        obj._num, obj._den = _normalize(nums, den)
        obj.nvars = nvars
        obj._hash = None
        return obj

    @classmethod
    def const(cls, c: Scalar, nvars: int = 2) -> "MultiLaurent":
        return cls({(0,) * nvars: c}, nvars)

    @classmethod
    def variable(cls, i: int, nvars: int = 2, k: int = 1) -> "MultiLaurent":
        e = [0] * nvars
        e[i] = k
        return cls({tuple(e): 1}, nvars)

    def _coerce(self, x) -> "MultiLaurent":
        if isinstance(x, MultiLaurent):
            if x.nvars != self.nvars:
                raise ValueError("variable count mismatch")
            return x
        if isinstance(x, (int, Fraction)):
            return MultiLaurent.const(x, self.nvars)
        raise TypeError(f"cannot coerce {type(x).__name__} to MultiLaurent")

    @property
    def coeffs(self) -> dict[tuple[int, ...], Fraction]:
        return {k: Fraction(v, self._den) for k, v in sorted(self._num.items())}

    @property
    def denominator(self) -> int:
        return self._den

    def __len__(self) -> int:
        return len(self._num)

    def __bool__(self) -> bool:
        return bool(self._num)

    def is_zero(self) -> bool:
        return not self._num

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = MultiLaurent.const(other, self.nvars)
        if not isinstance(other, MultiLaurent):
            return NotImplemented
        return self.nvars == other.nvars and self._den == other._den and self._num == other._num

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.nvars, self._den, frozenset(self._num.items())))
        return self._hash

    def _add(self, other: "MultiLaurent", sign: int) -> "MultiLaurent":
        d1, d2 = self._den, other._den
        den = d1 // math.gcd(d1, d2) * d2
        m1, m2 = den // d1, den // d2
        nums = {k: v * m1 for k, v in self._num.items()}
        for k, v in other._num.items():
            nums[k] = nums.get(k, 0) + sign * v * m2
        return MultiLaurent._raw(nums, den, self.nvars)

    def __add__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self._add(other, 1)

    __radd__ = __add__

    def __sub__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self._add(other, -1)

    def __rsub__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return other._add(self, -1)

    def __neg__(self) -> "MultiLaurent":
        return MultiLaurent._raw({k: -v for k, v in self._num.items()}, self._den, self.nvars)

    def scale(self, c: Scalar) -> "MultiLaurent":
        c = as_fraction(c)
        return MultiLaurent._raw(
            {k: v * c.numerator for k, v in self._num.items()}, self._den * c.denominator, self.nvars
        )

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, MultiLaurent):
            return NotImplemented
        if other.nvars != self.nvars:
            raise ValueError("variable count mismatch")
        out: dict = {}
        for i, x in self._num.items():
            for j, y in other._num.items():
                k = tuple(a + b for a, b in zip(i, j))
                out[k] = out.get(k, 0) + x * y
        return MultiLaurent._raw(out, self._den * other._den, self.nvars)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(1 / as_fraction(other))
        return NotImplemented

    def __pow__(self, n: int) -> "MultiLaurent":
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        result = MultiLaurent.const(1, self.nvars)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def map_exponents(self, fn, nvars: int) -> "MultiLaurent":
        out: dict = {}
        for k, v in self._num.items():
            nk = tuple(fn(k))
            out[nk] = out.get(nk, 0) + v
        return MultiLaurent._raw(out, self._den, nvars)

    def substitute(self, i: int, value) -> "MultiLaurent":
        """Set variable i to a rational value; the result has one variable fewer."""
        value = as_fraction(value)
        out: dict[tuple, Fraction] = {}
        for k, c in self.coeffs.items():
            nk = k[:i] + k[i + 1:]
            out[nk] = out.get(nk, Fraction(0)) + c * value ** k[i]
        return MultiLaurent(out, self.nvars - 1)

    def to_laurent(self) -> Laurent:
        if self.nvars != 1:
            raise ValueError("only single-variable elements convert to Laurent")
        return Laurent._raw({k[0]: v for k, v in self._num.items()}, self._den)

    def __call__(self, *xs):
        if len(xs) != self.nvars:
            raise ValueError("wrong number of arguments")
        xs = [as_fraction(x) for x in xs]
        total = Fraction(0)
        for k, c in self.coeffs.items():
            t = c
            for x, e in zip(xs, k):
                t *= x**e
            total += t
        return total

    def __str__(self) -> str:
        names = [f"w{i + 1}" for i in range(self.nvars)]
        terms = []
        for k, c in self.coeffs.items():
            mono = "*".join(s for s in (_mono_str(n, e) for n, e in zip(names, k)) if s)
            terms.append((c, mono))
        return format_terms(terms)

    def __repr__(self) -> str:
        return f"MultiLaurent({str(self)!r}, nvars={self.nvars})"


W = Laurent.monomial(1)
