"""Truncated p-adic numbers with capped relative precision."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction

from .arith import as_fraction, vp_int


class PrecisionError(ArithmeticError):
    pass


@dataclass(frozen=True)
class PadicNum:
    """p^val * unit, with unit known modulo p^prec.

    An element that is zero to the known precision has unit == 0, prec == 0
    and val equal to its absolute precision (it is only known to be
    divisible by p^val).
    """

    p: int
    val: int
    unit: int
    prec: int

    def __post_init__(self):
        if self.prec < 0:
            raise ValueError("negative precision")
        if self.prec and self.unit % self.p == 0:
            raise ValueError("unit part divisible by p")

    # -- construction -------------------------------------------------------

    @classmethod
    def zero(cls, p: int, abs_prec: int) -> "PadicNum":
        return cls(p, abs_prec, 0, 0)

    @classmethod
    def from_rational(cls, x, p: int, prec: int) -> "PadicNum":
        x = as_fraction(x)
        if x == 0:
            return cls.zero(p, prec)
        v = vp_int(x.numerator, p) - vp_int(x.denominator, p)
        n, d = x.numerator, x.denominator
        if v > 0:
            n //= p**v
        elif v < 0:
            d //= p ** (-v)
        m = p**prec
        return cls(p, v, n * pow(d, -1, m) % m, prec)

    @classmethod
    def from_int(cls, a: int, p: int, prec: int) -> "PadicNum":
        return cls.from_rational(Fraction(a), p, prec)

    @classmethod
    def random_unit(cls, p: int, prec: int, rng: random.Random) -> "PadicNum":
        m = p**prec
        while True:
            u = rng.randrange(1, m)
            if u % p:
                return cls(p, 0, u, prec)

    # -- inspection ---------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return self.prec == 0

    @property
    def abs_prec(self) -> int:
        return self.val + self.prec

    def valuation(self):
        return math.inf if self.is_zero else self.val

    def residue(self, n: int | None = None) -> int:
        """The value mod p^n (default: mod p^abs_prec); requires val >= 0."""
        if n is None:
            n = self.abs_prec
        if n > self.abs_prec:
            raise PrecisionError(f"requested p^{n} but only known mod p^{self.abs_prec}")
        if self.is_zero:
            return 0
        if self.val < 0:
            raise PrecisionError("negative valuation has no residue")
        return self.unit * self.p**self.val % self.p**n

    def _check(self, other) -> "PadicNum":
        if isinstance(other, (int, Fraction)):
            # exact scalars get enough digits never to limit the result
            x = as_fraction(other)
            if x == 0:
                return PadicNum.zero(self.p, max(self.abs_prec, 0) + 1)
            v = vp_int(x.numerator, self.p) - vp_int(x.denominator, self.p)
            return PadicNum.from_rational(x, self.p, max(self.prec, self.abs_prec - v, 1))
        if not isinstance(other, PadicNum):
            raise TypeError(f"cannot combine PadicNum with {type(other).__name__}")
        if other.p != self.p:
            raise ValueError("prime mismatch")
        return other

    # -- arithmetic ---------------------------------------------------------

    def __neg__(self) -> "PadicNum":
        if self.is_zero:
            return self
        m = self.p**self.prec
        return PadicNum(self.p, self.val, (-self.unit) % m, self.prec)

    def __add__(self, other) -> "PadicNum":
        try:
            other = self._check(other)
        except TypeError:
            return NotImplemented
        p = self.p
        absp = min(self.abs_prec, other.abs_prec)
        v = min(self.val, other.val)
        if absp <= v:
            return PadicNum.zero(p, absp)
        m = p ** (absp - v)
        s = 0
        for x in (self, other):
            if not x.is_zero:
                s += x.unit * p ** (x.val - v)
        s %= m
        if s == 0:
            return PadicNum.zero(p, absp)
        k = vp_int(s, p)
        prec = absp - v - k
        return PadicNum(p, v + k, (s // p**k) % p**prec, prec)

    __radd__ = __add__

    def __sub__(self, other) -> "PadicNum":
        try:
            other = self._check(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "PadicNum":
        return self._check(other) - self

    def __mul__(self, other) -> "PadicNum":
        try:
            other = self._check(other)
        except TypeError:
            return NotImplemented
        p = self.p
        if self.is_zero or other.is_zero:
            # known divisible by p^(absolute precision of the product)
            if self.is_zero and other.is_zero:
                return PadicNum.zero(p, self.val + other.val)
            z, x = (self, other) if self.is_zero else (other, self)
            return PadicNum.zero(p, z.val + x.val)
        prec = min(self.prec, other.prec)
        return PadicNum(p, self.val + other.val, self.unit * other.unit % p**prec, prec)

    __rmul__ = __mul__

    def inverse(self) -> "PadicNum":
        if self.is_zero:
            raise PrecisionError("inverse of an element indistinguishable from zero")
        return PadicNum(self.p, -self.val, pow(self.unit, -1, self.p**self.prec), self.prec)

    def __truediv__(self, other) -> "PadicNum":
        other = self._check(other)
        return self * other.inverse()

    def __rtruediv__(self, other) -> "PadicNum":
        return self._check(other) * self.inverse()

    def __pow__(self, n: int) -> "PadicNum":
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        if n == 0:
            return PadicNum(self.p, 0, 1, self.prec or 1)
        if self.is_zero:
            return PadicNum.zero(self.p, self.val * n)
        return PadicNum(self.p, self.val * n, pow(self.unit, n, self.p**self.prec), self.prec)

    def __repr__(self) -> str:
        if self.is_zero:
            return f"O({self.p}^{self.val})"
        return f"{self.p}^{self.val}*{self.unit} + O({self.p}^{self.abs_prec})"


def teichmuller(a: int, p: int, prec: int) -> PadicNum:
    """Teichmuller lift of a mod p, as a p-adic unit to precision prec."""
    if a % p == 0:
        raise ValueError("Teichmuller lift of a non-unit")
    m = p**prec
    return PadicNum(p, 0, pow(a, p ** (prec - 1), m), prec)


def primitive_root(p: int) -> int:
    if p == 2:
        return 1
    factors = [q for q in range(2, p) if (p - 1) % q == 0 and all(q % r for r in range(2, q))]
    for g in range(2, p):
        if all(pow(g, (p - 1) // q, p) != 1 for q in factors):
            return g
    raise ValueError(f"{p} is not prime")
