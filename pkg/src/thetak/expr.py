"""Parser and evaluator for the expression language used by the CLI.

Grammar (usual precedence, ^ binds tightest and takes an integer exponent):

    expr   := term (("+" | "-") term)*
    term   := unary (("*" | "/") unary)*
    unary  := "-" unary | power
    power  := atom ("^" "-"? INT | "^" "(" "-"? INT ")")?
    atom   := NUMBER | "(" expr ")" | NAME index? call?
    index  := "[" "-"? INT ("/" INT)? "]"
    call   := "(" expr ")"

Names: w, w1, w2 (coproduct variables), u (Bott element), x<digits> or
x_<digits> (free generators), Theta<n>/theta<n> and Theta[n]/theta[n]
(basis elements), and the functions Q, Qtilde, psi[a], chi, coproduct,
theta[n](e) = Q^n(e), Theta[n](e) = Q^n((1 - e)/2).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .arith import Laurent, MultiLaurent, W
from .free import MixedTensor, ThetaPoly, free_Q, qtilde
from .kk import BIG_THETA, THETA, GradedElt, NumFun, NumFun2, Q, Qtilde, adams, antipode, coproduct, theta


class ParseError(ValueError):
    def __init__(self, msg: str, line: int, col: int):
        super().__init__(f"line {line}, column {col}: {msg}")
        self.line, self.col = line, col


class EvalError(ValueError):
    pass


# -- tokens ------------------------------------------------------------------------

_NAME_START = set("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ_")


@dataclass(frozen=True)
class Tok:
    kind: str  # "num", "name", "op", "end"
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[Tok]:
    toks = []
    line, col = 1, 1
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line, col = line + 1, 1
            i += 1
            continue
        if ch.isspace():
            i += 1
            col += 1
            continue
        j = i
        if ch.isdigit():
            while j < n and text[j].isdigit():
                j += 1
            toks.append(Tok("num", text[i:j], line, col))
        elif ch in _NAME_START:
            while j < n and (text[j] in _NAME_START or text[j].isdigit()):
                j += 1
            toks.append(Tok("name", text[i:j], line, col))
        elif ch in "+-*/^()[]":
            j += 1
            toks.append(Tok("op", ch, line, col))
        else:
            raise ParseError(f"unexpected character {ch!r}", line, col)
        col += j - i
        i = j
    toks.append(Tok("end", "", line, col))
    return toks


# -- AST ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Num:
    value: int


@dataclass(frozen=True)
class Name:
    name: str
    index: Fraction | None = None


@dataclass(frozen=True)
class Call:
    fn: str
    index: Fraction | None
    arg: "Node"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Neg:
    arg: "Node"


@dataclass(frozen=True)
class Pow:
    base: "Node"
    exp: int


Node = Union[Num, Name, Call, BinOp, Neg, Pow]

FUNCTIONS = {"Q", "Qtilde", "psi", "chi", "coproduct", "theta", "Theta"}
INDEXED = {"psi", "theta", "Theta"}


class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Tok:
        return self.toks[self.i]

    def error(self, msg: str, tok: Tok | None = None):
        t = tok or self.tok
        raise ParseError(msg, t.line, t.col)

    def eat(self, text: str) -> Tok:
        t = self.tok
        if t.text != text or t.kind == "num":
            self.error(f"expected {text!r}" + (f", found {t.text!r}" if t.text else ", found end of input"))
        self.i += 1
        return t

    def accept(self, text: str) -> bool:
        if self.tok.kind == "op" and self.tok.text == text:
            self.i += 1
            return True
        return False

    def parse(self) -> Node:
        if self.tok.kind == "end":
            self.error("empty expression")
        node = self.expr()
        if self.tok.kind != "end":
            self.error(f"unexpected {self.tok.text!r}")
        return node

    def expr(self) -> Node:
        node = self.term()
        while self.tok.kind == "op" and self.tok.text in "+-":
            op = self.tok.text
            self.i += 1
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> Node:
        node = self.unary()
        while self.tok.kind == "op" and self.tok.text in "*/":
            op = self.tok.text
            self.i += 1
            node = BinOp(op, node, self.unary())
        return node

    def unary(self) -> Node:
        if self.accept("-"):
            return Neg(self.unary())
        return self.power()

    def signed_int(self) -> int:
        sign = -1 if self.accept("-") else 1
        t = self.tok
        if t.kind != "num":
            self.error("expected an integer")
        self.i += 1
        return sign * int(t.text)

    def power(self) -> Node:
        base = self.atom()
        if self.accept("^"):
            if self.accept("("):
                e = self.signed_int()
                self.eat(")")
            else:
                e = self.signed_int()
            if self.tok.kind == "op" and self.tok.text == "^":
                self.error("chained exponents need parentheses")
            return Pow(base, e)
        return base

    def index(self) -> Fraction:
        n = self.signed_int()
        d = 1
        if self.accept("/"):
            t = self.tok
            d = self.signed_int()
            if d == 0:
                self.error("zero denominator", t)
        self.eat("]")
        return Fraction(n, d)

    def atom(self) -> Node:
        t = self.tok
        if t.kind == "num":
            self.i += 1
            return Num(int(t.text))
        if self.accept("("):
            node = self.expr()
            self.eat(")")
            return node
        if t.kind != "name":
            self.error("expected a number, name or '('" if t.kind != "end" else "unexpected end of input")
        self.i += 1
        name = t.text
        idx = None
        if self.accept("["):
            if name not in INDEXED:
                self.error(f"{name} does not take an index", t)
            idx = self.index()
        if self.tok.kind == "op" and self.tok.text == "(":
            if name not in FUNCTIONS:
                self.error(f"unknown function {name!r}", t)
            if name in INDEXED and idx is None:
                self.error(f"{name} needs an index, e.g. {name}[1]", t)
            self.i += 1
            arg = self.expr()
            self.eat(")")
            return Call(name, idx, arg)
        if name == "psi" or (name in FUNCTIONS and name not in INDEXED):
            self.error(f"{name} must be applied to an argument", t)
        if name in ("theta", "Theta") and idx is None:
            self.error(f"{name} needs an index, e.g. {name}[1]", t)
        if idx is not None and (idx.denominator != 1 or idx < 0):
            self.error("basis index must be a nonnegative integer", t)
        if idx is None and not _known_name(name):
            self.error(f"unknown name {name!r}", t)
        return Name(name, idx)


_GEN = re.compile(r"x_?(\d+)")
_CONST = re.compile(r"(Theta|theta)(\d+)")


def _known_name(name: str) -> bool:
    return name in ("w", "w1", "w2", "u") or bool(_GEN.fullmatch(name) or _CONST.fullmatch(name))


def parse(text: str) -> Node:
    return _Parser(text).parse()


# -- printing ----------------------------------------------------------------------

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2}


def _fmt_index(i: Fraction) -> str:
    return str(i.numerator) if i.denominator == 1 else f"{i.numerator}/{i.denominator}"


def to_text(node: Node, parent: int = 0) -> str:
    """Fully explicit text form; parse(to_text(n)) == n."""
    if isinstance(node, Num):
        return str(node.value)
    if isinstance(node, Name):
        return node.name if node.index is None else f"{node.name}[{_fmt_index(node.index)}]"
    if isinstance(node, Call):
        head = node.fn if node.index is None else f"{node.fn}[{_fmt_index(node.index)}]"
        return f"{head}({to_text(node.arg)})"
    if isinstance(node, Neg):
        s = "-" + to_text(node.arg, 3)
        return f"({s})" if parent > 1 else s
    if isinstance(node, Pow):
        s = f"{to_text(node.base, 4)}^{node.exp}"
        return f"({s})" if parent >= 4 else s
    prec = _PREC[node.op]
    # left-associative: the right operand needs parentheses at equal precedence
    s = f"{to_text(node.left, prec)} {node.op} {to_text(node.right, prec + 1)}"
    return f"({s})" if prec < parent else s


# -- evaluation --------------------------------------------------------------------

Value = Union[Fraction, NumFun, NumFun2, GradedElt, ThetaPoly, MixedTensor]


class Evaluator:
    def __init__(self, p: int = 2):
        self.p = p

    # promotion helpers
    def _numfun(self, x) -> NumFun:
        if isinstance(x, Fraction):
            return NumFun(self.p, Laurent.const(x))
        return x

    def _binop(self, op: str, a: Value, b: Value) -> Value:
        if isinstance(a, Fraction) and isinstance(b, Fraction):
            if op == "/" and b == 0:
                raise EvalError("division by zero")
            return {"+": a + b, "-": a - b, "*": a * b, "/": a / b if b else None}[op]
        if op == "/":
            if isinstance(b, Fraction):
                if b == 0:
                    raise EvalError("division by zero")
                return a * (1 / b) if isinstance(a, (ThetaPoly, MixedTensor)) else a / b
            if isinstance(b, NumFun) and len(b.body) == 1:
                return self._binop("*", a, b**-1)
            if isinstance(b, GradedElt) and len(b.body.body) == 1:
                return self._binop("*", a, GradedElt(-b.n, b.body**-1))
            raise EvalError("can only divide by a rational or a monomial")
        a, b = self._unify(a, b)
        if op == "+":
            return a + b
        if op == "-":
            return a - b
        return a * b

    def _unify(self, a, b):
        kinds = {type(a), type(b)}
        if len(kinds) == 1 or Fraction in kinds and not kinds & {GradedElt, MixedTensor}:
            return a, b
        if kinds & {NumFun2} and kinds - {NumFun2, Fraction}:
            raise EvalError("cannot combine a two-variable function with this value")
        if GradedElt in kinds:
            if kinds & {ThetaPoly, MixedTensor}:
                raise EvalError("cannot combine u with free generators")
            lift = lambda x: x if isinstance(x, GradedElt) else GradedElt(0, self._numfun(x))  # noqa: E731
            return lift(a), lift(b)
        if kinds & {ThetaPoly, MixedTensor}:
            def lift(x):
                if isinstance(x, MixedTensor):
                    return x
                if isinstance(x, ThetaPoly):
                    return MixedTensor.from_poly(x)
                return MixedTensor.const(self.p, self._numfun(x).body)

            if kinds <= {ThetaPoly, Fraction}:
                return a, b
            return lift(a), lift(b)
        return a, b

    def _pow(self, a: Value, n: int) -> Value:
        if isinstance(a, Fraction):
            if a == 0 and n < 0:
                raise EvalError("division by zero")
            return a**n
        if n < 0:
            if isinstance(a, NumFun) and len(a.body) == 1:
                return a**n
            if isinstance(a, GradedElt) and len(a.body.body) == 1:
                return GradedElt(a.n * n, a.body**n)
            raise EvalError("negative powers are only defined for monomials")
        return a**n

    def _const(self, family: str, n: int) -> NumFun:
        fam = BIG_THETA if family == "Theta" else THETA
        try:
            return theta(n, self.p, fam)
        except ValueError as exc:
            raise EvalError(str(exc)) from None

    def _apply(self, fn: str, idx: Fraction | None, x: Value) -> Value:
        p = self.p
        if fn in ("Q", "Qtilde"):
            if isinstance(x, Fraction):
                x = self._numfun(x)
            if isinstance(x, (ThetaPoly, MixedTensor)):
                return free_Q(x) if fn == "Q" else qtilde(x)
            if isinstance(x, (NumFun, NumFun2)):
                return Q(x) if fn == "Q" else Qtilde(x)
            raise EvalError(f"{fn} is not defined on graded elements")
        if fn in ("theta", "Theta"):
            n = int(idx)
            if idx.denominator != 1 or n < 0:
                raise EvalError("index must be a nonnegative integer")
            if fn == "Theta":
                if p != 2:
                    raise EvalError("the Theta family is only defined at p = 2")
                x = self._binop("/", self._binop("-", Fraction(1), x), Fraction(2))
            for _ in range(n):
                x = self._apply("Q", None, x)
            return x
        x = self._numfun(x)
        if not isinstance(x, NumFun):
            raise EvalError(f"{fn} expects a function of w")
        if fn == "psi":
            try:
                return adams(x, idx)
            except ValueError as exc:
                raise EvalError(str(exc)) from None
        if fn == "chi":
            return antipode(x)
        if fn == "coproduct":
            return coproduct(x)
        raise EvalError(f"unknown function {fn}")

    def eval(self, node: Node) -> Value:
        if isinstance(node, Num):
            return Fraction(node.value)
        if isinstance(node, Name):
            return self._name(node)
        if isinstance(node, Neg):
            v = self.eval(node.arg)
            return -v
        if isinstance(node, Pow):
            return self._pow(self.eval(node.base), node.exp)
        if isinstance(node, Call):
            return self._apply(node.fn, node.index, self.eval(node.arg))
        return self._binop(node.op, self.eval(node.left), self.eval(node.right))

    def _name(self, node: Name) -> Value:
        name = node.name
        if node.index is not None:
            return self._const(name, int(node.index))
        if name == "w":
            return NumFun(self.p, W)
        if name in ("w1", "w2"):
            return NumFun2(self.p, MultiLaurent.variable(int(name[1]) - 1, 2))
        if name == "u":
            return GradedElt(1, NumFun(self.p, Laurent.const(1)))
        m = _CONST.fullmatch(name)
        if m:
            return self._const(m.group(1), int(m.group(2)))
        m = _GEN.fullmatch(name)
        if m:
            return ThetaPoly.variable(self.p, f"x{m.group(1)}")
        raise EvalError(f"unknown name {name!r}")


def evaluate(text: str, p: int = 2) -> Value:
    return Evaluator(p).eval(parse(text))


def parse_numfun(text: str, p: int = 2) -> NumFun:
    v = evaluate(text, p)
    if isinstance(v, Fraction):
        return NumFun(p, Laurent.const(v))
    if isinstance(v, GradedElt) and v.n == 0:
        return v.body
    if not isinstance(v, NumFun):
        raise EvalError(f"expected a function of w, got {type(v).__name__}")
    return v


def parse_unit(text: str, p: int) -> Fraction:
    v = evaluate(text, p)
    if not isinstance(v, Fraction):
        raise EvalError("expected a rational number")
    if v == 0 or v.numerator % p == 0 or v.denominator % p == 0:
        raise EvalError(f"{text} is not a {p}-adic unit")
    return v
