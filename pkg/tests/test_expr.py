from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from thetak.arith import W
from thetak.expr import Call, Name, EvalError, ParseError, evaluate, parse, parse_numfun, parse_unit, to_text
from thetak.free import MixedTensor, ThetaPoly
from thetak.kk import BIG_THETA, GradedElt, NumFun, NumFun2, Q, adams, theta


def test_basic_parse_examples():
    assert parse_numfun("(1 - w)/2") == theta(0, 2, BIG_THETA)
    assert isinstance(parse("Q(w^3)"), Call)
    node = parse("psi[3](Theta[1])")
    assert isinstance(node, Call) and node.fn == "psi" and node.index == 3
    assert node.arg == Name("Theta", Fraction(1))


def test_precedence():
    assert evaluate("2 + 3*4^2") == 50
    assert evaluate("-2^2") == -4
    assert evaluate("(1 - 3)/4") == Fraction(-1, 2)
    assert parse_numfun("w^-1 * w") == NumFun(2, W**0)


def test_functions():
    assert evaluate("Q(1)") == 0
    assert parse_numfun("Q(w)") == theta(1, 2)
    assert parse_numfun("Qtilde(Theta1)") == theta(1, 2, BIG_THETA)
    assert parse_numfun("psi[3](Theta[1])") == adams(theta(1, 2, BIG_THETA), 3)
    assert parse_numfun("chi(w^2)") == NumFun(2, W**-2)
    assert parse_numfun("theta[2](w)") == theta(2, 2)
    assert parse_numfun("Theta[2](w)") == theta(2, 2, BIG_THETA)
    assert parse_numfun("Theta2") == parse_numfun("Theta[2]")
    assert parse_numfun("theta[1](w)", 3) == Q(NumFun(3, W))
    assert isinstance(evaluate("coproduct(w)"), NumFun2)
    assert isinstance(evaluate("u^2*Theta1"), GradedElt)
    assert isinstance(evaluate("Q(x2)"), ThetaPoly)
    assert isinstance(evaluate("w*x2"), MixedTensor)


@pytest.mark.parametrize("text,msg", [
    ("(1 - w", "expected"),
    ("1 +", "expected"),
    ("w^^2", "expected"),
    ("psi(w)", "psi needs an index"),
    ("w^2^3", "chained exponents"),
    ("w $ 2", "unexpected character"),
])
def test_syntax_errors(text, msg):
    with pytest.raises(ParseError, match=msg) as exc:
        parse(text)
    assert exc.value.line == 1 and exc.value.col >= 1


def test_error_position_multiline():
    with pytest.raises(ParseError) as exc:
        parse("1 +\n  )")
    assert (exc.value.line, exc.value.col) == (2, 3)


def test_eval_errors():
    with pytest.raises(ParseError, match="unknown name"):
        evaluate("foo")
    with pytest.raises(EvalError):
        evaluate("1/0")
    with pytest.raises(EvalError):
        evaluate("1/(1+w)")
    with pytest.raises(EvalError):
        parse_unit("4", 2)


names = st.sampled_from(["w", "Theta1", "theta[2]", "x2", "u"])
atoms = st.one_of(st.integers(0, 9).map(str), names)


def _expr(children):
    return st.one_of(
        st.tuples(children, st.sampled_from(["+", "-", "*"]), children).map(lambda t: f"({t[0]} {t[1]} {t[2]})"),
        st.tuples(children, st.integers(-2, 3)).map(lambda t: f"({t[0]})^{t[1]}"),
        children.map(lambda c: f"Q({c})"),
        children.map(lambda c: f"-{c}"),
    )


@given(st.recursive(atoms, _expr, max_leaves=6))
def test_print_parse_roundtrip(text):
    node = parse(text)
    assert parse(to_text(node)) == node
    assert to_text(parse(to_text(node))) == to_text(node)


@pytest.mark.parametrize("text", ["Theta[2]", "psi[3](Theta1) - w^-2/5", "coproduct(Q(w))",
                                  "Q(Q(x2))*w + Theta0", "chi(theta[1](w))"])
def test_value_strings_reparse(text):
    v = evaluate(text)
    assert evaluate(str(v)) == v
