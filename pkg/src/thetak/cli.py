"""Command-line front end: thetak [global flags] <command> ..."""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from fractions import Fraction

from .arith import _fmt_rational
from .basis import BasisError, display, theta_basis_expand
from .comodule import ComoduleError, comodule_to_action, invariants, load_fixture
from .expr import EvalError, ParseError, evaluate, parse_numfun, parse_unit
from .free import CoactionError, MixedTensor, ThetaPoly, coaction, preset_generators
from .kk import BIG_THETA, THETA, NumFun, Q, Qtilde, adams, antipode, coproduct, einvariant, is_numerical, theta
from .ko import ko_basis_check
from .suites import SUITES, SuiteConfig, run_suite


class CliError(Exception):
    pass


def _default_p() -> int:
    env = os.environ.get("THETAK_DEFAULT_P")
    return int(env) if env else 2


def _is_prime(n: int) -> bool:
    return n >= 2 and all(n % d for d in range(2, int(n**0.5) + 1))


def _prime(text: str) -> int:
    try:
        p = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if not _is_prime(p):
        raise argparse.ArgumentTypeError(f"{p} is not prime")
    return p


def _global_flags(suppress: bool) -> argparse.ArgumentParser:
    # Shared by the main parser and every subparser so flags may come before or
    # after the command; SUPPRESS keeps a subparser from clobbering earlier values.
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    g = argparse.ArgumentParser(add_help=False)
    g.add_argument("--p", type=_prime, default=d(_default_p()), help="prime (default 2, or $THETAK_DEFAULT_P)")
    g.add_argument("--precision", type=int, default=d(16), help="p-adic precision N (default 16)")
    g.add_argument("--level", type=int, default=d(6), help="basis level (default 6)")
    g.add_argument("--format", choices=("text", "json"), default=d("text"))
    g.add_argument("--seed", type=int, default=d(0), help="seed for randomized suites")
    g.add_argument("--trials", type=int, default=d(200), help="trials per prime for randomized suites")
    return g


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="thetak", parents=[_global_flags(False)],
                                     description="Exact computations in the K-theory cooperation algebra.")
    common = [_global_flags(True)]
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    s = sub.add_parser("eval", parents=common, help="evaluate an expression, optionally at a unit")
    s.add_argument("expr")
    s.add_argument("rest", nargs="*", metavar="at UNIT")

    s = sub.add_parser("apply", parents=common, help="apply q, qtilde, chi, coproduct or psi <a>")
    s.add_argument("op", choices=("q", "qtilde", "chi", "coproduct", "psi"))
    s.add_argument("args", nargs="+", metavar="[a] expr")

    s = sub.add_parser("theta", parents=common, help="print theta_n or Theta_n")
    s.add_argument("n", type=int)
    s.add_argument("--family", choices=(THETA, BIG_THETA), default=None)

    s = sub.add_parser("expand", parents=common, help="expand in the theta basis mod p^N")
    s.add_argument("expr")
    s.add_argument("--family", choices=(THETA, BIG_THETA), default=None)

    s = sub.add_parser("is-numerical", parents=common, help="decide numericality")
    s.add_argument("expr")

    s = sub.add_parser("einvariant", parents=common, help="order and generator of the e-invariant group")
    s.add_argument("n", type=int)

    s = sub.add_parser("coaction", parents=common, help="coaction for S//eta, S//nu, S//sigma")
    s.add_argument("spectrum", choices=("eta", "nu", "sigma"))
    s.add_argument("expr")

    s = sub.add_parser("ko", parents=common, help="real K-theory experiments")
    s.add_argument("action", choices=("check-basis",))

    s = sub.add_parser("comodule", parents=common, help="comodule/action dictionary")
    s.add_argument("action", choices=("to-action", "invariants"))
    s.add_argument("fixture")
    s.add_argument("--gamma", default="3", help="unit for to-action (default 3)")

    s = sub.add_parser("verify", parents=common, help="run a verification suite")
    s.add_argument("suite", choices=sorted(SUITES) + ["all"])
    return parser


# -- commands ------------------------------------------------------------------


def _value_text(v) -> str:
    if isinstance(v, Fraction):
        return _fmt_rational(v)
    return str(v)


def _as_numfun(v, p: int) -> NumFun:
    if isinstance(v, Fraction):
        return parse_numfun(_fmt_rational(v), p)
    if not isinstance(v, NumFun):
        raise CliError("expected a function of w")
    return v


def cmd_eval(a) -> dict:
    v = evaluate(a.expr, a.p)
    if not a.rest:
        return {"value": _value_text(v)}
    if len(a.rest) != 2 or a.rest[0] != "at":
        raise CliError("usage: eval <expr> [at <unit>]")
    x = parse_unit(a.rest[1], a.p)
    f = _as_numfun(v, a.p)
    return {"value": _fmt_rational(f(x)), "at": _fmt_rational(x)}


def cmd_apply(a) -> dict:
    if a.op == "psi":
        if len(a.args) != 2:
            raise CliError("usage: apply psi <a> <expr>")
        unit = parse_unit(a.args[0], a.p)
        return {"value": str(adams(_as_numfun(evaluate(a.args[1], a.p), a.p), unit))}
    if len(a.args) != 1:
        raise CliError(f"usage: apply {a.op} <expr>")
    v = evaluate(a.args[0], a.p)
    if a.op in ("q", "qtilde"):
        if isinstance(v, (ThetaPoly, MixedTensor)):
            from .free import free_Q, qtilde

            r = free_Q(v) if a.op == "q" else qtilde(v)
        else:
            f = v if not isinstance(v, Fraction) else _as_numfun(v, a.p)
            r = Q(f) if a.op == "q" else Qtilde(f)
    elif a.op == "chi":
        r = antipode(_as_numfun(v, a.p))
    else:
        r = coproduct(_as_numfun(v, a.p))
    return {"value": str(r)}


def cmd_theta(a) -> dict:
    family = a.family or (BIG_THETA if a.p == 2 else THETA)
    t = theta(a.n, a.p, family)
    return {"name": f"{family}[{a.n}]", "value": str(t)}


def cmd_expand(a) -> dict:
    f = _as_numfun(evaluate(a.expr, a.p), a.p)
    exp = theta_basis_expand(f, a.level, a.precision, family=a.family)
    d = exp.to_json()
    d["value"] = d.pop("text")
    return d


def cmd_is_numerical(a) -> dict:
    f = _as_numfun(evaluate(a.expr, a.p), a.p)
    cert = is_numerical(f.body, a.p)
    d = {"value": "yes" if cert.numerical else "no", "numerical": cert.numerical}
    if not cert.numerical:
        d["witness"] = _fmt_rational(Fraction(cert.witness))
        d["value_at_witness"] = _fmt_rational(cert.value)
        d["value"] = f"no: value {d['value_at_witness']} at {d['witness']}"
    return d


def cmd_einvariant(a) -> dict:
    e = einvariant(a.n, a.p, a.precision)
    gen = display(e.generator)
    return {
        "value": f"order {e.order}, generator {gen}",
        "order": e.order,
        "generator": gen,
        "generator_laurent": str(e.generator),
    }


def cmd_coaction(a) -> dict:
    gens = preset_generators(a.p)
    g = gens[a.spectrum]
    e = evaluate(a.expr, a.p)
    if isinstance(e, Fraction):
        e = ThetaPoly.const(a.p, e)
    if not isinstance(e, ThetaPoly):
        raise CliError(f"expected a polynomial in {g.name} and its Q-iterates")
    r = coaction(e, [g])
    d = r.to_json()
    d["value"] = d.pop("text")
    return d


def cmd_ko(a) -> dict:
    rep = ko_basis_check()
    d = rep.to_json()
    d["value"] = "\n".join(rep.lines())
    return d


def cmd_comodule(a) -> dict:
    M = load_fixture(a.fixture)
    if a.action == "to-action":
        g = parse_unit(a.gamma, M.p)
        A = comodule_to_action(M, g)
        return {"gamma": _fmt_rational(g), "modulus": f"{M.p}^{M.N}", "matrix": A,
                "value": "\n".join(" ".join(str(x) for x in row) for row in A)}
    inv = invariants(M)
    text = "\n".join(" ".join(str(x) for x in v) for v in inv) if inv else "0"
    return {"modulus": f"{M.p}^{M.N}", "generators": inv, "value": text}


def cmd_verify(a) -> tuple[dict, bool]:
    cfg = SuiteConfig(trials=a.trials, seed=a.seed, level=a.level, precision=a.precision)
    t0 = time.perf_counter()
    checks = run_suite(a.suite, cfg)
    ok = all(c.passed for c in checks)
    lines = [
        f"{'PASS' if c.passed else 'FAIL'}  {c.name}" + (f"  [{c.detail}]" if c.detail and not c.passed else "")
        for c in checks
    ]
    lines.append(f"{sum(c.passed for c in checks)}/{len(checks)} passed in {time.perf_counter() - t0:.1f}s")
    d = {
        "suite": a.suite,
        "passed": ok,
        "checks": [{"name": c.name, "passed": c.passed, "detail": c.detail, "trials": c.trials} for c in checks],
        "value": "\n".join(lines),
    }
    return d, ok


COMMANDS = {
    "eval": cmd_eval,
    "apply": cmd_apply,
    "theta": cmd_theta,
    "expand": cmd_expand,
    "is-numerical": cmd_is_numerical,
    "einvariant": cmd_einvariant,
    "coaction": cmd_coaction,
    "ko": cmd_ko,
    "comodule": cmd_comodule,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "verify":
            out, ok = cmd_verify(args)
        else:
            out, ok = COMMANDS[args.command](args), True
    except ParseError as exc:
        print(f"thetak: syntax error: {exc}", file=sys.stderr)
        return 2
    except (EvalError, CliError, BasisError, CoactionError, ComoduleError, ValueError, ArithmeticError,
            OSError) as exc:
        print(f"thetak: {exc}", file=sys.stderr)
        return 1
    if args.format == "json":
        print(json.dumps(out, indent=2))
    else:
        print(out["value"])
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
