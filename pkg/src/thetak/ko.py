"""The real variant at p = 2: even numerical functions and a basis experiment."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .arith import Laurent, mod_pn
from .kk import BIG_THETA, NumFun, Q, is_numerical, theta
from .modlinalg import in_column_span, rank_mod_p, smith_form


def is_even(f) -> bool:
    body = f.body if isinstance(f, NumFun) else Laurent.coerce(f)
    return all(k % 2 == 0 for k in body.coeffs)


def is_in_ko(f) -> bool:
    body = f.body if isinstance(f, NumFun) else Laurent.coerce(f)
    if isinstance(f, NumFun) and f.p != 2:
        raise ValueError("the KO subalgebra is defined at p = 2")
    return is_even(body) and bool(is_numerical(body, 2))


def Q_ko(f: NumFun) -> NumFun:
    if not is_in_ko(f):
        raise ValueError("Q_ko expects an even numerical function")
    return Q(f)


@dataclass(frozen=True)
class KOCandidate:
    name: str
    description: str
    start: int  # lowest Theta index used
    square_argument: bool  # evaluate Theta_j(w^2) instead of Theta_j(w)

    def monomial(self, e: tuple[int, ...]) -> Laurent:
        acc = Laurent.const(1)
        for j, k in zip(range(self.start, self.start + len(e)), e):
            if k:
                t = theta(j, 2, BIG_THETA).body
                acc = acc * (t.compose_power(2) if self.square_argument else t)
        return acc


CANDIDATES = (
    KOCandidate("literal-0", "Theta_0..Theta_l in the variable w", 0, False),
    KOCandidate("literal-1", "Theta_1..Theta_l in the variable w", 1, False),
    KOCandidate("internal-w2", "Theta_0..Theta_l with w read as w^2", 0, True),
)


def ko_targets() -> dict[str, Laurent]:
    w = Laurent.monomial
    return {
        "1": Laurent.const(1),
        "Theta1": theta(1, 2, BIG_THETA).body,
        "Theta2": theta(2, 2, BIG_THETA).body,
        "w^2": w(2),
        "w^-2": w(-2),
        "(w^4-w^2)/8": (w(4) - w(2)) / 8,
    }


@dataclass
class CandidateReport:
    name: str
    description: str
    monomials: int
    all_even: bool
    first_odd: str | None
    rank_mod_2: int
    unit_rank: int
    smith_exponents: list[int]
    spanned: dict[str, bool] = field(default_factory=dict)

    @property
    def spans_targets(self) -> bool:
        return all(self.spanned.values())

    @property
    def independent(self) -> bool:
        return self.rank_mod_2 == self.monomials

    @property
    def consistent(self) -> bool:
        return self.all_even and self.independent and self.spans_targets


@dataclass
class KOBasisReport:
    level: int
    N: int
    points: int
    candidates: list[CandidateReport]
    theta0_in_ko: bool

    @property
    def succeeded(self) -> list[str]:
        return [c.name for c in self.candidates if c.consistent]

    def lines(self) -> list[str]:
        out = [f"ko check-basis: level {self.level}, precision 2^{self.N}, {self.points} sample units"]
        out.append(f"Theta0 = (1-w)/2 in KO subalgebra: {'yes' if self.theta0_in_ko else 'no (odd exponent)'}")
        for c in self.candidates:
            out.append(
                f"{c.name}: {c.monomials} monomials, all even: {'yes' if c.all_even else 'no'}"
                + (f" (first odd: {c.first_odd})" if c.first_odd else "")
                + f", rank mod 2: {c.rank_mod_2}, unit rank mod 2^{self.N}: {c.unit_rank}"
                + f", independent: {'yes' if c.independent else 'no'}"
            )
            spanned = ", ".join(f"{t}:{'yes' if ok else 'no'}" for t, ok in c.spanned.items())
            out.append(f"  spans {spanned}")
        ok = self.succeeded
        out.append("consistent candidates: " + (", ".join(ok) if ok else "none"))
        return out

    def to_json(self) -> dict:
        return {
            "level": self.level,
            "precision": self.N,
            "points": self.points,
            "theta0_in_ko": self.theta0_in_ko,
            "candidates": [
                {
                    "name": c.name,
                    "description": c.description,
                    "monomials": c.monomials,
                    "all_even": c.all_even,
                    "first_odd": c.first_odd,
                    "rank_mod_2": c.rank_mod_2,
                    "unit_rank": c.unit_rank,
                    "smith_exponents": c.smith_exponents,
                    "independent": c.independent,
                    "spanned": c.spanned,
                    "consistent": c.consistent,
                }
                for c in self.candidates
            ],
            "consistent_candidates": self.succeeded,
        }


def ko_basis_check(level: int = 3, N: int = 4) -> KOBasisReport:
    """Evaluation-matrix test of the candidate KO bases at units mod 2^(l+3)."""
    points = [a for a in range(1, 2 ** (level + 3)) if a % 2]
    targets = ko_targets()
    reports = []
    for cand in CANDIDATES:
        n_levels = level + 1 - cand.start
        exps = list(itertools.product(range(2), repeat=n_levels))
        monos = [cand.monomial(e) for e in exps]
        first_odd = None
        for e, m in zip(exps, monos):
            if not is_even(m):
                first_odd = "*".join(f"Theta{cand.start + j}" for j, k in enumerate(e) if k)
                break
        M = [[mod_pn(m(a), 2, N) for m in monos] for a in points]
        sf = smith_form(M, 2, N)
        spanned = {}
        for name, t in targets.items():
            v = [mod_pn(t(a), 2, N) for a in points]
            spanned[name] = in_column_span(M, v, 2, N)
        reports.append(
            CandidateReport(
                cand.name, cand.description, len(monos), first_odd is None, first_odd,
                rank_mod_p(M, 2), sf.unit_rank, sf.exponents, spanned,
            )
        )
    return KOBasisReport(level, N, len(points), reports, is_in_ko(theta(0, 2, BIG_THETA)))
