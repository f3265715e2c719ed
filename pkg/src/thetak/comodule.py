"""Finite comodules over K∨₀K and continuous actions of the p-adic units.

Convention: Psi(m_j) = sum_i E_ij(w) ⊗ m_i, and gamma acts on the basis
by the matrix E(gamma^-1) mod p^N. Since the group is commutative and
E(w1 w2) = E(w1) E(w2), gamma -> E(gamma^-1) is a homomorphism.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path

from .arith import Laurent, MultiLaurent, mod_pn
from .basis import default_family, interpolate, sample_points
from .kk import is_numerical, topological_generators
from .modlinalg import kernel_mod, rank_mod_p

Matrix = list[list[int]]


class ComoduleError(ValueError):
    pass


@dataclass
class FinComodule:
    p: int
    N: int
    entries: list[list[Laurent]]
    name: str = ""

    @property
    def rank(self) -> int:
        return len(self.entries)

    def counit_ok(self) -> bool:
        m = self.p**self.N
        return all(
            (mod_pn(e(1), self.p, self.N) - int(i == j)) % m == 0
            for i, row in enumerate(self.entries)
            for j, e in enumerate(row)
        )

    def coassociative(self) -> bool:
        """E(w1 w2) == E(w1) E(w2) exactly."""
        r = self.rank
        for i in range(r):
            for j in range(r):
                lhs = self.entries[i][j].to_multi((1, 1))
                rhs = MultiLaurent(nvars=2)
                for k in range(r):
                    rhs = rhs + self.entries[i][k].to_multi((1, 0)) * self.entries[k][j].to_multi((0, 1))
                if lhs != rhs:
                    return False
        return True

    def max_denominator_valuation(self) -> int:
        return max((e.max_denominator_valuation(self.p) for row in self.entries for e in row), default=0)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "p": self.p,
            "N": self.N,
            "rank": self.rank,
            "entries": [[str(e) for e in row] for row in self.entries],
        }

    @classmethod
    def from_json(cls, data: dict) -> "FinComodule":
        from .expr import parse_numfun

        p = int(data["p"])
        entries = [[parse_numfun(s, p).body for s in row] for row in data["entries"]]
        if len(entries) != int(data.get("rank", len(entries))) or any(len(r) != len(entries) for r in entries):
            raise ComoduleError("entries must form a rank x rank matrix")
        return cls(p, int(data["N"]), entries, data.get("name", ""))


def load_fixture(path) -> FinComodule:
    return FinComodule.from_json(json.loads(Path(path).read_text()))


def fixture_names() -> list[str]:
    root = resources.files("thetak") / "fixtures"
    return sorted(f.name for f in root.iterdir() if f.name.endswith(".json"))


def shipped_fixture(name: str) -> FinComodule:
    root = resources.files("thetak") / "fixtures"
    if not name.endswith(".json"):
        name += ".json"
    return FinComodule.from_json(json.loads((root / name).read_text()))


def _as_unit(gamma, p: int) -> Fraction:
    g = Fraction(gamma)
    if g == 0 or g.numerator % p == 0 or g.denominator % p == 0:
        raise ComoduleError(f"{gamma} is not a {p}-adic unit")
    return g


def comodule_to_action(M: FinComodule, gamma, N: int | None = None) -> Matrix:
    """E(gamma^-1) mod p^N, evaluated exactly."""
    N = M.N if N is None else N
    x = 1 / _as_unit(gamma, M.p)
    return [[mod_pn(e(x), M.p, N) for e in row] for row in M.entries]


def matmul_mod(A: Matrix, B: Matrix, m: int) -> Matrix:
    return [[sum(a * b for a, b in zip(row, col)) % m for col in zip(*B)] for row in A]


@dataclass
class ActionTable:
    """Sampled action gamma -> matrix mod p^N, gamma an integer mod p^K."""

    p: int
    N: int
    K: int
    rank: int
    table: dict[int, Matrix] = field(default_factory=dict)

    def invertible(self) -> bool:
        return all(rank_mod_p(A, self.p) == self.rank for A in self.table.values())

    def composition_ok(self) -> bool:
        m, mk = self.p**self.N, self.p**self.K
        for g1, A in self.table.items():
            for g2, B in self.table.items():
                g = g1 * g2 % mk
                if g in self.table and matmul_mod(A, B, m) != self.table[g]:
                    return False
        return True


def action_modulus_exponent(M: FinComodule, level: int) -> int:
    # entries mod p^N are functions of the argument mod p^(N + level + 1),
    # and exact evaluation needs the denominator exponent as slack
    return M.N + max(level + 1, M.max_denominator_valuation())


def action_table(M: FinComodule, level: int, extra: int = 1) -> ActionTable:
    """Action matrices at every unit mod p^(k+extra), k the basis sample exponent."""
    family = default_family(M.p)
    k = level + 2 if family == "Theta" else level + 1
    K = action_modulus_exponent(M, level)
    mk = M.p**K
    table = {}
    for g in range(1, M.p ** (k + extra)):
        if g % M.p:
            table[g % mk] = comodule_to_action(M, g)
    return ActionTable(M.p, M.N, K, M.rank, table)


def action_to_comodule(T: ActionTable, level: int, family: str | None = None) -> FinComodule:
    """Interpolate each matrix coefficient as a function of gamma^-1."""
    p, N = T.p, T.N
    family = family or default_family(p)
    mk = p**T.K
    k = level + 2 if family == "Theta" else level + 1
    mod_k = p**k
    if T.K < N + level + 1:
        raise ComoduleError("samples inconsistent with level: table modulus too small")
    # one point per residue class first (square system), the rest are checks
    xs = {g: pow(g, -1, mk) for g in T.table}
    by_class: dict[int, int] = {}
    for g, x in sorted(xs.items()):
        by_class.setdefault(x % mod_k, g)
    classes = sample_points(p, level, family)
    if any(c % mod_k not in by_class for c in classes):
        raise ComoduleError(f"samples inconsistent with level: units mod {p}^{k} not all sampled")
    first = [by_class[c % mod_k] for c in classes]
    rest = [g for g in T.table if g not in set(first)]
    order = first + rest
    points = [xs[g] for g in order]
    entries = []
    for i in range(T.rank):
        row = []
        for j in range(T.rank):
            vals = [T.table[g][i][j] for g in order]
            exp, bad = interpolate(points, vals, p, level, N, family)
            if bad:
                raise ComoduleError(
                    f"samples inconsistent with level: entry ({i},{j}) mismatches at gamma^-1 = {bad[0]}"
                )
            row.append(exp.to_numfun().body)
        entries.append(row)
    return FinComodule(p, N, entries)


def same_mod_pn(A: FinComodule, B: FinComodule) -> bool:
    """Entry-wise equality of the coaction matrices as functions on units mod p^N."""
    if A.rank != B.rank or A.p != B.p:
        return False
    N = min(A.N, B.N)
    return all(
        is_numerical((a - b) / A.p**N, A.p)
        for ra, rb in zip(A.entries, B.entries)
        for a, b in zip(ra, rb)
    )


def invariant_test_units(p: int, K: int, extra_exponent: int = 3) -> list[int]:
    """Representatives mod p^K of the topological generators, plus all units mod p^3."""
    gens = [g.residue(K) for g in topological_generators(p, K)]
    return gens + [a for a in range(1, p**extra_exponent) if a % p]


def invariants(M: FinComodule) -> list[list[int]]:
    """Generators of {m : gamma.m = m for all sampled gamma} over Z/p^N."""
    p, N = M.p, M.N
    m = p**N
    K = N + M.max_denominator_valuation()
    rows = []
    for g in invariant_test_units(p, K):
        A = comodule_to_action(M, g)
        for i in range(M.rank):
            rows.append([(A[i][j] - int(i == j)) % m for j in range(M.rank)])
    return kernel_mod(rows, p, N, M.rank)


def is_fixed(M: FinComodule, v: list[int], units) -> bool:
    m = M.p**M.N
    for g in units:
        A = comodule_to_action(M, g)
        if [sum(a * x for a, x in zip(row, v)) % m for row in A] != [x % m for x in v]:
            return False
    return True
