"""Linear algebra over Z/p^N (a local principal ideal ring)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .arith import vp_int


class SingularModP(ArithmeticError):
    pass


def _as_array(M, m: int):
    dtype = np.int64 if m < 2**31 else object
    return np.array([[int(x) % m for x in row] for row in M], dtype=dtype)


def inverse_mod(M: list[list[int]], p: int, N: int) -> list[list[int]]:
    """Inverse of a square matrix over Z/p^N; needs invertibility mod p."""
    m = p**N
    n = len(M)
    A = np.concatenate([_as_array(M, m), _as_array(np.eye(n, dtype=int).tolist(), m)], axis=1)
    for c in range(n):
        col = A[c:, c] % p
        nz = np.nonzero(col)[0]
        if len(nz) == 0:
            raise SingularModP(f"no unit pivot in column {c}")
        r = c + int(nz[0])
        if r != c:
            A[[c, r]] = A[[r, c]]
        inv = pow(int(A[c, c]), -1, m)
        A[c] = (A[c] * inv) % m
        f = A[:, c].copy()
        f[c] = 0
        if A.dtype == object:
            A = (A - np.outer(f, A[c])) % m
        else:
            # entries < 2^31 so each product fits in int64
            A = (A - (np.outer(f, A[c]) % m)) % m
    return [[int(x) for x in row] for row in A[:, n:]]


def matvec_mod(M: list[list[int]], v: list[int], m: int) -> list[int]:
    return [sum(a * b for a, b in zip(row, v)) % m for row in M]


def rank_mod_p(M: list[list[int]], p: int) -> int:
    A = [[x % p for x in row] for row in M]
    if not A:
        return 0
    rows, cols = len(A), len(A[0])
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if A[i][c]), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = pow(A[r][c], -1, p)
        A[r] = [x * inv % p for x in A[r]]
        for i in range(rows):
            if i != r and A[i][c]:
                f = A[i][c]
                A[i] = [(x - f * y) % p for x, y in zip(A[i], A[r])]
        r += 1
        if r == rows:
            break
    return r


@dataclass
class SmithForm:
    """U @ M @ V = diag(p^d_0, ..., p^d_(r-1), 0, ...) over Z/p^N."""

    p: int
    N: int
    U: list[list[int]]
    V: list[list[int]]
    exponents: list[int]  # d_t for the nonzero diagonal entries
    shape: tuple[int, int]

    @property
    def rank(self) -> int:
        return len(self.exponents)

    @property
    def unit_rank(self) -> int:
        return sum(1 for d in self.exponents if d == 0)


def smith_form(M: list[list[int]], p: int, N: int) -> SmithForm:
    m = p**N
    rows = len(M)
    cols = len(M[0]) if rows else 0
    A = [[x % m for x in row] for row in M]
    U = [[int(i == j) for j in range(rows)] for i in range(rows)]
    V = [[int(i == j) for j in range(cols)] for i in range(cols)]
    exps = []
    for t in range(min(rows, cols)):
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                if A[i][j]:
                    v = vp_int(A[i][j], p)
                    if best is None or v < best[0]:
                        best = (v, i, j)
                        if v == 0:
                            break
            if best is not None and best[0] == 0:
                break
        if best is None:
            break
        v, i, j = best
        A[t], A[i] = A[i], A[t]
        U[t], U[i] = U[i], U[t]
        for row in A:
            row[t], row[j] = row[j], row[t]
        for row in V:
            row[t], row[j] = row[j], row[t]
        pv = p**v
        inv = pow(A[t][t] // pv, -1, m)
        A[t] = [x * inv % m for x in A[t]]
        U[t] = [x * inv % m for x in U[t]]
        for i in range(rows):
            if i != t and A[i][t]:
                f = A[i][t] // pv
                A[i] = [(x - f * y) % m for x, y in zip(A[i], A[t])]
                U[i] = [(x - f * y) % m for x, y in zip(U[i], U[t])]
        for j in range(t + 1, cols):
            if A[t][j]:
                f = A[t][j] // pv
                for row in A:
                    row[j] = (row[j] - f * row[t]) % m
                for row in V:
                    row[j] = (row[j] - f * row[t]) % m
        exps.append(v)
    return SmithForm(p, N, U, V, exps, (rows, cols))


def kernel_mod(M: list[list[int]], p: int, N: int, ncols: int | None = None) -> list[list[int]]:
    """Generators of {x : M x = 0} in (Z/p^N)^ncols."""
    m = p**N
    if not M:
        n = ncols or 0
        return [[int(i == j) for j in range(n)] for i in range(n)]
    sf = smith_form(M, p, N)
    cols = sf.shape[1]
    gens = []
    for t, d in enumerate(sf.exponents):
        if d > 0:
            s = p ** (N - d)
            gens.append([sf.V[i][t] * s % m for i in range(cols)])
    for t in range(sf.rank, cols):
        gens.append([sf.V[i][t] % m for i in range(cols)])
    return gens


def in_column_span(M: list[list[int]], v: list[int], p: int, N: int) -> bool:
    m = p**N
    sf = smith_form(M, p, N)
    uv = matvec_mod(sf.U, v, m)
    for t, y in enumerate(uv):
        if t < sf.rank:
            if y % p ** sf.exponents[t]:
                return False
        elif y % m:
            return False
    return True


def span_set(gens: list[list[int]], p: int, N: int, dim: int) -> set[tuple[int, ...]]:
    """All Z/p^N-combinations of the generators (only for tiny modules)."""
    m = p**N
    seen = {tuple([0] * dim)}
    frontier = list(seen)
    while frontier:
        nxt = []
        for v in frontier:
            for g in gens:
                u = tuple((a + b) % m for a, b in zip(v, g))
                if u not in seen:
                    seen.add(u)
                    nxt.append(u)
        frontier = nxt
    return seen
