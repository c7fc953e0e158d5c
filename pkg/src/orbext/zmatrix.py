"""Exact integer matrix algebra.

Matrices are plain lists of rows of Python ints (unbounded precision).
Nothing here touches floating point.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Optional, Sequence

from .errors import BudgetExceeded, NotInvertible, NotLiftable, ShapeError

Matrix = list  # list[list[int]]


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def zeros(r: int, c: int) -> Matrix:
    return [[0] * c for _ in range(r)]


def copy(M) -> Matrix:
    return [list(row) for row in M]


def shape(M) -> tuple[int, int]:
    r = len(M)
    c = len(M[0]) if r else 0
    if any(len(row) != c for row in M):
        raise ShapeError("ragged matrix")
    return r, c


def transpose(M) -> Matrix:
    return [list(col) for col in zip(*M)]


def matmul(A, B) -> Matrix:
    if A and B and len(A[0]) != len(B):
        raise ShapeError(f"cannot multiply {len(A)}x{len(A[0])} by {len(B)}x{len(B[0])}")
    cols = len(B[0]) if B else 0
    Bt = list(zip(*B)) if B else [()] * cols
    return [[sum(a * b for a, b in zip(row, col)) for col in Bt] for row in A]


def matvec(A, v) -> list[int]:
    return [sum(a * x for a, x in zip(row, v)) for row in A]


def determinant(M) -> int:
    """Bareiss fraction-free elimination."""
    n = len(M)
    if n == 0:
        return 1
    A = copy(M)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for i in range(k + 1, n):
                if A[i][k] != 0:
                    A[k], A[i] = A[i], A[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


def is_unimodular(M) -> bool:
    r, c = shape(M)
    return r == c and abs(determinant(M)) == 1


def inverse_unimodular(M) -> Matrix:
    """Exact inverse of a matrix with determinant +-1 (Gauss-Jordan over Z)."""
    n = len(M)
    U, T = hermite_left_reduce(M)
    if any(T[i][i] != 1 for i in range(n)):
        raise NotInvertible("matrix is not unimodular")
    # T is unit upper triangular: clear above the diagonal, mirroring on U
    T = copy(T)
    W = copy(U)
    for j in range(n - 1, -1, -1):
        for i in range(j):
            f = T[i][j]
            if f:
                T[i] = [a - f * b for a, b in zip(T[i], T[j])]
                W[i] = [a - f * b for a, b in zip(W[i], W[j])]
    return W


def content(v: Iterable[int]) -> int:
    """gcd of the entries; 0 for the zero vector."""
    return math.gcd(*v)


# --- Smith normal form -----------------------------------------------------


@dataclass(frozen=True)
class SnfResult:
    U: Matrix
    D: Matrix
    V: Matrix

    @property
    def diagonal(self) -> list[int]:
        return [self.D[i][i] for i in range(min(len(self.D), len(self.D[0]) if self.D else 0))]


def smith_normal_form(M) -> SnfResult:
    """Return ``U, D, V`` with ``U @ M @ V == D``.

    Pivots are chosen as the smallest nonzero absolute value in the active
    block (row-major tie break), diagonal entries are non-negative and
    satisfy ``D[i][i] | D[i+1][i+1]``.
    """
    r, c = shape(M)
    A = copy(M)
    U = identity(r)
    V = identity(c)

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):
        # row dst += q * row src
        A[dst] = [a + q * b for a, b in zip(A[dst], A[src])]
        U[dst] = [a + q * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, q):
        for row in A:
            row[dst] += q * row[src]
        for row in V:
            row[dst] += q * row[src]

    for t in range(min(r, c)):
        while True:
            best = None
            for i in range(t, r):
                for j in range(t, c):
                    x = A[i][j]
                    if x and (best is None or abs(x) < best[0]):
                        best = (abs(x), i, j)
            if best is None:
                break
            _, i, j = best
            swap_rows(t, i)
            swap_cols(t, j)
            piv = A[t][t]
            clean = True
            for i in range(t + 1, r):
                if A[i][t]:
                    add_row(i, t, -(A[i][t] // piv))
                    clean = clean and A[i][t] == 0
            for j in range(t + 1, c):
                if A[t][j]:
                    add_col(j, t, -(A[t][j] // piv))
                    clean = clean and A[t][j] == 0
            if not clean:
                continue
            bad = next(
                (i for i in range(t + 1, r) for j in range(t + 1, c) if A[i][j] % piv),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if t < r and t < c and A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            U[t] = [-x for x in U[t]]
    return SnfResult(U, A, V)


def invariant_factors(M) -> list[int]:
    return smith_normal_form(M).diagonal


# --- Hermite-style reduction -----------------------------------------------


def hermite_left_reduce(M) -> tuple[Matrix, Matrix]:
    """Row-reduce ``M`` to upper-triangular form by a unimodular ``U``.

    Column ``j`` is cleared below row ``j`` by Euclid's algorithm on rows
    ``j..r-1`` (rows above ``j`` are never touched by that step), leaving
    the gcd on the diagonal.  Negative diagonal entries have their row
    negated.  Returns ``(U, T)`` with ``U @ M == T``.
    """
    r, c = shape(M)
    T = copy(M)
    U = identity(r)
    for j in range(min(r, c)):
        while True:
            nz = [i for i in range(j, r) if T[i][j]]
            if len(nz) <= 1:
                break
            i0 = min(nz, key=lambda i: (abs(T[i][j]), i))
            for i in nz:
                if i != i0:
                    q = T[i][j] // T[i0][j]
                    T[i] = [a - q * b for a, b in zip(T[i], T[i0])]
                    U[i] = [a - q * b for a, b in zip(U[i], U[i0])]
        nz = [i for i in range(j, r) if T[i][j]]
        if nz and nz[0] != j:
            i = nz[0]
            T[i], T[j] = T[j], T[i]
            U[i], U[j] = U[j], U[i]
        if T[j][j] < 0:
            T[j] = [-x for x in T[j]]
            U[j] = [-x for x in U[j]]
    return U, T


def lattice_basis(rows: Sequence[Sequence[int]], ncols: int) -> list[tuple[int, list[int]]]:
    """Echelon basis ``[(pivot_col, row), ...]`` of the Z-span of ``rows``."""
    work = [list(r) for r in rows if any(r)]
    basis = []
    col = 0
    while work and col < ncols:
        while True:
            nz = [w for w in work if w[col]]
            if len(nz) <= 1:
                break
            piv = min(nz, key=lambda w: abs(w[col]))
            for w in nz:
                if w is not piv:
                    q = w[col] // piv[col]
                    for k in range(col, ncols):
                        w[k] -= q * piv[k]
        nz = [w for w in work if w[col]]
        if nz:
            piv = nz[0]
            if piv[col] < 0:
                piv[:] = [-x for x in piv]
            basis.append((col, piv))
            work = [w for w in work if w is not piv]
        work = [w for w in work if any(w)]
        col += 1
    return basis


def in_lattice(v: Sequence[int], basis) -> bool:
    v = list(v)
    for col, row in basis:
        if v[col] % row[col]:
            return False
        q = v[col] // row[col]
        if q:
            v = [a - q * b for a, b in zip(v, row)]
    return not any(v)


# --- matrices modulo D -----------------------------------------------------


@dataclass(frozen=True)
class ModMatrix:
    modulus: int
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.modulus < 1:
            raise ValueError("modulus must be >= 1")
        reduced = tuple(tuple(x % self.modulus for x in row) for row in self.entries)
        object.__setattr__(self, "entries", reduced)

    @classmethod
    def of(cls, entries, modulus: int) -> "ModMatrix":
        return cls(modulus, tuple(tuple(row) for row in entries))

    @property
    def n(self) -> int:
        return len(self.entries)

    def det(self) -> int:
        return determinant(self.entries) % self.modulus

    def is_invertible(self) -> bool:
        return math.gcd(self.det(), self.modulus) == 1

    def rows(self) -> Matrix:
        return [list(r) for r in self.entries]

    def __matmul__(self, other: "ModMatrix") -> "ModMatrix":
        if other.modulus != self.modulus:
            raise ValueError("modulus mismatch")
        return ModMatrix.of(matmul(self.entries, other.entries), self.modulus)


def _mod_inverse(a: int, D: int) -> int:
    return pow(a, -1, D) if D > 1 else 0


def _lift_special(R, D: int) -> Matrix:
    """Integer matrix of determinant 1 congruent to ``R`` (det R = 1 mod D).

    Reduces ``R`` to the identity modulo ``D`` with two-row moves of
    determinant 1 and returns the product of their inverses.
    """
    k = len(R)
    if D == 1:
        return identity(k)
    T = [[x % D for x in row] for row in R]
    Linv = identity(k)

    def move(i, j, a, b, c, d):
        # (row_i, row_j) <- (a row_i + b row_j, c row_i + d row_j), ad - bc = 1
        Ti, Tj = T[i], T[j]
        T[i] = [(a * x + b * y) % D for x, y in zip(Ti, Tj)]
        T[j] = [(c * x + d * y) % D for x, y in zip(Ti, Tj)]
        for row in Linv:
            x, y = row[i], row[j]
            row[i] = d * x - c * y
            row[j] = -b * x + a * y

    for col in range(k):
        while True:
            nz = [i for i in range(col, k) if T[i][col]]
            if not nz:
                raise NotInvertible("matrix is singular modulo %d" % D)
            i0 = min(nz, key=lambda i: (T[i][col], i))
            if i0 != col:
                move(col, i0, 0, 1, -1, 0)
            rest = [i for i in range(col + 1, k) if T[i][col]]
            if not rest:
                break
            for i in rest:
                move(col, i, 1, 0, -(T[i][col] // T[col][col]), 1)
        if math.gcd(T[col][col], D) != 1:
            raise NotInvertible("matrix is singular modulo %d" % D)

    for col in range(k):
        inv = _mod_inverse(T[col][col], D)
        for i in range(col):
            t = T[i][col] * inv % D
            if t:
                move(i, col, 1, -t, 0, 1)

    for i in range(k - 1):
        u = T[i][i]
        if u == 1:
            continue
        # integer SL_2 matrix congruent to diag(u^-1, u)
        a = _mod_inverse(u, D)
        d = pow(a, -1, D * D)
        c = (a * d - 1) // D
        move(i, i + 1, a, D, c, d)

    if T[k - 1][k - 1] != 1:
        raise NotLiftable("determinant is not 1 modulo %d" % D)
    return Linv


def lift_modular_matrix(
    R: ModMatrix, det_pm_one: bool = True, pin_first_column: bool = False
) -> Matrix:
    """Lift ``R`` in GL_n(Z/D) to an integer matrix of determinant +-1.

    With ``det_pm_one`` the result is congruent to ``R`` entrywise; this
    needs ``det R = +-1 (mod D)``.  Without it, the last column of ``R`` is
    first rescaled by ``det(R)^-1`` so the lift exists; the result then
    agrees with ``R`` modulo ``D`` on every column but the last.

    With ``pin_first_column`` (``R``'s first column must be ``e_1`` mod D)
    the first column of the result is exactly ``e_1``.
    """
    D = R.modulus
    n = R.n
    if not R.is_invertible():
        raise NotInvertible(f"matrix has determinant {R.det()} modulo {D}, not a unit")
    rows = R.rows()
    det = R.det()
    pm = {1 % D, -1 % D}
    if det not in pm:
        if det_pm_one:
            raise NotLiftable(f"determinant {det} is not +-1 modulo {D}")
        kappa = _mod_inverse(det, D)
        for row in rows:
            row[-1] = row[-1] * kappa % D
        det = 1 % D
    if pin_first_column:
        if any(rows[i][0] % D != int(i == 0) % D for i in range(n)):
            raise NotLiftable("first column is not e_1 modulo %d" % D)
        if n == 1:
            return [[1]]
        block = [row[1:] for row in rows[1:]]
        lower = _lift_signed(block, D)
        top = [1] + rows[0][1:]
        Phi = [top] + [[0] + row for row in lower]
    else:
        Phi = _lift_signed(rows, D)
    if abs(determinant(Phi)) != 1 or any(
        (x - y) % D for prow, rrow in zip(Phi, rows) for x, y in zip(prow, rrow)
    ):
        raise AssertionError("lift failed its own congruence check")
    return Phi


def _lift_signed(rows, D: int) -> Matrix:
    det = determinant(rows) % D
    if det == 1 % D:
        return _lift_special(rows, D)
    # det = -1 mod D: flip the first row, lift, flip back
    flipped = [[-x for x in rows[0]]] + [list(r) for r in rows[1:]]
    Phi = _lift_special(flipped, D)
    Phi[0] = [-x for x in Phi[0]]
    return Phi


# --- enumeration of GL_n(Z/D) ----------------------------------------------


class SearchBudget:
    """Node counter shared by the enumerative searches."""

    def __init__(self, limit: Optional[int] = None):
        self.limit = limit
        self.used = 0

    def tick(self, k: int = 1):
        self.used += k
        if self.limit is not None and self.used > self.limit:
            raise BudgetExceeded(f"search exceeded budget of {self.limit} nodes")


def prime_factors(n: int) -> list[int]:
    out = []
    q = 2
    while q * q <= n:
        if n % q == 0:
            out.append(q)
            while n % q == 0:
                n //= q
        q += 1
    if n > 1:
        out.append(n)
    return out


class _Echelon:
    """Incremental row echelon form over F_p."""

    def __init__(self, p: int):
        self.p = p
        self.rows: list[tuple[int, list[int]]] = []

    def reduce(self, v):
        p = self.p
        v = [x % p for x in v]
        for piv, row in self.rows:
            f = v[piv]
            if f:
                v = [(a - f * b) % p for a, b in zip(v, row)]
        return v

    def extended(self, v):
        v = self.reduce(v)
        piv = next((i for i, x in enumerate(v) if x), None)
        if piv is None:
            return None
        inv = pow(v[piv], -1, self.p)
        new = _Echelon(self.p)
        new.rows = self.rows + [(piv, [x * inv % self.p for x in v])]
        return new


def enumerate_units_matrices(
    n: int,
    D: int,
    predicate: Optional[Callable[[ModMatrix], bool]] = None,
    *,
    rows: Optional[Sequence[Sequence[Sequence[int]]]] = None,
    budget: Optional[SearchBudget] = None,
) -> Iterator[ModMatrix]:
    """Yield every invertible n x n matrix mod ``D`` accepted by ``predicate``.

    Order is lexicographic on the row-major entry tuple.  ``rows`` may
    restrict the candidates for each row (each list sorted
    lexicographically); partial choices are pruned as soon as they become
    linearly dependent modulo some prime divisor of ``D``.
    """
    if D < 1:
        raise ValueError("modulus must be >= 1")
    if rows is None:
        every = [list(v) for v in itertools.product(range(D), repeat=n)]
        rows = [every] * n
    primes = prime_factors(D)
    chosen: list = []

    def rec(i, echelons):
        if i == n:
            M = ModMatrix.of(chosen, D)
            if predicate is None or predicate(M):
                yield M
            return
        for v in rows[i]:
            if budget is not None:
                budget.tick()
            nxt = []
            for e in echelons:
                e2 = e.extended(v)
                if e2 is None:
                    break
                nxt.append(e2)
            else:
                chosen.append(v)
                yield from rec(i + 1, nxt)
                chosen.pop()

    return rec(0, [_Echelon(p) for p in primes])


def gl_order(n: int, D: int) -> int:
    """|GL_n(Z/D)| from the prime-power formula."""
    total = 1
    for p in prime_factors(D):
        k = 0
        q = D
        while q % p == 0:
            q //= p
            k += 1
        total *= p ** ((k - 1) * n * n) * math.prod(p**n - p**i for i in range(n))
    return total
