"""Extension classes: n x (m+1) integer matrices modulo column relations.

Column 0 holds the coefficient of ``r_0*`` and column ``i`` (1 <= i <= m)
the coefficient of ``r_i*``.  Two matrices represent the same class when
their difference is a sum of relation matrices ``v r_0* + p_i v r_i*``.
Equivalently, each row must lie in the column span of the relation matrix

    [ 1    1   ...  1  ]
    [ p_1  0   ...  0  ]
    [ 0    p_2 ...  0  ]
    [ ...              ]
    [ 0    0   ...  p_m]

whose cokernel is Z + Z/d_1 + ... + Z/d_{m-1}.
"""

from __future__ import annotations

import functools
import itertools
import math
import random
from dataclasses import dataclass, field
from typing import Sequence

from . import zmatrix as zm
from .errors import (
    ModulusMismatch,
    NotUnimodular,
    PermutationNotInSigma,
    ShapeError,
    SignatureMismatch,
    Unsupported,
)
from .orbifold import OrbifoldSignature, symmetry_group

N_ONE_MESSAGE = (
    "n = 1 is not supported: extensions of Z by an orbifold group are a "
    "separate, already classified case; use n >= 2"
)


def check_rank(n: int):
    if n == 1:
        raise Unsupported(N_ONE_MESSAGE)
    if n < 1:
        raise Unsupported(f"n must be >= 2, got {n}")


@dataclass(frozen=True)
class ExtensionClass:
    sig: OrbifoldSignature
    n: int
    rep: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        check_rank(self.n)
        rep = tuple(tuple(int(x) for x in row) for row in self.rep)
        if len(rep) != self.n or any(len(row) != self.sig.m + 1 for row in rep):
            raise ShapeError(
                f"class matrix must be {self.n} x {self.sig.m + 1}, "
                f"got {len(rep)} x {len(rep[0]) if rep else 0}"
            )
        object.__setattr__(self, "rep", rep)

    @property
    def m(self) -> int:
        return self.sig.m

    def column(self, i: int) -> tuple[int, ...]:
        return tuple(row[i] for row in self.rep)

    def matrix(self) -> list[list[int]]:
        return [list(row) for row in self.rep]

    def __add__(self, other: "ExtensionClass") -> "ExtensionClass":
        _check_same(self, other)
        rep = [[a + b for a, b in zip(r, s)] for r, s in zip(self.rep, other.rep)]
        return ExtensionClass(self.sig, self.n, rep)

    def __sub__(self, other: "ExtensionClass") -> "ExtensionClass":
        _check_same(self, other)
        rep = [[a - b for a, b in zip(r, s)] for r, s in zip(self.rep, other.rep)]
        return ExtensionClass(self.sig, self.n, rep)


def make_class(sig: OrbifoldSignature, matrix) -> ExtensionClass:
    return ExtensionClass(sig, len(matrix), matrix)


def zero_class(sig: OrbifoldSignature, n: int) -> ExtensionClass:
    return ExtensionClass(sig, n, zm.zeros(n, sig.m + 1))


def relation_class(sig: OrbifoldSignature, v: Sequence[int], i: int) -> ExtensionClass:
    """The relation matrix ``v r_0* + p_i v r_i*`` (zero in the quotient)."""
    n = len(v)
    rep = zm.zeros(n, sig.m + 1)
    for r in range(n):
        rep[r][0] = v[r]
        rep[r][i] = sig.cone_orders[i - 1] * v[r]
    return ExtensionClass(sig, n, rep)


def _check_same(A: ExtensionClass, B: ExtensionClass):
    if A.sig != B.sig:
        raise SignatureMismatch(f"signatures differ: {A.sig} vs {B.sig}")
    if A.n != B.n:
        raise SignatureMismatch(f"ranks differ: n = {A.n} vs n = {B.n}")


# --- elementary divisors ---------------------------------------------------


@dataclass(frozen=True)
class ElementaryDivisors:
    d: tuple[int, ...]

    @property
    def torsion_exponent(self) -> int:
        """``d_{m-1}``, the exponent of the torsion subgroup (1 if m <= 1)."""
        return self.d[-2] if len(self.d) >= 2 else 1

    @property
    def lcm(self):
        """``d_m = lcm(p_i)``; ``None`` when there are no cone points."""
        return self.d[-1] if self.d else None

    @property
    def torsion_moduli(self) -> tuple[int, ...]:
        return self.d[:-1]


def divisors_from_orders(p: Sequence[int]) -> tuple[int, ...]:
    """``d_j = gcd(j-fold products) / gcd((j-1)-fold products)``."""
    p = tuple(p)
    out = []
    prev = 1
    for j in range(1, len(p) + 1):
        g = 0
        for combo in itertools.combinations(p, j):
            g = math.gcd(g, math.prod(combo))
            if g == prev:
                break
        out.append(g // prev)
        prev = g
    return tuple(out)


def elementary_divisors(sig: OrbifoldSignature) -> ElementaryDivisors:
    return ElementaryDivisors(divisors_from_orders(sig.cone_orders))


def relation_matrix(p: Sequence[int]) -> list[list[int]]:
    m = len(p)
    M = [[1] * m]
    for i, q in enumerate(p):
        row = [0] * m
        row[i] = q
        M.append(row)
    return M


def euler_vector(p: Sequence[int]) -> list[int]:
    """Coefficients of the Euler map on one row of a class matrix."""
    if not p:
        return [1]
    L = math.lcm(*p)
    return [-L] + [L // q for q in p]


@dataclass(frozen=True)
class BasisCert:
    """Fixed coordinates for one signature's class group.

    ``U`` is unimodular of size m+1; for a row ``x`` of a class matrix,
    ``(U x)[m]`` is the free coordinate (it equals the Euler map) and
    ``(U x)[j] mod d_j`` for ``1 <= j <= m-1`` are the torsion coordinates.
    ``(U x)[0]`` lives in Z/1 and is ignored.
    """

    cone_orders: tuple[int, ...]
    U: tuple[tuple[int, ...], ...]
    U_inv: tuple[tuple[int, ...], ...]
    moduli: tuple[int, ...]
    lattice: tuple = field(repr=False)


@functools.lru_cache(maxsize=None)
def basis_cert(cone_orders: tuple[int, ...]) -> BasisCert:
    p = tuple(cone_orders)
    m = len(p)
    M = relation_matrix(p)
    lattice = zm.lattice_basis(zm.transpose(M), m + 1) if m else []
    if m == 0:
        return BasisCert(p, ((1,),), ((1,),), (), ())
    snf = zm.smith_normal_form(M)
    d = divisors_from_orders(p)
    if snf.diagonal != [1, *d[:-1]]:
        raise AssertionError(f"unexpected invariants {snf.diagonal} for orders {p}")
    U = snf.U
    e = euler_vector(p)
    if U[m] == [-x for x in e]:
        U[m] = e
    if U[m] != e:
        raise AssertionError("free coordinate is not the Euler map")
    U_inv = zm.inverse_unimodular(U)
    return BasisCert(
        p,
        tuple(map(tuple, U)),
        tuple(map(tuple, U_inv)),
        d[:-1],
        tuple((c, tuple(r)) for c, r in lattice),
    )


# --- class operations ------------------------------------------------------


def class_equal(A: ExtensionClass, B: ExtensionClass) -> bool:
    _check_same(A, B)
    cert = basis_cert(A.sig.cone_orders)
    for ra, rb in zip(A.rep, B.rep):
        diff = [a - b for a, b in zip(ra, rb)]
        if A.m == 0:
            if any(diff):
                return False
        elif not zm.in_lattice(diff, cert.lattice):
            return False
    return True


def torsion_quotient(A: ExtensionClass) -> tuple[tuple[int, ...], ...]:
    """Image in (Z/p_1)^n + ... + (Z/p_m)^n: columns 1..m reduced mod p_i."""
    return tuple(
        tuple(x % q for x in A.column(i))
        for i, q in enumerate(A.sig.cone_orders, start=1)
    )


def euler_map(A: ExtensionClass) -> tuple[int, ...]:
    """``-d_m x_0 + sum (d_m / p_i) x_i`` (just ``x_0`` when m = 0)."""
    e = euler_vector(A.sig.cone_orders)
    return tuple(sum(c * x for c, x in zip(e, row)) for row in A.rep)


@dataclass(frozen=True)
class Decomposition:
    free: tuple[int, ...]
    torsion: tuple[tuple[int, ...], ...]
    moduli: tuple[int, ...]
    basis_cert: BasisCert = field(compare=False, repr=False, default=None)


def decompose(A: ExtensionClass) -> Decomposition:
    cert = basis_cert(A.sig.cone_orders)
    m = A.m
    U = cert.U
    Y = [[sum(u * x for u, x in zip(U[k], row)) for k in range(m + 1)] for row in A.rep]
    free = tuple(y[m] for y in Y)
    torsion = tuple(
        tuple(y[j] % d for y in Y) for j, d in enumerate(cert.moduli, start=1)
    )
    return Decomposition(free, torsion, cert.moduli, cert)


def recombine(dec: Decomposition, sig: OrbifoldSignature, n: int) -> ExtensionClass:
    cert = basis_cert(sig.cone_orders)
    m = sig.m
    if tuple(dec.moduli) != cert.moduli or len(dec.torsion) != len(cert.moduli):
        raise ModulusMismatch(
            f"decomposition moduli {tuple(dec.moduli)} do not match {cert.moduli}"
        )
    if len(dec.free) != n or any(len(t) != n for t in dec.torsion):
        raise ShapeError("decomposition vectors must have length n")
    for t, d in zip(dec.torsion, cert.moduli):
        if any(not 0 <= x < d for x in t):
            raise ModulusMismatch(f"torsion entries must be reduced modulo {d}")
    rep = []
    for r in range(n):
        y = [0] * (m + 1)
        for j, t in enumerate(dec.torsion, start=1):
            y[j] = t[r]
        y[m] = dec.free[r]
        rep.append([sum(ui * yk for ui, yk in zip(cert.U_inv[i], y)) for i in range(m + 1)])
    return ExtensionClass(sig, n, rep)


def permute_columns(A: ExtensionClass, sigma: Sequence[int]) -> ExtensionClass:
    """Column i moves to column sigma(i); column 0 stays put."""
    rep = [[0] * (A.m + 1) for _ in range(A.n)]
    for r, row in enumerate(A.rep):
        rep[r][0] = row[0]
        for i, s in enumerate(sigma, start=1):
            rep[r][s] = row[i]
    return ExtensionClass(A.sig, A.n, rep)


def act(Phi, sigma, A: ExtensionClass) -> ExtensionClass:
    """``Phi . (sigma . A)``: permute columns 1..m by sigma, then left-multiply."""
    if sigma is None:
        sigma = tuple(range(1, A.m + 1))
    sigma = tuple(sigma)
    if sigma not in symmetry_group(A.sig):
        raise PermutationNotInSigma(f"{list(sigma)} does not preserve cone orders {list(A.sig.cone_orders)}")
    if zm.shape(Phi) != (A.n, A.n) or abs(zm.determinant(Phi)) != 1:
        raise NotUnimodular("Phi must be an n x n integer matrix with determinant +-1")
    B = permute_columns(A, sigma)
    return ExtensionClass(A.sig, A.n, zm.matmul(Phi, B.rep))


def random_class(sig: OrbifoldSignature, n: int, rng: random.Random, bound: int = 10) -> ExtensionClass:
    rep = [[rng.randint(-bound, bound) for _ in range(sig.m + 1)] for _ in range(n)]
    return ExtensionClass(sig, n, rep)

