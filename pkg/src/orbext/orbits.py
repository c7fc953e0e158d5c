"""Orbit decisions under GL_n(Z) x Sigma and GL_n(Zhat) x Sigma.

Both decisions work in the fixed coordinates of :func:`coclass.decompose`:
a class becomes a free vector ``x_0`` in Z^n and torsion vectors ``x_j``
in (Z/d_j)^n, with GL_n acting on every component at once.  The free
vector is moved to ``(c, 0, ..., 0)`` with ``c`` its content, so any
matrix relating two normalized classes with ``c != 0`` has first column
exactly ``e_1``.  What is left is a congruence problem modulo the torsion
exponent ``D = d_{m-1}``:

* over Z the reachable reductions mod D are the matrices of determinant
  +-1 (with first column e_1 when c != 0);
* over Zhat every unit determinant is reachable, since GL_{n-1}(Zhat)
  surjects onto GL_{n-1}(Z/D) and the first column can stay e_1.

Searching that finite set is therefore a complete decision procedure.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional, Union

from . import zmatrix as zm
from .coclass import (
    ExtensionClass,
    _check_same,
    basis_cert,
    check_rank,
    class_equal,
    decompose,
    euler_map,
    permute_columns,
    act,
)
from .errors import InternalVerificationFailed, OrbextError
from .orbifold import invert_permutation, symmetry_group


@dataclass(frozen=True)
class NormalizedClass:
    U: tuple[tuple[int, ...], ...]
    U_inv: tuple[tuple[int, ...], ...]
    content: int
    free: tuple[int, ...]
    torsion: tuple[tuple[int, ...], ...]
    moduli: tuple[int, ...]

    @property
    def modulus(self) -> int:
        """Torsion exponent ``D``; 1 when there is no torsion."""
        return self.moduli[-1] if self.moduli else 1


@dataclass(frozen=True)
class IntegralWitness:
    phi: tuple[tuple[int, ...], ...]
    sigma: tuple[int, ...]
    R: zm.ModMatrix
    det_class: int

    kind = "integral"

    @property
    def modulus(self) -> int:
        return self.R.modulus


@dataclass(frozen=True)
class ProfiniteWitness:
    sigma: tuple[int, ...]
    R: zm.ModMatrix
    det_class: int

    kind = "profinite"

    @property
    def modulus(self) -> int:
        return self.R.modulus


Witness = Union[IntegralWitness, ProfiniteWitness]


def torsion_exponent(A: ExtensionClass) -> int:
    moduli = basis_cert(A.sig.cone_orders).moduli
    return moduli[-1] if moduli else 1


def canonical_normalize(A: ExtensionClass) -> NormalizedClass:
    dec = decompose(A)
    U, T = zm.hermite_left_reduce([[x] for x in dec.free])
    if zm.determinant(U) == -1:
        # T is (c, 0, ..., 0) and n >= 2, so the last row may flip sign freely
        U[-1] = [-x for x in U[-1]]
    torsion = tuple(
        tuple(y % d for y in zm.matvec(U, x)) for x, d in zip(dec.torsion, dec.moduli)
    )
    return NormalizedClass(
        U=tuple(map(tuple, U)),
        U_inv=tuple(map(tuple, zm.inverse_unimodular(U))),
        content=T[0][0],
        free=tuple(r[0] for r in T),
        torsion=torsion,
        moduli=dec.moduli,
    )


def _row_candidates(nA: NormalizedClass, nB: NormalizedClass, D: int, budget=None):
    """Rows v (mod D) with v . x_j = (y_j)_r (mod d_j) for each torsion part."""
    n = len(nA.free)
    pinned = nA.content != 0
    active = [(x, y, d) for x, y, d in zip(nA.torsion, nB.torsion, nA.moduli) if d > 1]
    out = []
    for r in range(n):
        cands = []
        if pinned:
            heads = [int(r == 0) % D]
            tails = itertools.product(range(D), repeat=n - 1)
            vectors = ((heads[0],) + t for t in tails)
        else:
            vectors = itertools.product(range(D), repeat=n)
        for v in vectors:
            if budget is not None:
                budget.tick()
            if all(sum(a * b for a, b in zip(v, x)) % d == y[r] % d for x, y, d in active):
                cands.append(list(v))
        out.append(cands)
    return out


def _search(nA, nB, D, pm_one: bool, budget) -> Optional[zm.ModMatrix]:
    n = len(nA.free)
    rows = _row_candidates(nA, nB, D, budget)
    if any(not r for r in rows):
        return None
    pm = {1 % D, -1 % D}
    pred = (lambda R: R.det() in pm) if pm_one else None
    for R in zm.enumerate_units_matrices(n, D, pred, rows=rows, budget=budget):
        return R
    return None


def _identity_witness(A: ExtensionClass, integral: bool) -> Witness:
    n = A.n
    D = torsion_exponent(A)
    R = zm.ModMatrix.of(zm.identity(n), D)
    sigma = tuple(range(1, A.m + 1))
    if integral:
        return IntegralWitness(tuple(map(tuple, zm.identity(n))), sigma, R, R.det())
    return ProfiniteWitness(sigma, R, R.det())


def _decide(A: ExtensionClass, B: ExtensionClass, integral: bool, budget) -> Optional[Witness]:
    _check_same(A, B)
    check_rank(A.n)
    if isinstance(budget, int):
        budget = zm.SearchBudget(budget)
    if class_equal(A, B):
        return _identity_witness(A, integral)
    nA = canonical_normalize(A)
    if nA.content != zm.content(euler_map(B)):
        return None
    D = nA.modulus
    for tau in symmetry_group(A.sig):
        nB = canonical_normalize(permute_columns(B, tau))
        R = _search(nA, nB, D, integral, budget)
        if R is None:
            continue
        sigma = invert_permutation(tau)
        if integral:
            core = zm.lift_modular_matrix(R, det_pm_one=True, pin_first_column=nA.content != 0)
            phi = zm.matmul(zm.matmul(nB.U_inv, core), nA.U)
            w = IntegralWitness(tuple(map(tuple, phi)), sigma, R, R.det())
        else:
            w = ProfiniteWitness(sigma, R, R.det())
        if not verify_witness(w, A, B):
            raise InternalVerificationFailed(f"{w.kind} witness failed verification")
        return w
    return None


def decide_integral_iso(A: ExtensionClass, B: ExtensionClass, budget=None) -> Optional[IntegralWitness]:
    """Find ``(Phi, sigma)`` in GL_n(Z) x Sigma with ``act(Phi, sigma, A) == B``.

    Returns ``None`` when the classes lie in different orbits; that answer
    is only given after the whole search space is exhausted.  Class-equal
    inputs short-circuit to the identity witness; otherwise the first hit
    in (Sigma order, lexicographic R) order is returned.
    """
    return _decide(A, B, True, budget)


def decide_profinite_iso(A: ExtensionClass, B: ExtensionClass, budget=None) -> Optional[ProfiniteWitness]:
    """Same search as :func:`decide_integral_iso` with any unit determinant."""
    return _decide(A, B, False, budget)


def verify_witness(w: Witness, A: ExtensionClass, B: ExtensionClass) -> bool:
    try:
        if isinstance(w, IntegralWitness):
            return class_equal(act(w.phi, w.sigma, A), B)
        return _verify_profinite(w, A, B)
    except (OrbextError, ValueError, TypeError, IndexError):
        return False


def _verify_profinite(w: ProfiniteWitness, A, B) -> bool:
    _check_same(A, B)
    sigma = tuple(w.sigma)
    if sigma not in symmetry_group(A.sig):
        return False
    nA = canonical_normalize(A)
    nB = canonical_normalize(permute_columns(B, invert_permutation(sigma)))
    R = w.R
    D = nA.modulus
    if R.modulus != D or R.n != A.n or not R.is_invertible():
        return False
    if w.det_class % D != R.det():
        return False
    if nA.content != nB.content:
        return False
    if nA.content != 0 and any(R.entries[i][0] != int(i == 0) % D for i in range(A.n)):
        return False
    for x, y, d in zip(nA.torsion, nB.torsion, nA.moduli):
        Rx = zm.matvec(R.entries, x)
        if any((a - b) % d for a, b in zip(Rx, y)):
            return False
    return True
