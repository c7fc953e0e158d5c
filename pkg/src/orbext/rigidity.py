"""Rigidity classification, non-rigid pairs and stabilization.

For a nice signature and n >= 2 let ``t = d_{m-(n-1)}`` (1-based).

* ``n > m`` or ``t`` in {1, 2, 3, 4, 6}: profinite completions separate
  non-isomorphic extensions (the unit group mod t is {+-1}).
* ``n <= m`` and ``t`` not in {1, 2, 3, 4, 6, 12}: some prime power
  ``q`` outside {2, 3, 4} divides t, hence at least n cone orders, and a
  determinant that is not +-1 mod q produces a non-rigid pair.
* ``t == 12`` is left open.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

from . import zmatrix as zm
from .coclass import (
    Decomposition,
    ExtensionClass,
    check_rank,
    decompose,
    elementary_divisors,
    permute_columns,
    recombine,
)
from .errors import FiniteOrbifold, InternalVerificationFailed, NotNonRigid, WitnessInvalid
from .orbifold import OrbifoldSignature, SignatureKind, classify_signature, invert_permutation
from .orbits import (
    IntegralWitness,
    ProfiniteWitness,
    canonical_normalize,
    decide_integral_iso,
    decide_profinite_iso,
    verify_witness,
)

SMALL_UNIT_GROUP = frozenset({1, 2, 3, 4, 6})


@dataclass(frozen=True)
class RigidityVerdict:
    verdict: str  # "rigid" | "nonrigid" | "unresolved12"
    d_sequence: tuple[int, ...]
    reason: Optional[str] = None  # "n_greater_than_m" | "small_unit_group"
    d_value: Optional[int] = None
    prime_power: Optional[tuple[int, int]] = field(default=None)  # (p, alpha)

    @property
    def certificate(self) -> dict:
        cert = {}
        if self.reason:
            cert["reason"] = self.reason
        if self.d_value is not None:
            cert["d"] = self.d_value
        if self.prime_power:
            p, a = self.prime_power
            cert["prime"] = p
            cert["exponent"] = a
            cert["prime_power"] = p**a
        return cert


def _prime_power_certificate(t: int) -> tuple[int, int]:
    """Smallest prime power p^a dividing t with p^a not in {2, 3, 4}."""
    best = None
    for p in zm.prime_factors(t):
        a = 1
        while t % p ** (a + 1) == 0 and p**a in (2, 3, 4):
            a += 1
        if p**a not in (2, 3, 4) and (best is None or p**a < best[0] ** best[1]):
            best = (p, a)
    if best is None:
        raise ValueError(f"{t} has no prime power divisor outside {{2, 3, 4}}")
    return best


def classify_rigidity(sig: OrbifoldSignature, n: int) -> RigidityVerdict:
    check_rank(n)
    kind = classify_signature(sig)
    if kind is SignatureKind.FINITE:
        raise FiniteOrbifold(f"{sig} describes a finite orbifold group")
    d = elementary_divisors(sig).d
    m = sig.m
    if kind is SignatureKind.EUCLIDEAN_TORUS or n > m:
        return RigidityVerdict("rigid", d, reason="n_greater_than_m")
    t = d[m - (n - 1) - 1]
    if t in SMALL_UNIT_GROUP:
        return RigidityVerdict("rigid", d, reason="small_unit_group", d_value=t)
    if t == 12:
        return RigidityVerdict("unresolved12", d, d_value=t)
    return RigidityVerdict("nonrigid", d, d_value=t, prime_power=_prime_power_certificate(t))


def _twist_unit(q: int, D: int) -> int:
    """Smallest a >= 2 that is a unit mod D with a != +-1 mod q."""
    a = 2
    while math.gcd(a, D) != 1 or a % q in (1 % q, -1 % q):
        a += 1
    return a


def construct_nonrigid_pair(sig: OrbifoldSignature, n: int):
    """Return ``(A, B, w)``: classes with isomorphic profinite completions
    that are not isomorphic, and a profinite witness for them.

    ``A`` has ``e_1, ..., e_n`` in the first n cone columns whose order is
    divisible by the certificate prime power q.  ``B`` is the image of A
    under ``U^-1 diag(1, ..., 1, a) U`` (``U`` the normalizer of A), with
    ``a`` a unit that is not +-1 modulo q.  Both decisions are run before
    the triple is returned.
    """
    verdict = classify_rigidity(sig, n)
    if verdict.verdict != "nonrigid":
        raise NotNonRigid(f"{sig} with n = {n} is {verdict.verdict}")
    p, alpha = verdict.prime_power
    q = p**alpha
    positions = [i for i, o in enumerate(sig.cone_orders, start=1) if o % q == 0][:n]
    if len(positions) < n:
        raise InternalVerificationFailed(f"fewer than {n} cone orders divisible by {q}")
    rep = zm.zeros(n, sig.m + 1)
    for k, i in enumerate(positions):
        rep[k][i] = 1
    A = ExtensionClass(sig, n, rep)

    nA = canonical_normalize(A)
    D = nA.modulus
    a = _twist_unit(q, D)
    twist = [[int(i == j) for j in range(n)] for i in range(n)]
    twist[n - 1][n - 1] = a
    dec = decompose(A)
    torsion = []
    for x, d in zip(nA.torsion, nA.moduli):
        y = zm.matvec(nA.U_inv, zm.matvec(twist, x))
        torsion.append(tuple(v % d for v in y))
    B = recombine(Decomposition(dec.free, tuple(torsion), dec.moduli), sig, n)

    if decide_integral_iso(A, B) is not None:
        raise InternalVerificationFailed("constructed pair is isomorphic over Z")
    w = decide_profinite_iso(A, B)
    if w is None or not verify_witness(w, A, B):
        raise InternalVerificationFailed("constructed pair has no profinite witness")
    if w.det_class % q in (1 % q, -1 % q):
        raise InternalVerificationFailed("profinite witness has determinant +-1 mod q")
    return A, B, w


def stabilize(A: ExtensionClass) -> ExtensionClass:
    """Append a zero row: the class of ``G x Z``."""
    return ExtensionClass(A.sig, A.n + 1, list(A.rep) + [(0,) * (A.m + 1)])


def _block_diag(M, extra):
    n = len(M)
    out = [list(row) + [0] for row in M]
    out.append([0] * n + [extra])
    return out


def stabilized_integral_witness(A: ExtensionClass, B: ExtensionClass, w: ProfiniteWitness) -> IntegralWitness:
    """Integral witness relating ``stabilize(A)`` and ``stabilize(B)``.

    The mod-D matrix ``R`` of ``w`` is extended to ``diag(R, det(R)^-1)``,
    which has determinant 1 and so lifts to GL_{n+1}(Z).
    """
    if not isinstance(w, ProfiniteWitness) or not verify_witness(w, A, B):
        raise WitnessInvalid("profinite witness does not verify for (A, B)")
    tau = invert_permutation(w.sigma)
    nA = canonical_normalize(A)
    nB = canonical_normalize(permute_columns(B, tau))
    D = w.modulus
    inv = pow(w.R.det(), -1, D) if D > 1 else 0
    R2 = zm.ModMatrix.of(_block_diag(w.R.entries, inv), D)
    core = zm.lift_modular_matrix(R2, det_pm_one=True, pin_first_column=nA.content != 0)
    phi = zm.matmul(zm.matmul(_block_diag(nB.U_inv, 1), core), _block_diag(nA.U, 1))
    sA, sB = stabilize(A), stabilize(B)
    out = IntegralWitness(tuple(map(tuple, phi)), tuple(w.sigma), R2, R2.det())
    if not verify_witness(out, sA, sB):
        raise InternalVerificationFailed("stabilized witness failed verification")
    return out
