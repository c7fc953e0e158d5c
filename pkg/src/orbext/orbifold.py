"""Closed orientable 2-orbifold signatures.

A signature is the genus ``g`` of the underlying surface together with the
cone orders ``p_1, ..., p_m``.  The group it describes has presentation

    < x_1, y_1, ..., x_g, y_g, a_1, ..., a_m |
      [x_1, y_1] ... [x_g, y_g] a_1 ... a_m = 1,  a_i^{p_i} = 1 >.

Cone orders are kept in the order given: column ``i`` of an extension class
matrix belongs to ``p_i``.
"""

from __future__ import annotations

import enum
import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from .errors import NegativeGenus, NonPositiveOrder


@dataclass(frozen=True)
class OrbifoldSignature:
    genus: int
    cone_orders: tuple[int, ...]

    @property
    def m(self) -> int:
        return len(self.cone_orders)

    def __str__(self):
        return f"({self.genus}; {list(self.cone_orders)})"


class SignatureKind(enum.Enum):
    FINITE = "finite"
    EUCLIDEAN_TORUS = "euclidean_torus"
    NICE = "nice"


def validate_signature(g: int, p: Sequence[int] = ()) -> OrbifoldSignature:
    if isinstance(g, bool) or not isinstance(g, int):
        raise NegativeGenus(f"genus must be an integer, got {g!r}")
    if g < 0:
        raise NegativeGenus(f"genus must be >= 0, got {g}")
    orders = tuple(p)
    for i, q in enumerate(orders, start=1):
        if isinstance(q, bool) or not isinstance(q, int):
            raise NonPositiveOrder(f"cone order p_{i} must be an integer, got {q!r}")
        if q <= 1:
            raise NonPositiveOrder(f"cone order p_{i} = {q} must be >= 2")
    return OrbifoldSignature(g, orders)


def euler_characteristic(sig: OrbifoldSignature) -> Fraction:
    """Orbifold Euler characteristic ``2 - 2g - sum(1 - 1/p_i)``, exactly."""
    chi = Fraction(2 - 2 * sig.genus)
    for q in sig.cone_orders:
        chi -= 1 - Fraction(1, q)
    return chi


def classify_signature(sig: OrbifoldSignature) -> SignatureKind:
    if euler_characteristic(sig) > 0:
        return SignatureKind.FINITE
    if sig.genus == 1 and sig.m == 0:
        return SignatureKind.EUCLIDEAN_TORUS
    return SignatureKind.NICE


@dataclass(frozen=True)
class SymmetryGroup:
    """Permutations of the cone positions ``1..m`` that preserve cone orders.

    Elements are tuples in one-line notation with 1-based images:
    ``s[i - 1] == sigma(i)``.  Iteration is lazy and lexicographic on these
    tuples, so the identity comes first.
    """

    cone_orders: tuple[int, ...]
    generators: tuple[tuple[int, ...], ...]

    @property
    def degree(self) -> int:
        return len(self.cone_orders)

    def order(self) -> int:
        return math.prod(math.factorial(k) for k in Counter(self.cone_orders).values())

    def identity(self) -> tuple[int, ...]:
        return tuple(range(1, self.degree + 1))

    def __contains__(self, sigma) -> bool:
        sigma = tuple(sigma)
        m = self.degree
        if len(sigma) != m or sorted(sigma) != list(range(1, m + 1)):
            return False
        return all(self.cone_orders[s - 1] == self.cone_orders[i] for i, s in enumerate(sigma))

    def __iter__(self) -> Iterator[tuple[int, ...]]:
        p = self.cone_orders
        m = len(p)
        chosen: list[int] = []
        used = [False] * m

        def rec(i):
            if i == m:
                yield tuple(chosen)
                return
            for j in range(m):
                if not used[j] and p[j] == p[i]:
                    used[j] = True
                    chosen.append(j + 1)
                    yield from rec(i + 1)
                    chosen.pop()
                    used[j] = False

        return rec(0)

    def __len__(self):
        return self.order()


def symmetry_group(sig: OrbifoldSignature) -> SymmetryGroup:
    p = sig.cone_orders
    gens = []
    blocks: dict[int, list[int]] = {}
    for i, q in enumerate(p):
        blocks.setdefault(q, []).append(i)
    # adjacent transpositions inside each block generate its symmetric group
    for q in sorted(blocks):
        idx = blocks[q]
        for a, b in zip(idx, idx[1:]):
            perm = list(range(1, len(p) + 1))
            perm[a], perm[b] = perm[b], perm[a]
            gens.append(tuple(perm))
    return SymmetryGroup(p, tuple(gens))


def invert_permutation(sigma: Sequence[int]) -> tuple[int, ...]:
    inv = [0] * len(sigma)
    for i, s in enumerate(sigma, start=1):
        inv[s - 1] = i
    return tuple(inv)


def compose_permutations(s: Sequence[int], t: Sequence[int]) -> tuple[int, ...]:
    """``s o t``: apply ``t`` first."""
    return tuple(s[x - 1] for x in t)
