"""Presentations of extension groups, abelianizations and hom counting.

For a class ``A`` over ``(g; p_1, ..., p_m)`` the extension group is

    < x_i, y_i, a_i, z_k |  [z_k, every generator],
                            a_i^{p_i} z^{-A[:, i]}  (i = 1..m),
                            [x_1, y_1] ... [x_g, y_g] a_1 ... a_m z^{-A[:, 0]} >

where ``z^v`` means ``z_1^{v_1} ... z_n^{v_n}`` and ``[u, v] = u^-1 v^-1 u v``.
So ``a_i^{p_i} = z^{A[:, i]}``.  Replacing ``a_i`` by ``a_i z^w`` turns
column i into ``A_i - p_i w`` and column 0 into ``A_0 - w``, which is
subtracting the relation element ``w r_0* + p_i w r_i*``: class-equal
matrices give isomorphic groups.
"""

from __future__ import annotations

import json
import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from typing import Optional, Sequence

from . import zmatrix as zm
from .coclass import ExtensionClass
from .errors import InputError, WrongSignature

DEFAULT_MAX_ORDER = 16
DEFAULT_MAX_GENERATORS = 64
DEFAULT_NODE_BUDGET = 50_000_000

Word = tuple[tuple[int, int], ...]  # (generator index, nonzero exponent)


@dataclass(frozen=True)
class Presentation:
    generators: tuple[str, ...]
    relators: tuple[Word, ...]

    def to_text(self) -> str:
        lines = [" ".join(self.generators)]
        for w in self.relators:
            lines.append(" ".join(f"{self.generators[g]}^{e}" for g, e in w) or "1")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Presentation":
        lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
        if not lines:
            raise InputError("empty presentation")
        gens = tuple(lines[0].split())
        if len(set(gens)) != len(gens):
            raise InputError("duplicate generator names")
        index = {g: i for i, g in enumerate(gens)}
        rels = []
        for ln in lines[1:]:
            word = []
            for tok in ln.split():
                if tok == "1":
                    continue
                m = re.fullmatch(r"([A-Za-z_][A-Za-z_0-9]*)(?:\^(-?\d+))?", tok)
                if not m or m.group(1) not in index:
                    raise InputError(f"bad relator token {tok!r}")
                word.append((index[m.group(1)], int(m.group(2) or 1)))
            rels.append(_reduce(word))
        return cls(gens, tuple(rels))


def _reduce(word) -> Word:
    """Merge adjacent powers of the same generator and drop zero exponents."""
    out: list[list[int]] = []
    for g, e in word:
        if out and out[-1][0] == g:
            out[-1][1] += e
        else:
            out.append([g, e])
        if out and out[-1][1] == 0:
            out.pop()
    return tuple((g, e) for g, e in out)


def _commutator(u: int, v: int) -> Word:
    return ((u, -1), (v, -1), (u, 1), (v, 1))


def emit_presentation(A: ExtensionClass) -> Presentation:
    g, m, n = A.sig.genus, A.m, A.n
    gens = []
    for i in range(1, g + 1):
        gens += [f"x{i}", f"y{i}"]
    gens += [f"a{i}" for i in range(1, m + 1)]
    gens += [f"z{k}" for k in range(1, n + 1)]
    x = lambda i: 2 * i
    y = lambda i: 2 * i + 1
    a = lambda i: 2 * g + i
    z = lambda k: 2 * g + m + k

    def z_power(col):
        return [(z(k), -A.rep[k][col]) for k in range(n)]

    rels = []
    for k in range(n):
        for j in range(len(gens)):
            if j != z(k):
                rels.append(_commutator(z(k), j))
    for i in range(m):
        rels.append(_reduce([(a(i), A.sig.cone_orders[i])] + z_power(i + 1)))
    long = []
    for i in range(g):
        long += _commutator(x(i), y(i))
    long += [(a(i), 1) for i in range(m)]
    rels.append(_reduce(long + z_power(0)))
    return Presentation(tuple(gens), tuple(rels))


# --- abelianization -------------------------------------------------------


@dataclass(frozen=True)
class AbelianInvariants:
    free_rank: int
    torsion: tuple[int, ...]  # t_1 | t_2 | ..., each >= 2

    def __str__(self):
        parts = [f"Z^{self.free_rank}"] if self.free_rank else []
        parts += [f"Z/{t}" for t in self.torsion]
        return " + ".join(parts) or "0"


def _invariants_of(rows: list[list[int]], ncols: int, extra_free: int = 0) -> AbelianInvariants:
    if not rows or ncols == 0:
        return AbelianInvariants(ncols + extra_free, ())
    diag = zm.invariant_factors(rows)
    nonzero = [d for d in diag if d != 0]
    return AbelianInvariants(
        ncols - len(nonzero) + extra_free, tuple(d for d in nonzero if d > 1)
    )


def abelianization(A: ExtensionClass) -> AbelianInvariants:
    """Invariants of the abelianized extension group.

    The relator matrix over ``(a_1..a_m, z_1..z_n)`` has rows
    ``(1 ... 1 | -x_0)`` and ``(p_i e_i | -x_i)``; the x, y generators only
    appear in commutators and contribute free rank 2g.
    """
    m, n = A.m, A.n
    rows = [[1] * m + [-A.rep[k][0] for k in range(n)]]
    for i, p in enumerate(A.sig.cone_orders):
        rows.append([p * int(j == i) for j in range(m)] + [-A.rep[k][i + 1] for k in range(n)])
    return _invariants_of(rows, m + n, 2 * A.sig.genus)


def abelianize_presentation(P: Presentation) -> AbelianInvariants:
    """Invariants from the exponent-sum matrix of an arbitrary presentation."""
    rows = []
    for w in P.relators:
        row = [0] * len(P.generators)
        for g, e in w:
            row[g] += e
        if any(row):
            rows.append(row)
    return _invariants_of(rows, len(P.generators))


# --- the torus case -------------------------------------------------------


@dataclass(frozen=True)
class HkForm:
    """The group is ``H_k x Z^copies``."""

    k: int
    copies: int


def hk_form(A: ExtensionClass) -> HkForm:
    if A.sig.genus != 1 or A.m != 0:
        raise WrongSignature(f"H_k form needs signature (1; []), got {A.sig}")
    return HkForm(zm.content(A.column(0)), A.n - 1)


# --- finite groups --------------------------------------------------------


class FiniteGroup:
    """A finite group given by its multiplication table (``table[a][b] = ab``)."""

    def __init__(self, table: Sequence[Sequence[int]], name: str = ""):
        t = tuple(tuple(int(x) for x in row) for row in table)
        N = len(t)
        if N == 0 or any(len(row) != N for row in t):
            raise InputError("multiplication table must be square and non-empty")
        full = set(range(N))
        if any(set(row) != full for row in t) or any({t[a][b] for a in range(N)} != full for b in range(N)):
            raise InputError("multiplication table is not a Latin square")
        ids = [e for e in range(N) if t[e] == tuple(range(N))]
        if not ids:
            raise InputError("multiplication table has no identity")
        self.table = t
        self.name = name
        self.identity = ids[0]
        e = self.identity
        self.inverse = tuple(next(b for b in range(N) if t[a][b] == e) for a in range(N))
        powers = []
        for a in range(N):
            seq = [e]
            while True:
                nxt = t[seq[-1]][a]
                if nxt == e:
                    break
                seq.append(nxt)
            powers.append(tuple(seq))
        self.powers = tuple(powers)

    @property
    def order(self) -> int:
        return len(self.table)

    def element_order(self, a: int) -> int:
        return len(self.powers[a])

    def power(self, a: int, k: int) -> int:
        p = self.powers[a]
        return p[k % len(p)]

    def is_associative(self) -> bool:
        t = self.table
        N = len(t)
        return all(t[t[a][b]][c] == t[a][t[b][c]] for a in range(N) for b in range(N) for c in range(N))

    def center(self) -> tuple[int, ...]:
        t = self.table
        N = len(t)
        return tuple(a for a in range(N) if all(t[a][b] == t[b][a] for b in range(N)))

    def __repr__(self):
        return f"FiniteGroup({self.name or '?'}, order={self.order})"


@lru_cache(maxsize=1)
def _load_small_groups() -> tuple[FiniteGroup, ...]:
    raw = resources.files("orbext").joinpath("data/small_groups.json").read_text()
    return tuple(FiniteGroup(g["table"], g["name"]) for g in json.loads(raw))


def small_groups(max_order: int = 12) -> list[FiniteGroup]:
    """Bundled groups of order <= max_order, one per isomorphism type (max 12)."""
    return [G for G in _load_small_groups() if G.order <= max_order]


# --- hom counting ---------------------------------------------------------


def _generator_order(P: Presentation) -> list[int]:
    """Greedy order: each step picks the generator that completes the most
    relators, breaking ties by how many relators mention it.  For extension
    presentations this puts the central z's first, then the a's."""
    k = len(P.generators)
    supports = [frozenset(g for g, _ in w) for w in P.relators]
    freq = [sum(g in s for s in supports) for g in range(k)]
    chosen: list[int] = []
    done: set[int] = set()
    while len(chosen) < k:
        best = None
        for g in range(k):
            if g in done:
                continue
            closes = sum(1 for s in supports if g in s and s <= done | {g})
            key = (closes, freq[g], -g)
            if best is None or key > best[0]:
                best = (key, g)
        chosen.append(best[1])
        done.add(best[1])
    return chosen


def _plan(P: Presentation):
    order = _generator_order(P)
    pos = {g: i for i, g in enumerate(order)}
    checks: list[list[Word]] = [[] for _ in order]
    for w in P.relators:
        if not w:
            continue
        last = max(pos[g] for g, _ in w)
        checks[last].append(w)
    for c in checks:
        c.sort(key=len)  # commutators and short relators first
    return order, checks


def _count_from(P: Presentation, T: FiniteGroup, prefix: tuple[int, ...], budget: zm.SearchBudget) -> int:
    order, checks = _plan(P)
    tab, pw, e = T.table, T.powers, T.identity
    img = [e] * len(P.generators)
    N = T.order
    depth_total = len(order)

    def holds(w):
        cur = e
        for g, x in w:
            p = pw[img[g]]
            cur = tab[cur][p[x % len(p)]]
        return cur == e

    def rec(depth):
        if depth == depth_total:
            return 1
        g = order[depth]
        total = 0
        choices = (prefix[depth],) if depth < len(prefix) else range(N)
        for c in choices:
            budget.tick()
            img[g] = c
            if all(holds(w) for w in checks[depth]):
                total += rec(depth + 1)
        return total

    return rec(0)


def _worker(args):
    P, table, prefix, limit = args
    return _count_from(P, FiniteGroup(table), prefix, zm.SearchBudget(limit))


def count_homs(
    P: Presentation,
    T: FiniteGroup,
    budget: Optional[int] = None,
    max_order: int = DEFAULT_MAX_ORDER,
    max_generators: int = DEFAULT_MAX_GENERATORS,
    jobs: int = 1,
) -> int:
    """Exact number of homomorphisms ``P -> T``.

    Backtracks over generator images; each relator is evaluated as soon as
    all its generators are assigned, so the commutators with the central
    generators prune first.  With ``jobs > 1`` the first generator's images
    are split across processes (each share gets the full node budget).
    """
    if T.order > max_order:
        raise InputError(f"target order {T.order} exceeds the bound {max_order}")
    if len(P.generators) > max_generators:
        raise InputError(f"{len(P.generators)} generators exceed the bound {max_generators}")
    limit = DEFAULT_NODE_BUDGET if budget is None else budget
    if not P.generators:
        return 1
    if jobs <= 1:
        return _count_from(P, T, (), zm.SearchBudget(limit))
    tasks = [(P, T.table, (c,), limit) for c in range(T.order)]
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        return sum(ex.map(_worker, tasks))
