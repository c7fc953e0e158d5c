#!/usr/bin/env python3
"""Regenerate src/orbext/data/small_groups.json.

Builds every group of order <= 12 (up to isomorphism) from a concrete
model, closes the generators under multiplication and writes the Cayley
table with the identity as element 0.
"""

import json
from pathlib import Path

OUT = Path(__file__).resolve().parent.parent / "src" / "orbext" / "data" / "small_groups.json"


def closure(gens, mul, one):
    elems = [one]
    seen = {one}
    frontier = [one]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = mul(x, g)
                if y not in seen:
                    seen.add(y)
                    elems.append(y)
                    nxt.append(y)
        frontier = nxt
    index = {e: i for i, e in enumerate(elems)}
    return [[index[mul(a, b)] for b in elems] for a in elems]


def cyclic(n):
    return closure([1 % n], lambda a, b: (a + b) % n, 0)


def product(*orders):
    one = tuple(0 for _ in orders)
    gens = []
    for i, n in enumerate(orders):
        g = [0] * len(orders)
        g[i] = 1 % n
        gens.append(tuple(g))
    mul = lambda a, b: tuple((x + y) % n for x, y, n in zip(a, b, orders))
    return closure(gens, mul, one)


def dihedral(k):
    # (r, s) = rot^r refl^s
    def mul(a, b):
        r1, s1 = a
        r2, s2 = b
        return ((r1 + (-r2 if s1 else r2)) % k, (s1 + s2) % 2)

    return closure([(1, 0), (0, 1)], mul, (0, 0))


def dicyclic(k):
    # (i, j) = a^i x^j with a^(2k) = 1, x^2 = a^k, x a x^-1 = a^-1
    def mul(u, v):
        i1, j1 = u
        i2, j2 = v
        i = (i1 + (-i2 if j1 else i2)) % (2 * k)
        if j1 and j2:
            return ((i + k) % (2 * k), 0)
        return (i, (j1 + j2) % 2)

    return closure([(1, 0), (0, 1)], mul, (0, 0))


def alternating4():
    def mul(a, b):  # apply b first, then a
        return tuple(a[b[i]] for i in range(4))

    return closure([(1, 2, 0, 3), (1, 0, 3, 2)], mul, (0, 1, 2, 3))


GROUPS = [
    ("C1", cyclic(1)),
    ("C2", cyclic(2)),
    ("C3", cyclic(3)),
    ("C4", cyclic(4)),
    ("C2xC2", product(2, 2)),
    ("C5", cyclic(5)),
    ("C6", cyclic(6)),
    ("S3", dihedral(3)),
    ("C7", cyclic(7)),
    ("C8", cyclic(8)),
    ("C4xC2", product(4, 2)),
    ("C2xC2xC2", product(2, 2, 2)),
    ("D4", dihedral(4)),
    ("Q8", dicyclic(2)),
    ("C9", cyclic(9)),
    ("C3xC3", product(3, 3)),
    ("C10", cyclic(10)),
    ("D5", dihedral(5)),
    ("C11", cyclic(11)),
    ("C12", cyclic(12)),
    ("C2xC6", product(2, 6)),
    ("A4", alternating4()),
    ("D6", dihedral(6)),
    ("Dic3", dicyclic(3)),
]


def main():
    doc = [{"name": name, "order": len(t), "table": t} for name, t in GROUPS]
    OUT.parent.mkdir(parents=True, exist_ok=True)
    with OUT.open("w") as fh:
        fh.write("[\n")
        for i, g in enumerate(doc):
            fh.write("  " + json.dumps(g, separators=(",", ":")))
            fh.write(",\n" if i + 1 < len(doc) else "\n")
        fh.write("]\n")
    print(f"wrote {len(doc)} groups to {OUT}")


if __name__ == "__main__":
    main()
