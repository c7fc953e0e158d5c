import random

import pytest

from orbext.coclass import act, make_class, random_class, relation_class, zero_class
from orbext.errors import BudgetExceeded, InputError, WrongSignature
from orbext.groups import (
    AbelianInvariants,
    FiniteGroup,
    Presentation,
    abelianization,
    abelianize_presentation,
    count_homs,
    emit_presentation,
    hk_form,
    small_groups,
)
from orbext.rigidity import construct_nonrigid_pair
from oracles import brute_homs, sym3_table
from conftest import random_unimodular, sig

Z2_PRES = Presentation(("x", "y"), (((0, -1), (1, -1), (0, 1), (1, 1)),))
S3 = FiniteGroup(sym3_table(), "S3")

# number of groups of each order up to 12
GROUP_COUNTS = {1: 1, 2: 1, 3: 1, 4: 2, 5: 1, 6: 2, 7: 1, 8: 5, 9: 2, 10: 2, 11: 1, 12: 5}


def _fingerprint(G):
    orders = sorted(G.element_order(a) for a in range(G.order))
    commuting = sum(G.table[a][b] == G.table[b][a] for a in range(G.order) for b in range(G.order))
    squares = len({G.table[a][a] for a in range(G.order)})
    return G.order, tuple(orders), commuting, squares


def test_bundled_groups():
    groups = small_groups()
    assert len(groups) == 24
    for G in groups:
        assert G.is_associative()
        assert G.identity == 0
    counts = {}
    for G in groups:
        counts[G.order] = counts.get(G.order, 0) + 1
    assert counts == GROUP_COUNTS
    # pairwise non-isomorphic
    assert len({_fingerprint(G) for G in groups}) == 24


def test_finite_group_rejects_bad_tables():
    with pytest.raises(InputError):
        FiniteGroup([[0, 1], [0, 1]])
    with pytest.raises(InputError):
        FiniteGroup([[1, 0], [0, 1]] + [[0, 1]])


def test_count_homs_examples():
    assert count_homs(Z2_PRES, S3) == 18
    free = Presentation(("u", "v"), ())
    for G in small_groups():
        assert count_homs(free, G) == G.order**2
    assert count_homs(Z2_PRES, S3, jobs=2) == 18


def test_count_homs_matches_brute_force():
    rng = random.Random(5)
    groups = [G for G in small_groups(8)]
    for _ in range(40):
        k = rng.randint(1, 3)
        rels = []
        for _ in range(rng.randint(0, 3)):
            rels.append(tuple((rng.randrange(k), rng.choice([-3, -2, -1, 1, 2, 3])) for _ in range(rng.randint(1, 4))))
        P = Presentation(tuple(f"g{i}" for i in range(k)), tuple(rels))
        G = rng.choice(groups)
        assert count_homs(P, G) == brute_homs(P.generators, P.relators, G.table)


def test_count_homs_extension_matches_brute_force():
    A = make_class(sig(0, 2, 2, 2), [[1, 0, 1, 1], [0, 1, 1, 0]])
    P = emit_presentation(A)
    for G in small_groups(4):
        assert count_homs(P, G) == brute_homs(P.generators, P.relators, G.table)


def test_count_homs_limits():
    with pytest.raises(BudgetExceeded):
        count_homs(emit_presentation(zero_class(sig(1, 5, 5), 2)), small_groups()[-1], budget=100)
    big = FiniteGroup([[(a + b) % 17 for b in range(17)] for a in range(17)])
    with pytest.raises(InputError):
        count_homs(Z2_PRES, big)


def test_presentation_shape():
    A = make_class(sig(1, 5, 5), [[0, 1, 0], [0, 0, 1]])
    P = emit_presentation(A)
    assert P.generators == ("x1", "y1", "a1", "a2", "z1", "z2")
    text = P.to_text()
    assert "a1^5 z1^-1" in text and "a2^5 z2^-1" in text
    assert Presentation.from_text(text) == P
    # 2 z's times 5 other generators of commutators, 2 cone relators, 1 long relator
    assert len(P.relators) == 2 * 5 + 3


def test_zero_class_is_direct_product():
    # Z^n x Delta: abelianization is Z^n + ab(Delta)
    ab = abelianization(zero_class(sig(1, 5, 5), 2))
    assert ab == AbelianInvariants(4, (5,))
    ab2 = abelianization(zero_class(sig(0, 2, 3, 7), 3))
    assert ab2 == AbelianInvariants(3, ())


def test_hk_examples():
    T = sig(1)
    assert hk_form(make_class(T, [[6], [4]])).k == 2
    assert hk_form(make_class(T, [[0], [0], [0]])).k == 0
    assert hk_form(make_class(T, [[3], [5]])).k == 1
    assert hk_form(make_class(T, [[3], [5]])).copies == 1
    with pytest.raises(WrongSignature):
        hk_form(zero_class(sig(1, 5, 5), 2))
    for k in range(0, 7):
        ab = abelianization(make_class(T, [[k], [0]]))
        assert ab == AbelianInvariants(3 if k else 4, (k,) if k > 1 else ())


def test_formula_matches_presentation():
    rng = random.Random(6)
    sigs = [sig(1, 5, 5), sig(0, 2, 3, 7), sig(1), sig(2, 4, 6), sig(0, 3, 3, 3, 3)]
    for s in sigs:
        for n in (2, 3):
            A = random_class(s, n, rng)
            assert abelianization(A) == abelianize_presentation(emit_presentation(A))


def _shift(P, gi, zcols):
    """Replace generator gi by gi * z^zcols and collect the (central) z's at the end."""
    zidx = [i for i, g in enumerate(P.generators) if g.startswith("z")]
    rels = []
    for w in P.relators:
        if any(g in zidx for g, _ in w) and len(w) == 4 and w[0][1] == -1 and w[2][1] == 1:
            rels.append(w)  # commutators with z are unchanged
            continue
        body, zs = [], [0] * len(zidx)
        for g, e in w:
            if g in zidx:
                zs[zidx.index(g)] += e
            else:
                body.append((g, e))
                if g == gi:
                    zs = [a + e * b for a, b in zip(zs, zcols)]
        rels.append(tuple(body) + tuple((z, e) for z, e in zip(zidx, zs) if e))
    return Presentation(P.generators, tuple(rels))


def test_substitution_reproduces_relation_lattice():
    rng = random.Random(7)
    s = sig(1, 5, 3, 5)
    for _ in range(20):
        A = random_class(s, 2, rng)
        i = rng.randint(1, s.m)
        w = [rng.randint(-3, 3), rng.randint(-3, 3)]
        gi = emit_presentation(A).generators.index(f"a{i}")
        shifted = _shift(emit_presentation(A), gi, w)
        assert shifted == emit_presentation(A - relation_class(s, w, i))


def test_invariants_under_action():
    rng = random.Random(8)
    s = sig(1, 5, 5)
    A = random_class(s, 2, rng)
    B = act(random_unimodular(2, rng), (2, 1), A) + relation_class(s, [1, 3], 2)
    assert abelianization(A) == abelianization(B)
    PA, PB = emit_presentation(A), emit_presentation(B)
    for G in small_groups(8):
        assert count_homs(PA, G) == count_homs(PB, G)


def test_nonrigid_pair_indistinguishable_by_invariants():
    A, B, w = construct_nonrigid_pair(sig(1, 5, 5), 2)
    assert abelianization(A) == abelianization(B)
    PA, PB = emit_presentation(A), emit_presentation(B)
    for G in small_groups(8):
        assert count_homs(PA, G) == count_homs(PB, G)
