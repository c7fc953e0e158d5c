import itertools
import math
import random

import pytest

from orbext import zmatrix as zm
from orbext.coclass import (
    Decomposition,
    act,
    class_equal,
    decompose,
    make_class,
    permute_columns,
    random_class,
    recombine,
    relation_class,
)
from orbext.orbifold import symmetry_group
from orbext.orbits import (
    IntegralWitness,
    ProfiniteWitness,
    canonical_normalize,
    decide_integral_iso,
    decide_profinite_iso,
    verify_witness,
)
from conftest import random_unimodular, sig

S55 = sig(1, 5, 5)
E12 = make_class(S55, [[0, 1, 0], [0, 0, 1]])


def test_normalize_examples():
    nA = canonical_normalize(make_class(sig(1), [[4], [6]]))
    assert nA.content == 2 and nA.free == (2, 0)
    n0 = canonical_normalize(make_class(sig(1), [[0], [0]]))
    assert n0.content == 0 and n0.U == ((1, 0), (0, 1))
    n1 = canonical_normalize(make_class(sig(1), [[3], [0]]))
    assert n1.U == ((1, 0), (0, 1))
    assert zm.determinant(nA.U) == 1


def test_identity_witnesses():
    rng = random.Random(0)
    A = random_class(S55, 2, rng)
    w = decide_integral_iso(A, A)
    assert w.phi == ((1, 0), (0, 1)) and w.sigma == (1, 2) and verify_witness(w, A, A)
    p = decide_profinite_iso(A, A)
    assert p.R.entries == ((1, 0), (0, 1)) and verify_witness(p, A, A)


def test_swap_needs_sigma():
    B = make_class(S55, [[0, 0, 1], [0, 1, 0]])
    w = decide_integral_iso(E12, B)
    assert w is not None and verify_witness(w, E12, B)
    assert class_equal(act(w.phi, w.sigma, E12), B)


def test_different_contents_not_isomorphic():
    B = make_class(S55, [[0, 1, 0], [0, 1, 0]])
    assert decide_integral_iso(E12, B) is None
    assert decide_profinite_iso(E12, B) is None


def test_tampered_witnesses_fail():
    rng = random.Random(1)
    A = random_class(S55, 2, rng)
    B = act(random_unimodular(2, rng), (2, 1), A)
    w = decide_integral_iso(A, B)
    assert verify_witness(w, A, B)
    phi = [list(r) for r in w.phi]
    phi[0][0] += 5
    bad = IntegralWitness(tuple(map(tuple, phi)), w.sigma, w.R, w.det_class)
    assert not verify_witness(bad, A, B)
    p = decide_profinite_iso(A, B)
    R = p.R.rows()
    R[1][1] = (R[1][1] + 1) % 5
    assert not verify_witness(ProfiniteWitness(p.sigma, zm.ModMatrix.of(R, 5), p.det_class), A, B)
    assert not verify_witness(ProfiniteWitness((3, 1), p.R, p.det_class), A, B)


def test_round_trips_random():
    rng = random.Random(2)
    sigs = [S55, sig(0, 5, 5, 5, 5), sig(1, 2, 2), sig(0, 3, 3, 6, 6), sig(1, 4, 4), sig(0, 2, 3, 7), sig(2)]
    for k in range(60):
        s = sigs[k % len(sigs)]
        n = rng.choice([2, 3])
        A = random_class(s, n, rng, bound=6)
        B = act(random_unimodular(n, rng), rng.choice(list(symmetry_group(s))), A)
        w = decide_integral_iso(A, B)
        assert w is not None and verify_witness(w, A, B)
        p = decide_profinite_iso(A, B)
        assert p is not None and verify_witness(p, A, B)


def _orbit_partition(s, n, profinite):
    """Orbits of free-part-zero classes by BFS on decompositions."""
    moduli = decompose(make_class(s, [[0] * (s.m + 1)] * n)).moduli
    D = moduli[-1] if moduli else 1
    gens = []
    for i, j in itertools.permutations(range(n), 2):
        E = zm.identity(n)
        E[i][j] = 1
        gens.append(E)
    F = zm.identity(n)
    F[0][0] = -1
    gens.append(F)
    if profinite:
        for u in range(2, D):
            if math.gcd(u, D) == 1:
                M = zm.identity(n)
                M[0][0] = u
                gens.append(M)
    sigmas = list(symmetry_group(s))

    def key(dec):
        return dec.torsion

    def neighbours(tors):
        for M in gens:
            yield tuple(tuple(v % d for v in zm.matvec(M, x)) for x, d in zip(tors, moduli))
        A = recombine(Decomposition((0,) * n, tors, moduli), s, n)
        for t in sigmas:
            yield decompose(permute_columns(A, t)).torsion

    states = list(itertools.product(*[list(itertools.product(range(d), repeat=n)) for d in moduli]))
    label = {}
    for st in states:
        if st in label:
            continue
        label[st] = st
        todo = [st]
        while todo:
            cur = todo.pop()
            for nb in neighbours(cur):
                if nb not in label:
                    label[nb] = st
                    todo.append(nb)
    return moduli, states, label


@pytest.mark.parametrize("s, n", [(sig(1, 5, 5), 2), (sig(0, 2, 2, 2, 2), 2), (sig(1, 3, 3, 3), 2), (sig(1, 4, 4), 3), (sig(0, 4, 4, 4), 2)])
def test_decisions_match_bfs_orbits(s, n):
    rng = random.Random(100 * n + s.m)
    moduli, states, lab_z = _orbit_partition(s, n, profinite=False)
    _, _, lab_hat = _orbit_partition(s, n, profinite=True)
    for _ in range(60):
        a, b = rng.choice(states), rng.choice(states)
        if rng.random() < 0.3:  # bias toward same-orbit pairs
            b = next(x for x in states if lab_hat[x] == lab_hat[a] and x != a) if sum(lab_hat[x] == lab_hat[a] for x in states) > 1 else a
        A = recombine(Decomposition((0,) * n, a, moduli), s, n)
        B = recombine(Decomposition((0,) * n, b, moduli), s, n)
        w = decide_integral_iso(A, B)
        assert (w is not None) == (lab_z[a] == lab_z[b])
        p = decide_profinite_iso(A, B)
        assert (p is not None) == (lab_hat[a] == lab_hat[b])
        if w is not None:
            assert p is not None


def test_relation_shift_is_invisible():
    rng = random.Random(4)
    A = random_class(S55, 2, rng)
    B = A + relation_class(S55, [2, -7], 2)
    w = decide_integral_iso(A, B)
    assert w.phi == ((1, 0), (0, 1))
