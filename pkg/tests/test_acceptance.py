"""Acceptance gate.

Each criterion is a function returning ``(ok, detail)`` and has a wall
clock limit.  Under pytest every criterion is its own test and prints one
PASS/FAIL line; ``python tests/test_acceptance.py`` prints the same lines
without pytest.
"""

import itertools
import random
import sys
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from orbext import zmatrix as zm  # noqa: E402
from orbext.coclass import (  # noqa: E402
    act,
    class_equal,
    decompose,
    divisors_from_orders,
    euler_map,
    make_class,
    random_class,
    recombine,
)
from orbext.groups import abelianization, count_homs, emit_presentation, hk_form, small_groups  # noqa: E402
from orbext.orbifold import symmetry_group, validate_signature  # noqa: E402
from orbext.orbits import decide_integral_iso, decide_profinite_iso, verify_witness  # noqa: E402
from orbext.rigidity import (  # noqa: E402
    classify_rigidity,
    construct_nonrigid_pair,
    stabilize,
    stabilized_integral_witness,
)
from oracles import divisors_prime_by_prime  # noqa: E402

sig = validate_signature
NONRIGID_CASES = [(1, [5, 5], 2), (0, [5, 5, 5, 5], 2)]


def divisor_formula():
    rng = random.Random(1001)
    bad = 0
    for _ in range(1000):
        p = [rng.randint(2, 30) for _ in range(rng.randint(1, 6))]
        snf = zm.smith_normal_form([[q * int(i == j) for j, q in enumerate(p)] for i in range(len(p))]).diagonal
        if list(divisors_from_orders(p)) != snf or snf != divisors_prime_by_prime(p):
            bad += 1
    return bad == 0, f"{bad} mismatches in 1000 samples"


def nonrigid_pairs():
    notes = []
    ok = True
    for g, p, n in NONRIGID_CASES:
        A, B, w = construct_nonrigid_pair(sig(g, p), n)
        integral = decide_integral_iso(A, B)
        prof = decide_profinite_iso(A, B)
        good = (
            integral is None
            and prof is not None
            and verify_witness(prof, A, B)
            and prof.det_class % 5 not in (1, 4)
        )
        ok &= good
        notes.append(f"({g};{p}) det_class={prof.det_class if prof else None}")
    return ok, ", ".join(notes)


def stabilization():
    ok = True
    notes = []
    for g, p, n in NONRIGID_CASES:
        A, B, w = construct_nonrigid_pair(sig(g, p), n)
        W = stabilized_integral_witness(A, B, w)
        sA, sB = stabilize(A), stabilize(B)
        good = (
            len(W.phi) == n + 1
            and abs(zm.determinant(W.phi)) == 1
            and class_equal(act(W.phi, W.sigma, sA), sB)
        )
        ok &= good
        notes.append(f"({g};{p}) phi={[list(r) for r in W.phi]}")
    return ok, "; ".join(notes)


def rigid_instance():
    s = sig(1, [2, 2])
    assert classify_rigidity(s, 2).verdict == "rigid"
    classes = []
    for x1, x2 in itertools.product(itertools.product((0, 1), repeat=2), repeat=2):
        for f in itertools.product(range(-2, 3), repeat=2):
            if any((a + b - c) % 2 for a, b, c in zip(x1, x2, f)):
                continue
            rows = [[(x1[r] + x2[r] - f[r]) // 2, x1[r], x2[r]] for r in range(2)]
            A = make_class(s, rows)
            assert euler_map(A) == f
            classes.append(A)
    pairs = disagree = iso = 0
    for A, B in itertools.combinations_with_replacement(classes, 2):
        if zm.content(euler_map(A)) != zm.content(euler_map(B)):
            continue
        pairs += 1
        integral = decide_integral_iso(A, B) is not None
        iso += integral
        if integral != (decide_profinite_iso(A, B) is not None):
            disagree += 1
    return disagree == 0, f"{len(classes)} classes, {pairs} pairs ({iso} isomorphic), {disagree} disagreements"


def witness_soundness():
    rng = random.Random(2002)
    sigs = [sig(1, [5, 5]), sig(0, [5, 5, 5, 5]), sig(1, [2, 2]), sig(0, [3, 3, 6, 6]), sig(1, [4, 4]),
            sig(0, [2, 3, 7]), sig(2, []), sig(1, [3, 6, 6]), sig(0, [2, 2, 2, 2, 2]), sig(1, [7, 7])]
    failures = implications = 0
    for k in range(200):
        s = sigs[k % len(sigs)]
        n = rng.choice([2, 3])
        A = random_class(s, n, rng, bound=8)
        Phi = []
        while not Phi or abs(zm.determinant(Phi)) != 1:
            Phi = [[int(i == j) for j in range(n)] for i in range(n)]
            for _ in range(6):
                i, j = rng.sample(range(n), 2)
                c = rng.randint(-3, 3)
                Phi[i] = [a + c * b for a, b in zip(Phi[i], Phi[j])]
            if rng.random() < 0.5:
                Phi[0] = [-x for x in Phi[0]]
        sigma = rng.choice(list(symmetry_group(s)))
        B = act(Phi, sigma, A)
        w = decide_integral_iso(A, B)
        if w is None or not verify_witness(w, A, B):
            failures += 1
        # integral => profinite, on the round-trip pair and on an unrelated one
        C = random_class(s, n, rng, bound=2)
        for X, Y in ((A, B), (A, C)):
            wi = decide_integral_iso(X, Y)
            if wi is not None:
                implications += 1
                wp = decide_profinite_iso(X, Y)
                if wp is None or not verify_witness(wp, X, Y):
                    failures += 1
    return failures == 0, f"200 round trips, {implications} implications checked, {failures} failures"


def negative_control():
    A, B, _ = construct_nonrigid_pair(sig(1, [5, 5]), 2)
    same_ab = abelianization(A) == abelianization(B)
    PA, PB = emit_presentation(A), emit_presentation(B)
    diffs = [G.name for G in small_groups(12) if count_homs(PA, G) != count_homs(PB, G)]
    separated = decide_integral_iso(A, B) is None
    ok = same_ab and not diffs and separated
    return ok, f"ab {abelianization(A)} equal={same_ab}, hom-count differences={diffs}, integral separates={separated}"


def torus_case():
    rng = random.Random(3003)
    bad = 0
    for t in range(50):
        n = 2 + t % 2
        x0 = [rng.randint(-30, 30) * rng.choice([1, 1, 2, 6]) for _ in range(n)]
        if t == 0:
            x0 = [0] * n
        A = make_class(sig(1, []), [[v] for v in x0])
        k = hk_form(A).k
        ab = abelianization(A)
        expected_free = n + 1 + (k == 0)
        expected_torsion = (k,) if k > 1 else ()
        if k != zm.content(x0) or hk_form(A).copies != n - 1 or (ab.free_rank, ab.torsion) != (expected_free, expected_torsion):
            bad += 1
    return bad == 0, f"{bad} mismatches in 50 samples"


def decomposition_round_trip():
    rng = random.Random(4004)
    sigs = [sig(1, [5, 5]), sig(0, [2, 3, 7]), sig(0, [5, 5, 5, 5]), sig(1, [2, 2]), sig(2, []),
            sig(0, [4, 6, 10, 12]), sig(1, [12, 12]), sig(0, [3, 3, 3, 9]), sig(2, [6, 4, 4]), sig(1, [30, 20, 8])]
    bad = 0
    for k in range(500):
        s = sigs[k % 10]
        n = rng.choice([2, 3, 4])
        A = random_class(s, n, rng, bound=50)
        dec = decompose(A)
        back = recombine(dec, s, n)
        if not class_equal(back, A) or decompose(back) != dec:
            bad += 1
    return bad == 0, f"{bad} failures in 500 round trips"


CRITERIA = [
    ("divisor formula equals SNF of diag(p)", divisor_formula, 30),
    ("non-rigid pairs: integral no, profinite yes", nonrigid_pairs, 10),
    ("stabilized pairs: verified GL_{n+1}(Z) witness", stabilization, 10),
    ("rigid instance (1;[2,2]): decisions agree", rigid_instance, 60),
    ("witness soundness and integral => profinite", witness_soundness, 60),
    ("finite-quotient negative control", negative_control, 120),
    ("torus case: ab = Z^{n+1} + Z/k", torus_case, 5),
    ("decomposition round trip", decomposition_round_trip, 30),
]


def evaluate(name, fn, limit):
    t0 = time.perf_counter()
    ok, detail = fn()
    dt = time.perf_counter() - t0
    passed = ok and dt < limit
    line = f"[{'PASS' if passed else 'FAIL'}] {name}: {detail} ({dt:.2f}s, limit {limit}s)"
    return passed, line


@pytest.mark.parametrize("name, fn, limit", CRITERIA, ids=[c[1].__name__ for c in CRITERIA])
def test_criterion(name, fn, limit, capsys):
    from conftest import ACCEPTANCE_LINES

    passed, line = evaluate(name, fn, limit)
    ACCEPTANCE_LINES.append(line)
    with capsys.disabled():
        print("\n" + line)
    assert passed, line


if __name__ == "__main__":
    results = [evaluate(*c) for c in CRITERIA]
    for _, line in results:
        print(line)
    sys.exit(0 if all(p for p, _ in results) else 1)
