"""Command-line interface: ``orbext <subcommand> ...``.

Document arguments (signatures, classes, witnesses) are JSON, given
either inline, as a path to a file, or as ``-`` for standard input.
Results go to stdout as a single deterministic JSON document; diagnostics
go to stderr.  Exit status: 0 when a command completes (a negative
decision included), 2 on bad input, 3 when --budget is exhausted.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys

from . import serialize as ser
from .coclass import check_rank, elementary_divisors
from .errors import InputError, OrbextError
from .groups import (
    DEFAULT_MAX_ORDER,
    abelianization,
    count_homs,
    emit_presentation,
    hk_form,
    small_groups,
)
from .orbifold import SignatureKind, classify_signature
from .orbits import decide_integral_iso, decide_profinite_iso, verify_witness
from .rigidity import classify_rigidity, construct_nonrigid_pair, stabilize, stabilized_integral_witness
from .coclass import random_class


def _load_doc(arg: str):
    if arg == "-":
        text = sys.stdin.read()
    elif os.path.isfile(arg):
        with open(arg) as fh:
            text = fh.read()
    else:
        text = arg
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"not valid JSON (nor a readable file): {arg!r}: {exc}") from None


def _sig(arg):
    return ser.signature_from_json(_load_doc(arg))


def _cls(arg):
    return ser.class_from_json(_load_doc(arg))


def _decision(w):
    return {"isomorphic": w is not None, "witness": ser.witness_to_json(w) if w is not None else None}


def cmd_classify(a):
    return ser.verdict_to_json(classify_rigidity(_sig(a.signature), a.n))


def cmd_divisors(a):
    sig = _sig(a.signature)
    ed = elementary_divisors(sig)
    return {
        "d_sequence": list(ed.d),
        "torsion_exponent": ed.torsion_exponent,
        "kind": classify_signature(sig).value,
    }


def cmd_decide_iso(a):
    return _decision(decide_integral_iso(_cls(a.A), _cls(a.B), budget=a.budget))


def cmd_decide_profinite_iso(a):
    return _decision(decide_profinite_iso(_cls(a.A), _cls(a.B), budget=a.budget))


def cmd_make_nonrigid(a):
    A, B, w = construct_nonrigid_pair(_sig(a.signature), a.n)
    return {"A": ser.class_to_json(A), "B": ser.class_to_json(B), "witness": ser.witness_to_json(w)}


def cmd_stabilize(a):
    return ser.class_to_json(stabilize(_cls(a.A)))


def cmd_stabilize_witness(a):
    A, B = _cls(a.A), _cls(a.B)
    w = ser.witness_from_json(_load_doc(a.witness))
    out = stabilized_integral_witness(A, B, w)
    return {
        "A": ser.class_to_json(stabilize(A)),
        "B": ser.class_to_json(stabilize(B)),
        "witness": ser.witness_to_json(out),
    }


def cmd_emit_presentation(a):
    P = emit_presentation(_cls(a.A))
    return {"generators": list(P.generators), "text": P.to_text()}


def cmd_abelianize(a):
    A = _cls(a.A)
    out = ser.invariants_to_json(abelianization(A))
    if classify_signature(A.sig) is SignatureKind.EUCLIDEAN_TORUS:
        out["hk_form"] = ser.hk_to_json(hk_form(A))
    return out


def cmd_count_homs(a):
    P = emit_presentation(_cls(a.A))
    rows = []
    for G in small_groups(a.max_order):
        rows.append({"group": G.name, "order": G.order, "homs": count_homs(P, G, budget=a.budget, jobs=a.jobs)})
    return {"max_order": a.max_order, "counts": rows}


def cmd_verify(a):
    A, B = _cls(a.A), _cls(a.B)
    w = ser.witness_from_json(_load_doc(a.witness))
    return {"valid": verify_witness(w, A, B), "kind": w.kind}


def cmd_gen_random_class(a):
    sig = _sig(a.signature)
    check_rank(a.n)
    return ser.class_to_json(random_class(sig, a.n, random.Random(a.seed), bound=a.bound))


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--budget", type=int, default=None, help="cap on search nodes (exit 3 when exceeded)")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for parallel searches")

    p = argparse.ArgumentParser(prog="orbext", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, *docs, help=""):
        sp = sub.add_parser(name, parents=[common], help=help)
        for d in docs:
            sp.add_argument(d)
        sp.set_defaults(func=fn)
        return sp

    add("classify", cmd_classify, "signature", help="rigidity verdict").add_argument("--n", type=int, required=True)
    add("divisors", cmd_divisors, "signature", help="elementary divisors d_1..d_m")
    add("decide-iso", cmd_decide_iso, "A", "B", help="isomorphism over Z")
    add("decide-profinite-iso", cmd_decide_profinite_iso, "A", "B", help="isomorphism of profinite completions")
    add("make-nonrigid", cmd_make_nonrigid, "signature", help="explicit non-rigid pair").add_argument(
        "--n", type=int, required=True
    )
    add("stabilize", cmd_stabilize, "A", help="class of G x Z")
    add("stabilize-witness", cmd_stabilize_witness, "A", "B", "witness", help="integral witness after stabilizing")
    add("emit-presentation", cmd_emit_presentation, "A", help="finite presentation of the extension group")
    add("abelianize", cmd_abelianize, "A", help="abelianization invariants")
    add("count-homs", cmd_count_homs, "A", help="hom counts into the bundled small groups").add_argument(
        "--max-order", type=int, default=12
    )
    add("verify", cmd_verify, "A", "B", "witness", help="check a witness")
    g = add("gen-random-class", cmd_gen_random_class, "signature", help="random class matrix")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--seed", type=int, required=True)
    g.add_argument("--bound", type=int, default=10)
    return p


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if getattr(args, "max_order", None) is not None and not 1 <= args.max_order <= DEFAULT_MAX_ORDER:
            raise InputError(f"--max-order must be between 1 and {DEFAULT_MAX_ORDER}")
        doc = args.func(args)
    except OrbextError as exc:
        print(f"orbext: {exc.code}: {exc}", file=sys.stderr)
        print(ser.dumps({"error": exc.code, "detail": str(exc)}))
        return exc.exit_status
    print(ser.dumps(doc))
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
