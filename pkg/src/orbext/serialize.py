"""JSON forms of signatures, matrices, classes, witnesses and verdicts.

Integers outside the 53-bit safe range are written as decimal strings so
that JavaScript-style consumers do not lose precision; readers accept
either form.
"""

from __future__ import annotations

import json
from typing import Any

from . import zmatrix as zm
from .coclass import ExtensionClass
from .errors import InputError, ShapeError
from .groups import AbelianInvariants, HkForm
from .orbifold import validate_signature, OrbifoldSignature
from .orbits import IntegralWitness, ProfiniteWitness
from .rigidity import RigidityVerdict

SAFE = 2**53 - 1


def dump_int(x: int):
    return x if -SAFE <= x <= SAFE else str(x)


def load_int(x) -> int:
    if isinstance(x, bool):
        raise InputError(f"expected an integer, got {x!r}")
    if isinstance(x, int):
        return x
    if isinstance(x, str):
        try:
            return int(x)
        except ValueError:
            pass
    raise InputError(f"expected an integer, got {x!r}")


def _require(doc, key):
    if not isinstance(doc, dict) or key not in doc:
        raise InputError(f"missing field {key!r}")
    return doc[key]


def signature_to_json(sig: OrbifoldSignature) -> dict:
    return {"genus": sig.genus, "cone_orders": list(sig.cone_orders)}


def signature_from_json(doc) -> OrbifoldSignature:
    g = load_int(_require(doc, "genus"))
    p = _require(doc, "cone_orders")
    if not isinstance(p, list):
        raise InputError("cone_orders must be a list")
    return validate_signature(g, [load_int(q) for q in p])


def matrix_to_json(M) -> dict:
    rows = [list(r) for r in M]
    return {
        "rows": len(rows),
        "cols": len(rows[0]) if rows else 0,
        "entries": [[dump_int(x) for x in r] for r in rows],
    }


def matrix_from_json(doc) -> list[list[int]]:
    if isinstance(doc, list):  # bare list of rows
        doc = {"entries": doc}
    entries = _require(doc, "entries")
    if not isinstance(entries, list) or any(not isinstance(r, list) for r in entries):
        raise ShapeError("entries must be a list of rows")
    M = [[load_int(x) for x in r] for r in entries]
    r = doc.get("rows", len(M))
    c = doc.get("cols", len(M[0]) if M else 0)
    if len(M) != r or any(len(row) != c for row in M):
        raise ShapeError(f"entries do not form a {r} x {c} matrix")
    return M


def class_to_json(A: ExtensionClass) -> dict:
    return {
        "signature": signature_to_json(A.sig),
        "n": A.n,
        "matrix": [[dump_int(x) for x in r] for r in A.rep],
    }


def class_from_json(doc) -> ExtensionClass:
    sig = signature_from_json(_require(doc, "signature"))
    n = load_int(_require(doc, "n"))
    M = matrix_from_json(_require(doc, "matrix"))
    return ExtensionClass(sig, n, M)


def witness_to_json(w) -> dict:
    return {
        "kind": w.kind,
        "sigma": list(w.sigma),
        "phi": matrix_to_json(w.phi) if isinstance(w, IntegralWitness) else None,
        "R_modD": matrix_to_json(w.R.entries),
        "modulus": w.modulus,
        "det_class": w.det_class,
    }


def witness_from_json(doc):
    kind = _require(doc, "kind")
    sigma = tuple(load_int(s) for s in _require(doc, "sigma"))
    D = load_int(_require(doc, "modulus"))
    if D < 1:
        raise InputError("modulus must be >= 1")
    R = zm.ModMatrix.of(matrix_from_json(_require(doc, "R_modD")), D)
    det_class = load_int(_require(doc, "det_class"))
    if kind == "integral":
        phi = matrix_from_json(_require(doc, "phi"))
        return IntegralWitness(tuple(map(tuple, phi)), sigma, R, det_class)
    if kind == "profinite":
        return ProfiniteWitness(sigma, R, det_class)
    raise InputError(f"unknown witness kind {kind!r}")


def verdict_to_json(v: RigidityVerdict) -> dict:
    return {"verdict": v.verdict, "d_sequence": list(v.d_sequence), "certificate": v.certificate}


def invariants_to_json(ab: AbelianInvariants) -> dict:
    return {"free_rank": ab.free_rank, "torsion": list(ab.torsion), "text": str(ab)}


def hk_to_json(h: HkForm) -> dict:
    return {"k": h.k, "copies": h.copies}


def dumps(doc: Any) -> str:
    """Deterministic JSON text (sorted keys, fixed separators)."""
    return json.dumps(doc, sort_keys=True, separators=(",", ":"))
