"""JSON forms for every shared artifact.

Rationals are canonical "num/den" strings (den > 0, reduced); tag keys are
1-indexed axis numbers as strings; gadget/dilation/realization integers are
decimal strings; count tables use plain JSON integers. Every value
round-trips to an identical object.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .counting import CountTable, TranslationFamily
from .errors import InvalidInputError
from .fluctuation import QpTerm, QuasiPolynomial, RealizationResult
from .geometry import HalfspaceSystem, Polytope
from .qde import (
    MinusFloor,
    MinusLinear,
    PlusFloor,
    PlusLinear,
    QdeGadget,
    QdeInstance,
    TermFactorization,
    build_gadget,
)
from .rationals import parse_rational, rat_str
from .transform import DilationFamily, EhrhartPolynomial


def _tag_value_str(v: Fraction) -> str:
    return str(v.numerator) if v.denominator == 1 else rat_str(v)


def polytope_to_json(poly: Polytope) -> dict:
    doc = {
        "dim": poly.dim,
        "vertices": [[rat_str(c) for c in v] for v in poly.vertices],
    }
    if poly.halfspaces is not None:
        doc["halfspaces"] = [
            {"a": [rat_str(c) for c in a], "b": rat_str(b)}
            for a, b in poly.halfspaces.rows
        ]
    if poly.pieces is not None:
        doc["pieces"] = [
            {
                "tag": {str(ax + 1): _tag_value_str(val) for ax, val in tag},
                "polytope": polytope_to_json(q),
            }
            for tag, q in poly.pieces
        ]
    return doc


def polytope_from_json(doc: dict) -> Polytope:
    try:
        dim = int(doc["dim"])
        verts = tuple(tuple(parse_rational(c) for c in v) for v in doc["vertices"])
        half = None
        if "halfspaces" in doc and doc["halfspaces"] is not None:
            rows = tuple(
                (tuple(parse_rational(c) for c in row["a"]), parse_rational(row["b"]))
                for row in doc["halfspaces"]
            )
            half = HalfspaceSystem(dim, rows)
        pieces = None
        if "pieces" in doc and doc["pieces"] is not None:
            pieces = tuple(
                (
                    {int(ax) - 1: parse_rational(val) for ax, val in p["tag"].items()},
                    polytope_from_json(p["polytope"]),
                )
                for p in doc["pieces"]
            )
        return Polytope(dim, verts, half, pieces)
    except (KeyError, TypeError) as exc:
        raise InvalidInputError(f"malformed polytope JSON: {exc}") from exc


def family_to_json(fam: TranslationFamily) -> dict:
    return {
        "polytope": polytope_to_json(fam.base),
        "direction": [rat_str(c) for c in fam.direction],
        "denominator": str(fam.denominator),
    }


def family_from_json(doc: dict) -> TranslationFamily:
    try:
        return TranslationFamily(
            polytope_from_json(doc["polytope"]),
            tuple(parse_rational(c) for c in doc["direction"]),
            int(doc["denominator"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidInputError(f"malformed family JSON: {exc}") from exc


def count_table_to_json(table: CountTable) -> dict:
    return {
        "entries": [[t, c] for t, c in table.entries],
        "argmin": table.argmin,
        "min": table.min,
    }


def count_table_from_json(doc: dict) -> CountTable:
    return CountTable(
        tuple((int(t), int(c)) for t, c in doc["entries"]),
        int(doc["argmin"]),
        int(doc["min"]),
    )


_FACTOR_CODECS = {
    PlusLinear: ("plus_linear", lambda f: {"p": str(f.p), "q": str(f.q)}),
    MinusLinear: ("minus_linear", lambda f: {"p_prime": str(f.p_prime), "q": str(f.q)}),
    PlusFloor: ("plus_floor", lambda f: {"r": str(f.r), "beta": str(f.beta)}),
    MinusFloor: ("minus_floor", lambda f: {"r_prime": str(f.r_prime), "beta": str(f.beta)}),
}


def _factor_to_json(f) -> dict:
    kind, enc = _FACTOR_CODECS[type(f)]
    doc = {"kind": kind}
    doc.update(enc(f))
    return doc


def _factor_from_json(doc: dict):
    kind = doc["kind"]
    if kind == "plus_linear":
        return PlusLinear(int(doc["p"]), int(doc["q"]))
    if kind == "minus_linear":
        return MinusLinear(int(doc["p_prime"]), int(doc["q"]))
    if kind == "plus_floor":
        return PlusFloor(int(doc["r"]), int(doc["beta"]))
    if kind == "minus_floor":
        return MinusFloor(int(doc["r_prime"]), int(doc["beta"]))
    raise InvalidInputError(f"unknown factor kind {kind!r}")


def gadget_to_json(g: QdeGadget) -> dict:
    doc = {
        "instance": {
            "alpha": str(g.instance.alpha),
            "beta": str(g.instance.beta),
            "gamma": str(g.instance.gamma),
        },
        "mode": g.mode,
        "N": str(g.n),
        "epsilon": rat_str(g.epsilon),
        "L": str(g.big_l),
        "terms": [[_factor_to_json(f) for f in term] for term in g.factorization.terms],
        "termPolytopes": [polytope_to_json(p) for p in g.term_polytopes],
        "hull": polytope_to_json(g.hull),
        "family": family_to_json(g.family),
    }
    if g.mode == "real":
        doc["delta"] = rat_str(g.delta)
        doc["K"] = str(g.big_k)
        doc["parallelogram"] = polytope_to_json(g.parallelogram)
    return doc


def gadget_from_json(doc: dict) -> QdeGadget:
    try:
        inst = QdeInstance(
            int(doc["instance"]["alpha"]),
            int(doc["instance"]["beta"]),
            int(doc["instance"]["gamma"]),
        )
        fact = TermFactorization(
            inst,
            tuple(tuple(_factor_from_json(f) for f in term) for term in doc["terms"]),
            int(doc["L"]),
        )
        return QdeGadget(
            instance=inst,
            mode=doc["mode"],
            n=int(doc["N"]),
            epsilon=parse_rational(doc["epsilon"]),
            big_l=int(doc["L"]),
            factorization=fact,
            term_polytopes=tuple(polytope_from_json(p) for p in doc["termPolytopes"]),
            hull=polytope_from_json(doc["hull"]),
            family=family_from_json(doc["family"]),
            delta=parse_rational(doc["delta"]) if "delta" in doc else None,
            big_k=int(doc["K"]) if "K" in doc else None,
            parallelogram=(
                polytope_from_json(doc["parallelogram"])
                if "parallelogram" in doc
                else None
            ),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidInputError(f"malformed gadget JSON: {exc}") from exc


def rebuild_gadget(doc: dict) -> QdeGadget:
    """Fresh gadget from the instance/mode of a serialized one."""
    g = gadget_from_json(doc)
    return build_gadget(g.instance, g.mode)


def dilation_family_to_json(d: DilationFamily) -> dict:
    return {
        "polytope": polytope_to_json(d.q),
        "M": str(d.m),
        "validN": str(d.valid_n),
    }


def dilation_family_from_json(doc: dict) -> DilationFamily:
    return DilationFamily(
        polytope_from_json(doc["polytope"]), int(doc["M"]), int(doc["validN"])
    )


def ehrhart_poly_to_json(p: EhrhartPolynomial) -> dict:
    return {"coefficients": [rat_str(c) for c in p.coefficients]}


def ehrhart_poly_from_json(doc: dict) -> EhrhartPolynomial:
    return EhrhartPolynomial(tuple(parse_rational(c) for c in doc["coefficients"]))


def qp_to_json(qp: QuasiPolynomial) -> dict:
    return {
        "terms": [
            {
                "gamma": (
                    str(t.gamma.numerator)
                    if t.gamma.denominator == 1
                    else rat_str(t.gamma)
                ),
                "factors": [
                    {"alpha": rat_str(a), "beta": rat_str(b)} for a, b in t.factors
                ],
            }
            for t in qp.terms
        ]
    }


def qp_from_json(doc: dict) -> QuasiPolynomial:
    try:
        return QuasiPolynomial(
            tuple(
                QpTerm(
                    parse_rational(t["gamma"]),
                    tuple(
                        (parse_rational(f["alpha"]), parse_rational(f["beta"]))
                        for f in t["factors"]
                    ),
                )
                for t in doc["terms"]
            )
        )
    except (KeyError, TypeError) as exc:
        raise InvalidInputError(f"malformed quasi-polynomial JSON: {exc}") from exc


def realization_to_json(res: RealizationResult) -> dict:
    return {
        "polytope": polytope_to_json(res.q),
        "K": str(res.big_k),
        "M": str(res.m),
        "dim": res.dim,
        "vertexCount": res.vertex_count,
        "validN": str(res.valid_n),
    }


def realization_from_json(doc: dict) -> RealizationResult:
    return RealizationResult(
        q=polytope_from_json(doc["polytope"]),
        big_k=int(doc["K"]),
        m=int(doc["M"]),
        dim=int(doc["dim"]),
        vertex_count=int(doc["vertexCount"]),
        valid_n=int(doc["validN"]),
    )


def dump(doc: dict) -> str:
    return json.dumps(doc, indent=None, separators=(",", ":"))


def load_file(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InvalidInputError(f"cannot read JSON from {path}: {exc}") from exc


def dump_file(doc: dict, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh)
        fh.write("\n")
