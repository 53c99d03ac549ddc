"""ehrhart-forge: command-line front end.

Exit codes: 0 success (stdout is valid JSON), 2 invalid input,
3 verification/contract failure, 4 resource guard. Diagnostics go to
stderr; machine-readable output only to stdout.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import serialize
from .counting import count_lattice_points, count_real_translate, scan_translates
from .errors import (
    EhrhartForgeError,
    InvalidInputError,
    ResourceLimitError,
    VerificationError,
)
from .fluctuation import realize_qp, realize_sequence
from .geometry import dilate, translate, unit_vector
from .qde import QdeInstance, build_gadget, qde_oracle
from .rationals import parse_rational
from .transform import k_etp, k_etp_integer, to_dilation_family
from .verify import run_suite, verify_gadget_fixture


def _emit(doc) -> None:
    json.dump(doc, sys.stdout)
    sys.stdout.write("\n")


def _cmd_build_qde(args) -> int:
    inst = QdeInstance(args.alpha, args.beta, args.gamma)
    gadget = build_gadget(inst, args.mode)
    doc = serialize.gadget_to_json(gadget)
    summary = {
        "N": str(gadget.n),
        "L": str(gadget.big_l),
        "epsilon": serialize.rat_str(gadget.epsilon),
        "mode": gadget.mode,
        "vertexCount": len(gadget.hull.vertices),
    }
    if args.output:
        serialize.dump_file(doc, args.output)
        summary["file"] = args.output
        _emit(summary)
    else:
        _emit(doc)
    return 0


def _cmd_count(args) -> int:
    poly = serialize.polytope_from_json(serialize.load_file(args.polytope))
    if args.translate is not None and args.translate_vec is not None:
        raise InvalidInputError("--translate and --translate-vec are exclusive")
    if args.dilate is not None:
        if args.dilate < 0:
            raise InvalidInputError("--dilate takes a nonnegative integer")
        if args.dilate == 0:
            _emit({"count": "1"})
            return 0
        poly = dilate(poly, Fraction(args.dilate))
    if args.translate is not None:
        lam = parse_rational(args.translate)
        count = count_real_translate(poly, lam, unit_vector(poly.dim, 0))
    elif args.translate_vec is not None:
        vec = tuple(parse_rational(c) for c in args.translate_vec.split(","))
        count = count_lattice_points(translate(poly, vec))
    else:
        count = count_lattice_points(poly)
    _emit({"count": str(count)})
    return 0


def _cmd_scan(args) -> int:
    fam = serialize.family_from_json(serialize.load_file(args.family))
    table = scan_translates(fam, args.t_from, args.t_to)
    if args.min_only:
        _emit({"argmin": table.argmin, "min": table.min})
    else:
        _emit(serialize.count_table_to_json(table))
    return 0


def _cmd_oracle(args) -> int:
    inst = QdeInstance(args.alpha, args.beta, args.gamma)
    val, arg, feasible = qde_oracle(inst)
    _emit({"min": val, "argmin": list(arg), "feasible": feasible})
    return 0


def _cmd_convert(args) -> int:
    fam = serialize.family_from_json(serialize.load_file(args.family))
    conv = to_dilation_family(fam)
    doc = serialize.dilation_family_to_json(conv)
    if args.output:
        serialize.dump_file(doc, args.output)
        _emit({"M": doc["M"], "validN": doc["validN"], "file": args.output})
    else:
        _emit(doc)
    return 0


def _cmd_realize(args) -> int:
    if (args.sequence is None) == (args.qp is None):
        raise InvalidInputError("pass exactly one of --sequence or --qp")
    if args.sequence is not None:
        values = [int(v) for v in args.sequence.split(",")]
        result = realize_sequence(values)
    else:
        if args.period is None:
            raise InvalidInputError("--qp needs --period")
        qp = serialize.qp_from_json(serialize.load_file(args.qp))
        result = realize_qp(qp, args.period)
    doc = serialize.realization_to_json(result)
    if args.output:
        serialize.dump_file(doc, args.output)
        _emit(
            {
                "K": doc["K"],
                "M": doc["M"],
                "dim": doc["dim"],
                "vertexCount": doc["vertexCount"],
                "file": args.output,
            }
        )
    else:
        _emit(doc)
    return 0


def _cmd_ketp(args) -> int:
    poly = serialize.polytope_from_json(serialize.load_file(args.polytope))
    if args.integer:
        g = k_etp_integer(poly, args.k)
    else:
        g = k_etp(poly, args.k, bound=args.bound)
    _emit({"g": g})
    return 0


def _cmd_verify(args) -> int:
    if args.fixture:
        gadget = serialize.gadget_from_json(serialize.load_file(args.fixture))
        reports = [verify_gadget_fixture(gadget)]
    else:
        reports = run_suite(args.suite, args.beta_max)
    _emit({"passed": True, "reports": reports})
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ehrhart-forge",
        description="Exact lattice-point counting and polytope gadget construction",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build-qde", help="build a gadget for a quadratic congruence instance")
    p.add_argument("--alpha", type=int, required=True)
    p.add_argument("--beta", type=int, required=True)
    p.add_argument("--gamma", type=int, required=True)
    p.add_argument("--mode", choices=("rational", "integer", "real"), default="rational")
    p.add_argument("-o", "--output", help="write the gadget JSON here")
    p.set_defaults(func=_cmd_build_qde)

    p = sub.add_parser("count", help="count lattice points of a polytope file")
    p.add_argument("-p", "--polytope", required=True)
    p.add_argument("--translate", help="rational multiple of e1")
    p.add_argument("--translate-vec", help="comma-separated rational vector")
    p.add_argument("--dilate", type=int, help="dilation parameter t")
    p.set_defaults(func=_cmd_count)

    p = sub.add_parser("scan", help="count a translation family over a range")
    p.add_argument("-f", "--family", required=True)
    p.add_argument("--from", dest="t_from", type=int, required=True)
    p.add_argument("--to", dest="t_to", type=int, required=True)
    p.add_argument("--min-only", action="store_true")
    p.set_defaults(func=_cmd_scan)

    p = sub.add_parser("oracle", help="brute-force quadratic congruence minimum")
    p.add_argument("--alpha", type=int, required=True)
    p.add_argument("--beta", type=int, required=True)
    p.add_argument("--gamma", type=int, required=True)
    p.set_defaults(func=_cmd_oracle)

    p = sub.add_parser("convert", help="translation family to dilation family")
    p.add_argument("-f", "--family", required=True)
    p.add_argument("-o", "--output")
    p.set_defaults(func=_cmd_convert)

    p = sub.add_parser("realize", help="realize a sequence or quasi-polynomial")
    p.add_argument("--sequence", help="comma-separated nonnegative integers")
    p.add_argument("--qp", help="quasi-polynomial JSON file")
    p.add_argument("--period", type=int, help="window length for --qp")
    p.add_argument("-o", "--output")
    p.set_defaults(func=_cmd_realize)

    p = sub.add_parser("ketp", help="largest t with fewer than k points in tP")
    p.add_argument("-p", "--polytope", required=True)
    p.add_argument("-k", type=int, required=True)
    p.add_argument("--integer", action="store_true", help="use polynomial interpolation")
    p.add_argument("--bound", type=int, help="explicit search bound")
    p.set_defaults(func=_cmd_ketp)

    p = sub.add_parser("verify", help="run a bundled verification suite")
    p.add_argument(
        "--suite",
        default="all",
        choices=("trapezoids", "gadget", "real", "identity", "realize", "transform", "all"),
    )
    p.add_argument("--beta-max", type=int, dest="beta_max")
    p.add_argument("--fixture", help="verify a serialized gadget instead")
    p.set_defaults(func=_cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except VerificationError as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        if exc.detail is not None:
            print(json.dumps({"counterexample": exc.detail}), file=sys.stderr)
        return 3
    except ResourceLimitError as exc:
        print(f"resource guard: {exc}", file=sys.stderr)
        return 4
    except InvalidInputError as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return 2
    except EhrhartForgeError as exc:  # any remaining library error
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
