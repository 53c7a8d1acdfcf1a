"""Command line front end.

Exit codes: 0 result delivered, 2 parse or validation error, 3 unrealizable
arguments, 4 constraint rank did not stabilize.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from decimal import Decimal, localcontext
from fractions import Fraction
from pathlib import Path

from . import expand as expand_mod
from . import tensorfile
from .curvature import is_constant_hsc, model_tensor, validate_symmetries
from .errors import InvalidTensor, ParseError, RankNotStabilized, UnrealizableSignature
from .linalg import SignatureClass, Space, parse_signature
from .rigidity import Hypothesis, rigidity_verdict, theorem1_witness
from .tensor_space import float_rank_oracle, kaehler_basis, kaehler_basis_reordered, span_contains

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_UNREALIZABLE = 3
EXIT_UNSTABLE = 4


class CommandError(Exception):
    def __init__(self, code: int, report: dict):
        super().__init__(report.get("error", ""))
        self.code = code
        self.report = report


def decimal_str(value: Fraction, digits: int = 15) -> str:
    with localcontext() as ctx:
        ctx.prec = digits
        return str(Decimal(value.numerator) / Decimal(value.denominator))


def vector_str(v) -> list[str]:
    return [str(c) for c in v]


def _space(m: int, signature: str) -> Space:
    eps = parse_signature(signature)
    if len(eps) != m:
        raise ValueError(f"signature {signature!r} has length {len(eps)}, expected m = {m}")
    return Space(m, eps)


def _load(path):
    try:
        return tensorfile.load(path)
    except ParseError as exc:
        raise CommandError(EXIT_INVALID, {"error": "ParseError", "detail": str(exc), "path": str(path)})
    except OSError as exc:
        raise CommandError(EXIT_INVALID, {"error": "FileError", "detail": str(exc), "path": str(path)})


def cmd_check(path, output=None) -> dict:
    R = _load(path)
    sym = validate_symmetries(R)
    report = {"m": R.space.m, "signature": R.space.signature}
    for name, ok in sym.status().items():
        report[f"symmetry.{name}"] = "pass" if ok else f"fail at {sym.failures[name]}"
    if not sym.passed:
        report["error"] = "InvalidTensor"
        report["failed"] = sorted(sym.failures)
        raise CommandError(EXIT_INVALID, report)
    verdict = is_constant_hsc(R)
    if verdict.constant:
        report["verdict"] = "ConstantHSC"
        report["mu"] = str(verdict.mu)
        report["mu_decimal"] = decimal_str(verdict.mu)
    else:
        report["verdict"] = "NotConstant"
        idx, value = verdict.component_witness
        report["witness.component"] = list(idx)
        report["witness.residual"] = str(value)
        if verdict.plane_witness is not None:
            u, hu, v, hv = verdict.plane_witness
            report["witness.u"] = vector_str(u)
            report["witness.H_u"] = str(hu)
            report["witness.v"] = vector_str(v)
            report["witness.H_v"] = str(hv)
    if output is not None:
        tensorfile.dump(R, output)
        report["output"] = str(output)
    return report


def _hypothesis(kind: str, pair_class, triple_class) -> Hypothesis:
    pc = SignatureClass.parse(pair_class) if pair_class else None
    tc = SignatureClass.parse(triple_class) if triple_class else None
    return Hypothesis(kind, pc, tc)


def cmd_rigidity(m, signature, hypothesis, pair_class, triple_class=None, samples=None, seed=0) -> dict:
    try:
        space = _space(m, signature)
        hyp = _hypothesis(hypothesis, pair_class, triple_class)
        result = rigidity_verdict(space, hyp, samples, seed)
    except UnrealizableSignature as exc:
        raise CommandError(EXIT_UNREALIZABLE, {"error": "UnrealizableSignature", "detail": str(exc)})
    except RankNotStabilized as exc:
        raise CommandError(
            EXIT_UNSTABLE,
            {"error": "RankNotStabilized", "detail": str(exc), "rank": exc.rank, "half_sample_rank": exc.half_rank},
        )
    except ValueError as exc:
        raise CommandError(EXIT_UNREALIZABLE, {"error": "InvalidArguments", "detail": str(exc)})
    report = result.summary()
    if result.verdict != "SpanOfModel":
        for k, T in enumerate(result.survivors):
            report[f"survivor.{k}"] = [f"{' '.join(map(str, idx))} {v}" for idx, v in sorted(T.entries().items())]
    return report


def cmd_witness(path, bound, max_trials=500, seed=0) -> dict:
    R = _load(path)
    try:
        w = theorem1_witness(R, bound, max_trials, seed)
    except InvalidTensor as exc:
        raise CommandError(EXIT_INVALID, {"error": "InvalidTensor", "detail": str(exc)})
    except UnrealizableSignature as exc:
        raise CommandError(EXIT_UNREALIZABLE, {"error": "UnrealizableSignature", "detail": str(exc)})
    report = {
        "m": R.space.m,
        "signature": R.space.signature,
        "bound": str(bound),
        "max_trials": max_trials,
        "seed": seed,
    }
    if w is None:
        report["result"] = "NoWitnessFound"
        return report
    report.update(
        {
            "result": "WitnessFound",
            "trial": w.trial,
            "orientation": w.orientation,
            "x": vector_str(w.x),
            "y": vector_str(w.y),
            "alpha": str(w.alpha),
            "H": str(w.h_value),
            "H_decimal": decimal_str(w.h_value),
            "limit_alpha_plus1": str(w.limit_plus),
            "limit_alpha_minus1": str(w.limit_minus),
        }
    )
    return report


def cmd_expand(expression, eps_z=1, check=True) -> dict:
    try:
        ident = expand_mod.proof_identity(expression, eps_z)
    except ValueError as exc:
        raise CommandError(EXIT_UNREALIZABLE, {"error": "InvalidArguments", "detail": str(exc)})
    report = {"expression": expression}
    if expression == "thm2":
        report["eps_z"] = eps_z
    raw = {"prop1": expand_mod.prop1_expression, "thm1": expand_mod.thm1_expression,
           "thm2": expand_mod.thm2_expression}[expression]()
    report["degree"] = raw.degree
    for label, coeff in raw.table():
        report[f"expansion.{label}"] = coeff
    for label, coeff in ident.rhs.table():
        report[f"grouped.{label}"] = coeff
    if expression == "prop1":
        report["dropped_coefficient"] = str(expand_mod.prop1_dropped_coefficient())
    if check:
        basis = kaehler_basis(Space(3, (1, -1, 1)))
        report["grouped_matches_mod_bianchi"] = expand_mod.equivalent(ident.lhs, ident.rhs, basis.elements)
    return report


def cmd_emit_model(m, signature, mu, path) -> dict:
    try:
        space = _space(m, signature)
    except ValueError as exc:
        raise CommandError(EXIT_INVALID, {"error": "InvalidArguments", "detail": str(exc)})
    R = model_tensor(space, mu)
    tensorfile.dump(R, path)
    return {"m": m, "signature": space.signature, "mu": str(Fraction(mu)), "output": str(path),
            "entries": len(R.entries())}


def cmd_basis(m, signature, out_dir=None, cross_check=False) -> dict:
    try:
        space = _space(m, signature)
    except ValueError as exc:
        raise CommandError(EXIT_INVALID, {"error": "InvalidArguments", "detail": str(exc)})
    basis = kaehler_basis(space)
    report = {"m": m, "signature": space.signature, "kaehler_dimension": basis.dimension}
    if cross_check:
        other = kaehler_basis_reordered(space)
        report["reordered_dimension"] = other.dimension
        report["same_span"] = other.dimension == basis.dimension and span_contains(basis, other.elements)
        report["float_oracle_dimension"] = space.dim**4 - float_rank_oracle(space)
    if out_dir is not None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        files = []
        for k, B in enumerate(basis.elements):
            p = out / f"basis_{k:03d}.tensor"
            tensorfile.dump(B, p)
            files.append(str(p))
        report["files"] = files
    return report


def render_text(report: dict) -> str:
    lines = []
    for key, value in report.items():
        if isinstance(value, bool):
            value = "true" if value else "false"
        elif isinstance(value, (list, tuple)):
            value = "[" + ", ".join(str(v) for v in value) + "]"
        lines.append(f"{key}: {value}")
    return "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit the report as JSON")
    common.add_argument("--timing", action="store_true", help="include elapsed time in the report")

    parser = argparse.ArgumentParser(prog="indefkahler", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", parents=[common], help="validate a tensor file and test constant HSC")
    p.add_argument("path")
    p.add_argument("-o", "--output", help="re-emit the parsed tensor in canonical form")

    p = sub.add_parser("rigidity", parents=[common], help="run a pointwise rigidity verdict")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--signature", required=True)
    p.add_argument("--hypothesis", choices=["prop1", "prop3"], required=True)
    p.add_argument("--pair-class")
    p.add_argument("--triple-class")
    p.add_argument("--samples", type=int, default=None, help="default: 3 x Kaehler dimension")
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("witness", parents=[common], help="search for unbounded holomorphic curvature")
    p.add_argument("path")
    p.add_argument("--bound", type=tensorfile.parse_rational, required=True)
    p.add_argument("--max-trials", type=int, default=500)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("expand", parents=[common], help="print the expansion behind a grouped display")
    p.add_argument("--expression", choices=["prop1", "thm1", "thm2"], required=True)
    p.add_argument("--eps-z", type=int, choices=[1, -1], default=1)
    p.add_argument("--no-check", action="store_true", help="skip the modulo-Bianchi comparison")

    p = sub.add_parser("emit-model", parents=[common], help="write the constant HSC tensor")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--signature", required=True)
    p.add_argument("--mu", type=tensorfile.parse_rational, required=True,
                   help="exact rational; write negatives as --mu=-2/3")
    p.add_argument("-o", "--output", required=True)

    p = sub.add_parser("basis", parents=[common], help="compute the Kaehler tensor basis")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--signature", required=True)
    p.add_argument("--out-dir")
    p.add_argument("--cross-check", action="store_true", help="compare elimination orders and float rank")
    return parser


def run(args) -> tuple[int, dict]:
    if args.command == "check":
        return EXIT_OK, cmd_check(args.path, args.output)
    if args.command == "rigidity":
        return EXIT_OK, cmd_rigidity(args.m, args.signature, args.hypothesis, args.pair_class,
                                     args.triple_class, args.samples, args.seed)
    if args.command == "witness":
        return EXIT_OK, cmd_witness(args.path, args.bound, args.max_trials, args.seed)
    if args.command == "expand":
        return EXIT_OK, cmd_expand(args.expression, args.eps_z, not args.no_check)
    if args.command == "emit-model":
        return EXIT_OK, cmd_emit_model(args.m, args.signature, args.mu, args.output)
    if args.command == "basis":
        return EXIT_OK, cmd_basis(args.m, args.signature, args.out_dir, args.cross_check)
    raise AssertionError(args.command)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    start = time.perf_counter()
    try:
        code, body = run(args)
    except CommandError as exc:
        code, body = exc.code, exc.report
    report = {"command": args.command}
    for key, value in vars(args).items():
        if key not in ("command", "json", "timing"):
            report[f"input.{key}"] = _plain(value)
    report.update(body)
    if args.timing:
        report["elapsed_seconds"] = round(time.perf_counter() - start, 3)
    text = json.dumps(report, indent=2) if args.json else render_text(report)
    stream = sys.stdout if code == EXIT_OK else sys.stderr
    print(text, file=stream)
    return code


def _plain(value):
    if isinstance(value, Fraction):
        return str(value)
    return value


if __name__ == "__main__":
    sys.exit(main())
