"""Command-line interface.

Exit codes: 0 success, 1 mathematical failure (axiom, relation, positivity or
round trip), 2 input/schema error.  Reports are written to stdout and are
byte-identical for identical inputs, seed and tolerance.
"""

from __future__ import annotations

import argparse
import math
import sys

from . import io
from . import tensor as tc
from .amplitude import check_diagram, evaluate_amplitude, random_diagram
from .bordism import euler_characteristic, genus_word, typecheck
from .errors import InconsistentOracle, OCTQFTError, SingularPairing, WordTypeError
from .evaluator import evaluate, evaluator, extract_kfrob, relation_suite, roundtrip_check
from .kfrob import (
    PERTURB_TARGETS,
    from_brane_ranks,
    max_tensor_residual,
    perturb,
    scale_theta,
    validate,
)
from .reflection import canonical_reflection, positivity_check, validate_reflection

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class UsageError(OCTQFTError):
    pass


def parse_ranks(text: str) -> dict:
    """``"i=2,j=3"`` -> ``{"i": 2, "j": 3}``."""
    out = {}
    for item in filter(None, (s.strip() for s in text.split(","))):
        label, sep, value = item.partition("=")
        if not sep or not label:
            raise UsageError(f"bad ranks entry {item!r}; expected label=rank")
        try:
            out[label] = int(value)
        except ValueError:
            raise UsageError(f"rank of {label!r} is not an integer: {value!r}") from None
    if not out:
        raise UsageError("ranks map is empty")
    return out


def _fmt(x: float) -> str:
    return "inf" if math.isinf(x) else f"{x:.3e}"


def _rows(rows, fmt):
    """``rows`` are ``{"name", "residual", "pass"}`` dicts."""
    if fmt == "json":
        return io.dumps(rows)
    return "".join(
        f"{'PASS' if r['pass'] else 'FAIL'}  {r['name']:<28} {_fmt(r['residual'])}\n" for r in rows
    )


def _residual_json(x: float):
    return None if math.isinf(x) or math.isnan(x) else x


def cmd_validate(args, out):
    kf = io.kfrob_from_json(io.load_json(args.kfrob))
    report = validate(kf, args.tol)
    rows = [{"name": r.name, "residual": r.residual, "pass": r.passed} for r in report.results]
    if args.format == "json":
        out.write(io.dumps({
            "pass": report.passed,
            "tol": args.tol,
            "axioms": [dict(r, residual=_residual_json(r["residual"])) for r in rows],
            "notes": report.notes,
        }))
    else:
        out.write(_rows(rows, "text"))
        for note in report.notes:
            out.write(f"note: {note}\n")
        out.write(f"{'PASS' if report.passed else 'FAIL'}\n")
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_evaluate(args, out):
    kf = io.kfrob_from_json(io.load_json(args.kfrob))
    w = io.word_from_json(io.load_json(args.word))
    typecheck(w)
    ev = evaluate(kf, w)
    doc = {
        "matrix": io.matrix_to_json(ev.matrix),
        "source_dim": ev.source_dim,
        "target_dim": ev.target_dim,
        "euler_characteristic": euler_characteristic(w),
    }
    if args.format == "json":
        out.write(io.dumps(doc))
    else:
        out.write(f"{ev.target_dim}x{ev.source_dim} matrix, euler characteristic {doc['euler_characteristic']}\n")
        for row in ev.matrix:
            out.write("  ".join(f"{z.real:+.6g}{z.imag:+.6g}j" for z in row) + "\n")
    return EXIT_OK


def cmd_relations(args, out):
    kf = io.kfrob_from_json(io.load_json(args.kfrob))
    results = relation_suite(kf, args.tol)
    rows = [{"name": r.name, "residual": r.residual, "pass": r.passed} for r in results]
    if args.format == "json":
        out.write(io.dumps([dict(r, residual=_residual_json(r["residual"])) for r in rows]))
    else:
        out.write(_rows(rows, "text"))
    return EXIT_OK if all(r.passed for r in results) else EXIT_FAIL


def cmd_classify(args, out):
    kf = io.kfrob_from_json(io.load_json(args.kfrob))
    report = validate(kf, args.tol)
    try:
        back = extract_kfrob(evaluator(kf), kf.branes, tol=args.tol)
        residual, reason = max_tensor_residual(kf, back), None
    except (InconsistentOracle, SingularPairing) as exc:
        # an invalid algebra need not define a consistent field theory
        residual, reason = math.inf, str(exc)
    ok = report.passed and residual <= args.tol
    doc = {
        "branes": list(kf.branes),
        "closed_dim": kf.closed.dim,
        "rank_one_closed": kf.closed.dim == 1,
        "open_dims": {f"{i},{j}": d for (i, j), d in sorted(kf.open.dims.items())},
        "valid": report.passed,
        "failed_axioms": report.failed(),
        "extraction_residual": _residual_json(residual),
        "extraction_error": reason,
        "pass": ok,
    }
    if args.format == "json":
        out.write(io.dumps(doc))
    else:
        out.write(f"branes: {' '.join(kf.branes)}\nclosed dim: {kf.closed.dim}"
                  f"{'' if kf.closed.dim == 1 else ' (not rank one)'}\n")
        for key, d in doc["open_dims"].items():
            out.write(f"dim R[{key}] = {d}\n")
        if reason:
            out.write(f"extraction failed: {reason}\n")
        out.write(f"extraction residual: {_fmt(residual)}\n{'PASS' if ok else 'FAIL'}\n")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_roundtrip(args, out):
    rep = roundtrip_check(parse_ranks(args.ranks), args.tol)
    if args.format == "json":
        out.write(io.dumps({"ranks": rep.ranks, "residual": _residual_json(rep.residual), "tol": rep.tol, "pass": rep.passed}))
    else:
        out.write(f"{'PASS' if rep.passed else 'FAIL'}  roundtrip {_fmt(rep.residual)}\n")
    return EXIT_OK if rep.passed else EXIT_FAIL


def cmd_amplitude(args, out):
    d = io.diagram_from_json(io.load_json(args.diagram))
    a = evaluate_amplitude(d)
    if args.format == "json":
        out.write(io.dumps({"amplitude": io.complex_to_json(a)}))
    else:
        out.write(f"{a.real!r} {a.imag!r}\n")
    return EXIT_OK


def cmd_positivity(args, out):
    kf = io.kfrob_from_json(io.load_json(args.kfrob))
    rs = io.reflection_from_json(io.load_json(args.reflection))
    conds = validate_reflection(kf, rs, args.tol)
    pos = positivity_check(kf, rs)
    ok = all(c.passed for c in conds) and pos.passed
    rows = [{"name": c.name, "residual": c.residual, "pass": c.passed} for c in conds]
    if args.format == "json":
        out.write(io.dumps({
            "conditions": rows,
            "positive": pos.passed,
            "min_eigenvalue": pos.min_eigenvalue,
            "pass": ok,
        }))
    else:
        out.write(_rows(rows, "text"))
        out.write(f"{'PASS' if pos.passed else 'FAIL'}  positivity{' ' * 18} min eigenvalue {pos.min_eigenvalue:.6g}\n")
        out.write(f"{'PASS' if ok else 'FAIL'}\n")
    return EXIT_OK if ok else EXIT_FAIL


def generate_doc(kind: str, ranks=None, genus=None, seed=0, theta_scale=None,
                 perturb_target=None, magnitude=0.0) -> dict:
    """Build a fixture document; the same arguments always give the same document."""
    if kind == "matrix-kfrob":
        if ranks is None:
            raise UsageError("matrix-kfrob needs --ranks")
        kf = from_brane_ranks(ranks)
        if theta_scale is not None:
            kf = scale_theta(kf, theta_scale)
        if perturb_target is not None:
            kf = perturb(kf, perturb_target, magnitude, seed)
        return io.kfrob_to_json(kf)
    if kind == "canonical-reflection":
        if ranks is None:
            raise UsageError("canonical-reflection needs --ranks")
        return io.reflection_to_json(canonical_reflection(ranks))
    if kind == "genus-word":
        if genus is None or genus < 0:
            raise UsageError("genus-word needs a non-negative --genus")
        return io.word_to_json(genus_word(genus))
    if kind == "random-diagram":
        d = random_diagram(seed)
        check_diagram(d)
        return io.diagram_to_json(d)
    raise UsageError(f"unknown fixture kind {kind!r}")


def cmd_generate(args, out):
    ranks = parse_ranks(args.ranks) if args.ranks else None
    doc = generate_doc(
        args.kind, ranks=ranks, genus=args.genus, seed=args.seed,
        theta_scale=args.theta_scale, perturb_target=args.perturb, magnitude=args.magnitude,
    )
    if args.output:
        io.save(doc, args.output)
    else:
        out.write(io.dumps(doc))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="octqft", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=tc.DEFAULT_TOL,
                        help="absolute tolerance (default: $OCTQFT_TOL or 1e-9)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--format", choices=("json", "text"), default="json")
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("validate", parents=[common], help="check the algebra axioms")
    p.add_argument("kfrob")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("evaluate", parents=[common], help="evaluate a bordism word")
    p.add_argument("kfrob")
    p.add_argument("word")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("relations", parents=[common], help="run the sewing-relation suite")
    p.add_argument("kfrob")
    p.set_defaults(func=cmd_relations)

    p = sub.add_parser("classify", parents=[common], help="extract the algebra back from its field theory")
    p.add_argument("kfrob")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("roundtrip", parents=[common], help="brane ranks -> algebra -> field theory -> algebra")
    p.add_argument("--ranks", required=True, help="e.g. i=2,j=3")
    p.set_defaults(func=cmd_roundtrip, tol=1e-12)

    p = sub.add_parser("amplitude", parents=[common], help="surface amplitude of a diagram")
    p.add_argument("diagram")
    p.set_defaults(func=cmd_amplitude)

    p = sub.add_parser("positivity", parents=[common], help="check a reflection structure and positivity")
    p.add_argument("kfrob")
    p.add_argument("reflection")
    p.set_defaults(func=cmd_positivity)

    p = sub.add_parser("generate", parents=[common], help="write a fixture file")
    p.add_argument("kind", choices=("matrix-kfrob", "canonical-reflection", "genus-word", "random-diagram"))
    p.add_argument("--ranks")
    p.add_argument("--genus", type=int)
    p.add_argument("--theta-scale", type=float, help="scale every open trace (iota* re-derived)")
    p.add_argument("--perturb", choices=PERTURB_TARGETS)
    p.add_argument("--magnitude", type=float, default=0.0)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_generate)
    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except WordTypeError as exc:
        sys.stderr.write(f"TypeError: {exc}\n")
        return EXIT_INPUT
    except OCTQFTError as exc:
        sys.stderr.write(f"{type(exc).__name__}: {exc}\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
