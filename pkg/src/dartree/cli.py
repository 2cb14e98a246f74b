"""Command-line front end.

Verbs: validate, report, classify, verify, measure.  Output is JSON on stdout
with rationals written as "p/q".  Exit codes: 0 success or isomorphic,
1 negative decision or failed verification, 2 undecided (a*d = 1), 3 bad input.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from . import classify as cls
from .cokernel import block_basis_tensor, dim_E, joint_kernel_bruteforce, kernel_blocks
from .errors import DartreeError
from .exact import fmt_rational, span_equal
from .model import (
    hausdorff_check,
    integral_representation_check,
    kernel_coeff_closed,
    kernel_coeff_oracle,
    moment_sequence,
    regime_sequence,
    verify_density_moments,
    density,
)
from .multishift import (
    WeightSequence,
    check_balanced,
    check_commuting,
    family_weights,
    moment_norm_sq,
    moment_norm_sq_oracle,
)
from .product import build_product, compositions, multi_indices
from .trees import RootedTreePrefix, from_json

EXIT_OK, EXIT_NEGATIVE, EXIT_UNDECIDED, EXIT_INPUT = 0, 1, 2, 3


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(message)


def jsonable(x):
    if isinstance(x, Fraction):
        return fmt_rational(x)
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    return x


def emit(obj) -> None:
    sys.stdout.write(json.dumps(jsonable(obj), indent=2) + "\n")


def load_tree(path: str) -> RootedTreePrefix:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    return from_json(text)


def load_factors(spec: str) -> list[RootedTreePrefix]:
    paths = [s for s in spec.split(",") if s]
    if not paths:
        raise InputError("no tree files given")
    return [load_tree(p) for p in paths]


def default_depth(*factor_sets) -> int:
    return max(sum(t.branching_index for t in fs) for fs in factor_sets) + 2


def product_at(factors, depth: int):
    # implied rays make extension exact
    return build_product([t.extend(depth) for t in factors], depth)


def weight_sequence(args, d: int) -> WeightSequence:
    if args.c is not None:
        return WeightSequence.parse(args.c, d)
    if args.a is None:
        raise InputError("--a is required when --c is not given")
    return WeightSequence.c_a(Fraction(args.a), d)


def _nonneg(name: str, x):
    if x is not None and x < 0:
        raise InputError(f"{name} must be nonnegative")
    return x


# ---------------------------------------------------------------------- verbs

def cmd_validate(args) -> int:
    t = load_tree(args.tree)
    emit({
        "name": t.name,
        "vertices": len(t),
        "truncation_depth": t.D,
        "branching_index": t.branching_index,
        "generations": t.generations(t.D),
        "canonical_form": t.canonical_form(),
    })
    return EXIT_OK


def cmd_report(args) -> int:
    factors = load_factors(args.trees)
    d = len(factors)
    depth = _nonneg("--depth", args.depth) if args.depth is not None else default_depth(factors)
    max_alpha = _nonneg("--max-alpha", args.max_alpha)
    c = weight_sequence(args, d)
    p = product_at(factors, depth)
    m = family_weights(p, c)
    blocks = kernel_blocks(p)
    checked = agree = 0
    coeffs = []
    reps = [((), p.root)] + [(b.F, b.u) for b in blocks]
    for F, u in reps:
        for alpha in multi_indices(d, max_alpha):
            value = kernel_coeff_closed(p, c, u, F, alpha)
            coeffs.append({"F": list(F), "u": list(u), "alpha": list(alpha), "value": value})
            if p.total_depth(u) + sum(alpha) <= depth:
                checked += 1
                agree += moment_norm_sq(m, alpha, u) == moment_norm_sq_oracle(m, alpha, u)
    emit({
        "factors": [t.name for t in factors],
        "d": d,
        "depth": depth,
        "c": c.spec(),
        "dim_E": dim_E(p),
        "dim_E_bruteforce": len(joint_kernel_bruteforce(m)),
        "blocks": [{"F": list(b.F), "u": list(b.u), "depth": list(b.depth),
                    "M": b.M, "N": b.N, "dim": b.dim_closed} for b in blocks],
        "moment_check": {"checked": checked, "agree": agree, "ok": checked == agree},
        "kernel_coefficients": coeffs,
    })
    return EXIT_OK


def _condition_json(r: cls.ConditionResult, kind: str) -> dict:
    out = {"holds": r.holds, "complete": r.complete,
           "witness": list(r.witness) if r.witness is not None else None}
    if kind == "ii":
        out["sums"] = [{"F": list(F), "alpha": list(a), "lhs": x, "rhs": y}
                       for (F, a), (x, y) in r.table.items()]
    else:
        out["tables"] = [{"l": l, "lhs": x, "rhs": y} for l, (x, y) in r.table.items()]
    return out


def cmd_classify(args) -> int:
    T1, T2 = load_factors(args.first), load_factors(args.second)
    rep = cls.classify(T1, T2, args.a)
    out = {
        "d": rep.d,
        "a": rep.a,
        "decision": rep.decision,
        "graph_isomorphic": rep.graph_isomorphic,
        "consistent": rep.consistent,
        "condition_iv": _condition_json(rep.condition_iv, "iv"),
        "condition_iii": _condition_json(rep.condition_iii, "iii"),
        "condition_ii": _condition_json(rep.condition_ii, "ii"),
    }
    if args.intertwiner and rep.decision == cls.ISO:
        depth = args.depth if args.depth is not None else default_depth(T1, T2)
        T1e = [t.extend(depth) for t in T1]
        T2e = [t.extend(depth) for t in T2]
        cert = cls.build_intertwiner(T1e, T2e, args.a, depth, args.tol)
        out["intertwiner"] = {
            "depth": cert.Dtot,
            "groups": [{"F": list(F), "alpha": list(a), "dim": k} for F, a, k in cert.groups],
            "unitarity_residual": float(f"{cert.unitarity_residual:.3e}"),
            "intertwining_residual": float(f"{cert.intertwining_residual:.3e}"),
            "spanned_dim": list(cert.spanned_dim),
            "full_dim": list(cert.full_dim),
            "tol": args.tol,
            "certified": cert.certified,
        }
    emit(out)
    return {cls.ISO: EXIT_OK, cls.NOT_ISO: EXIT_NEGATIVE, cls.UNDECIDED: EXIT_UNDECIDED}[rep.decision]


def run_verification(factors, c: WeightSequence, depth: int, max_alpha: int,
                     a: int | None = None) -> dict[str, list[int]]:
    """Every closed form against its oracle; returns {check: [passed, failed]}."""
    d = len(factors)
    p = product_at(factors, depth)
    m = family_weights(p, c)
    tally: dict[str, list[int]] = {}

    def record(name, ok):
        tally.setdefault(name, [0, 0])[0 if ok else 1] += 1

    record("commuting", check_commuting(m)[0])
    record("balanced", check_balanced(m)[0])
    blocks = kernel_blocks(p)
    for b in blocks:
        record("block_dim", len(b.basis) == b.dim_closed)
        record("block_tensor_span", span_equal(b.basis, block_basis_tensor(p, b.u, b.F)))
    record("dim_E", dim_E(p) == len(joint_kernel_bruteforce(m)))
    for v in p.vertices:
        room = min(max_alpha, depth - p.total_depth(v))
        for alpha in multi_indices(d, room):
            record("moment", moment_norm_sq(m, alpha, v) == moment_norm_sq_oracle(m, alpha, v))
        dv = p.total_depth(v)
        for n in range(room + 1):
            lhs = sum(Fraction(_multinomial(alpha)) * moment_norm_sq(m, alpha, v)
                      for alpha in compositions(n, d))
            rhs = Fraction(1)
            for k in range(n):
                rhs *= m.family(dv + k)
            record("sp_gen", lhs == rhs)
    for b in blocks:
        for alpha in multi_indices(d, min(max_alpha, depth - p.total_depth(b.u))):
            record("kernel_coeff",
                   kernel_coeff_oracle(m, b, alpha) == kernel_coeff_closed(p, c, b.u, b.F, alpha))
    if a is not None:
        for l in range(3):
            record("density_moments", all(x.ok for x in verify_density_moments(a, d, l, 20)))
        record("hausdorff", hausdorff_check(moment_sequence(regime_sequence(a, d), 40), 20).passed)
        pr = family_weights(p, regime_sequence(a, d))
        for b in blocks:
            for alpha in multi_indices(d, min(max_alpha, depth - p.total_depth(b.u))):
                record("integral_rep",
                       integral_representation_check(p, a, b.u, b.F, alpha, m=pr, block=b).ok)
    return tally


def _multinomial(alpha) -> int:
    from math import factorial, prod
    return factorial(sum(alpha)) // prod(factorial(x) for x in alpha)


def cmd_verify(args) -> int:
    factors = load_factors(args.trees)
    d = len(factors)
    depth = _nonneg("--depth", args.depth) if args.depth is not None else default_depth(factors)
    c = weight_sequence(args, d)
    a = None
    if args.a is not None and Fraction(args.a).denominator == 1:
        a = int(Fraction(args.a))
    tally = run_verification(factors, c, depth, _nonneg("--max-alpha", args.max_alpha), a)
    passed = sum(x for x, _ in tally.values())
    failed = sum(y for _, y in tally.values())
    emit({
        "factors": [t.name for t in factors],
        "depth": depth,
        "c": c.spec(),
        "checks": {k: {"passed": x, "failed": y} for k, (x, y) in sorted(tally.items())},
        "total_passed": passed,
        "total_failed": failed,
    })
    return EXIT_OK if failed == 0 else EXIT_NEGATIVE


def cmd_measure(args) -> int:
    for name in ("a", "d"):
        if getattr(args, name) < 1:
            raise InputError(f"--{name} must be a positive integer")
    _nonneg("--l", args.l)
    _nonneg("--max-n", args.max_n)
    dens = density(args.a, args.d, args.l)
    checks = verify_density_moments(args.a, args.d, args.l, args.max_n)
    emit({
        "kind": dens.kind,
        "a": args.a,
        "d": args.d,
        "l": args.l,
        "coefficients": list(dens.coefficients),
        "moment_check": [{"n": x.n, "lhs": x.lhs, "rhs": x.rhs, "ok": x.ok} for x in checks],
        "all_ok": all(x.ok for x in checks),
    })
    return EXIT_OK if all(x.ok for x in checks) else EXIT_NEGATIVE


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="dartree", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="verb", parser_class=_Parser)
    sub.required = True

    v = sub.add_parser("validate", help="validate a tree spec and summarize it")
    v.add_argument("tree")
    v.set_defaults(func=cmd_validate)

    for name, func, helptext in (("report", cmd_report, "cokernel blocks and kernel coefficients"),
                                 ("verify", cmd_verify, "run every closed form against its oracle")):
        r = sub.add_parser(name, help=helptext)
        r.add_argument("trees", help="comma-separated tree spec files, one per factor")
        r.add_argument("--c", default=None, help="weight sequence, e.g. c_a:3 or table:2,1,1;eventual=1")
        r.add_argument("--a", default=None, help="parameter a (used for c_a when --c is absent)")
        r.add_argument("--depth", type=int, default=None)
        r.add_argument("--max-alpha", type=int, default=4)
        r.set_defaults(func=func)

    c = sub.add_parser("classify", help="decide module isomorphism of two products")
    c.add_argument("first")
    c.add_argument("second")
    c.add_argument("--a", type=int, required=True)
    c.add_argument("--intertwiner", action="store_true")
    c.add_argument("--depth", type=int, default=None)
    c.add_argument("--tol", type=float, default=1e-9)
    c.set_defaults(func=cmd_classify)

    m = sub.add_parser("measure", help="density of the radial representing measure")
    m.add_argument("--a", type=int, required=True)
    m.add_argument("--d", type=int, required=True)
    m.add_argument("--l", type=int, default=0)
    m.add_argument("--max-n", type=int, default=20)
    m.set_defaults(func=cmd_measure)
    return ap


def run(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except (InputError, DartreeError, ValueError) as exc:
        name = "InputError" if isinstance(exc, InputError) else type(exc).__name__
        emit({"error": name, "message": str(exc)})
        return EXIT_INPUT


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
