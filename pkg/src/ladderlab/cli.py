"""Command-line front end.

Exit status: 0 when every check passes, 1 when a verification fails,
2 for invalid input.  The default field is GF(101); set LADDERLAB_PRIME or
pass --prime to change it.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import algcore, laddercalc, perfcx, recfun
from . import pimod as pm
from .exactlin import GF, DEFAULT_PRIME
from .reports import SCHEMA, Report
from .rng import as_rng

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2

VERIFY_KINDS = ("recollement", "ladder", "nakayama", "ttf", "derived-ladder", "hom-embedding")


class InputError(Exception):
    pass


# ---------------------------------------------------------------------------
# inputs


def _field(args):
    raw = args.prime if args.prime is not None else os.environ.get("LADDERLAB_PRIME", DEFAULT_PRIME)
    try:
        return GF(int(raw))
    except ValueError as exc:
        raise InputError(f"bad prime {raw!r}: {exc}") from None


def _load_json(path: str):
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from None


def _lambda(args):
    src = args.lam
    if src in algcore.CATALOG:
        return algcore.builtin_algebra(src, _field(args))
    if src == "morita":
        return algcore.morita_ring(algcore.builtin_algebra("k", _field(args)))
    try:
        a = algcore.algebra_from_json(_load_json(src))
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"bad algebra file {src}: {exc}") from None
    problems = algcore.algebra_check(a)
    if problems:
        raise InputError(f"{src} is not an associative unital algebra: {problems[0]}")
    return a


def _n(args, low: int = 1) -> int:
    if args.n < low:
        raise InputError(f"--n must be at least {low}")
    return args.n


def _positive(value: int, flag: str) -> int:
    if value < 1:
        raise InputError(f"{flag} must be positive")
    return value


def _lambda_module(spec: str, lam):
    reg = algcore.regular_module(lam)
    if spec == "regular":
        return reg
    if spec == "top":
        return algcore.quotient_module(reg, algcore.radical_of(reg))[0]
    if spec == "dual":
        return algcore.dual_regular(lam)
    raise InputError(f"unknown Lambda-module {spec!r}; use regular, top or dual")


def _pi_module(spec: str, lam, n: int):
    """``T1`` / ``T2`` (optionally ``T1:top`` etc.), ``P<k>`` or a module JSON file."""
    head, _, arg = spec.partition(":")
    if head in ("T1", "T2"):
        x = _lambda_module(arg or "regular", lam)
        return recfun.apply(head, x, n)
    if head.startswith("P") and head[1:].isdigit():
        proj = pm.indecomposable_projectives(lam, n)
        k = int(head[1:])
        if not 1 <= k <= len(proj):
            raise InputError(f"{head}: there are {len(proj)} indecomposable projectives")
        return proj[k - 1]
    try:
        return pm.module_from_json(_load_json(spec), lam)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"bad module file {spec}: {exc}") from None


# ---------------------------------------------------------------------------
# output


def _emit(payload: dict, out):
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _finish(report: Report, args) -> int:
    _emit(report.to_json(), args.out)
    print(report.summary(), file=sys.stderr)
    for c in report.failures[:5]:
        print(f"  FAILED {c.name}: {c.detail}", file=sys.stderr)
    return EXIT_OK if report.passed else EXIT_FAIL


# ---------------------------------------------------------------------------
# commands


def cmd_build(args) -> int:
    field = _field(args)
    if args.type == "preprojective":
        obj = algcore.algebra_to_json(algcore.preprojective_algebra(_n(args), field))
    elif args.type == "tensor":
        lam = _lambda(args)
        obj = algcore.algebra_to_json(pm.pi_algebra(lam, _n(args)).flat)
    elif args.type == "morita":
        obj = algcore.algebra_to_json(algcore.morita_ring(_lambda(args)))
    elif args.type == "module":
        obj = pm.module_to_json(_pi_module(args.module, _lambda(args), _n(args, 2)))
    else:  # complex
        lam = _lambda(args)
        c = perfcx.random_perfect_complex(lam, _n(args, 2), as_rng(args.seed), _positive(args.max_length, "--max-length"))
        obj = perfcx.complex_to_json(c)
    _emit(obj, args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    lam = _lambda(args)
    samples = _positive(args.samples, "--samples")
    seed = args.seed
    kind = args.kind
    if kind == "recollement":
        n = _n(args, 2)
        whiches = ("first", "second") if args.which == "both" else (args.which,)
        report = Report("recollements", info={"n": n, "lambda": lam.name, "samples": samples, "seed": seed})
        for w in whiches:
            report.extend(recfun.verify_recollement(w, lam, n, samples, seed), prefix=f"{w}: ")
    elif kind == "ladder":
        report = recfun.verify_period_four(lam, _n(args, 2), samples, seed)
    elif kind == "nakayama":
        report = recfun.verify_nakayama_identity(lam, samples, seed)
    elif kind == "ttf":
        report = perfcx.ttf_check(lam, _n(args, 2), samples, seed, _positive(args.max_length, "--max-length"))
    elif kind == "derived-ladder":
        report = perfcx.ladder_verify_derived(lam, _n(args, 2), samples, seed, _positive(args.max_length, "--max-length"))
    else:
        report = recfun.verify_hom_embedding(lam, _n(args, 2), samples, seed, _positive(args.max_degree, "--max-degree"))
    return _finish(report, args)


def _facts(spec: str) -> laddercalc.FactBase:
    if spec.startswith("builtin:"):
        return laddercalc.builtin_facts(spec[len("builtin:"):])
    data = _load_json(spec)
    if not isinstance(data, dict):
        raise InputError(f"{spec}: expected a JSON object")
    return laddercalc.FactBase.from_json(data)


def cmd_derive(args) -> int:
    if args.budget < 0:
        raise InputError("--budget must be non-negative")
    fb = _facts(args.facts)
    closure, deriv = laddercalc.derive_closure(fb, args.budget)
    payload = {"schema": SCHEMA, "title": "ladder derivation", "facts": args.facts, "budget": args.budget}
    try:
        report = laddercalc.ladder_height(closure, deriv)
        payload["ladder"] = report.to_json()
        print(f"height down: {report.height_down}", file=sys.stderr)
        print(f"height up:   {report.height_up}", file=sys.stderr)
    except laddercalc.FactError as exc:
        payload["ladder"] = None
        print(f"no ladder: {exc}", file=sys.stderr)
    payload["closure"] = closure.to_json()
    payload["derivation"] = deriv.to_json()
    if args.trace:
        print(laddercalc.format_trace(deriv.steps), file=sys.stderr)
    _emit(payload, args.out)
    return EXIT_OK


def cmd_hom(args) -> int:
    lam = _lambda(args)
    n = _n(args, 2)
    x, y = _pi_module(args.x, lam, n), _pi_module(args.y, lam, n)
    payload = {"schema": SCHEMA, "title": "hom", "n": n, "lambda": lam.name, "x": args.x, "y": args.y,
               "hom_dim": pm.hom_dim(x, y)}
    if args.stable:
        payload["stable_hom_dim"] = pm.stable_hom(x, y)
    _emit(payload, args.out)
    return EXIT_OK


def cmd_ext(args) -> int:
    lam = _lambda(args)
    n = _n(args, 2)
    d = args.max_degree
    if d < 0:
        raise InputError("--max-degree must be non-negative")
    payload = {"schema": SCHEMA, "title": "ext", "n": n, "lambda": lam.name, "x": args.x, "y": args.y}
    if args.through:
        x, y = _lambda_module(args.x or "top", lam), _lambda_module(args.y or "top", lam)
        left = [algcore.ext_dim(x, y, k) for k in range(d + 1)]
        right = pm.ext_dims(recfun.apply(args.through, x, n), recfun.apply(args.through, y, n), d)
        payload.update({"through": args.through, "lambda_ext": left, "pi_ext": right, "equal": left == right})
        _emit(payload, args.out)
        return EXIT_OK if left == right else EXIT_FAIL
    if not (args.x and args.y):
        raise InputError("--x and --y are required without --through")
    x, y = _pi_module(args.x, lam, n), _pi_module(args.y, lam, n)
    payload["ext"] = pm.ext_dims(x, y, d)
    _emit(payload, args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--prime", type=int, default=None, help="field prime (default: $LADDERLAB_PRIME or 101)")
    common.add_argument("--lambda", dest="lam", default="k", help="builtin algebra (k, dual, pathA2, morita) or JSON path")
    common.add_argument("--n", type=int, default=2)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", default=None, help="write JSON here instead of stdout")

    parser = argparse.ArgumentParser(prog="ladderlab", description="Computations with Lambda (x) Pi(A_n).")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", parents=[common], help="write an algebra, module or complex as JSON")
    p.add_argument("--type", required=True, choices=("preprojective", "tensor", "morita", "module", "complex"))
    p.add_argument("--base", dest="lam", default="k", help="alias of --lambda")
    p.add_argument("--module", default="T1", help="T1, T2, T1:top, P<k> (for --type module)")
    p.add_argument("--max-length", type=int, default=3)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("verify", parents=[common], help="run a verification suite")
    p.add_argument("kind", choices=VERIFY_KINDS)
    p.add_argument("--samples", type=int, default=20)
    p.add_argument("--which", choices=("first", "second", "both"), default="both")
    p.add_argument("--max-length", type=int, default=4)
    p.add_argument("--max-degree", type=int, default=4)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("derive", help="saturate a fact base and report ladder heights")
    p.add_argument("--facts", default="builtin:preprojective", help="builtin:<name> or a facts JSON path")
    p.add_argument("--budget", type=int, default=laddercalc.DEFAULT_BUDGET)
    p.add_argument("--trace", action="store_true", help="print the derivation to stderr")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_derive)

    p = sub.add_parser("hom", parents=[common], help="dimension of Hom between two Pi_n-modules")
    p.add_argument("--x", required=True)
    p.add_argument("--y", required=True)
    p.add_argument("--stable", action="store_true", help="also report the stable Hom dimension")
    p.set_defaults(func=cmd_hom)

    p = sub.add_parser("ext", parents=[common], help="Ext dimensions, optionally compared through T1 or T2")
    p.add_argument("--x", default=None)
    p.add_argument("--y", default=None)
    p.add_argument("--max-degree", type=int, default=4)
    p.add_argument("--through", choices=("T1", "T2"), default=None)
    p.set_defaults(func=cmd_ext)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InputError, laddercalc.FactError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
