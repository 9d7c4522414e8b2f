"""Command-line front end.

Every subcommand prints one JSON report on stdout. Exit codes: 0 success,
1 validation or usage error, 2 resource guard, 3 internal invariant
violation.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import __version__, _kernels, corpus, serialize
from .errors import FrobconeError, InvariantViolation, ResourceGuardExceeded, ValidationError
from .grothendieck import (
    build_cm_cone,
    check_mu_membership,
    chow_determinantal,
    close_under_xi,
    integral_realization,
    mu_class,
    xi,
    xi_lambda_comparison,
)
from .hk import MonomialIdeal, fit_signed_powers, hk_cross_check, hk_samples
from .polyhedral import DEFAULT_MAX_POINTS, member
from .toric import (
    DEFAULT_MAX_SHIFTS,
    ToricRing,
    canonical_class,
    class_group,
    classify,
    dual_f_signature_lower_bound,
    f_signature,
    frobenius_decompose,
    limit_multiplicities,
    validate,
)

EXIT_OK, EXIT_VALIDATION, EXIT_GUARD, EXIT_INVARIANT = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


def _read_json(source: str, kind: str, stdin) -> dict:
    if source == "-":
        text = stdin.read()
    elif Path(source).is_file():
        text = Path(source).read_text()
    elif kind == "ring" and corpus.has_ring(source):
        return corpus.ring_spec(source)
    elif kind == "ideal" and corpus.has_ideal(source):
        return corpus.ideal_spec(source)
    else:
        raise ValidationError(f"cannot find {kind} file {source!r}", field=kind)
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{kind} input is not valid JSON: {exc}", field=kind) from exc


def _signature(text: str) -> tuple[int, ...]:
    text = text.strip()
    try:
        vals = json.loads(text) if text.startswith("[") else [int(x) for x in text.split(",")]
        return tuple(int(x) for x in vals)
    except (ValueError, TypeError, json.JSONDecodeError) as exc:
        raise ValidationError(f"cannot parse signature {text!r}", field="start") from exc


def _positive(name):
    def conv(text):
        try:
            v = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{name} must be an integer")
        if v < 1:
            raise argparse.ArgumentTypeError(f"{name} must be at least 1")
        return v

    return conv


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--max-points", type=_positive("--max-points"), default=None,
                        help="resource guard for enumerations (env FROBCONE_MAX_POINTS)")
    common.add_argument("--threads", type=_positive("--threads"), default=1, help="worker cap")
    common.add_argument("--approx", action="store_true", help="add float renderings next to exact values")
    common.add_argument("--timing", action="store_true", help="include wall-clock timing in the report")

    ring_opt = _Parser(add_help=False)
    ring_opt.add_argument("--ring", required=True, help="ring JSON file, bundled name, or '-' for stdin")

    parser = _Parser(prog="frobcone", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"frobcone {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sub.add_parser("validate", parents=[common, ring_opt], help="check a ring specification")
    sub.add_parser("clgroup", parents=[common, ring_opt], help="divisor class group")
    p = sub.add_parser("decompose", parents=[common, ring_opt], help="decompose F^e_* M_start")
    p.add_argument("--e", type=_positive("--e"), required=True)
    p.add_argument("--start", default=None, help="start signature, e.g. 1,1 or [1,1]")
    sub.add_parser("mu", parents=[common, ring_opt], help="fundamental class as exact limit")
    p = sub.add_parser("cone", parents=[common, ring_opt], help="Cohen-Macaulay cone membership of mu")
    p.add_argument("--emax", type=_positive("--emax"), required=True)
    p.add_argument("--interior", action="store_true")
    sub.add_parser("realize", parents=[common, ring_opt], help="integral realization n*mu = [N]")
    sub.add_parser("xi", parents=[common, ring_opt], help="canonical involution on conic classes")
    for name, helptext in (("fsig", "F-signature"), ("dualfsig-lb", "dual F-signature lower bound")):
        p = sub.add_parser(name, parents=[common, ring_opt], help=helptext)
        p.add_argument("--emax", type=_positive("--emax"), required=True)
    p = sub.add_parser("hk", parents=[common, ring_opt], help="Hilbert-Kunz samples")
    p.add_argument("--ideal", required=True)
    p.add_argument("--emax", type=_positive("--emax"), required=True)
    p.add_argument("--fit", action="store_true")
    p = sub.add_parser("crosscheck", parents=[common, ring_opt], help="decomposition vs direct length")
    p.add_argument("--sop", required=True)
    p.add_argument("--e", type=_positive("--e"), required=True)
    p = sub.add_parser("detmat", parents=[common], help="determinantal Riemann-Roch series")
    p.add_argument("--m", type=_positive("--m"), required=True)
    p.add_argument("--n", type=_positive("--n"), required=True)
    return parser


def _verified(cert):
    if not cert.verify():
        raise InvariantViolation(f"certificate failed re-verification: {cert}")
    return cert


def _dispatch(args, stdin) -> tuple[dict, dict]:
    kw = {"threads": args.threads, "max_points": args.max_points}
    inputs: dict = {}
    ring = None
    if getattr(args, "ring", None) is not None:
        spec = _read_json(args.ring, "ring", stdin)
        ring = validate(ToricRing.from_spec(spec))
        inputs["ring"] = ring.to_spec()
    cmd = args.command
    R = serialize.rat

    if cmd == "validate":
        return inputs, {"valid": True, "f": ring.f}

    if cmd == "clgroup":
        grp = class_group(ring)
        K = canonical_class(ring)
        return inputs, {
            "group": grp.describe(),
            "torsion": list(grp.torsion),
            "free_rank": grp.free_rank,
            "orders": list(grp.orders),
            "canonical": serialize.conic_class(K),
            "gorenstein": K.is_free,
        }

    if cmd == "decompose":
        start = _signature(args.start) if args.start else None
        inputs.update(e=args.e, start=list(start) if start else None)
        mv = frobenius_decompose(ring, start, args.e, threads=args.threads, max_points=args.max_points)
        return inputs, {
            "q": mv.q,
            "start": list(mv.start),
            "total": mv.total,
            "counts": serialize.class_map(mv.counts),
            "classes": [serialize.conic_class(c) for c in mv.counts],
            "signatures": [{"signature": list(s), "count": n} for s, n in mv.signature_counts.items()],
        }

    if cmd == "mu":
        mu = mu_class(ring)
        return inputs, {
            "mu": serialize.class_map(mu.support),
            "formal_rank": R(mu.formal_rank),
            "classes": [serialize.conic_class(c) for c in mu.support],
        }

    if cmd == "cone":
        inputs.update(emax=args.emax, interior=args.interior)
        model = build_cm_cone(ring, args.emax, **kw)
        model = close_under_xi(model, xi(ring, model.class_order))
        mu = mu_class(ring)
        cert = check_mu_membership(model, mu)
        if not args.interior and cert.verdict == "interior":
            # plain membership requested: report the inside witness only
            cert = member(model.cone, mu.coordinates(model.class_order))
        _verified(cert)
        labels = [c.label for c in model.class_order]
        return inputs, {
            "classes": labels,
            "added_by_xi": [c.label for c in model.added_by_xi],
            "mu": [R(x) for x in mu.coordinates(model.class_order)],
            "certificate": serialize.certificate(cert, labels),
        }

    if cmd == "realize":
        mu = mu_class(ring)
        real = integral_realization(mu)
        return inputs, {
            "n": real.n,
            "module": {c.label: k for c, k in real.module_spec.items()},
            "rank": sum(real.module_spec.values()),
            "mu": serialize.class_map(mu.support),
        }

    if cmd == "xi":
        xm = xi(ring)
        return inputs, {
            "canonical": xm.canonical.label,
            "mapping": {a.label: b.label for a, b in xm.mapping.items()},
            "identity": xm.is_identity(),
            "involution": xm.is_involution(),
            "closed": xm.closed,
            "missing": [c.label for c in xm.missing],
            "lambda_comparison": [
                {"class": c.label, "image": d.label, "lambda": R(a), "lambda_image": R(b),
                 "equal": a == b}
                for c, d, a, b in xi_lambda_comparison(ring)
            ],
        }

    if cmd == "fsig":
        inputs["emax"] = args.emax
        res = f_signature(ring, args.emax, **kw)
        return inputs, {
            "limit": R(res.exact_limit),
            "sequence": [{"e": e, "value": R(v)} for e, v in res.sequence],
        }

    if cmd == "dualfsig-lb":
        inputs["emax"] = args.emax
        res = dual_f_signature_lower_bound(ring, args.emax, **kw)
        return inputs, {
            "lower_bound": R(res.certified_lb),
            "canonical": res.canonical.label,
            "sequence": [{"e": e, "value": R(v)} for e, v in res.sequence],
            "note": "lower bound for the dual F-signature of the canonical module",
        }

    if cmd == "hk":
        ideal = MonomialIdeal.from_spec(_read_json(args.ideal, "ideal", stdin))
        inputs.update(ideal=ideal.to_spec(), emax=args.emax, fit=args.fit)
        samples = hk_samples(ring, ideal, range(1, args.emax + 1), **kw)
        out = {"samples": [{"e": s.e, "q": s.q, "length": s.length} for s in samples]}
        if args.fit:
            fit = fit_signed_powers(samples, ring.p, ring.d)
            out["fit"] = {
                "coefficients": [R(c) for c in fit.coefficients],
                "eps": list(fit.eps),
                "alpha": R(fit.alpha),
                "beta": [R(b) for b in fit.beta],
                "residuals": {str(e): R(r) for e, r in fit.residuals.items()},
                "exact_fit": fit.exact_fit,
            }
        return inputs, out

    if cmd == "crosscheck":
        ideal = MonomialIdeal.from_spec(_read_json(args.sop, "ideal", stdin))
        inputs.update(sop=ideal.to_spec(), e=args.e)
        cc = hk_cross_check(ring, ideal.generators, args.e, **kw)
        if not cc.equal:
            raise InvariantViolation(f"cross-check mismatch: {cc.lhs} != {cc.rhs}")
        return inputs, {
            "lhs": cc.lhs,
            "rhs": cc.rhs,
            "equal": cc.equal,
            "terms": [{"class": c.label, "count": n, "length": ell} for c, n, ell in cc.terms],
        }

    if cmd == "detmat":
        inputs.update(m=args.m, n=args.n)
        rep = chow_determinantal(args.m, args.n)
        return inputs, {
            "trunc": rep.tauR.trunc,
            "tauR": serialize.series(rep.tauR),
            "tauOmega": serialize.series(rep.tauOmega),
            "mu": serialize.series(rep.mu),
            "kClass": serialize.series(rep.kClass),
        }

    raise UsageError(f"unknown command {cmd!r}")  # pragma: no cover


def run(argv=None, stdout=None, stderr=None, stdin=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    stdin = stdin or sys.stdin
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(str(exc), file=stderr)
        return EXIT_VALIDATION
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)

    t0 = time.perf_counter()
    try:
        inputs, results = _dispatch(args, stdin)
    except ValidationError as exc:
        print(json.dumps({"schema": serialize.SCHEMA_VERSION, "command": args.command, "error": {
            "kind": type(exc).__name__, "message": str(exc), "field": getattr(exc, "field", None)}},
            sort_keys=True), file=stderr)
        return EXIT_VALIDATION
    except ResourceGuardExceeded as exc:
        print(json.dumps({"schema": serialize.SCHEMA_VERSION, "command": args.command, "error": {
            "kind": "ResourceGuardExceeded", "message": str(exc), "needed": exc.needed, "limit": exc.limit}},
            sort_keys=True), file=stderr)
        return EXIT_GUARD
    except (InvariantViolation, FrobconeError) as exc:
        print(json.dumps({"schema": serialize.SCHEMA_VERSION, "command": args.command, "error": {
            "kind": type(exc).__name__, "message": str(exc)}}, sort_keys=True), file=stderr)
        return EXIT_INVARIANT

    env_limit = os.environ.get("FROBCONE_MAX_POINTS")
    report = {
        "schema": serialize.SCHEMA_VERSION,
        "command": args.command,
        "inputs": inputs,
        "results": results,
        "limits": {
            "max_points": args.max_points or (int(env_limit) if env_limit else DEFAULT_MAX_POINTS),
            "max_shifts": args.max_points or (int(env_limit) if env_limit else DEFAULT_MAX_SHIFTS),
            "threads": args.threads,
            "backend": _kernels.BACKEND,
        },
    }
    if args.approx:
        report["approx"] = serialize.approximate(results)
    if args.timing:
        report["timing"] = {"seconds": round(time.perf_counter() - t0, 6)}
    stdout.write(json.dumps(report, sort_keys=True, indent=2) + "\n")
    return EXIT_OK


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
