"""Command-line front end.

    lienil expand "[x1,x2,x3]"
    lienil span t4 --multidegree 1,1,1,1,1
    lienil verify thm11 --k 1 --format json

Exit status: 0 on success, 1 when a check fails, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Dict, List, Optional, Sequence

from . import generators as gen
from .freering import MultiDegree, ParseError, as_polynomial, format_polynomial
from .generators import SPECS, component, component_lattice, get_spec
from .specht import enumerate_specht_basis
from .torsion import (
    Report,
    check_order_in_quotient,
    enumerate_eset,
    identity_suite,
    torsion_report,
    verify_ker_psi_equals_q,
    verify_mu,
    verify_span_equalities,
    verify_specht,
    verify_thm11,
    verify_thm12,
)
from .zmodule import is_prime, lattice_snf

SUITES = ["thm11", "thm12", "thm13-equiv", "lemma32", "cor16", "kerpsi", "mu", "identities", "specht", "all"]


class UsageError(Exception):
    pass


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None:
        return default
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"{name} must be an integer, got {raw!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["text", "json"], default="text")
    common.add_argument("--max-degree", type=int, default=None, help="total degree cap (default 8, env LIENIL_MAX_DEGREE)")
    common.add_argument("--max-vars", type=int, default=None, help="variable cap (default 12, env LIENIL_MAX_VARS)")
    common.add_argument("--prime", type=int, default=None, help="work over F_p")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--threads", type=int, default=1, help="accepted for compatibility; work runs serially")
    common.add_argument("--no-timing", action="store_true", help="omit elapsed times so reports are byte-identical")

    parser = argparse.ArgumentParser(prog="lienil", description="Computations in Z<X> modulo T(4) and T(3,2).")
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("expand", parents=[common], help="expand an expression to canonical form")
    p.add_argument("expr")

    p = sub.add_parser("components", parents=[common], help="multihomogeneous components of an expression")
    p.add_argument("expr")

    p = sub.add_parser("specht", parents=[common], help="Specht basis of the multilinear part of Gamma")
    p.add_argument("--n", type=int, required=True)

    p = sub.add_parser("espace", parents=[common], help="elements of E of one multidegree")
    p.add_argument("--multidegree", required=True)

    p = sub.add_parser("span", parents=[common], help="spanning set and Smith form of one ideal component")
    p.add_argument("ideal", choices=sorted(SPECS))
    p.add_argument("--multidegree", required=True)
    p.add_argument("--list", action="store_true", help="print the spanning polynomials")

    p = sub.add_parser("member", parents=[common], help="membership of an expression in an ideal")
    p.add_argument("ideal", choices=sorted(SPECS))
    p.add_argument("expr")

    p = sub.add_parser("order", parents=[common], help="additive order of an expression modulo an ideal")
    p.add_argument("ideal", choices=sorted(SPECS))
    p.add_argument("expr")

    p = sub.add_parser("torsion", parents=[common], help="torsion report of T(4) at one multidegree")
    p.add_argument("--multidegree", required=True)

    p = sub.add_parser("verify", parents=[common], help="run verification suites")
    p.add_argument("suite", choices=SUITES)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--n", type=int, default=6)
    p.add_argument("--max-total-degree", type=int, default=6)
    p.add_argument("--budget", type=int, default=6)
    p.add_argument("--instances", type=int, default=100)
    p.add_argument("--mutate", action="append", default=[], metavar="TAG",
                   help="corrupt a generator family (mutation testing)")
    return parser


# ---------------------------------------------------------------------------


def _multidegree(text: str, cfg: Dict[str, int]) -> MultiDegree:
    try:
        d = MultiDegree.parse(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    _check_caps(d, cfg)
    return d


def _check_caps(d: MultiDegree, cfg: Dict[str, int]) -> None:
    if d.total > cfg["max_degree"]:
        raise UsageError(f"total degree {d.total} exceeds the cap {cfg['max_degree']}")
    if len(d.exponents) > cfg["max_vars"]:
        raise UsageError(f"{len(d.exponents)} variables exceed the cap {cfg['max_vars']}")


def _expr(text: str, cfg: Dict[str, int]):
    try:
        p = as_polynomial(text)
    except ParseError as exc:
        raise UsageError(f"parse error: {exc}") from None
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    for d in p.components():
        _check_caps(d, cfg)
    return p


def _emit(payload: object, args: argparse.Namespace, text_lines: Sequence[str]) -> None:
    if args.format == "json":
        sys.stdout.write(json.dumps(payload, sort_keys=True, indent=2) + "\n")
    else:
        for line in text_lines:
            sys.stdout.write(line + "\n")


def _report_lines(r: Report, timing: bool) -> List[str]:
    params = " ".join(f"{k}={v}" for k, v in sorted(r.parameters.items()))
    head = f"{r.status.upper():4} {r.check} {params}".rstrip()
    if timing and r.elapsed_ms is not None:
        head += f" ({r.elapsed_ms} ms)"
    lines = [head]
    w = r.witness
    if isinstance(w, dict):
        for k in sorted(w):
            v = w[k]
            if isinstance(v, (dict, list)) and len(json.dumps(v)) > 160:
                v = f"<{type(v).__name__} of {len(v)}>"
            lines.append(f"  {k}: {v}")
    elif isinstance(w, list):
        for row in w:
            lines.append(f"  {row}")
    return lines


def _run_suite(args: argparse.Namespace) -> List[Report]:
    suite = args.suite
    m = args.max_total_degree
    if m < 1:
        raise UsageError("--max-total-degree must be >= 1")
    out: List[Report] = []
    if suite in ("thm11", "all"):
        ks = [args.k] if args.k is not None and suite == "thm11" else [1, 2]
        for k in ks:
            if k < 1 or k > 2:
                raise UsageError("thm11 runs for k = 1 or 2 (use 'verify mu' for larger k)")
            out.append(verify_thm11(k))
    if suite in ("thm12", "all"):
        out.append(verify_thm12(m))
    if suite in ("thm13-equiv", "all"):
        checks = [
            ("thm13 = t4", ["thm13"], ["t4"]),
            ("cor15 = t4", ["cor15"], ["t4"]),
            ("t32 = t4 + i32", ["t32"], ["t4", "i32"]),
            ("t32 = t32 + t4", ["t32"], ["t32", "t4"]),
        ]
        out.append(verify_span_equalities(checks, m, name="thm13-equiv"))
    if suite in ("lemma32", "all"):
        out.append(verify_span_equalities([("lemma32left = t4", ["lemma32left"], ["t4"])], m, name="lemma32"))
    if suite in ("cor16", "all"):
        primes = [args.prime] if args.prime is not None and suite == "cor16" else [5, 7]
        for p in primes:
            if p == 3:
                raise UsageError("the cor16 equality needs 1/3, so p must differ from 3")
            out.append(verify_span_equalities([("cor16 = t4", ["cor16"], ["t4"])], m, modulus=p, name="cor16"))
    if suite in ("kerpsi", "all"):
        if suite == "kerpsi" and args.k not in (None, 1):
            raise UsageError("kerpsi is only implemented for k = 1")
        out.append(verify_ker_psi_equals_q(1))
    if suite in ("mu", "all"):
        ks = [args.k] if args.k is not None and suite == "mu" else [1, 2, 3]
        for k in ks:
            if k < 1 or k > 3:
                raise UsageError("mu runs for 1 <= k <= 3")
            out.append(verify_mu(k))
    if suite in ("identities", "all"):
        if args.budget > args.max_degree_cap:
            raise UsageError(f"budget {args.budget} exceeds the degree cap")
        out.append(identity_suite(args.seed, args.budget, args.instances))
    if suite in ("specht", "all"):
        if args.n < 2 or args.n > 7:
            raise UsageError("specht runs for 2 <= n <= 7")
        out.append(verify_specht(args.n))
    return out


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    try:
        cfg = {
            "max_degree": args.max_degree if args.max_degree is not None else _env_int("LIENIL_MAX_DEGREE", 8),
            "max_vars": args.max_vars if args.max_vars is not None else _env_int("LIENIL_MAX_VARS", 12),
        }
        if cfg["max_degree"] < 1 or cfg["max_vars"] < 1:
            raise UsageError("caps must be positive")
        if args.prime is not None and not is_prime(args.prime):
            raise UsageError(f"{args.prime} is not prime")
        args.max_degree_cap = cfg["max_degree"]
        return _dispatch(args, cfg)
    except UsageError as exc:
        sys.stderr.write(f"lienil: error: {exc}\n")
        return 2


def _dispatch(args: argparse.Namespace, cfg: Dict[str, int]) -> int:
    timing = not args.no_timing
    verb = args.verb
    if verb == "expand":
        p = _expr(args.expr, cfg)
        s = format_polynomial(p)
        _emit({"input": args.expr, "expansion": s, "terms": len(p)}, args, [s])
        return 0
    if verb == "components":
        p = _expr(args.expr, cfg)
        comps = p.components()
        payload = {str(d): format_polynomial(c) for d, c in comps.items()}
        _emit(payload, args, [f"{d}: {format_polynomial(c)}" for d, c in comps.items()])
        return 0
    if verb == "specht":
        if args.n < 2:
            raise UsageError("--n must be >= 2")
        if args.n > min(cfg["max_vars"], cfg["max_degree"]):
            raise UsageError("--n exceeds the caps")
        basis = [str(cp) for cp in enumerate_specht_basis(args.n)]
        _emit({"n": args.n, "size": len(basis), "basis": basis}, args, basis + [f"# {len(basis)} elements"])
        return 0
    if verb == "espace":
        d = _multidegree(args.multidegree, cfg)
        es = [format_polynomial(e) for e in enumerate_eset(d)]
        from .torsion import _eset_labels

        labels = [s for s, _ in _eset_labels(d)]
        _emit({"multidegree": str(d), "elements": labels, "expansions": es}, args, labels + [f"# {len(labels)} elements"])
        return 0
    if verb == "span":
        d = _multidegree(args.multidegree, cfg)
        spec = get_spec(args.ideal)
        vecs = gen.component_vectors(spec, d, max_degree=cfg["max_degree"])
        lat = component_lattice(spec, d, args.prime, max_degree=cfg["max_degree"])
        payload: Dict[str, object] = {
            "ideal": spec.name,
            "multidegree": str(d),
            "dimension": component(d).dim,
            "spanningElements": len(vecs),
            "rank": lat.rank,
        }
        lines = [f"{spec.name} at {d}: {len(vecs)} spanning elements in Z^{component(d).dim}, rank {lat.rank}"]
        if args.prime is None:
            snf = lattice_snf(lat).to_dict()
            payload["snf"] = snf
            lines.append(f"elementary divisors: {snf['divisors']}")
        else:
            payload["prime"] = args.prime
        if args.list:
            polys = [format_polynomial(component(d).polynomial(v)) for v in vecs]
            payload["span"] = polys
            lines.extend(polys)
        _emit(payload, args, lines)
        return 0
    if verb == "member":
        p = _expr(args.expr, cfg)
        from .torsion import UndecidedMembership, is_member

        try:
            ok: Optional[bool] = is_member(p, args.ideal, args.prime)
        except UndecidedMembership:
            ok = None
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        verdict = {True: "member", False: "not a member", None: "undetermined membership"}[ok]
        _emit({"ideal": args.ideal, "expr": args.expr, "member": ok, "prime": args.prime}, args,
              [f"{verdict} of {args.ideal}" + (f" mod {args.prime}" if args.prime else "")])
        return 0
    if verb == "order":
        p = _expr(args.expr, cfg)
        try:
            res = check_order_in_quotient(p, args.ideal, max_degree=cfg["max_degree"])
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        _emit({"ideal": args.ideal, "expr": args.expr, "order": res.label, "route": res.route, "details": res.details},
              args, [f"order {res.label} ({res.route})"])
        return 0
    if verb == "torsion":
        d = _multidegree(args.multidegree, cfg)
        tr = torsion_report(d, cfg["max_degree"])
        lines = [
            f"{'PASS' if tr.consistent else 'FAIL'} torsion {d}",
            f"  ambient rank {tr.ambient_rank}, T(4) rank {tr.t4_snf.rank}",
            f"  predicted F3-dimension {tr.predicted_f3_dim}, observed {tr.observed_f3_dim}",
            f"  extra torsion {tr.extra_torsion}",
        ] + [f"  E: {s}" for s in tr.e_labels]
        payload = tr.to_dict()
        payload["status"] = "pass" if tr.consistent else "fail"
        _emit(payload, args, lines)
        return 0 if tr.consistent else 1
    if verb == "verify":
        for tag in args.mutate:
            if tag not in gen.ARITY and tag not in ("TnDEF", "CCk"):
                raise UsageError(f"unknown family {tag!r}")
        with gen.corrupted(*args.mutate):
            reports = _run_suite(args)
        payload = [r.to_dict(timing) for r in reports]
        lines: List[str] = []
        for r in reports:
            lines.extend(_report_lines(r, timing))
        failed = [r for r in reports if not r.passed]
        lines.append(f"{len(reports) - len(failed)}/{len(reports)} checks passed")
        _emit(payload, args, lines)
        return 1 if failed else 0
    raise UsageError(f"unknown verb {verb}")  # pragma: no cover


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
