"""Command-line interface: ``etanormal validate|classify|identities|connection|bileg|example``.

Exit codes: 0 all checks pass, 1 some check fails, 2 input error.
"""

from __future__ import annotations

import argparse
import sys
import time

import numpy as np

from . import __version__, acm, apcm, bileg, parallelize, qsas, specfile
from .exprlang import ExprSyntaxError
from .models import kappa_mu_candidate, para_kenmotsu, para_sasakian
from .report import Report

EXIT_PASS, EXIT_FAIL, EXIT_INPUT = 0, 1, 2
SUITES = ("general", "normality", "connection", "qsas", "bileg", "all")
EXAMPLES = ("heisenberg", "alpha_sasakian", "para_cosymplectic", "para_kenmotsu", "para_sasakian", "kappa_mu")


class InputError(ValueError):
    pass


def _kw(args) -> dict:
    return {} if args.tol is None else {"tol": args.tol}


def _load(args):
    spec = specfile.load(args.file)
    seed = spec.seed if args.seed is None else args.seed
    count = spec.points if args.points is None else args.points
    if args.tol is None and spec.tol is not None:
        args.tol = spec.tol
    S = spec.structure()
    points = S.chart.sample(count, seed)
    return spec, S, points, seed


def _validate(S, points, args) -> Report:
    if S.kind == "acm":
        return acm.validate_acm(S, points, **_kw(args))
    return apcm.validate_apcm(S, points, **_kw(args))


def _classify(S, points, args, seed) -> Report:
    loc = S.at(points)
    if S.kind == "acm":
        rep = acm.classify(S, seed=seed, loc=loc, **_kw(args))
        _, sig, sym = acm.levi_form(S, points[0])
        rep.labels["levi signature"] = [sig[0], sig[1]]
        rep.labels["levi symmetric"] = sym
        return rep
    rep = apcm.para_class_check(S, seed=seed, loc=loc, **_kw(args))
    rep.labels["metric signature"] = list(np.linalg.eigvalsh(loc.g.val[0]) > 0).count(True)
    return rep


def _connection(S, points, args) -> Report:
    loc = S.at(points)
    rep = Report(f"connection {S.name}")
    try:
        conn = parallelize.build_tanaka_like(S, loc=loc, **_kw(args))
    except parallelize.PreconditionError as exc:
        rep.add_na("connection", "nabla~ = nabla - T1 - T2", str(exc))
        return rep
    rep.extend(parallelize.verify_parallel(conn, **_kw(args)))
    if S.kind == "acm":
        rep.extend(parallelize.torsion_conditions(conn, **_kw(args)))
        rep.extend(parallelize.specialization_check(S, loc=loc))
        shifted = conn.with_difference(parallelize.admissible_generator(loc))
        rep.extend(parallelize.difference_tensor_check(conn, shifted, **_kw(args)))
    return rep


def _suite(S, points, args, seed, suite: str) -> Report:
    loc = S.at(points)
    rep = Report(f"identities[{suite}] {S.name}")
    mod = acm if S.kind == "acm" else apcm
    if suite in ("general", "all"):
        rep.extend(mod.identity_suite(S, seed=seed, loc=loc, **_kw(args)))
        rep.extend(mod.autoparallel_equivalences(S, loc=loc, **_kw(args)))
        if S.kind == "apcm":
            rep.extend(apcm.product_nijenhuis_check(S, loc=loc))
    if suite in ("normality", "all"):
        rep.extend(mod.normality_report(S, seed=seed, loc=loc, **_kw(args)))
    if suite in ("connection", "all"):
        rep.extend(_connection(S, points, args))
    if suite in ("qsas", "all"):
        if S.kind == "acm":
            rep.extend(qsas.qs_formulas_check(S, loc=loc, **_kw(args)))
            rep.extend(qsas.foliation_checks(S, points[: min(len(points), 20)]))
        else:
            rep.add_na("qsas", "quasi-Sasakian checks", "almost contact metric structures only")
    if suite in ("bileg", "all"):
        if S.kind == "apcm":
            rep.extend(bileg.bileg_suite(S, loc=loc, **_kw(args)))
        else:
            rep.add_na("bileg", "bi-Legendrian checks", "almost paracontact metric structures only")
    return rep


def _parse_matrix(text: str, n: int) -> np.ndarray:
    try:
        rows = [[float(v) for v in r.split(",")] for r in text.split(";")]
        a = np.array(rows, dtype=float)
    except ValueError:
        raise InputError(f"cannot parse matrix {text!r}; use '1,0;0,-1'") from None
    if a.shape != (n, n):
        raise InputError(f"matrix must be {n}x{n}, got shape {a.shape}")
    return a


def _n_from(args) -> int:
    if args.dim is not None:
        if args.dim < 3 or args.dim % 2 == 0:
            raise InputError("--dim must be odd and at least 3")
        return (args.dim - 1) // 2
    return args.n


def build_example(args):
    """Structure and certification block for ``example``."""
    name = args.name
    n = _n_from(args)
    if n < 1:
        raise InputError("--n must be at least 1")
    cert = {}
    if name == "heisenberg":
        a = _parse_matrix(args.a, n) if args.a else np.eye(n)
        try:
            S = qsas.heisenberg(n, a)
        except ValueError as exc:
            raise InputError(str(exc)) from None
    elif name == "alpha_sasakian":
        S = qsas.alpha_sasakian(n, args.alpha)
    elif name == "para_cosymplectic":
        S = apcm.flat_para_cosymplectic(n)
    elif name == "para_kenmotsu":
        S = para_kenmotsu(n)
    elif name == "para_sasakian":
        S = para_sasakian(n)
        loc = S.at(S.sample())
        cert["validate"] = apcm.validate_apcm(S, loc=loc).passed
        cert["dtau=Psi residual"] = f"{np.max(np.abs(loc.dtau.val - loc.Psi.val)):.3e}"
        cert["K1 residual"] = f"{np.max(np.abs(loc.K1)):.3e}"
        ok = cert["validate"] and float(cert["dtau=Psi residual"]) < 1e-9 and float(cert["K1 residual"]) < 1e-9
        cert["certified"] = ok
    elif name == "kappa_mu":
        if n != 1:
            raise InputError("kappa_mu is available in dimension 3 only")
        S = kappa_mu_candidate(args.mu)
        loc = S.at(S.sample())
        kappa, mu = bileg.fit_kappa_mu(S, kappa=-1.0, loc=loc)
        curv, hres = bileg.kappa_mu_residual(S, kappa, mu, loc=loc)
        cert["validate"] = apcm.validate_apcm(S, loc=loc).passed
        cert["kappa"] = f"{kappa:g}"
        cert["fitted mu"] = f"{mu:.12g}"
        cert["curvature residual"] = f"{curv:.3e}"
        cert["h^2 residual"] = f"{hres:.3e}"
        cert["certified"] = cert["validate"] and curv < 1e-6 and hres < 1e-6
    else:
        raise InputError(f"unknown example {name!r}")
    return S, cert


def _emit(rep: Report, args, spec, started: float, code: int | None = None) -> int:
    print(rep.summary())
    extra = {"tool_version": __version__, "input_sha256": spec.digest if spec else None,
             "seed": getattr(args, "_seed", None)}
    if args.timings:
        extra["timings"] = {"total_seconds": round(time.perf_counter() - started, 3)}
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            fh.write(rep.to_json(**extra) + "\n")
    if code is not None:
        return code
    return EXIT_PASS if rep.passed else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="etanormal", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=None, help="override check tolerances")
    common.add_argument("--seed", type=int, default=None, help="sampling seed (default: file or 42)")
    common.add_argument("--points", type=int, default=None, help="number of sample points")
    common.add_argument("--json", metavar="PATH", default=None, help="write the JSON report here")
    common.add_argument("--timings", action="store_true", help="include wall-clock timings in the JSON report")
    sub = p.add_subparsers(dest="command", required=True)
    for cmd, hlp in (("validate", "check the structure axioms"),
                     ("classify", "class labels, rank and signatures"),
                     ("connection", "build and verify the parallelizing connection"),
                     ("bileg", "bi-Legendrian checks for paracontact structures")):
        s = sub.add_parser(cmd, parents=[common], help=hlp)
        s.add_argument("file", help="manifold spec file (.mfd)")
    s = sub.add_parser("identities", parents=[common], help="residual tables of the identity suites")
    s.add_argument("file")
    s.add_argument("--suite", choices=SUITES, default="all")
    s = sub.add_parser("example", parents=[common], help="write an example manifold spec file")
    s.add_argument("name", choices=EXAMPLES)
    s.add_argument("--n", type=int, default=1, help="half-dimension n (dimension 2n+1)")
    s.add_argument("--dim", type=int, default=None, help="dimension (alternative to --n)")
    s.add_argument("--a", default=None, help="symmetric matrix for heisenberg, rows separated by ';'")
    s.add_argument("--alpha", type=float, default=1.0)
    s.add_argument("--mu", type=float, default=1.0)
    s.add_argument("-o", "--output", default=None, help="output path (default: standard output)")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    started = time.perf_counter()
    try:
        if args.command == "example":
            S, cert = build_example(args)
            text = specfile.dumps(S, seed=42 if args.seed is None else args.seed,
                                  points=100 if args.points is None else args.points,
                                  tol=args.tol, certification=cert or None,
                                  comment=f"generated by etanormal {__version__}: example {args.name}")
            if args.output:
                with open(args.output, "w", encoding="utf-8") as fh:
                    fh.write(text)
                print(f"wrote {args.output}")
            else:
                sys.stdout.write(text)
            if cert and not cert.get("certified", True):
                print("certification failed", file=sys.stderr)
                return EXIT_FAIL
            return EXIT_PASS
        spec, S, points, seed = _load(args)
        args._seed = seed
    except (specfile.SpecFileError, InputError, ExprSyntaxError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT

    if args.command == "validate":
        rep = _validate(S, points, args)
    elif args.command == "classify":
        rep = _validate(S, points, args)
        rep.title = f"classify {S.name}"
        rep.extend(_classify(S, points, args, seed))
    elif args.command == "identities":
        rep = _suite(S, points, args, seed, args.suite)
    elif args.command == "connection":
        rep = _connection(S, points, args)
    else:
        if S.kind != "apcm":
            print("error: bileg needs an almost paracontact (kind = apcm) structure", file=sys.stderr)
            return EXIT_INPUT
        rep = bileg.bileg_suite(S, loc=S.at(points), **_kw(args))
    return _emit(rep, args, spec, started)


if __name__ == "__main__":
    sys.exit(main())
