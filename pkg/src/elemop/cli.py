"""Command-line entry point: ``elemop <command> ...``.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 numeric error.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import __version__
from .acceptance import run_all
from .elementary import classify, family_from_json
from .errors import ConfigError, ElemopError
from .generators import DEFAULT_SEED
from .harness import FORMULA_TOL, KINDS, records_to_csv, records_to_json, verify
from .schur import atoms_from_json, probe_to_csv, wiener_pitt_probe
from .search import SearchConfig, luders_nonreal_search, search_factorization
from .semidiag import band_family, dense_family, semidiag_profile
from .spectrum import Tolerance

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _int_list(text):
    try:
        return [int(t) for t in text.split(",") if t]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _complex_pair(text):
    try:
        parts = [float(t) for t in text.split(",")]
    except ValueError:
        parts = []
    if len(parts) not in (1, 2):
        raise argparse.ArgumentTypeError(f"expected RE,IM, got {text!r}")
    return complex(parts[0], parts[1] if len(parts) == 2 else 0.0)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    g = common.add_argument_group("global options")
    g.add_argument("--tol-abs", type=float, default=argparse.SUPPRESS)
    g.add_argument("--tol-rel", type=float, default=argparse.SUPPRESS)
    g.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    g.add_argument("--out", default=argparse.SUPPRESS, help="output file (default: stdout)")
    g.add_argument("--format", choices=("json", "csv"), default=argparse.SUPPRESS)

    p = _Parser(prog="elemop", parents=[common],
                description="Numerical laboratory for elementary operators X -> sum A_j X B_j.")
    p.add_argument("--version", action="version", version=f"elemop {__version__}")
    sub = p.add_subparsers(dest="command", parser_class=_Parser, required=True)

    s = sub.add_parser("spectrum", parents=[common], help="spectrum of a family file")
    s.add_argument("family")
    s = sub.add_parser("classify", parents=[common], help="structural flags of a family file")
    s.add_argument("family")

    s = sub.add_parser("verify", parents=[common], help="formula-versus-oracle sweeps")
    s.add_argument("kind", choices=KINDS)
    s.add_argument("--instances", type=int, default=100)

    s = sub.add_parser("semidiag", parents=[common], help="commutator budget profile")
    s.add_argument("--n", type=int, default=32)
    s.add_argument("--band", type=int, default=1)
    s.add_argument("--terms", type=int, default=3)
    s.add_argument("--dense", action="store_true", help="dense family instead of banded")

    s = sub.add_parser("search", parents=[common], help="PSD-cone searches")
    ss = s.add_subparsers(dest="target", parser_class=_Parser, required=True)
    for name in ("magajna", "luders"):
        t = ss.add_parser(name, parents=[common])
        if name == "magajna":
            t.add_argument("--lambda", dest="lam", type=_complex_pair, required=True)
        t.add_argument("--dim", type=int, default=3)
        t.add_argument("--terms", type=int, default=3)
        t.add_argument("--restarts", type=int, default=10 if name == "magajna" else 3)
        t.add_argument("--iters", type=int, default=500 if name == "magajna" else 2000)

    s = sub.add_parser("schur", parents=[common], help="Schur multiplier tools")
    ss = s.add_subparsers(dest="target", parser_class=_Parser, required=True)
    t = ss.add_parser("probe", parents=[common])
    t.add_argument("--atoms", required=True, help="atom list JSON file")
    t.add_argument("--sizes", type=_int_list, default=[8, 16, 32])
    t.add_argument("--samples", type=int, default=64)

    sub.add_parser("selftest", parents=[common], help="run acceptance criteria 1-10")
    return p


def _normalize_argv(argv):
    # allow "--lambda -1,0": argparse would read "-1,0" as an option
    out, it = [], iter(argv)
    for a in it:
        if a == "--lambda":
            out.append("--lambda=" + next(it, ""))
        else:
            out.append(a)
    return out


def _envelope(args, tol, **payload):
    return {
        "tool": "elemop",
        "version": __version__,
        "seed": args.seed,
        "tolerances": {"abs": tol.abs, "rel": tol.rel},
        **payload,
    }


def _emit(args, obj=None, text=None):
    if text is None:
        text = json.dumps(obj, indent=1) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}")


def _summary(msg):
    print(msg, file=sys.stderr)


def _cmd_spectrum(args, tol):
    op = family_from_json(_load_json(args.family))
    spec = op.spectrum(tol)
    _emit(args, _envelope(args, tol, m=op.m, n=op.n, J=op.family.J,
                          provenance=spec.provenance, values=spec.to_pairs()))
    return EXIT_OK


def _cmd_classify(args, tol):
    op = family_from_json(_load_json(args.family))
    cls = classify(op, tol)
    b_left, b_right = op.family.budgets
    _emit(args, _envelope(args, tol, m=op.m, n=op.n, J=op.family.J,
                          budgets={"left": b_left, "right": b_right},
                          classification=cls.as_dict()))
    return EXIT_OK


def _cmd_verify(args, tol):
    if not args.explicit:
        tol = FORMULA_TOL
    records = verify(args.kind, args.instances, args.seed, tol)
    passed = sum(r.passed for r in records)
    worst = max((r.hausdorff for r in records), default=0.0)
    _summary(f"verify {args.kind}: {passed}/{len(records)} PASS, max d_H {worst:.3e}")
    if args.format == "csv":
        _emit(args, text=records_to_csv(records))
    else:
        _emit(args, _envelope(args, tol, kind=args.kind, instances=records_to_json(records)))
    return EXIT_OK if passed == len(records) else EXIT_FAIL


def _cmd_semidiag(args, tol):
    if args.dense:
        fam = dense_family(args.n, args.terms, args.seed)
    else:
        fam = band_family(args.n, args.band, args.terms, args.seed)
    prof = semidiag_profile(fam)
    band = None if args.dense else args.band
    _summary(f"semidiag N={args.n} J={args.terms} b={band}: max s = {prof.max_budget:.6g}")
    if args.format == "csv":
        _emit(args, text=prof.to_csv(band))
    else:
        _emit(args, _envelope(args, tol, band=band, **prof.to_json()))
    return EXIT_OK


def _cmd_search(args, tol):
    cfg = SearchConfig(restarts=args.restarts, iters=args.iters, seed=args.seed)
    if args.target == "magajna":
        res = search_factorization(args.lam, args.dim, args.terms, cfg)
        _summary(f"search magajna lambda={args.lam}: residual {res.residual:.3e} "
                 f"(lower bound {res.certificate['lower_bound']:.3e}), success={res.success}")
    else:
        res = luders_nonreal_search(args.dim, args.terms, cfg)
        _summary(f"search luders d={args.dim} J={args.terms}: max |Im| / ||K|| = "
                 f"{res.residual:.3e}")
    _emit(args, _envelope(args, tol, result=res.to_json()))
    return EXIT_OK


def _cmd_schur(args, tol):
    atoms = atoms_from_json(_load_json(args.atoms))
    rows, growing = wiener_pitt_probe(atoms, args.sizes, samples=args.samples, seed=args.seed)
    _summary(f"schur probe: {len(rows)} sizes, upper bound non-decreasing={growing}")
    if args.format == "csv":
        _emit(args, text=probe_to_csv(rows))
    else:
        _emit(args, _envelope(args, tol, monotone_growth=growing,
                              rows=[r.__dict__ for r in rows]))
    return EXIT_OK


def _cmd_selftest(args, tol):
    results = run_all(args.seed)
    for r in results:
        print(r.line(), file=sys.stderr)
    ok = all(r.passed for r in results)
    _summary(f"selftest: {sum(r.passed for r in results)}/{len(results)} criteria PASS")
    if args.out:
        _emit(args, _envelope(args, tol, criteria=[
            {"number": r.number, "name": r.name, "passed": r.passed, "detail": r.detail}
            for r in results]))
    return EXIT_OK if ok else EXIT_FAIL


COMMANDS = {
    "spectrum": _cmd_spectrum, "classify": _cmd_classify, "verify": _cmd_verify,
    "semidiag": _cmd_semidiag, "search": _cmd_search, "schur": _cmd_schur,
    "selftest": _cmd_selftest,
}


def run(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args = build_parser().parse_args(_normalize_argv(argv))
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    args.explicit = {k for k in ("tol_abs", "tol_rel") if hasattr(args, k)}
    defaults = {"tol_abs": 1e-10, "tol_rel": 1e-10, "seed": DEFAULT_SEED,
                "out": None, "format": "json"}
    for k, v in defaults.items():
        if not hasattr(args, k):
            setattr(args, k, v)
    try:
        tol = Tolerance(args.tol_abs, args.tol_rel)
        return COMMANDS[args.command](args, tol)
    except (UsageError, ConfigError) as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except (ElemopError, ValueError, KeyError, np.linalg.LinAlgError) as exc:
        print(f"elemop: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
