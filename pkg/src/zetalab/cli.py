"""Command-line interface.

Subcommands: xi-zeros, weil-approx, explicit-check, psi, pi-riemann, prolate,
heat, equiv, pair-correlation.  A JSON config file may supply any long-option
value (--config run.json); explicit flags override the file.  Exit status is
0 on success, 1 on numerical failure (a diagnostic JSON is printed), 2 on
usage or configuration errors.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys

from mpmath import mp, mpf

from . import __version__
from .precision import Precision, PrecisionError, mpf_to_text
from .numeric import DomainError, EigenError, IntegrationError
from .zeros_io import ZeroList, ZeroListError, read_zero_list, write_zero_list
from .xi import get_xi_evaluator
from .pipeline import cached_reference_zeros, weil_approx_run

EXIT_OK = 0
EXIT_NUMERIC = 1
EXIT_USAGE = 2


def import_zeros(path, digits: int = 30) -> ZeroList:
    """Ingest an external zero table in the repo text format."""
    return read_zero_list(path, digits=digits, source="imported")


def export_report(results: dict, fmt: str, path) -> None:
    """Serialize a report with stable field order; 'csv' expects the report
    to carry a 'rows' list plus a 'header' list."""
    if fmt == "json":
        with open(path, "w") as fh:
            json.dump(results, fh, indent=1)
            fh.write("\n")
    elif fmt == "csv":
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(results["header"])
            writer.writerows(results["rows"])
    else:
        raise DomainError("unknown report format %r" % fmt)


def _load_zeros(args, need: int, digits: int, cache_dir=None) -> ZeroList:
    if getattr(args, "zeros", None):
        zl = import_zeros(args.zeros, digits=digits)
        if len(zl) < need:
            raise DomainError("zero file holds %d ordinates, need %d"
                              % (len(zl), need))
        return zl.head(need)
    return cached_reference_zeros(need, Precision(max(digits, 30)),
                                  cache_dir=cache_dir)


# ----------------------------------------------------------------------
# subcommand implementations
# ----------------------------------------------------------------------

def cmd_xi_zeros(args) -> int:
    prec = Precision(args.digits)
    xi = get_xi_evaluator(prec, tmax=2)
    xi0 = xi(mpf(0))
    zeros = cached_reference_zeros(args.count, prec, cache_dir=args.cache_dir,
                                   scheme=args.scheme)
    if args.out:
        write_zero_list(zeros, args.out, comment="Xi-oracle ordinates")
    report = {
        "command": "xi-zeros",
        "count": len(zeros),
        "digits": args.digits,
        "xi_at_0": mp.nstr(xi0, 15),
        "first": mpf_to_text(zeros[0], prec),
        "out": args.out,
    }
    print(json.dumps(report, indent=1))
    return EXIT_OK


def cmd_weil_approx(args) -> int:
    prec = Precision(args.digits)
    result = weil_approx_run(
        prec, pmax=args.pmax, lam=args.lam, N=args.N, tmax=args.tmax,
        count=args.count, cache_dir=args.cache_dir, workers=args.threads,
        constrained=args.constrained)
    rec = result.report()
    rec["command"] = "weil-approx"
    if args.out:
        export_report(rec, "json", args.out)
    if args.csv:
        from .zeroapprox import write_report_csv
        write_report_csv(rec, args.csv)
    print(json.dumps({k: rec[k] for k in rec if k not in ("zeros", "diffs")},
                     indent=1))
    return EXIT_OK


def cmd_explicit_check(args) -> int:
    from .explicit import explicit_sum_check, gaussian_log_bump
    prec = Precision(args.digits)
    zeros = _load_zeros(args, args.count, args.digits, args.cache_dir)
    with prec.work():
        radius = mp.sqrt((prec.digits + 20) * mp.log(10) / mpf(args.sharpness))
        g = gaussian_log_bump(args.sharpness, radius, prec)
    chk = explicit_sum_check(g, zeros, prec)
    report = {
        "command": "explicit-check",
        "sharpness": args.sharpness,
        "zeros_used": chk.zeros_used,
        "residual": mp.nstr(chk.residual, 10),
        "zero_side": mp.nstr(chk.zero_side, 20),
        "place_side": mp.nstr(chk.place_side, 20),
        "zero_tail_estimate": mp.nstr(chk.zero_tail_estimate, 5),
    }
    if args.out:
        export_report(report, "json", args.out)
    print(json.dumps(report, indent=1))
    return EXIT_OK


def cmd_psi(args) -> int:
    from .explicit import psi_direct, psi_vonmangoldt
    prec = Precision(args.digits)
    zeros = _load_zeros(args, args.count, args.digits, args.cache_dir)
    est = psi_vonmangoldt(mpf(str(args.x)), zeros, prec)
    direct = psi_direct(args.x, prec)
    report = {
        "command": "psi",
        "x": args.x,
        "estimate": mp.nstr(est.value, args.digits),
        "direct": mp.nstr(direct, args.digits),
        "abs_error": mp.nstr(abs(est.value - direct), 6),
        "zeros_used": est.zeros_used,
        "error_scale": mp.nstr(est.error_scale, 6),
    }
    if args.out:
        export_report(report, "json", args.out)
    print(json.dumps(report, indent=1))
    return EXIT_OK


def cmd_pi_riemann(args) -> int:
    from .explicit import pi_riemann
    prec = Precision(args.digits)
    zeros = _load_zeros(args, args.count, args.digits, args.cache_dir)
    est = pi_riemann(args.x, zeros, prec)
    report = {"command": "pi-riemann"}
    report.update(est.report())
    if args.out:
        export_report(report, "json", args.out)
    print(json.dumps(report, indent=1))
    return EXIT_OK


def cmd_prolate(args) -> int:
    from .prolate import chi_eigenvalue, prolate_eigensystem
    prec = Precision(args.digits)
    funcs = prolate_eigensystem(mpf(str(args.lam)), args.nmax, prec)
    records = []
    for f in funcs:
        rec = {
            "lambda": args.lam,
            "n": f.index,
            "diff_eigenvalue": mp.nstr(f.diff_eigenvalue, 20),
        }
        if f.index % 2 == 0:
            chi, res = chi_eigenvalue(f, prec)
            rec["chi"] = mp.nstr(chi, 20)
            rec["residual"] = mp.nstr(res, 5)
        records.append(rec)
    report = {"command": "prolate", "lambda": args.lam, "nmax": args.nmax,
              "digits": args.digits, "records": records}
    if args.out:
        export_report(report, "json", args.out)
    print(json.dumps(report, indent=1))
    return EXIT_OK


def cmd_heat(args) -> int:
    from .heat import heat_trace_asymptotic, heat_trace_direct, optimal_truncation_order
    prec = Precision(args.digits)
    zeros = _load_zeros(args, args.count, args.digits, args.cache_dir)
    rows = []
    for t in args.t:
        direct = heat_trace_direct(mpf(str(t)), zeros, prec)
        opt = optimal_truncation_order(mpf(str(t)), prec)
        kmax = args.kmax if args.kmax is not None else opt
        asym = heat_trace_asymptotic(mpf(str(t)), kmax, prec)
        rows.append([t, mp.nstr(direct.value, 20), mp.nstr(asym.value, 20),
                     mp.nstr(abs(direct.value - asym.value), 6), opt])
    report = {"header": ["t", "direct", "asymptotic", "abs_err", "optimal_k"],
              "rows": rows}
    if args.out:
        export_report(report, "csv", args.out)
    print(json.dumps({"command": "heat", "rows": rows}, indent=1))
    return EXIT_OK


def cmd_equiv(args) -> int:
    from . import arith
    report: dict = {"command": "equiv", "criterion": args.criterion}
    if args.criterion == "lagarias":
        report.update(arith.lagarias_scan(args.max))
    elif args.criterion == "robin":
        report.update(arith.robin_scan(args.max))
    elif args.criterion == "redheffer":
        tables = arith.SieveTables(args.max)
        bad = [n for n in range(1, args.max + 1)
               if arith.redheffer_det(n, tables) != tables.M(n)]
        report.update({"max_n": args.max, "all_match": not bad,
                       "mismatches": bad[:10]})
    elif args.criterion == "li":
        zeros = _load_zeros(args, args.count, 30, args.cache_dir)
        vals = {n: mp.nstr(arith.li_coefficient_partial(n, zeros), 12)
                for n in range(1, args.n + 1)}
        report.update({"partial_sums": vals, "zeros_used": len(zeros)})
    elif args.criterion == "moments":
        out = arith.keating_snaith_constants(args.k, prime_bound=args.prime_bound)
        report.update({"k": args.k, "f_k": str(out["f_k"]), "g_k": out["g_k"],
                       "a_k": mp.nstr(out["a_k"], 15),
                       "a_k_tail_bound": mp.nstr(out["a_k_tail_bound"], 4)})
    else:
        raise DomainError("unknown criterion %r" % args.criterion)
    if args.out:
        export_report(report, "json", args.out)
    print(json.dumps(report, indent=1))
    return EXIT_OK


def cmd_pair_correlation(args) -> int:
    from .arith import gue_integral, pair_correlation
    zeros = import_zeros(args.zeros) if args.zeros else None
    if zeros is None:
        raise DomainError("pair-correlation needs an imported zero table")
    pc = pair_correlation(zeros, args.bins, args.umax)
    rows = [[float(pc.edges[i]), float(pc.edges[i + 1]), float(pc.density[i]),
             float(pc.reference[i])] for i in range(len(pc.density))]
    report = {"header": ["u_lo", "u_hi", "empirical", "gue"], "rows": rows}
    if args.out:
        export_report(report, "csv", args.out)
    summary = {
        "command": "pair-correlation",
        "zeros_used": pc.zeros_used,
        "mass": pc.mass,
        "gue_mass": float(gue_integral(args.umax)),
        "sup_deviation": pc.sup_deviation(),
    }
    print(json.dumps(summary, indent=1))
    return EXIT_OK


# ----------------------------------------------------------------------
# parser and dispatch
# ----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="zetalab",
                                 description="high-precision zeta-zero laboratory")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, digits=60):
        p.add_argument("--config", help="JSON file of option defaults")
        p.add_argument("--digits", type=int, default=digits)
        p.add_argument("--cache-dir", default=None)
        p.add_argument("--threads", type=int, default=1)
        p.add_argument("--out", default=None)

    p = sub.add_parser("xi-zeros", help="reference zeros of the Xi oracle")
    common(p)
    p.add_argument("--count", type=int, default=10)
    p.add_argument("--scheme", default="gauss-legendre",
                   choices=["gauss-legendre", "tanh-sinh"])
    p.set_defaults(fn=cmd_xi_zeros)

    p = sub.add_parser("weil-approx", help="minimal mode of the truncated Weil form")
    common(p, digits=120)
    p.add_argument("--pmax", type=float, default=None,
                   help="support [1, pmax]; lambda = sqrt(pmax)")
    p.add_argument("--lam", "--lambda", dest="lam", type=float, default=None)
    p.add_argument("-N", type=int, default=60)
    p.add_argument("--tmax", type=float, default=None)
    p.add_argument("--count", type=int, default=None,
                   help="number of zeros to keep and compare")
    p.add_argument("--constrained", action="store_true",
                   help="drop pole terms and impose the transform constraint")
    p.add_argument("--csv", default=None)
    p.set_defaults(fn=cmd_weil_approx)

    p = sub.add_parser("explicit-check", help="explicit-formula residual")
    common(p)
    p.add_argument("--zeros", default=None)
    p.add_argument("--count", type=int, default=1000)
    p.add_argument("--sharpness", type=float, default=30000.0,
                   help="a in the bump exp(-a log^2 x)")
    p.set_defaults(fn=cmd_explicit_check)

    p = sub.add_parser("psi", help="Chebyshev psi vs the zero expansion")
    common(p, digits=30)
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--zeros", default=None)
    p.add_argument("--count", type=int, default=2000)
    p.set_defaults(fn=cmd_psi)

    p = sub.add_parser("pi-riemann", help="Riemann's series for pi(x)")
    common(p, digits=30)
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--zeros", default=None)
    p.add_argument("--count", type=int, default=2000)
    p.set_defaults(fn=cmd_pi_riemann)

    p = sub.add_parser("prolate", help="prolate spectra and angle eigenvalues")
    common(p, digits=40)
    p.add_argument("--lam", "--lambda", dest="lam", type=float, default=1.5)
    p.add_argument("--nmax", type=int, default=6)
    p.set_defaults(fn=cmd_prolate)

    p = sub.add_parser("heat", help="heat trace: direct vs asymptotic")
    common(p, digits=30)
    p.add_argument("--t", type=float, nargs="+", default=[0.5, 0.3, 0.2])
    p.add_argument("--kmax", type=int, default=None)
    p.add_argument("--zeros", default=None)
    p.add_argument("--count", type=int, default=2000)
    p.set_defaults(fn=cmd_heat)

    p = sub.add_parser("equiv", help="arithmetic RH criteria")
    common(p, digits=30)
    p.add_argument("criterion",
                   choices=["lagarias", "robin", "redheffer", "li", "moments"])
    p.add_argument("--max", type=int, default=10 ** 6)
    p.add_argument("--n", type=int, default=20)
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--prime-bound", type=int, default=10 ** 5)
    p.add_argument("--zeros", default=None)
    p.add_argument("--count", type=int, default=1000)
    p.set_defaults(fn=cmd_equiv)

    p = sub.add_parser("pair-correlation", help="two-point statistics vs GUE")
    common(p, digits=30)
    p.add_argument("--zeros", required=True)
    p.add_argument("--bins", type=int, default=30)
    p.add_argument("--umax", type=float, default=3.0)
    p.set_defaults(fn=cmd_pair_correlation)
    return ap


def _apply_config(args) -> None:
    path = getattr(args, "config", None)
    if not path:
        return
    try:
        with open(path) as fh:
            conf = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise SystemExit(EXIT_USAGE) from exc
    known = vars(args)
    for key, val in conf.items():
        attr = key.replace("-", "_")
        if attr not in known:
            print("unknown config key %r" % key, file=sys.stderr)
            raise SystemExit(EXIT_USAGE)
        # config fills only options still at their parser default
        parser_default = _PARSER_DEFAULTS.get((args.command, attr))
        if known[attr] == parser_default:
            setattr(args, attr, val)


_PARSER_DEFAULTS: dict = {}


def _collect_defaults(ap: argparse.ArgumentParser) -> None:
    for action in ap._subparsers._group_actions[0].choices.items():  # noqa: SLF001
        name, sp = action
        for act in sp._actions:  # noqa: SLF001
            if act.dest not in ("help",):
                _PARSER_DEFAULTS[(name, act.dest)] = act.default


def main(argv=None) -> int:
    ap = build_parser()
    _collect_defaults(ap)
    args = ap.parse_args(argv)
    try:
        _apply_config(args)
        if args.digits < 30:
            print("digits must be at least 30", file=sys.stderr)
            return EXIT_USAGE
        return args.fn(args)
    except (PrecisionError, ZeroListError, DomainError) as exc:
        print(json.dumps({"error": "invalid input", "detail": str(exc)}),
              file=sys.stderr)
        return EXIT_USAGE
    except (IntegrationError, EigenError, ArithmeticError) as exc:
        print(json.dumps({"error": "numerical failure", "detail": str(exc)}),
              file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
