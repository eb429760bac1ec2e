"""Command-line front end.

Exit codes: 0 all checks pass, 1 a check failed, 2 an exact identity failed
while tabulating sequences, 64 usage error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from typing import Sequence

import mpmath

from . import __version__, exact_sequences as seq, qseries
from .context import to_mpf
from .suite import FORMATS, SUITES, RunConfig, digits_of_agreement, run_suite, constant_estimates

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_EXACT_FAILED = 2
EXIT_USAGE = 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # noqa: D401 - argparse hook
        raise UsageError(message)


SERIES = {
    "xi": qseries.xi_series,
    "A": qseries.a_series,
    "g": qseries.g_series,
    "phi": qseries.phi_series,
    "E": qseries.e_series,
}


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--n-max", type=int, default=None)
    common.add_argument("--trunc", type=int, default=None,
                        help="series order (default 50 for exact, 400 for analytic checks)")
    common.add_argument("--precision-bits", type=int, default=256)
    common.add_argument("--tol-digits", type=int, default=25)
    common.add_argument("--format", choices=FORMATS, default=None)
    common.add_argument("--suite", choices=SUITES, default="all")
    common.add_argument("--out", default=None, help="write output here instead of stdout")

    parser = _Parser(prog="dombzeta", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True
    sub.add_parser("sequences", parents=[common], help="tabulate D_n, B_n and the Wronskian")
    sub.add_parser("verify", parents=[common], help="run the verification suites")
    sub.add_parser("constants", parents=[common], help="headline constants vs converged estimates")
    p = sub.add_parser("series", parents=[common], help="dump exact q-series coefficients as JSON")
    p.add_argument("name", choices=sorted(SERIES))
    return parser


def _config(args: argparse.Namespace, n_max_default: int) -> RunConfig:
    try:
        return RunConfig(
            n_max=n_max_default if args.n_max is None else args.n_max,
            trunc=args.trunc,
            precision_bits=args.precision_bits,
            tol_digits=args.tol_digits,
            format=args.format,
            suite=args.suite,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def cmd_sequences(config: RunConfig) -> tuple[str, int]:
    table = seq.build_table(config.n_max)
    digits = max(config.tol_digits, 10)
    rows = []
    failed = False
    with mpmath.workprec(config.precision_bits):
        for n in range(config.n_max + 1):
            ok = seq.wronskian(table, n).holds if n >= 1 else True
            failed |= not ok
            ratio = mpmath.nstr(to_mpf(table.b[n] / table.d[n]), digits)
            rows.append({"n": n, "D_n": str(table.d[n]), "B_n": str(table.b[n]),
                         "B_n/D_n": ratio, "wronskian": "ok" if ok else "FAIL"})
    fmt = config.format or "csv"
    if fmt == "json":
        text = json.dumps(rows, indent=1) + "\n"
    elif fmt == "csv":
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
        text = buf.getvalue()
    else:
        text = "".join(f"{r['n']:>4}  D={r['D_n']}  B={r['B_n']}  B/D={r['B_n/D_n']}  W:{r['wronskian']}\n"
                       for r in rows)
    return text, EXIT_EXACT_FAILED if failed else EXIT_OK


def verify_report(config: RunConfig) -> dict:
    checks = run_suite(config)
    digits = config.precision().dps
    passed = sum(c.passed for c in checks)
    return {
        "version": __version__,
        "config": config.to_json(),
        "checks": [c.to_json(digits) for c in checks],
        "summary": {"pass": passed, "fail": len(checks) - passed},
    }


def cmd_verify(config: RunConfig) -> tuple[str, int]:
    report = verify_report(config)
    code = EXIT_OK if report["summary"]["fail"] == 0 else EXIT_CHECK_FAILED
    fmt = config.format or "json"
    if fmt == "json":
        return json.dumps(report, indent=1) + "\n", code
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["check_id", "status", "residual", "tolerance", "params"])
        for c in report["checks"]:
            writer.writerow([c["check_id"], c["status"], c["residual"], c["tolerance"],
                             json.dumps(c["params"], sort_keys=True)])
        return buf.getvalue(), code
    lines = []
    for c in report["checks"]:
        params = " ".join(f"{k}={v}" for k, v in c["params"].items())
        res = c["residual"]
        if res is not None and not c["exact"]:
            res = mpmath.nstr(mpmath.mpf(res), 3)
        lines.append(f"{c['status'].upper():4}  {c['check_id']:<44} {params:<18} residual={res}"
                     + (f"  ({c['message']})" if c.get("message") else ""))
    s = report["summary"]
    lines.append(f"{s['pass']} passed, {s['fail']} failed")
    return "\n".join(lines) + "\n", code


def cmd_constants(config: RunConfig) -> tuple[str, int]:
    ctx = config.precision()
    table = seq.build_table(config.n_max)
    labels = {"apery_limit": "7/24*zeta(3)", "domb_sum": "56/3*zeta(3)", "pcf_value": "12/(7*zeta(3))"}
    entries = []
    with ctx.workprec():
        for key, (est, closed) in constant_estimates(table, ctx).items():
            entries.append({
                "name": key,
                "closed_form": labels[key],
                "value": mpmath.nstr(closed, config.tol_digits),
                "estimate": mpmath.nstr(est, config.tol_digits),
                "digits_agreement": digits_of_agreement(est, closed, ctx.dps),
            })
    if (config.format or "text") == "json":
        return json.dumps({"n_max": config.n_max, "constants": entries}, indent=1) + "\n", EXIT_OK
    lines = [f"{e['closed_form']:<15} = {e['value']}\n{'':<15}   {e['estimate']}  "
             f"(n={config.n_max}, {e['digits_agreement']} digits)" for e in entries]
    return "\n".join(lines) + "\n", EXIT_OK


def cmd_series(config: RunConfig, name: str) -> tuple[str, int]:
    s = SERIES[name](config.exact_trunc)
    return json.dumps({"name": name, **s.to_json()}) + "\n", EXIT_OK


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        config = _config(args, RunConfig.n_max)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"dombzeta: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.command == "sequences":
        text, code = cmd_sequences(config)
    elif args.command == "verify":
        text, code = cmd_verify(config)
    elif args.command == "constants":
        text, code = cmd_constants(config)
    else:
        text, code = cmd_series(config, args.name)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
