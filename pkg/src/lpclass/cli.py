"""Command-line interface: ``lpc check|certify|qinf|cn|scan|boundary|ms-verify``.

Exit codes are a stable contract:

    0   Member / success
    1   NotMember
    2   Indeterminate (or an enclosure wider than requested)
    3   incomplete sign-chain certificate
    4   property violation (monotonicity audit, sequence checks)
    5   bisection bracket does not separate Member from NotMember
    6   numerics inconclusive
    7   internal consistency check failed
    64  usage error
    70  unexpected internal error
"""

from __future__ import annotations

import argparse
import enum
import json
import os
import sys
import traceback
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from . import rigor
from .certificates import UsageError, sign_chain
from .membership import (Status, classify, gate_flags, necessary_bound_I, phi_minimum_enclosure,
                         sufficient_bound_H)
from .quotient import ParameterError, QuotientSpec, format_rational
from .realroot import InconsistencyError
from .rigor import MIN_PRECISION, ConfigurationError, DomainError, Inconclusive, RigorousValue
from .scan import (BracketError, ScanRecord, critical_b, default_workers, monotonicity_audit, records_csv,
                   scan_grid)
from .sequences import (czds_sequence, jensen_polynomial, mixed_corpus, multiplier_sequence, one_signed_roots,
                        real_rooted_corpus, run_corpus)
from .theta import compute_cn, compute_qinf

PRECISION_ENV = "LPC_PRECISION"
JENSEN_MAX_DEGREE = 15


class ExitCode(enum.IntEnum):
    OK = 0
    NOT_MEMBER = 1
    INDETERMINATE = 2
    INCOMPLETE = 3
    VIOLATION = 4
    BRACKET = 5
    INCONCLUSIVE = 6
    INCONSISTENT = 7
    USAGE = 64
    INTERNAL = 70


STATUS_EXIT = {Status.MEMBER: ExitCode.OK, Status.NOT_MEMBER: ExitCode.NOT_MEMBER,
               Status.INDETERMINATE: ExitCode.INDETERMINATE}


class CliUsageError(Exception):
    pass


@dataclass(frozen=True)
class CliConfig:
    precision: int = rigor.DEFAULT_PRECISION
    tol: Fraction = Fraction(1, 10**8)
    depth: int = 12
    format: str = "json"
    seed: int = 0
    threads: int = 1
    out: str | None = None

    def __post_init__(self):
        if self.precision < MIN_PRECISION:
            raise CliUsageError(f"precision must be at least {MIN_PRECISION} bits")
        if self.tol <= 0:
            raise CliUsageError("tol must be positive")
        if self.depth < 4 or self.depth % 2:
            raise CliUsageError(f"depth must be even and at least 4, got {self.depth}")
        if self.threads < 1:
            raise CliUsageError("threads must be at least 1")

    @property
    def ladder(self) -> tuple[int, ...]:
        higher = tuple(p for p in rigor.DEFAULT_LADDER if p > self.precision)
        return (self.precision,) + higher


def decimal(text: str) -> Fraction:
    """Exact rational from a decimal literal such as 3.7, 1e-8 or 22/7."""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a decimal number: {text!r}") from None


def grid_range(text: str) -> tuple[Fraction, Fraction, Fraction]:
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected min:max:step, got {text!r}")
    lo, hi, step = (decimal(p) for p in parts)
    if step <= 0 or hi < lo:
        raise argparse.ArgumentTypeError(f"empty or invalid range {text!r}")
    return lo, hi, step


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(ExitCode.USAGE, f"{self.prog}: error: {message}\n")


def _default_precision() -> int:
    raw = os.environ.get(PRECISION_ENV)
    if raw is None:
        return rigor.DEFAULT_PRECISION
    try:
        return int(raw)
    except ValueError:
        raise CliUsageError(f"{PRECISION_ENV} must be an integer, got {raw!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--precision", type=int, default=None, help="working precision in bits")
    common.add_argument("--tol", type=decimal, default=Fraction(1, 10**8), help="bisection tolerance")
    common.add_argument("--depth", type=int, default=12, help="sign-chain depth (even, >= 4)")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--seed", type=int, default=0, help="seed for random polynomial corpora")
    common.add_argument("--threads", type=int, default=None, help="worker processes for scans")
    common.add_argument("--out", metavar="FILE", help="write the result here instead of stdout")

    parser = _Parser(prog="lpc", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("check", parents=[common], help="classify f_{a,b}")
    p.add_argument("a", type=decimal)
    p.add_argument("b", type=decimal)

    p = sub.add_parser("certify", parents=[common], help="build a sign-chain certificate")
    p.add_argument("a", type=decimal)
    p.add_argument("b", type=decimal)

    sub.add_parser("qinf", parents=[common], help="enclose q_inf")

    p = sub.add_parser("cn", parents=[common], help="enclose the section constant c_n")
    p.add_argument("n", type=int)

    p = sub.add_parser("scan", parents=[common], help="classify a parameter grid and audit monotonicity")
    p.add_argument("--a", dest="a_range", type=grid_range, required=True, metavar="MIN:MAX:STEP")
    p.add_argument("--b", dest="b_range", type=grid_range, required=True, metavar="MIN:MAX:STEP")

    p = sub.add_parser("boundary", parents=[common], help="enclose the critical b*(a)")
    p.add_argument("a", type=decimal, nargs="+")

    p = sub.add_parser("ms-verify", parents=[common], help="check the induced MS and CZDS sequences")
    p.add_argument("a", type=decimal)
    p.add_argument("b", type=decimal)
    return parser


def _config(args) -> CliConfig:
    precision = args.precision if args.precision is not None else _default_precision()
    threads = args.threads if args.threads is not None else default_workers()
    return CliConfig(precision, args.tol, args.depth, args.format, args.seed, threads, args.out)


def _spec(a, b) -> QuotientSpec:
    spec = QuotientSpec(a, b)
    if not spec.a < spec.b:
        raise CliUsageError(f"need a < b, got a={format_rational(spec.a)}, b={format_rational(spec.b)}")
    return spec


def _enclosure(x: RigorousValue) -> dict:
    out = x.to_json()
    if out["lo"] == "-inf":
        del out["dec"]  # one-sided: only the upper bound is certified
    return out


def _verdict_report(spec: QuotientSpec, verdict) -> dict:
    minimum = phi_minimum_enclosure(verdict)
    report = {"a": format_rational(spec.a), "b": format_rational(spec.b), "flags": gate_flags(spec).to_json()}
    report.update(verdict.to_json())
    report["min_phi"] = _enclosure(minimum) if minimum is not None else None
    return report


# -- commands --------------------------------------------------------------------

def cmd_check(args, config: CliConfig):
    spec = _spec(args.a, args.b)
    verdict = classify(spec, config.ladder)
    if config.format == "csv":
        return records_csv([ScanRecord(spec.a, spec.b, verdict, gate_flags(spec))]), STATUS_EXIT[verdict.status]
    return _verdict_report(spec, verdict), STATUS_EXIT[verdict.status]


def cmd_certify(args, config: CliConfig):
    spec = _spec(args.a, args.b)
    verdict = classify(spec, config.ladder)
    if verdict.status is not Status.MEMBER:
        return _verdict_report(spec, verdict), STATUS_EXIT[verdict.status]
    certificate = sign_chain(spec, verdict.witness, config.depth, config.precision)
    if not certificate.complete:
        print(f"certificate incomplete; first failing index {certificate.first_failure}", file=sys.stderr)
        return certificate.dumps() + "\n", ExitCode.INCOMPLETE
    return certificate.dumps() + "\n", ExitCode.OK


def _constant_report(name: str, value: RigorousValue, tol: Fraction, **extra) -> tuple[dict, ExitCode]:
    width = rigor.to_fraction(value.upper) - rigor.to_fraction(value.lower)
    report = {name: value.to_json(), "tol": format_rational(tol), "within_tol": width <= tol, **extra}
    return report, ExitCode.OK if width <= tol else ExitCode.INDETERMINATE


def cmd_qinf(args, config: CliConfig):
    return _constant_report("qinf", compute_qinf(config.precision, config.tol), config.tol)


def cmd_cn(args, config: CliConfig):
    if args.n < 2:
        raise CliUsageError("n must be at least 2")
    return _constant_report("cn", compute_cn(args.n, config.precision, config.tol), config.tol, n=args.n)


def cmd_scan(args, config: CliConfig):
    records = scan_grid(args.a_range, args.b_range, ladder=config.ladder, workers=config.threads)
    audit = monotonicity_audit(records)
    code = ExitCode.OK if audit.ok else ExitCode.VIOLATION
    print(f"audit: {audit.checked} pairs checked, {len(audit.violations)} violations", file=sys.stderr)
    if config.format == "csv":
        return records_csv(records), code
    return {"records": [r.row() for r in records], "audit": audit.to_json()}, code


def cmd_boundary(args, config: CliConfig):
    points = []
    for a in args.a:
        point = critical_b(a, config.precision, config.tol, ladder=config.ladder).to_json()
        if 3 <= a < 4:
            point["sufficient_bound_H"] = sufficient_bound_H(a, config.precision).to_json()
            point["necessary_bound_I"] = necessary_bound_I(a, config.precision).to_json()
        points.append(point)
    if config.format == "csv":
        lines = ["a,regime,b_star_lo,b_star_hi,iterations"]
        for p in points:
            star = p.get("b_star", {})
            lines.append(f"{p['a']},{p['regime']},{star.get('lo', '')},{star.get('hi', '')},{p['iterations']}")
        return "\n".join(lines) + "\n", ExitCode.OK
    return {"boundary": points}, ExitCode.OK


def cmd_ms_verify(args, config: CliConfig):
    spec = _spec(args.a, args.b)
    verdict = classify(spec, config.ladder)
    if verdict.status is not Status.MEMBER:
        return _verdict_report(spec, verdict), STATUS_EXIT[verdict.status]
    terms = JENSEN_MAX_DEGREE + 1
    multiplier = multiplier_sequence(spec, terms, config.precision, certified=True)
    zero_decreasing = czds_sequence(spec, terms, config.precision, certified=True)
    jensen = {n: one_signed_roots(jensen_polynomial(multiplier, n)) for n in range(1, terms)}
    ms = run_corpus(multiplier, real_rooted_corpus(config.seed), "ms")
    czds = run_corpus(zero_decreasing, mixed_corpus(config.seed), "czds")
    ok = all(jensen.values()) and ms.passed and czds.passed
    report = {
        "a": format_rational(spec.a), "b": format_rational(spec.b), "seed": config.seed,
        "multiplier_sequence": multiplier.to_json(),
        "jensen_one_signed": {str(n): v for n, v in jensen.items()},
        "ms_corpus": ms.to_json(), "czds_corpus": czds.to_json(), "passed": ok,
    }
    return report, ExitCode.OK if ok else ExitCode.VIOLATION


COMMANDS: dict[str, Callable] = {
    "check": cmd_check, "certify": cmd_certify, "qinf": cmd_qinf, "cn": cmd_cn,
    "scan": cmd_scan, "boundary": cmd_boundary, "ms-verify": cmd_ms_verify,
}


def _emit(payload, config: CliConfig) -> None:
    text = payload if isinstance(payload, str) else json.dumps(payload, sort_keys=True, indent=2) + "\n"
    if config.out:
        with open(config.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:  # --help exits 0, parse errors 64
        return int(exc.code or 0)
    try:
        config = _config(args)
        payload, code = COMMANDS[args.command](args, config)
        _emit(payload, config)
        return int(code)
    except (CliUsageError, UsageError, ParameterError, ConfigurationError, DomainError) as exc:
        print(f"lpc: usage error: {exc}", file=sys.stderr)
        return ExitCode.USAGE
    except BracketError as exc:
        print(f"lpc: bracket error: {exc}", file=sys.stderr)
        return ExitCode.BRACKET
    except Inconclusive as exc:
        print(f"lpc: inconclusive: {exc}", file=sys.stderr)
        return ExitCode.INCONCLUSIVE
    except InconsistencyError as exc:
        print(f"lpc: inconsistency: {exc}", file=sys.stderr)
        return ExitCode.INCONSISTENT
    except Exception:
        traceback.print_exc()
        return ExitCode.INTERNAL


if __name__ == "__main__":
    sys.exit(main())
