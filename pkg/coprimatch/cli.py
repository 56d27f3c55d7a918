"""
Command-line interface for coprimatch.

Exit codes: 0 success, 1 verified negative answer (no coprime matching,
proposition fails, a lonely runner failure, ...), 2 usage or capacity error,
3 internal error (a result failed its own re-validation).
Machine-readable output goes to stdout; logs and progress bars go to stderr.
"""

from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional, TextIO, Tuple
import argparse
import logging
import math
import sys

import pandas as pd

from coprimatch import __version__
from coprimatch.api import (
    gap_witnesses_to_dataframe,
    lemma_reports_to_dataframe,
    runner_verdicts_to_dataframe,
    scan_rows_to_dataframe,
    write_json,
    write_table,
)
from coprimatch.config import OutputFormat, RunConfig
from coprimatch.coprime_matcher import CoprimeMatching, FailureCertificate, find_coprime_matching
from coprimatch.errors import CoprimatchError, InconsistencyError
from coprimatch.intervals import Progression
from coprimatch.jacobsthal import erdos_witness_search, jacobsthal_g
from coprimatch.lemma_lab import (
    LEMMAS,
    LemmaReport,
    coprime_count_lower_bound,
    final_count_check,
    iwaniec_progression_probe,
    iwaniec_window_probe,
    jbound_probe,
    partner_count_check,
    phi_ratio_sum,
    phi_tail_count,
    single_prime_exclusion_check,
    slogmlarge_count,
    smlarge_count,
    zeta_constant_check,
)
from coprimatch.lonely_runner import (
    GridVerdict,
    RunnerInstance,
    bp_regime_scan,
    certified_grid_check,
    check_lonely,
)
from coprimatch.matching import verify_proposition
from coprimatch.number_theory import configure_shared_sieve, format_number, parse_rational
from coprimatch.scan import IntervalScanPipeline, ParityFilter, ScanConfig, parse_lengths


logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_USAGE = 2
EXIT_INTERNAL = 3

# (payload for json/text, table name, DataFrame for csv, trailing csv summary, exit code)
Outcome = Tuple[Any, str, pd.DataFrame, Optional[Dict[str, Any]], int]


def _progression_arg(text: str) -> Progression:
    try:
        return Progression.parse(text)
    except CoprimatchError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _rational_arg(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except CoprimatchError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _global_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--sieve-limit", type=int, default=None,
                        help="size of the factor sieve (default: $COPRIMATCH_SIEVE_LIMIT or 1000000)")
    common.add_argument("--format", dest="output_format", choices=[f.value for f in OutputFormat],
                        default=None, help="output encoding (default json)")
    common.add_argument("--seed", type=int, default=None, help="seed for sampled scans")
    common.add_argument("--workers", type=int, default=None, help="worker processes")
    common.add_argument("--config", default=None, help="YAML file with run settings")
    common.add_argument("--progress", action="store_true", default=None, help="progress bars on stderr")
    common.add_argument("-v", "--verbose", action="count", default=0, help="-v info, -vv debug")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _global_options()
    parser = argparse.ArgumentParser(
        prog="coprimatch",
        description="Coprime matchings of intervals, Hall witnesses and related number-theory checks.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("match", parents=[common], help="coprime matching of two intervals")
    p.add_argument("--left", type=_progression_arg, required=True, help="start:length[:step]")
    p.add_argument("--right", type=_progression_arg, required=True, help="start:length[:step]")
    p.add_argument("--allow-defect", action="store_true",
                   help="return the minimum-defect bijection instead of a certificate")

    p = sub.add_parser("verify-prop", parents=[common], help="2-coprime pair property with witness")
    p.add_argument("--left", type=_progression_arg, required=True)
    p.add_argument("--right", type=_progression_arg, required=True)

    p = sub.add_parser("lemmas", parents=[common], help="exact checks of the counting lemmas")
    p.add_argument("--which", choices=LEMMAS, required=True)
    p.add_argument("--interval", type=_progression_arg, help="I (or J for incl-excl, single-prime, jbound)")
    p.add_argument("--m", type=int, help="parameter m (default: length of the interval)")
    p.add_argument("--t", type=_rational_arg, help="tail threshold t > 1")
    p.add_argument("--s", type=int, help="element s for incl-excl, single-prime, jbound, partners")
    p.add_argument("--prime-bound", type=float, help="prime bound for s0 (default log m)")
    p.add_argument("--q", type=int, help="odd squarefree modulus for iwaniec")
    p.add_argument("--start", type=int, default=1, help="first window start for iwaniec")
    p.add_argument("--prime-limit", type=int, help="prime limit for zeta")
    p.add_argument("--r", type=_rational_arg, help="ratio m/|S| for final")
    p.add_argument("--threshold-exponent", type=float, default=4.0)

    p = sub.add_parser("jacobsthal", parents=[common], help="Jacobsthal function g(k)")
    p.add_argument("--k", type=int, required=True)

    p = sub.add_parser("erdos-scan", parents=[common], help="n with a non-coprime run of length >= log n")
    p.add_argument("--limit", type=int, required=True)

    p = sub.add_parser("runner", parents=[common], help="exact lonely runner check")
    p.add_argument("--v", required=True, help="comma-separated velocities, e.g. 1,2,3")
    p.add_argument("--epsilon", type=_rational_arg, help="use the certified grid with this epsilon")

    p = sub.add_parser("runner-scan", parents=[common], help="lonely runner over v_n <= 2n - gap")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--gap", type=int, required=True)
    p.add_argument("--samples", type=int, help="seeded sample size instead of exhaustive")

    p = sub.add_parser("scan", parents=[common], help="scan all interval pairs in [1, n_max]")
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--length", required=True, help='length list, e.g. "8", "2,4" or "4-12"')
    p.add_argument("--parity", choices=[f.value for f in ParityFilter], default="all")
    p.add_argument("--samples", type=int, help="seeded sample size instead of exhaustive")
    p.add_argument("--max-pairs", type=int, default=2_000_000)

    return parser


def _configure_logging(verbosity: int) -> None:
    level = logging.WARNING
    if verbosity == 1:
        level = logging.INFO
    elif verbosity >= 2:
        level = logging.DEBUG
    logging.basicConfig(
        level=level,
        stream=sys.stderr,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )


def _run_match(args: argparse.Namespace, config: RunConfig) -> Outcome:
    outcome = find_coprime_matching(args.left, args.right, allow_defect=args.allow_defect)
    if isinstance(outcome, FailureCertificate):
        rows = [{"side": "S", "value": v} for v in outcome.S] + [{"side": "T", "value": v} for v in outcome.T]
        return outcome.to_dict(), "certificate", pd.DataFrame(rows, columns=["side", "value"]), None, EXIT_NEGATIVE
    matching: CoprimeMatching = outcome
    rows = [{"left": a, "right": b, "gcd": math.gcd(a, b)} for a, b in matching.pairs]
    df = pd.DataFrame(rows, columns=["left", "right", "gcd"])
    code = EXIT_OK if matching.is_coprime else EXIT_NEGATIVE
    return matching.to_dict(), "match", df, {"defect": matching.defect, "method": matching.method.value}, code


def _run_verify_prop(args: argparse.Namespace, config: RunConfig) -> Outcome:
    verdict = verify_proposition(args.left, args.right)
    payload = verdict.to_dict()
    df = pd.DataFrame(
        [{
            "left": str(verdict.left),
            "right": str(verdict.right),
            "m": verdict.m,
            "holds": verdict.holds,
            "max_cross_value": verdict.max_cross_value,
            "witness_S": " ".join(map(str, verdict.witness_left)),
            "witness_T": " ".join(map(str, verdict.witness_right)),
        }]
    )
    return payload, "verify-prop", df, None, EXIT_OK if verdict.holds else EXIT_NEGATIVE


def _need(args: argparse.Namespace, *names: str) -> None:
    missing = [f"--{name.replace('_', '-')}" for name in names if getattr(args, name) is None]
    if missing:
        raise CoprimatchError(f"--which {args.which} needs {', '.join(missing)}")


def _lemma_report(args: argparse.Namespace) -> LemmaReport:
    which = args.which
    if which == "zeta":
        _need(args, "prime_limit")
        return zeta_constant_check(args.prime_limit).to_report()
    if which == "final":
        _need(args, "m", "r")
        return final_count_check(args.m, args.r)
    if which == "iwaniec":
        _need(args, "q")
        if args.interval is not None:
            return iwaniec_progression_probe(args.q, args.interval).to_report()
        return iwaniec_window_probe(args.q, start=args.start).to_report()

    _need(args, "interval")
    m = args.m if args.m is not None else len(args.interval)
    if which == "smlarge":
        return smlarge_count(args.interval, m, args.threshold_exponent)[1]
    if which == "slogm":
        return slogmlarge_count(args.interval, m)[1]
    if which == "phi":
        return phi_ratio_sum(args.interval, m)[1]
    if which == "tail":
        _need(args, "t")
        return phi_tail_count(args.interval, m, args.t)[1]
    _need(args, "s")
    if which == "incl-excl":
        return coprime_count_lower_bound(args.s, args.interval, m, args.prime_bound)[2]
    if which == "single-prime":
        return single_prime_exclusion_check(args.s, args.interval)
    if which == "partners":
        return partner_count_check(args.s, args.interval)
    return jbound_probe(args.s, args.interval)


def _run_lemmas(args: argparse.Namespace, config: RunConfig) -> Outcome:
    report = _lemma_report(args)
    code = EXIT_OK if report.verdict else EXIT_NEGATIVE
    return report.to_dict(), "lemmas", lemma_reports_to_dataframe([report]), None, code


def _run_jacobsthal(args: argparse.Namespace, config: RunConfig) -> Outcome:
    g = jacobsthal_g(args.k)
    return {"k": args.k, "g": g}, "jacobsthal", pd.DataFrame([{"k": args.k, "g": g}]), None, EXIT_OK


def _run_erdos(args: argparse.Namespace, config: RunConfig) -> Outcome:
    hits = erdos_witness_search(args.limit, workers=config.workers, progress=config.progress)
    payload = {"limit": args.limit, "witnesses": [w.to_dict() for w in hits]}
    return payload, "erdos-scan", gap_witnesses_to_dataframe(hits), None, EXIT_OK


def _run_runner(args: argparse.Namespace, config: RunConfig) -> Outcome:
    instance = RunnerInstance.parse(args.v)
    if args.epsilon is not None:
        result = certified_grid_check(instance, args.epsilon)
        payload = result.to_dict()
        df = pd.DataFrame([payload]).drop(columns=["velocities"]).assign(velocities=str(instance))
        code = EXIT_NEGATIVE if result.verdict is GridVerdict.NOT_LONELY else EXIT_OK
        return payload, "runner-grid", df, None, code
    verdict = check_lonely(instance)
    code = EXIT_OK if verdict.lonely else EXIT_NEGATIVE
    return verdict.to_dict(), "runner", runner_verdicts_to_dataframe([verdict]), None, code


def _run_runner_scan(args: argparse.Namespace, config: RunConfig) -> Outcome:
    report = bp_regime_scan(
        args.n,
        args.gap,
        samples=args.samples,
        seed=config.seed,
        workers=config.workers,
        progress=config.progress,
    )
    payload = report.to_dict()
    summary = {k: v for k, v in payload.items() if k != "failures"}
    df = runner_verdicts_to_dataframe(report.failures)
    return payload, "runner-scan", df, summary, EXIT_OK if report.all_lonely else EXIT_NEGATIVE


def _run_scan(args: argparse.Namespace, config: RunConfig) -> Outcome:
    scan_config = ScanConfig(
        n_max=args.n_max,
        lengths=parse_lengths(args.length),
        parity=ParityFilter(args.parity),
        samples=args.samples,
        seed=config.seed,
        workers=config.workers,
        progress=config.progress,
        max_pairs=args.max_pairs,
    )
    result = IntervalScanPipeline(scan_config).run()
    summary = result.summary.to_dict()
    payload = {"rows": [row.to_dict() for row in result.rows], "summary": summary}
    return payload, "scan", scan_rows_to_dataframe(result.rows), summary, EXIT_OK


HANDLERS: Dict[str, Callable[[argparse.Namespace, RunConfig], Outcome]] = {
    "match": _run_match,
    "verify-prop": _run_verify_prop,
    "lemmas": _run_lemmas,
    "jacobsthal": _run_jacobsthal,
    "erdos-scan": _run_erdos,
    "runner": _run_runner,
    "runner-scan": _run_runner_scan,
    "scan": _run_scan,
}


def _write_text(payload: Any, stream: TextIO, indent: str = "") -> None:
    if isinstance(payload, dict):
        for key in sorted(payload):
            value = payload[key]
            if isinstance(value, (dict, list)) and value:
                stream.write(f"{indent}{key}:\n")
                _write_text(value, stream, indent + "  ")
            else:
                stream.write(f"{indent}{key}: {format_number(value)}\n")
    elif isinstance(payload, list):
        for item in payload:
            if isinstance(item, (dict, list)):
                stream.write(f"{indent}-\n")
                _write_text(item, stream, indent + "  ")
            else:
                stream.write(f"{indent}- {format_number(item)}\n")
    else:
        stream.write(f"{indent}{format_number(payload)}\n")


def emit(outcome: Outcome, output_format: OutputFormat, stream: TextIO) -> None:
    payload, table, df, summary, _ = outcome
    if output_format is OutputFormat.CSV:
        write_table(df, table, stream, summary)
    elif output_format is OutputFormat.TEXT:
        _write_text(payload, stream)
    else:
        write_json(payload, stream)


def run(argv: Optional[List[str]] = None, stdout: Optional[TextIO] = None) -> int:
    """Parse argv, run one subcommand and write its output; returns the exit code."""
    stdout = stdout or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if isinstance(exc.code, int) else EXIT_USAGE

    _configure_logging(args.verbose)
    try:
        config = RunConfig.from_sources(
            args.subcommand,
            args.config,
            {
                "sieve_limit": args.sieve_limit,
                "output_format": args.output_format,
                "seed": args.seed,
                "workers": args.workers,
                "progress": args.progress,
            },
        )
        configure_shared_sieve(config.sieve_limit)
        outcome = HANDLERS[args.subcommand](args, config)
    except InconsistencyError as exc:
        logger.error(f"Internal consistency check failed in {args.subcommand}: {exc}")
        print(f"coprimatch {args.subcommand}: internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except (CoprimatchError, ValueError, OSError) as exc:
        print(f"coprimatch {args.subcommand}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    emit(outcome, config.output_format, stdout)
    return outcome[-1]


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
