"""Command-line entry point.

    sigsim run       run the study, write report.csv / report.md / PGM images
    sigsim ttest     two-sample t-test on two files of numbers
    sigsim critical  critical mean separation for a list of group sizes

Exit codes: 0 ok, 2 bad arguments or data, 3 I/O failure, 4 numeric failure.
"""

import argparse
import logging
import os
import sys

from . import __version__
from .errors import DomainError, InsufficientDataError
from .imaging import RenderScale, compose_pair, encode_pgm, render_pair
from .report import critical_csv, report_csv, report_markdown, ttest_csv_line
from .simlab import (
    DEFAULT_SEED,
    DEFAULT_SIZES,
    SimulationConfig,
    StudyError,
    regenerate_pair,
    run_study,
)
from .ttest import TESTS, critical_separation

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_NUMERIC = 4

SEPARATOR_WIDTH = 4


class UsageError(Exception):
    pass


def _size_list(text):
    try:
        sizes = tuple(int(tok) for tok in text.split(",") if tok.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")
    if not sizes:
        raise argparse.ArgumentTypeError("size list is empty")
    return sizes


def _positive_int(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    return value


def build_parser():
    parser = argparse.ArgumentParser(
        prog="sigsim",
        description="How much separation does p < 0.05 need? A Monte Carlo look.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="log per-size progress")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run the full study")
    run.add_argument("--sizes", type=_size_list, default=DEFAULT_SIZES,
                     help="comma-separated group sizes, each a perfect square >= 4")
    run.add_argument("--trials", type=_positive_int, default=1000, help="pairs per size")
    run.add_argument("--alpha", type=float, default=0.05)
    run.add_argument("--seed", type=int, default=DEFAULT_SEED, help="master seed (64-bit)")
    run.add_argument("--out", default="sigsim-out", help="output directory")
    run.add_argument("--test", choices=sorted(TESTS), default="pooled")
    run.add_argument("--no-images", action="store_true", help="skip PGM output")
    run.add_argument("--mean", type=float, default=0.0, help="generator mean")
    run.add_argument("--sd", type=float, default=1.0, help="generator standard deviation")
    run.add_argument("--threads", type=_positive_int, default=1,
                     help="worker threads; output is identical for any value")

    tt = sub.add_parser("ttest", help="two-sample t-test on two files of numbers")
    tt.add_argument("file_a")
    tt.add_argument("file_b")
    tt.add_argument("--alpha", type=float, default=0.05)
    tt.add_argument("--test", choices=sorted(TESTS), default="pooled")

    crit = sub.add_parser("critical", help="critical mean separation per group size")
    crit.add_argument("--sizes", type=_size_list, default=DEFAULT_SIZES)
    crit.add_argument("--sd", type=float, default=1.0)
    crit.add_argument("--alpha", type=float, default=0.05)
    return parser


def _atomic_write_all(out_dir, files):
    """Write every file to a temp name first, then rename them all into place."""
    os.makedirs(out_dir, exist_ok=True)
    staged = []
    try:
        for name, data in files.items():
            tmp = os.path.join(out_dir, f".{name}.{os.getpid()}.tmp")
            staged.append((tmp, os.path.join(out_dir, name)))
            with open(tmp, "wb") as fh:
                fh.write(data)
    except BaseException:
        for tmp, _ in staged:
            try:
                os.unlink(tmp)
            except OSError:
                pass
        raise
    for tmp, final in staged:
        os.replace(tmp, final)


def _image_files(report):
    config = report.config
    scale = RenderScale.for_generator(config.gen_mean, config.gen_sd)
    files = {}
    for size_index, s in enumerate(report.summaries):
        if s.selected_trial is None:
            continue
        a, b = regenerate_pair(config, size_index, s.selected_trial)
        left, right = render_pair(a, b, s.width, s.height, scale)
        files[f"size_{s.size}_left.pgm"] = encode_pgm(left)
        files[f"size_{s.size}_right.pgm"] = encode_pgm(right)
        files[f"size_{s.size}_pair.pgm"] = encode_pgm(compose_pair(left, right, SEPARATOR_WIDTH))
    return files


def cmd_run(args):
    try:
        config = SimulationConfig(
            sizes=args.sizes,
            trials_per_size=args.trials,
            alpha=args.alpha,
            master_seed=args.seed,
            gen_mean=args.mean,
            gen_sd=args.sd,
            test_kind=args.test,
        )
    except DomainError as exc:
        raise UsageError(str(exc))
    report = run_study(config, threads=args.threads)
    markdown = report_markdown(report)
    files = {
        "report.csv": report_csv(report).encode("utf-8"),
        "report.md": markdown.encode("utf-8"),
    }
    if not args.no_images:
        files.update(_image_files(report))
    _atomic_write_all(args.out, files)
    sys.stdout.write(markdown)
    return EXIT_OK


def read_numbers(path):
    """Newline-separated decimals; blank lines are skipped."""
    with open(path, encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    values = []
    for lineno, line in enumerate(lines, 1):
        if not line.strip():
            continue
        try:
            values.append(float(line))
        except ValueError:
            raise UsageError(f"{path}:{lineno}: not a number: {line.strip()!r}")
    if len(values) < 2:
        raise UsageError(f"{path}: need at least 2 values, found {len(values)}")
    return values


def cmd_ttest(args):
    a = read_numbers(args.file_a)
    b = read_numbers(args.file_b)
    try:
        outcome = TESTS[args.test](a, b, args.alpha)
    except (DomainError, InsufficientDataError, ValueError) as exc:
        raise UsageError(str(exc))
    sys.stdout.write(ttest_csv_line(outcome))
    return EXIT_OK


def cmd_critical(args):
    try:
        rows = [(n, critical_separation(n, args.sd, args.alpha)) for n in args.sizes]
    except DomainError as exc:
        raise UsageError(str(exc))
    sys.stdout.write(critical_csv(rows))
    return EXIT_OK


COMMANDS = {"run": cmd_run, "ttest": cmd_ttest, "critical": cmd_critical}


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code
    if args.verbose:
        logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"sigsim: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"sigsim: i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ArithmeticError, StudyError) as exc:
        print(f"sigsim: numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
