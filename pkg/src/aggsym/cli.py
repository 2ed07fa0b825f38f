"""Command-line interface: analyze, build, compress, decompress, bench.

Exit codes: 0 success, 1 usage, 2 I/O, 3 format, capacity or verification.
"""

from __future__ import annotations

import argparse
import logging
import sys
import time
from pathlib import Path

from . import __version__
from .builder import BuildConfig, build, default_threads
from .container import compress_with_stats, decompress
from .exceptions import AggsymError
from .symbols import Alphabet
from .tokenizer import tokenize_base
from .report import (SUMMARY_COLUMNS, RunReport, bench_json, steps_csv, to_csv,
                     to_json)

logger = logging.getLogger("aggsym")

EXIT_OK, EXIT_USAGE, EXIT_IO, EXIT_FORMAT = 0, 1, 2, 3
VERIFY_TOLERANCE = 1e-6


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


class VerificationError(AggsymError):
    pass


def _non_negative_int(text):
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return value


def _positive_int(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="aggsym", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="count", default=0)

    search = _Parser(add_help=False)
    search.add_argument("--max-symbols", type=_non_negative_int, default=None,
                        help="maximum number of aggregate symbols (default: unbounded)")
    search.add_argument("--stop-bpc", type=float, default=None,
                        help="stop once total bits per character is at or below this")
    search.add_argument("--min-net-gain", type=float, default=0.0,
                        help="bits a symbol must gain beyond its header cost")
    search.add_argument("--threads", type=_positive_int, default=None,
                        help="candidate scoring threads (default: all cores)")
    search.add_argument("--verify", action="store_true",
                        help="cross-check every accepted gain against a brute-force recount")

    output = _Parser(add_help=False)
    output.add_argument("--report", type=Path, default=None, help="write the report here")
    output.add_argument("--format", choices=("json", "csv"), default=None,
                        help="report format (default: json, or from the --report suffix)")

    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    p = sub.add_parser("analyze", parents=[output], help="base-alphabet statistics")
    p.add_argument("file", type=Path)
    p = sub.add_parser("build", parents=[search, output], help="construct the aggregate alphabet")
    p.add_argument("file", type=Path)
    p = sub.add_parser("compress", parents=[search, output], help="write an AGSY container")
    p.add_argument("input", type=Path)
    p.add_argument("output", type=Path)
    p = sub.add_parser("decompress", help="restore the original bytes")
    p.add_argument("input", type=Path)
    p.add_argument("output", type=Path)
    p = sub.add_parser("bench", parents=[search, output], help="run build on every file of a directory")
    p.add_argument("directory", type=Path)
    return parser


def _config(args) -> BuildConfig:
    return BuildConfig(
        max_aggregates=args.max_symbols,
        min_net_gain_bits=args.min_net_gain,
        stop_at_bpc=args.stop_bpc,
        threads=args.threads or default_threads(),
        verify=args.verify,
    )


def _run(path: Path, config: BuildConfig):
    data = path.read_bytes()
    start = time.perf_counter()
    blob, stats, result = compress_with_stats(data, config)
    report = RunReport.from_build(str(path), result, stats, time.perf_counter() - start)
    if config.verify and (result.max_oracle_deviation or 0.0) > VERIFY_TOLERANCE:
        raise VerificationError(
            f"gain verification failed: max relative deviation "
            f"{result.max_oracle_deviation:.3e} > {VERIFY_TOLERANCE:g}")
    return blob, report


def _format(args) -> str:
    if args.format:
        return args.format
    if args.report is not None and args.report.suffix.lower() == ".csv":
        return "csv"
    return "json"


def _emit(args, text: str) -> None:
    if args.report is None:
        sys.stdout.write(text)
    else:
        args.report.write_text(text)


def _summary(report: RunReport) -> str:
    i, f = report.initial, report.final
    lines = [
        f"{report.input_path}: {report.input_bytes} bytes, "
        f"{report.base_alphabet_size} base symbols ({i.get('distinct_symbols', 0)} used)",
        f"  initial: header {i['header_bits']} bits "
        f"({i['header_bits_excluding_agcount']} excl. AGCOUNT), "
        f"message {i['message_bits']:.4f} bits, "
        f"{i['bpc_message']:.4f} / {i['bpc_total']:.4f} bpc",
    ]
    if report.steps or "container_bits" in f:
        lines.append(
            f"  final:   {f['agcount']} aggregates, header {f['header_bits']} bits, "
            f"message {f['message_bits']:.4f} bits, "
            f"{f['bpc_message']:.4f} / {f['bpc_total']:.4f} bpc")
    if "container_bits" in f:
        lines.append(f"  container {f['container_bits']} bits "
                     f"(payload {f['payload_bits']}, framing {f['framing_bits']})")
    if report.max_oracle_deviation is not None:
        lines.append(f"  verify: max relative deviation {report.max_oracle_deviation:.3e}")
    return "\n".join(lines) + "\n"


def _report_text(args, report: RunReport, steps=True) -> str:
    if _format(args) == "csv":
        if steps:
            return steps_csv(report)
        return to_csv([report.summary_row()], SUMMARY_COLUMNS)
    return to_json(report.to_dict())


def cmd_analyze(args) -> int:
    data = args.file.read_bytes()
    start = time.perf_counter()
    alphabet = Alphabet.for_document(data)
    result = build(tokenize_base(data, alphabet), alphabet, BuildConfig(max_aggregates=0))
    report = RunReport.from_build(str(args.file), result, seconds=time.perf_counter() - start)
    if args.report is None and args.format is None:
        sys.stdout.write(_summary(report))
    else:
        _emit(args, _report_text(args, report, steps=False))
    return EXIT_OK


def cmd_build(args) -> int:
    _, report = _run(args.file, _config(args))
    if args.report is None and args.format is None:
        sys.stdout.write(_summary(report))
    else:
        _emit(args, _report_text(args, report))
    return EXIT_OK


def cmd_compress(args) -> int:
    blob, report = _run(args.input, _config(args))
    args.output.write_bytes(blob)
    if args.report is not None:
        _emit(args, _report_text(args, report))
    else:
        sys.stdout.write(_summary(report))
    return EXIT_OK


def cmd_decompress(args) -> int:
    args.output.write_bytes(decompress(args.input.read_bytes()))
    return EXIT_OK


def cmd_bench(args) -> int:
    if not args.directory.is_dir():
        raise FileNotFoundError(f"not a directory: {args.directory}")
    config = _config(args)
    reports = []
    for path in sorted(p for p in args.directory.iterdir() if p.is_file()):
        try:
            _, report = _run(path, config)
        except OSError as exc:
            logger.warning("skipping %s: %s", path, exc)
            continue
        reports.append(report)
    if _format(args) == "csv":
        text = to_csv([r.summary_row() for r in reports], SUMMARY_COLUMNS)
    else:
        text = to_json(bench_json(reports))
    _emit(args, text)
    return EXIT_OK


COMMANDS = {
    "analyze": cmd_analyze,
    "build": cmd_build,
    "compress": cmd_compress,
    "decompress": cmd_decompress,
    "bench": cmd_bench,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2),
                        format="%(levelname)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except OSError as exc:
        logger.error("%s", exc)
        return EXIT_IO
    except AggsymError as exc:
        logger.error("%s", exc)
        return EXIT_FORMAT


if __name__ == "__main__":
    sys.exit(main())
