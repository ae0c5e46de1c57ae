"""
Entry point for sandpile-staircase.
Can be run as: python -m sandpile_staircase
"""

import argparse
import logging
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from itertools import islice

from sandpile_staircase import __version__
from sandpile_staircase.config import LIST_FORMATS, Config, setup_logging
from sandpile_staircase.enumeration.counting import CountTable
from sandpile_staircase.enumeration.generation import GenStats, generate_spm_width, iter_reduced, iter_spm
from sandpile_staircase.enumeration.sampling import sample_spm, uniformity_pvalue
from sandpile_staircase.errors import InvalidConfiguration, InvalidStep, SandpileError
from sandpile_staircase.ipm.basis import ipm_expand, ipm_reduce
from sandpile_staircase.ipm.decompose import ipm_decompose_full
from sandpile_staircase.ipm.enumerate import IpmCountTable, ipm_generate, iter_ipm, iter_ipm_reduced
from sandpile_staircase.model.configuration import Configuration
from sandpile_staircase.model.patterns import is_valid_ipm, is_valid_spm
from sandpile_staircase.oracle.bfs import bfs_ipm, bfs_spm, iter_partitions
from sandpile_staircase.records import OutputRecord, format_sequence, parse_parts, parse_sequence
from sandpile_staircase.structure.decompose import decompose_full
from sandpile_staircase.structure.genseq import generating_sequence, verify_sequence
from sandpile_staircase.structure.staircase import fiber_widths, reduce, socle_weight

logger = logging.getLogger(__name__)

EXIT_FAILURE = 1
EXIT_REJECTED = 2

UNIFORMITY_N = 12
UNIFORMITY_ALPHA = 0.001


def _non_negative(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {value}")
    return value


def _positive(text: str) -> int:
    value = _non_negative(text)
    if value == 0:
        raise argparse.ArgumentTypeError("expected a positive integer, got 0")
    return value


def _spm_table(n: int, config: Config) -> CountTable:
    return CountTable(n, max_capacity=config.count_table_max_n)


def _ipm_table(n: int, k: int, config: Config) -> IpmCountTable:
    return IpmCountTable(k, n, max_capacity=config.count_table_max_n)


def cmd_count(args, config: Config) -> int:
    """Print |SPM(n)| or |IPM_k(n)|, optionally split by staircase width."""
    if args.k is None:
        table = _spm_table(args.n, config)
        if args.by_width:
            for w, count in table.fiber_counts(args.n).items():
                print(f"{w} {count}")
        else:
            print(table.count_spm(args.n))
    else:
        table = _ipm_table(args.n, args.k, config)
        if args.by_width:
            for basis, count in table.basis_counts(args.n).items():
                print(f"{basis.w},{basis.l} {count}")
        else:
            print(table.count(args.n))
    return 0


def _spm_records(n: int):
    if n == 0:
        yield OutputRecord(Configuration(), width=0)
        return
    for w in fiber_widths(n):
        for frame in iter_reduced(n - socle_weight(w), w):
            yield OutputRecord(frame.configuration(), width=w)


def _ipm_records(n: int, k: int, table: IpmCountTable):
    if n == 0:
        yield OutputRecord(Configuration(), width=0)
        return
    for r in iter_ipm_reduced(n, k, table=table):
        yield OutputRecord(ipm_expand(r), basis=r.basis)


def cmd_list(args, config: Config) -> int:
    """Stream every configuration, one per line."""
    fmt = args.format or config.list_format
    if args.k is None:
        records = _spm_records(args.n)
    else:
        records = _ipm_records(args.n, args.k, _ipm_table(args.n, args.k, config))
    if args.limit is not None:
        records = islice(records, args.limit)
    emitted = 0
    for record in records:
        print(record.to_json() if fmt == "json" else str(record.parts))
        emitted += 1
    logger.info(f"listed {emitted} configurations for n={args.n}")
    return 0


def cmd_random(args, config: Config) -> int:
    """Print uniformly drawn configurations of SPM(n)."""
    seed = config.random_seed if args.seed is None else args.seed
    for c in sample_spm(args.n, args.count, seed, _spm_table(args.n, config)):
        print(c)
    return 0


def cmd_validate(args, config: Config) -> int:
    """Check a configuration against the forbidden patterns."""
    c = parse_parts(args.config)
    report = is_valid_spm(c) if args.k is None else is_valid_ipm(c, args.k)
    print(report)
    return 0 if report else EXIT_REJECTED


def cmd_decompose(args, config: Config) -> int:
    """Print the decomposition of a configuration's reduced form, outermost level first."""
    c = parse_parts(args.config)
    try:
        if args.k is None:
            steps = decompose_full(reduce(c)).steps
        else:
            steps = ipm_decompose_full(ipm_reduce(c, args.k))
    except InvalidConfiguration as e:
        print(f"rejected: {e}", file=sys.stderr)
        return EXIT_REJECTED
    for step in steps:
        print(step)
    return 0


def cmd_path(args, config: Config) -> int:
    """Print the canonical generating sequence of a configuration."""
    c = parse_parts(args.config)
    try:
        seq = generating_sequence(c)
    except InvalidConfiguration as e:
        print(f"rejected: {e}", file=sys.stderr)
        return EXIT_REJECTED
    print(format_sequence(seq))
    return 0


def cmd_replay(args, config: Config) -> int:
    """Apply a generating sequence to (n) and print the result."""
    seq = parse_sequence(args.seq)
    try:
        c = verify_sequence(args.n, seq)
    except InvalidStep as e:
        print(f"rejected: {e}", file=sys.stderr)
        return EXIT_REJECTED
    print(c)
    return 0


def _bench_fiber(n: int, w: int) -> GenStats:
    return generate_spm_width(n, w, lambda c: None)


def cmd_bench(args, config: Config) -> int:
    """Run the generator with a no-op visitor and report its counters."""
    workers = args.workers or config.bench_workers
    started = time.perf_counter()
    if args.k is not None:
        stats = ipm_generate(args.n, args.k, lambda c: None, table=_ipm_table(args.n, args.k, config))
    elif args.n == 0:
        stats = _bench_fiber(0, 0)
    else:
        widths = list(fiber_widths(args.n))
        stats = GenStats()
        if workers > 1:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                for fiber in pool.map(_bench_fiber, [args.n] * len(widths), widths):
                    stats = stats.merge(fiber)
        else:
            for w in widths:
                stats = stats.merge(_bench_fiber(args.n, w))
    elapsed = time.perf_counter() - started
    print(f"objects {stats.emitted}")
    print(f"nodes {stats.nodes}")
    print(f"nodes/object {stats.nodes_per_object:.4f}")
    print(f"work/object {stats.work_per_object:.4f}")
    print(f"wall time {elapsed:.3f}s")
    return 0


def _first_divergence(n: int, k: int | None, config: Config, spm: CountTable | None, ipm: IpmCountTable | None):
    """Compare counting, generation and the pattern checks with the oracle at n."""
    if k is None:
        oracle = bfs_spm(n, keep_edges=False, max_n=config.oracle_max_n)
        counted = spm.count_spm(n)
        generated = list(iter_spm(n))
        passing = {c for c in iter_partitions(n) if is_valid_spm(c)}
    else:
        oracle = bfs_ipm(n, k, keep_edges=False, max_n=config.oracle_max_n)
        counted = ipm.count(n)
        generated = list(iter_ipm(n, k, table=ipm))
        passing = {c for c in iter_partitions(n) if is_valid_ipm(c, k)}
    if counted != len(oracle):
        return f"count {counted} != oracle {len(oracle)}"
    unique = set(generated)
    if len(unique) != len(generated):
        return f"generator emitted {len(generated) - len(unique)} duplicates"
    if unique != oracle.members:
        missing = sorted(str(c) for c in oracle.members - unique)[:3]
        extra = sorted(str(c) for c in unique - oracle.members)[:3]
        return f"generated set differs from oracle: missing {missing}, extra {extra}"
    if passing != oracle.members:
        wrong = sorted(str(c) for c in passing ^ oracle.members)[:3]
        return f"pattern check disagrees with oracle on {wrong}"
    return None


def cmd_check(args, config: Config) -> int:
    """Cross-check the library against the brute-force oracle for n = 0..max-n."""
    spm = _spm_table(args.max_n, config) if args.k is None else None
    ipm = _ipm_table(args.max_n, args.k, config) if args.k is not None else None
    model = "SPM" if args.k is None else f"IPM_{args.k}"
    for n in range(args.max_n + 1):
        divergence = _first_divergence(n, args.k, config, spm, ipm)
        if divergence:
            print(f"divergence in {model}({n}): {divergence}", file=sys.stderr)
            return EXIT_REJECTED
        logger.info(f"{model}({n}) agrees with the oracle")
    if args.uniformity and args.k is None:
        n = min(UNIFORMITY_N, args.max_n)
        table = _spm_table(n, config)
        samples = sample_spm(n, 100 * table.count_spm(n), config.random_seed, table)
        pvalue = uniformity_pvalue(n, samples, table)
        if pvalue <= UNIFORMITY_ALPHA:
            print(f"divergence in SPM({n}): uniformity p-value {pvalue:.3g}", file=sys.stderr)
            return EXIT_REJECTED
        print(f"uniformity SPM({n}) p={pvalue:.3g}")
    print(f"ok: {model}(n) agrees with the oracle for n <= {args.max_n}")
    return 0


class CliParser(argparse.ArgumentParser):
    """Argument parser that reports malformed input with exit status 1."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_FAILURE, f"{self.prog}: error: {message}\n")


COMMANDS = {
    "count": cmd_count,
    "list": cmd_list,
    "random": cmd_random,
    "validate": cmd_validate,
    "decompose": cmd_decompose,
    "path": cmd_path,
    "replay": cmd_replay,
    "bench": cmd_bench,
    "check": cmd_check,
}


def _build_parser() -> argparse.ArgumentParser:
    parser = CliParser(
        prog="sandpile-staircase",
        description="Count, generate, sample and verify sand pile and ice pile configurations.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")

    subparsers = parser.add_subparsers(dest="command", help="Available commands")

    p = subparsers.add_parser("count", help="Print |SPM(n)| or |IPM_k(n)|")
    p.add_argument("--n", type=_non_negative, required=True)
    p.add_argument("--k", type=_positive)
    p.add_argument("--by-width", action="store_true", help="One line per staircase width")

    p = subparsers.add_parser("list", help="Stream every configuration")
    p.add_argument("--n", type=_non_negative, required=True)
    p.add_argument("--k", type=_positive)
    p.add_argument("--format", choices=LIST_FORMATS)
    p.add_argument("--limit", type=_non_negative)

    p = subparsers.add_parser("random", help="Draw uniform configurations of SPM(n)")
    p.add_argument("--n", type=_non_negative, required=True)
    p.add_argument("--seed", type=_non_negative)
    p.add_argument("--count", type=_non_negative, default=1)

    p = subparsers.add_parser("validate", help="Check a configuration against the forbidden patterns")
    p.add_argument("--config", required=True, help='Comma-separated parts, e.g. "6,6,3,3,1,1"')
    p.add_argument("--k", type=_positive)

    p = subparsers.add_parser("decompose", help="Print the reduced-form decomposition")
    p.add_argument("--config", required=True)
    p.add_argument("--k", type=_positive)

    p = subparsers.add_parser("path", help="Print a generating sequence")
    p.add_argument("--config", required=True)

    p = subparsers.add_parser("replay", help="Apply a generating sequence to (n)")
    p.add_argument("--n", type=_non_negative, required=True)
    p.add_argument("--seq", required=True, help='Comma-separated columns, e.g. "0,0,1"')

    p = subparsers.add_parser("bench", help="Measure the generator")
    p.add_argument("--n", type=_non_negative, required=True)
    p.add_argument("--k", type=_positive)
    p.add_argument("--workers", type=_positive)

    p = subparsers.add_parser("check", help="Cross-check against the brute-force oracle")
    p.add_argument("--max-n", type=_non_negative, required=True)
    p.add_argument("--k", type=_positive)
    p.add_argument("--uniformity", action="store_true", help="Also run the chi-square sampling check")

    return parser


def main():
    """CLI entry point."""
    parser = _build_parser()
    args = parser.parse_args()

    if args.command is None:
        parser.print_help()
        sys.exit(EXIT_FAILURE)

    try:
        config = Config()
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        sys.exit(EXIT_FAILURE)
    setup_logging(config)
    logger.info(f"sandpile-staircase v{__version__}: {args.command}")

    try:
        code = COMMANDS[args.command](args, config)
    except (SandpileError, ValueError, RuntimeError) as e:
        print(f"error: {e}", file=sys.stderr)
        sys.exit(EXIT_FAILURE)
    if code:
        sys.exit(code)


if __name__ == "__main__":
    main()
