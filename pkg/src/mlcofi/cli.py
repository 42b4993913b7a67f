"""Command-line driver.

Commands: ``mine`` (levels, itemsets, rules), ``confirm`` (candidate
rules) and ``oracle`` (brute-force reference only).

Exit status: 0 success, 2 invalid configuration or input, 3 I/O error,
4 disagreement with the reference under ``--verify``.
"""
from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import dataclass

from .exceptions import ItemNotFoundError, MiningError, ParseError, VerificationError
from .hierarchy import read_hierarchy
from .miner import LevelResult, LevelThresholds, mine_all
from .oracle import first_difference, reference_levels
from .report import confirmed_text, itemsets_text, results_json, rules_text, stats_text
from .rules import build_level_trees, confirm_rules, generate_rules, read_rules
from .transactions import ingest, read_transactions
from .utils.validation import check_fraction_list

logger = logging.getLogger("mlcofi")

EXIT_OK, EXIT_CONFIG, EXIT_IO, EXIT_VERIFY = 0, 2, 3, 4


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    hierarchy: str
    transactions: str
    minsup: list
    minconf: list
    output: str | None = None
    format: str = "text"
    verify: bool = False
    parallel: bool = False
    on_unknown_barcode: str = "abort"
    stats: str | None = None


def _fractions(text):
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def build_parser():
    parser = argparse.ArgumentParser(prog="mlcofi", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, rules=True):
        p.add_argument("--hierarchy", required=True, help="CSV: barcode,level1,...,levelD")
        p.add_argument("--transactions", required=True, help="lines: tid<TAB>barcode,barcode,...")
        p.add_argument("--minsup", required=True, type=_fractions,
                       help="per-level minimum support, comma-separated (one value = all levels)")
        if rules:
            p.add_argument("--minconf", type=_fractions, default=[0.5],
                           help="per-level minimum confidence (default 0.5)")
        p.add_argument("--on-unknown-barcode", choices=("skip", "abort"), default="abort")
        p.add_argument("-o", "--output", help="report path (default stdout)")

    mine = sub.add_parser("mine", help="mine frequent itemsets and rules at every level")
    common(mine)
    mine.add_argument("--format", choices=("text", "json"), default="text")
    mine.add_argument("--verify", action="store_true", help="check against the brute-force reference")
    mine.add_argument("--parallel", action="store_true", help="mine COFI-trees on a thread pool")
    mine.add_argument("--stats", help="write the instrumentation summary here instead of stderr")

    confirm = sub.add_parser("confirm", help="confirm candidate rules")
    common(confirm)
    confirm.add_argument("--candidates", required=True, help="lines: A => B[<TAB>group_id]")

    oracle = sub.add_parser("oracle", help="run the brute-force reference alone")
    common(oracle, rules=False)
    oracle.add_argument("--format", choices=("text", "json"), default="text")
    return parser


def _config(args) -> RunConfig:
    return RunConfig(args.hierarchy, args.transactions, args.minsup,
                     getattr(args, "minconf", [0.0]), output=args.output,
                     format=getattr(args, "format", "text"),
                     verify=getattr(args, "verify", False),
                     parallel=getattr(args, "parallel", False),
                     on_unknown_barcode=args.on_unknown_barcode,
                     stats=getattr(args, "stats", None))


def _load(config: RunConfig):
    hierarchy = read_hierarchy(config.hierarchy)
    depth = hierarchy.depth
    try:
        minsup = check_fraction_list(config.minsup, depth, "--minsup")
        minconf = check_fraction_list(config.minconf, depth, "--minconf")
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    table = ingest(read_transactions(config.transactions), hierarchy, config.on_unknown_barcode)
    return table, LevelThresholds(minsup, minconf)


def _emit(text, path):
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _min_counts(table, thresholds):
    return [thresholds.min_count(lvl, table.n) for lvl in range(1, table.level + 1)]


def cmd_mine(config: RunConfig) -> int:
    table, thresholds = _load(config)
    results = mine_all(table, thresholds, parallel=config.parallel)
    rules = {r.level: generate_rules(r, thresholds.confidence(r.level)) for r in results}
    if config.format == "json":
        _emit(results_json(results, table.n, rules), config.output)
    else:
        _emit("## itemsets\n" + itemsets_text(results, table.n)
              + "## rules\n" + rules_text(rules, table.n), config.output)
    summary = stats_text(results)
    if config.stats:
        _emit(summary, config.stats)
    else:
        sys.stderr.write(summary)
    if config.verify:
        reference = reference_levels(table, _min_counts(table, thresholds))
        diff = first_difference([r.patterns for r in results], reference)
        if diff is not None:
            raise VerificationError(*diff)
        logger.info("verify: %d levels agree with the reference", len(results))
    return EXIT_OK


def cmd_confirm(config: RunConfig, candidates_path) -> int:
    table, thresholds = _load(config)
    candidates = read_rules(candidates_path)
    results = mine_all(table, thresholds)
    confirmed = confirm_rules(candidates, results, build_level_trees(table), thresholds)
    _emit(confirmed_text(confirmed, table.n), config.output)
    return EXIT_OK


def cmd_oracle(config: RunConfig) -> int:
    table, thresholds = _load(config)
    counts = _min_counts(table, thresholds)
    results = [LevelResult(lvl, patterns, counts[lvl - 1], table.n)
               for lvl, patterns in enumerate(reference_levels(table, counts), start=1)]
    if config.format == "json":
        _emit(results_json(results, table.n), config.output)
    else:
        _emit(itemsets_text(results, table.n), config.output)
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        config = _config(args)
        if args.command == "mine":
            return cmd_mine(config)
        if args.command == "confirm":
            return cmd_confirm(config, args.candidates)
        return cmd_oracle(config)
    except VerificationError as exc:
        print(f"mlcofi: verification failed: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except ItemNotFoundError as exc:
        print(f"mlcofi: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ConfigError, ParseError, MiningError) as exc:
        print(f"mlcofi: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"mlcofi: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
