"""Top-down multilevel mining.

The atomic FP-tree is built once.  Each concept level gets its own tree
derived from it, restricted to items whose parent was frequent at the
level above, and is mined with COFI-trees.  Descent stops at the first
level where nothing is frequent.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .cofi import MiningStats, mine_level
from .exceptions import MissingLevelError
from .fptree import FPTree, build_fptree, restrict_fptree, transform_fpl
from .hierarchy import generalize
from .transactions import EncodedTable


def as_fraction(value) -> Fraction:
    """Exact fraction for a threshold; floats go through their shortest repr.

    ``0.06`` becomes ``3/50`` instead of the binary approximation, so
    ``ceil(0.06 * 100)`` is 6, not 7.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ValueError(f"threshold must be finite, got {value}")
        return Fraction(repr(value))
    return Fraction(value)


def min_count_for(minsup, n: int) -> int:
    """Absolute count for a support fraction: ``max(1, ceil(minsup * n))``."""
    return max(1, math.ceil(as_fraction(minsup) * n))


@dataclass(frozen=True)
class LevelThresholds:
    """Minimum support and confidence per concept level (level 1 first).

    A support above 1 is accepted and simply makes the level barren.
    """

    minsup: tuple
    minconf: tuple

    def __post_init__(self):
        minsup = tuple(as_fraction(v) for v in self.minsup)
        minconf = tuple(as_fraction(v) for v in self.minconf)
        if not minsup or len(minsup) != len(minconf):
            raise ValueError("need one minsup and one minconf per level")
        if any(v < 0 for v in minsup):
            raise ValueError("minimum support cannot be negative")
        if any(not 0 <= v <= 1 for v in minconf):
            raise ValueError("minimum confidence must lie in [0, 1]")
        object.__setattr__(self, "minsup", minsup)
        object.__setattr__(self, "minconf", minconf)

    @classmethod
    def broadcast(cls, minsup, minconf, depth: int) -> "LevelThresholds":
        """Expand scalars or length-1 sequences to `depth` levels."""
        def expand(values, name):
            if not isinstance(values, (list, tuple)):
                values = [values]
            if len(values) == 1:
                values = list(values) * depth
            if len(values) != depth:
                raise ValueError(f"{name} needs 1 or {depth} values (hierarchy depth {depth}), "
                                 f"got {len(values)}")
            return tuple(values)
        return cls(expand(minsup, "minsup"), expand(minconf, "minconf"))

    @property
    def depth(self) -> int:
        return len(self.minsup)

    def min_count(self, level: int, n: int) -> int:
        return min_count_for(self.minsup[level - 1], n)

    def confidence(self, level: int) -> Fraction:
        return self.minconf[level - 1]


@dataclass
class LevelResult:
    """Frequent itemsets found at one concept level."""

    level: int
    patterns: dict
    min_count: int
    n: int
    stats: MiningStats = field(default_factory=MiningStats)
    tree: FPTree | None = field(default=None, repr=False)
    seconds: float = 0.0

    @property
    def frequent_items(self) -> frozenset:
        return frozenset(next(iter(s)) for s in self.patterns if len(s) == 1)


def mine_all(table: EncodedTable, thresholds: LevelThresholds, parallel: bool = False,
             keep_trees: bool = False, on_release=None) -> list:
    """Mine every concept level of an atomic table, top down.

    Parameters
    ----------
    table : EncodedTable
        Atomic-level table.
    thresholds : LevelThresholds
        One entry per level of the table.
    parallel : bool
        Mine COFI-trees of one level on a thread pool.
    keep_trees : bool
        Keep each level's FP-tree on its result (otherwise dropped).
    on_release : callable, optional
        Passed to :func:`~mlcofi.cofi.mine_level`; sees every COFI-tree
        after mining.

    Returns
    -------
    list of LevelResult
        One per mined level, level 1 first.
    """
    if thresholds.depth != table.level:
        raise ValueError(f"thresholds cover {thresholds.depth} levels, table has {table.level}")
    n = table.n
    # count 1 keeps every atomic item so generalized supports see all descendants
    atomic = build_fptree(table, 1)
    results = []
    parents = None
    for level in range(1, table.level + 1):
        start = time.perf_counter()
        min_count = thresholds.min_count(level, n)
        keep = None
        if parents is not None:
            keep = _child_of(parents, level - 1)
        if level < atomic.level:
            tree = transform_fpl(atomic, level, min_count, keep)
        else:
            tree = restrict_fptree(atomic, min_count, keep)
        stats = MiningStats()
        patterns = mine_level(tree, min_count, parallel=parallel, stats=stats,
                              on_release=on_release)
        result = LevelResult(level, patterns, min_count, n, stats,
                             tree if keep_trees else None, time.perf_counter() - start)
        results.append(result)
        parents = result.frequent_items
        if not parents:
            break
    return results


def _child_of(parents: frozenset, parent_level: int):
    def keep(item):
        return generalize(item, parent_level) in parents
    return keep


def check_strong(itemset, results: Sequence[LevelResult]) -> bool:
    """True iff every strict ancestor of every member was frequent at its level.

    Raises
    ------
    MissingLevelError
        An ancestor level was never mined although descent had not stopped.
    """
    by_level = {r.level: r.frequent_items for r in results}
    stopped = bool(results) and not results[-1].frequent_items
    for item in itemset:
        for lvl in range(1, item.level):
            frequent = by_level.get(lvl)
            if frequent is None:
                if stopped and lvl > results[-1].level:
                    return False
                raise MissingLevelError(f"no result for level {lvl}")
            if generalize(item, lvl) not in frequent:
                return False
    return True
