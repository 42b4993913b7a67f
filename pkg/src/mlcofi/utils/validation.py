"""Input checking shared by the estimators and the CLI."""
from __future__ import annotations

from collections.abc import Iterable

from ..miner import LevelThresholds
from ..transactions import EncodedTable, from_itemsets


def check_table(X, level: int | None = None) -> EncodedTable:
    """Accept an :class:`EncodedTable` or an iterable of item collections.

    Items may be :class:`~mlcofi.hierarchy.EncodedItem` or canonical texts
    such as ``"1.2.1"``.
    """
    if isinstance(X, EncodedTable):
        if level is not None and X.level != level:
            raise ValueError(f"expected a level-{level} table, got level {X.level}")
        return X
    if isinstance(X, (str, bytes)) or not isinstance(X, Iterable):
        raise TypeError(f"expected an EncodedTable or an iterable of itemsets, got {type(X).__name__}")
    return from_itemsets(X, level)


def check_thresholds(minsup, minconf, depth: int) -> LevelThresholds:
    """Broadcast scalar thresholds and validate their ranges."""
    if isinstance(minsup, LevelThresholds):
        if minsup.depth != depth:
            raise ValueError(f"thresholds cover {minsup.depth} levels, expected {depth}")
        return minsup
    return LevelThresholds.broadcast(minsup, minconf, depth)


def check_fraction_list(values, depth: int, name: str) -> list:
    """Validate a CLI-style list of fractions in [0, 1]; length 1 or `depth`."""
    values = list(values)
    if len(values) not in (1, depth):
        raise ValueError(f"{name} needs 1 or {depth} values (hierarchy depth is {depth}), "
                         f"got {len(values)}")
    for v in values:
        if not 0 <= v <= 1:
            raise ValueError(f"{name} values must lie in [0, 1], got {v}")
    return values * depth if len(values) == 1 else values
