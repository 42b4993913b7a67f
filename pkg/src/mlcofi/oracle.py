"""Brute-force reference miners.

Slow on purpose: direct scans and level-wise enumeration with no tree
structures, used to check the tree-based pipeline.  Intended for at most
a few dozen distinct items and a few hundred transactions.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import chain, combinations

from .hierarchy import covers, generalize
from .transactions import EncodedTable, filter_table, generalize_table


def support_count(table: EncodedTable, itemset) -> int:
    """Transactions containing, for every item, the item or a descendant of it."""
    itemset = list(itemset)
    count = 0
    for items in table:
        if all(any(covers(x, t) for t in items) for x in itemset):
            count += 1
    # transactions dropped by filtering are empty, and only the empty itemset matches them
    if not itemset:
        return table.n
    return count


def apriori(table: EncodedTable, level: int, min_count: int, parent_frequent_items=None) -> dict:
    """Level-wise Apriori at concept `level` with exact supports.

    When `parent_frequent_items` is given, items whose parent at the
    previous level is not among them are removed first.
    """
    work = generalize_table(table, level)
    if parent_frequent_items is not None:
        work = filter_table(work, parent_frequent_items)
    transactions = [items for items in work]
    counts = {}
    for items in transactions:
        for item in items:
            key = frozenset((item,))
            counts[key] = counts.get(key, 0) + 1
    current = {s: c for s, c in counts.items() if c >= min_count}
    result = dict(current)
    k = 1
    while current:
        k += 1
        prev = sorted(current, key=lambda s: sorted(i.text for i in s))
        candidates = set()
        for a, b in combinations(prev, 2):
            union = a | b
            if len(union) == k and all(frozenset(sub) in current for sub in combinations(union, k - 1)):
                candidates.add(union)
        current = {}
        for cand in candidates:
            c = sum(1 for items in transactions if cand <= items)
            if c >= min_count:
                current[cand] = c
        result.update(current)
    return result


def exhaustive(table: EncodedTable, level: int, min_count: int, parent_frequent_items=None) -> dict:
    """Enumerate every subset of the item universe and count it directly.

    Exponential in the number of distinct items; a check on the checker.
    """
    work = generalize_table(table, level)
    if parent_frequent_items is not None:
        work = filter_table(work, parent_frequent_items)
    universe = sorted(set(chain.from_iterable(work)))
    if len(universe) > 16:
        raise ValueError("too many distinct items for exhaustive enumeration")
    result = {}
    for size in range(1, len(universe) + 1):
        for combo in combinations(universe, size):
            cand = frozenset(combo)
            c = sum(1 for items in work if cand <= items)
            if c >= min_count:
                result[cand] = c
    return result


def reference_levels(table: EncodedTable, min_counts) -> list:
    """Per-level frequent itemsets via generalize, ancestor filter, Apriori.

    Returns a list of dicts, one per mined level; stops after the first
    level with no frequent single item.
    """
    out = []
    parents = None
    for level, min_count in enumerate(min_counts, start=1):
        patterns = apriori(table, level, min_count, parents)
        out.append(patterns)
        parents = {next(iter(s)) for s in patterns if len(s) == 1}
        if not parents:
            break
    return out


def reference_rules(patterns: dict, minconf) -> set:
    """Every ``(A, B, support, confidence)`` with A => B meeting `minconf`."""
    minconf = Fraction(repr(minconf)) if isinstance(minconf, float) else Fraction(minconf)
    rules = set()
    for itemset, support in patterns.items():
        if len(itemset) < 2:
            continue
        members = sorted(itemset)
        for size in range(1, len(members)):
            for ante in combinations(members, size):
                a = frozenset(ante)
                conf = Fraction(support, patterns[a])
                if conf >= minconf:
                    rules.add((a, itemset - a, support, conf))
    return rules


def ancestor_closed(itemset, frequent_by_level: dict) -> bool:
    """Every strict ancestor of every member is frequent at its level."""
    for item in itemset:
        for lvl in range(1, item.level):
            if generalize(item, lvl) not in frequent_by_level.get(lvl, ()):
                return False
    return True


def first_difference(mined: list, reference: list):
    """First ``(level, itemset_text, mined_support, reference_support)`` that differs.

    Both arguments are lists of per-level pattern dicts, level 1 first.
    A missing itemset shows as support None; a missing level as an empty
    dict.  Returns None when everything agrees.
    """
    for offset in range(max(len(mined), len(reference))):
        got = mined[offset] if offset < len(mined) else {}
        want = reference[offset] if offset < len(reference) else {}
        keys = sorted(got.keys() | want.keys(), key=lambda s: (len(s), sorted(i.text for i in s)))
        for key in keys:
            if got.get(key) != want.get(key):
                text = ",".join(sorted(i.text for i in key))
                return offset + 1, text, got.get(key), want.get(key)
    return None
