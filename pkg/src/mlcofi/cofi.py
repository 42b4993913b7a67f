"""Co-occurrence frequent-item trees (COFI-trees).

One small tree is built per frequent item of an FP-tree, mined without
recursion and released before the next one is built.  A COFI-tree for a
base item holds only the items that are more frequent than the base in
the FP-tree and, after pruning, frequent *together with* the base.

Each node keeps two counters.  ``frequency_count`` is how many of the
base's transactions pass through the node; ``contribution_count`` is how
much of that frequency has already been credited to candidate patterns.
Mining walks the nodes and credits only the not-yet-contributed part,
so every transaction is counted exactly once per pattern.
"""
from __future__ import annotations

import logging
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable

from .exceptions import ItemNotFoundError
from .fptree import FPTree

logger = logging.getLogger(__name__)

PatternSet = dict  # frozenset of EncodedItem -> support count


class COFINode:
    __slots__ = ("item", "frequency_count", "contribution_count",
                 "parent", "children", "next", "prev")

    def __init__(self, item, frequency_count=0, parent=None):
        self.item = item
        self.frequency_count = frequency_count
        self.contribution_count = 0
        self.parent = parent
        self.children = {}
        self.next = None
        self.prev = None

    def __repr__(self):
        return f"COFINode({self.item}:{self.frequency_count}/{self.contribution_count})"


class COFIHeaderEntry:
    __slots__ = ("item", "local_support", "contribution", "head", "tail")

    def __init__(self, item, local_support):
        self.item = item
        self.local_support = local_support
        self.contribution = 0
        self.head = None
        self.tail = None


class COFITree:
    """Tree of the items co-occurring with `base`.

    Paths are stored in the FP-tree's header order, so a COFI path is a
    projection of an FP-tree path and shares prefixes the same way.
    """

    def __init__(self, base, base_support: int, entries: list):
        self.base = base
        self.base_support = base_support
        self.root = COFINode(base)
        self.header = entries
        self._index = {e.item: e for e in entries}

    def entry(self, item) -> COFIHeaderEntry:
        try:
            return self._index[item]
        except KeyError:
            raise ItemNotFoundError(item) from None

    def insert(self, items: list, count: int):
        node = self.root
        for item in items:
            child = node.children.get(item)
            if child is None:
                child = COFINode(item, count, node)
                node.children[item] = child
                entry = self._index[item]
                if entry.tail is None:
                    entry.head = child
                else:
                    entry.tail.next = child
                    child.prev = entry.tail
                entry.tail = child
            else:
                child.frequency_count += count
            node = child

    def nodes(self, item=None):
        """Chain of `item`, or every non-root node when `item` is None."""
        if item is None:
            stack = list(self.root.children.values())
            while stack:
                node = stack.pop()
                yield node
                stack.extend(node.children.values())
            return
        node = self.entry(item).head
        while node is not None:
            yield node
            node = node.next

    def node_count(self) -> int:
        return sum(1 for _ in self.nodes())


@dataclass
class MiningStats:
    """Instrumentation counters for one mined level."""

    fpl_nodes: int = 0
    peak_cofi_nodes: int = 0
    cofi_trees: int = 0
    candidates_generated: int = 0
    candidates_pruned: int = 0
    cofi_nodes_by_base: dict = field(default_factory=dict)

    @property
    def memory_ratio(self) -> float:
        """Peak COFI size relative to the FP-tree it was projected from."""
        return self.peak_cofi_nodes / self.fpl_nodes if self.fpl_nodes else 0.0

    def merge(self, other: "MiningStats"):
        self.peak_cofi_nodes = max(self.peak_cofi_nodes, other.peak_cofi_nodes)
        self.cofi_trees += other.cofi_trees
        self.candidates_generated += other.candidates_generated
        self.candidates_pruned += other.candidates_pruned
        self.cofi_nodes_by_base.update(other.cofi_nodes_by_base)


def local_frequencies(tree: FPTree, base) -> Counter:
    """Count, for every item above a `base` node, the base transactions sharing it."""
    if base not in tree.header:
        raise ItemNotFoundError(base)
    counts = Counter()
    for node in tree.nodes(base):
        for item in node.path_items():
            counts[item] += node.count
    return counts


def build_cofi(tree: FPTree, base, min_count: int, prune: bool = True) -> COFITree:
    """Build the COFI-tree of `base`, dropping locally infrequent items.

    With ``prune=False`` every co-occurring item is kept; only useful to
    check that pruning does not change the mined patterns.
    """
    if min_count < 1:
        raise ValueError("min_count must be at least 1")
    local = local_frequencies(tree, base)
    threshold = min_count if prune else 1
    kept = sorted((i for i, c in local.items() if c >= threshold), key=tree.sort_key)
    cofi = COFITree(base, tree.header[base].support,
                    [COFIHeaderEntry(i, local[i]) for i in kept])
    kept = set(kept)
    for node in tree.nodes(base):
        path = [i for i in reversed(node.path_items()) if i in kept]
        if path:
            cofi.insert(path, node.count)
    return cofi


def mine_cofi(cofi: COFITree, min_count: int, stats: MiningStats | None = None) -> PatternSet:
    """Mine every frequent pattern containing the base of `cofi`.

    Nodes are visited from the least frequent header item back to the
    most frequent, each chain in insertion order, so a node is only
    reached after everything below it.  For each node the still
    uncontributed count ``F`` is added to every subset of the node's path
    (plus the base), then marked as contributed along the path.
    """
    base = cofi.base
    candidates = {}
    generated = 0
    for entry in reversed(cofi.header):
        node = entry.head
        while node is not None:
            f = node.frequency_count - node.contribution_count
            if f > 0:
                path = []
                up = node
                while up is not cofi.root:
                    path.append(up)
                    up = up.parent
                path.reverse()
                items = [p.item for p in path]
                for size in range(1, len(items) + 1):
                    for combo in combinations(items, size):
                        pattern = frozenset(combo + (base,))
                        candidates[pattern] = candidates.get(pattern, 0) + f
                        generated += 1
                for p in path:
                    p.contribution_count += f
                    cofi.entry(p.item).contribution += f
            node = node.next

    result = {}
    if cofi.base_support >= min_count:
        result[frozenset((base,))] = cofi.base_support
    pruned = 0
    for pattern, support in candidates.items():
        if support >= min_count:
            result[pattern] = support
        else:
            pruned += 1
    if stats is not None:
        stats.candidates_generated += generated
        stats.candidates_pruned += pruned
    return result


def contribution_deficits(cofi: COFITree) -> list:
    """Nodes whose frequency was not fully contributed; empty after mining."""
    return [n for n in cofi.nodes() if n.contribution_count != n.frequency_count]


def _mine_base(tree, base, min_count, on_release):
    stats = MiningStats()
    cofi = build_cofi(tree, base, min_count)
    size = cofi.node_count()
    stats.cofi_trees = 1
    stats.peak_cofi_nodes = size
    stats.cofi_nodes_by_base[base] = size
    patterns = mine_cofi(cofi, min_count, stats)
    assert not contribution_deficits(cofi), f"unsound contribution counts in COFI-tree of {base}"
    if on_release is not None:
        on_release(cofi)
    return patterns, stats


def mine_level(tree: FPTree, min_count: int | None = None, parallel: bool = False,
               max_workers: int | None = None, stats: MiningStats | None = None,
               on_release: Callable[[COFITree], None] | None = None) -> PatternSet:
    """Mine all frequent itemsets of one FP-tree with COFI-trees.

    Bases are taken from the least frequent header item upwards; each
    COFI-tree is built, mined and released before the next, so at most one
    is alive at a time (one per worker with ``parallel=True``).  An itemset
    is emitted only by the COFI-tree of its least frequent member.

    Parameters
    ----------
    tree : FPTree
    min_count : int, optional
        Defaults to the threshold the tree was built with.
    parallel : bool
        Mine distinct bases on a thread pool.
    stats : MiningStats, optional
        Updated in place.
    on_release : callable, optional
        Called with each mined COFI-tree just before it is dropped.
    """
    if min_count is None:
        min_count = tree.min_count
    if stats is None:
        stats = MiningStats()
    stats.fpl_nodes = tree.node_count()
    bases = [e.item for e in reversed(tree.header.entries)]
    result = {}
    if parallel and len(bases) > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            outcomes = list(pool.map(lambda b: _mine_base(tree, b, min_count, on_release), bases))
    else:
        outcomes = (_mine_base(tree, b, min_count, on_release) for b in bases)
    for patterns, base_stats in outcomes:
        overlap = result.keys() & patterns.keys()
        assert not overlap, f"itemsets mined twice: {overlap}"
        result.update(patterns)
        stats.merge(base_stats)
    logger.debug("level %d: %d itemsets from %d COFI-trees", tree.level, len(result), len(bases))
    return result
