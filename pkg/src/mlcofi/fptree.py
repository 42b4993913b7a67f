"""FP-trees over encoded items and their re-expression at higher concept levels.

The atomic tree is built in two scans of the encoded table. Trees for a
more general level are derived from it without touching the table again:
every node is relabelled with its generalized item, items whose
aggregated support falls below the level threshold are dropped, and the
surviving duplicates are merged before the tree is re-sorted and its
node links rebuilt.
"""
from __future__ import annotations

from collections import Counter
from typing import Callable, Iterable, Iterator

from .exceptions import ItemNotFoundError
from .hierarchy import EncodedItem, generalize
from .transactions import EncodedTable


class FPNode:
    """Counted tree node with a doubly linked same-item chain."""

    __slots__ = ("item", "count", "parent", "children", "next", "prev")

    def __init__(self, item=None, count=0, parent=None):
        self.item = item
        self.count = count
        self.parent = parent
        self.children = {}
        self.next = None
        self.prev = None

    def __repr__(self):
        return f"FPNode({self.item}:{self.count})"

    def path_items(self) -> list:
        """Items from this node's parent up to (excluding) the root."""
        items = []
        node = self.parent
        while node is not None and node.item is not None:
            items.append(node.item)
            node = node.parent
        return items


class HeaderEntry:
    __slots__ = ("item", "support", "head", "tail")

    def __init__(self, item, support):
        self.item = item
        self.support = support
        self.head = None
        self.tail = None

    def __repr__(self):
        return f"HeaderEntry({self.item}, {self.support})"


class HeaderTable:
    """Items ordered by descending support, ties by ascending item text."""

    def __init__(self, supports: dict):
        order = sorted(supports.items(), key=lambda kv: (-kv[1], kv[0].text))
        self.entries = [HeaderEntry(item, sup) for item, sup in order]
        self._index = {e.item: e for e in self.entries}
        self.rank = {e.item: r for r, e in enumerate(self.entries)}

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __contains__(self, item):
        return item in self._index

    def __getitem__(self, item) -> HeaderEntry:
        try:
            return self._index[item]
        except KeyError:
            raise ItemNotFoundError(item) from None

    def items(self) -> list:
        return [e.item for e in self.entries]

    def supports(self) -> dict:
        return {e.item: e.support for e in self.entries}

    def link(self, node: FPNode):
        entry = self._index[node.item]
        if entry.tail is None:
            entry.head = node
        else:
            entry.tail.next = node
            node.prev = entry.tail
        entry.tail = node


class FPTree:
    """Shared-prefix tree of frequent items.

    Attributes
    ----------
    root : FPNode
        Item-less root.
    header : HeaderTable
    level : int
        Concept level of every item in the tree.
    min_count : int
        Absolute support threshold the tree was built with.
    n : int
        Size of the underlying database.
    """

    def __init__(self, header: HeaderTable, level: int, min_count: int, n: int):
        self.root = FPNode()
        self.header = header
        self.level = level
        self.min_count = min_count
        self.n = n

    def insert(self, items: list, count: int = 1):
        """Insert items already sorted in header order."""
        node = self.root
        for item in items:
            child = node.children.get(item)
            if child is None:
                child = FPNode(item, count, node)
                node.children[item] = child
                self.header.link(child)
            else:
                child.count += count
            node = child

    def nodes(self, item) -> Iterator[FPNode]:
        """Walk the same-item chain of `item` from its head."""
        node = self.header[item].head
        while node is not None:
            yield node
            node = node.next

    def iter_nodes(self) -> Iterator[FPNode]:
        stack = list(self.root.children.values())
        while stack:
            node = stack.pop()
            yield node
            stack.extend(node.children.values())

    def node_count(self) -> int:
        """Number of non-root nodes."""
        return sum(1 for _ in self.iter_nodes())

    def paths(self) -> Iterator[tuple]:
        """Yield ``(items, count)`` for every transaction shape stored.

        `count` is the number of transactions whose filtered, sorted item
        list is exactly the root-to-node path; zero-residual nodes are
        skipped.
        """
        stack = [(child, (child.item,)) for child in self.root.children.values()]
        while stack:
            node, prefix = stack.pop()
            residual = node.count - sum(c.count for c in node.children.values())
            if residual:
                yield prefix, residual
            for child in node.children.values():
                stack.append((child, prefix + (child.item,)))

    def sort_key(self, item):
        return self.header.rank[item]

    def dump(self) -> str:
        """Text dump: header lines ``item support``, then indented ``item:count``."""
        lines = [f"header level={self.level} min_count={self.min_count} n={self.n}"]
        lines.extend(f"{e.item} {e.support}" for e in self.header)
        lines.append("tree")

        def walk(node, depth):
            for child in sorted(node.children.values(), key=lambda c: self.header.rank[c.item]):
                lines.append("  " * depth + f"{child.item}:{child.count}")
                walk(child, depth + 1)

        walk(self.root, 1)
        return "\n".join(lines) + "\n"


def _grow(weighted: Iterable[tuple], level: int, min_count: int, n: int) -> FPTree:
    """Two passes over weighted transactions: count, then insert sorted."""
    weighted = list(weighted)
    supports = Counter()
    for items, weight in weighted:
        for item in items:
            supports[item] += weight
    header = HeaderTable({i: s for i, s in supports.items() if s >= min_count})
    tree = FPTree(header, level, min_count, n)
    rank = header.rank
    for items, weight in weighted:
        kept = sorted((i for i in items if i in rank), key=rank.__getitem__)
        if kept:
            tree.insert(kept, weight)
    return tree


def build_fptree(table: EncodedTable, min_count: int) -> FPTree:
    """Build an FP-tree from an encoded table.

    The first scan collects item supports and keeps items reaching
    `min_count`; the second inserts each transaction's frequent items in
    header order, sharing prefixes.
    """
    if min_count < 1:
        raise ValueError("min_count must be at least 1")
    return _grow(((items, 1) for items in table), table.level, min_count, table.n)


def _derive(source: FPTree, level: int, min_count: int,
            keep: Callable[[EncodedItem], bool] | None) -> FPTree:
    # relabel: each stored transaction shape, re-expressed at `level`;
    # a set per path so one transaction counts once per generalized item
    relabelled = []
    for items, count in source.paths():
        general = {generalize(i, level) for i in items}
        if keep is not None:
            general = {i for i in general if keep(i)}
        if general:
            relabelled.append((general, count))
    # prune below min_count, merge duplicates, re-sort and relink
    return _grow(relabelled, level, min_count, source.n)


def transform_fpl(source: FPTree, target_level: int, min_count_at_level: int,
                  keep: Callable[[EncodedItem], bool] | None = None) -> FPTree:
    """Derive the FP-tree of a more general concept level.

    Parameters
    ----------
    source : FPTree
        Tree at a deeper level, usually the atomic tree built with
        ``min_count=1`` so that no descendant is lost before aggregation.
    target_level : int
        Must be strictly above ``source.level``.
    min_count_at_level : int
        Support threshold of the target level.
    keep : callable, optional
        Extra predicate on generalized items; items failing it are dropped
        before counting. Used to restrict a level to descendants of the
        previous level's frequent items.

    Notes
    -----
    A transaction that held two descendants of one generalized item
    contributes 1, not 2, to that item's support.  The result is rebuilt
    by re-inserting the relabelled paths rather than by splicing nodes in
    place; both give the same tree.
    """
    if not 1 <= target_level < source.level:
        raise ValueError(f"target level {target_level} must be in 1..{source.level - 1}")
    if min_count_at_level < 1:
        raise ValueError("min_count must be at least 1")
    return _derive(source, target_level, min_count_at_level, keep)


def restrict_fptree(source: FPTree, min_count: int,
                    keep: Callable[[EncodedItem], bool] | None = None) -> FPTree:
    """Same-level counterpart of :func:`transform_fpl`: re-threshold and filter."""
    if min_count < 1:
        raise ValueError("min_count must be at least 1")
    return _derive(source, source.level, min_count, keep)


def item_support(tree: FPTree, item) -> int:
    """Support of `item` summed along its node chain.

    Cross-checked against the header; a mismatch means the tree is corrupt.
    """
    if item is None or item not in tree.header:
        raise ItemNotFoundError(item)
    total = sum(node.count for node in tree.nodes(item))
    if total != tree.header[item].support:
        raise AssertionError(f"chain sum {total} != header support for {item}")
    return total
