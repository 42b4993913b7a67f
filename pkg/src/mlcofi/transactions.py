"""Hierarchy-encoded transaction tables."""
from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Iterator

from .exceptions import ParseError, UnknownBarcodeError
from .hierarchy import ConceptHierarchy, EncodedItem, encode, generalize

logger = logging.getLogger(__name__)

ON_UNKNOWN = ("skip", "abort")


@dataclass(frozen=True)
class EncodedTable:
    """Transactions whose items are all expressed at one concept level.

    `n` is the support denominator. It stays at the original database size
    when transactions are filtered away, so supports remain comparable
    across levels.
    """

    transactions: tuple
    n: int
    level: int

    def __post_init__(self):
        object.__setattr__(self, "transactions",
                           tuple((tid, frozenset(items)) for tid, items in self.transactions))
        if self.n < len(self.transactions):
            raise ValueError("n cannot be smaller than the number of stored transactions")
        for _, items in self.transactions:
            for item in items:
                if item.level != self.level:
                    raise ValueError(f"item {item} is not at table level {self.level}")

    def __iter__(self) -> Iterator[frozenset]:
        return (items for _, items in self.transactions)

    def __len__(self):
        return len(self.transactions)

    def item_supports(self) -> Counter:
        counts = Counter()
        for items in self:
            counts.update(items)
        return counts


def ingest(rows: Iterable, hierarchy: ConceptHierarchy, on_unknown: str = "abort") -> EncodedTable:
    """Encode raw ``(tid, barcodes)`` rows into an atomic-level table.

    Duplicate items inside one transaction collapse to one; empty
    transactions are kept and count towards `n`.

    Parameters
    ----------
    rows : iterable of (tid, sequence of barcode)
    hierarchy : ConceptHierarchy
    on_unknown : {"skip", "abort"}
        Whether a barcode missing from the hierarchy is dropped with a
        warning or raises :class:`UnknownBarcodeError`.
    """
    if on_unknown not in ON_UNKNOWN:
        raise ValueError(f"on_unknown must be one of {ON_UNKNOWN}, got {on_unknown!r}")
    transactions = []
    for tid, barcodes in rows:
        items = set()
        for barcode in barcodes:
            try:
                items.add(encode(barcode, hierarchy))
            except UnknownBarcodeError:
                if on_unknown == "abort":
                    raise
                logger.warning("transaction %s: skipping unknown barcode %s", tid, barcode)
        transactions.append((str(tid), frozenset(items)))
    return EncodedTable(tuple(transactions), len(transactions), hierarchy.depth)


def read_transactions(path) -> Iterator[tuple]:
    """Yield ``(tid, [barcode, ...])`` from a ``tid<TAB>b1,b2,...`` file.

    Blank lines are ignored. A line holding only a tid is an empty
    transaction.
    """
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\r\n")
            if not line.strip():
                continue
            tid, sep, rest = line.partition("\t")
            tid = tid.strip()
            if not tid:
                raise ParseError("missing transaction id", lineno)
            if "," in tid or " " in tid:
                raise ParseError("expected a TAB between the tid and the barcode list", lineno)
            barcodes = []
            if sep and rest.strip():
                barcodes = [b.strip() for b in rest.split(",")]
                if any(not b for b in barcodes):
                    raise ParseError("empty barcode in list", lineno)
            yield tid, barcodes


def generalize_table(table: EncodedTable, level: int) -> EncodedTable:
    """Re-express every item at `level`, deduplicating per transaction."""
    if not 1 <= level <= table.level:
        raise ValueError(f"level {level} outside 1..{table.level}")
    if level == table.level:
        return table
    rows = tuple((tid, frozenset(generalize(i, level) for i in items))
                 for tid, items in table.transactions)
    return EncodedTable(rows, table.n, level)


def filter_table(table: EncodedTable, frequent_parents) -> EncodedTable:
    """Keep only items whose ancestor at the parents' level is frequent.

    Transactions left empty are dropped; `n` is preserved.
    """
    frequent_parents = frozenset(frequent_parents)
    if not frequent_parents:
        return EncodedTable((), table.n, table.level)
    parent_level = next(iter(frequent_parents)).level
    if any(p.level != parent_level for p in frequent_parents):
        raise ValueError("frequent parents must all be at one level")
    if parent_level >= table.level:
        raise ValueError("parents must be more general than the table's items")
    rows = []
    for tid, items in table.transactions:
        kept = frozenset(i for i in items if generalize(i, parent_level) in frequent_parents)
        if kept:
            rows.append((tid, kept))
    return EncodedTable(tuple(rows), table.n, table.level)


def from_itemsets(itemsets: Iterable[Iterable], level: int | None = None) -> EncodedTable:
    """Build a table straight from item collections (texts or items).

    Convenient for tests and for callers that already hold encoded data.
    Transaction ids are ``T1``, ``T2``, ...
    """
    rows = []
    for k, items in enumerate(itemsets, start=1):
        encoded = frozenset(i if isinstance(i, EncodedItem) else EncodedItem.parse(i) for i in items)
        rows.append((f"T{k}", encoded))
    if level is None:
        levels = {i.level for _, items in rows for i in items}
        if len(levels) > 1:
            raise ValueError(f"items span several levels: {sorted(levels)}")
        level = levels.pop() if levels else 1
    return EncodedTable(tuple(rows), len(rows), level)
