"""Concept hierarchy and positional item encoding.

Every item is a fixed-length token vector with one token per concept level.
A generalized (higher-level) item keeps its leading tokens and replaces the
deeper ones with a wildcard, so ``1.2.1`` generalizes to ``1.2.*`` and then
to ``1.*.*``.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from .exceptions import ConflictingBarcodeError, HierarchyError, ParseError, UnknownBarcodeError

WILDCARD = None
WILDCARD_TEXT = "*"


@dataclass(frozen=True, eq=True)
class EncodedItem:
    """A node of the concept hierarchy.

    Parameters
    ----------
    tokens : tuple of int or None
        One entry per level. ``None`` is the wildcard and may only appear
        as a suffix.
    """

    tokens: tuple

    def __post_init__(self):
        tokens = tuple(self.tokens)
        object.__setattr__(self, "tokens", tokens)
        if not tokens:
            raise ValueError("an encoded item needs at least one token")
        seen_wildcard = False
        for tok in tokens:
            if tok is WILDCARD:
                seen_wildcard = True
            elif seen_wildcard:
                raise ValueError(f"wildcards must form a suffix: {tokens}")
            elif not isinstance(tok, int) or isinstance(tok, bool) or tok < 1:
                raise ValueError(f"token indices must be positive integers: {tokens}")
        if tokens[0] is WILDCARD:
            raise ValueError("a fully wildcard item is not a valid item")

    @cached_property
    def level(self) -> int:
        n = 0
        for tok in self.tokens:
            if tok is WILDCARD:
                break
            n += 1
        return n

    @property
    def depth(self) -> int:
        return len(self.tokens)

    @cached_property
    def text(self) -> str:
        return ".".join(WILDCARD_TEXT if t is WILDCARD else str(t) for t in self.tokens)

    def __str__(self):
        return self.text

    def __repr__(self):
        return f"EncodedItem({self.text!r})"

    def __lt__(self, other):
        if not isinstance(other, EncodedItem):
            return NotImplemented
        return self.text < other.text

    @classmethod
    def parse(cls, text: str) -> "EncodedItem":
        """Parse the canonical dotted form, e.g. ``"1.2.*"``."""
        parts = text.strip().split(".")
        tokens = []
        for part in parts:
            if part == WILDCARD_TEXT:
                tokens.append(WILDCARD)
            elif part.isdigit():
                tokens.append(int(part))
            else:
                raise ValueError(f"invalid encoded item {text!r}")
        return cls(tuple(tokens))

    def generalize(self, level: int) -> "EncodedItem":
        return generalize(self, level)


def generalize(item: EncodedItem, level: int) -> EncodedItem:
    """Wildcard every token below `level`.

    Idempotent once ``level >= item.level``.
    """
    if not 1 <= level <= item.depth:
        raise ValueError(f"level {level} outside 1..{item.depth}")
    if level >= item.level:
        return item
    return EncodedItem(item.tokens[:level] + (WILDCARD,) * (item.depth - level))


def is_ancestor(a: EncodedItem, b: EncodedItem) -> bool:
    """True iff `a` is a strictly more general item on `b`'s branch."""
    return a.level < b.level and _shares_prefix(a, b)


def covers(general: EncodedItem, item: EncodedItem) -> bool:
    """True iff `item` is `general` itself or one of its descendants."""
    return item.level >= general.level and _shares_prefix(general, item)


def _shares_prefix(general: EncodedItem, item: EncodedItem) -> bool:
    # hot path of the support oracle; avoids building the generalized item
    k = general.level
    return len(item.tokens) == len(general.tokens) and item.tokens[:k] == general.tokens[:k]


def parse_itemset(text: str) -> frozenset:
    """Parse a comma-joined list of canonical item texts."""
    parts = [p for p in (s.strip() for s in text.split(",")) if p]
    if not parts:
        raise ValueError("empty itemset")
    return frozenset(EncodedItem.parse(p) for p in parts)


def format_itemset(itemset: Iterable[EncodedItem]) -> str:
    return ",".join(sorted(item.text for item in itemset))


@dataclass(frozen=True)
class ConceptHierarchy:
    """Taxonomy over the items of one run.

    Attributes
    ----------
    depth : int
        Number of concept levels; level 1 is the most general.
    level_names : tuple of str
    dictionary : mapping
        Barcode to leaf :class:`EncodedItem`. Several barcodes may share
        one leaf (they were merged into one group).
    labels : mapping
        ``(level, token_index)`` to the human-readable value.
    """

    depth: int
    level_names: tuple
    dictionary: Mapping[str, EncodedItem] = field(default_factory=dict)
    labels: Mapping[tuple, str] = field(default_factory=dict)

    def __post_init__(self):
        if self.depth < 1:
            raise HierarchyError("hierarchy depth must be at least 1")
        if len(self.level_names) != self.depth:
            raise HierarchyError("one level name per level is required")

    def encode(self, barcode) -> EncodedItem:
        return encode(barcode, self)

    def leaves(self) -> frozenset:
        return frozenset(self.dictionary.values())

    def items_at_level(self, level: int) -> frozenset:
        return frozenset(generalize(leaf, level) for leaf in self.dictionary.values())

    def contains(self, item: EncodedItem) -> bool:
        """True if `item` is a node of this hierarchy."""
        if item.depth != self.depth:
            return False
        return item in self.items_at_level(item.level)

    def describe(self, item: EncodedItem) -> str:
        """Human-readable label path such as ``milk/fatfree/*``."""
        names = []
        for lvl, tok in enumerate(item.tokens, start=1):
            names.append(WILDCARD_TEXT if tok is WILDCARD else self.labels.get((lvl, tok), str(tok)))
        return "/".join(names)


def load_hierarchy(rows: Iterable[Sequence[str]], level_names: Sequence[str] | None = None,
                   first_lineno: int = 1) -> ConceptHierarchy:
    """Build a hierarchy from ``barcode, level1, ..., levelD`` rows.

    Rows whose level values coincide share one leaf item. Token indices are
    numbered per level in order of first appearance, starting at 1. Values
    are compared after trimming surrounding whitespace, without case folding.
    """
    rows = list(rows)
    if level_names is None:
        if not any(rows):
            raise HierarchyError("cannot infer hierarchy depth from an empty table")
        level_names = [f"level{i}" for i in range(1, len(next(r for r in rows if r)))]
    level_names = tuple(level_names)
    depth = len(level_names)

    indices = [dict() for _ in range(depth)]
    labels = {}
    dictionary = {}
    values_of = {}
    for offset, row in enumerate(rows):
        lineno = first_lineno + offset
        if not row:
            continue
        if len(row) != depth + 1:
            raise ParseError(f"expected {depth + 1} columns, got {len(row)}", lineno)
        barcode, *values = (cell.strip() for cell in row)
        if not barcode:
            raise ParseError("empty barcode", lineno)
        if any(not v for v in values):
            raise ParseError(f"empty level value for barcode {barcode!r}", lineno)
        values = tuple(values)
        if barcode in values_of:
            if values_of[barcode] != values:
                raise ConflictingBarcodeError(barcode, values_of[barcode], values)
            continue
        values_of[barcode] = values
        tokens = []
        for lvl, value in enumerate(values):
            idx = indices[lvl].setdefault(value, len(indices[lvl]) + 1)
            labels[(lvl + 1, idx)] = value
            tokens.append(idx)
        dictionary[barcode] = EncodedItem(tuple(tokens))
    return ConceptHierarchy(depth, level_names, dictionary, labels)


def read_hierarchy(path) -> ConceptHierarchy:
    """Read a comma-separated hierarchy file with a header row."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError("missing header row", 1) from None
        if len(header) < 2:
            raise ParseError("header needs a barcode column and at least one level", 1)
        rows = list(reader)
    return load_hierarchy(rows, [h.strip() for h in header[1:]], first_lineno=2)


def encode(barcode, hierarchy: ConceptHierarchy) -> EncodedItem:
    try:
        return hierarchy.dictionary[str(barcode).strip()]
    except KeyError:
        raise UnknownBarcodeError(str(barcode)) from None
