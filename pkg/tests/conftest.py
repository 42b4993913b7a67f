import random
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import strategies as st

from mlcofi.hierarchy import EncodedItem
from mlcofi.transactions import EncodedTable, from_itemsets

DATA = Path(__file__).parent / "data"

DB5_ROWS = [
    ["1.1.1", "2.1.1"],
    ["1.1.1", "1.2.1", "2.1.2"],
    ["1.1.2", "2.1.1"],
    ["1.1.1", "2.1.1", "3.1.1"],
    ["1.2.1"],
]


def item(text):
    return EncodedItem.parse(text)


def itemset(*texts):
    return frozenset(item(t) for t in texts)


@pytest.fixture
def db5():
    return from_itemsets(DB5_ROWS)


@pytest.fixture
def data_dir():
    return DATA


def random_table(rng, depth=3, max_leaves=10, max_transactions=30, fanout=3):
    """Small random atomic table over a random depth-`depth` hierarchy."""
    leaves = set()
    target = rng.randint(1, max_leaves)
    while len(leaves) < target:
        leaves.add(EncodedItem(tuple(rng.randint(1, fanout) for _ in range(depth))))
    leaves = sorted(leaves)
    n = rng.randint(0, max_transactions)
    rows = tuple(
        (f"T{k}", frozenset(rng.sample(leaves, rng.randint(0, min(6, len(leaves))))))
        for k in range(n)
    )
    return EncodedTable(rows, n, depth)


def random_counts(rng, table, depth=3):
    return [rng.randint(1, max(1, table.n // 2 + 1)) for _ in range(depth)]


def counts_as_minsup(counts, n):
    """Fractions whose ceil(minsup * n) is exactly the given counts."""
    return [Fraction(c, n) if n else Fraction(0) for c in counts]


@st.composite
def tables(draw, depth=3, max_leaves=8, max_transactions=20):
    leaves = draw(st.lists(st.tuples(*[st.integers(1, 3)] * depth).map(EncodedItem),
                           min_size=1, max_size=max_leaves, unique=True))
    rows = draw(st.lists(st.frozensets(st.sampled_from(leaves), max_size=6),
                         max_size=max_transactions))
    return EncodedTable(tuple((f"T{k}", r) for k, r in enumerate(rows)), len(rows), depth)


@pytest.fixture(scope="session")
def corpus():
    """1000 seeded random databases with per-level count thresholds."""
    out = []
    for seed in range(1000):
        rng = random.Random(seed)
        table = random_table(rng)
        out.append((seed, table, random_counts(rng, table)))
    return out


_acceptance_lines = []


@pytest.fixture(scope="session")
def acceptance_log():
    return _acceptance_lines


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in _acceptance_lines:
            terminalreporter.write_line(line)
