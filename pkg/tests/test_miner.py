from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mlcofi.exceptions import MissingLevelError
from mlcofi.hierarchy import generalize
from mlcofi.miner import LevelResult, LevelThresholds, check_strong, min_count_for, mine_all
from mlcofi.oracle import reference_levels

from conftest import counts_as_minsup, item, itemset, tables


def uniform(minsup, depth=3, minconf=0.5):
    return LevelThresholds.broadcast(minsup, minconf, depth)


def test_min_count_conversion():
    assert min_count_for(0.4, 5) == 2
    assert min_count_for(0.06, 100) == 6
    assert min_count_for(0.03, 100) == 3
    assert min_count_for(0, 10) == 1
    assert min_count_for(Fraction(1, 3), 10) == 4


def test_thresholds_validation():
    with pytest.raises(ValueError):
        LevelThresholds.broadcast([0.1, 0.2], 0.5, 3)
    with pytest.raises(ValueError):
        LevelThresholds((0.1,), (1.5,))
    with pytest.raises(ValueError):
        LevelThresholds((-0.1,), (0.5,))
    example = LevelThresholds((0.06, 0.03, 0.03), (0.55, 0.35, 0.35))
    assert example.min_count(1, 100) == 6 and example.min_count(2, 100) == 3
    assert example.confidence(1) == Fraction(11, 20)


def test_nothing_frequent_stops_descent(db5):
    results = mine_all(db5, uniform(1.01))
    assert len(results) == 1 and results[0].patterns == {}


def test_db5_all_levels(db5):
    results = mine_all(db5, uniform(0.4))
    assert [r.level for r in results] == [1, 2, 3]
    assert results[0].frequent_items == itemset("1.*.*", "2.*.*")
    assert results[1].patterns == {itemset("1.1.*"): 4, itemset("2.1.*"): 4, itemset("1.2.*"): 2,
                                   itemset("1.1.*", "2.1.*"): 4}
    assert results[2].patterns == {itemset("1.1.1"): 3, itemset("2.1.1"): 3, itemset("1.2.1"): 2,
                                   itemset("1.1.1", "2.1.1"): 2}
    assert all(r.min_count == 2 for r in results)


def test_db5_level2_excludes_descendants_of_infrequent(db5):
    # 3.1.* would reach support 2 if level 1 were mined at count 1 and level 2 at 1
    thresholds = LevelThresholds((Fraction(2, 5), Fraction(1, 5), Fraction(1, 5)), (0.5,) * 3)
    results = mine_all(db5, thresholds)
    for r in results[1:]:
        for s in r.patterns:
            assert all(generalize(i, 1) != item("3.*.*") for i in s)


def test_keep_trees(db5):
    results = mine_all(db5, uniform(0.4), keep_trees=True)
    assert [r.tree.level for r in results] == [1, 2, 3]
    assert mine_all(db5, uniform(0.4))[0].tree is None


def test_threshold_depth_mismatch(db5):
    with pytest.raises(ValueError):
        mine_all(db5, uniform(0.4, depth=2))


def test_check_strong(db5):
    results = mine_all(db5, uniform(0.4))
    assert check_strong(itemset("1.*.*", "3.*.*"), results)
    assert not check_strong(itemset("3.1.*"), results)
    assert check_strong(itemset("1.1.1"), results)
    assert not check_strong(itemset("1.2.1", "3.1.1"), results)


def test_check_strong_missing_level(db5):
    only_first = mine_all(db5, uniform(0.4))[:1]
    with pytest.raises(MissingLevelError):
        check_strong(itemset("1.1.1"), only_first)
    stopped = [LevelResult(1, {}, 6, 5)]
    assert not check_strong(itemset("1.1.1"), stopped)


@settings(max_examples=80, deadline=None)
@given(tables(), st.lists(st.integers(1, 6), min_size=3, max_size=3), st.booleans())
def test_end_to_end_matches_reference(table, counts, parallel):
    thresholds = LevelThresholds(counts_as_minsup(counts, table.n), (0,) * 3)
    results = mine_all(table, thresholds, parallel=parallel)
    real_counts = [thresholds.min_count(l, table.n) for l in (1, 2, 3)]
    assert [r.patterns for r in results] == reference_levels(table, real_counts)
    for r in results:
        for s in r.patterns:
            assert check_strong(s, results)
        if r.level > 1:
            previous = results[r.level - 2].patterns
            for s, support in r.patterns.items():
                if len(s) == 1:
                    parent = frozenset(generalize(i, r.level - 1) for i in s)
                    assert support <= previous[parent]
