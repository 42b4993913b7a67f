from fractions import Fraction

import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from mlcofi import HierarchyEncoder, MultilevelMiner
from mlcofi.exceptions import VerificationError
from mlcofi.hierarchy import read_hierarchy

from conftest import itemset

HIERARCHY = [("20005", "milk", "plain", "small"), ("20006", "milk", "lowfat", "small"),
             ("30001", "bread", "plain", "small"), ("30002", "bread", "plain", "large"),
             ("20007", "milk", "plain", "large"), ("40001", "fruit", "plain", "small")]
BASKETS = [["20005", "30001"], ["20005", "20006", "30002"], ["20007", "30001"],
           ["20005", "30001", "40001"], ["20006"]]


def test_params_roundtrip():
    miner = MultilevelMiner(minsup=[0.06, 0.03, 0.03], minconf=0.5)
    assert miner.get_params() == {"minsup": [0.06, 0.03, 0.03], "minconf": 0.5,
                                  "parallel": False, "verify": False}
    other = clone(miner).set_params(parallel=True)
    assert other.parallel and not miner.parallel
    assert HierarchyEncoder().get_params() == {"on_unknown_barcode": "abort", "level_names": None}


def test_not_fitted():
    with pytest.raises(NotFittedError):
        HierarchyEncoder().transform(BASKETS)
    with pytest.raises(NotFittedError):
        MultilevelMiner().frequent_itemsets()


def test_pipeline_db5(db5):
    table = HierarchyEncoder().fit(HIERARCHY).transform(BASKETS)
    assert list(table) == list(db5)
    miner = MultilevelMiner(minsup=0.4, minconf=0.6, verify=True).fit(table)
    assert miner.n_transactions_ == 5
    assert miner.frequent_itemsets(2)[itemset("1.1.*", "2.1.*")] == 4
    assert miner.frequent_itemsets(9) == {}
    assert len(miner.frequent_itemsets()) == 11
    assert [str(r) for r in miner.rules_[3]] == ["1.1.1 => 2.1.1", "2.1.1 => 1.1.1"]
    (confirmed,) = miner.confirm(["1.*.* => 2.1.1"])
    assert confirmed.confidence == Fraction(3, 5)


def test_encoder_accepts_hierarchy_and_tids(data_dir):
    h = read_hierarchy(data_dir / "db5_hierarchy.csv")
    table = HierarchyEncoder().fit(h).transform([("A", ["20008"]), ("B", ["30002"])])
    assert table.transactions[0] == ("A", itemset("1.1.1"))


def test_encoder_skip():
    table = HierarchyEncoder(on_unknown_barcode="skip").fit(HIERARCHY).transform([["1", "20005"]])
    assert list(table) == [itemset("1.1.1")]


def test_text_items_accepted():
    miner = MultilevelMiner(minsup=0.6).fit([["1.1"], ["1.1", "2.1"]])
    assert miner.frequent_itemsets(1) == {itemset("1.*"): 2}


def test_bad_input():
    with pytest.raises(TypeError):
        MultilevelMiner().fit(42)
    with pytest.raises(TypeError):
        MultilevelMiner().fit("1.1.1")
    with pytest.raises(ValueError):
        MultilevelMiner(minsup=[0.1, 0.1]).fit(HierarchyEncoder().fit(HIERARCHY).transform(BASKETS))


def test_verify_raises(db5, monkeypatch):
    import mlcofi.estimator as est
    monkeypatch.setattr(est, "reference_levels", lambda table, counts: [{}])
    with pytest.raises(VerificationError):
        MultilevelMiner(minsup=0.4, verify=True).fit(db5)
