"""scikit-learn style front ends.

``HierarchyEncoder`` turns raw barcode transactions into an encoded
table; ``MultilevelMiner`` fits the per-level frequent itemsets and rules.
Both follow the usual conventions (constructor only stores parameters,
fitted state lives in trailing-underscore attributes, ``get_params`` and
``set_params`` come from :class:`~sklearn.base.BaseEstimator`).
"""
from __future__ import annotations

from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .exceptions import VerificationError
from .hierarchy import ConceptHierarchy, load_hierarchy
from .miner import mine_all
from .oracle import first_difference, reference_levels
from .rules import build_level_trees, confirm_rules, generate_rules, parse_rules
from .transactions import ingest
from .utils.validation import check_table, check_thresholds


class HierarchyEncoder(TransformerMixin, BaseEstimator):
    """Encode barcode transactions with a concept hierarchy.

    Parameters
    ----------
    on_unknown_barcode : {"abort", "skip"}
        What to do with barcodes the hierarchy does not know.
    level_names : sequence of str, optional
        Level labels for the item table passed to ``fit``; inferred as
        ``level1..levelD`` when omitted.

    Attributes
    ----------
    hierarchy_ : ConceptHierarchy
    """

    def __init__(self, on_unknown_barcode="abort", level_names=None):
        self.on_unknown_barcode = on_unknown_barcode
        self.level_names = level_names

    def fit(self, X, y=None):
        """`X`: a ConceptHierarchy, or rows ``(barcode, level1, ..., levelD)``."""
        if isinstance(X, ConceptHierarchy):
            self.hierarchy_ = X
        else:
            self.hierarchy_ = load_hierarchy(X, self.level_names)
        return self

    def transform(self, X):
        """`X`: ``(tid, barcodes)`` pairs or bare barcode lists."""
        check_is_fitted(self, "hierarchy_")
        rows = []
        for k, row in enumerate(X, start=1):
            if isinstance(row, tuple) and len(row) == 2 and not isinstance(row[1], str):
                rows.append(row)
            else:
                rows.append((str(k), row))
        return ingest(rows, self.hierarchy_, self.on_unknown_barcode)


class MultilevelMiner(BaseEstimator):
    """Multilevel frequent itemsets and association rules via FP(l)- and COFI-trees.

    Parameters
    ----------
    minsup : float or sequence of float
        Minimum support per level, level 1 first; a single value applies
        to every level.
    minconf : float or sequence of float
        Minimum confidence per level, same broadcasting.
    parallel : bool
        Mine the COFI-trees of each level on a thread pool.
    verify : bool
        Re-run the brute-force reference after fitting and raise
        :class:`VerificationError` on any disagreement.

    Attributes
    ----------
    levels_ : list of LevelResult
    rules_ : dict
        Level to sorted list of :class:`~mlcofi.rules.Rule`.
    thresholds_ : LevelThresholds
    n_transactions_ : int
    """

    def __init__(self, minsup=0.05, minconf=0.5, parallel=False, verify=False):
        self.minsup = minsup
        self.minconf = minconf
        self.parallel = parallel
        self.verify = verify

    def fit(self, X, y=None):
        table = check_table(X)
        self.table_ = table
        self.thresholds_ = check_thresholds(self.minsup, self.minconf, table.level)
        self.n_transactions_ = table.n
        self.levels_ = mine_all(table, self.thresholds_, parallel=self.parallel)
        self.rules_ = {r.level: generate_rules(r, self.thresholds_.confidence(r.level))
                       for r in self.levels_}
        if self.verify:
            self.check_against_reference()
        return self

    def check_against_reference(self):
        check_is_fitted(self, "levels_")
        counts = [self.thresholds_.min_count(lvl, self.n_transactions_)
                  for lvl in range(1, self.table_.level + 1)]
        diff = first_difference([r.patterns for r in self.levels_],
                                reference_levels(self.table_, counts))
        if diff is not None:
            raise VerificationError(*diff)

    def frequent_itemsets(self, level=None) -> dict:
        """Pattern dict of one level, or of all levels merged."""
        check_is_fitted(self, "levels_")
        if level is not None:
            for r in self.levels_:
                if r.level == level:
                    return dict(r.patterns)
            return {}
        merged = {}
        for r in self.levels_:
            merged.update(r.patterns)
        return merged

    def confirm(self, candidates):
        """Confirm candidate rules (Rule objects or ``A => B`` lines)."""
        check_is_fitted(self, "levels_")
        candidates = list(candidates)
        if candidates and isinstance(candidates[0], str):
            candidates = parse_rules(candidates)
        if not hasattr(self, "level_trees_"):
            self.level_trees_ = build_level_trees(self.table_)
        return confirm_rules(candidates, self.levels_, self.level_trees_, self.thresholds_)
