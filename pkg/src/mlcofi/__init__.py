"""Multilevel frequent itemset and association rule mining with FP(l)-trees
and COFI-trees."""
from .cofi import MiningStats, build_cofi, local_frequencies, mine_cofi, mine_level
from .estimator import HierarchyEncoder, MultilevelMiner
from .exceptions import (ConflictingBarcodeError, HierarchyError, ItemNotFoundError,
                         MiningError, MissingLevelError, ParseError, UnknownBarcodeError,
                         VerificationError)
from .fptree import FPTree, build_fptree, item_support, transform_fpl
from .hierarchy import (ConceptHierarchy, EncodedItem, encode, generalize, is_ancestor,
                        load_hierarchy, read_hierarchy)
from .miner import LevelResult, LevelThresholds, check_strong, mine_all
from .rules import Rule, build_level_trees, confirm_rules, generate_rules
from .transactions import EncodedTable, filter_table, generalize_table, ingest

__version__ = "0.1.0"

__all__ = [
    "ConceptHierarchy", "ConflictingBarcodeError", "EncodedItem", "EncodedTable", "FPTree",
    "HierarchyEncoder", "HierarchyError", "ItemNotFoundError", "LevelResult",
    "LevelThresholds", "MiningError", "MiningStats", "MissingLevelError", "MultilevelMiner",
    "ParseError", "Rule", "UnknownBarcodeError", "VerificationError", "build_cofi",
    "build_fptree", "build_level_trees", "check_strong", "confirm_rules", "encode",
    "filter_table", "generalize", "generalize_table", "generate_rules", "ingest",
    "is_ancestor", "item_support", "load_hierarchy", "local_frequencies", "mine_all",
    "mine_cofi", "mine_level", "read_hierarchy", "transform_fpl",
]
