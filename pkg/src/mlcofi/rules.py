"""Association rules: generation from frequent itemsets and confirmation
of candidate rules that may mix concept levels."""
from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from itertools import combinations, count, product
from typing import Iterable, Mapping

from .exceptions import ItemNotFoundError, ParseError
from .fptree import FPTree, build_fptree, transform_fpl
from .hierarchy import ConceptHierarchy, covers, format_itemset, is_ancestor, parse_itemset
from .miner import LevelResult, LevelThresholds, as_fraction, check_strong
from .transactions import EncodedTable

CANDIDATE, CONFIRMED, REJECTED = "candidate", "confirmed", "rejected"


@dataclass(frozen=True)
class Rule:
    """``antecedent => consequent`` with exact support and confidence.

    `support_count` and `confidence` are None for a candidate whose
    support has not been computed yet.
    """

    antecedent: frozenset
    consequent: frozenset
    support_count: int | None = None
    confidence: Fraction | None = None
    group_id: str | None = None
    status: str = CANDIDATE

    def __post_init__(self):
        object.__setattr__(self, "antecedent", frozenset(self.antecedent))
        object.__setattr__(self, "consequent", frozenset(self.consequent))
        if not self.antecedent or not self.consequent:
            raise ValueError("both sides of a rule must be non-empty")
        if self.antecedent & self.consequent:
            raise ValueError("antecedent and consequent overlap")
        for a in self.antecedent:
            for b in self.consequent:
                if is_ancestor(a, b) or is_ancestor(b, a):
                    raise ValueError(f"{a} and {b} lie on one branch of the hierarchy")

    @property
    def items(self) -> frozenset:
        return self.antecedent | self.consequent

    def is_atomic(self, depth: int) -> bool:
        return all(i.level == depth for i in self.items)

    def sort_key(self):
        return (len(self.items), format_itemset(self.antecedent), format_itemset(self.consequent))

    def __str__(self):
        return f"{format_itemset(self.antecedent)} => {format_itemset(self.consequent)}"


def format_ratio(value: Fraction, places: int = 4) -> str:
    """Render a rational with fixed decimals, rounding half to even exactly."""
    scaled = round(Fraction(value) * 10 ** places)
    sign = "-" if scaled < 0 else ""
    whole, frac = divmod(abs(scaled), 10 ** places)
    return f"{sign}{whole}.{frac:0{places}d}"


def format_rule(rule: Rule, n: int) -> str:
    """``A => B<TAB>support_count<TAB>support_fraction<TAB>confidence``."""
    return "\t".join([str(rule), str(rule.support_count),
                      format_ratio(Fraction(rule.support_count, n) if n else Fraction(0)),
                      format_ratio(rule.confidence)])


def generate_rules(level_result: LevelResult, minconf) -> list:
    """Every ``A => X - A`` over frequent itemsets X with confidence >= `minconf`.

    Subsets of a frequent itemset are frequent, so antecedent supports are
    read straight from the pattern set.
    """
    minconf = as_fraction(minconf)
    patterns = level_result.patterns
    rules = []
    for itemset, support in patterns.items():
        if len(itemset) < 2:
            continue
        members = sorted(itemset)
        for size in range(1, len(members)):
            for ante in combinations(members, size):
                a = frozenset(ante)
                conf = Fraction(support, patterns[a])
                if conf >= minconf:
                    rules.append(Rule(a, itemset - a, support, conf, status=CONFIRMED))
    rules.sort(key=Rule.sort_key)
    return rules


def build_level_trees(table: EncodedTable) -> dict:
    """Unpruned FP-trees for every level, as needed by :func:`confirm_rules`.

    Built with a count of 1 and no ancestor filter so that every
    transaction's items survive at every level.
    """
    atomic = build_fptree(table, 1)
    trees = {atomic.level: atomic}
    for level in range(1, atomic.level):
        trees[level] = transform_fpl(atomic, level, 1)
    return trees


def _check_present(trees: Mapping[int, FPTree], item):
    tree = trees.get(item.level)
    if tree is None or item not in tree.header:
        raise ItemNotFoundError(item)


def tree_support(trees: Mapping[int, FPTree], itemset) -> int:
    """Support of a possibly mixed-level itemset, read from the FP-trees.

    The deepest item picks the tree.  Its node chain is followed and each
    node's full transactions (the path above it plus every branch below)
    are tested for a match of every other item, where a transaction item
    matches a more general item it descends from.
    """
    itemset = frozenset(itemset)
    for item in itemset:
        _check_present(trees, item)
    pivot = max(itemset, key=lambda i: (i.level, i.text))
    others = [x for x in itemset if x != pivot]
    need = len(others)
    total = 0
    for node in trees[pivot.level].nodes(pivot):
        above = node.path_items()
        # the pivot node itself may cover an ancestor listed alongside it
        got = frozenset(x for x in others
                        if covers(x, pivot) or any(covers(x, t) for t in above))
        stack = [(node, got)]
        while stack:
            here, got = stack.pop()
            if len(got) == need:
                total += here.count
                continue
            for child in here.children.values():
                extra = [x for x in others if x not in got and covers(x, child.item)]
                stack.append((child, got.union(extra) if extra else got))
    return total


def confirm_rules(candidates: Iterable[Rule], level_results: list | None,
                  fp_trees: Mapping[int, FPTree], thresholds: LevelThresholds) -> list:
    """Confirm candidate rules against the per-level FP-trees.

    For each candidate lacking a support, the support counts of the whole
    rule and of its antecedent are computed from the trees (see
    :func:`tree_support`).  A rule is kept when its support reaches the
    minimum count and its confidence the minimum confidence of the level
    of its deepest item, and, when `level_results` are given, every
    ancestor of its items was frequent.  Keeping a generalized rule
    deletes the atomic rules that share its group id.

    Parameters
    ----------
    fp_trees : mapping of level to FPTree
        Unpruned trees, see :func:`build_level_trees`.

    Returns
    -------
    list of Rule
        The confirmed set, sorted.
    """
    depth = max(fp_trees)
    n = fp_trees[depth].n
    decided = []
    for rule in candidates:
        items = rule.items
        for item in items:
            _check_present(fp_trees, item)
        level = max(i.level for i in items)
        if rule.support_count is None or rule.confidence is None:
            s = tree_support(fp_trees, items)
            s_ante = tree_support(fp_trees, rule.antecedent)
            conf = Fraction(s, s_ante) if s_ante else None
        else:
            s, conf = rule.support_count, Fraction(rule.confidence)
        ok = (conf is not None
              and s >= thresholds.min_count(level, n)
              and conf >= thresholds.confidence(level))
        if ok and level_results is not None:
            ok = check_strong(items, level_results)
        decided.append(replace(rule, support_count=s, confidence=conf,
                               status=CONFIRMED if ok else REJECTED))

    superseded = {r.group_id for r in decided
                  if r.status == CONFIRMED and r.group_id is not None and not r.is_atomic(depth)}
    confirmed = [r for r in decided
                 if r.status == CONFIRMED
                 and not (r.is_atomic(depth) and r.group_id in superseded)]
    confirmed.sort(key=Rule.sort_key)
    return confirmed


_group_ids = count(1)


def new_group_id() -> str:
    return f"G{next(_group_ids)}"


def specializations(rule: Rule, hierarchy: ConceptHierarchy) -> list:
    """Atomic rules obtained by replacing each item by one of its leaves.

    The results inherit `rule`'s group id (a fresh one is assigned to
    `rule` first if it has none; the returned first element is that rule).
    """
    if rule.group_id is None:
        rule = replace(rule, group_id=new_group_id())
    leaves = sorted(hierarchy.leaves())
    ante = sorted(rule.antecedent)
    cons = sorted(rule.consequent)
    choices = [[leaf for leaf in leaves if covers(item, leaf)] for item in ante + cons]
    out = [rule]
    seen = set()
    for pick in product(*choices):
        a, b = frozenset(pick[:len(ante)]), frozenset(pick[len(ante):])
        if len(a) != len(ante) or len(b) != len(cons) or a & b or (a, b) in seen:
            continue
        seen.add((a, b))
        if a == rule.antecedent and b == rule.consequent:
            continue
        out.append(Rule(a, b, group_id=rule.group_id))
    return out


def parse_rules(lines: Iterable[str]) -> list:
    """Parse ``A => B`` lines, with an optional ``<TAB>group_id`` field.

    Blank lines and lines starting with ``#`` are skipped.
    """
    rules = []
    for lineno, line in enumerate(lines, start=1):
        text = line.strip()
        if not text or text.startswith("#"):
            continue
        body, _, group = line.rstrip("\r\n").partition("\t")
        lhs, arrow, rhs = body.partition("=>")
        if not arrow:
            raise ParseError("missing '=>'", lineno)
        try:
            rules.append(Rule(parse_itemset(lhs), parse_itemset(rhs), group_id=group.strip() or None))
        except ValueError as exc:
            raise ParseError(str(exc), lineno) from None
    return rules


def read_rules(path) -> list:
    with open(path, encoding="utf-8") as fh:
        return parse_rules(fh)
