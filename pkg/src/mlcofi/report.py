"""Text and JSON renderings of mining results.

Everything is sorted by level, then itemset size, then canonical text, so
identical runs produce byte-identical reports.
"""
from __future__ import annotations

import json
from fractions import Fraction

from .hierarchy import format_itemset
from .rules import format_ratio, format_rule


def _itemset_key(itemset):
    return (len(itemset), format_itemset(itemset))


def sorted_patterns(patterns: dict) -> list:
    return sorted(patterns.items(), key=lambda kv: _itemset_key(kv[0]))


def itemsets_text(results, n: int) -> str:
    """Per level: a ``# level L`` line, then ``itemset<TAB>count<TAB>fraction``."""
    lines = []
    for result in results:
        lines.append(f"# level {result.level}")
        for itemset, support in sorted_patterns(result.patterns):
            lines.append(f"{format_itemset(itemset)}\t{support}\t{format_ratio(Fraction(support, n or 1))}")
    return "\n".join(lines) + "\n" if lines else ""


def rules_text(rules_by_level: dict, n: int) -> str:
    lines = []
    for level in sorted(rules_by_level):
        lines.append(f"# level {level}")
        lines.extend(format_rule(rule, n) for rule in rules_by_level[level])
    return "\n".join(lines) + "\n" if lines else ""


def confirmed_text(rules, n: int) -> str:
    return "".join(format_rule(rule, n) + "\n" for rule in rules)


def results_document(results, n: int, rules_by_level: dict | None = None) -> dict:
    """Single structured document carrying every level."""
    levels = []
    for result in results:
        entry = {
            "level": result.level,
            "min_count": result.min_count,
            "itemsets": [
                {"items": sorted(i.text for i in itemset),
                 "support_count": support,
                 "support_fraction": float(format_ratio(Fraction(support, n or 1)))}
                for itemset, support in sorted_patterns(result.patterns)
            ],
        }
        if rules_by_level is not None:
            entry["rules"] = [
                {"antecedent": sorted(i.text for i in r.antecedent),
                 "consequent": sorted(i.text for i in r.consequent),
                 "support_count": r.support_count,
                 "support_fraction": float(format_ratio(Fraction(r.support_count, n or 1))),
                 "confidence": float(format_ratio(r.confidence))}
                for r in rules_by_level.get(result.level, [])
            ]
        levels.append(entry)
    return {"n": n, "levels": levels}


def results_json(results, n: int, rules_by_level: dict | None = None) -> str:
    return json.dumps(results_document(results, n, rules_by_level), indent=2) + "\n"


def stats_text(results) -> str:
    """Instrumentation summary; includes timings, so not deterministic."""
    lines = ["level\tfpl_nodes\tpeak_cofi_nodes\tratio\tcofi_trees\tcandidates\tpruned\tseconds"]
    for r in results:
        s = r.stats
        lines.append(f"{r.level}\t{s.fpl_nodes}\t{s.peak_cofi_nodes}\t{s.memory_ratio:.4f}\t"
                     f"{s.cofi_trees}\t{s.candidates_generated}\t{s.candidates_pruned}\t"
                     f"{r.seconds:.6f}")
    return "\n".join(lines) + "\n"
