from .validation import check_fraction_list, check_table, check_thresholds

__all__ = ["check_fraction_list", "check_table", "check_thresholds"]
