"""Exception types raised by the mining pipeline."""


class MiningError(Exception):
    """Base class for all errors raised by mlcofi."""


class ParseError(MiningError, ValueError):
    """Malformed input line.

    Parameters
    ----------
    message : str
        What went wrong.
    lineno : int, optional
        1-based line number in the offending file.
    """

    def __init__(self, message, lineno=None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


class HierarchyError(MiningError, ValueError):
    pass


class ConflictingBarcodeError(HierarchyError):
    def __init__(self, barcode, first, second):
        self.barcode = barcode
        super().__init__(
            f"barcode {barcode!r} listed with conflicting levels {first} and {second}"
        )


class UnknownBarcodeError(MiningError, KeyError):
    def __init__(self, barcode):
        self.barcode = barcode
        super().__init__(barcode)

    def __str__(self):
        return f"unknown barcode {self.barcode!r}"


class ItemNotFoundError(MiningError, KeyError):
    def __init__(self, item):
        self.item = item
        super().__init__(item)

    def __str__(self):
        return f"item {self.item} not found"


class MissingLevelError(MiningError, RuntimeError):
    """A check needed the result of a level that was never mined."""


class VerificationError(MiningError, AssertionError):
    """Tree-based results disagree with the brute-force reference."""

    def __init__(self, level, itemset, got, expected):
        self.level = level
        self.itemset = itemset
        self.got = got
        self.expected = expected
        super().__init__(f"level {level}: itemset {itemset} has support {got}, "
                         f"reference says {expected}")
