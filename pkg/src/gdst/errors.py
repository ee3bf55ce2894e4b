"""Shared exception types."""


class GdstError(Exception):
    pass


class ParseError(GdstError):
    def __init__(self, message, offset):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset


class DialectError(GdstError):
    pass


class EnvError(GdstError):
    pass


class StageOrderError(GdstError):
    pass


class BudgetError(GdstError):
    """A configured resource budget was exceeded (never a semantic U)."""


class NotInflationaryError(GdstError):
    def __init__(self, w):
        super().__init__(f"operator shrinks input {w:#x}")
        self.w = w
