"""Errors shared across modules."""


class SizeBound(ValueError):
    """An input exceeds the size a brute-force routine is configured for."""


class NotWHB(ValueError):
    """The operation needs an algebra in which the WHB axioms hold."""
