"""Shared exception types."""


class CapacityError(ValueError):
    """An input exceeds the size the package is built to handle."""


class Graph6Error(ValueError):
    """A graph6 string failed to parse."""
