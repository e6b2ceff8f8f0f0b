"""Graph states, entanglement measures, and separability certificates."""

__version__ = "0.1.0"

BIT_CONVENTION = "qubit0-most-significant-bit"
