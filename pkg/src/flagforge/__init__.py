"""Flag graphs of complements of 2-point-transitive linear spaces."""

__version__ = "0.1.0"
