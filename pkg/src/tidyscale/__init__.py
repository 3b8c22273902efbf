"""Scale functions, tidy subgroups and contraction groups, computed exactly."""

__version__ = "0.1.0"
