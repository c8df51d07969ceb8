"""Heights, Varchenko exponents and numerical decay checks for polynomial graphs in R^3."""

__version__ = "0.1.0"
