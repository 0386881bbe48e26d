"""Combinatorial models for stable homotopy: pointed and stable simplicial complexes,
sequential spectra, Theta cells, and finite weighted limits."""

__version__ = "0.1.0"
