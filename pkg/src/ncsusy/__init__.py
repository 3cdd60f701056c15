"""Noncommutative supersymmetric Landau problem: star algebra, SUSY engine and spectra."""

__version__ = "0.1.0"
