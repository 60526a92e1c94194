"""Conley-Morse persistence barcodes for combinatorial multivector fields."""

__version__ = "0.1.0"
