"""Redundancy analysis for Sudoku constraint models."""

__version__ = "0.1.0"
