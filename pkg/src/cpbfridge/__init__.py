"""Charge-qubit refrigerator model: two-resonator spectroscopy and Otto-cycle simulation."""

__version__ = "0.1.0"
