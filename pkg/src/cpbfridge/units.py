"""Physical constants and unit-suffixed quantity parsing.

All energies in the package are stored as E/h in Hz. Angular frequencies
(rad/s) only appear inside rate and ODE formulas.
"""
import math
import re

from scipy import constants

H = constants.h
HBAR = constants.hbar
KB = constants.k
E_CHARGE = constants.e
TWO_PI = 2.0 * constants.pi

# k_B/h in Hz/K
KB_OVER_H = KB / H

_PREFIX_EXP = {
    "a": -18, "f": -15, "p": -12, "n": -9, "u": -6, "µ": -6, "m": -3,
    "": 0, "k": 3, "M": 6, "G": 9, "T": 12,
}

# base unit symbol -> dimension tag
BASE_UNITS = {
    "Hz": "frequency",
    "K": "temperature",
    "s": "time",
    "H": "inductance",
    "F": "capacitance",
    "W": "power",
    "Ohm": "resistance",
    "m": "length",
    "F/m": "capacitance_density",
    "rad/s": "angular_rate",
    "1/s": "rate",
    "1/W": "inverse_power",
}

_QUANTITY = re.compile(
    r"^\s*(?P<num>[+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?)\s*(?P<unit>\S+)?\s*$"
)


class UnitError(ValueError):
    pass


def _split_unit(unit):
    """Return (exponent, base) for a prefixed unit symbol."""
    if unit in BASE_UNITS:
        return 0, unit
    for prefix, exp in _PREFIX_EXP.items():
        if prefix and unit.startswith(prefix) and unit[len(prefix):] in BASE_UNITS:
            return exp, unit[len(prefix):]
    raise UnitError(f"unknown unit {unit!r}")


def parse_quantity(text, dimension=None):
    """Parse ``"6.8 GHz"`` into a float in base SI units.

    The mantissa and prefix exponent are combined in the decimal string
    before conversion, so ``"300 mK"`` gives exactly ``0.3``.
    """
    if isinstance(text, bool):
        raise UnitError(f"expected a quantity, got {text!r}")
    if isinstance(text, (int, float)):
        if dimension is not None:
            raise UnitError(f"missing unit suffix (expected {dimension})")
        return float(text)
    m = _QUANTITY.match(str(text))
    if m is None:
        raise UnitError(f"cannot parse quantity {text!r}")
    unit = m.group("unit")
    if unit is None:
        if dimension is not None:
            raise UnitError(f"missing unit suffix in {text!r} (expected {dimension})")
        return float(m.group("num"))
    exp, base = _split_unit(unit)
    if dimension is not None and BASE_UNITS[base] != dimension:
        raise UnitError(f"{text!r} has dimension {BASE_UNITS[base]}, expected {dimension}")
    num = m.group("num")
    if "e" in num.lower():
        mant, e = re.split("[eE]", num)
        return float(f"{mant}e{int(e) + exp}")
    return float(f"{num}e{exp}")


def format_quantity(value, base_unit):
    """Inverse of :func:`parse_quantity` using the base unit and ``repr``."""
    return f"{float(value)!r} {base_unit}"


def bose_factor(f_hz, temperature):
    """1/(1 - exp(-h f / k_B T)), the stimulated+spontaneous emission factor."""
    x = f_hz / (KB_OVER_H * temperature)
    return 1.0 / -math.expm1(-x)
