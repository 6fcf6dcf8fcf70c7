"""ABCD two-port algebra and the series-L / shunt-C / series-L gate filter."""
import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import ShuntShortCircuit, SingularNetwork
from .units import TWO_PI


@dataclass(frozen=True)
class TwoPortABCD:
    """Chain matrix [[a, b], [c, d]]; b in ohm, c in siemens.

    Entries may be scalars or equally shaped arrays (one network per frequency).
    """

    a: complex
    b: complex
    c: complex
    d: complex

    @classmethod
    def identity(cls):
        return cls(1.0 + 0j, 0j, 0j, 1.0 + 0j)

    @property
    def determinant(self):
        return self.a * self.d - self.b * self.c

    def __matmul__(self, other: "TwoPortABCD") -> "TwoPortABCD":
        return TwoPortABCD(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def as_array(self):
        return np.array([[self.a, self.b], [self.c, self.d]])


@dataclass(frozen=True)
class LCLFilter:
    inductance: float
    capacitance: float
    z0: float = 50.0

    def __post_init__(self):
        if self.inductance <= 0 or self.capacitance <= 0 or self.z0 <= 0:
            raise ValueError("inductance, capacitance and z0 must be positive")


def series_element(z) -> TwoPortABCD:
    z = np.asarray(z, dtype=complex)
    return TwoPortABCD(np.ones_like(z), z, np.zeros_like(z), np.ones_like(z))


def shunt_element(z) -> TwoPortABCD:
    z = np.asarray(z, dtype=complex)
    if np.any(z == 0):
        raise ShuntShortCircuit("shunt impedance of zero shorts the line")
    return TwoPortABCD(np.ones_like(z), np.zeros_like(z), 1.0 / z, np.ones_like(z))


def cascade(networks: Iterable[TwoPortABCD]) -> TwoPortABCD:
    """Ordered product, first element nearest the source."""
    out = TwoPortABCD.identity()
    for net in networks:
        out = out @ net
    return out


def s21(net: TwoPortABCD, z0=50.0):
    den = net.a + net.b / z0 + net.c * z0 + net.d
    if np.any(den == 0):
        raise SingularNetwork("S21 denominator vanishes")
    out = 2.0 / den
    return complex(out) if np.ndim(out) == 0 else out


def impedances(f, filt: LCLFilter):
    """(Z_L, Z_C) = (j w L, 1 / (j w C))."""
    w = TWO_PI * np.asarray(f, dtype=float)
    return 1j * w * filt.inductance, 1.0 / (1j * w * filt.capacitance)


def lcl_network(f, filt: LCLFilter) -> TwoPortABCD:
    zl, zc = impedances(f, filt)
    return cascade([series_element(zl), shunt_element(zc), series_element(zl)])


def lcl_s21(f, filt: LCLFilter):
    """Closed-form S21 of the symmetric LCL filter between equal terminations."""
    f = np.asarray(f, dtype=float)
    if np.any(f <= 0):
        raise ValueError("frequency must be positive")
    zl, zc = impedances(f, filt)
    z0 = filt.z0
    out = 2.0 * z0 * zc / (2.0 * z0 * (zl + zc) + (2.0 * zl * zc + zl * zl) + z0 * z0)
    return complex(out) if np.ndim(out) == 0 else out


def lcl_cutoff(filt: LCLFilter):
    """sqrt(2 / (L C)) / 2 pi in Hz."""
    return math.sqrt(2.0 / (filt.inductance * filt.capacitance)) / TWO_PI


def db(s):
    return 20.0 * np.log10(np.abs(s))
