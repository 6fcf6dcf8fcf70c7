"""Gate-charge drive waveform, instantaneous qubit frequency and adiabaticity.

Phase convention: t = 0 sits at the hot endpoint (q = 1, ng = ng_h).
"""
import math
from dataclasses import dataclass

import numpy as np

from .qubit import QubitParams, gate_charge_for_frequency, qubit_frequency


@dataclass(frozen=True)
class DriveProtocol:
    f_drive: float
    ng_c: float
    ng_h: float
    a: float = 2.0
    samples_per_period: int = 64
    waveform: str = "trapezoid"  # or "sine" (debug option)

    def __post_init__(self):
        if self.f_drive <= 0:
            raise ValueError("f_drive must be positive")
        if self.a <= 0:
            raise ValueError("sharpness a must be positive")
        if self.ng_c == self.ng_h:
            raise ValueError("ng_c and ng_h must differ")
        if self.samples_per_period < 64:
            raise ValueError("samples_per_period must be at least 64")
        if self.waveform not in ("trapezoid", "sine"):
            raise ValueError(f"unknown waveform {self.waveform!r}")

    @property
    def period(self):
        return 1.0 / self.f_drive

    @classmethod
    def between_frequencies(cls, q: QubitParams, f_c, f_h, f_drive, a=2.0, **kw):
        """Endpoints chosen so the qubit is resonant with f_c and f_h (ng < 1/2 branch)."""
        return cls(
            f_drive=f_drive,
            ng_c=gate_charge_for_frequency(q, f_c),
            ng_h=gate_charge_for_frequency(q, f_h),
            a=a,
            **kw,
        )

    def with_frequency(self, f_drive):
        return DriveProtocol(f_drive, self.ng_c, self.ng_h, self.a, self.samples_per_period, self.waveform)

    def as_kernel_array(self, q: QubitParams):
        return np.array(
            [q.ec_over_h, q.ej_over_h, self.ng_c, self.ng_h, self.f_drive, self.a,
             1.0 if self.waveform == "sine" else 0.0]
        )


def q_waveform(p: DriveProtocol, t):
    """Truncated trapezoid 0.5 [1 + tanh(a cos 2 pi f t) / tanh a], in [0, 1]."""
    phase = 2.0 * np.pi * p.f_drive * np.asarray(t, dtype=float)
    if p.waveform == "sine":
        out = 0.5 * (1.0 + np.cos(phase))
    else:
        out = 0.5 * (1.0 + np.tanh(p.a * np.cos(phase)) / math.tanh(p.a))
    return float(out) if np.ndim(out) == 0 else out


def dq_dt(p: DriveProtocol, t):
    phase = 2.0 * np.pi * p.f_drive * np.asarray(t, dtype=float)
    w = 2.0 * np.pi * p.f_drive
    if p.waveform == "sine":
        out = -0.5 * w * np.sin(phase)
    else:
        th = np.tanh(p.a * np.cos(phase))
        out = -0.5 * (1.0 - th * th) * p.a * w * np.sin(phase) / math.tanh(p.a)
    return float(out) if np.ndim(out) == 0 else out


def ng_of_t(p: DriveProtocol, t):
    return p.ng_c + (p.ng_h - p.ng_c) * q_waveform(p, t)


def dng_dt(p: DriveProtocol, t):
    return (p.ng_h - p.ng_c) * dq_dt(p, t)


def qubit_frequency_of_t(q: QubitParams, p: DriveProtocol, t):
    return qubit_frequency(q, ng_of_t(p, t))


def mixing_angle_rate(q: QubitParams, p: DriveProtocol, t):
    """d(theta)/dt = 8 Ec Ej dng/dt / f_Q^2 in rad/s (energies as Hz)."""
    fq = qubit_frequency_of_t(q, p, t)
    return 8.0 * q.ec_over_h * q.ej_over_h * dng_dt(p, t) / fq**2


def adiabaticity_metric(q: QubitParams, p: DriveProtocol, t):
    """|d(theta)/dt| / omega_Q: the non-adiabatic Bloch coupling relative to the level splitting."""
    fq = qubit_frequency_of_t(q, p, t)
    return np.abs(mixing_angle_rate(q, p, t)) / (2.0 * np.pi * fq)


def max_adiabaticity(q: QubitParams, p: DriveProtocol, samples=None):
    n = samples or max(p.samples_per_period, 1024)
    t = np.arange(n) / n * p.period
    return float(np.max(adiabaticity_metric(q, p, t)))
