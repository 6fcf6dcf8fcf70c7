"""Cooper-pair box and qubit-resonator-resonator Hamiltonians.

Energies are E/h in Hz. The two-level engine works in the qubit eigenbasis
ordered (ground, excited) with sigma_z = diag(1, -1), i.e. the ground state
is the +1 eigenvector, and in the charge basis sigma_z|0> = +|0>.
"""
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import kernels
from .errors import ConvergenceFailure, DimensionOverflow, TargetBelowMinimum
from .units import E_CHARGE, H

DEFAULT_MAX_DIM = 4096


@dataclass(frozen=True)
class QubitParams:
    ec_over_h: float = 6.8e9
    ej_over_h: float = 3.5e9
    n_charge_min: int = -2
    n_charge_max: int = 3

    def __post_init__(self):
        if not (self.ec_over_h > 0 and self.ej_over_h > 0):
            raise ValueError("charging and Josephson energies must be positive")
        if self.n_charge_max - self.n_charge_min < 1:
            raise ValueError("charge truncation needs at least two charge states")

    @property
    def charge_states(self):
        return np.arange(self.n_charge_min, self.n_charge_max + 1)


@dataclass(frozen=True)
class ResonatorParams:
    f_r: float
    q_total: float
    g0_over_2pi: float
    n_fock: int = 5
    role: str = "cold"

    def __post_init__(self):
        if self.f_r <= 0 or self.q_total <= 0:
            raise ValueError("resonator frequency and quality factor must be positive")
        if self.n_fock < 2:
            raise ValueError("n_fock must be at least 2")
        if self.role not in ("cold", "hot"):
            raise ValueError(f"role must be 'cold' or 'hot', got {self.role!r}")


@dataclass(frozen=True)
class CouplingGeometry:
    c_coupler: float
    c_sigma: float
    c_gate: float
    resonator_length: float
    cap_per_length: float

    def __post_init__(self):
        vals = (self.c_coupler, self.c_sigma, self.c_gate, self.resonator_length, self.cap_per_length)
        if any(v <= 0 for v in vals):
            raise ValueError("all coupling geometry fields must be positive")
        if self.c_coupler >= self.c_sigma:
            raise ValueError("coupler capacitance must be smaller than the total island capacitance")

    @property
    def capacitance_ratio(self):
        """C_i / C_sigma, the lever arm of the resonator voltage on the island."""
        return self.c_coupler / self.c_sigma


@dataclass(frozen=True)
class Spectrum:
    eigenvalues: np.ndarray
    labels: Optional[tuple] = field(default=None)

    def transitions(self):
        return self.eigenvalues[1:]


def _check_ng(ng):
    ng = float(ng)
    if not math.isfinite(ng):
        raise ValueError(f"gate charge must be finite, got {ng}")
    return ng


def build_charge_hamiltonian(q: QubitParams, ng: float) -> np.ndarray:
    ng = _check_ng(ng)
    n = q.charge_states
    diag = 4.0 * q.ec_over_h * (n - ng) ** 2
    off = np.full(len(n) - 1, -0.5 * q.ej_over_h)
    return np.diag(diag) + np.diag(off, 1) + np.diag(off, -1)


def qubit_frequency(q: QubitParams, ng) -> float:
    """Two-level transition frequency sqrt(16 Ec^2 (1-2 ng)^2 + Ej^2) in Hz."""
    u = 4.0 * q.ec_over_h * (1.0 - 2.0 * np.asarray(ng, dtype=float))
    f = np.sqrt(u * u + q.ej_over_h**2)
    return float(f) if np.ndim(f) == 0 else f


def gate_charge_for_frequency(q: QubitParams, f_target: float, branch: str = "below_half") -> float:
    if f_target < q.ej_over_h:
        raise TargetBelowMinimum(
            f"target {f_target:.6g} Hz is below the qubit frequency floor Ej/h = {q.ej_over_h:.6g} Hz"
        )
    r = math.sqrt(f_target**2 - q.ej_over_h**2) / (4.0 * q.ec_over_h)
    if branch == "below_half":
        return 0.5 * (1.0 - r)
    if branch == "above_half":
        return 0.5 * (1.0 + r)
    raise ValueError(f"unknown branch {branch!r}")


def mixing_angle(q: QubitParams, ng) -> float:
    """Mixing angle in (0, pi); equals pi/2 at the degeneracy point."""
    u = 4.0 * q.ec_over_h * (1.0 - 2.0 * np.asarray(ng, dtype=float))
    th = np.arctan2(q.ej_over_h, u)
    return float(th) if np.ndim(th) == 0 else th


def bare_coupling(geom: CouplingGeometry, f_r: float) -> float:
    """Bare coupling g0/2pi in Hz: e (C_i/C_sigma) sqrt(h f_r / (l c)) divided by h."""
    energy = E_CHARGE * geom.capacitance_ratio * math.sqrt(H * f_r / (geom.resonator_length * geom.cap_per_length))
    return energy / H


def _annihilation(n):
    return np.diag(np.sqrt(np.arange(1, n, dtype=float)), 1)


def qubit_interaction_operator(q: QubitParams, ng: float, rotating_wave: bool = False) -> np.ndarray:
    """Qubit factor of the resonator coupling in the (ground, excited) eigenbasis.

    Equals (1 - 2 ng) - cos(theta) sz + sin(theta) sx, which is 2(N - ng)
    expressed in the eigenbasis. With ``rotating_wave`` only the
    sin(theta) sx part is kept (its energy-conserving half is chosen when
    the resonator operators are attached).
    """
    th = mixing_angle(q, ng)
    sz = np.diag([1.0, -1.0])
    sx = np.array([[0.0, 1.0], [1.0, 0.0]])
    if rotating_wave:
        return math.sin(th) * sx
    return (1.0 - 2.0 * ng) * np.eye(2) - math.cos(th) * sz + math.sin(th) * sx


def build_full_hamiltonian(
    q: QubitParams,
    res_c: ResonatorParams,
    res_h: ResonatorParams,
    ng: float,
    g_tilde: float = 0.0,
    *,
    rotating_wave: bool = False,
    max_dim: int = DEFAULT_MAX_DIM,
) -> np.ndarray:
    """Qubit (two-level) + two resonators, ordered qubit x cold x hot.

    ``rotating_wave=True`` replaces the interaction by the Jaynes-Cummings
    form g0 sin(theta) (a s+ + a^dag s-); the default keeps every term.
    """
    ng = _check_ng(ng)
    nc, nh = res_c.n_fock, res_h.n_fock
    dim = 2 * nc * nh
    if dim > max_dim:
        raise DimensionOverflow(f"Hilbert space dimension {dim} exceeds cap {max_dim}")
    fq = qubit_frequency(q, ng)
    iq, ic, ih = np.eye(2), np.eye(nc), np.eye(nh)
    ac, ah = _annihilation(nc), _annihilation(nh)
    hq = np.diag([-0.5 * fq, 0.5 * fq])

    h = np.kron(hq, np.kron(ic, ih))
    h += res_c.f_r * np.kron(iq, np.kron(ac.T @ ac, ih))
    h += res_h.f_r * np.kron(iq, np.kron(ic, ah.T @ ah))
    if rotating_wave:
        sin_th = math.sin(mixing_angle(q, ng))
        s_plus = np.array([[0.0, 0.0], [1.0, 0.0]])  # |e><g|
        for g0, a_c, a_h in ((res_c.g0_over_2pi, ac, ic), (res_h.g0_over_2pi, ic, ah)):
            a_full = np.kron(a_c, a_h)
            term = g0 * sin_th * np.kron(s_plus, a_full)
            h += term + term.T
    else:
        bracket = qubit_interaction_operator(q, ng)
        h += res_c.g0_over_2pi * np.kron(bracket, np.kron(ac + ac.T, ih))
        h += res_h.g0_over_2pi * np.kron(bracket, np.kron(ic, ah + ah.T))
    if g_tilde:
        hop = np.kron(ac.T, ah)
        h += g_tilde * np.kron(iq, hop + hop.T)
    return h


def eigensolve_hermitian(m, *, method="jacobi", tol=1e-12, max_sweeps=100):
    """Eigenvalues (ascending) and orthonormal eigenvectors (columns).

    ``method="jacobi"`` runs the cyclic Jacobi kernel; ``"lapack"`` defers to
    numpy and serves as an independent cross-check.
    """
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("matrix must be square")
    norm = np.linalg.norm(m)
    if norm > 0 and np.linalg.norm(m - m.conj().T) > 1e-9 * norm:
        raise ValueError("matrix is not Hermitian")
    if method == "lapack":
        return np.linalg.eigh(m)
    if method != "jacobi":
        raise ValueError(f"unknown method {method!r}")
    w, v, sweeps, converged = kernels.jacobi_eigh(np.ascontiguousarray(m, dtype=np.complex128), tol, max_sweeps)
    if not converged:
        raise ConvergenceFailure(f"Jacobi did not converge in {max_sweeps} sweeps")
    order = np.argsort(w, kind="stable")
    w = np.asarray(w)[order]
    v = np.asarray(v)[:, order]
    if np.isrealobj(m):
        # real symmetric input: rotations stay real up to rounding
        if np.max(np.abs(v.imag), initial=0.0) < 1e-12:
            v = v.real.copy()
    return w, v


def charge_spectrum(q: QubitParams, ng: float, levels: Optional[int] = None, *, relative=True, method="jacobi"):
    w, _ = eigensolve_hermitian(build_charge_hamiltonian(q, ng), method=method)
    if relative:
        w = w - w[0]
    if levels is not None:
        w = w[:levels]
    return Spectrum(eigenvalues=w)


def full_spectrum(q, res_c, res_h, ng, g_tilde=0.0, *, rotating_wave=False, method="jacobi"):
    """Dressed spectrum relative to the ground level with (n_q, n_c, n_h) labels of the dominant component."""
    h = build_full_hamiltonian(q, res_c, res_h, ng, g_tilde, rotating_wave=rotating_wave)
    w, v = eigensolve_hermitian(h, method=method)
    nc, nh = res_c.n_fock, res_h.n_fock
    dominant = np.argmax(np.abs(v) ** 2, axis=0)
    labels = tuple((int(k // (nc * nh)), int((k // nh) % nc), int(k % nh)) for k in dominant)
    return Spectrum(eigenvalues=w - w[0], labels=labels), v
