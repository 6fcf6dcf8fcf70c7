"""Lab-frame density-matrix oracle for the driven qubit.

The qubit is kept in the two-state charge basis {|0>, |1>}; the jump
operators connect the instantaneous eigenstates of the charge Hamiltonian.
This path shares no integrator code with the rotating-frame Bloch solver and
is used to cross-check it.
"""
import numpy as np
from scipy.linalg import expm

from . import drive as drv
from .otto import OttoConfig, rate_set
from .units import TWO_PI

_SX = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
_SZ = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
_I2 = np.eye(2, dtype=complex)


def two_level_hamiltonian(cfg: OttoConfig, t):
    """Traceless charge-basis Hamiltonian H/h (Hz), shape (..., 2, 2)."""
    q = cfg.qubit
    ng = np.asarray(drv.ng_of_t(cfg.drive, t), dtype=float)
    u = 4.0 * q.ec_over_h * (1.0 - 2.0 * ng)
    return -0.5 * (u[..., None, None] * _SZ + q.ej_over_h * _SX)


def instantaneous_eigenbasis(cfg: OttoConfig, t):
    """(ground, excited) eigenvectors from a numerical diagonalization."""
    _, v = np.linalg.eigh(two_level_hamiltonian(cfg, t))
    return v[..., :, 0], v[..., :, 1]


def _jump_operators(cfg, t):
    g, e = instantaneous_eigenbasis(cfg, t)
    s_minus = np.einsum("...i,...j->...ij", g, e.conj())  # |g><e|
    s_plus = np.swapaxes(s_minus, -1, -2).conj()
    return s_minus, s_plus


def _dissipator(c, rho):
    cd = c.conj().T
    return c @ rho @ cd - 0.5 * (cd @ c @ rho + rho @ cd @ c)


def lindblad_rhs(rho, t, cfg: OttoConfig):
    """d(rho)/dt in 1/s for the instantaneous-jump Lindblad equation."""
    rho = np.asarray(rho, dtype=complex)
    h = TWO_PI * two_level_hamiltonian(cfg, t)
    fq = drv.qubit_frequency_of_t(cfg.qubit, cfg.drive, t)
    r = rate_set(cfg.cold, cfg.hot, fq, cfg.normalization)
    sm, sp = _jump_operators(cfg, t)
    return -1j * (h @ rho - rho @ h) + r.up * _dissipator(sp, rho) + r.down * _dissipator(sm, rho)


def liouvillian(cfg: OttoConfig, t):
    """Superoperator acting on column-stacked vec(rho), shape (..., 4, 4)."""
    t = np.asarray(t, dtype=float)
    h = TWO_PI * two_level_hamiltonian(cfg, t)
    fq = drv.qubit_frequency_of_t(cfg.qubit, cfg.drive, t)
    r = rate_set(cfg.cold, cfg.hot, fq, cfg.normalization)
    sm, sp = _jump_operators(cfg, t)

    def left(a):  # vec(A X) = (I kron A) vec X
        return np.einsum("ij,...kl->...ikjl", _I2, a).reshape(a.shape[:-2] + (4, 4))

    def right(a):  # vec(X A) = (A^T kron I) vec X
        return np.einsum("...lk,ij->...kilj", a, _I2).reshape(a.shape[:-2] + (4, 4))

    def diss(c):
        cd = np.swapaxes(c, -1, -2).conj()
        cdc = cd @ c
        return left(c) @ right(cd) - 0.5 * (left(cdc) + right(cdc))

    up = np.asarray(r.up)[..., None, None]
    down = np.asarray(r.down)[..., None, None]
    return -1j * (left(h) - right(h)) + up * diss(sp) + down * diss(sm)


def vec(rho):
    return np.asarray(rho, dtype=complex).reshape(2, 2).T.reshape(4)


def unvec(v):
    return np.asarray(v).reshape(2, 2).T


def inversion(rho, cfg: OttoConfig, t):
    """z = <e|rho|e> - <g|rho|g> in the instantaneous eigenbasis."""
    g, e = instantaneous_eigenbasis(cfg, t)
    pe = np.real(np.einsum("...i,...ij,...j->...", e.conj(), rho, e))
    pg = np.real(np.einsum("...i,...ij,...j->...", g.conj(), rho, g))
    return pe - pg


def _adiabatic_frame(cfg, t):
    """Real frame V = [|e>, |g>] with |g> = (cos th/2, sin th/2) and its time derivative."""
    q = cfg.qubit
    ng = drv.ng_of_t(cfg.drive, t)
    th = np.arctan2(q.ej_over_h, 4.0 * q.ec_over_h * (1.0 - 2.0 * ng))
    k = drv.mixing_angle_rate(q, cfg.drive, t)
    c, s = np.cos(0.5 * th), np.sin(0.5 * th)
    v = np.array([[s, c], [-c, s]], dtype=complex)
    dv = 0.5 * k * np.array([[c, -s], [s, c]], dtype=complex)
    return v, dv


def density_to_bloch(rho, cfg: OttoConfig, t):
    """Rotating-frame Bloch vector (x, y, z) of a charge-basis density matrix."""
    v, _ = _adiabatic_frame(cfg, t)
    r = v.conj().T @ np.asarray(rho, dtype=complex) @ v
    return np.array([2.0 * r[0, 1].real, -2.0 * r[0, 1].imag, (r[0, 0] - r[1, 1]).real])


def bloch_to_density(state, cfg: OttoConfig, t):
    x, y, z = state
    v, _ = _adiabatic_frame(cfg, t)
    r = 0.5 * np.array([[1.0 + z, x - 1j * y], [x + 1j * y, 1.0 - z]])
    return v @ r @ v.conj().T


def bloch_rate_from_lindblad(state, t, cfg: OttoConfig):
    """Time derivative of the Bloch vector implied by the lab-frame Lindblad equation."""
    v, dv = _adiabatic_frame(cfg, t)
    rho = bloch_to_density(state, cfg, t)
    rho_dot = lindblad_rhs(rho, t, cfg)
    r_dot = dv.conj().T @ rho @ v + v.conj().T @ rho_dot @ v + v.conj().T @ rho @ dv
    return np.array([2.0 * r_dot[0, 1].real, -2.0 * r_dot[0, 1].imag, (r_dot[0, 0] - r_dot[1, 1]).real])


def propagate(rho0, cfg: OttoConfig, t_end, n_steps, *, t0=0.0, record_every=0):
    """Fourth-order Magnus propagation of the Lindblad equation.

    Returns the final density matrix and, if ``record_every`` > 0, the
    sample times and z values every that many steps (start point included).
    """
    h = (t_end - t0) / n_steps
    off = 0.5 / np.sqrt(3.0)
    starts = t0 + h * np.arange(n_steps)
    l1 = liouvillian(cfg, starts + (0.5 - off) * h)
    l2 = liouvillian(cfg, starts + (0.5 + off) * h)
    omega = 0.5 * h * (l1 + l2) + (np.sqrt(3.0) / 12.0) * h * h * (l2 @ l1 - l1 @ l2)
    props = expm(omega)
    v = vec(rho0)
    times, zs = [], []
    for k in range(n_steps):
        if record_every and k % record_every == 0:
            times.append(starts[k])
            zs.append(inversion(unvec(v), cfg, starts[k]))
        v = props[k] @ v
    if record_every and n_steps % record_every == 0:
        times.append(t_end)
        zs.append(inversion(unvec(v), cfg, t_end))
    return unvec(v), np.array(times), np.array(zs)
