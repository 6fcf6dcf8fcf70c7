"""One-tone and two-tone spectroscopy: synthesis from the coupled model and fitting.

Two-tone conventions: the detuning in the steady-state population enters as
2 pi (f_Q - f_pump) / Gamma_2, so ``linewidth_model`` returns the half width
at half maximum of the population line, while ``fit_lorentzian`` reports the
full width. ``LorentzianFit.half_width`` bridges the two.
"""
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.optimize import least_squares, minimize_scalar

from .errors import (
    DegenerateData,
    DispersiveRegimeViolation,
    FitDiverged,
    NegativeIntercept,
    NegativeProduct,
    ShapeMismatch,
)
from .qubit import (
    QubitParams,
    ResonatorParams,
    build_full_hamiltonian,
    eigensolve_hermitian,
    qubit_frequency,
)
from .units import TWO_PI


@dataclass(frozen=True)
class NotchResonance:
    """Resonator side-coupled to a feedline."""

    f_r: float
    q_loaded: float
    q_coupling: float

    def __post_init__(self):
        if self.f_r <= 0 or self.q_loaded <= 0 or self.q_coupling <= 0:
            raise ValueError("notch frequency and quality factors must be positive")
        if self.q_coupling < self.q_loaded:
            raise ValueError("coupling quality factor cannot be below the loaded one")

    @property
    def q_internal(self):
        inv = 1.0 / self.q_loaded - 1.0 / self.q_coupling
        return math.inf if inv <= 0 else 1.0 / inv

    @property
    def overcoupled(self):
        return self.q_coupling <= self.q_internal

    @property
    def depth(self):
        """1 - |S21| at resonance for a fully photonic line."""
        return self.q_loaded / self.q_coupling

    def s21(self, f, f_center=None, weight=1.0):
        """Symmetric notch response, optionally recentred and with scaled depth."""
        fc = self.f_r if f_center is None else f_center
        x = np.asarray(f, dtype=float) / fc - 1.0
        return 1.0 - weight * (self.q_loaded / self.q_coupling) / (1.0 + 2j * self.q_loaded * x)


@dataclass(frozen=True)
class DecoherenceRates:
    """Qubit relaxation and dephasing rates in rad/s (Gamma_2 = Gamma_1/2 + Gamma_phi)."""

    gamma1_down: float
    gamma2_down: float
    gamma_phi: float

    def __post_init__(self):
        if self.gamma1_down <= 0 or self.gamma2_down <= 0:
            raise ValueError("decoherence rates must be positive")
        if self.gamma_phi < 0:
            raise ValueError("pure dephasing rate must be non-negative")
        if not math.isclose(self.gamma2_down, 0.5 * self.gamma1_down + self.gamma_phi, rel_tol=1e-9):
            raise ValueError("gamma2_down must equal gamma1_down/2 + gamma_phi")

    @classmethod
    def from_gamma1_gamma2(cls, gamma1_down, gamma2_down):
        phi = gamma2_down - 0.5 * gamma1_down
        if phi < -1e-12 * gamma2_down:
            raise ValueError("gamma2_down must be at least gamma1_down/2")
        return cls(gamma1_down, gamma2_down, max(phi, 0.0))


@dataclass(frozen=True)
class TwoToneConfig:
    f_probe: float
    pump_grid: tuple
    ng_grid: tuple
    pump_photon_scale: float
    p_pump_grid: tuple

    def __post_init__(self):
        if self.pump_photon_scale <= 0:
            raise ValueError("pump_photon_scale must be positive")
        for name in ("pump_grid", "ng_grid", "p_pump_grid"):
            g = np.asarray(getattr(self, name), dtype=float)
            if len(g) > 1 and not np.all(np.diff(g) > 0):
                raise ValueError(f"{name} must be strictly increasing")


@dataclass(frozen=True)
class LorentzianFit:
    center: float
    linewidth: float  # full width at half maximum
    amplitude: float
    offset: float
    residual_norm: float
    n_iterations: int = 0

    @property
    def half_width(self):
        return 0.5 * self.linewidth

    def __call__(self, x):
        return lorentzian(x, self.center, self.linewidth, self.amplitude, self.offset)


# ---------------------------------------------------------------- one tone


def _photon_index(res_c: ResonatorParams, res_h: ResonatorParams, role):
    """Index of |g, 1, 0> (cold) or |g, 0, 1> (hot) in the qubit x cold x hot basis."""
    return res_h.n_fock if role == "cold" else 1


def one_tone_map(
    q: QubitParams,
    res_c: ResonatorParams,
    res_h: ResonatorParams,
    ng_grid,
    f_grid,
    *,
    notch_c: Optional[NotchResonance] = None,
    notch_h: Optional[NotchResonance] = None,
    rotating_wave=False,
    min_weight=1e-3,
    method="jacobi",
):
    """|S21| over (ng, f): one notch per photon-like transition from the ground state.

    Each dressed level k contributes a dip at E_k - E_0 whose depth is the
    notch depth times |<g, 1_i | psi_k>|^2 and full width (E_k - E_0) / q_loaded.
    Returns an array of shape (len(ng_grid), len(f_grid)).
    """
    ng_grid = np.asarray(ng_grid, dtype=float)
    f_grid = np.asarray(f_grid, dtype=float)
    for name, g in (("ng_grid", ng_grid), ("f_grid", f_grid)):
        if len(g) > 1 and not np.all(np.diff(g) > 0):
            raise ValueError(f"{name} must be strictly increasing")
    notch_c = notch_c or NotchResonance(res_c.f_r, res_c.q_total, 2.0 * res_c.q_total)
    notch_h = notch_h or NotchResonance(res_h.f_r, res_h.q_total, 2.0 * res_h.q_total)
    out = np.ones((len(ng_grid), len(f_grid)))
    for i, ng in enumerate(ng_grid):
        h = build_full_hamiltonian(q, res_c, res_h, ng, rotating_wave=rotating_wave)
        w, v = eigensolve_hermitian(h, method=method)
        for res, notch in ((res_c, notch_c), (res_h, notch_h)):
            for f_k, w_k in _photon_lines(w, v, _photon_index(res_c, res_h, res.role), min_weight):
                out[i] *= np.abs(notch.s21(f_grid, f_center=f_k, weight=w_k))
    return np.clip(out, 0.0, 1.0)


def _photon_lines(w, v, index, min_weight):
    weights = np.abs(v[index]) ** 2
    keep = np.nonzero(weights >= min_weight)[0]
    return [(float(w[k] - w[0]), float(weights[k])) for k in keep if k > 0]


def photon_transitions(q, res_c, res_h, ng, role, *, rotating_wave=False, min_weight=1e-3, method="jacobi"):
    """(frequency, photonic weight) of dressed levels overlapping the single-photon state of ``role``."""
    h = build_full_hamiltonian(q, res_c, res_h, ng, rotating_wave=rotating_wave)
    w, v = eigensolve_hermitian(h, method=method)
    return _photon_lines(w, v, _photon_index(res_c, res_h, role), min_weight)


def _polariton_gap(q, res_c, res_h, ng, role, rotating_wave, method):
    """Splitting of the two levels sharing |e,0,0> and |g,1_i> character."""
    h = build_full_hamiltonian(q, res_c, res_h, ng, rotating_wave=rotating_wave)
    w, v = eigensolve_hermitian(h, method=method)
    nc_nh = res_c.n_fock * res_h.n_fock
    weight = np.abs(v[nc_nh]) ** 2 + np.abs(v[_photon_index(res_c, res_h, role)]) ** 2
    a, b = np.argsort(weight)[-2:]
    return abs(w[a] - w[b])


def avoided_crossing_gap(
    q: QubitParams,
    res_c: ResonatorParams,
    res_h: ResonatorParams,
    role="hot",
    *,
    ng_range=(0.0, 0.5),
    points=201,
    rotating_wave=False,
    method="jacobi",
):
    """Minimum dressed-state splitting where the qubit crosses resonator ``role``.

    Grid search over ``ng_range`` followed by a bounded scalar refinement.
    Returns (gap in Hz, ng at the minimum).
    """
    if role not in ("cold", "hot"):
        raise ValueError(f"role must be 'cold' or 'hot', got {role!r}")
    grid = np.linspace(ng_range[0], ng_range[1], points)
    gaps = np.array([_polariton_gap(q, res_c, res_h, ng, role, rotating_wave, method) for ng in grid])
    k = int(np.argmin(gaps))
    lo, hi = grid[max(k - 1, 0)], grid[min(k + 1, points - 1)]
    res = minimize_scalar(
        lambda ng: _polariton_gap(q, res_c, res_h, ng, role, rotating_wave, method),
        bounds=(lo, hi),
        method="bounded",
        options={"xatol": 1e-10},
    )
    if res.fun < gaps[k]:
        return float(res.fun), float(res.x)
    return float(gaps[k]), float(grid[k])


def dispersive_shift(q: QubitParams, res_c, res_h, role="hot", *, rotating_wave=False, min_ratio=5.0, method="jacobi"):
    """Pull of resonator ``role`` at the degeneracy point, from full diagonalization (Hz)."""
    res = res_c if role == "cold" else res_h
    delta = res.f_r - qubit_frequency(q, 0.5)
    if res.g0_over_2pi > 0 and abs(delta) <= min_ratio * res.g0_over_2pi:
        raise DispersiveRegimeViolation(
            f"|detuning| {abs(delta):.4g} Hz is not above {min_ratio} g = {min_ratio * res.g0_over_2pi:.4g} Hz"
        )
    h = build_full_hamiltonian(q, res_c, res_h, 0.5, rotating_wave=rotating_wave)
    w, v = eigensolve_hermitian(h, method=method)
    k = int(np.argmax(np.abs(v[_photon_index(res_c, res_h, role)]) ** 2))
    return float(w[k] - w[0] - res.f_r)


def effective_coupling_from_shift(chi, delta):
    """g = sqrt(chi * Delta); both in Hz."""
    prod = chi * delta
    if prod < 0:
        raise NegativeProduct(f"chi * delta = {prod:.4g} is negative")
    return math.sqrt(prod)


# ---------------------------------------------------------------- two tone


def _saturation(n_p, g_h, rates: DecoherenceRates):
    return 4.0 * np.asarray(n_p, dtype=float) * g_h**2 / (rates.gamma1_down * rates.gamma2_down)


def steady_state_population(f_q, f_pump, n_p, g_h, rates: DecoherenceRates):
    """Excited population under a continuous pump; g_h in rad/s."""
    s = _saturation(n_p, g_h, rates)
    det = TWO_PI * (np.asarray(f_q, dtype=float) - np.asarray(f_pump, dtype=float)) / rates.gamma2_down
    out = 0.5 * s / (1.0 + det * det + s)
    return float(out) if np.ndim(out) == 0 else out


def linewidth_model(n_p, g_h, rates: DecoherenceRates):
    """Power-broadened linewidth delta_f (Hz) with 2 pi delta_f = Gamma_2 sqrt(1 + s)."""
    out = rates.gamma2_down * np.sqrt(1.0 + _saturation(n_p, g_h, rates)) / TWO_PI
    return float(out) if np.ndim(out) == 0 else out


def lorentzian(x, center, fwhm, amplitude, offset):
    u = (np.asarray(x, dtype=float) - center) / (0.5 * fwhm)
    return offset + amplitude / (1.0 + u * u)


def _initial_guess(x, y):
    base = np.median(y)
    up, down = y.max() - base, base - y.min()
    k = int(np.argmax(y)) if up >= down else int(np.argmin(y))
    amp = y[k] - base
    half = base + 0.5 * amp
    above = np.nonzero((y - half) * np.sign(amp) >= 0)[0]
    width = x[above.max()] - x[above.min()] if len(above) > 1 else 0.0
    if width <= 0:
        width = 4.0 * np.median(np.abs(np.diff(x)))
    return np.array([x[k], width, amp, base])


def fit_lorentzian(x, y, *, max_iterations=200, xtol=1e-10) -> LorentzianFit:
    """Levenberg-Marquardt fit of offset + A / (1 + ((x - x0) / (w/2))^2)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise ShapeMismatch("x and y must be 1-D arrays of equal length")
    if len(x) < 5:
        raise DegenerateData("at least 5 samples are required")
    dx = np.diff(x)
    if not (np.all(dx > 0) or np.all(dx < 0)):
        raise DegenerateData("x must be strictly monotone")
    if np.ptp(y) == 0:
        raise DegenerateData("y is constant")
    scale = np.ptp(x)
    xs = (x - x[0]) / scale  # work on a unit interval for conditioning

    def resid(p):
        return lorentzian(xs, *p) - y

    def jac(p):
        c, w, a, _ = p
        u = (xs - c) / (0.5 * w)
        d = 1.0 / (1.0 + u * u)
        dd = -a * d * d * 2.0 * u  # derivative of a d w.r.t. u
        return np.column_stack([dd * (-2.0 / w), dd * (-u / w), d, np.ones_like(xs)])

    p0 = _initial_guess(xs, y)
    sol = least_squares(resid, p0, jac=jac, method="lm", xtol=xtol, ftol=1e-15, gtol=1e-15,
                        max_nfev=max_iterations * 5)
    if sol.status <= 0 or not np.all(np.isfinite(sol.x)) or sol.x[1] == 0:
        raise FitDiverged(f"Lorentzian fit failed: {sol.message}")
    c, w, a, off = sol.x
    return LorentzianFit(
        center=float(x[0] + c * scale),
        linewidth=float(abs(w) * scale),
        amplitude=float(a),
        offset=float(off),
        residual_norm=float(np.linalg.norm(sol.fun)),
        n_iterations=int(sol.nfev),
    )


def extrapolate_gamma2(p_pump, linewidth_sq, weights=None):
    """Gamma_2 (rad/s) from the zero-power intercept of delta_f^2 versus pump power.

    The fit is a weighted straight line; by default each point is weighted
    by 1/delta_f^2, i.e. equal relative errors.
    """
    p = np.asarray(p_pump, dtype=float)
    d2 = np.asarray(linewidth_sq, dtype=float)
    if p.shape != d2.shape or p.ndim != 1:
        raise ShapeMismatch("power and linewidth arrays must be 1-D and equal length")
    if len(p) < 3:
        raise DegenerateData("at least 3 power points are required")
    if np.ptp(p) == 0:
        raise DegenerateData("pump powers are all equal")
    w = 1.0 / np.abs(d2) if weights is None else np.asarray(weights, dtype=float)
    # rescale powers so the result does not depend on their unit
    ps = p / np.max(np.abs(p))
    a = np.column_stack([np.ones_like(ps), ps]) * w[:, None]
    coef, *_ = np.linalg.lstsq(a, d2 * w, rcond=None)
    intercept = coef[0]
    if not intercept > 0:
        raise NegativeIntercept(f"zero-power intercept {intercept:.4g} Hz^2 is not positive")
    return TWO_PI * math.sqrt(intercept)


def decompose_decoherence(gamma2_down, gamma1_down):
    """Pure dephasing Gamma_phi = Gamma_2 - Gamma_1/2 (must be non-negative)."""
    return DecoherenceRates.from_gamma1_gamma2(gamma1_down, gamma2_down)


def two_tone_map(cfg: TwoToneConfig, q: QubitParams, g_h, rates: DecoherenceRates, p_pump):
    """Excited population over (ng, f_pump) at one pump power; rows follow ng_grid."""
    f_q = qubit_frequency(q, np.asarray(cfg.ng_grid, dtype=float))
    n_p = cfg.pump_photon_scale * p_pump
    return steady_state_population(np.asarray(f_q)[:, None], np.asarray(cfg.pump_grid)[None, :], n_p, g_h, rates)


def synthetic_linewidth_data(p_pump, pump_photon_scale, g_h, rates: DecoherenceRates, *, noise=0.0, seed=0):
    """(delta_f)^2 in Hz^2 at each pump power, with optional relative Gaussian noise."""
    p = np.asarray(p_pump, dtype=float)
    d2 = linewidth_model(pump_photon_scale * p, g_h, rates) ** 2
    if noise:
        rng = np.random.default_rng(seed)
        d2 = d2 * (1.0 + noise * rng.standard_normal(d2.shape))
    return np.asarray(d2, dtype=float)


def two_tone_linewidths(cfg: TwoToneConfig, f_q, g_h, rates: DecoherenceRates, *, noise=0.0, seed=0):
    """Fit each pump-power trace; returns delta_f (half width, Hz) per power."""
    rng = np.random.default_rng(seed)
    f_pump = np.asarray(cfg.pump_grid, dtype=float)
    out = []
    for p in cfg.p_pump_grid:
        y = steady_state_population(f_q, f_pump, cfg.pump_photon_scale * p, g_h, rates)
        if noise:
            y = y + noise * np.max(y) * rng.uniform(-1.0, 1.0, size=y.shape)
        out.append(fit_lorentzian(f_pump, y).half_width)
    return np.array(out)


# ---------------------------------------------------------------- parity


def odd_parity_map(even_map, ng_grid, shift=0.5):
    """Even map translated by ``shift`` in offset charge (period 1), column-interpolated."""
    even_map = np.asarray(even_map, dtype=float)
    ng_grid = np.asarray(ng_grid, dtype=float)
    if even_map.shape[0] != len(ng_grid):
        raise ShapeMismatch("map rows must match the ng grid")
    src = np.mod(ng_grid + shift, 1.0)
    nodes = np.mod(ng_grid, 1.0)
    order = np.argsort(nodes)
    out = np.empty_like(even_map)
    for j in range(even_map.shape[1]):
        out[:, j] = np.interp(src, nodes[order], even_map[order, j], period=1.0)
    return out


def parity_mix(even_map, odd_map, p_even):
    """Time-averaged spectrum for a box that is even with probability ``p_even``."""
    even_map = np.asarray(even_map, dtype=float)
    odd_map = np.asarray(odd_map, dtype=float)
    if even_map.shape != odd_map.shape:
        raise ShapeMismatch(f"map shapes differ: {even_map.shape} vs {odd_map.shape}")
    if not 0.0 <= p_even <= 1.0:
        raise ValueError("p_even must lie in [0, 1]")
    return p_even * even_map + (1.0 - p_even) * odd_map


def estimate_even_preference(trace, f_grid, f_even, f_odd):
    """Even-parity probability from the relative depths of the two dips in one column."""
    trace = np.asarray(trace, dtype=float)
    f_grid = np.asarray(f_grid, dtype=float)
    d_even = 1.0 - trace[int(np.argmin(np.abs(f_grid - f_even)))]
    d_odd = 1.0 - trace[int(np.argmin(np.abs(f_grid - f_odd)))]
    if d_even + d_odd <= 0:
        raise DegenerateData("no dip found at either frequency")
    return d_even / (d_even + d_odd)
