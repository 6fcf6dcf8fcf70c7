"""Driven dissipative qubit as a quantum Otto refrigerator.

The qubit state lives in the frame of the instantaneous eigenbasis (Bloch
vector x, y, z with z = +1 the excited state). Heat currents are positive
when energy flows out of a bath into the qubit; work is positive when the
drive does work on the qubit.
"""
import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from . import drive as drv
from . import kernels
from .errors import NotConverged, StepSizeTooCoarse
from .qubit import QubitParams, ResonatorParams, qubit_frequency
from .units import H, KB, KB_OVER_H, TWO_PI

# Angular-frequency unit in which the operating coupling enters the rate
# prefactor for the "natural_units" normalization (1 rad/ns).
RATE_UNIT = 1e9
NORMALIZATIONS = ("natural_units", "qubit_frequency")


@dataclass(frozen=True)
class BathParams:
    """Resistor-terminated resonator acting as a thermal bath.

    ``coupling`` is the effective qubit-resonator coupling g/2pi in Hz and
    ``g_eff_scale`` the quasiparticle-poisoning reduction applied to it.
    """

    temperature: float
    resonator: ResonatorParams
    coupling: float
    g_eff_scale: float = 1.0

    def __post_init__(self):
        if self.temperature <= 0:
            raise ValueError("bath temperature must be positive")
        if not 0.0 < self.g_eff_scale <= 1.0:
            raise ValueError("g_eff_scale must lie in (0, 1]")
        if self.coupling < 0:
            raise ValueError("coupling must be non-negative")


@dataclass(frozen=True)
class RateSet:
    gamma_c_down: float
    gamma_c_up: float
    gamma_h_down: float
    gamma_h_up: float

    @property
    def down(self):
        return self.gamma_c_down + self.gamma_h_down

    @property
    def up(self):
        return self.gamma_c_up + self.gamma_h_up


@dataclass
class CycleResult:
    f_drive: float
    q_dot_cold_avg: float
    q_dot_hot_avg: float
    work_avg: float
    entropy_rate: float
    cycles_to_converge: int
    converged: bool
    first_law_residual: float = math.nan
    boundary_state: tuple = (math.nan, math.nan, math.nan)
    max_bloch_norm: float = math.nan
    max_adiabaticity: float = math.nan
    steps_per_period: int = 0
    error: Optional[str] = None

    @property
    def heat_cold_per_cycle(self):
        return self.q_dot_cold_avg / self.f_drive


@dataclass(frozen=True)
class OttoConfig:
    qubit: QubitParams
    cold: BathParams
    hot: BathParams
    drive: drv.DriveProtocol
    normalization: str = "natural_units"
    max_phase_step: float = 0.1
    tol: float = 1e-9
    max_cycles: int = 100_000
    max_steps_per_period: int = 400_000_000

    def __post_init__(self):
        if self.normalization not in NORMALIZATIONS:
            raise ValueError(f"normalization must be one of {NORMALIZATIONS}")
        if self.max_phase_step <= 0:
            raise ValueError("max_phase_step must be positive")

    @classmethod
    def device_defaults(
        cls,
        f_drive=10e6,
        *,
        t_cold=0.3,
        t_hot=0.3,
        q_cold=2.0,
        q_hot=2.0,
        scale_cold=1.0,
        scale_hot=1.0,
        a=2.0,
        **kw,
    ):
        q = QubitParams(6.8e9, 3.5e9, 0, 1)
        res_c = ResonatorParams(4.718e9, q_cold, 140e6, role="cold")
        res_h = ResonatorParams(8.001e9, q_hot, 250e6, role="hot")
        return cls(
            qubit=q,
            cold=BathParams(t_cold, res_c, 76e6, scale_cold),
            hot=BathParams(t_hot, res_h, 125e6, scale_hot),
            drive=drv.DriveProtocol.between_frequencies(q, res_c.f_r, res_h.f_r, f_drive, a=a),
            **kw,
        )

    def with_frequency(self, f_drive):
        return replace(self, drive=self.drive.with_frequency(f_drive))


def lorentzian_filter(res: ResonatorParams, f_q):
    r = res.f_r / f_q - f_q / res.f_r
    return 1.0 / (1.0 + res.q_total**2 * r * r)


def coupling_constant(bath: BathParams, f_q, normalization="natural_units"):
    """Dimensionless coupling entering the rate prefactor.

    The poisoning factor enters squared because emission is second order in
    the qubit-resonator coupling.
    """
    g_ang = TWO_PI * bath.coupling
    s2 = bath.g_eff_scale**2
    if normalization == "natural_units":
        return s2 * g_ang / RATE_UNIT
    if normalization == "qubit_frequency":
        return s2 * g_ang / (TWO_PI * np.asarray(f_q, dtype=float))
    raise ValueError(f"unknown normalization {normalization!r}")


def transition_rate_down(bath: BathParams, f_q, normalization="natural_units"):
    """Purcell-filtered Johnson-Nyquist emission rate in rad/s."""
    f_q = np.asarray(f_q, dtype=float)
    w = TWO_PI * f_q
    x = f_q / (KB_OVER_H * bath.temperature)
    g = coupling_constant(bath, f_q, normalization)
    out = g / (4.0 * np.pi) * lorentzian_filter(bath.resonator, f_q) * w / -np.expm1(-x)
    return float(out) if out.ndim == 0 else out


def transition_rate_up(bath: BathParams, f_q, normalization="natural_units"):
    f_q = np.asarray(f_q, dtype=float)
    x = f_q / (KB_OVER_H * bath.temperature)
    out = transition_rate_down(bath, f_q, normalization) * np.exp(-x)
    return float(out) if np.ndim(out) == 0 else out


def rate_set(cold: BathParams, hot: BathParams, f_q, normalization="natural_units") -> RateSet:
    return RateSet(
        transition_rate_down(cold, f_q, normalization),
        transition_rate_up(cold, f_q, normalization),
        transition_rate_down(hot, f_q, normalization),
        transition_rate_up(hot, f_q, normalization),
    )


def kernel_bath_array(bath: BathParams, normalization="natural_units"):
    """[f_r, Q, kT/h, amplitude, omega_power] such that rate = amp * L * w^p / (1 - e^-x)."""
    g_ang = TWO_PI * bath.coupling * bath.g_eff_scale**2
    if normalization == "natural_units":
        amp, power = g_ang / (RATE_UNIT * 4.0 * np.pi), 1.0
    else:
        amp, power = g_ang / (4.0 * np.pi), 0.0
    return np.array(
        [bath.resonator.f_r, bath.resonator.q_total, KB_OVER_H * bath.temperature, amp, power]
    )


def heat_current(bath: BathParams, f_q, z, normalization="natural_units"):
    """Heat flow (W) from ``bath`` into the qubit for inversion ``z``."""
    down = transition_rate_down(bath, f_q, normalization)
    up = transition_rate_up(bath, f_q, normalization)
    return -0.5 * H * np.asarray(f_q) * ((down + up) * np.asarray(z) + (down - up))


def bloch_rhs(state, t, cfg: OttoConfig):
    """Time derivative of the rotating-frame Bloch vector (x, y, z)."""
    x, y, z = state
    q, p = cfg.qubit, cfg.drive
    fq = drv.qubit_frequency_of_t(q, p, t)
    k = drv.mixing_angle_rate(q, p, t)
    r = rate_set(cfg.cold, cfg.hot, fq, cfg.normalization)
    g = r.down + r.up
    d = r.down - r.up
    w = TWO_PI * fq
    return np.array([
        -0.5 * g * x - w * y - k * z,
        w * x - 0.5 * g * y,
        k * x - g * z - d,
    ])


def equilibrium_inversion(rates: RateSet):
    return -(rates.down - rates.up) / (rates.down + rates.up)


def steps_per_period(cfg: OttoConfig):
    """RK4 steps per drive period so that omega_Q,max * dt <= max_phase_step."""
    q, p = cfg.qubit, cfg.drive
    f_max = max(qubit_frequency(q, p.ng_c), qubit_frequency(q, p.ng_h))
    n = math.ceil(TWO_PI * f_max / (cfg.max_phase_step * p.f_drive))
    n = max(n, p.samples_per_period)
    if n > cfg.max_steps_per_period:
        raise StepSizeTooCoarse(
            f"{n} steps per period needed at f_drive={p.f_drive:.4g} Hz (cap {cfg.max_steps_per_period})"
        )
    return n


@dataclass
class CycleIntegral:
    end_state: np.ndarray
    heat_cold: float
    heat_hot: float
    work: float
    energy_start: float
    energy_end: float
    max_norm: float
    n_steps: int
    z_samples: Optional[np.ndarray] = field(default=None, repr=False)


def integrate_cycle(initial, cfg: OttoConfig, *, backend=None, record_stride=0, t0=0.0):
    """One drive period of fixed-step RK4, with heat and work integrated alongside.

    Heat and work are in joules per cycle. ``record_stride`` > 0 stores z
    every that many steps (including the start point).
    """
    n = steps_per_period(cfg)
    dt = cfg.drive.period / n
    kern = kernels.get_backend(backend)
    z_rec = None
    if record_stride > 0:
        z_rec = np.empty(n // record_stride + 1)
    out = kern.bloch_cycle(
        np.ascontiguousarray(initial, dtype=float),
        float(t0),
        dt,
        n,
        cfg.drive.as_kernel_array(cfg.qubit),
        kernel_bath_array(cfg.cold, cfg.normalization),
        kernel_bath_array(cfg.hot, cfg.normalization),
        z_rec,
        int(record_stride),
    )
    x, y, z, qc, qh, w, e0, e1, mx = out
    return CycleIntegral(np.array([x, y, z]), qc, qh, w, e0, e1, mx, n, z_rec)


def _entropy(r):
    """von Neumann entropy (nats) of a qubit with Bloch-vector length r."""
    r = min(max(r, 0.0), 1.0)
    out = 0.0
    for p in (0.5 * (1 + r), 0.5 * (1 - r)):
        if p > 0:
            out -= p * math.log(p)
    return out


def find_steady_cycle(cfg: OttoConfig, initial=(0.0, 0.0, -1.0), *, backend=None, raise_on_failure=False):
    """Iterate whole cycles until the boundary Bloch vector stops moving."""
    state = np.asarray(initial, dtype=float)
    f = cfg.drive.f_drive
    cyc = None
    converged = False
    count = 0
    max_norm = float(np.linalg.norm(state))
    for count in range(1, cfg.max_cycles + 1):
        cyc = integrate_cycle(state, cfg, backend=backend)
        max_norm = max(max_norm, cyc.max_norm)
        moved = float(np.linalg.norm(cyc.end_state - state))
        start = state
        state = cyc.end_state
        if moved < cfg.tol:
            converged = True
            break
    qc, qh, w = cyc.heat_cold * f, cyc.heat_hot * f, cyc.work * f
    ds = KB * (_entropy(np.linalg.norm(state)) - _entropy(np.linalg.norm(start))) * f
    sigma = ds - (qc / cfg.cold.temperature + qh / cfg.hot.temperature)
    largest = max(abs(qc), abs(qh), abs(w))
    resid = abs(qc + qh + w) / largest if largest > 0 else 0.0
    res = CycleResult(
        f_drive=f,
        q_dot_cold_avg=qc,
        q_dot_hot_avg=qh,
        work_avg=w,
        entropy_rate=sigma,
        cycles_to_converge=count,
        converged=converged,
        first_law_residual=resid,
        boundary_state=tuple(float(v) for v in state),
        max_bloch_norm=max_norm,
        max_adiabaticity=drv.max_adiabaticity(cfg.qubit, cfg.drive),
        steps_per_period=cyc.n_steps,
    )
    if not converged:
        msg = f"steady cycle not reached after {cfg.max_cycles} cycles at f_drive={f:.4g} Hz"
        if raise_on_failure:
            raise NotConverged(msg, res)
        warnings.warn(msg, RuntimeWarning, stacklevel=2)
    return res


def _sweep_point(cfg, f, backend):
    try:
        return find_steady_cycle(cfg.with_frequency(f), backend=backend)
    except Exception as exc:  # a failed point is reported, the sweep continues
        return CycleResult(f, math.nan, math.nan, math.nan, math.nan, 0, False, error=f"{type(exc).__name__}: {exc}")


def sweep_drive_frequency(f_grid, cfg: OttoConfig, *, threads=1, backend=None):
    f_grid = np.asarray(f_grid, dtype=float)
    d = np.diff(f_grid)
    if len(f_grid) > 1 and not (np.all(d > 0) or np.all(d < 0)):
        raise ValueError("drive-frequency grid must be strictly monotone")
    if threads <= 1:
        return [_sweep_point(cfg, f, backend) for f in f_grid]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda f: _sweep_point(cfg, f, backend), f_grid))


def default_drive_grid(points=60, f_min=1e6, f_max=2.3e9):
    return np.geomspace(f_min, f_max, points)


def cooling_condition(f_c, f_h, t_c, t_h):
    """Otto cooling window f_h/f_c > T_h/T_c."""
    if min(f_c, f_h, t_c, t_h) <= 0:
        raise ValueError("frequencies and temperatures must be positive")
    return f_h / f_c > t_h / t_c


def excited_population_eq(f_q, temperature):
    return 1.0 / (1.0 + math.exp(f_q / (KB_OVER_H * temperature)))


def ideal_otto_cold_heat(f_c, f_h, t_c, t_h):
    """Heat per cycle from the cold bath for perfect thermalization strokes."""
    return H * f_c * (excited_population_eq(f_c, t_c) - excited_population_eq(f_h, t_h))


@dataclass
class RateEquationCycle:
    heat_cold: float
    heat_hot: float
    p_boundary: float

    def powers(self, f_drive):
        return self.heat_cold * f_drive, self.heat_hot * f_drive


def _rate_cycle_affine(cfg: OttoConfig, n):
    """Exponential-midpoint sweep over one period for p(0)=0 and p(0)=1.

    The population equation dp/dt = G_up - (G_up + G_down) p is linear, so
    with rates frozen at each step midpoint the step is solved exactly; the
    stiff relaxation needs no step-size restriction.
    """
    q, p, f = cfg.qubit, cfg.drive, cfg.drive.f_drive
    h = 1.0 / (f * n)
    t = (np.arange(n) + 0.5) * h
    fq = drv.qubit_frequency_of_t(q, p, t)
    r = rate_set(cfg.cold, cfg.hot, fq, cfg.normalization)
    b = r.up + r.down
    p_inf = r.up / b
    bh = b * h
    decay = np.exp(-bh)
    phi = -np.expm1(-bh) / bh  # step average of exp(-b s)
    p_start = np.empty((2, n))
    y = np.array([0.0, 1.0])
    for k in range(n):
        p_start[:, k] = y
        y = p_inf[k] + (y - p_inf[k]) * decay[k]
    p_mean = p_inf + (p_start - p_inf) * phi
    hf = H * fq * h
    qc = np.sum(hf * (r.gamma_c_up - (r.gamma_c_up + r.gamma_c_down) * p_mean), axis=1)
    qh = np.sum(hf * (r.gamma_h_up - (r.gamma_h_up + r.gamma_h_down) * p_mean), axis=1)
    return y, qc, qh


def rate_equation_cycle(cfg: OttoConfig, n_steps=None):
    """Coherence-free periodic solution of dp/dt = G_up (1 - p) - G_down p.

    Independent of the RK4 Bloch path: exact exponential steps with
    midpoint rates, Richardson-extrapolated over ``n_steps`` and
    ``2 n_steps``. By default the step is a quarter of the fastest
    relaxation time (and at least 2**15 steps per period). Heats are in
    joules per cycle.
    """
    if n_steps is None:
        f = cfg.drive.f_drive
        f_grid = drv.qubit_frequency_of_t(cfg.qubit, cfg.drive, np.linspace(0.0, 1.0 / f, 257))
        r = rate_set(cfg.cold, cfg.hot, f_grid, cfg.normalization)
        b_max = float(np.max(r.up + r.down))
        n_steps = max(1 << 15, 1 << math.ceil(math.log2(4.0 * b_max / f)))
    out = []
    for n in (n_steps, 2 * n_steps):
        (e0, e1), qc, qh = _rate_cycle_affine(cfg, n)
        p_star = e0 / (1.0 - (e1 - e0))  # fixed point of the affine one-cycle map
        lerp = lambda v: v[0] + p_star * (v[1] - v[0])
        out.append((lerp(qc), lerp(qh), p_star))
    (c1, h1, p1), (c2, h2, p2) = out
    return RateEquationCycle(
        heat_cold=(4.0 * c2 - c1) / 3.0, heat_hot=(4.0 * h2 - h1) / 3.0, p_boundary=(4.0 * p2 - p1) / 3.0
    )
