"""Experiment presets: build model objects from a run configuration, run, tabulate."""
import os
from dataclasses import dataclass

import numpy as np

from . import filters, otto, spectroscopy
from .config import RunConfig
from .drive import DriveProtocol
from .plotting import PlotSpec, render_line_plot
from .qubit import QubitParams, ResonatorParams, charge_spectrum, qubit_frequency
from .results import ResultTable
from .units import TWO_PI


@dataclass
class ExperimentOutput:
    table: ResultTable
    plot_table: ResultTable
    plot: PlotSpec


def qubit_from_config(cfg: RunConfig) -> QubitParams:
    b = cfg["qubit"]
    return QubitParams(b["ec_over_h"], b["ej_over_h"], b["n_charge_min"], b["n_charge_max"])


def resonator_from_config(cfg: RunConfig, role) -> ResonatorParams:
    b = cfg[role]
    return ResonatorParams(b["f_r"], b["q_total"], b["g0"], b["n_fock"], role)


def otto_config_from_run(cfg: RunConfig, f_drive=None) -> otto.OttoConfig:
    q = qubit_from_config(cfg)
    baths = {}
    for role in ("cold", "hot"):
        b = cfg[role]
        baths[role] = otto.BathParams(b["temperature"], resonator_from_config(cfg, role), b["g_eff"], b["g_eff_scale"])
    d, e = cfg["drive"], cfg["engine"]
    drive = DriveProtocol.between_frequencies(
        q,
        cfg["cold"]["f_r"],
        cfg["hot"]["f_r"],
        f_drive or cfg["sweep"]["f_min"],
        a=d["a"],
        samples_per_period=d["samples_per_period"],
        waveform=d["waveform"],
    )
    return otto.OttoConfig(
        q, baths["cold"], baths["hot"], drive,
        normalization=e["normalization"], max_phase_step=e["max_phase_step"], tol=e["tol"],
        max_cycles=e["max_cycles"],
    )


def _grid(lo, hi, n, log=False):
    return np.geomspace(lo, hi, n) if log else np.linspace(lo, hi, n)


def run_spectrum(cfg: RunConfig, threads=1) -> ExperimentOutput:
    b = cfg["spectrum"]
    q = qubit_from_config(cfg)
    levels = min(b["levels"], q.n_charge_max - q.n_charge_min + 1)
    ng = _grid(b["ng_min"], b["ng_max"], b["points"])
    rows = [np.concatenate([[g], charge_spectrum(q, g, levels, relative=False).eigenvalues]) for g in ng]
    cols = ["ng"] + [f"E{k}" for k in range(levels)]
    table = ResultTable(cols, ["1"] + ["Hz"] * levels, np.array(rows))
    spec = PlotSpec("ng", tuple(cols[1:]), title="Charge-qubit levels", y_label="E/h [GHz]", y_scale=1e-9)
    return ExperimentOutput(table, table, spec)


def run_one_tone(cfg: RunConfig, threads=1) -> ExperimentOutput:
    b = cfg["one_tone"]
    q = qubit_from_config(cfg)
    rc, rh = resonator_from_config(cfg, "cold"), resonator_from_config(cfg, "hot")
    ng = _grid(b["ng_min"], b["ng_max"], b["ng_points"])
    f = _grid(b["f_min"], b["f_max"], b["f_points"])
    notches = [spectroscopy.NotchResonance(r.f_r, b["q_loaded"], b["q_coupling"]) for r in (rc, rh)]
    m = spectroscopy.one_tone_map(q, rc, rh, ng, f, notch_c=notches[0], notch_h=notches[1],
                                  rotating_wave=b["rotating_wave"])
    gg, ff = np.meshgrid(ng, f, indexing="ij")
    table = ResultTable(["ng", "f", "s21_abs"], ["1", "Hz", "1"], np.column_stack([gg.ravel(), ff.ravel(), m.ravel()]))
    picks = sorted({0, len(ng) // 2, len(ng) - 1})
    cols = [f"s21_ng_{ng[i]:.4f}" for i in picks]
    plot_table = ResultTable(["f"] + cols, ["Hz"] + ["1"] * len(cols), np.column_stack([f] + [m[i] for i in picks]))
    spec = PlotSpec("f", tuple(cols), title="One-tone |S21|", x_label="f [Hz]", y_label="|S21|")
    return ExperimentOutput(table, plot_table, spec)


def run_two_tone(cfg: RunConfig, threads=1) -> ExperimentOutput:
    b = cfg["two_tone"]
    q = qubit_from_config(cfg)
    rates = spectroscopy.DecoherenceRates.from_gamma1_gamma2(TWO_PI * b["gamma1_over_2pi"], TWO_PI * b["gamma2_over_2pi"])
    g_h = TWO_PI * b["coupling"]
    powers = _grid(b["p_min"], b["p_max"], b["p_points"])
    tt = spectroscopy.TwoToneConfig(
        f_probe=b["f_probe"],
        pump_grid=tuple(_grid(b["pump_min"], b["pump_max"], b["pump_points"])),
        ng_grid=(b["ng"],),
        pump_photon_scale=b["pump_photon_scale"],
        p_pump_grid=tuple(powers),
    )
    f_q = qubit_frequency(q, b["ng"])
    widths = spectroscopy.two_tone_linewidths(tt, f_q, g_h, rates, noise=b["noise"], seed=cfg.seed)
    n_p = b["pump_photon_scale"] * powers
    model = spectroscopy.linewidth_model(n_p, g_h, rates)
    gamma2 = spectroscopy.extrapolate_gamma2(powers, widths**2)
    table = ResultTable(
        ["p_pump", "n_p", "delta_f", "delta_f_sq", "delta_f_model"],
        ["W", "1", "Hz", "Hz^2", "Hz"],
        np.column_stack([powers, n_p, widths, widths**2, model]),
        notes={"gamma2_over_2pi_estimate_Hz": format(gamma2 / TWO_PI, ".17e")},
    )
    spec = PlotSpec("p_pump", ("delta_f_sq",), title="Power-broadened linewidth",
                    x_label="P_pump [W]", y_label="delta_f^2 [MHz^2]", y_scale=1e-12)
    return ExperimentOutput(table, table, spec)


OTTO_COLUMNS = [
    ("f_drive", "Hz"),
    ("q_dot_cold", "W"),
    ("q_dot_hot", "W"),
    ("work", "W"),
    ("entropy_rate", "W/K"),
    ("converged", "1"),
    ("cycles_to_converge", "1"),
    ("first_law_residual", "1"),
    ("max_adiabaticity", "1"),
    ("failed", "1"),
]


def run_otto_sweep(cfg: RunConfig, threads=1) -> ExperimentOutput:
    b = cfg["sweep"]
    grid = _grid(b["f_min"], b["f_max"], b["points"], log=True)
    results = otto.sweep_drive_frequency(grid, otto_config_from_run(cfg, grid[0]), threads=threads)
    rows, notes = [], {}
    for i, r in enumerate(results):
        rows.append([
            r.f_drive, r.q_dot_cold_avg, r.q_dot_hot_avg, r.work_avg, r.entropy_rate,
            float(r.converged), float(r.cycles_to_converge), r.first_law_residual, r.max_adiabaticity,
            float(r.error is not None),
        ])
        if r.error is not None:
            notes[f"error_row_{i:04d}"] = r.error
    names, units = zip(*OTTO_COLUMNS)
    table = ResultTable(names, units, np.array(rows), notes=notes)
    spec = PlotSpec("f_drive", ("q_dot_cold", "q_dot_hot"), title="Otto refrigerator heat currents",
                    x_label="f_drive [Hz]", y_label="heat current [aW]", x_log=True, y_scale=1e18)
    return ExperimentOutput(table, table, spec)


def run_filter(cfg: RunConfig, threads=1) -> ExperimentOutput:
    b = cfg["filter"]
    filt = filters.LCLFilter(b["inductance"], b["capacitance"], b["z0"])
    f = _grid(b["f_min"], b["f_max"], b["points"])
    s = filters.lcl_s21(f, filt)
    table = ResultTable(["f", "s21_db", "s21_phase"], ["Hz", "dB", "rad"],
                        np.column_stack([f, filters.db(s), np.angle(s)]),
                        notes={"cutoff_Hz": format(filters.lcl_cutoff(filt), ".17e")})
    spec = PlotSpec("f", ("s21_db",), title="LCL gate filter", x_label="f [Hz]", y_label="|S21| [dB]")
    return ExperimentOutput(table, table, spec)


RUNNERS = {
    "spectrum": run_spectrum,
    "one_tone": run_one_tone,
    "two_tone": run_two_tone,
    "otto_sweep": run_otto_sweep,
    "filter": run_filter,
}


def run_experiment(cfg: RunConfig, *, threads=1, out_dir=None, write=True):
    """Run the configured experiment; returns (output, csv_path, svg_path)."""
    out = RUNNERS[cfg.experiment](cfg, threads=threads)
    h = cfg.config_hash()
    for t in (out.table, out.plot_table):
        t.experiment, t.config_hash = cfg.experiment, h
    if not write:
        return out, None, None
    out_dir = out_dir or cfg.output_dir
    os.makedirs(out_dir, exist_ok=True)
    stem = os.path.join(out_dir, f"{cfg.experiment}_{h}")
    csv_path, svg_path = stem + ".csv", stem + ".svg"
    with open(csv_path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(out.table.to_csv())
    with open(svg_path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(render_line_plot(out.plot_table, out.plot))
    return out, csv_path, svg_path
