"""Run configuration: strict YAML with unit-suffixed quantities.

Every physical quantity is written with its unit (``"6.8 GHz"``,
``"300 mK"``) and converted to base SI units on load. Unknown keys are
rejected. ``serialize_config`` writes base-unit values with ``repr`` so that
``parse_config(serialize_config(cfg)) == cfg`` holds exactly.
"""
import copy
import hashlib
from dataclasses import dataclass, field

import yaml

from .errors import ParseError, ValidationError
from .units import BASE_UNITS, UnitError, format_quantity, parse_quantity

EXPERIMENTS = ("spectrum", "one_tone", "two_tone", "otto_sweep", "filter")

# kind: a base unit symbol, "int", "float", "bool" or "choice:<a>,<b>"; the
# optional third entry is a constraint: "pos", "nonneg", "unit" (0 < v <= 1)
# or "ge1".
SCHEMA = {
    "qubit": {
        "ec_over_h": ("Hz", 6.8e9, "pos"),
        "ej_over_h": ("Hz", 3.5e9, "pos"),
        "n_charge_min": ("int", -2),
        "n_charge_max": ("int", 3),
    },
    "cold": {
        "f_r": ("Hz", 4.718e9, "pos"),
        "q_total": ("float", 2.0, "pos"),
        "g0": ("Hz", 140e6, "nonneg"),
        "g_eff": ("Hz", 76e6, "nonneg"),
        "temperature": ("K", 0.3, "pos"),
        "g_eff_scale": ("float", 1.0, "unit"),
        "n_fock": ("int", 5, "ge2"),
    },
    "hot": {
        "f_r": ("Hz", 8.001e9, "pos"),
        "q_total": ("float", 2.0, "pos"),
        "g0": ("Hz", 250e6, "nonneg"),
        "g_eff": ("Hz", 125e6, "nonneg"),
        "temperature": ("K", 0.3, "pos"),
        "g_eff_scale": ("float", 1.0, "unit"),
        "n_fock": ("int", 5, "ge2"),
    },
    "drive": {
        "a": ("float", 2.0, "pos"),
        "samples_per_period": ("int", 64, "ge64"),
        "waveform": ("choice:trapezoid,sine", "trapezoid"),
    },
    "engine": {
        "normalization": ("choice:natural_units,qubit_frequency", "natural_units"),
        "max_phase_step": ("float", 0.1, "pos"),
        "tol": ("float", 1e-9, "pos"),
        "max_cycles": ("int", 100_000, "pos"),
    },
    "spectrum": {
        "ng_min": ("float", 0.0),
        "ng_max": ("float", 1.0),
        "points": ("int", 201, "ge2"),
        "levels": ("int", 3, "pos"),
    },
    "one_tone": {
        "ng_min": ("float", 0.3),
        "ng_max": ("float", 0.5),
        "ng_points": ("int", 101, "ge2"),
        "f_min": ("Hz", 4.4e9, "pos"),
        "f_max": ("Hz", 8.4e9, "pos"),
        "f_points": ("int", 801, "ge2"),
        "q_loaded": ("float", 1.0e4, "pos"),
        "q_coupling": ("float", 1.25e4, "pos"),
        "rotating_wave": ("bool", False),
    },
    "two_tone": {
        "f_probe": ("Hz", 8.001e9, "pos"),
        "ng": ("float", 0.5),
        "pump_min": ("Hz", 3.4e9, "pos"),
        "pump_max": ("Hz", 3.6e9, "pos"),
        "pump_points": ("int", 401, "ge2"),
        "gamma2_over_2pi": ("Hz", 24e6, "pos"),
        "gamma1_over_2pi": ("Hz", 24e6, "pos"),
        "coupling": ("Hz", 125e6, "pos"),
        "pump_photon_scale": ("1/W", 1.0e15, "pos"),
        "p_min": ("W", 1e-18, "pos"),
        "p_max": ("W", 5e-18, "pos"),
        "p_points": ("int", 5, "ge3"),
        "noise": ("float", 0.01, "nonneg"),
    },
    "sweep": {
        "f_min": ("Hz", 1e6, "pos"),
        "f_max": ("Hz", 2.3e9, "pos"),
        "points": ("int", 60, "ge2"),
    },
    "filter": {
        "inductance": ("H", 5.9e-9, "pos"),
        "capacitance": ("F", 1.7e-12, "pos"),
        "z0": ("Ohm", 50.0, "pos"),
        "f_min": ("Hz", 0.1e9, "pos"),
        "f_max": ("Hz", 14e9, "pos"),
        "points": ("int", 1000, "ge2"),
    },
}

TOP_LEVEL = {"experiment", "output_dir", "seed"} | set(SCHEMA)

# (block, low key, high key) pairs that must be strictly increasing
_RANGES = [
    ("qubit", "n_charge_min", "n_charge_max"),
    ("spectrum", "ng_min", "ng_max"),
    ("one_tone", "ng_min", "ng_max"),
    ("one_tone", "f_min", "f_max"),
    ("two_tone", "pump_min", "pump_max"),
    ("two_tone", "p_min", "p_max"),
    ("sweep", "f_min", "f_max"),
    ("filter", "f_min", "f_max"),
]


def default_blocks():
    return {b: {k: spec[1] for k, spec in fields.items()} for b, fields in SCHEMA.items()}


@dataclass
class RunConfig:
    experiment: str = "otto_sweep"
    output_dir: str = "."
    seed: int = 0
    blocks: dict = field(default_factory=default_blocks)

    def __getitem__(self, block):
        return self.blocks[block]

    def replace(self, **changes):
        out = copy.deepcopy(self)
        for k, v in changes.items():
            setattr(out, k, v)
        return out

    def config_hash(self):
        """Short digest of everything that affects results (not the output directory)."""
        text = serialize_config(self, include_output=False)
        return hashlib.sha256(text.encode("utf-8")).hexdigest()[:12]


def _line_map(text):
    """(block, key) -> 1-based line number, from the YAML node tree."""
    lines = {}
    try:
        root = yaml.compose(text, Loader=yaml.SafeLoader)
    except yaml.YAMLError:
        return lines
    if not isinstance(root, yaml.MappingNode):
        return lines
    for knode, vnode in root.value:
        lines[(knode.value,)] = knode.start_mark.line + 1
        if isinstance(vnode, yaml.MappingNode):
            for k2, _ in vnode.value:
                lines[(knode.value, k2.value)] = k2.start_mark.line + 1
    return lines


def _convert(block, key, raw, kind, line):
    name = f"{block}.{key}"
    try:
        if kind in BASE_UNITS:
            return parse_quantity(raw, BASE_UNITS[kind])
        if kind == "bool":
            if not isinstance(raw, bool):
                raise ValueError(f"expected true/false, got {raw!r}")
            return raw
        if kind == "int":
            if isinstance(raw, bool) or not isinstance(raw, int):
                raise ValueError(f"expected an integer, got {raw!r}")
            return raw
        if kind == "float":
            if isinstance(raw, bool) or not isinstance(raw, (int, float, str)):
                raise ValueError(f"expected a number, got {raw!r}")
            return parse_quantity(raw)
        if kind.startswith("choice:"):
            choices = kind.split(":", 1)[1].split(",")
            if raw not in choices:
                raise ValueError(f"expected one of {choices}, got {raw!r}")
            return raw
    except (UnitError, ValueError) as exc:
        raise ValidationError(str(exc), field=name, line=line) from None
    raise AssertionError(f"unknown schema kind {kind!r}")


def _check_constraint(block, key, value, constraint, line):
    ok = {
        None: True,
        "pos": value > 0,
        "nonneg": value >= 0,
        "unit": 0 < value <= 1,
        "ge2": value >= 2,
        "ge3": value >= 3,
        "ge64": value >= 64,
    }[constraint]
    if not ok:
        labels = {
            "pos": "must be positive",
            "nonneg": "must be non-negative",
            "unit": "must lie in (0, 1]",
            "ge2": "must be at least 2",
            "ge3": "must be at least 3",
            "ge64": "must be at least 64",
        }
        raise ValidationError(f"{labels[constraint]} (got {value!r})", field=f"{block}.{key}", line=line)


def parse_config(text) -> RunConfig:
    """Parse and validate configuration text; missing entries take default values."""
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        raise ParseError(f"invalid YAML: {getattr(exc, 'problem', exc)}", line=mark.line + 1 if mark else None) from None
    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise ParseError("top level must be a mapping")
    lines = _line_map(text)
    cfg = RunConfig()
    for key, value in data.items():
        line = lines.get((key,))
        if key not in TOP_LEVEL:
            raise ParseError(f"unknown key {key!r}", line=line, field=str(key))
        if key == "experiment":
            if value not in EXPERIMENTS:
                raise ValidationError(f"must be one of {EXPERIMENTS}, got {value!r}", field="experiment", line=line)
            cfg.experiment = value
        elif key == "output_dir":
            if not isinstance(value, str):
                raise ValidationError("must be a string path", field="output_dir", line=line)
            cfg.output_dir = value
        elif key == "seed":
            if isinstance(value, bool) or not isinstance(value, int) or value < 0:
                raise ValidationError("must be a non-negative integer", field="seed", line=line)
            cfg.seed = value
        else:
            if value is None:
                continue
            if not isinstance(value, dict):
                raise ParseError("block must be a mapping", line=line, field=key)
            fields = SCHEMA[key]
            for sub, raw in value.items():
                sub_line = lines.get((key, sub))
                if sub not in fields:
                    raise ParseError(f"unknown key {sub!r}", line=sub_line, field=f"{key}.{sub}")
                spec = fields[sub]
                val = _convert(key, sub, raw, spec[0], sub_line)
                if len(spec) > 2:
                    _check_constraint(key, sub, val, spec[2], sub_line)
                cfg.blocks[key][sub] = val
    for block, lo, hi in _RANGES:
        if not cfg.blocks[block][lo] < cfg.blocks[block][hi]:
            raise ValidationError(f"{lo} must be below {hi}", field=f"{block}.{hi}", line=lines.get((block, hi)))
    if cfg["one_tone"]["q_coupling"] < cfg["one_tone"]["q_loaded"]:
        raise ValidationError("q_coupling cannot be below q_loaded", field="one_tone.q_coupling",
                              line=lines.get(("one_tone", "q_coupling")))
    return cfg


def _format_value(kind, value):
    if kind in BASE_UNITS:
        return format_quantity(value, kind)
    if kind == "float":
        return repr(float(value))
    return value


def serialize_config(cfg: RunConfig, include_output=True) -> str:
    data = {"experiment": cfg.experiment}
    if include_output:
        data["output_dir"] = cfg.output_dir
    data["seed"] = cfg.seed
    for block, fields in SCHEMA.items():
        data[block] = {k: _format_value(spec[0], cfg.blocks[block][k]) for k, spec in fields.items()}
    return yaml.safe_dump(data, sort_keys=False, default_flow_style=False)


def load_config(path) -> RunConfig:
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read())
