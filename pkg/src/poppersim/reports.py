"""Manifest parsing and report serialization (JSON and CSV).

Floats are written with 12 significant digits and keys in a fixed order,
so the same manifest and seed always produce byte-identical files.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .continuous import ContinuousConfig, GridDistribution, GridSpec, SlitAperture, SpreadReport
from .discrete import DETECTORS, DiscreteConfig, DiscreteReport
from .errors import ConfigError
from .quantum import OutcomeDistribution
from .sweep import CSV_HEADER, SweepGrid, SweepRow

EXPERIMENTS = ("discrete", "continuous", "sweep")
FORMATS = ("json", "csv")
SIG_DIGITS = 12


def fmt_float(x: float) -> float:
    return float(format(float(x), f".{SIG_DIGITS}g"))


def _round(obj):
    if isinstance(obj, dict):
        return {k: _round(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_round(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        if not math.isfinite(obj):
            raise ValueError(f"cannot serialize non-finite value {obj!r}")
        return fmt_float(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(payload: dict) -> str:
    return json.dumps(_round(payload), indent=2, allow_nan=False) + "\n"


# ---------------------------------------------------------------- manifests


def _strict(d: Any, allowed: tuple[str, ...], where: str) -> dict:
    if not isinstance(d, dict):
        raise ConfigError(f"{where} must be a JSON object")
    unknown = sorted(set(d) - set(allowed))
    if unknown:
        raise ConfigError(f"unknown key(s) in {where}: {', '.join(unknown)}")
    return d


def _number(d: dict, key: str, default, where: str):
    v = d.get(key, default)
    if v is None:
        return v
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ConfigError(f"{where}.{key} must be a number")
    return v


def grid_from_dict(d: dict) -> GridSpec:
    _strict(d, ("n1", "n2", "extent1", "extent2"), "grid")
    base = GridSpec()
    return GridSpec(
        d.get("n1", base.n1), d.get("n2", base.n2),
        _number(d, "extent1", base.extent1, "grid"), _number(d, "extent2", base.extent2, "grid"),
    )


def slit_from_dict(d: dict) -> SlitAperture:
    _strict(d, ("center", "width", "edge", "smoothing"), "slit")
    base = SlitAperture()
    return SlitAperture(
        _number(d, "center", base.center, "slit"), _number(d, "width", base.width, "slit"),
        d.get("edge", base.edge), _number(d, "smoothing", base.smoothing, "slit"),
    )


def discrete_config_from_dict(d: dict, seed: int = 0) -> DiscreteConfig:
    _strict(d, ("alpha", "beta", "shots"), "config")
    base = DiscreteConfig()
    return DiscreteConfig(
        _number(d, "alpha", base.alpha, "config"), _number(d, "beta", base.beta, "config"),
        d.get("shots", 0), seed,
    )


def continuous_config_from_dict(d: dict) -> ContinuousConfig:
    _strict(d, ("grid", "sigma_plus", "sigma_minus", "slit", "evolve_time"), "config")
    base = ContinuousConfig()
    return ContinuousConfig(
        grid_from_dict(d.get("grid", {})),
        _number(d, "sigma_plus", base.sigma_plus, "config"),
        _number(d, "sigma_minus", base.sigma_minus, "config"),
        slit_from_dict(d.get("slit", {})),
        _number(d, "evolve_time", None, "config"),
    )


def sweep_grid_from_dict(d: dict) -> SweepGrid:
    keys = ("sigma_plus", "sigma_minus", "slit_width", "grid", "slit_center", "slit_edge", "slit_smoothing")
    _strict(d, keys, "config")
    base = SweepGrid()
    lists = {}
    for key in keys[:3]:
        v = d.get(key, getattr(base, key))
        if not isinstance(v, (list, tuple)) or any(
            isinstance(x, bool) or not isinstance(x, (int, float)) for x in v
        ):
            raise ConfigError(f"config.{key} must be a list of numbers")
        lists[key] = tuple(v)
    return SweepGrid(
        **lists,
        grid=grid_from_dict(d.get("grid", {})),
        slit_center=_number(d, "slit_center", base.slit_center, "config"),
        slit_edge=d.get("slit_edge", base.slit_edge),
        slit_smoothing=_number(d, "slit_smoothing", base.slit_smoothing, "config"),
    )


@dataclass
class RunManifest:
    experiment: str
    config: dict = field(default_factory=dict)
    output: str | None = None
    format: str = "json"
    seed: int = 0

    def __post_init__(self):
        if self.experiment not in EXPERIMENTS:
            raise ConfigError(f"experiment must be one of {EXPERIMENTS} (got {self.experiment!r})")
        if self.format not in FORMATS:
            raise ConfigError(f"format must be one of {FORMATS} (got {self.format!r})")
        if isinstance(self.seed, bool) or not isinstance(self.seed, int) or not 0 <= self.seed < 2**64:
            raise ConfigError("seed must be an unsigned 64-bit integer")
        if not isinstance(self.config, dict):
            raise ConfigError("config must be a JSON object")

    @classmethod
    def from_dict(cls, d: dict) -> "RunManifest":
        _strict(d, ("experiment", "config", "output", "format", "seed"), "manifest")
        if "experiment" not in d:
            raise ConfigError("manifest is missing 'experiment'")
        return cls(**d)

    def build(self):
        """Validated experiment payload for this manifest."""
        if self.experiment == "discrete":
            return discrete_config_from_dict(self.config, self.seed)
        if self.experiment == "continuous":
            return continuous_config_from_dict(self.config)
        return sweep_grid_from_dict(self.config)


# ---------------------------------------------------------------- reports


def _outcome_dict(dist: OutcomeDistribution) -> dict:
    return {lab: float(dist[lab]) for lab in DETECTORS}


def discrete_report_to_dict(report: DiscreteReport) -> dict:
    cfg = report.config
    return {
        "experiment": "discrete",
        "config": {"alpha": cfg.alpha, "beta": cfg.beta, "shots": cfg.shots, "seed": cfg.seed},
        "unconditional": _outcome_dict(report.unconditional),
        "selection_probability": report.selection_probability,
        "discarded_probability": report.discarded_probability,
        "conditional": _outcome_dict(report.conditional),
        "unconditional_counts": report.unconditional_counts,
        "conditional_counts": report.conditional_counts,
    }


def discrete_report_from_dict(d: dict) -> DiscreteReport:
    c = d["config"]
    return DiscreteReport(
        unconditional=OutcomeDistribution(DETECTORS, [d["unconditional"][k] for k in DETECTORS]),
        selection_probability=d["selection_probability"],
        conditional=OutcomeDistribution(DETECTORS, [d["conditional"][k] for k in DETECTORS]),
        discarded_probability=d["discarded_probability"],
        unconditional_counts=d["unconditional_counts"],
        conditional_counts=d["conditional_counts"],
        config=DiscreteConfig(c["alpha"], c["beta"], c["shots"], c["seed"]),
    )


def _dist_dict(dist: GridDistribution) -> dict:
    return {
        "total": dist.total(), "mean": dist.mean(), "std": dist.std(), "spacing": dist.spacing,
        "points": dist.points, "density": dist.density,
    }


def _dist_from_dict(d: dict) -> GridDistribution:
    return GridDistribution(np.array(d["points"]), np.array(d["density"]), d["spacing"])


def continuous_config_to_dict(cfg: ContinuousConfig) -> dict:
    g, s = cfg.grid, cfg.slit
    return {
        "grid": {"n1": g.n1, "n2": g.n2, "extent1": g.extent1, "extent2": g.extent2},
        "sigma_plus": cfg.sigma_plus,
        "sigma_minus": cfg.sigma_minus,
        "slit": {"center": s.center, "width": s.width, "edge": s.edge, "smoothing": s.smoothing},
        "evolve_time": cfg.evolve_time,
    }


def spread_report_to_dict(report: SpreadReport) -> dict:
    return {
        "experiment": "continuous",
        "config": continuous_config_to_dict(report.config),
        "pass_probability": report.pass_probability,
        "p2_std_ratio": report.p2_std_ratio,
        "uncertainty_product": report.uncertainty_product,
        "unconditional_p2": _dist_dict(report.unconditional_p2),
        "conditional_p2": _dist_dict(report.conditional_p2),
        "unconditional_y2": _dist_dict(report.unconditional_y2),
        "conditional_y2": _dist_dict(report.conditional_y2),
    }


def spread_report_from_dict(d: dict) -> SpreadReport:
    return SpreadReport(
        pass_probability=d["pass_probability"],
        unconditional_p2=_dist_from_dict(d["unconditional_p2"]),
        conditional_p2=_dist_from_dict(d["conditional_p2"]),
        conditional_y2=_dist_from_dict(d["conditional_y2"]),
        unconditional_y2=_dist_from_dict(d["unconditional_y2"]),
        config=continuous_config_from_dict(d["config"]),
    )


def sweep_to_dict(rows: list[SweepRow]) -> dict:
    return {"experiment": "sweep", "rows": [row.__dict__ for row in rows]}


def sweep_from_dict(d: dict) -> list[SweepRow]:
    return [SweepRow(**r) for r in d["rows"]]


def report_to_dict(report) -> dict:
    if isinstance(report, DiscreteReport):
        return discrete_report_to_dict(report)
    if isinstance(report, SpreadReport):
        return spread_report_to_dict(report)
    return sweep_to_dict(report)


def report_from_json(text: str):
    d = json.loads(text)
    kind = d.get("experiment")
    if kind == "discrete":
        return discrete_report_from_dict(d)
    if kind == "continuous":
        return spread_report_from_dict(d)
    if kind == "sweep":
        return sweep_from_dict(d)
    raise ConfigError(f"unknown report kind {kind!r}")


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(fmt_float(v))
    return str(v)


def _csv(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_cell(v) for v in row])
    return buf.getvalue()


def sweep_to_csv(rows: list[SweepRow]) -> str:
    """Frozen seven-column table; an ``error`` column is appended only if a point failed."""
    header = list(CSV_HEADER)
    with_error = any(r.error for r in rows)
    if with_error:
        header.append("error")
    out = []
    for r in rows:
        cells = [getattr(r, name) for name in CSV_HEADER]
        if with_error:
            cells.append(r.error or "")
        out.append(cells)
    return _csv(header, out)


def discrete_report_to_csv(report: DiscreteReport) -> str:
    header = ["detector", "unconditional", "conditional", "selection_probability",
              "unconditional_counts", "conditional_counts"]
    uc, cc = report.unconditional_counts or {}, report.conditional_counts or {}
    rows = [[d, report.unconditional[d], report.conditional[d], report.selection_probability,
             uc.get(d), cc.get(d)] for d in DETECTORS]
    return _csv(header, rows)


def spread_report_to_csv(report: SpreadReport) -> str:
    header = ["p2", "p2_density_uncond", "p2_density_cond", "y2", "y2_density_uncond", "y2_density_cond"]
    cols = zip(report.unconditional_p2.points, report.unconditional_p2.density,
               report.conditional_p2.density, report.conditional_y2.points,
               report.unconditional_y2.density, report.conditional_y2.density)
    return _csv(header, [[float(v) for v in row] for row in cols])


def render(report, fmt: str) -> str:
    if fmt == "json":
        return dumps(report_to_dict(report))
    if isinstance(report, DiscreteReport):
        return discrete_report_to_csv(report)
    if isinstance(report, SpreadReport):
        return spread_report_to_csv(report)
    return sweep_to_csv(report)
