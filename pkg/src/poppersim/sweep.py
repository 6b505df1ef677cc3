"""Parameter sweep of the continuous experiment over (sigma_plus, sigma_minus, slit width)."""

from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .continuous import ContinuousConfig, GridSpec, SlitAperture, run_popper_continuous
from .errors import ConfigError, PopperSimError

CSV_HEADER = ("sigma_plus", "sigma_minus", "slit_width", "pass_prob", "p2_std_uncond", "p2_std_cond", "ratio")


@dataclass(frozen=True)
class SweepGrid:
    sigma_plus: tuple[float, ...] = (2.0, 4.0, 8.0)
    sigma_minus: tuple[float, ...] = (0.1, 0.25, 0.5)
    slit_width: tuple[float, ...] = (0.25, 0.5, 1.0)
    grid: GridSpec = field(default_factory=GridSpec)
    slit_center: float = 0.0
    slit_edge: str = "hard"
    slit_smoothing: float = 0.0

    def __post_init__(self):
        for name in ("sigma_plus", "sigma_minus", "slit_width"):
            values = tuple(float(v) for v in getattr(self, name))
            if not values:
                raise ConfigError(f"sweep grid is empty: no {name} values")
            object.__setattr__(self, name, values)

    def points(self) -> list[tuple[float, float, float]]:
        return list(itertools.product(self.sigma_plus, self.sigma_minus, self.slit_width))

    def config_at(self, sigma_plus: float, sigma_minus: float, slit_width: float) -> ContinuousConfig:
        slit = SlitAperture(self.slit_center, slit_width, self.slit_edge, self.slit_smoothing)
        return ContinuousConfig(self.grid, sigma_plus, sigma_minus, slit)


@dataclass(frozen=True)
class SweepRow:
    sigma_plus: float
    sigma_minus: float
    slit_width: float
    pass_prob: float | None = None
    p2_std_uncond: float | None = None
    p2_std_cond: float | None = None
    ratio: float | None = None
    y2_std_cond: float | None = None
    uncertainty_product: float | None = None
    error: str | None = None


def run_point(sweep: SweepGrid, point: tuple[float, float, float]) -> SweepRow:
    try:
        report = run_popper_continuous(sweep.config_at(*point))
    except PopperSimError as exc:
        return SweepRow(*point, error=f"{type(exc).__name__}: {exc}")
    p_unc = report.unconditional_p2.std()
    p_cond = report.conditional_p2.std()
    y_cond = report.conditional_y2.std()
    return SweepRow(*point, report.pass_probability, p_unc, p_cond, p_cond / p_unc, y_cond, y_cond * p_cond)


def run_sweep(sweep: SweepGrid, workers: int = 1) -> list[SweepRow]:
    """One row per grid point, in grid order; failed points carry ``error``."""
    points = sweep.points()
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(run_point, [sweep] * len(points), points))
    return [run_point(sweep, p) for p in points]
