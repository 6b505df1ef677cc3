"""Continuous two-particle Popper experiment on a 2D grid (hbar = m = 1).

The ideal EPR state is replaced by a two-scale Gaussian.  With
``u = (y1 + y2)/sqrt(2)`` and ``v = (y1 - y2)/sqrt(2)``,

    psi(y1, y2) ~ exp(-u**2 / (4 sigma_plus**2)) * exp(-v**2 / (4 sigma_minus**2))

so ``sigma_plus`` and ``sigma_minus`` are the position standard deviations of
the two normal modes.  ``sigma_minus -> 0`` with ``sigma_plus -> inf``
recovers perfect position correlation and unbounded momentum spread.

Axis 0 of every grid array is particle 1 (the one behind the slit), axis 1
is particle 2.  Momentum densities use the unitary continuous-transform
normalization, so densities integrate to one against ``dk = 2 pi / (n dy)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, NullSelectionError, ResolutionError

NORM_TOL = 1e-9
TAIL_TOL = 1e-8
NYQUIST_FACTOR = 5.0


@dataclass(frozen=True)
class GridSpec:
    n1: int = 512
    n2: int = 512
    extent1: float = 36.0
    extent2: float = 36.0

    def __post_init__(self):
        for name in ("n1", "n2"):
            n = getattr(self, name)
            if isinstance(n, bool) or not isinstance(n, int) or n < 16:
                raise ConfigError(f"{name} must be an integer >= 16 (got {n!r})")
        for name in ("extent1", "extent2"):
            e = getattr(self, name)
            if not isinstance(e, (int, float)) or not math.isfinite(e) or e <= 0:
                raise ConfigError(f"{name} must be a positive half-width (got {e!r})")

    @property
    def dy1(self) -> float:
        return 2.0 * self.extent1 / self.n1

    @property
    def dy2(self) -> float:
        return 2.0 * self.extent2 / self.n2

    def spacing(self, particle: int) -> float:
        return (self.dy1, self.dy2)[particle]

    def size(self, particle: int) -> int:
        return (self.n1, self.n2)[particle]

    def positions(self, particle: int) -> np.ndarray:
        # includes y = 0 exactly so centered apertures sit symmetrically
        n = self.size(particle)
        return (np.arange(n) - n // 2) * self.spacing(particle)

    def momenta(self, particle: int) -> np.ndarray:
        n = self.size(particle)
        return np.fft.fftshift(2.0 * np.pi * np.fft.fftfreq(n, self.spacing(particle)))

    def dk(self, particle: int) -> float:
        return 2.0 * np.pi / (self.size(particle) * self.spacing(particle))

    def k_nyquist(self, particle: int) -> float:
        return np.pi / self.spacing(particle)


@dataclass(frozen=True)
class WavefunctionGrid2D:
    grid: GridSpec
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=complex)
        if v.shape != (self.grid.n1, self.grid.n2):
            raise ConfigError(f"values shape {v.shape} does not match grid")
        if not np.all(np.isfinite(v)):
            raise ResolutionError("wavefunction contains non-finite values")
        norm = self.norm()
        if abs(norm - 1.0) > NORM_TOL:
            raise ResolutionError(f"wavefunction not normalized: integral |psi|^2 = {norm!r}")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    def norm(self) -> float:
        v = np.asarray(self.values)
        return float(np.sum(np.abs(v) ** 2) * self.grid.dy1 * self.grid.dy2)

    @classmethod
    def normalized(cls, grid: GridSpec, values) -> "WavefunctionGrid2D":
        v = np.asarray(values, dtype=complex)
        total = float(np.sum(np.abs(v) ** 2) * grid.dy1 * grid.dy2)
        if not total > 0.0 or not math.isfinite(total):
            raise NullSelectionError("cannot normalize a zero wavefunction")
        return cls(grid, v / math.sqrt(total))

    @property
    def density(self) -> np.ndarray:
        return np.abs(self.values) ** 2


@dataclass(frozen=True)
class SlitAperture:
    """Aperture on particle 1.

    ``edge="hard"`` is the ideal slit; on the grid each cell is weighted by
    the fraction of it lying inside the aperture so that pass probabilities
    converge to the continuum integral.  ``edge="soft"`` uses a tanh-smoothed
    indicator with the given ``smoothing`` length.
    """

    center: float = 0.0
    width: float = 0.5
    edge: str = "hard"
    smoothing: float = 0.0

    def __post_init__(self):
        if not math.isfinite(self.center):
            raise ConfigError("slit center must be finite")
        if not self.width > 0 or not math.isfinite(self.width):
            raise ConfigError(f"slit width must be positive (got {self.width!r})")
        if self.edge not in ("hard", "soft"):
            raise ConfigError(f"slit edge must be 'hard' or 'soft' (got {self.edge!r})")
        if self.edge == "soft" and not 0 < self.smoothing < self.width / 2:
            raise ConfigError("soft slit needs 0 < smoothing < width/2")

    def transmission(self, y: np.ndarray, dy: float) -> np.ndarray:
        """Amplitude transmission factor in [0, 1] at cell centers ``y``."""
        lo, hi = self.center - self.width / 2, self.center + self.width / 2
        if self.edge == "soft":
            s = self.smoothing
            return 0.5 * (np.tanh((y - lo) / s) - np.tanh((y - hi) / s))
        covered = np.clip(np.minimum(y + dy / 2, hi) - np.maximum(y - dy / 2, lo), 0.0, None)
        return np.sqrt(covered / dy)


@dataclass(frozen=True)
class ContinuousConfig:
    grid: GridSpec = field(default_factory=GridSpec)
    sigma_plus: float = 4.0
    sigma_minus: float = 0.25
    slit: SlitAperture = field(default_factory=SlitAperture)
    evolve_time: float | None = None

    def __post_init__(self):
        for name in ("sigma_plus", "sigma_minus"):
            v = getattr(self, name)
            if not isinstance(v, (int, float)) or not math.isfinite(v):
                raise ConfigError(f"{name} must be a finite real number")
        if not self.sigma_minus > 0:
            raise ConfigError(f"sigma_minus must be positive (got {self.sigma_minus!r})")
        if self.sigma_plus < self.sigma_minus:
            raise ConfigError("sigma_plus >= sigma_minus violated")
        if self.evolve_time is not None and not (
            isinstance(self.evolve_time, (int, float)) and math.isfinite(self.evolve_time)
        ):
            raise ConfigError("evolve_time must be a finite number or null")


@dataclass(frozen=True)
class GridDistribution:
    """Density sampled on a uniform grid; moments are plain weighted sums."""

    points: np.ndarray
    density: np.ndarray
    spacing: float

    def total(self) -> float:
        return float(np.sum(self.density) * self.spacing)

    def mean(self) -> float:
        return float(np.sum(self.points * self.density) * self.spacing / self.total())

    def std(self) -> float:
        mu = self.mean()
        var = np.sum((self.points - mu) ** 2 * self.density) * self.spacing / self.total()
        return float(np.sqrt(var))


@dataclass(frozen=True)
class SpreadReport:
    pass_probability: float
    unconditional_p2: GridDistribution
    conditional_p2: GridDistribution
    conditional_y2: GridDistribution
    unconditional_y2: GridDistribution
    config: ContinuousConfig

    @property
    def p2_std_ratio(self) -> float:
        return self.conditional_p2.std() / self.unconditional_p2.std()

    @property
    def uncertainty_product(self) -> float:
        return self.conditional_y2.std() * self.conditional_p2.std()


def epr_moments(sigma_plus: float, sigma_minus: float) -> dict:
    """Closed-form second moments of the two-scale Gaussian pair."""
    sp2, sm2 = sigma_plus**2, sigma_minus**2
    return {
        "y_std": math.sqrt((sp2 + sm2) / 2.0),
        "p_std": math.sqrt(1.0 / sp2 + 1.0 / sm2) / (2.0 * math.sqrt(2.0)),
        "y_corr": (sp2 - sm2) / (sp2 + sm2),
    }


def suggest_grid(sigma_plus: float, sigma_minus: float, min_n: int = 16) -> GridSpec:
    """Smallest power-of-two square grid meeting the tail and Nyquist bounds."""
    m = epr_moments(sigma_plus, sigma_minus)
    extent = math.ceil(1.1 * m["y_std"] * math.sqrt(2.0 * math.log(1.0 / TAIL_TOL)))
    dy_max = np.pi / (1.2 * NYQUIST_FACTOR * m["p_std"])
    n = max(min_n, 2 ** math.ceil(math.log2(2.0 * extent / dy_max)))
    return GridSpec(n, n, float(extent), float(extent))


def boundary_tail(values: np.ndarray) -> float:
    """Largest density on the grid edge relative to the peak density."""
    dens = np.abs(values) ** 2
    edge = max(dens[0].max(), dens[-1].max(), dens[:, 0].max(), dens[:, -1].max())
    return float(edge / dens.max())


def _check_tails(state_values: np.ndarray, grid: GridSpec, suggestion: GridSpec | None = None) -> None:
    tail = boundary_tail(state_values)
    if tail >= TAIL_TOL:
        raise ResolutionError(
            f"wavefunction reaches the grid boundary (edge/peak density {tail:.2e} >= {TAIL_TOL:g}); "
            f"enlarge extent (suggested grid: {suggestion})",
            suggestion,
        )


def build_epr_gaussian(cfg: ContinuousConfig) -> WavefunctionGrid2D:
    grid = cfg.grid
    moments = epr_moments(cfg.sigma_plus, cfg.sigma_minus)
    need = NYQUIST_FACTOR * moments["p_std"]
    for particle in (0, 1):
        if grid.k_nyquist(particle) <= need:
            suggestion = suggest_grid(cfg.sigma_plus, cfg.sigma_minus)
            raise ResolutionError(
                f"grid too coarse for particle {particle + 1}: pi/dy = {grid.k_nyquist(particle):.3f} "
                f"must exceed {NYQUIST_FACTOR:g} x momentum std = {need:.3f} "
                f"(suggested grid: {suggestion})",
                suggestion,
            )
    y1 = grid.positions(0)[:, None]
    y2 = grid.positions(1)[None, :]
    u2 = (y1 + y2) ** 2 / 2.0
    v2 = (y1 - y2) ** 2 / 2.0
    values = np.exp(-u2 / (4.0 * cfg.sigma_plus**2) - v2 / (4.0 * cfg.sigma_minus**2))
    _check_tails(values, grid, suggest_grid(cfg.sigma_plus, cfg.sigma_minus))
    return WavefunctionGrid2D.normalized(grid, values)


def position_marginal(state: WavefunctionGrid2D, particle: int) -> GridDistribution:
    grid = state.grid
    other = 1 - particle
    dens = np.sum(state.density, axis=other) * grid.spacing(other)
    return GridDistribution(grid.positions(particle), dens, grid.spacing(particle))


def momentum_amplitudes(state: WavefunctionGrid2D, particle: int) -> np.ndarray:
    """Fourier transform along one particle's axis, fftshifted, unitary scaling.

    The other axis stays in position space.
    """
    grid = state.grid
    dy = grid.spacing(particle)
    phi = np.fft.fft(state.values, axis=particle) * (dy / math.sqrt(2.0 * math.pi))
    return np.fft.fftshift(phi, axes=particle)


def momentum_marginal(state: WavefunctionGrid2D, particle: int) -> GridDistribution:
    grid = state.grid
    other = 1 - particle
    dens = np.sum(np.abs(momentum_amplitudes(state, particle)) ** 2, axis=other) * grid.spacing(other)
    return GridDistribution(grid.momenta(particle), dens, grid.dk(particle))


def position_correlation(state: WavefunctionGrid2D) -> float:
    grid = state.grid
    y1 = grid.positions(0)[:, None]
    y2 = grid.positions(1)[None, :]
    w = state.density * grid.dy1 * grid.dy2
    m1, m2 = np.sum(w * y1), np.sum(w * y2)
    cov = np.sum(w * (y1 - m1) * (y2 - m2))
    var1 = np.sum(w * (y1 - m1) ** 2)
    var2 = np.sum(w * (y2 - m2) ** 2)
    return float(cov / np.sqrt(var1 * var2))


def slit_branches(state: WavefunctionGrid2D, slit: SlitAperture):
    """Pass and block branches of the aperture on particle 1.

    Returns ``(p_pass, pass_values, p_block, block_values)`` with unnormalized
    values; the two effects ``t**2`` and ``1 - t**2`` sum to the identity.
    """
    grid = state.grid
    t = slit.transmission(grid.positions(0), grid.dy1)[:, None]
    passed = state.values * t
    blocked = state.values * np.sqrt(np.clip(1.0 - t**2, 0.0, None))
    cell = grid.dy1 * grid.dy2
    p_pass = float(np.sum(np.abs(passed) ** 2) * cell)
    p_block = float(np.sum(np.abs(blocked) ** 2) * cell)
    return p_pass, passed, p_block, blocked


def apply_slit(state: WavefunctionGrid2D, slit: SlitAperture) -> tuple[float, WavefunctionGrid2D]:
    p_pass, passed, _, _ = slit_branches(state, slit)
    if p_pass < 1e-12:
        raise NullSelectionError(f"slit pass probability {p_pass:.3e} is below 1e-12")
    return p_pass, WavefunctionGrid2D(state.grid, passed / math.sqrt(p_pass))


def free_evolve(state: WavefunctionGrid2D, t: float) -> WavefunctionGrid2D:
    """Exact free propagation: multiply by exp(-i (k1^2 + k2^2) t / 2) in k space."""
    if t == 0:
        return state
    grid = state.grid
    k1 = 2.0 * np.pi * np.fft.fftfreq(grid.n1, grid.dy1)[:, None]
    k2 = 2.0 * np.pi * np.fft.fftfreq(grid.n2, grid.dy2)[None, :]
    phase = np.exp(-0.5j * (k1**2 + k2**2) * t)
    values = np.fft.ifft2(np.fft.fft2(state.values) * phase)
    _check_tails(values, grid)
    return WavefunctionGrid2D(grid, values)


def run_popper_continuous(cfg: ContinuousConfig) -> SpreadReport:
    state = build_epr_gaussian(cfg)
    unconditional_p2 = momentum_marginal(state, 1)
    unconditional_y2 = position_marginal(state, 1)
    p_pass, conditional = apply_slit(state, cfg.slit)
    if cfg.evolve_time:
        conditional = free_evolve(conditional, cfg.evolve_time)
    return SpreadReport(
        pass_probability=p_pass,
        unconditional_p2=unconditional_p2,
        conditional_p2=momentum_marginal(conditional, 1),
        conditional_y2=position_marginal(conditional, 1),
        unconditional_y2=unconditional_y2,
        config=cfg,
    )
