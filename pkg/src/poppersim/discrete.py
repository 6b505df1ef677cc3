"""Discrete Popper test with two entangled spin-1 particles.

Particle A passes a Stern-Gerlach field along x; detector D1 sits on the
central (m_x = 0) beam.  Particle B passes a z-oriented field and lands in
one of D+, D0, D-.  Coincidence counting keeps only the events where D1
fired.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError
from .quantum import (
    OutcomeDistribution,
    PureState,
    post_select,
    sample_counts,
    subsystem_probabilities,
)
from .spin1 import M_VALUES, SpinAxis, spin1_observable, z_to_x_overlaps

A, B = 0, 1
DETECTORS = ("D+", "D0", "D-")
DETECTOR_FOR_M = {1: "D+", 0: "D0", -1: "D-"}
SPIN_LABELS = (M_VALUES, M_VALUES)


@dataclass(frozen=True)
class DiscreteConfig:
    alpha: float = math.sqrt(0.05)
    beta: float = math.sqrt(0.9)
    shots: int = 0
    seed: int = 0

    def __post_init__(self):
        for name in ("alpha", "beta"):
            v = getattr(self, name)
            if not isinstance(v, (int, float)) or not math.isfinite(v):
                raise ConfigError(f"{name} must be a finite real number")
            if v < 0:
                raise ConfigError(f"{name} must be non-negative (got {v!r})")
        total = 2 * self.alpha**2 + self.beta**2
        if abs(total - 1.0) > 1e-9:
            raise ConfigError(f"normalization 2*alpha^2 + beta^2 = 1 violated: got {total!r}")
        if isinstance(self.shots, bool) or not isinstance(self.shots, int) or self.shots < 0:
            raise ConfigError("shots must be a non-negative integer")
        if isinstance(self.seed, bool) or not isinstance(self.seed, int) or self.seed < 0:
            raise ConfigError("seed must be a non-negative integer")

    @classmethod
    def from_beta(cls, beta: float, **kw) -> "DiscreteConfig":
        """Config with ``alpha`` fixed by normalization."""
        return cls(alpha=math.sqrt(max(0.0, (1.0 - beta**2) / 2.0)), beta=beta, **kw)


@dataclass(frozen=True)
class DiscreteReport:
    unconditional: OutcomeDistribution
    selection_probability: float
    conditional: OutcomeDistribution
    discarded_probability: float
    unconditional_counts: dict | None = None
    conditional_counts: dict | None = None
    config: DiscreteConfig = field(default_factory=DiscreteConfig)


def build_state(cfg: DiscreteConfig) -> PureState:
    """alpha|+1,-1> + beta|0,0> + alpha|-1,+1> in the (A_z, B_z) basis."""
    amps = np.zeros((3, 3), dtype=complex)
    amps[0, 2] = cfg.alpha
    amps[1, 1] = cfg.beta
    amps[2, 0] = cfg.alpha
    # config validation guarantees the norm to 1e-9; the state demands 1e-12
    return PureState.from_amplitudes(amps, (3, 3), SPIN_LABELS)


def _to_detectors(dist: OutcomeDistribution) -> OutcomeDistribution:
    return dist.relabel({lab: DETECTOR_FOR_M[round(lab)] for lab in dist.labels})


def run_unconditional(cfg: DiscreteConfig) -> OutcomeDistribution:
    """B's z statistics with nothing in A's path."""
    return _to_detectors(subsystem_probabilities(build_state(cfg), B, spin1_observable(SpinAxis.Z)))


def run_coincidence(cfg: DiscreteConfig) -> DiscreteReport:
    """Post-select on D1 (A_x = 0) and report B's conditional z statistics.

    With ``cfg.shots > 0`` the joint (A_x, B_z) outcome is sampled ``shots``
    times; ``unconditional_counts`` histograms B over every shot and
    ``conditional_counts`` only over shots where D1 fired.
    """
    state = build_state(cfg)
    sz = spin1_observable(SpinAxis.Z)
    prob, conditional = post_select(state, A, spin1_observable(SpinAxis.X), 0.0)
    report = DiscreteReport(
        unconditional=_to_detectors(subsystem_probabilities(state, B, sz)),
        selection_probability=prob,
        conditional=_to_detectors(subsystem_probabilities(conditional, B, sz)),
        discarded_probability=1.0 - prob,
        config=cfg,
    )
    if cfg.shots:
        uncond, cond = sample_joint_counts(state, cfg.shots, cfg.seed)
        report = DiscreteReport(**{**report.__dict__, "unconditional_counts": uncond,
                                   "conditional_counts": cond})
    return report


def joint_xz_distribution(state: PureState) -> OutcomeDistribution:
    """Distribution of (A_x, B_z) pairs, labels ``(m_x, m_z)``."""
    amps = z_to_x_overlaps() @ state.tensor
    labels = tuple((mx, mz) for mx in M_VALUES for mz in M_VALUES)
    return OutcomeDistribution(labels, np.abs(amps.reshape(-1)) ** 2)


def sample_joint_counts(state: PureState, shots: int, seed: int) -> tuple[dict, dict]:
    joint = sample_counts(joint_xz_distribution(state), shots, seed)
    uncond = {d: 0 for d in DETECTORS}
    cond = {d: 0 for d in DETECTORS}
    for (mx, mz), c in joint.items():
        uncond[DETECTOR_FOR_M[mz]] += c
        if mx == 0:
            cond[DETECTOR_FOR_M[mz]] += c
    return uncond, cond


def sample_unconditional_counts(cfg: DiscreteConfig) -> dict:
    return sample_counts(run_unconditional(cfg), cfg.shots, cfg.seed)


def decompose_x_basis(cfg: DiscreteConfig) -> dict[int, np.ndarray]:
    """B-side amplitudes of each A_x branch, keyed by m_x.

    ``psi = sum_m |A_x; m> (x) branch[m]`` with B amplitudes ordered
    ``+1, 0, -1``; branches are not normalized.
    """
    amps = z_to_x_overlaps() @ build_state(cfg).tensor
    return {m: amps[i].copy() for i, m in enumerate(M_VALUES)}


def reassemble(branches: dict[int, np.ndarray]) -> np.ndarray:
    """Inverse of :func:`decompose_x_basis`: flat (A_z, B_z) amplitudes."""
    x_amps = np.array([branches[m] for m in M_VALUES])
    return (z_to_x_overlaps().conj().T @ x_amps).reshape(-1)


def branch_mixture(cfg: DiscreteConfig) -> OutcomeDistribution:
    """B's z distribution rebuilt by weighting every A_x branch by its probability."""
    total = np.zeros(3)
    for amps in decompose_x_basis(cfg).values():
        total += np.abs(amps) ** 2
    return OutcomeDistribution(DETECTORS, total)
