"""Pure-state engine for small finite-dimensional systems.

States live in a product basis of at most two subsystems.  Measurements are
projective, given as Hermitian observables acting on one subsystem, and the
Born rule is evaluated by contracting eigenvectors against the amplitude
tensor.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from .errors import ConfigError, NullSelectionError, NumericalError

NORM_TOL = 1e-12
SUM_TOL = 1e-9
HERMITIAN_TOL = 1e-12
EIGENVALUE_TOL = 1e-9
NULL_SELECTION = 1e-15


@dataclass(frozen=True)
class PureState:
    """Normalized amplitude vector over a labeled product basis.

    ``amplitudes`` is stored flat in row-major order of ``dims`` so index
    ``(i, j)`` of a two-subsystem state sits at ``i * dims[1] + j``.
    """

    dims: tuple[int, ...]
    amplitudes: np.ndarray
    labels: tuple[tuple, ...] = field(default=())

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        if not dims or any(d <= 0 for d in dims):
            raise ConfigError(f"dims must be positive, got {self.dims}")
        if len(dims) > 2:
            raise ConfigError("at most two subsystems are supported")
        amps = np.array(self.amplitudes, dtype=complex).reshape(-1)
        if amps.size != int(np.prod(dims)):
            raise ConfigError(
                f"amplitude vector has length {amps.size}, expected {int(np.prod(dims))}"
            )
        if not np.all(np.isfinite(amps)):
            raise ConfigError("amplitudes must be finite")
        norm = np.vdot(amps, amps).real
        if abs(norm - 1.0) > NORM_TOL:
            raise ConfigError(f"state is not normalized: sum |amplitude|^2 = {norm!r}")
        labels = self.labels or tuple(tuple(range(d)) for d in dims)
        labels = tuple(tuple(ls) for ls in labels)
        if len(labels) != len(dims) or any(len(ls) != d for ls, d in zip(labels, dims)):
            raise ConfigError("labels must give one label per basis state of every subsystem")
        amps.setflags(write=False)
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "amplitudes", amps)
        object.__setattr__(self, "labels", labels)

    @classmethod
    def from_amplitudes(cls, amplitudes, dims=None, labels=(), normalize=True) -> "PureState":
        amps = np.asarray(amplitudes, dtype=complex).reshape(-1)
        if dims is None:
            dims = (amps.size,)
        if normalize:
            norm = np.sqrt(np.vdot(amps, amps).real)
            if norm == 0.0 or not np.isfinite(norm):
                raise ConfigError("cannot normalize a zero or non-finite vector")
            amps = amps / norm
        return cls(tuple(dims), amps, tuple(labels))

    @property
    def tensor(self) -> np.ndarray:
        return self.amplitudes.reshape(self.dims)

    def norm(self) -> float:
        return float(np.sqrt(np.vdot(self.amplitudes, self.amplitudes).real))


@dataclass(frozen=True)
class HermitianObservable:
    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
            raise ConfigError(f"observable must be a square matrix, got shape {m.shape}")
        if not np.all(np.isfinite(m)):
            raise ConfigError("observable entries must be finite")
        if np.max(np.abs(m - m.conj().T)) > HERMITIAN_TOL:
            raise ConfigError("observable is not Hermitian")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True)
class OutcomeDistribution:
    """Probabilities over labeled outcomes.

    Rounding negatives down to ``-1e-12`` are clamped to zero; anything worse,
    or a total off by more than ``1e-9``, is rejected rather than renormalized.
    """

    labels: tuple
    probs: np.ndarray

    def __post_init__(self):
        labels = tuple(self.labels)
        probs = np.array(self.probs, dtype=float).reshape(-1)
        if len(labels) != probs.size:
            raise ConfigError("labels and probs differ in length")
        if not np.all(np.isfinite(probs)):
            raise NumericalError("non-finite probability")
        if np.any(probs < -NORM_TOL):
            raise NumericalError(f"negative probability {probs.min()!r}")
        probs = np.clip(probs, 0.0, None)
        if abs(probs.sum() - 1.0) > SUM_TOL:
            raise NumericalError(f"probabilities sum to {probs.sum()!r}")
        probs.setflags(write=False)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "probs", probs)

    def __getitem__(self, label) -> float:
        return float(self.probs[self.index(label)])

    def index(self, label) -> int:
        for i, lab in enumerate(self.labels):
            if lab == label:
                return i
        if isinstance(label, (int, float)):
            for i, lab in enumerate(self.labels):
                if isinstance(lab, (int, float)) and abs(lab - label) <= EIGENVALUE_TOL:
                    return i
        raise KeyError(label)

    def as_dict(self) -> dict:
        return {lab: float(p) for lab, p in zip(self.labels, self.probs)}

    def relabel(self, mapping) -> "OutcomeDistribution":
        return OutcomeDistribution(tuple(mapping[lab] for lab in self.labels), self.probs)


def tensor_product(a: PureState, b: PureState) -> PureState:
    amps = np.kron(a.amplitudes, b.amplitudes)
    return PureState.from_amplitudes(amps, a.dims + b.dims, a.labels + b.labels)


def _fix_phase(vec: np.ndarray) -> np.ndarray:
    mags = np.abs(vec)
    # ties within rounding go to the lowest index
    k = int(np.flatnonzero(mags >= mags.max() - NORM_TOL)[0])
    return vec * (np.conj(vec[k]) / mags[k])


def eigenbasis(obs: HermitianObservable) -> list[tuple[float, np.ndarray]]:
    """Eigenpairs sorted by descending eigenvalue.

    Each eigenvector has its largest-magnitude component made real and
    positive (lowest index wins a tie), so the basis is reproducible.
    """
    try:
        vals, vecs = np.linalg.eigh(obs.matrix)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"eigendecomposition did not converge: {exc}") from exc
    order = np.argsort(-vals, kind="stable")
    return [(float(vals[i]), _fix_phase(vecs[:, i])) for i in order]


def _eigenspaces(obs: HermitianObservable) -> list[tuple[float, np.ndarray]]:
    """Group eigenpairs into (eigenvalue, column basis) with degenerate values merged."""
    spaces: list[tuple[float, list[np.ndarray]]] = []
    for val, vec in eigenbasis(obs):
        if spaces and abs(spaces[-1][0] - val) <= EIGENVALUE_TOL:
            spaces[-1][1].append(vec)
        else:
            spaces.append((val, [vec]))
    return [(val, np.column_stack(vecs)) for val, vecs in spaces]


def _check_subsystem(state: PureState, subsystem: int, obs: HermitianObservable) -> None:
    if not 0 <= subsystem < len(state.dims):
        raise IndexError(f"subsystem {subsystem} out of range for {len(state.dims)} subsystems")
    if obs.dim != state.dims[subsystem]:
        raise ConfigError(
            f"observable dimension {obs.dim} does not match subsystem dimension "
            f"{state.dims[subsystem]}"
        )


def _branch(state: PureState, subsystem: int, basis: np.ndarray) -> np.ndarray:
    """Components of the state along ``basis`` on one subsystem; shape (k, rest...)."""
    psi = np.moveaxis(state.tensor, subsystem, 0)
    return np.tensordot(basis.conj().T, psi, axes=(1, 0))


def subsystem_probabilities(state: PureState, subsystem: int, obs: HermitianObservable) -> OutcomeDistribution:
    _check_subsystem(state, subsystem, obs)
    labels, probs = [], []
    for val, basis in _eigenspaces(obs):
        comp = _branch(state, subsystem, basis)
        labels.append(val)
        probs.append(float(np.sum(np.abs(comp) ** 2)))
    return OutcomeDistribution(tuple(labels), np.array(probs))


class Selection(NamedTuple):
    probability: float
    conditional: PureState


def post_select(state: PureState, subsystem: int, obs: HermitianObservable, eigenvalue: float) -> Selection:
    """Project ``subsystem`` onto the ``eigenvalue`` eigenspace of ``obs``.

    Returns the Born probability of the outcome and the renormalized joint
    state after the projection.
    """
    _check_subsystem(state, subsystem, obs)
    for val, basis in _eigenspaces(obs):
        if abs(val - eigenvalue) <= EIGENVALUE_TOL:
            break
    else:
        raise ConfigError(f"{eigenvalue!r} is not an eigenvalue of the observable")
    proj = basis @ basis.conj().T
    psi = np.moveaxis(state.tensor, subsystem, 0)
    projected = np.moveaxis(np.tensordot(proj, psi, axes=(1, 0)), 0, subsystem)
    prob = float(np.vdot(projected, projected).real)
    if prob < NULL_SELECTION:
        raise NullSelectionError(
            f"outcome {eigenvalue!r} on subsystem {subsystem} has probability {prob:.3e}"
        )
    return Selection(prob, PureState.from_amplitudes(projected, state.dims, state.labels))


def partner_amplitudes(state: PureState, subsystem: int, vector) -> np.ndarray:
    """Unnormalized amplitudes of the other subsystem given ``subsystem`` in ``vector``.

    For a two-subsystem state this is ``(<vector| x 1)|psi>``.
    """
    vec = np.asarray(vector, dtype=complex).reshape(-1, 1)
    if vec.shape[0] != state.dims[subsystem]:
        raise ConfigError("vector dimension does not match subsystem")
    return _branch(state, subsystem, vec)[0].reshape(-1)


def equal_up_to_phase(a, b, atol: float = NORM_TOL) -> bool:
    a = np.asarray(a, dtype=complex).reshape(-1)
    b = np.asarray(b, dtype=complex).reshape(-1)
    overlap = np.vdot(b, a)
    phase = overlap / abs(overlap) if abs(overlap) > 0 else 1.0
    return bool(np.max(np.abs(a - phase * b)) <= atol)


def sample_counts(dist: OutcomeDistribution, n: int, seed: int) -> dict:
    """Draw ``n`` outcomes from ``dist`` by inverse-CDF lookup.

    Uniforms come from numpy's PCG64 generator seeded with ``seed``: one
    ``Generator.random`` call of length ``n``.  Each uniform ``u`` selects the
    first outcome whose cumulative probability exceeds ``u``; zero-probability
    outcomes are never chosen.
    """
    if n < 0:
        raise ConfigError("n must be non-negative")
    counts = np.zeros(len(dist.labels), dtype=np.int64)
    if n:
        cdf = np.cumsum(dist.probs)
        cdf /= cdf[-1]
        u = np.random.Generator(np.random.PCG64(seed)).random(n)
        idx = np.searchsorted(cdf, u, side="right")
        counts = np.bincount(np.minimum(idx, len(cdf) - 1), minlength=len(cdf))
    return {lab: int(c) for lab, c in zip(dist.labels, counts)}


def basis_state(dim: int, index: int, labels: Sequence = ()) -> PureState:
    amps = np.zeros(dim, dtype=complex)
    amps[index] = 1.0
    return PureState((dim,), amps, (tuple(labels),) if labels else ())
