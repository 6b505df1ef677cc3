"""Spin-1 observables in the standard z basis (hbar = 1).

Basis order is ``m = +1, 0, -1`` throughout, matching eigenvalue-descending
order from :func:`poppersim.quantum.eigenbasis`.
"""

from __future__ import annotations

from enum import Enum

import numpy as np

from .errors import ConfigError
from .quantum import HermitianObservable, eigenbasis

M_VALUES = (1, 0, -1)


class SpinAxis(str, Enum):
    X = "x"
    Y = "y"
    Z = "z"


_S = 1.0 / np.sqrt(2.0)

_MATRICES = {
    SpinAxis.X: _S * np.array([[0, 1, 0], [1, 0, 1], [0, 1, 0]], dtype=complex),
    SpinAxis.Y: _S * np.array([[0, -1j, 0], [1j, 0, -1j], [0, 1j, 0]], dtype=complex),
    SpinAxis.Z: np.diag([1.0, 0.0, -1.0]).astype(complex),
}


def spin1_observable(axis) -> HermitianObservable:
    try:
        axis = SpinAxis(axis)
    except ValueError:
        raise ConfigError(f"unknown spin axis {axis!r}") from None
    return HermitianObservable(_MATRICES[axis])


def z_to_x_overlaps() -> np.ndarray:
    """Table ``U[i, j] = <x; m_i | z; m_j>`` with ``m`` ordered ``+1, 0, -1``.

    Rows are the conjugated x eigenvectors expressed in the z basis, so
    ``U @ z_amplitudes`` gives x-basis amplitudes.
    """
    pairs = eigenbasis(spin1_observable(SpinAxis.X))
    return np.array([vec.conj() for _, vec in pairs])
