"""Dense complex linear algebra on the spatial (x) Fock product space.

A photon in the interferometer lives in the composite space spanned by
|r_k> (x) |n>, where k in {H, V} labels the spatial channel and n the
occupation of a truncated Fock ladder {|0>, ..., |F-1>}.  The canonical
basis ordering is channel-major: index = channel_index * F + n, with
H before V and occupation ascending.  All types here are immutable and
all operations are pure functions; nothing renormalizes implicitly, so
norm deficits survive as information.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterator, Sequence

import numpy as np


class DimensionError(ValueError):
    """Operand dimensions do not match the space they claim to act on."""


class Channel(Enum):
    """Spatial channel of the interferometer; the value is the basis index."""

    H = 0
    V = 1


@dataclass(frozen=True)
class SpaceConfig:
    """Dimensions of the spatial and Fock tensor factors.

    The spatial factor is always two-dimensional (channels H and V).
    The Fock ladder is truncated at ``fock_dim`` >= 2; the default of 2
    keeps exactly {|0>, |1>}, which is all a single-photon circuit needs.
    """

    fock_dim: int = 2
    spatial_dim: int = 2

    def __post_init__(self) -> None:
        if self.spatial_dim != 2:
            raise DimensionError(f"spatial_dim must be 2, got {self.spatial_dim}")
        if self.fock_dim < 2:
            raise DimensionError(f"fock_dim must be >= 2, got {self.fock_dim}")

    @property
    def dim(self) -> int:
        """Dimension of the composite space (2 * fock_dim)."""
        return self.spatial_dim * self.fock_dim

    def index_of(self, label: BasisLabel) -> int:
        """Canonical index of |r_channel, n> under channel-major ordering."""
        if not 0 <= label.occupation < self.fock_dim:
            raise DimensionError(
                f"occupation {label.occupation} outside Fock truncation {self.fock_dim}"
            )
        return label.channel.value * self.fock_dim + label.occupation

    def labels(self) -> Iterator[BasisLabel]:
        """All basis labels in canonical index order."""
        for channel in Channel:
            for n in range(self.fock_dim):
                yield BasisLabel(channel, n)


@dataclass(frozen=True)
class BasisLabel:
    """One composite basis ket |r_channel> (x) |n>."""

    channel: Channel
    occupation: int

    def __post_init__(self) -> None:
        if self.occupation < 0:
            raise ValueError(f"occupation must be >= 0, got {self.occupation}")


@dataclass(frozen=True, eq=False)
class StateVector:
    """Complex amplitude vector over the composite basis."""

    config: SpaceConfig
    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        amps = np.array(self.amplitudes, dtype=np.complex128).reshape(-1)
        if amps.size != self.config.dim:
            raise DimensionError(
                f"state has {amps.size} amplitudes, space has dimension {self.config.dim}"
            )
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    def amplitude(self, label: BasisLabel) -> complex:
        """Amplitude <r_channel, n | psi>."""
        return complex(self.amplitudes[self.config.index_of(label)])

    def squared_norm(self) -> float:
        """<psi|psi>, the sum of squared amplitude magnitudes."""
        return float(np.vdot(self.amplitudes, self.amplitudes).real)


@dataclass(frozen=True, eq=False)
class LinearOperator:
    """Dense complex square matrix on one of the three spaces.

    The matrix dimension declares the space: 2 for spatial-only, F for
    Fock-only, 2*F for the composite space.
    """

    matrix: np.ndarray

    def __post_init__(self) -> None:
        mat = np.array(self.matrix, dtype=np.complex128)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise DimensionError(f"operator matrix must be square, got shape {mat.shape}")
        mat.setflags(write=False)
        object.__setattr__(self, "matrix", mat)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def adjoint(self) -> LinearOperator:
        """Hermitian conjugate."""
        return LinearOperator(self.matrix.conj().T)


def dyad(k: Channel, j: Channel) -> LinearOperator:
    """Spatial dyad X^{k,j} = |r_k><r_j|: entry 1 at (k, j), zero elsewhere."""
    mat = np.zeros((2, 2), dtype=np.complex128)
    mat[k.value, j.value] = 1.0
    return LinearOperator(mat)


def annihilation(fock_dim: int) -> LinearOperator:
    """Boson annihilation operator a|n> = sqrt(n)|n-1> on the truncated ladder."""
    if fock_dim < 2:
        raise DimensionError(f"fock_dim must be >= 2, got {fock_dim}")
    mat = np.zeros((fock_dim, fock_dim), dtype=np.complex128)
    for n in range(1, fock_dim):
        mat[n - 1, n] = math.sqrt(n)
    return LinearOperator(mat)


def spatial_identity() -> LinearOperator:
    """Identity on the two spatial channels."""
    return LinearOperator(np.eye(2, dtype=np.complex128))


def fock_identity(fock_dim: int) -> LinearOperator:
    """Identity on the truncated Fock ladder."""
    if fock_dim < 2:
        raise DimensionError(f"fock_dim must be >= 2, got {fock_dim}")
    return LinearOperator(np.eye(fock_dim, dtype=np.complex128))


def identity(config: SpaceConfig) -> LinearOperator:
    """Identity on the composite space."""
    return LinearOperator(np.eye(config.dim, dtype=np.complex128))


def tensor(spatial_op: LinearOperator, fock_op: LinearOperator) -> LinearOperator:
    """Promote a spatial (x) Fock operator pair to the composite space.

    The Kronecker product is taken spatial-first, which is exactly the
    channel-major basis ordering, so tensor(I_s, I_f) is the composite
    identity.
    """
    if spatial_op.dim != 2:
        raise DimensionError(f"spatial operand must be 2x2, got {spatial_op.dim}x{spatial_op.dim}")
    return LinearOperator(np.kron(spatial_op.matrix, fock_op.matrix))


def apply(op: LinearOperator, psi: StateVector) -> StateVector:
    """Matrix-vector product op|psi>; never renormalizes."""
    if op.dim != psi.config.dim:
        raise DimensionError(
            f"operator dimension {op.dim} does not match state dimension {psi.config.dim}"
        )
    return StateVector(psi.config, op.matrix @ psi.amplitudes)


def compose(ops: Sequence[LinearOperator]) -> LinearOperator:
    """Compose operators listed in application order (first applied first).

    compose([O1, O2]) acts as O2 O1, so applying the result equals
    applying O1 then O2.
    """
    if len(ops) == 0:
        raise ValueError("compose requires at least one operator")
    dim = ops[0].dim
    for op in ops:
        if op.dim != dim:
            raise DimensionError(f"operator dimensions differ: {op.dim} vs {dim}")
    product = ops[0].matrix
    for op in ops[1:]:
        product = op.matrix @ product
    return LinearOperator(product)


def inner_product(psi1: StateVector, psi2: StateVector) -> complex:
    """<psi1|psi2>, conjugate-linear in the first argument."""
    if psi1.config != psi2.config:
        raise DimensionError(
            f"state configs differ: {psi1.config} vs {psi2.config}"
        )
    return complex(np.vdot(psi1.amplitudes, psi2.amplitudes))


def basis_state(config: SpaceConfig, label: BasisLabel) -> StateVector:
    """Unit basis ket |r_channel, n>."""
    amps = np.zeros(config.dim, dtype=np.complex128)
    amps[config.index_of(label)] = 1.0
    return StateVector(config, amps)
