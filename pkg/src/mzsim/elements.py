"""Factories turning each optical element into a composite-space operator.

The four elements, written with spatial dyads X^{k,j} = |r_k><r_j| and
promoted to the composite space by tensoring with the Fock identity:

    mirror         M   = i (X^{H,V} + X^{V,H})
    beam splitter  BS  = (I_s + M) / sqrt(2)
    phase shifter  phi = e^{i phi} X^{H,H} + X^{V,V}
    obstacle       B   = X^{V,V} (x) (Lambda_a a + Lambda_t I_f) + X^{H,H} (x) I_f

The obstacle sits in the vertical arm and the phase shifter acts on the
horizontal channel; both placements are fixed.  The obstacle is generally
non-unitary and is implemented literally, including its attenuation of
|r_V, 0> by Lambda_t, which the single-photon circuits here never excite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional

from .algebra import (
    Channel,
    LinearOperator,
    SpaceConfig,
    annihilation,
    dyad,
    fock_identity,
    spatial_identity,
    tensor,
)

TWO_PI = 2.0 * math.pi


def wrap_angle(angle: float) -> float:
    """Wrap an angle into the canonical branch [0, 2*pi)."""
    angle = float(angle)
    if not math.isfinite(angle):
        raise ValueError(f"angle must be finite, got {angle}")
    return angle % TWO_PI


@dataclass(frozen=True)
class ObstacleParams:
    """Semitransparent obstacle with transmission Lambda_t and absorption Lambda_a.

    Lambda_t = beta e^{i theta} and Lambda_a = alpha e^{i gamma} with
    alpha = sqrt(1 - beta^2), so alpha^2 + beta^2 = 1.  beta = 0 is a fully
    absorbing obstacle, beta = 1 a transparent one.  gamma only rotates the
    phase of the absorbed (vacuum) amplitudes and never shows up in any
    detection probability.
    """

    beta: float
    theta: float = 0.0
    gamma: float = 0.0

    def __post_init__(self) -> None:
        beta = float(self.beta)
        if not math.isfinite(beta) or not 0.0 <= beta <= 1.0:
            raise ValueError(f"beta must lie in [0, 1], got {beta}")
        object.__setattr__(self, "beta", beta)
        object.__setattr__(self, "theta", wrap_angle(self.theta))
        object.__setattr__(self, "gamma", wrap_angle(self.gamma))

    @property
    def alpha(self) -> float:
        """Absorption magnitude sqrt(1 - beta^2)."""
        return math.sqrt(1.0 - self.beta * self.beta)

    @property
    def lambda_t(self) -> complex:
        """Transmission coefficient beta e^{i theta}."""
        return self.beta * complex(math.cos(self.theta), math.sin(self.theta))

    @property
    def lambda_a(self) -> complex:
        """Absorption coefficient alpha e^{i gamma}."""
        return self.alpha * complex(math.cos(self.gamma), math.sin(self.gamma))


class ElementKind(Enum):
    """The four circuit elements; values double as DSL keywords."""

    MIRROR = "mirror"
    BEAM_SPLITTER = "bs"
    PHASE_SHIFTER = "phase"
    OBSTACLE = "obstacle"


@dataclass(frozen=True)
class ElementSpec:
    """One element of a circuit: a kind plus its parameters.

    ``phi`` is meaningful only for phase shifters and ``obstacle`` only
    for obstacles; both are canonicalized at construction.
    """

    kind: ElementKind
    phi: float = 0.0
    obstacle: Optional[ObstacleParams] = None

    def __post_init__(self) -> None:
        if self.kind is ElementKind.OBSTACLE:
            if self.obstacle is None:
                raise ValueError("obstacle element requires ObstacleParams")
        elif self.obstacle is not None:
            raise ValueError(f"{self.kind.value} element does not take ObstacleParams")
        if self.kind is ElementKind.PHASE_SHIFTER:
            object.__setattr__(self, "phi", wrap_angle(self.phi))
        elif float(self.phi) != 0.0:
            raise ValueError(f"{self.kind.value} element does not take a phase")


def mirror() -> ElementSpec:
    return ElementSpec(ElementKind.MIRROR)


def beam_splitter() -> ElementSpec:
    return ElementSpec(ElementKind.BEAM_SPLITTER)


def phase_shifter(phi: float) -> ElementSpec:
    return ElementSpec(ElementKind.PHASE_SHIFTER, phi=phi)


def obstacle(beta: float, theta: float = 0.0, gamma: float = 0.0) -> ElementSpec:
    return ElementSpec(ElementKind.OBSTACLE, obstacle=ObstacleParams(beta, theta, gamma))


def mirror_operator(config: SpaceConfig) -> LinearOperator:
    """Promoted mirror i (X^{H,V} + X^{V,H}) (x) I_f."""
    spatial = LinearOperator(1j * (dyad(Channel.H, Channel.V).matrix + dyad(Channel.V, Channel.H).matrix))
    return tensor(spatial, fock_identity(config.fock_dim))


def beam_splitter_operator(config: SpaceConfig) -> LinearOperator:
    """Promoted 50/50 beam splitter (I_s + M) / sqrt(2) (x) I_f."""
    mirror_spatial = 1j * (dyad(Channel.H, Channel.V).matrix + dyad(Channel.V, Channel.H).matrix)
    spatial = LinearOperator((spatial_identity().matrix + mirror_spatial) / math.sqrt(2.0))
    return tensor(spatial, fock_identity(config.fock_dim))


def phase_shifter_operator(config: SpaceConfig, phi: float) -> LinearOperator:
    """Promoted phase shifter e^{i phi} X^{H,H} + X^{V,V} (x) I_f."""
    phi = wrap_angle(phi)
    phase = complex(math.cos(phi), math.sin(phi))
    spatial = LinearOperator(phase * dyad(Channel.H, Channel.H).matrix + dyad(Channel.V, Channel.V).matrix)
    return tensor(spatial, fock_identity(config.fock_dim))


def obstacle_operator(config: SpaceConfig, params: ObstacleParams) -> LinearOperator:
    """Obstacle X^{V,V} (x) (Lambda_a a + Lambda_t I_f) + X^{H,H} (x) I_f.

    At beta = 0, gamma = 0 this reduces to the promoted annihilation
    operator of a fully absorbing obstacle.  Not unitary in general.
    """
    vertical = LinearOperator(
        params.lambda_a * annihilation(config.fock_dim).matrix
        + params.lambda_t * fock_identity(config.fock_dim).matrix
    )
    v_block = tensor(dyad(Channel.V, Channel.V), vertical)
    h_block = tensor(dyad(Channel.H, Channel.H), fock_identity(config.fock_dim))
    return LinearOperator(v_block.matrix + h_block.matrix)


def element_to_operator(spec: ElementSpec, config: SpaceConfig) -> LinearOperator:
    """Dispatch an ElementSpec to its operator factory."""
    if spec.kind is ElementKind.MIRROR:
        return mirror_operator(config)
    if spec.kind is ElementKind.BEAM_SPLITTER:
        return beam_splitter_operator(config)
    if spec.kind is ElementKind.PHASE_SHIFTER:
        return phase_shifter_operator(config, spec.phi)
    if spec.kind is ElementKind.OBSTACLE:
        assert spec.obstacle is not None
        return obstacle_operator(config, spec.obstacle)
    raise ValueError(f"unknown element kind {spec.kind!r}")
