"""Run circuits and reduce final states to detection statistics.

Detector semantics: D1 collects the horizontal channel and D2 the
vertical one, each summed over occupations n >= 1; the vacuum sector
(n = 0 in either channel) is the absorbed photon.  For the standard
obstructed interferometer (bs, phase phi, obstacle, mirror, bs on a
single H photon) the probabilities admit closed forms in beta and
Delta = theta - phi, which double as independent oracles for the
matrix pipeline.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Optional, Sequence

import numpy as np

from .algebra import BasisLabel, Channel, SpaceConfig, StateVector, apply, basis_state
from .dsl import CircuitSpec, format_element, format_input
from .elements import (
    TWO_PI,
    beam_splitter,
    element_to_operator,
    mirror,
    obstacle,
    phase_shifter,
)


def wrap_to_pi(angle: float) -> float:
    """Wrap an angle into the reporting branch (-pi, pi]."""
    wrapped = (float(angle) + math.pi) % TWO_PI - math.pi
    if wrapped == -math.pi:
        wrapped = math.pi
    return wrapped + 0.0


@dataclass(frozen=True)
class OutcomeDistribution:
    """Probabilities of the three outcomes of one circuit run.

    ``norm_deficit`` is |<psi|psi> - 1| of the state the distribution was
    read from; it stays 0 for closed-form distributions.  Components sum
    to 1 only for norm-preserving circuits, which covers every circuit
    where no vacuum amplitude enters the obstacle.
    """

    p_d1: float
    p_d2: float
    p_abs: float
    norm_deficit: float = 0.0

    def __post_init__(self) -> None:
        for name in ("p_d1", "p_d2", "p_abs"):
            value = float(getattr(self, name))
            if value < -1e-12:
                raise ValueError(f"{name} must be nonnegative, got {value}")
            object.__setattr__(self, name, max(value, 0.0))
        object.__setattr__(self, "norm_deficit", float(self.norm_deficit))


class SweepSource(Enum):
    """Whether a sweep row came from the matrix pipeline or the closed form."""

    PIPELINE = "pipeline"
    CLOSED_FORM = "closed_form"


@dataclass(frozen=True)
class SweepRow:
    """One grid point of a parameter sweep; delta is reported in (-pi, pi]."""

    beta: float
    delta: float
    phi: float
    distribution: OutcomeDistribution
    source: SweepSource


@dataclass(frozen=True)
class TraceRecord:
    """State snapshot after one circuit stage."""

    stage_name: str
    state: StateVector


@dataclass(frozen=True)
class McResult:
    """Counts from sampling a distribution, with a chi-square fit statistic."""

    shots: int
    counts: tuple[int, int, int]
    seed: int
    chi_square: float


def mz_circuit(phi: float = 0.0) -> CircuitSpec:
    """The plain interferometer: bs, phase, mirror, bs on one H photon."""
    return CircuitSpec(
        elements=(beam_splitter(), phase_shifter(phi), mirror(), beam_splitter())
    )


def obstructed_circuit(
    beta: float, theta: float = 0.0, gamma: float = 0.0, phi: float = 0.0
) -> CircuitSpec:
    """The interferometer with a semitransparent obstacle in the vertical arm."""
    return CircuitSpec(
        elements=(
            beam_splitter(),
            phase_shifter(phi),
            obstacle(beta, theta, gamma),
            mirror(),
            beam_splitter(),
        )
    )


def run_circuit(spec: CircuitSpec) -> StateVector:
    """Apply every element in order to the input ket; no normalization."""
    if not spec.elements:
        raise ValueError("circuit contains no elements")
    config = SpaceConfig(fock_dim=spec.fock_dim)
    state = basis_state(config, spec.input)
    for element in spec.elements:
        state = apply(element_to_operator(element, config), state)
    return state


def trace_states(spec: CircuitSpec) -> tuple[TraceRecord, ...]:
    """States after each stage: record 0 is the input, record k follows element k."""
    if not spec.elements:
        raise ValueError("circuit contains no elements")
    config = SpaceConfig(fock_dim=spec.fock_dim)
    state = basis_state(config, spec.input)
    records = [TraceRecord(format_input(spec.input), state)]
    for element in spec.elements:
        state = apply(element_to_operator(element, config), state)
        records.append(TraceRecord(format_element(element), state))
    return tuple(records)


def outcome_distribution(psi: StateVector) -> OutcomeDistribution:
    """Detection probabilities of a final state.

    p_d1 and p_d2 sum |<r_H,n|psi>|^2 and |<r_V,n|psi>|^2 over n >= 1;
    p_abs is the vacuum-sector weight.
    """
    weights = np.abs(psi.amplitudes.reshape(2, psi.config.fock_dim)) ** 2
    p_d1 = float(weights[Channel.H.value, 1:].sum())
    p_d2 = float(weights[Channel.V.value, 1:].sum())
    p_abs = float(weights[:, 0].sum())
    return OutcomeDistribution(
        p_d1, p_d2, p_abs, norm_deficit=abs(psi.squared_norm() - 1.0)
    )


def closed_form_mz(phi: float) -> OutcomeDistribution:
    """Cosine law of the plain interferometer: (1 +/- cos phi) / 2, no absorption."""
    phi = float(phi)
    if not math.isfinite(phi):
        raise ValueError(f"phi must be finite, got {phi}")
    c = math.cos(phi)
    return OutcomeDistribution(0.5 * (1.0 + c), 0.5 * (1.0 - c), 0.0)


def closed_form_obstacle(beta: float, delta: float) -> OutcomeDistribution:
    """Detection probabilities with a semitransparent obstacle.

    P_D1 = (1 + beta^2 + 2 beta cos Delta) / 4,
    P_D2 = (1 + beta^2 - 2 beta cos Delta) / 4,
    P_abs = (1 - beta^2) / 2,  with Delta = theta - phi.
    """
    beta = float(beta)
    delta = float(delta)
    if not math.isfinite(beta) or not 0.0 <= beta <= 1.0:
        raise ValueError(f"beta must lie in [0, 1], got {beta}")
    if not math.isfinite(delta):
        raise ValueError(f"delta must be finite, got {delta}")
    interference = 2.0 * beta * math.cos(delta)
    base = 1.0 + beta * beta
    return OutcomeDistribution(
        0.25 * (base + interference),
        0.25 * (base - interference),
        0.5 * (1.0 - beta * beta),
    )


_THRESHOLD_TOL = 1e-10


def success_threshold(delta: float) -> Optional[float]:
    """Smallest beta where the dark-port click beats absorption, or None.

    Solves P_D2(beta, delta) = alpha^2 / 2 by bisection on [0, 1] to
    1e-10.  Detection in D2 reveals the obstacle, so transparencies above
    the threshold make the dark-port click more likely than losing the
    photon.  No interior crossing exists when cos(delta) = 1.
    """
    delta = float(delta)
    if not math.isfinite(delta):
        raise ValueError(f"delta must be finite, got {delta}")

    def excess(beta: float) -> float:
        dist = closed_form_obstacle(beta, delta)
        return dist.p_d2 - dist.p_abs

    if excess(1.0) <= 0.0:
        return None
    lo, hi = 0.0, 1.0
    while hi - lo > _THRESHOLD_TOL:
        mid = 0.5 * (lo + hi)
        if excess(mid) < 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


_PHASE_AMPLITUDE_FLOOR = 1e-12


def relative_output_phase(spec: CircuitSpec, reference: CircuitSpec) -> Optional[float]:
    """Phase of <r_H,1|psi> relative to a reference circuit, in (-pi, pi].

    A transparent obstacle is detectable only through this phase: a
    transmission phase theta shows up in the bright-port amplitude even
    when the probabilities match the unobstructed circuit.  None when
    either bright-port amplitude vanishes.
    """
    port = BasisLabel(Channel.H, 1)
    amp = run_circuit(spec).amplitude(port)
    ref_amp = run_circuit(reference).amplitude(port)
    if abs(amp) < _PHASE_AMPLITUDE_FLOOR or abs(ref_amp) < _PHASE_AMPLITUDE_FLOOR:
        return None
    return wrap_to_pi(cmath.phase(amp) - cmath.phase(ref_amp))


def sweep(
    beta_grid: Sequence[float],
    delta_grid: Sequence[float],
    phi: float,
    source: SweepSource,
) -> list[SweepRow]:
    """Evaluate the obstructed circuit over a (beta, Delta) grid.

    Row-major: beta outer, Delta inner.  Pipeline rows run the matrix
    circuit with theta = Delta + phi; closed-form rows evaluate the
    probability formulas directly.  Each point is independent and pure.
    """
    betas = _validated_grid(beta_grid, "beta")
    deltas = _validated_grid(delta_grid, "delta")
    phi = float(phi)
    if not math.isfinite(phi):
        raise ValueError(f"phi must be finite, got {phi}")
    for beta in betas:
        if not 0.0 <= beta <= 1.0:
            raise ValueError(f"beta grid value {beta} outside [0, 1]")

    rows = []
    for beta in betas:
        for delta in deltas:
            if source is SweepSource.PIPELINE:
                circuit = obstructed_circuit(beta, theta=delta + phi, phi=phi)
                dist = outcome_distribution(run_circuit(circuit))
            else:
                dist = closed_form_obstacle(beta, delta)
            rows.append(SweepRow(beta, wrap_to_pi(delta), phi, dist, source))
    return rows


def _validated_grid(grid: Iterable[float], name: str) -> list[float]:
    values = [float(v) for v in grid]
    if not values:
        raise ValueError(f"{name} grid must not be empty")
    for v in values:
        if not math.isfinite(v):
            raise ValueError(f"{name} grid value {v} is not finite")
    return values


def monte_carlo(distribution: OutcomeDistribution, shots: int, seed: int) -> McResult:
    """Sample shot outcomes from a distribution, reproducibly.

    Inverse-CDF sampling over (D1, D2, abs) on a Philox counter-based
    stream keyed by ``seed``: outcome i depends only on (seed, i), so
    identical inputs give identical counts on any platform.  Chi-square
    is taken against expected counts; zero-probability categories with
    zero counts contribute nothing.
    """
    if shots < 1:
        raise ValueError(f"shots must be >= 1, got {shots}")
    probs = (distribution.p_d1, distribution.p_d2, distribution.p_abs)
    if abs(sum(probs) - 1.0) > 1e-10:
        raise ValueError(f"distribution must sum to 1, got {sum(probs)}")

    # Snap trailing zero-probability boundaries to 1 so empty categories
    # stay exactly empty under floating-point cumulative sums.
    upper_d1 = probs[0]
    upper_d2 = probs[0] + probs[1]
    if probs[2] == 0.0:
        upper_d2 = 1.0
        if probs[1] == 0.0:
            upper_d1 = 1.0

    rng = np.random.Generator(np.random.Philox(key=seed))
    draws = rng.random(shots)
    n_d1 = int(np.count_nonzero(draws < upper_d1))
    n_d2 = int(np.count_nonzero((draws >= upper_d1) & (draws < upper_d2)))
    counts = (n_d1, n_d2, shots - n_d1 - n_d2)

    chi_square = 0.0
    for observed, probability in zip(counts, probs):
        expected = shots * probability
        if expected == 0.0:
            assert observed == 0, "zero-probability category received counts"
            continue
        chi_square += (observed - expected) ** 2 / expected
    return McResult(shots, counts, seed, chi_square)
