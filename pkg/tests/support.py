"""Shared test helpers: oracles and random generators."""

from __future__ import annotations

import math

import numpy as np

from mzsim import (
    BasisLabel,
    Channel,
    CircuitSpec,
    beam_splitter,
    mirror,
    obstacle,
    phase_shifter,
    serialize_circuit,
)


def random_unitary(rng: np.random.Generator, dim: int) -> np.ndarray:
    """Haar-ish random unitary from the QR decomposition of a Ginibre matrix."""
    ginibre = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(ginibre)
    return q * (np.diagonal(r) / np.abs(np.diagonal(r)))


def final_state_amplitudes(
    beta: float, theta: float, gamma: float, phi: float
) -> np.ndarray:
    """Closed-form final state of the obstructed circuit on one H photon.

    Canonical amplitude order [H0, H1, V0, V1].  Written out by hand from
    the element definitions, independently of the matrix pipeline:

        H1:  -(e^{i phi} + Lambda_t) / 2
        V1:   i (e^{i phi} - Lambda_t) / 2
        H0:  -Lambda_a / 2
        V0:  -i Lambda_a / 2
    """
    lam_t = beta * np.exp(1j * theta)
    lam_a = math.sqrt(1.0 - beta * beta) * np.exp(1j * gamma)
    bright = np.exp(1j * phi)
    return np.array(
        [
            -lam_a / 2.0,
            -(bright + lam_t) / 2.0,
            -1j * lam_a / 2.0,
            1j * (bright - lam_t) / 2.0,
        ],
        dtype=np.complex128,
    )


def random_circuit_spec(rng: np.random.Generator) -> CircuitSpec:
    """A random valid circuit expressible in the text format (fock_dim 2)."""
    input_label = BasisLabel(Channel(int(rng.integers(2))), int(rng.integers(2)))
    elements = []
    for _ in range(int(rng.integers(1, 9))):
        kind = int(rng.integers(4))
        if kind == 0:
            elements.append(mirror())
        elif kind == 1:
            elements.append(beam_splitter())
        elif kind == 2:
            elements.append(phase_shifter(float(rng.uniform(0.0, 2.0 * math.pi))))
        else:
            elements.append(
                obstacle(
                    beta=float(rng.uniform(0.0, 1.0)),
                    theta=float(rng.uniform(0.0, 2.0 * math.pi)),
                    gamma=float(rng.uniform(0.0, 2.0 * math.pi)),
                )
            )
    return CircuitSpec(input=input_label, elements=tuple(elements))


CORRUPTIONS = (
    "frobnicate",
    "phase",
    "phase abc",
    "phase 1..5",
    "obstacle beta=2 theta=0 gamma=0",
    "obstacle beta=-0.5",
    "obstacle theta=1",
    "obstacle beta=no",
    "input V 0",
    "input H 7",
    "input Q 1",
    "bs junk",
    "mirror mirror",
)


def corrupt_source(source: str, rng: np.random.Generator) -> tuple[str, int]:
    """Replace one element line of a valid source with garbage.

    Returns the corrupted text and the 1-based corrupted line number.
    Only lines after the leading input line are touched, so every
    corruption is guaranteed to produce an error on that line.
    """
    lines = source.rstrip("\n").split("\n")
    assert lines[0].startswith("input ") and len(lines) >= 2
    line_no = int(rng.integers(2, len(lines) + 1))
    lines[line_no - 1] = CORRUPTIONS[int(rng.integers(len(CORRUPTIONS)))]
    return "\n".join(lines) + "\n", line_no


def random_valid_source(rng: np.random.Generator) -> str:
    return serialize_circuit(random_circuit_spec(rng))
