"""Line-oriented circuit description language.

One statement per line, applied to the photon in source order:

    input H 1                               # initial basis ket (default H 1)
    bs                                      # 50/50 beam splitter
    mirror
    phase 0.5pi                             # phase on the H channel, radians
    obstacle beta=0.6 theta=0 gamma=0       # semitransparent obstacle in arm V

``#`` starts a comment, blank lines are ignored, and angles accept a
``pi`` suffix as a multiplier (``0.5pi``) or stand alone (``pi``).
Angles outside [0, 2*pi) are wrapped with a warning.  Parsing never
raises; failures come back as diagnostics with 1-based line/column.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

from .algebra import BasisLabel, Channel
from .elements import (
    TWO_PI,
    ElementKind,
    ElementSpec,
    ObstacleParams,
    beam_splitter,
    mirror,
    phase_shifter,
    wrap_angle,
)

DSL_FOCK_DIM = 2


@dataclass(frozen=True)
class CircuitSpec:
    """Input ket plus the ordered elements it passes through."""

    input: BasisLabel = BasisLabel(Channel.H, 1)
    elements: tuple[ElementSpec, ...] = ()
    fock_dim: int = DSL_FOCK_DIM

    def __post_init__(self) -> None:
        object.__setattr__(self, "elements", tuple(self.elements))
        if self.fock_dim < 2:
            raise ValueError(f"fock_dim must be >= 2, got {self.fock_dim}")
        if self.input.occupation >= self.fock_dim:
            raise ValueError(
                f"input occupation {self.input.occupation} outside Fock truncation {self.fock_dim}"
            )


class Severity(Enum):
    ERROR = "error"
    WARNING = "warning"


@dataclass(frozen=True)
class ParseDiagnostic:
    """A problem found while parsing, located by 1-based line and column."""

    line: int
    column: int
    message: str
    severity: Severity

    def __str__(self) -> str:
        return f"{self.severity.value}:{self.line}:{self.column}: {self.message}"


@dataclass(frozen=True)
class ParseResult:
    """Outcome of a parse: a circuit when no errors occurred, plus diagnostics."""

    circuit: Optional[CircuitSpec]
    diagnostics: tuple[ParseDiagnostic, ...]

    @property
    def ok(self) -> bool:
        return self.circuit is not None

    @property
    def errors(self) -> tuple[ParseDiagnostic, ...]:
        return tuple(d for d in self.diagnostics if d.severity is Severity.ERROR)

    @property
    def warnings(self) -> tuple[ParseDiagnostic, ...]:
        return tuple(d for d in self.diagnostics if d.severity is Severity.WARNING)


_TOKEN_RE = re.compile(r"\S+")
_OBSTACLE_KEYS = ("beta", "theta", "gamma")


@dataclass
class _Parser:
    diagnostics: list[ParseDiagnostic] = field(default_factory=list)
    failed: bool = False

    def error(self, line: int, column: int, message: str) -> None:
        self.diagnostics.append(ParseDiagnostic(line, column, message, Severity.ERROR))
        self.failed = True

    def warning(self, line: int, column: int, message: str) -> None:
        self.diagnostics.append(ParseDiagnostic(line, column, message, Severity.WARNING))

    def parse_angle(self, text: str, line: int, column: int) -> Optional[float]:
        """Parse a radian value with optional pi multiplier, wrapping with a warning."""
        if text == "pi":
            return math.pi
        factor = 1.0
        if text.endswith("pi"):
            text = text[: -len("pi")]
            factor = math.pi
        try:
            value = float(text) * factor
        except ValueError:
            self.error(line, column, f"malformed number {text!r}")
            return None
        if not math.isfinite(value):
            self.error(line, column, f"angle must be finite, got {text!r}")
            return None
        if not 0.0 <= value < TWO_PI:
            wrapped = wrap_angle(value)
            self.warning(
                line, column, f"angle {value:.17g} outside [0, 2*pi), wrapped to {wrapped:.17g}"
            )
            return wrapped
        return value


def parse_circuit(source: str) -> ParseResult:
    """Parse circuit text into a CircuitSpec, or into error diagnostics.

    Total: always returns, collecting every diagnostic it can find.  The
    element order equals the source line order.
    """
    parser = _Parser()
    input_label: Optional[BasisLabel] = None
    input_line: Optional[int] = None
    elements: list[ElementSpec] = []

    lines = source.split("\n")
    for line_no, raw_line in enumerate(lines, start=1):
        line = raw_line.rstrip("\r")
        hash_pos = line.find("#")
        if hash_pos != -1:
            line = line[:hash_pos]
        tokens = [(m.group(), m.start() + 1) for m in _TOKEN_RE.finditer(line)]
        if not tokens:
            continue
        keyword, key_col = tokens[0]
        args = tokens[1:]

        if keyword == "input":
            if input_label is not None:
                parser.error(line_no, key_col, f"duplicate input line (first on line {input_line})")
                continue
            input_label = _parse_input(parser, line_no, key_col, args)
            input_line = line_no
        elif keyword == "bs":
            if _reject_extra_args(parser, line_no, args):
                continue
            elements.append(beam_splitter())
        elif keyword == "mirror":
            if _reject_extra_args(parser, line_no, args):
                continue
            elements.append(mirror())
        elif keyword == "phase":
            if not args:
                parser.error(line_no, key_col, "phase requires an angle in radians")
                continue
            if _reject_extra_args(parser, line_no, args[1:]):
                continue
            phi = parser.parse_angle(args[0][0], line_no, args[0][1])
            if phi is not None:
                elements.append(phase_shifter(phi))
        elif keyword == "obstacle":
            params = _parse_obstacle(parser, line_no, key_col, args)
            if params is not None:
                elements.append(ElementSpec(ElementKind.OBSTACLE, obstacle=params))
        else:
            parser.error(line_no, key_col, f"unknown element keyword {keyword!r}")

    if not elements and not parser.failed:
        parser.error(max(len(lines), 1), 1, "circuit contains no elements")

    if parser.failed:
        return ParseResult(None, tuple(parser.diagnostics))
    if input_label is None:
        input_label = BasisLabel(Channel.H, 1)
    circuit = CircuitSpec(input=input_label, elements=tuple(elements), fock_dim=DSL_FOCK_DIM)
    return ParseResult(circuit, tuple(parser.diagnostics))


def _reject_extra_args(parser: _Parser, line_no: int, extra: list[tuple[str, int]]) -> bool:
    if extra:
        text, col = extra[0]
        parser.error(line_no, col, f"unexpected token {text!r}")
        return True
    return False


def _parse_input(
    parser: _Parser, line_no: int, key_col: int, args: list[tuple[str, int]]
) -> Optional[BasisLabel]:
    if len(args) < 2:
        parser.error(line_no, key_col, "input requires a channel (H or V) and an occupation number")
        return None
    if _reject_extra_args(parser, line_no, args[2:]):
        return None
    (channel_text, channel_col), (occ_text, occ_col) = args[0], args[1]
    if channel_text not in ("H", "V"):
        parser.error(line_no, channel_col, f"channel must be H or V, got {channel_text!r}")
        return None
    try:
        occupation = int(occ_text)
    except ValueError:
        parser.error(line_no, occ_col, f"malformed occupation number {occ_text!r}")
        return None
    if not 0 <= occupation < DSL_FOCK_DIM:
        parser.error(
            line_no, occ_col,
            f"occupation {occupation} out of range for Fock dimension {DSL_FOCK_DIM}",
        )
        return None
    return BasisLabel(Channel[channel_text], occupation)


def _parse_obstacle(
    parser: _Parser, line_no: int, key_col: int, args: list[tuple[str, int]]
) -> Optional[ObstacleParams]:
    values: dict[str, float] = {}
    bad = False
    for text, col in args:
        key, eq, value_text = text.partition("=")
        if not eq or key not in _OBSTACLE_KEYS:
            parser.error(line_no, col, f"expected beta=/theta=/gamma= assignment, got {text!r}")
            bad = True
            continue
        if key in values:
            parser.error(line_no, col, f"duplicate {key}=")
            bad = True
            continue
        value_col = col + len(key) + 1
        if key == "beta":
            try:
                beta = float(value_text)
            except ValueError:
                parser.error(line_no, value_col, f"malformed number {value_text!r}")
                bad = True
                continue
            if not math.isfinite(beta) or not 0.0 <= beta <= 1.0:
                parser.error(line_no, value_col, f"beta must lie in [0, 1], got {value_text}")
                bad = True
                continue
            values[key] = beta
        else:
            angle = parser.parse_angle(value_text, line_no, value_col)
            if angle is None:
                bad = True
                continue
            values[key] = angle
    if "beta" not in values and not bad:
        parser.error(line_no, key_col, "obstacle requires beta=")
        bad = True
    if bad:
        return None
    return ObstacleParams(
        beta=values["beta"], theta=values.get("theta", 0.0), gamma=values.get("gamma", 0.0)
    )


def _fmt(value: float) -> str:
    """Render a float with 17 significant digits (exact round-trip)."""
    return format(float(value) + 0.0, ".17g")


def format_element(element: ElementSpec) -> str:
    """The single DSL line for one element."""
    if element.kind is ElementKind.MIRROR:
        return "mirror"
    if element.kind is ElementKind.BEAM_SPLITTER:
        return "bs"
    if element.kind is ElementKind.PHASE_SHIFTER:
        return f"phase {_fmt(element.phi)}"
    if element.kind is ElementKind.OBSTACLE:
        params = element.obstacle
        assert params is not None
        return (
            f"obstacle beta={_fmt(params.beta)} theta={_fmt(params.theta)}"
            f" gamma={_fmt(params.gamma)}"
        )
    raise ValueError(f"unknown element kind {element.kind!r}")


def format_input(label: BasisLabel) -> str:
    """The DSL input line for a basis ket."""
    return f"input {label.channel.name} {label.occupation}"


def serialize_circuit(spec: CircuitSpec) -> str:
    """Render a CircuitSpec as circuit text; parse(serialize(s)) equals s.

    Only the text format's own family is serializable: at least one
    element and the fixed Fock truncation of 2.
    """
    if not spec.elements:
        raise ValueError("cannot serialize a circuit with no elements")
    if spec.fock_dim != DSL_FOCK_DIM:
        raise ValueError(
            f"the circuit text format fixes fock_dim at {DSL_FOCK_DIM}, got {spec.fock_dim}"
        )
    lines = [format_input(spec.input)]
    lines.extend(format_element(element) for element in spec.elements)
    return "\n".join(lines) + "\n"
