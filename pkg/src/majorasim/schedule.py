"""Piecewise time-dependent Hamiltonian schedules for braid words.

A braid of the left modes of wires (n, n+1) compiles to four segments, one
per protocol step, each driving phi from 0 to pi/2 over a duration T.  Braid
words compile by concatenation; the time order of the schedule is the
REVERSE of the operator product, i.e. the word "s1 s2" (s1 braided first)
realizes the unitary U_2 U_1 with the rightmost operator acting first.
Format helpers print both orders to keep that unambiguous.

Segments store the affine (const, cos, sin) decomposition of their step so
the integrator can evaluate A(t) with two scaled adds.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

from . import builder
from .builder import ErrorModel, FORWARD, REVERSE, StepTerms, WireParams
from .core import NetworkGeometry, QuadraticHamiltonian
from .kernels import RAMP_KINDS, ramp_angle


@dataclass(frozen=True)
class Ramp:
    """Envelope phi(s): 0 -> pi/2 over one step of duration T (units 1/J).

    "smooth" is (pi/2) sin^2(pi s / 2), C^1 with vanishing endpoint velocity;
    "linear" is (pi/2) s.  Endpoints are exact to machine precision so
    compiled schedules glue exactly.
    """

    shape: str = "smooth"
    duration: float = 50.0

    def __post_init__(self):
        if self.shape not in RAMP_KINDS:
            raise ValueError(f"ramp shape must be one of {sorted(RAMP_KINDS)}")
        if self.duration <= 0:
            raise ValueError(f"ramp duration must be > 0, got {self.duration}")

    @property
    def kind(self) -> int:
        return RAMP_KINDS[self.shape]

    def phi(self, s: float) -> float:
        return ramp_angle(self.kind, float(s))


@dataclass(frozen=True)
class Segment:
    """One protocol step: H(s) = const + cos(phi(s)) cos_part + sin(phi(s)) sin_part."""

    terms: StepTerms
    ramp: Ramp
    step: str
    braid: str

    @property
    def duration(self) -> float:
        return self.ramp.duration

    @property
    def dim(self) -> int:
        return self.terms.const.dim

    def phi(self, s: float) -> float:
        return self.ramp.phi(s)

    def hamiltonian(self, s: float) -> QuadraticHamiltonian:
        return self.terms.at(self.phi(s))

    def generator(self, s: float) -> np.ndarray:
        phi = self.phi(s)
        return (
            self.terms.const.a
            + np.cos(phi) * self.terms.cos_part.a
            + np.sin(phi) * self.terms.sin_part.a
        )


@dataclass(frozen=True)
class Schedule:
    """Ordered segments with continuous junctions."""

    segments: tuple[Segment, ...]
    geometry: NetworkGeometry

    def __post_init__(self):
        if not self.segments:
            raise ValueError("schedule needs at least one segment")
        object.__setattr__(self, "segments", tuple(self.segments))

    @property
    def dim(self) -> int:
        return self.segments[0].dim

    @property
    def total_duration(self) -> float:
        return float(sum(seg.duration for seg in self.segments))

    def initial_hamiltonian(self) -> QuadraticHamiltonian:
        return self.segments[0].hamiltonian(0.0)

    def final_hamiltonian(self) -> QuadraticHamiltonian:
        return self.segments[-1].hamiltonian(1.0)

    def continuity_residual(self) -> float:
        """Largest junction mismatch between adjacent segments."""
        res = 0.0
        for left, right in zip(self.segments, self.segments[1:]):
            res = max(res, left.hamiltonian(1.0).max_difference(right.hamiltonian(0.0)))
        return res

    def validate_continuity(self, tol: float = 1e-12) -> None:
        res = self.continuity_residual()
        if res > tol:
            raise ValueError(f"schedule junction discontinuity {res:.3e} > {tol:.0e}")

    def __add__(self, other: "Schedule") -> "Schedule":
        if other.geometry != self.geometry:
            raise ValueError("cannot concatenate schedules over different geometries")
        return Schedule(self.segments + other.segments, self.geometry)


@dataclass(frozen=True)
class BraidMove:
    """Generator sigma_wire^(+-1) braiding left modes of (wire, wire+1); 0-based."""

    wire: int
    inverse: bool = False

    @property
    def direction(self) -> str:
        return REVERSE if self.inverse else FORWARD

    def token(self) -> str:
        return f"s{self.wire + 1}" + ("'" if self.inverse else "")


_TOKEN = re.compile(r"^s(\d+)('?)$")


def parse_braid_word(text: str) -> tuple[BraidMove, ...]:
    """Parse "s1 s2 s1'" into braid moves; time order is left to right."""
    tokens = text.split()
    if not tokens:
        raise ValueError("empty braid word")
    moves = []
    for tok in tokens:
        m = _TOKEN.match(tok)
        if not m:
            raise ValueError(
                f"bad braid token {tok!r}; expected s<N> or s<N>' (e.g. \"s1 s2'\")"
            )
        wire = int(m.group(1))
        if wire < 1:
            raise ValueError(f"braid generators are numbered from 1, got {tok!r}")
        moves.append(BraidMove(wire - 1, m.group(2) == "'"))
    return tuple(moves)


def word_time_order(word: tuple[BraidMove, ...]) -> str:
    return " ".join(move.token() for move in word)


def word_operator_order(word: tuple[BraidMove, ...]) -> str:
    """Same word written as an operator product (rightmost acts first)."""
    return " ".join(move.token() for move in reversed(word))


def braid_schedule(
    wire: int,
    params: WireParams,
    geometry: NetworkGeometry,
    ramp: Ramp = Ramp(),
    direction: str = FORWARD,
    error: ErrorModel = ErrorModel(),
) -> Schedule:
    """Four-segment schedule braiding the left modes of wires (wire, wire+1)."""
    if not (0 <= wire < geometry.n_wires - 1):
        raise ValueError(
            f"braid needs wires ({wire}, {wire + 1}) inside 0..{geometry.n_wires - 1}"
        )
    braid_label = f"s{wire + 1}" + ("'" if direction == REVERSE else "")
    segments = []
    for step in builder.STEPS:
        terms = builder.step_terms(
            step, params, geometry, (wire, wire + 1), direction, error
        )
        segments.append(Segment(terms, ramp, step, braid_label))
    schedule = Schedule(tuple(segments), geometry)
    schedule.validate_continuity()
    return schedule


def compile_word(
    word: tuple[BraidMove, ...] | str,
    params: WireParams,
    geometry: NetworkGeometry,
    ramp: Ramp = Ramp(),
    error: ErrorModel = ErrorModel(),
) -> Schedule:
    """Concatenate braid schedules for a word given in time order."""
    if isinstance(word, str):
        word = parse_braid_word(word)
    if not word:
        raise ValueError("empty braid word")
    schedule = None
    for move in word:
        nxt = braid_schedule(move.wire, params, geometry, ramp, move.direction, error)
        schedule = nxt if schedule is None else schedule + nxt
    schedule.validate_continuity()
    return schedule


def transport_generator(move: BraidMove, n_wires: int) -> np.ndarray:
    """Signed permutation of the left modes under one braid.

    This is the rotation the adiabatic protocol applies to the state: the
    zero mode starting on wire n ends on wire n+1 and the one on wire n+1
    comes back negated, so the columns hold gamma_n -> gamma_{n+1},
    gamma_{n+1} -> -gamma_n.  Inverse braids flip both signs.
    """
    n = move.wire
    if not (0 <= n < n_wires - 1):
        raise ValueError(f"generator s{n + 1} needs {n + 2} wires, have {n_wires}")
    g = np.eye(n_wires)
    g[n, n] = g[n + 1, n + 1] = 0.0
    if move.inverse:
        g[n + 1, n] = -1.0
        g[n, n + 1] = 1.0
    else:
        g[n + 1, n] = 1.0
        g[n, n + 1] = -1.0
    return g


def transport_of_word(word: tuple[BraidMove, ...] | str, n_wires: int) -> np.ndarray:
    """Composite left-mode rotation of a braid word given in time order.

    Propagators of successive braids stack on the left, so the composite is
    G_k ... G_2 G_1 with G_1 the earliest braid; the image of gamma_m is
    column m of that product.
    """
    if isinstance(word, str):
        word = parse_braid_word(word)
    m = np.eye(n_wires)
    for move in word:
        m = transport_generator(move, n_wires) @ m
    return m


def predicted_correlation_matrix(
    word: tuple[BraidMove, ...] | str, c0: np.ndarray
) -> np.ndarray:
    """Endpoint prediction for C[m, n] = <i gamma_L^(m) gamma_R^(n)>.

    Braids rotate left modes only, so C_after = M C_before with M the word
    transport.  For a product state (C = 1) the endpoint table is M itself,
    which reproduces the listed correlation mappings of the three-wire
    braid-word experiments.
    """
    c0 = np.asarray(c0, dtype=float)
    m = transport_of_word(word, c0.shape[0])
    return m @ c0
