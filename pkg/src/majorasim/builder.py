"""Kitaev-wire network Hamiltonians, local operations, and protocol steps.

The braid of the left edge modes of two adjacent wires runs in four steps,
each controlled by a single angle phi in [0, pi/2]:

    I    ramp off the first links of both wires, ramp on the vertical hopping
    II   ramp on the pairing across the vertical link and the bottom wire's
         first link (deposits the decoupled fermion in the bottom wire)
    III  ramp on a local potential on the top corner site, ramp off the
         vertical link
    IV   ramp off the potential, ramp the top wire's first link back on

Every step Hamiltonian is affine in (cos phi, sin phi):

    H(phi) = H_const + cos(phi) * H_cos + sin(phi) * H_sin,

which the schedule/evolution layers exploit.  "Forward" braids deposit the
decoupled fermion in the lower wire; "reverse" mirrors the roles of the two
wires and realizes the inverse exchange.

Imperfect addressing is modeled by a single leakage fraction alpha:
(i) the vertical link leaks alpha-scaled hopping/pairing onto the adjacent
column, (ii) switching a wire's first link off scales its second link by
(1 - alpha), (iii) the corner potential V leaks alpha*V onto the two
neighboring sites.  Leakage terms ramp with the same envelopes as their
parent terms, so schedules stay continuous for any alpha.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .core import NetworkGeometry, QuadraticHamiltonian

FORWARD = "forward"
REVERSE = "reverse"
STEPS = ("I", "II", "III", "IV")

HOPPING = "hopping"
PAIRING = "pairing"
KITAEV = "kitaev"
LOCAL_POTENTIAL = "local_potential"


@dataclass(frozen=True)
class WireParams:
    """Kitaev chain parameters; V is the step III/IV potential strength."""

    length: int
    hopping: float = 1.0
    pairing: float = 1.0
    mu: float = 0.0
    potential: float | None = None

    def __post_init__(self):
        if self.length < 2:
            raise ValueError(f"wire needs >= 2 sites, got {self.length}")
        if self.hopping <= 0:
            raise ValueError(f"hopping J must be > 0, got {self.hopping}")
        if self.potential is None:
            object.__setattr__(self, "potential", float(self.hopping))
        elif self.potential <= 0:
            raise ValueError(f"potential V must be > 0, got {self.potential}")

    @property
    def is_ideal(self) -> bool:
        return self.mu == 0.0 and abs(self.pairing) == self.hopping

    @property
    def in_topological_phase(self) -> bool:
        return abs(self.mu) < 2.0 * self.hopping

    def geometry(self, n_wires: int) -> NetworkGeometry:
        return NetworkGeometry(n_wires, self.length)


@dataclass(frozen=True)
class ErrorModel:
    """Leakage fraction alpha of the local addressing operations."""

    alpha: float = 0.0

    def __post_init__(self):
        if not (0.0 <= self.alpha < 1.0):
            raise ValueError(f"alpha must be in [0, 1), got {self.alpha}")


@dataclass(frozen=True)
class LocalOp:
    """A single addressable operation on one site or one link."""

    kind: str
    sites: tuple[tuple[int, int], ...]
    strength: float

    def __post_init__(self):
        if self.kind not in (HOPPING, PAIRING, KITAEV, LOCAL_POTENTIAL):
            raise ValueError(f"unknown local operation kind {self.kind!r}")
        n_needed = 1 if self.kind == LOCAL_POTENTIAL else 2
        if len(self.sites) != n_needed:
            raise ValueError(f"{self.kind} needs {n_needed} site(s), got {len(self.sites)}")
        if n_needed == 2 and self.sites[0] == self.sites[1]:
            raise ValueError("link operations need two distinct sites")


class _Accumulator:
    """Mutable (A, offset) pair the term helpers write into."""

    def __init__(self, geometry: NetworkGeometry):
        self.geometry = geometry
        self.a = np.zeros((geometry.n_majorana, geometry.n_majorana))
        self.offset = 0.0

    def pair(self, k: int, l: int, t: float) -> None:
        # accumulate H += -i t c_k c_l
        self.a[k, l] -= 2.0 * t
        self.a[l, k] += 2.0 * t

    def hopping(self, sa, sb, t: float) -> None:
        # -t (a_sa^dag a_sb + h.c.)
        oa, ea = self.geometry.site_labels(*sa)
        ob, eb = self.geometry.site_labels(*sb)
        self.pair(ea, ob, t / 2.0)
        self.pair(oa, eb, -t / 2.0)

    def pairing(self, sa, sb, t: float) -> None:
        # t (a_sa a_sb + h.c.); antisymmetric under site exchange
        oa, ea = self.geometry.site_labels(*sa)
        ob, eb = self.geometry.site_labels(*sb)
        self.pair(oa, eb, t / 2.0)
        self.pair(ea, ob, t / 2.0)

    def kitaev(self, sa, sb, hop: float, pai: float) -> None:
        self.hopping(sa, sb, hop)
        self.pairing(sa, sb, pai)

    def onsite(self, s, coeff: float) -> None:
        # coeff * a^dag a = coeff/2 - i (coeff/2) c_odd c_even
        o, e = self.geometry.site_labels(*s)
        self.pair(o, e, coeff / 2.0)
        self.offset += coeff / 2.0

    def build(self) -> QuadraticHamiltonian:
        return QuadraticHamiltonian(self.a, self.offset)


def build_wire(
    params: WireParams, geometry: NetworkGeometry, wire: int
) -> QuadraticHamiltonian:
    """Kitaev chain on one wire of the network; other wires' entries are zero."""
    geometry.check_site(wire, 0)
    if params.length != geometry.length:
        raise ValueError(
            f"params.length {params.length} != geometry.length {geometry.length}"
        )
    acc = _Accumulator(geometry)
    for j in range(geometry.length - 1):
        acc.kitaev((wire, j), (wire, j + 1), params.hopping, params.pairing)
    for j in range(geometry.length):
        acc.onsite((wire, j), -params.mu)
    return acc.build()


def build_network(params: WireParams, geometry: NetworkGeometry) -> QuadraticHamiltonian:
    """Sum of decoupled wire Hamiltonians over the whole network."""
    h = QuadraticHamiltonian.zero(geometry.n_majorana)
    for w in range(geometry.n_wires):
        h = h + build_wire(params, geometry, w)
    return h


def _check_adjacent(geometry: NetworkGeometry, sa, sb) -> None:
    geometry.check_site(*sa)
    geometry.check_site(*sb)
    wa, ja = sa
    wb, jb = sb
    same_wire = wa == wb and abs(ja - jb) == 1
    vertical = ja == jb and abs(wa - wb) == 1
    if not (same_wire or vertical):
        raise ValueError(f"sites {sa} and {sb} are not adjacent in the ladder layout")


def build_local_op(op: LocalOp, geometry: NetworkGeometry) -> QuadraticHamiltonian:
    """Quadratic form of a single local operation on the full network."""
    acc = _Accumulator(geometry)
    if op.kind == LOCAL_POTENTIAL:
        geometry.check_site(*op.sites[0])
        acc.onsite(op.sites[0], 2.0 * op.strength)
    else:
        sa, sb = op.sites
        _check_adjacent(geometry, sa, sb)
        if op.kind in (HOPPING, KITAEV):
            acc.hopping(sa, sb, op.strength)
        if op.kind in (PAIRING, KITAEV):
            acc.pairing(sa, sb, op.strength)
    return acc.build()


@dataclass(frozen=True)
class StepTerms:
    """H(phi) = const + cos(phi)*cos_part + sin(phi)*sin_part."""

    const: QuadraticHamiltonian
    cos_part: QuadraticHamiltonian
    sin_part: QuadraticHamiltonian

    def at(self, phi: float) -> QuadraticHamiltonian:
        return self.const + np.cos(phi) * self.cos_part + np.sin(phi) * self.sin_part


def _protocol_roles(wires: tuple[int, int], direction: str) -> tuple[int, int]:
    """(top, bottom) wire indices; the decoupled fermion lands in `bottom`."""
    n, m = wires
    if m != n + 1:
        raise ValueError(f"braids act on adjacent wires (n, n+1), got {wires}")
    if direction == FORWARD:
        return n, m
    if direction == REVERSE:
        return m, n
    raise ValueError(f"direction must be 'forward' or 'reverse', got {direction!r}")


def step_terms(
    step: str,
    params: WireParams,
    geometry: NetworkGeometry,
    wires: tuple[int, int] = (0, 1),
    direction: str = FORWARD,
    error: ErrorModel = ErrorModel(),
) -> StepTerms:
    """Affine decomposition of one protocol step on the full network.

    The four corner sites are (top,0), (top,1), (bottom,0), (bottom,1).  Bulk
    couplings of the braiding pair (links from column 1 outward) and the full
    Hamiltonians of all idle wires sit in the constant part.  The chemical
    potential is left off the two column-0 sites of every wire during
    protocol steps, so schedules glue exactly for any mu.
    """
    if step not in STEPS:
        raise ValueError(f"step must be one of {STEPS}, got {step!r}")
    if params.length != geometry.length:
        raise ValueError(
            f"params.length {params.length} != geometry.length {geometry.length}"
        )
    top, bottom = _protocol_roles(wires, direction)
    geometry.check_site(top, 0)
    geometry.check_site(bottom, 0)
    alpha = error.alpha
    L = geometry.length
    J, D, V = params.hopping, params.pairing, params.potential
    if alpha > 0.0 and L < 3:
        warnings.warn(
            "leakage rule for switched-off links needs a third site per wire; "
            f"skipped for L={L}",
            stacklevel=2,
        )

    t1, t2 = (top, 0), (top, 1)
    b1, b2 = (bottom, 0), (bottom, 1)

    const = _Accumulator(geometry)
    cos_p = _Accumulator(geometry)
    sin_p = _Accumulator(geometry)

    # idle wires keep their full Hamiltonian
    for w in range(geometry.n_wires):
        if w in (top, bottom):
            continue
        for j in range(L - 1):
            const.kitaev((w, j), (w, j + 1), J, D)
        for j in range(1, L):
            const.onsite((w, j), -params.mu)

    # bulk of the braiding pair: links from column 1 outward, mu from column 1
    for w in (top, bottom):
        for j in range(1, L - 1):
            const.kitaev((w, j), (w, j + 1), J, D)
        for j in range(1, L):
            const.onsite((w, j), -params.mu)

    def wire_link(acc, w, scale=1.0):
        acc.kitaev((w, 0), (w, 1), scale * J, scale * D)

    def vert_hop(acc, scale=1.0):
        acc.hopping(t1, b1, scale * J)

    def vert_pair(acc, scale=1.0):
        acc.pairing(t1, b1, scale * J)

    def leak_hop(acc, scale=1.0):
        acc.hopping(t2, b2, scale * alpha * J)

    def leak_pair(acc, scale=1.0):
        acc.pairing(t2, b2, scale * alpha * J)

    def second_link(acc, w, scale):
        # rule (ii): modulate the (w,1)-(w,2) coupling
        if L >= 3:
            acc.kitaev((w, 1), (w, 2), scale * J, scale * D)

    def potential(acc, site, strength):
        acc.onsite(site, 2.0 * strength)

    if step == "I":
        wire_link(cos_p, top)
        wire_link(cos_p, bottom)
        vert_hop(sin_p)
        if alpha > 0.0:
            leak_hop(sin_p)
            for w in (top, bottom):
                second_link(const, w, -alpha)
                second_link(cos_p, w, alpha)
    elif step == "II":
        vert_hop(const)
        vert_pair(sin_p)
        wire_link(sin_p, bottom)
        if alpha > 0.0:
            leak_hop(const)
            leak_pair(sin_p)
            second_link(const, top, -alpha)
            second_link(const, bottom, -alpha)
            second_link(sin_p, bottom, alpha)
    elif step == "III":
        wire_link(const, bottom)
        vert_hop(cos_p)
        vert_pair(cos_p)
        potential(sin_p, t1, V)
        if alpha > 0.0:
            leak_hop(cos_p)
            leak_pair(cos_p)
            second_link(const, top, -alpha)
            potential(sin_p, t2, alpha * V)
            potential(sin_p, b1, alpha * V)
    else:  # step IV
        wire_link(const, bottom)
        wire_link(sin_p, top)
        potential(cos_p, t1, V)
        if alpha > 0.0:
            second_link(const, top, -alpha)
            second_link(sin_p, top, alpha)
            potential(cos_p, t2, alpha * V)
            potential(cos_p, b1, alpha * V)

    return StepTerms(const.build(), cos_p.build(), sin_p.build())


def step_hamiltonian(
    step: str,
    phi: float,
    params: WireParams,
    geometry: NetworkGeometry,
    wires: tuple[int, int] = (0, 1),
    direction: str = FORWARD,
    error: ErrorModel = ErrorModel(),
) -> QuadraticHamiltonian:
    """Protocol-step Hamiltonian at angle phi in [0, pi/2]."""
    if not (0.0 <= phi <= np.pi / 2 + 1e-12):
        raise ValueError(f"phi must be in [0, pi/2], got {phi}")
    return step_terms(step, params, geometry, wires, direction, error).at(phi)


@dataclass(frozen=True)
class ContinuityReport:
    """Junction residuals of the four-step protocol."""

    residuals: dict
    tol: float

    @property
    def max_residual(self) -> float:
        return max(self.residuals.values())

    @property
    def ok(self) -> bool:
        return self.max_residual <= self.tol

    def first_discontinuity(self):
        for name, value in self.residuals.items():
            if value > self.tol:
                return name, value
        return None


def check_step_continuity(
    params: WireParams,
    geometry: NetworkGeometry,
    wires: tuple[int, int] = (0, 1),
    error: ErrorModel = ErrorModel(),
    directions: tuple[str, ...] = (FORWARD, REVERSE),
    tol: float = 1e-12,
) -> ContinuityReport:
    """Check H at the end of each step equals H at the start of the next.

    Also checks that the end of step IV restores the start of step I, which
    is the gluing condition between consecutive braids.
    """
    half_pi = np.pi / 2
    residuals = {}
    for direction in directions:
        terms = {
            s: step_terms(s, params, geometry, wires, direction, error) for s in STEPS
        }
        junctions = [
            ("I->II", terms["I"].at(half_pi), terms["II"].at(0.0)),
            ("II->III", terms["II"].at(half_pi), terms["III"].at(0.0)),
            ("III->IV", terms["III"].at(half_pi), terms["IV"].at(0.0)),
            ("IV->I", terms["IV"].at(half_pi), terms["I"].at(0.0)),
        ]
        for name, h_end, h_start in junctions:
            residuals[f"{direction}:{name}"] = h_end.max_difference(h_start)
    return ContinuityReport(residuals, tol)
