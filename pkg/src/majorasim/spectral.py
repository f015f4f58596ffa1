"""Spectra, zero-mode extraction, and the closed-form step trajectories.

Quasiparticle energies are the positive canonical frequencies of the
antisymmetric generator A (eigenvalues of iA come in +-eps pairs; excitation
energy equals eps, pinned by the oracle on 2-site systems).  Zero modes are
the near-kernel of A, gauge-fixed by maximizing weight per wire and per edge
so mode tracking stays continuous along protocol schedules.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .builder import FORWARD, STEPS, _protocol_roles
from .core import ODD, MajoranaMode, NetworkGeometry, QuadraticHamiltonian


class ZeroModeError(ValueError):
    """Zero-mode degeneracy could not be resolved or assigned to wires."""


@dataclass(frozen=True)
class SpectrumReport:
    """Quasiparticle energies (ascending), smallest nonzero energy, zero count."""

    energies: np.ndarray
    gap: float
    zero_count: int
    zero_tol: float

    @property
    def gapless(self) -> bool:
        return self.gap == 0.0


def _canonical_frequencies(h: QuadraticHamiltonian) -> np.ndarray:
    """All eigenvalues of iA, ascending (symmetric +-eps spectrum)."""
    if not np.all(np.isfinite(h.a)):
        raise ValueError("generator has non-finite entries")
    return np.linalg.eigvalsh(1j * h.a)


def spectrum(h: QuadraticHamiltonian, zero_tol: float = 1e-8) -> SpectrumReport:
    """Spectrum report of a quadratic Hamiltonian."""
    lam = _canonical_frequencies(h)
    energies = np.sort(np.abs(lam))[::2].copy()
    zero_count = int(np.sum(np.abs(lam) <= zero_tol))
    above = energies[energies > zero_tol]
    gap = float(above[0]) if above.size else 0.0
    return SpectrumReport(energies, gap, zero_count, zero_tol)


def instantaneous_gap(a_matrix: np.ndarray, zero_tol: float = 1e-8) -> float:
    """Smallest quasiparticle energy above zero_tol for a raw generator."""
    lam = np.abs(np.linalg.eigvalsh(1j * a_matrix))
    above = lam[lam > zero_tol]
    return float(above.min()) if above.size else 0.0


def _kernel_basis(a: np.ndarray, zero_tol: float) -> np.ndarray:
    """Orthonormal real basis of the near-kernel of A (columns)."""
    u, s, _ = np.linalg.svd(a)
    keep = s <= zero_tol
    return np.ascontiguousarray(u[:, keep])


def _fix_sign(v: np.ndarray) -> np.ndarray:
    """Make the largest-magnitude coefficient positive."""
    idx = int(np.argmax(np.abs(v)))
    return -v if v[idx] < 0 else v


def _split_by_projector(basis: np.ndarray, mask: np.ndarray, loc_tol: float):
    """Rotate `basis` to diagonalize the projector onto `mask` rows.

    Returns (inside, outside) bases; raises if any weight is neither ~0
    nor ~1 (the subspace does not split along the projector).
    """
    m = basis[mask].T @ basis[mask]
    vals, vecs = np.linalg.eigh(m)
    if np.any((vals > loc_tol) & (vals < 1.0 - loc_tol)):
        raise ZeroModeError(
            f"zero modes hybridize across the split (weights {np.sort(vals)})"
        )
    inside = basis @ vecs[:, vals >= 1.0 - loc_tol]
    outside = basis @ vecs[:, vals < loc_tol]
    return inside, outside


def zero_modes(
    h: QuadraticHamiltonian,
    zero_tol: float = 1e-8,
    geometry: NetworkGeometry | None = None,
    loc_tol: float = 1e-6,
) -> list[MajoranaMode]:
    """Orthonormal basis of the near-kernel of A.

    With a geometry, the basis is rotated so each vector maximizes weight on
    a single wire (wire-major order, left mode before right); without one,
    the raw SVD kernel basis is returned.  A gapless generator returns the
    whole space with a warning.
    """
    basis = _kernel_basis(h.a, zero_tol)
    if basis.shape[1] % 2 != 0:
        raise ZeroModeError(
            f"near-kernel dimension {basis.shape[1]} is odd; adjust zero_tol"
        )
    if basis.shape[1] == h.dim:
        warnings.warn("generator is gapless: zero modes are not isolated", stacklevel=2)
        return [MajoranaMode(basis[:, i]) for i in range(basis.shape[1])]
    if geometry is None:
        return [MajoranaMode(_fix_sign(basis[:, i])) for i in range(basis.shape[1])]

    modes: list[MajoranaMode] = []
    remaining = basis
    for w in range(geometry.n_wires):
        if remaining.shape[1] == 0:
            break
        mask = np.zeros(h.dim, dtype=bool)
        mask[geometry.wire_slice(w)] = True
        inside, remaining = _split_by_projector(remaining, mask, loc_tol)
        for i in range(inside.shape[1]):
            modes.append(MajoranaMode(_fix_sign(inside[:, i])))
    if remaining.shape[1] != 0:
        raise ZeroModeError("zero modes could not be assigned to single wires")
    return modes


def wire_edge_modes(
    h: QuadraticHamiltonian,
    geometry: NetworkGeometry,
    zero_tol: float = 1e-8,
    loc_tol: float = 1e-6,
) -> dict[int, tuple[MajoranaMode, MajoranaMode]]:
    """Per-wire (left, right) zero modes of a decoupled wire network.

    Wires without zero modes (trivial phase) are absent from the result.
    Raises ZeroModeError when a wire hosts an odd number of modes or the
    left/right split is ambiguous.
    """
    basis = _kernel_basis(h.a, zero_tol)
    if basis.shape[1] % 2 != 0:
        raise ZeroModeError(
            f"near-kernel dimension {basis.shape[1]} is odd; adjust zero_tol"
        )
    result: dict[int, tuple[MajoranaMode, MajoranaMode]] = {}
    remaining = basis
    for w in range(geometry.n_wires):
        if remaining.shape[1] == 0:
            break
        mask = np.zeros(h.dim, dtype=bool)
        mask[geometry.wire_slice(w)] = True
        inside, remaining = _split_by_projector(remaining, mask, loc_tol)
        if inside.shape[1] == 0:
            continue
        if inside.shape[1] != 2:
            raise ZeroModeError(
                f"wire {w} hosts {inside.shape[1]} zero modes, expected 2"
            )
        left_mask = np.zeros(h.dim, dtype=bool)
        start = 2 * w * geometry.length
        left_mask[start : start + geometry.length] = True  # first half of the wire
        m = inside[left_mask].T @ inside[left_mask]
        vals, vecs = np.linalg.eigh(m)
        if abs(vals[1] - vals[0]) < 0.1:
            raise ZeroModeError(f"left/right split ambiguous on wire {w}")
        rotated = inside @ vecs
        right, left = rotated[:, 0], rotated[:, 1]  # eigh sorts ascending
        result[w] = (MajoranaMode(_fix_sign(left)), MajoranaMode(_fix_sign(right)))
    if remaining.shape[1] != 0:
        raise ZeroModeError("zero modes could not be assigned to single wires")
    return result


def analytic_zero_mode(
    step: str,
    phi: float,
    which: str,
    hopping: float = 1.0,
    potential: float = 1.0,
    geometry: NetworkGeometry | None = None,
    wires: tuple[int, int] = (0, 1),
    direction: str = FORWARD,
) -> MajoranaMode:
    """Closed-form instantaneous zero mode of one protocol step.

    `which` selects the mode that starts on the top ("upper") or bottom
    ("lower") wire of the braid.  The vectors live on the four corner
    Majoranas c1, c3 (top wire, odd flavor) and d1, d3 (bottom wire):

        I   upper: (2 cos phi c1 - sin phi d3) / sqrt(1 + 3 cos^2 phi)
            lower: (2 cos phi d1 - sin phi c3) / sqrt(1 + 3 cos^2 phi)
        II  upper: (2 sin phi c1 - (1 - sin phi) d3) / norm, lower: -c3
        III upper: (J cos phi c1 + V sin phi d1) / norm,     lower: -c3
        IV  upper: d1, lower: -(J sin phi c1 + V cos phi c3) / norm
    """
    if step not in STEPS:
        raise ValueError(f"step must be one of {STEPS}, got {step!r}")
    if which not in ("upper", "lower"):
        raise ValueError(f"which must be 'upper' or 'lower', got {which!r}")
    if geometry is None:
        geometry = NetworkGeometry(2, 2)
    top, bottom = _protocol_roles(wires, direction)
    c1 = geometry.label(top, 0, ODD)
    c3 = geometry.label(top, 1, ODD)
    d1 = geometry.label(bottom, 0, ODD)
    d3 = geometry.label(bottom, 1, ODD)

    cphi, sphi = np.cos(phi), np.sin(phi)
    j, v = hopping, potential
    vec = np.zeros(geometry.n_majorana)
    if step == "I":
        norm = np.sqrt(1.0 + 3.0 * cphi**2)
        if which == "upper":
            vec[c1], vec[d3] = 2.0 * cphi / norm, -sphi / norm
        else:
            vec[d1], vec[c3] = 2.0 * cphi / norm, -sphi / norm
    elif step == "II":
        if which == "upper":
            norm = np.sqrt(4.0 * sphi**2 + (1.0 - sphi) ** 2)
            vec[c1], vec[d3] = 2.0 * sphi / norm, -(1.0 - sphi) / norm
        else:
            vec[c3] = -1.0
    elif step == "III":
        if which == "upper":
            norm = np.sqrt((j * cphi) ** 2 + (v * sphi) ** 2)
            vec[c1], vec[d1] = j * cphi / norm, v * sphi / norm
        else:
            vec[c3] = -1.0
    else:  # step IV
        if which == "upper":
            vec[d1] = 1.0
        else:
            norm = np.sqrt((j * sphi) ** 2 + (v * cphi) ** 2)
            vec[c1], vec[c3] = -j * sphi / norm, -v * cphi / norm
    return MajoranaMode(vec)


def mode_overlap(a: MajoranaMode, b: MajoranaMode) -> float:
    """|v_a . v_b| in [0, 1]."""
    if a.dim != b.dim:
        raise ValueError(f"dimension mismatch: {a.dim} vs {b.dim}")
    return float(abs(a.v @ b.v))


def kernel_overlap(
    h: QuadraticHamiltonian, mode: MajoranaMode, zero_tol: float = 1e-8
) -> float:
    """Norm of the projection of `mode` onto the near-kernel of A."""
    basis = _kernel_basis(h.a, zero_tol)
    return float(np.linalg.norm(basis.T @ mode.v))
