"""Core Majorana-picture representations.

Everything in this package lives in the Majorana basis: a network of W wires
with L sites each carries 2*W*L Majorana operators c_k.  A quadratic
Hamiltonian is stored as H = (i/4) c^T A c with A real antisymmetric, and a
Gaussian state as the covariance matrix Gamma_kl = (i/2) <[c_k, c_l]>.

Label convention (wire-major, then site, then flavor):
    label = 2*(wire*L + site) + flavor
with flavor ODD = a^dag + a on the site and EVEN = -i(a^dag - a).  This keeps
each wire's Majoranas contiguous, so wire-restricted quantities (parities,
edge modes) are plain slices.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

#: flavor of the first Majorana on a site, c_{2j-1} = a^dag + a
ODD = 0
#: flavor of the second Majorana on a site, c_{2j} = -i(a^dag - a)
EVEN = 1

#: structural equalities (label maps, antisymmetry, exact algebra)
STRUCT_TOL = 1e-12
#: physical equalities cross-checked against the dense Fock oracle
ORACLE_TOL = 1e-10
#: purity of covariance matrices, |Gamma^2 + 1|_max
PURITY_TOL = 1e-8


@dataclass(frozen=True)
class NetworkGeometry:
    """Array of parallel wires, each a chain of `length` sites."""

    n_wires: int
    length: int

    def __post_init__(self):
        if self.n_wires < 1 or self.length < 2:
            raise ValueError(
                f"need at least 1 wire of >= 2 sites, got {self.n_wires} x {self.length}"
            )

    @property
    def n_sites(self) -> int:
        return self.n_wires * self.length

    @property
    def n_majorana(self) -> int:
        return 2 * self.n_sites

    def check_site(self, wire: int, site: int) -> None:
        if not (0 <= wire < self.n_wires):
            raise IndexError(f"wire {wire} outside [0, {self.n_wires})")
        if not (0 <= site < self.length):
            raise IndexError(f"site {site} outside [0, {self.length})")

    def label(self, wire: int, site: int, flavor: int) -> int:
        """Majorana label of (wire, site, flavor); flavor is ODD or EVEN."""
        self.check_site(wire, site)
        if flavor not in (ODD, EVEN):
            raise ValueError(f"flavor must be ODD(0) or EVEN(1), got {flavor}")
        return 2 * (wire * self.length + site) + flavor

    def site_of(self, label: int) -> tuple[int, int, int]:
        """Inverse of `label`: returns (wire, site, flavor)."""
        if not (0 <= label < self.n_majorana):
            raise IndexError(f"label {label} outside [0, {self.n_majorana})")
        flavor = label % 2
        site_index = label // 2
        return site_index // self.length, site_index % self.length, flavor

    def wire_slice(self, wire: int) -> slice:
        """Contiguous Majorana-label range of one wire."""
        self.check_site(wire, 0)
        return slice(2 * wire * self.length, 2 * (wire + 1) * self.length)

    def site_labels(self, wire: int, site: int) -> tuple[int, int]:
        """(odd, even) Majorana labels of one site."""
        return self.label(wire, site, ODD), self.label(wire, site, EVEN)


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=float)
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class QuadraticHamiltonian:
    """H = (i/4) c^T A c + offset, with A real antisymmetric.

    A is antisymmetrized on construction and frozen; instances are immutable
    values and safe to share across threads.  `offset` tracks the scalar
    terms produced by normal ordering (e.g. the local potential
    2V a^dag a = V - i V c_odd c_even).
    """

    a: np.ndarray
    offset: float = 0.0

    def __post_init__(self):
        a = np.asarray(self.a, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError(f"A must be square, got shape {a.shape}")
        if a.shape[0] % 2 != 0:
            raise ValueError(f"A must have even dimension, got {a.shape[0]}")
        if not np.all(np.isfinite(a)):
            raise ValueError("A has non-finite entries")
        object.__setattr__(self, "a", _frozen((a - a.T) / 2.0))
        object.__setattr__(self, "offset", float(self.offset))

    @classmethod
    def zero(cls, dim: int) -> "QuadraticHamiltonian":
        return cls(np.zeros((dim, dim)))

    @property
    def dim(self) -> int:
        return self.a.shape[0]

    def __add__(self, other: "QuadraticHamiltonian") -> "QuadraticHamiltonian":
        if other.dim != self.dim:
            raise ValueError(f"dimension mismatch: {self.dim} vs {other.dim}")
        return QuadraticHamiltonian(self.a + other.a, self.offset + other.offset)

    def __sub__(self, other: "QuadraticHamiltonian") -> "QuadraticHamiltonian":
        if other.dim != self.dim:
            raise ValueError(f"dimension mismatch: {self.dim} vs {other.dim}")
        return QuadraticHamiltonian(self.a - other.a, self.offset - other.offset)

    def __mul__(self, scale: float) -> "QuadraticHamiltonian":
        return QuadraticHamiltonian(self.a * scale, self.offset * scale)

    __rmul__ = __mul__

    def max_difference(self, other: "QuadraticHamiltonian") -> float:
        """max over |A - A'| entries and |offset - offset'|."""
        return max(
            float(np.max(np.abs(self.a - other.a))),
            abs(self.offset - other.offset),
        )


@dataclass(frozen=True)
class CovarianceState:
    """Fermionic Gaussian state, Gamma_kl = (i/2) <[c_k, c_l]>.

    Physical covariances have singular values <= 1 (pure states saturate
    all of them); construction rejects anything beyond roundoff of that.
    """

    gamma: np.ndarray

    def __post_init__(self):
        g = np.asarray(self.gamma, dtype=float)
        if g.ndim != 2 or g.shape[0] != g.shape[1] or g.shape[0] % 2 != 0:
            raise ValueError(f"Gamma must be square of even dimension, got {g.shape}")
        if not np.all(np.isfinite(g)):
            raise ValueError("Gamma has non-finite entries")
        g = (g - g.T) / 2.0
        top = float(np.linalg.norm(g, 2))
        if top > 1.0 + 1e-9:
            raise ValueError(f"covariance has singular value {top} > 1")
        object.__setattr__(self, "gamma", _frozen(g))

    @property
    def dim(self) -> int:
        return self.gamma.shape[0]

    def purity_residual(self) -> float:
        """|Gamma @ Gamma + 1|_max; zero for a pure state."""
        g = self.gamma
        return float(np.max(np.abs(g @ g + np.eye(self.dim))))

    def is_pure(self, tol: float = PURITY_TOL) -> bool:
        return self.purity_residual() <= tol

    @classmethod
    def maximally_mixed(cls, dim: int) -> "CovarianceState":
        return cls(np.zeros((dim, dim)))


@dataclass(frozen=True)
class MajoranaMode:
    """Real unit vector v defining the mode gamma = sum_k v_k c_k."""

    v: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.v, dtype=float)
        if v.ndim != 1:
            raise ValueError(f"mode vector must be 1-d, got shape {v.shape}")
        norm = float(np.linalg.norm(v))
        if not np.isfinite(norm) or norm < 1e-300:
            raise ValueError("mode vector must be nonzero and finite")
        v = v / norm
        v.flags.writeable = False
        object.__setattr__(self, "v", v)

    @property
    def dim(self) -> int:
        return self.v.shape[0]

    @classmethod
    def basis(cls, label: int, dim: int) -> "MajoranaMode":
        v = np.zeros(dim)
        v[label] = 1.0
        return cls(v)


def correlation(state: CovarianceState, a: MajoranaMode, b: MajoranaMode) -> float:
    """<i gamma_a gamma_b> = v_a^T Gamma v_b for a Gaussian state."""
    if a.dim != state.dim or b.dim != state.dim:
        raise ValueError(
            f"dimension mismatch: state {state.dim}, modes {a.dim}/{b.dim}"
        )
    return float(a.v @ state.gamma @ b.v)


def energy(state: CovarianceState, h: QuadraticHamiltonian) -> float:
    """<H> = (1/4) sum_kl A_kl Gamma_kl + offset.

    The trace pairing follows from <c_k c_l> = delta_kl - i Gamma_kl; the
    prefactor is pinned against the dense Fock oracle on 2-site systems.
    """
    if h.dim != state.dim:
        raise ValueError(f"dimension mismatch: state {state.dim}, H {h.dim}")
    return float(np.sum(h.a * state.gamma) / 4.0 + h.offset)
