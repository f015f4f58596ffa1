"""Dense Fock-space oracle.

Exact small-system simulator used to validate every sign convention of the
Gaussian layer: Majorana matrices from a Jordan-Wigner string construction,
dense embeddings of quadratic forms, exact braid unitaries, the braid-group
relations, and the two-qubit Deutsch-Jozsa run on three fermion modes.

Guarded at M <= 13 modes (dense 8192^2 complex matrices); the Deutsch-Jozsa
register needs only M = 6 Majoranas = 3 modes.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .core import QuadraticHamiltonian

MAX_MODES = 13

#: braid-index order of the Deutsch-Jozsa register:
#: (gamma_1^L, gamma_1^R, gamma_2^L, gamma_2^R, gamma_3^L, gamma_3^R)
DJ_MODES = 3
ORACLE_IDS = ("g0", "g1", "g2", "g3")


def _check_modes(n_modes: int) -> None:
    if not (1 <= n_modes <= MAX_MODES):
        raise ValueError(f"mode count must be in [1, {MAX_MODES}], got {n_modes}")


@lru_cache(maxsize=None)
def annihilation_matrix(mode: int, n_modes: int) -> np.ndarray:
    """Dense a_mode with Jordan-Wigner signs; mode 0 is the least significant bit."""
    _check_modes(n_modes)
    if not (0 <= mode < n_modes):
        raise ValueError(f"mode {mode} outside [0, {n_modes})")
    dim = 1 << n_modes
    idx = np.arange(dim)
    mask = 1 << mode
    occupied = (idx & mask) != 0
    string_bits = np.bitwise_count(idx & (mask - 1))
    signs = np.where(string_bits % 2 == 0, 1.0, -1.0)
    a = np.zeros((dim, dim), dtype=complex)
    src = idx[occupied]
    a[src - mask, src] = signs[occupied]
    a.flags.writeable = False
    return a


@lru_cache(maxsize=None)
def majorana_matrix(label: int, n_modes: int) -> np.ndarray:
    """Dense Majorana c_label; even labels are a^dag + a, odd are -i(a^dag - a)."""
    _check_modes(n_modes)
    if not (0 <= label < 2 * n_modes):
        raise ValueError(f"label {label} outside [0, {2 * n_modes})")
    a = annihilation_matrix(label // 2, n_modes)
    adag = a.conj().T
    c = (adag + a) if label % 2 == 0 else -1j * (adag - a)
    c.flags.writeable = False
    return c


def parity_matrix(n_modes: int) -> np.ndarray:
    """Total fermion parity (-1)^N, diagonal in the occupation basis."""
    _check_modes(n_modes)
    idx = np.arange(1 << n_modes)
    return np.diag(np.where(np.bitwise_count(idx) % 2 == 0, 1.0, -1.0).astype(complex))


def mode_parity_matrix(mode: int, n_modes: int) -> np.ndarray:
    """Parity 1 - 2 n_mode of a single mode (= i c_{2m} c_{2m+1})."""
    _check_modes(n_modes)
    idx = np.arange(1 << n_modes)
    occ = (idx >> mode) & 1
    return np.diag((1.0 - 2.0 * occ).astype(complex))


def embed_quadratic(h: QuadraticHamiltonian) -> np.ndarray:
    """(i/4) sum_kl A_kl c_k c_l + offset, as a dense Hermitian matrix."""
    if h.dim % 2 != 0:
        raise ValueError("quadratic form needs an even Majorana count")
    n_modes = h.dim // 2
    _check_modes(n_modes)
    dim = 1 << n_modes
    out = np.zeros((dim, dim), dtype=complex)
    rows, cols = np.nonzero(h.a)
    for k, l in zip(rows, cols):
        out += (0.25j * h.a[k, l]) * (majorana_matrix(k, n_modes) @ majorana_matrix(l, n_modes))
    out += h.offset * np.eye(dim)
    return out


def braid_unitary(i: int, j: int, n_modes: int) -> np.ndarray:
    """U_ij = exp(pi c_i c_j / 4) = (1 + c_i c_j) / sqrt(2).

    Conjugation U c U^dag sends c_i -> -c_j, c_j -> c_i; the Heisenberg
    transport U^dag c U sends c_i -> c_j, c_j -> -c_i, which is the map the
    adiabatic protocol realizes on its instantaneous zero modes.
    """
    if i == j:
        raise ValueError("braid needs two distinct Majorana labels")
    ci = majorana_matrix(i, n_modes)
    cj = majorana_matrix(j, n_modes)
    dim = ci.shape[0]
    return (np.eye(dim) + ci @ cj) / np.sqrt(2.0)


def heisenberg_transport(u: np.ndarray, n_modes: int) -> np.ndarray:
    """Matrix R with U^dag c_k U = sum_l R_kl c_l, for Gaussian unitaries U."""
    dim = 1 << n_modes
    r = np.zeros((2 * n_modes, 2 * n_modes))
    for k in range(2 * n_modes):
        transported = u.conj().T @ majorana_matrix(k, n_modes) @ u
        for l in range(2 * n_modes):
            coeff = np.trace(majorana_matrix(l, n_modes) @ transported) / dim
            if abs(coeff.imag) > 1e-10:
                raise ValueError("transported operator is not a real Majorana combination")
            r[k, l] = coeff.real
    return r


def ground_state_in_parity_sector(
    h_dense: np.ndarray, parity: int, degeneracy_tol: float = 1e-9
) -> np.ndarray:
    """Lowest eigenvector of h_dense within the +-1 total-parity sector."""
    n_modes = int(np.log2(h_dense.shape[0]))
    p_diag = np.real(np.diag(parity_matrix(n_modes)))
    sel = np.where(p_diag == parity)[0]
    block = h_dense[np.ix_(sel, sel)]
    vals, vecs = np.linalg.eigh(block)
    psi = np.zeros(h_dense.shape[0], dtype=complex)
    psi[sel] = vecs[:, 0]
    return psi


def covariance_of_state(psi: np.ndarray, n_modes: int) -> np.ndarray:
    """Gamma_kl = (i/2) <psi| [c_k, c_l] |psi> from a dense state."""
    cs = [majorana_matrix(k, n_modes) @ psi for k in range(2 * n_modes)]
    gamma = np.zeros((2 * n_modes, 2 * n_modes))
    for k in range(2 * n_modes):
        for l in range(k + 1, 2 * n_modes):
            val = 1j * np.vdot(cs[k], cs[l])  # <c_k c_l> since c_k is Hermitian
            gamma[k, l] = val.real
            gamma[l, k] = -val.real
    return gamma


# ---------------------------------------------------------------------------
# Deutsch-Jozsa on three wires / three fermion modes
# ---------------------------------------------------------------------------


def dj_basis() -> dict[str, np.ndarray]:
    """Odd-parity two-qubit computational basis over three fermion modes.

    |00> = f2^dag|0>, |01> = f3^dag|0>, |10> = f1^dag|0>,
    |11> = f1^dag f2^dag f3^dag |0>, with f_i = (gamma_i^L - i gamma_i^R)/2.
    """
    dim = 1 << DJ_MODES
    vac = np.zeros(dim, dtype=complex)
    vac[0] = 1.0
    adags = [annihilation_matrix(m, DJ_MODES).conj().T for m in range(DJ_MODES)]
    return {
        "00": adags[1] @ vac,
        "01": adags[2] @ vac,
        "10": adags[0] @ vac,
        "11": adags[0] @ adags[1] @ adags[2] @ vac,
    }


def _dj_braids() -> dict[str, np.ndarray]:
    return {
        "U12": braid_unitary(0, 1, DJ_MODES),
        "U23": braid_unitary(1, 2, DJ_MODES),
        "U34": braid_unitary(2, 3, DJ_MODES),
        "U45": braid_unitary(3, 4, DJ_MODES),
        "U56": braid_unitary(4, 5, DJ_MODES),
    }


def oracle_unitary(oracle: str) -> np.ndarray:
    """Oracle built from braid squares: g1 = U12^2, g2 = U34^2, g3 = U56^2."""
    if oracle not in ORACLE_IDS:
        raise ValueError(f"oracle must be one of {ORACLE_IDS}, got {oracle!r}")
    u = _dj_braids()
    dim = 1 << DJ_MODES
    return {
        "g0": np.eye(dim, dtype=complex),
        "g1": u["U12"] @ u["U12"],
        "g2": u["U34"] @ u["U34"],
        "g3": u["U56"] @ u["U56"],
    }[oracle]


def oracle_diagonal(oracle: str) -> np.ndarray:
    """Reference diagonal oracle on the (00,01,10,11) basis."""
    signs = {
        "g0": (1, 1, 1, 1),
        "g1": (1, 1, -1, -1),
        "g2": (1, -1, -1, 1),
        "g3": (1, -1, 1, -1),
    }[oracle]
    return np.diag(np.array(signs, dtype=complex))


def dj_braid_word(oracle: str) -> list[str]:
    """Nine-braid sequence in time order (earliest first).

    The operator product is U45 U56 U23 U12 U_g U56 U45 U12 U23 with the
    rightmost factor acting first.
    """
    expansion = {"g0": [], "g1": ["U12", "U12"], "g2": ["U34", "U34"], "g3": ["U56", "U56"]}
    if oracle not in expansion:
        raise ValueError(f"oracle must be one of {ORACLE_IDS}, got {oracle!r}")
    product = ["U45", "U56", "U23", "U12"] + expansion[oracle] + ["U56", "U45", "U12", "U23"]
    return list(reversed(product))


@dataclass(frozen=True)
class DJResult:
    oracle: str
    final: np.ndarray
    p00: float
    wire_parities: tuple[float, float, float]
    verdict: str
    overlaps: dict


def run_deutsch_jozsa(oracle: str) -> DJResult:
    """Apply the nine-braid sequence to |00> and read out the result."""
    braids = _dj_braids()
    basis = dj_basis()
    psi = basis["00"].copy()
    for name in dj_braid_word(oracle):
        psi = braids[name] @ psi
    p00 = float(abs(np.vdot(basis["00"], psi)) ** 2)
    parities = tuple(
        float(np.real(np.vdot(psi, mode_parity_matrix(m, DJ_MODES) @ psi)))
        for m in range(DJ_MODES)
    )
    overlaps = {key: complex(np.vdot(vec, psi)) for key, vec in basis.items()}
    verdict = "constant" if p00 > 0.5 else "balanced"
    return DJResult(oracle, psi, p00, parities, verdict, overlaps)


# ---------------------------------------------------------------------------
# Verification reports
# ---------------------------------------------------------------------------


def _phase_match(actual: np.ndarray, reference: np.ndarray) -> tuple[complex, float]:
    """Best global phase and residual of actual ~ phase * reference."""
    overlap = np.trace(reference.conj().T @ actual)
    if abs(overlap) < 1e-12:
        return 1.0 + 0j, float(np.max(np.abs(actual - reference)))
    phase = overlap / abs(overlap)
    return complex(phase), float(np.max(np.abs(actual - phase * reference)))


@dataclass(frozen=True)
class HadamardReport:
    ok: bool
    phase_first: complex
    phase_second: complex
    residual_first: float
    residual_second: float
    residual_h_squared: float
    residual_subspace: float


def verify_hadamard_decomposition(tol: float = 1e-10) -> HadamardReport:
    """Check H(x)1 = U12 U23 U12 and 1(x)H = U56 U45 U56 on the odd subspace.

    Equality holds up to one global phase per identity; a failure signals a
    wrong f_i pairing or Majorana label order.
    """
    braids = _dj_braids()
    basis = dj_basis()
    b = np.column_stack([basis[k] for k in ("00", "01", "10", "11")])
    h = np.array([[1, 1], [1, -1]]) / np.sqrt(2.0)
    h_first = np.kron(h, np.eye(2)).astype(complex)
    h_second = np.kron(np.eye(2), h).astype(complex)

    u_first = braids["U12"] @ braids["U23"] @ braids["U12"]
    u_second = braids["U56"] @ braids["U45"] @ braids["U56"]

    residual_subspace = 0.0
    reports = []
    for u, ref in ((u_first, h_first), (u_second, h_second)):
        restricted = b.conj().T @ u @ b
        # the product must not leak out of the computational subspace
        leak = float(np.max(np.abs(u @ b - b @ restricted)))
        residual_subspace = max(residual_subspace, leak)
        reports.append(_phase_match(restricted, ref))
    (phase1, res1), (phase2, res2) = reports

    restricted1 = b.conj().T @ u_first @ b
    res_h2 = float(np.max(np.abs(restricted1 @ restricted1 - (phase1 ** 2) * np.eye(4))))

    ok = max(res1, res2, res_h2, residual_subspace) <= tol
    return HadamardReport(ok, phase1, phase2, res1, res2, res_h2, residual_subspace)


@dataclass(frozen=True)
class BraidGroupReport:
    ok: bool
    mapping_residuals: dict
    yang_baxter_residual: float
    yang_baxter_phase: complex
    commutator_norm: float


def verify_braid_group(tol: float = 1e-12) -> BraidGroupReport:
    """Verify the braid-group action on three left Majorana modes.

    Checks, at the level of Heisenberg transport U^dag c U with U1 braiding
    (c_0, c_1) and U2 braiding (c_1, c_2):
        U1 U2: (c_0, c_1, c_2) -> ( c_2, -c_0, -c_1)
        U2 U1: (c_0, c_1, c_2) -> ( c_1,  c_2,  c_0)
        U1 U2 U1 = U2 U1 U2 (Yang-Baxter, up to global phase)
                -> ( c_2, -c_1,  c_0)
    and that U1 U2 != U2 U1 as matrices.
    """
    n_modes = 3
    u1 = braid_unitary(0, 1, n_modes)
    u2 = braid_unitary(1, 2, n_modes)

    def transport_residual(u: np.ndarray, images: list[tuple[float, int]]) -> float:
        res = 0.0
        for k, (sign, target) in enumerate(images):
            got = u.conj().T @ majorana_matrix(k, n_modes) @ u
            want = sign * majorana_matrix(target, n_modes)
            res = max(res, float(np.max(np.abs(got - want))))
        return res

    mapping_residuals = {
        "U1U2": transport_residual(u1 @ u2, [(1, 2), (-1, 0), (-1, 1)]),
        "U2U1": transport_residual(u2 @ u1, [(1, 1), (1, 2), (1, 0)]),
        "U1U2U1": transport_residual(u1 @ u2 @ u1, [(1, 2), (-1, 1), (1, 0)]),
    }
    yb_phase, yb_res = _phase_match(u1 @ u2 @ u1, u2 @ u1 @ u2)
    comm = float(np.linalg.norm(u1 @ u2 - u2 @ u1))
    ok = max(mapping_residuals.values()) <= tol and yb_res <= tol and comm > 0.1
    return BraidGroupReport(ok, mapping_residuals, yb_res, yb_phase, comm)
