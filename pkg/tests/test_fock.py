"""Dense Fock oracle: Majorana algebra, braids, Hadamards, Deutsch-Jozsa."""

import itertools

import numpy as np
import pytest

from majorasim import NetworkGeometry, WireParams, build_wire, step_hamiltonian
from majorasim import fock
from majorasim.schedule import BraidMove, transport_of_word


def test_single_mode_majoranas():
    c0 = fock.majorana_matrix(0, 1)
    c1 = fock.majorana_matrix(1, 1)
    assert np.allclose(c0 @ c0, np.eye(2))
    assert np.allclose(c1 @ c1, np.eye(2))
    assert np.allclose(c0, c0.conj().T)


@pytest.mark.parametrize("n_modes", [2, 3])
def test_anticommutation_relations(n_modes):
    cs = [fock.majorana_matrix(k, n_modes) for k in range(2 * n_modes)]
    eye = np.eye(1 << n_modes)
    for k, ck in enumerate(cs):
        for l, cl in enumerate(cs):
            anti = ck @ cl + cl @ ck
            assert np.max(np.abs(anti - (2.0 if k == l else 0.0) * eye)) <= 1e-12


def test_hermiticity_at_six_modes():
    for k in range(12):
        c = fock.majorana_matrix(k, 6)
        assert np.max(np.abs(c - c.conj().T)) <= 1e-12


def test_mode_guard():
    with pytest.raises(ValueError):
        fock.majorana_matrix(0, 14)
    with pytest.raises(ValueError):
        fock.majorana_matrix(4, 2)


def test_parity_matrix_is_product_of_site_parities():
    n = 3
    prod = np.eye(1 << n, dtype=complex)
    for m in range(n):
        prod = prod @ (
            1j * fock.majorana_matrix(2 * m, n) @ fock.majorana_matrix(2 * m + 1, n)
        )
    assert np.max(np.abs(prod - fock.parity_matrix(n))) <= 1e-12


def test_embed_quadratic_examples():
    # zero matrix embeds to offset * identity
    from majorasim.core import QuadraticHamiltonian

    h = QuadraticHamiltonian(np.zeros((4, 4)), offset=1.25)
    assert np.max(np.abs(fock.embed_quadratic(h) - 1.25 * np.eye(4))) <= 1e-12
    # additivity
    rng = np.random.default_rng(0)
    h1 = QuadraticHamiltonian(rng.standard_normal((6, 6)))
    h2 = QuadraticHamiltonian(rng.standard_normal((6, 6)))
    lhs = fock.embed_quadratic(h1 + h2)
    rhs = fock.embed_quadratic(h1) + fock.embed_quadratic(h2)
    assert np.max(np.abs(lhs - rhs)) <= 1e-12
    # scalar multiplication
    scaled = fock.embed_quadratic(3.0 * h1)
    assert np.max(np.abs(scaled - 3.0 * fock.embed_quadratic(h1))) <= 1e-12


def test_embed_step_three_closed_form():
    # -iJ(c2 d1 cos + d2 d3) - iV sin c1 c2 (+ V sin) on the 2x2 network
    geo = NetworkGeometry(2, 2)
    params = WireParams(length=2, potential=0.7)
    phi = 0.9
    h = step_hamiltonian("III", phi, params, geo)
    c = lambda k: fock.majorana_matrix(k, 4)
    c1, c2, d1, d2, d3 = c(0), c(1), c(4), c(5), c(6)
    direct = (
        -1j * (np.cos(phi) * c2 @ d1 + d2 @ d3)
        - 0.7j * np.sin(phi) * c1 @ c2
        + 0.7 * np.sin(phi) * np.eye(16)
    )
    assert np.max(np.abs(fock.embed_quadratic(h) - direct)) <= 1e-12


def test_braid_unitary_properties():
    n = 3
    for i, j in itertools.permutations(range(2 * n), 2):
        u = fock.braid_unitary(i, j, n)
        assert np.max(np.abs(u @ u.conj().T - np.eye(8))) <= 1e-12
        # conjugation: U c_i U^dag = -c_j, U c_j U^dag = c_i
        ci, cj = fock.majorana_matrix(i, n), fock.majorana_matrix(j, n)
        assert np.max(np.abs(u @ ci @ u.conj().T + cj)) <= 1e-12
        assert np.max(np.abs(u @ cj @ u.conj().T - ci)) <= 1e-12
    with pytest.raises(ValueError):
        fock.braid_unitary(1, 1, 2)


def test_braid_unitaries_preserve_total_parity():
    parity = fock.parity_matrix(3)
    for i, j in itertools.combinations(range(6), 2):
        u = fock.braid_unitary(i, j, 3)
        assert np.max(np.abs(u @ parity - parity @ u)) <= 1e-12


def test_braid_unitary_fourth_power_is_identity_up_to_phase():
    u = fock.braid_unitary(0, 1, 2)
    u4 = np.linalg.matrix_power(u, 4)
    phase = u4[0, 0]
    assert abs(abs(phase) - 1.0) <= 1e-12
    assert np.max(np.abs(u4 - phase * np.eye(4))) <= 1e-12


def test_braid_square_is_mode_parity_phase():
    # U_12^2 = c_1 c_2 = i(2 n_1 - 1): diagonal, entries +-i
    u = fock.braid_unitary(0, 1, fock.DJ_MODES)
    sq = u @ u
    diag = np.diag(sq)
    assert np.max(np.abs(sq - np.diag(diag))) <= 1e-12
    assert np.allclose(np.abs(diag), 1.0)
    basis = fock.dj_basis()
    b = np.column_stack([basis[k] for k in ("00", "01", "10", "11")])
    restricted = np.diag(b.conj().T @ sq @ b)
    assert np.allclose(restricted, [-1j, -1j, 1j, 1j], atol=1e-12)


def test_oracles_match_reference_diagonals_up_to_phase():
    basis = fock.dj_basis()
    b = np.column_stack([basis[k] for k in ("00", "01", "10", "11")])
    for g in fock.ORACLE_IDS:
        restricted = b.conj().T @ fock.oracle_unitary(g) @ b
        phase, residual = fock._phase_match(restricted, fock.oracle_diagonal(g))
        assert residual <= 1e-12
        assert abs(abs(phase) - 1.0) <= 1e-12


def test_dj_basis_orthonormal_and_odd_parity():
    basis = fock.dj_basis()
    keys = ("00", "01", "10", "11")
    parity = fock.parity_matrix(fock.DJ_MODES)
    for a in keys:
        for bkey in keys:
            overlap = np.vdot(basis[a], basis[bkey])
            assert overlap == pytest.approx(1.0 if a == bkey else 0.0, abs=1e-12)
        assert np.real(np.vdot(basis[a], parity @ basis[a])) == pytest.approx(-1.0)


def test_dj_basis_wire_two_occupation():
    # <i g2L g2R> = 1 - 2 n_2 distinguishes |00> (occupied) from |10>
    basis = fock.dj_basis()
    op = 1j * fock.majorana_matrix(2, 3) @ fock.majorana_matrix(3, 3)
    assert np.real(np.vdot(basis["00"], op @ basis["00"])) == pytest.approx(-1.0)
    assert np.real(np.vdot(basis["10"], op @ basis["10"])) == pytest.approx(1.0)


def test_hadamard_decomposition():
    report = fock.verify_hadamard_decomposition()
    assert report.ok
    assert report.residual_first <= 1e-10
    assert report.residual_second <= 1e-10
    assert report.residual_h_squared <= 1e-10
    # U12 U23 U12 |00> = (|00> + |10>)/sqrt2 up to the reported phase
    basis = fock.dj_basis()
    braids = fock._dj_braids()
    psi = braids["U12"] @ braids["U23"] @ braids["U12"] @ basis["00"]
    target = (basis["00"] + basis["10"]) / np.sqrt(2.0)
    overlap = abs(np.vdot(target, psi))
    assert overlap == pytest.approx(1.0, abs=1e-12)


def test_braid_group_report():
    report = fock.verify_braid_group()
    assert report.ok
    assert max(report.mapping_residuals.values()) <= 1e-12
    assert report.yang_baxter_residual <= 1e-12
    assert report.commutator_norm > 0.1


def test_deutsch_jozsa_truth_table():
    expected = {
        "g0": ("00", 1.0, (1.0, -1.0, 1.0)),
        "g1": ("10", 0.0, (-1.0, 1.0, 1.0)),
        "g2": ("11", 0.0, (-1.0, -1.0, -1.0)),
        "g3": ("01", 0.0, (1.0, 1.0, -1.0)),
    }
    for g, (state, p00, parities) in expected.items():
        result = fock.run_deutsch_jozsa(g)
        assert result.p00 == pytest.approx(p00, abs=1e-10)
        assert result.verdict == ("constant" if g == "g0" else "balanced")
        amp = result.overlaps[state]
        assert abs(amp) == pytest.approx(1.0, abs=1e-10)
        assert np.allclose(result.wire_parities, parities, atol=1e-10)


def test_dj_braid_word_time_order():
    word = fock.dj_braid_word("g0")
    assert word == ["U23", "U12", "U45", "U56", "U12", "U23", "U56", "U45"]
    assert len(fock.dj_braid_word("g1")) == 10
    with pytest.raises(ValueError):
        fock.dj_braid_word("g7")


def test_transport_words_exhaustive_dense_vs_symbolic():
    # every word of length <= 4 over the two generators and their inverses:
    # dense conjugation agrees with the signed-permutation model
    gens = [BraidMove(0, False), BraidMove(1, False), BraidMove(0, True), BraidMove(1, True)]

    def dense(move):
        i, j = (move.wire, move.wire + 1) if move.inverse else (move.wire + 1, move.wire)
        return fock.braid_unitary(i, j, 3)

    for length in (1, 2, 3, 4):
        for word in itertools.product(gens, repeat=length):
            u = np.eye(8, dtype=complex)
            for move in word:
                u = dense(move) @ u
            r = fock.heisenberg_transport(u, 3)
            assert np.max(np.abs(r[:3, :3] - transport_of_word(word, 3))) <= 1e-12
            assert np.max(np.abs(r[3:, 3:] - np.eye(3))) <= 1e-12


def test_ground_state_sector_helper():
    geo = NetworkGeometry(1, 2)
    h = build_wire(WireParams(length=2), geo, 0)
    hd = fock.embed_quadratic(h)
    for parity in (+1, -1):
        psi = fock.ground_state_in_parity_sector(hd, parity)
        p = float(np.real(np.vdot(psi, fock.parity_matrix(2) @ psi)))
        assert p == pytest.approx(parity, abs=1e-12)
        e = float(np.real(np.vdot(psi, hd @ psi)))
        assert e == pytest.approx(-1.0, abs=1e-12)  # both sectors degenerate
