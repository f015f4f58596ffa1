"""Wire Hamiltonians, local operations, protocol steps, and the error model."""

import numpy as np
import pytest

from majorasim import (
    ErrorModel,
    LocalOp,
    NetworkGeometry,
    QuadraticHamiltonian,
    WireParams,
    build_local_op,
    build_network,
    build_wire,
    check_step_continuity,
    step_hamiltonian,
    step_terms,
)
from majorasim import fock
from majorasim.builder import HOPPING, KITAEV, LOCAL_POTENTIAL, PAIRING, STEPS

GEO22 = NetworkGeometry(2, 2)
IDEAL = WireParams(length=2)


def test_wire_params_validation():
    with pytest.raises(ValueError):
        WireParams(length=1)
    with pytest.raises(ValueError):
        WireParams(length=2, hopping=-1.0)
    p = WireParams(length=2, hopping=2.0)
    assert p.potential == 2.0  # V defaults to J
    assert p.is_ideal is False or abs(p.pairing) == p.hopping
    assert WireParams(length=2, mu=1.0).in_topological_phase
    assert not WireParams(length=2, mu=3.0).in_topological_phase


def test_ideal_wire_majorana_form():
    # J=|Delta|, mu=0 on 2 sites is exactly -iJ c2 c3
    h = build_wire(IDEAL, NetworkGeometry(1, 2), 0)
    expected = np.zeros((4, 4))
    expected[1, 2] = -2.0
    expected[2, 1] = 2.0
    assert np.max(np.abs(h.a - expected)) <= 1e-12
    assert h.offset == 0.0


def test_pure_hopping_wire_matches_fock():
    # J=1, Delta=0, mu=0: cross-check against the direct -a1^dag a2 + h.c.
    h = build_wire(WireParams(length=2, pairing=0.0), NetworkGeometry(1, 2), 0)
    a1 = fock.annihilation_matrix(0, 2)
    a2 = fock.annihilation_matrix(1, 2)
    direct = -(a1.conj().T @ a2 + a2.conj().T @ a1)
    assert np.max(np.abs(fock.embed_quadratic(h) - direct)) <= 1e-12


def test_mu_only_wire_spectrum():
    # decoupled sites at chemical potential mu: every quasiparticle costs |mu|
    from majorasim import spectrum

    mu = 0.7
    geo = NetworkGeometry(1, 3)
    h = QuadraticHamiltonian.zero(6)
    for j in range(3):
        h = h + build_local_op(LocalOp(LOCAL_POTENTIAL, ((0, j),), -mu / 2.0), geo)
    rep = spectrum(h)
    assert np.allclose(rep.energies, [mu, mu, mu], atol=1e-12)


def test_ideal_wire_has_one_zero_pair_per_wire():
    for length in (2, 4, 7):
        geo = NetworkGeometry(2, length)
        h = build_network(WireParams(length=length), geo)
        s = np.linalg.svd(h.a, compute_uv=False)
        assert int(np.sum(s < 1e-10)) == 4  # two unpaired Majoranas per wire


def test_local_op_validation():
    with pytest.raises(ValueError):
        LocalOp("bogus", ((0, 0),), 1.0)
    with pytest.raises(ValueError):
        LocalOp(HOPPING, ((0, 0),), 1.0)
    with pytest.raises(ValueError):
        LocalOp(LOCAL_POTENTIAL, ((0, 0), (0, 1)), 1.0)
    with pytest.raises(ValueError):
        build_local_op(LocalOp(HOPPING, ((0, 0), (0, 0)), 1.0), GEO22)
    # non-adjacent sites rejected (diagonal neighbors are not links)
    with pytest.raises(ValueError):
        build_local_op(LocalOp(KITAEV, ((0, 0), (1, 1)), 1.0), GEO22)


def test_vertical_hopping_majorana_form():
    # -iJ (c2 d1 - c1 d2)/2 for the link between the two left corner sites
    h = build_local_op(LocalOp(HOPPING, ((0, 0), (1, 0)), 1.0), GEO22)
    expected = np.zeros((8, 8))
    c1, c2, d1, d2 = 0, 1, 4, 5
    expected[c2, d1] = -1.0
    expected[c1, d2] = 1.0
    expected -= expected.T
    assert np.max(np.abs(h.a - expected)) <= 1e-12


def test_local_potential_majorana_form():
    # 2V a^dag a = V - i V c1 c2
    v = 0.7
    h = build_local_op(LocalOp(LOCAL_POTENTIAL, ((0, 0),), v), GEO22)
    expected = np.zeros((8, 8))
    expected[0, 1] = -2.0 * v
    expected[1, 0] = 2.0 * v
    assert np.max(np.abs(h.a - expected)) <= 1e-12
    assert h.offset == pytest.approx(v)


def test_zero_strength_ops_are_zero():
    for kind in (HOPPING, PAIRING, KITAEV):
        h = build_local_op(LocalOp(kind, ((0, 0), (0, 1)), 0.0), GEO22)
        assert np.max(np.abs(h.a)) == 0.0


def test_local_op_linearity():
    ops = [
        LocalOp(HOPPING, ((0, 0), (0, 1)), 0.3),
        LocalOp(PAIRING, ((0, 0), (1, 0)), -0.8),
        LocalOp(LOCAL_POTENTIAL, ((1, 1),), 1.1),
    ]
    total = QuadraticHamiltonian.zero(8)
    for op in ops:
        total = total + build_local_op(op, GEO22)
    doubled = QuadraticHamiltonian.zero(8)
    for op in ops:
        doubled = doubled + build_local_op(
            LocalOp(op.kind, op.sites, 2.0 * op.strength), GEO22
        )
    assert doubled.max_difference(2.0 * total) <= 1e-12


def test_step_one_boundary_form():
    # phi=0: -iJ(c2 c3 + d2 d3); phi=pi/2 leaves only the vertical hopping
    h0 = step_hamiltonian("I", 0.0, IDEAL, GEO22)
    expected = np.zeros((8, 8))
    expected[1, 2] = -2.0
    expected[5, 6] = -2.0
    expected -= expected.T
    assert np.max(np.abs(h0.a - expected)) <= 1e-12


@pytest.mark.parametrize("alpha", [0.0, 0.1])
@pytest.mark.parametrize("length", [3, 5])
def test_step_continuity_junctions(alpha, length):
    # gluing condition: each step ends where the next begins, for both
    # directions and with or without leakage
    params = WireParams(length=length, pairing=1.5)
    geo = NetworkGeometry(2, length)
    report = check_step_continuity(params, geo, error=ErrorModel(alpha))
    assert report.ok, report.residuals
    assert report.first_discontinuity() is None


def test_step_continuity_includes_braid_restore():
    params = WireParams(length=4, pairing=1.5, mu=0.4)
    geo = NetworkGeometry(3, 4)
    report = check_step_continuity(params, geo, wires=(1, 2), error=ErrorModel(0.07))
    assert report.ok
    assert "forward:IV->I" in report.residuals


def test_error_model_validation():
    with pytest.raises(ValueError):
        ErrorModel(-0.1)
    with pytest.raises(ValueError):
        ErrorModel(1.0)


def test_alpha_zero_is_identity_on_every_term():
    params = WireParams(length=5, pairing=1.5)
    geo = NetworkGeometry(2, 5)
    for step in STEPS:
        clean = step_terms(step, params, geo)
        noisy = step_terms(step, params, geo, error=ErrorModel(0.0))
        for part in ("const", "cos_part", "sin_part"):
            assert getattr(clean, part).max_difference(getattr(noisy, part)) == 0.0


def test_leakage_touches_only_expected_entries():
    params = WireParams(length=5, pairing=1.5)
    geo = NetworkGeometry(2, 5)
    for step in STEPS:
        for phi in (0.0, 0.6, np.pi / 2):
            clean = step_hamiltonian(step, phi, params, geo)
            noisy = step_hamiltonian(step, phi, params, geo, error=ErrorModel(0.1))
            diff = np.abs(noisy.a - clean.a)
            rows, cols = np.nonzero(diff > 1e-14)
            allowed_sites = set()
            for w in (0, 1):
                for j in (0, 1, 2):
                    allowed_sites.update(geo.site_labels(w, j))
            assert set(rows).issubset(allowed_sites)
            assert set(cols).issubset(allowed_sites)


def test_leakage_skipped_below_three_sites():
    params = WireParams(length=2)
    with pytest.warns(UserWarning):
        step_terms("I", params, GEO22, error=ErrorModel(0.05))


def test_reverse_direction_mirrors_roles():
    # reverse deposits the fermion in the upper wire: step II's sin part
    # couples the upper wire's first link instead of the lower one
    params = WireParams(length=3, pairing=1.5)
    geo = NetworkGeometry(2, 3)
    fwd = step_terms("II", params, geo, direction="forward").sin_part.a
    rev = step_terms("II", params, geo, direction="reverse").sin_part.a
    upper = geo.wire_slice(0)
    lower = geo.wire_slice(1)
    assert np.max(np.abs(fwd[lower, lower])) > 0
    assert np.max(np.abs(fwd[upper, upper])) == 0.0
    assert np.max(np.abs(rev[upper, upper])) > 0
    assert np.max(np.abs(rev[lower, lower])) == 0.0


def test_step_hamiltonian_rejects_bad_phi():
    with pytest.raises(ValueError):
        step_hamiltonian("I", -0.1, IDEAL, GEO22)
    with pytest.raises(ValueError):
        step_hamiltonian("V", 0.0, IDEAL, GEO22)
