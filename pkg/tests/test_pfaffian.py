"""Pfaffian elimination: known values, Pf^2 = det, backend agreement."""

import numpy as np
import pytest

from majorasim.pfaffian import _pfaffian_ltl, pfaffian


def test_two_by_two():
    a = 1.7
    m = np.array([[0.0, a], [-a, 0.0]])
    assert pfaffian(m) == pytest.approx(a, abs=1e-15)


def test_known_four_by_four():
    # Pf = a*f - b*e + c*d for the canonical 4x4 antisymmetric matrix
    a, b, c, d, e, f = 1.0, 2.0, 3.0, 4.0, 5.0, 6.0
    m = np.array(
        [
            [0, a, b, c],
            [-a, 0, d, e],
            [-b, -d, 0, f],
            [-c, -e, -f, 0],
        ],
        dtype=float,
    )
    assert pfaffian(m) == pytest.approx(a * f - b * e + c * d, abs=1e-12)


@pytest.mark.parametrize("n", [2, 4, 8, 16, 40])
def test_pfaffian_squared_is_determinant(n):
    rng = np.random.default_rng(n)
    m = rng.standard_normal((n, n))
    m = m - m.T
    pf = pfaffian(m)
    det = np.linalg.det(m)
    assert pf**2 == pytest.approx(det, rel=1e-8)


def test_singular_matrix_gives_zero():
    m = np.zeros((4, 4))
    m[0, 1] = 1.0
    m[1, 0] = -1.0
    assert pfaffian(m) == 0.0


def test_block_diagonal_product_rule():
    rng = np.random.default_rng(3)
    a = rng.standard_normal((4, 4))
    a = a - a.T
    b = rng.standard_normal((6, 6))
    b = b - b.T
    m = np.zeros((10, 10))
    m[:4, :4] = a
    m[4:, 4:] = b
    assert pfaffian(m) == pytest.approx(pfaffian(a) * pfaffian(b), rel=1e-10)


def test_input_is_not_modified_and_symmetric_noise_ignored():
    rng = np.random.default_rng(4)
    m = rng.standard_normal((6, 6))
    m = m - m.T
    copy = m.copy()
    noisy = m + 1e-14 * np.eye(6)
    assert pfaffian(noisy) == pytest.approx(pfaffian(m), rel=1e-10)
    assert np.array_equal(m, copy)


def test_odd_dimension_rejected():
    with pytest.raises(ValueError):
        pfaffian(np.zeros((3, 3)))
    with pytest.raises(ValueError):
        pfaffian(np.zeros((2, 3)))


def test_python_source_agrees_with_dispatched_kernel():
    # the jitted kernel is compiled from the same source; both paths must
    # agree to roundoff on the same input
    rng = np.random.default_rng(5)
    m = rng.standard_normal((12, 12))
    m = np.ascontiguousarray(m - m.T)
    reference = _pfaffian_ltl(m.copy())
    assert pfaffian(m) == pytest.approx(reference, rel=1e-12)
