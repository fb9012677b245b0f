"""Core linear algebra: norms, partial trace/transpose, tensor structure."""

import numpy as np
import pytest

from sepscope.hsbasis import SIGMA_X, SIGMA_Y, SIGMA_Z
from sepscope.linalg import (
    DensityMatrix,
    DimensionError,
    InvariantError,
    TraceClassOperator,
    frobenius_norm,
    hs_inner,
    partial_trace,
    partial_transpose,
    permute_subsystems,
    tensor,
    trace_norm,
    trace_out,
)
from sepscope.states import (
    counterexample_matrix,
    counterexample_spectra,
    Counterexample,
    psi_plus,
    random_density_matrix,
    random_unitary,
)

I2 = np.eye(2, dtype=complex)
E = [[np.zeros((2, 2), dtype=complex) for _ in range(2)] for _ in range(2)]
for _i in range(2):
    for _j in range(2):
        E[_i][_j][_i, _j] = 1.0


def test_hs_inner_identity():
    assert hs_inner(I2, I2) == pytest.approx(2.0)


def test_hs_inner_pauli_orthogonality():
    assert hs_inner(SIGMA_X, SIGMA_Y) == pytest.approx(0.0)
    assert hs_inner(SIGMA_Y, SIGMA_Z) == pytest.approx(0.0)


def test_hs_inner_matrix_unit():
    assert hs_inner(E[0][1], E[0][1]) == pytest.approx(1.0)


def test_hs_inner_conjugate_linear_first_argument(rng):
    a = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    b = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    alpha = 0.7 - 1.3j
    assert hs_inner(alpha * a, b) == pytest.approx(np.conj(alpha) * hs_inner(a, b))


def test_hs_inner_shape_mismatch():
    with pytest.raises(DimensionError):
        hs_inner(np.eye(2), np.eye(3))


@pytest.mark.parametrize("d", [2, 3, 4])
def test_trace_norm_identity(d):
    assert trace_norm(np.eye(d)) == pytest.approx(d)


def test_trace_norm_absolute_eigenvalues():
    assert trace_norm(np.diag([1.0, -2.0])) == pytest.approx(3.0)


def test_trace_norm_realigned_counterexample_matrix():
    # explicit 4x4 realigned form of the counterexample family, trace norm
    # g(s, r) + |t| with g computed from the printed eigenvalue formulas
    s, r, t = 0.5, 0.25, 0.0625
    mat = 0.5 * np.array(
        [[1, 0, 0, r], [0, t, 0, 0], [0, 0, t, 0], [s, 0, 0, 1 + r - s]]
    )
    g = counterexample_spectra(Counterexample(s, r, t)).g
    assert g == pytest.approx(5 / (4 * np.sqrt(2)), abs=1e-14)
    assert trace_norm(mat) == pytest.approx(g + abs(t), abs=1e-12)
    assert trace_norm(mat) == pytest.approx(0.9463834764831844, abs=1e-12)


def test_frobenius_norm_examples():
    assert frobenius_norm(I2) == pytest.approx(np.sqrt(2))
    assert frobenius_norm(SIGMA_X) == pytest.approx(np.sqrt(2))
    assert frobenius_norm(E[0][1] + E[1][0]) == pytest.approx(np.sqrt(2))


def test_trace_norm_invariant_under_isometries(rng):
    for _ in range(25):
        m = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        u = random_unitary(4, rng)
        v = random_unitary(4, rng)
        assert trace_norm(u @ m @ v) == pytest.approx(trace_norm(m), abs=1e-10)
        assert trace_norm(m) >= frobenius_norm(m) - 1e-12


def test_partial_transpose_product_state(rng):
    rho_a = random_density_matrix(2, 1, rng=rng).mat
    rho_b = random_density_matrix(3, 1, rng=rng).mat
    prod = tensor(rho_a, rho_b)
    pt = partial_transpose(prod, "second", dims=(2, 3))
    np.testing.assert_allclose(pt, tensor(rho_a, rho_b.T), atol=1e-14)
    assert np.linalg.eigvalsh(pt)[0] >= -1e-12


def test_partial_transpose_psi_plus_min_eigenvalue():
    proj = np.outer(psi_plus(2), psi_plus(2).conj())
    pt = partial_transpose(proj, "second", dims=(2, 2))
    eigs = np.linalg.eigvalsh(pt)
    assert eigs[0] == pytest.approx(-0.5, abs=1e-12)


def test_partial_transpose_counterexample_min_eigenvalue():
    s, r, t = 0.5, 0.25, 0.0625
    pt = partial_transpose(counterexample_matrix(s, r, t), "second", dims=(2, 2))
    eigs = np.linalg.eigvalsh(pt)
    closed = (s - r) / 4 - 0.5 * np.sqrt((s - r) ** 2 / 4 + t * t)
    assert eigs[0] == pytest.approx(closed, abs=1e-12)
    assert eigs[0] == pytest.approx(-0.007377124296868, abs=1e-12)


def test_partial_transpose_involution_and_full_transpose(rng):
    rho = random_density_matrix(2, 3, rng=rng)
    for side in ("first", "second"):
        pt = partial_transpose(rho, side)
        np.testing.assert_allclose(
            partial_transpose(pt, side, dims=(2, 3)), rho.mat, atol=0
        )
    both = partial_transpose(partial_transpose(rho, "first"), "second", dims=(2, 3))
    np.testing.assert_allclose(both, rho.mat.T, atol=0)


def test_partial_trace_product_state(rng):
    rho_a = random_density_matrix(2, 1, rng=rng).mat
    rho_b = random_density_matrix(3, 1, rng=rng).mat
    prod = tensor(rho_a, rho_b)
    np.testing.assert_allclose(
        partial_trace(prod, "second", dims=(2, 3)), rho_a, atol=1e-14
    )
    np.testing.assert_allclose(
        partial_trace(prod, "first", dims=(2, 3)), rho_b, atol=1e-14
    )


@pytest.mark.parametrize("d", [2, 3])
def test_partial_trace_psi_plus_maximally_mixed(d):
    proj = np.outer(psi_plus(d), psi_plus(d).conj())
    np.testing.assert_allclose(
        partial_trace(proj, "second", dims=(d, d)), np.eye(d) / d, atol=1e-14
    )


def test_partial_trace_counterexample_reductions():
    s, r, t = 0.5, 0.25, 0.0625
    mat = counterexample_matrix(s, r, t)
    # index-summation oracle
    expect_a = np.zeros((2, 2), dtype=complex)
    expect_b = np.zeros((2, 2), dtype=complex)
    for i in range(2):
        for j in range(2):
            expect_a[i, j] = sum(mat[i * 2 + k, j * 2 + k] for k in range(2))
            expect_b[i, j] = sum(mat[k * 2 + i, k * 2 + j] for k in range(2))
    np.testing.assert_allclose(partial_trace(mat, "second", dims=(2, 2)), expect_a, atol=0)
    np.testing.assert_allclose(partial_trace(mat, "first", dims=(2, 2)), expect_b, atol=0)
    np.testing.assert_allclose(expect_a, np.diag([(1 + r) / 2, (1 - r) / 2]), atol=1e-14)
    np.testing.assert_allclose(expect_b, np.diag([(1 + s) / 2, (1 - s) / 2]), atol=1e-14)


def test_partial_trace_normalisation(rng):
    for _ in range(10):
        rho = random_density_matrix(3, 2, rng=rng)
        for side in ("first", "second"):
            assert np.trace(partial_trace(rho, side)) == pytest.approx(1.0, abs=1e-12)


def test_tensor_examples():
    np.testing.assert_allclose(tensor(I2, I2), np.eye(4), atol=0)
    np.testing.assert_allclose(
        tensor(SIGMA_Z, SIGMA_Z), np.diag([1.0, -1.0, -1.0, 1.0]), atol=0
    )
    unit = tensor(E[0][0], E[1][1])
    expected = np.zeros((4, 4))
    expected[1, 1] = 1.0  # composite index (0, 1) on rows and columns
    np.testing.assert_allclose(unit, expected, atol=0)


def test_permute_subsystems_identity_and_swap(rng):
    rho_a = random_density_matrix(2, 1, rng=rng).mat
    rho_b = random_density_matrix(3, 1, rng=rng).mat
    prod = tensor(rho_a, rho_b)
    np.testing.assert_allclose(
        permute_subsystems(prod, [2, 3], (0, 1)), prod, atol=0
    )
    np.testing.assert_allclose(
        permute_subsystems(prod, [2, 3], (1, 0)), tensor(rho_b, rho_a), atol=1e-14
    )


def test_permute_subsystems_regroup_preserves_spectrum(rng):
    # four-factor product regrouped from (A1 B1 A2 B2) to (A1 A2 B1 B2)
    parts = [random_density_matrix(2, 1, rng=rng).mat for _ in range(4)]
    prod = tensor(tensor(parts[0], parts[1]), tensor(parts[2], parts[3]))
    regrouped = permute_subsystems(prod, [2, 2, 2, 2], (0, 2, 1, 3))
    before = np.sort(np.linalg.eigvalsh(prod))
    after = np.sort(np.linalg.eigvalsh(regrouped))
    np.testing.assert_allclose(before, after, atol=1e-10)
    assert np.trace(regrouped) == pytest.approx(np.trace(prod))


def test_permute_subsystems_errors():
    with pytest.raises(DimensionError):
        permute_subsystems(np.eye(6), [2, 2], (0, 1))
    with pytest.raises(DimensionError):
        permute_subsystems(np.eye(4), [2, 2], (0, 0))


def test_trace_out_multi_factor(rng):
    parts = [random_density_matrix(2, 1, rng=rng).mat for _ in range(3)]
    prod = tensor(tensor(parts[0], parts[1]), parts[2])
    reduced = trace_out(prod, [2, 2, 2], [1])
    np.testing.assert_allclose(reduced, tensor(parts[0], parts[2]), atol=1e-14)


def test_density_matrix_validation(rng):
    good = random_density_matrix(2, 2, rng=rng)
    assert good.dim == 2

    with pytest.raises(InvariantError, match="Hermitian"):
        DensityMatrix(2, 1, np.array([[0.5, 0.5], [0.0, 0.5]]))
    with pytest.raises(InvariantError, match="trace"):
        DensityMatrix(2, 1, np.eye(2))
    with pytest.raises(InvariantError, match="positive semidefinite"):
        DensityMatrix(2, 1, np.diag([1.5, -0.5]))
    with pytest.raises(DimensionError):
        DensityMatrix(2, 2, np.eye(2) / 2)
    with pytest.raises(InvariantError, match="NaN"):
        DensityMatrix(2, 1, np.array([[np.nan, 0], [0, 1.0]]))


def test_trace_class_operator_relaxed():
    op = TraceClassOperator(2, 1, np.array([[0.5, 0.5], [0.0, 0.5]]))
    assert op.mat.shape == (2, 2)
    with pytest.raises(DimensionError):
        TraceClassOperator(2, 2, np.eye(2))


def test_density_matrix_rectangular_dim_property(rng):
    rho = random_density_matrix(2, 3, rng=rng)
    with pytest.raises(DimensionError):
        _ = rho.dim
