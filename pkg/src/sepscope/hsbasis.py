"""Hilbert-Schmidt operator bases and Bloch-type state decompositions.

Two bases are supported:

* ``pauli`` (dimension 2 only): the expansion
  rho = (1/4)(I(x)I + sum_n r_n sigma_n(x)I + sum_m s_m I(x)sigma_m
  + sum_{m,n} t_mn sigma_n(x)sigma_m).  All coefficients are real for
  Hermitian input.  Note the index order: t_mn multiplies
  sigma_n (Alice) (x) sigma_m (Bob).

* ``spin`` (any dimension): the unitary shift-and-phase matrices
  S_jk = sum_r exp(2*pi*i*j*r/d) |r><r(+)k| with (+) addition mod d.
  The traceless ones are flattened row-major over (j, k), skipping
  (0, 0).  The expansion carries a complex conjugate on Bob's side:
  rho = (1/d^2)(I(x)I + sum r_n S_n(x)I + sum s_m I(x)S_m^*
  + sum t_mn S_n(x)S_m^*), with complex coefficients in general.

At d = 2 the spin matrices reproduce the Paulis up to order and phase:
(S_01, S_10, S_11) = (sigma_1, sigma_3, i*sigma_2), so the two paths are
related by the index map (1, 2, 3)_pauli -> (S_01, S_11/i, S_10) together
with the conjugation convention above.  The ``pauli`` path is the default
at d = 2 because the two-qubit closed forms are stated in it.

The r vector is the Bloch data of Alice's reduced state and s of Bob's:
tr_B(rho) = (I + sum r_n A_n)/d with A the Alice-side basis.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .linalg import (
    DensityMatrix,
    DimensionError,
    InvariantError,
    _frozen_copy,
    as_matrix,
    trace_norm,
)
from .realign import RealignedMatrix

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)
PAULI = (SIGMA_X, SIGMA_Y, SIGMA_Z)


def spin_matrix(d: int, j: int, k: int) -> np.ndarray:
    """Shift-and-phase basis matrix: exp(2*pi*i*j*r/d) at (r, r+k mod d)."""
    if d < 1:
        raise ValueError(f"dimension must be positive, got {d}")
    if not (0 <= j < d and 0 <= k < d):
        raise ValueError(f"indices (j, k) = ({j}, {k}) out of range for d = {d}")
    out = np.zeros((d, d), dtype=np.complex128)
    rows = np.arange(d)
    out[rows, (rows + k) % d] = np.exp(2j * np.pi * j * rows / d)
    return out


@dataclass(frozen=True)
class SpinBasis:
    """All d^2 shift-and-phase matrices, identity first."""

    dim: int
    matrices: np.ndarray  # shape (d^2, d, d); matrices[0] is the identity

    @property
    def traceless(self) -> np.ndarray:
        """The d^2 - 1 traceless members, in flattening order."""
        return self.matrices[1:]


@lru_cache(maxsize=None)
def spin_basis(d: int) -> SpinBasis:
    """Cached spin basis for local dimension d."""
    order = [(0, 0)] + [(j, k) for j in range(d) for k in range(d) if (j, k) != (0, 0)]
    stack = np.stack([spin_matrix(d, j, k) for j, k in order])
    return SpinBasis(d, _frozen_copy(stack))


def _basis_stacks(dim: int, basis: str) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Return (bra_a, bra_b, ket_a, ket_b) stacks for coefficient extraction.

    Coefficients are c = tr((bra_a[n] (x) bra_b[m]) rho) and states rebuild
    as sums of ket_a[n] (x) ket_b[m].
    """
    if basis == "pauli":
        if dim != 2:
            raise ValueError(f"pauli basis requires d = 2, got d = {dim}")
        stack = np.stack(PAULI)
        return stack, stack, stack, stack
    if basis == "spin":
        kets = spin_basis(dim).traceless
        return (
            kets.conj().transpose(0, 2, 1),  # S_n^dag
            kets.transpose(0, 2, 1),         # S_m^T
            kets,                            # S_n
            kets.conj(),                     # S_m^*
        )
    raise ValueError(f"basis must be 'pauli' or 'spin', got {basis!r}")


@dataclass(frozen=True)
class HSDecomposition:
    """Bloch vectors (r, s) and correlation matrix T of a bipartite operator."""

    dim: int
    basis: str                # 'pauli' or 'spin'
    r_vec: np.ndarray         # (d^2 - 1,) complex
    s_vec: np.ndarray
    t_mat: np.ndarray         # (d^2 - 1, d^2 - 1) complex

    def __post_init__(self):
        k = self.dim * self.dim - 1
        r = np.asarray(self.r_vec, dtype=np.complex128)
        s = np.asarray(self.s_vec, dtype=np.complex128)
        t = np.asarray(self.t_mat, dtype=np.complex128)
        if r.shape != (k,) or s.shape != (k,) or t.shape != (k, k):
            raise DimensionError(
                f"coefficient shapes {r.shape}, {s.shape}, {t.shape} do not match d = {self.dim}"
            )
        for name, arr in (("r_vec", r), ("s_vec", s), ("t_mat", t)):
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)


def decompose(rho, basis: str | None = None) -> HSDecomposition:
    """Extract (r, s, T) by Hilbert-Schmidt projection.

    Requires equal local dimensions and unit trace; the identity-pair
    coefficient then comes out as exactly 1 and is not stored.
    """
    if isinstance(rho, DensityMatrix):
        if rho.dim_a != rho.dim_b:
            raise DimensionError("decomposition requires equal local dimensions")
        d, mat = rho.dim_a, rho.mat
    else:
        mat = as_matrix(rho)
        d = round(np.sqrt(mat.shape[0]))
        if mat.shape[0] != mat.shape[1] or d * d != mat.shape[0]:
            raise DimensionError("input must be square with a square side d*d")
    tr = complex(np.trace(mat))
    if abs(tr - 1.0) > 1e-12:
        raise InvariantError(f"trace is {tr:.15g}; decomposition requires unit trace")
    if basis is None:
        basis = "pauli" if d == 2 else "spin"
    bra_a, bra_b, _, _ = _basis_stacks(d, basis)
    four = mat.reshape(d, d, d, d)  # indices [i, k, j, l] = <ik|rho|jl>
    r = np.einsum("nji,ikjk->n", bra_a, four)
    s = np.einsum("mlk,ikil->m", bra_b, four)
    t = np.einsum("nji,mlk,ikjl->mn", bra_a, bra_b, four)
    return HSDecomposition(d, basis, r, s, t)


def reconstruct(dec: HSDecomposition) -> np.ndarray:
    """Rebuild the (dim^2, dim^2) matrix from a decomposition."""
    d = dec.dim
    _, _, ket_a, ket_b = _basis_stacks(d, dec.basis)
    eye = np.eye(d, dtype=np.complex128)
    alice = eye + np.tensordot(dec.r_vec, ket_a, axes=(0, 0))
    bob = np.tensordot(dec.s_vec, ket_b, axes=(0, 0))
    four = (
        np.einsum("ij,kl->ikjl", alice, eye)
        + np.einsum("ij,kl->ikjl", eye, bob)
        + np.einsum("mn,nij,mkl->ikjl", dec.t_mat, ket_a, ket_b)
    ) / (d * d)
    return four.reshape(d * d, d * d)


def t_trace_norm(dec: HSDecomposition) -> float:
    """Trace norm of the correlation matrix T."""
    return trace_norm(dec.t_mat)


def _local_frames(dec: HSDecomposition) -> tuple[np.ndarray, np.ndarray]:
    """Orthonormal vectorised operator frames (W_a, W_b), identity column first."""
    d = dec.dim
    _, _, ket_a, ket_b = _basis_stacks(d, dec.basis)
    eye = np.eye(d, dtype=np.complex128).reshape(1, d, d)
    w_a = np.concatenate([eye, ket_a]).reshape(d * d, d * d).T / np.sqrt(d)
    w_b = np.concatenate([eye, ket_b]).reshape(d * d, d * d).T / np.sqrt(d)
    return w_a, w_b


def realigned_from_decomposition(dec: HSDecomposition) -> RealignedMatrix:
    """Realigned matrix built from (r, s, T) instead of from the state.

    The realignment of a basis product is an outer product of vectorised
    basis elements, so the realigned operator is W_a @ C @ W_b.T with the
    coefficient matrix C assembled below; the result agrees entrywise with
    realigning the reconstructed state.
    """
    d = dec.dim
    k = d * d - 1
    coeff = np.zeros((k + 1, k + 1), dtype=np.complex128)
    coeff[0, 0] = 1.0
    coeff[1:, 0] = dec.r_vec
    coeff[0, 1:] = dec.s_vec
    coeff[1:, 1:] = dec.t_mat.T  # row = Alice index n, column = Bob index m
    coeff /= d
    w_a, w_b = _local_frames(dec)
    aligned = w_a @ coeff @ w_b.T
    sv = np.linalg.svd(aligned, compute_uv=False)
    return RealignedMatrix(d, d, aligned, sv)


def realigned_operator_basis(dec: HSDecomposition) -> np.ndarray:
    """Matrix of the realigned operator in the orthonormal local operator bases.

    Entry (a, b) is <e_a| A |e_b> with e_0 = |identity>/sqrt(d) followed by
    the traceless basis; unitarily equivalent to the canonical realigned
    matrix, hence with identical singular values.
    """
    w_a, w_b = _local_frames(dec)
    aligned = realigned_from_decomposition(dec).mat
    return w_a.conj().T @ aligned @ w_b
