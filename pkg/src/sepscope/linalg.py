"""Dense complex linear algebra for bipartite operators.

Index convention (fixed package-wide)
-------------------------------------
An operator on C^dA (x) C^dB is a (dA*dB, dA*dB) complex array.  The
composite basis vector |i>(x)|k> sits at row i*dB + k (0-based): the
first factor is the slowest index.  Matrix elements therefore read

    rho[i*dB + k, j*dB + l] = <ik| rho |jl>

Every downstream formula (realignment, partial transpose, Hilbert-Schmidt
decompositions) relies on this convention; do not reorder.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

TOL_HERM = 1e-12   # max-abs deviation from Hermiticity
TOL_TRACE = 1e-12  # |tr(rho) - 1|
TOL_PSD = 1e-10    # admissible negativity of the smallest eigenvalue


class DimensionError(ValueError):
    """Shapes or declared subsystem dimensions are inconsistent."""


class InvariantError(ValueError):
    """A structural invariant (Hermiticity, trace, positivity, ...) fails."""


class NumericError(RuntimeError):
    """A numerical routine (SVD, eigensolver) failed to converge."""


def as_matrix(m) -> np.ndarray:
    """Coerce to a 2-D complex array with finite entries."""
    a = np.asarray(m, dtype=np.complex128)
    if a.ndim != 2:
        raise DimensionError(f"expected a 2-D matrix, got ndim={a.ndim}")
    if not (np.all(np.isfinite(a.real)) and np.all(np.isfinite(a.imag))):
        raise InvariantError("matrix contains NaN or Inf entries")
    return a


def hermiticity_defect(m: np.ndarray) -> float:
    """Max-abs deviation of m from its conjugate transpose."""
    return float(np.max(np.abs(m - m.conj().T))) if m.size else 0.0


def hs_inner(a, b) -> complex:
    """Hilbert-Schmidt inner product tr(a^dag b); conjugate-linear in a."""
    a = as_matrix(a)
    b = as_matrix(b)
    if a.shape != b.shape:
        raise DimensionError(f"shape mismatch: {a.shape} vs {b.shape}")
    return complex(np.vdot(a, b))


def frobenius_norm(m) -> float:
    """Hilbert-Schmidt norm sqrt(tr(m^dag m))."""
    return float(np.linalg.norm(as_matrix(m)))


def trace_norm(m) -> float:
    """Sum of singular values of m."""
    m = as_matrix(m)
    try:
        return float(np.linalg.svd(m, compute_uv=False).sum())
    except np.linalg.LinAlgError as exc:
        raise NumericError(
            f"SVD did not converge for {m.shape[0]}x{m.shape[1]} matrix "
            f"(frobenius norm {np.linalg.norm(m):.3e})"
        ) from exc


def tensor(a, b) -> np.ndarray:
    """Kronecker product with the first argument as the slow index."""
    return np.kron(as_matrix(a), as_matrix(b))


def _mat_and_dims(rho, dims: tuple[int, int] | None) -> tuple[np.ndarray, int, int]:
    """Accept a DensityMatrix/TraceClassOperator or a raw array plus dims."""
    if isinstance(rho, (DensityMatrix, TraceClassOperator)):
        return rho.mat, rho.dim_a, rho.dim_b
    mat = as_matrix(rho)
    if dims is None:
        side = mat.shape[0]
        d = round(np.sqrt(side))
        if mat.shape[0] != mat.shape[1] or d * d != side:
            raise DimensionError(
                "subsystem dimensions are required for a non-square-of-integer matrix"
            )
        return mat, d, d
    dim_a, dim_b = int(dims[0]), int(dims[1])
    if mat.shape != (dim_a * dim_b, dim_a * dim_b):
        raise DimensionError(
            f"matrix shape {mat.shape} does not match dims ({dim_a}, {dim_b})"
        )
    return mat, dim_a, dim_b


def partial_transpose(rho, side: str = "second", dims: tuple[int, int] | None = None) -> np.ndarray:
    """Transpose one tensor factor: <ik|out|jl> = <il|rho|jk> for side='second'."""
    mat, da, db = _mat_and_dims(rho, dims)
    four = mat.reshape(da, db, da, db)
    if side == "second":
        out = four.transpose(0, 3, 2, 1)
    elif side == "first":
        out = four.transpose(2, 1, 0, 3)
    else:
        raise ValueError(f"side must be 'first' or 'second', got {side!r}")
    return out.reshape(da * db, da * db)


def partial_trace(rho, side: str = "second", dims: tuple[int, int] | None = None) -> np.ndarray:
    """Trace out one factor; side names the subsystem that is removed."""
    mat, da, db = _mat_and_dims(rho, dims)
    four = mat.reshape(da, db, da, db)
    if side == "second":
        return np.trace(four, axis1=1, axis2=3)
    if side == "first":
        return np.trace(four, axis1=0, axis2=2)
    raise ValueError(f"side must be 'first' or 'second', got {side!r}")


def trace_out(mat, dims: Sequence[int], which: Iterable[int]) -> np.ndarray:
    """Trace out the listed tensor factors of a multi-factor operator.

    dims lists every factor dimension in order; which gives 0-based factor
    indices to remove.  The kept factors stay in their original order.
    """
    mat = as_matrix(mat)
    dims = [int(d) for d in dims]
    n = len(dims)
    side = int(np.prod(dims))
    if mat.shape != (side, side):
        raise DimensionError(f"matrix shape {mat.shape} does not match dims {dims}")
    which = sorted(set(int(i) for i in which))
    if which and (which[0] < 0 or which[-1] >= n):
        raise DimensionError(f"factor index out of range for {n} factors: {which}")
    out = mat.reshape(dims + dims)
    remaining = list(dims)
    for idx in reversed(which):
        out = np.trace(out, axis1=idx, axis2=idx + len(remaining))
        del remaining[idx]
    kept = int(np.prod(remaining)) if remaining else 1
    return out.reshape(kept, kept)


def permute_subsystems(m, dims: Sequence[int], perm: Sequence[int]) -> np.ndarray:
    """Conjugate an operator by the permutation that reorders its factors.

    Output factor p is input factor perm[p]; trace and spectrum are preserved.
    """
    mat = as_matrix(m)
    dims = [int(d) for d in dims]
    n = len(dims)
    side = int(np.prod(dims))
    if mat.shape != (side, side):
        raise DimensionError(f"matrix shape {mat.shape} does not match dims {dims}")
    perm = [int(p) for p in perm]
    if sorted(perm) != list(range(n)):
        raise DimensionError(f"perm {perm} is not a permutation of 0..{n - 1}")
    axes = perm + [p + n for p in perm]
    return mat.reshape(dims + dims).transpose(axes).reshape(side, side)


def _frozen_copy(mat: np.ndarray) -> np.ndarray:
    out = np.array(mat, dtype=np.complex128)
    out.flags.writeable = False
    return out


@dataclass(frozen=True)
class DensityMatrix:
    """Unit-trace Hermitian PSD operator with declared bipartite dimensions."""

    dim_a: int
    dim_b: int
    mat: np.ndarray

    def __post_init__(self):
        if self.dim_a < 1 or self.dim_b < 1:
            raise DimensionError("subsystem dimensions must be positive")
        mat = as_matrix(self.mat)
        side = self.dim_a * self.dim_b
        if mat.shape != (side, side):
            raise DimensionError(
                f"matrix shape {mat.shape} does not match dims ({self.dim_a}, {self.dim_b})"
            )
        defect = hermiticity_defect(mat)
        if defect > TOL_HERM:
            raise InvariantError(f"not Hermitian: max deviation {defect:.3e} > {TOL_HERM}")
        tr = complex(np.trace(mat))
        if abs(tr - 1.0) > TOL_TRACE:
            raise InvariantError(f"trace is {tr:.15g}, not 1 within {TOL_TRACE}")
        min_eig = float(np.linalg.eigvalsh(mat)[0])
        if min_eig < -TOL_PSD:
            raise InvariantError(
                f"not positive semidefinite: min eigenvalue {min_eig:.3e} < -{TOL_PSD}"
            )
        object.__setattr__(self, "mat", _frozen_copy(mat))

    @property
    def dim(self) -> int:
        """Common local dimension; defined only for square bipartitions."""
        if self.dim_a != self.dim_b:
            raise DimensionError(
                f"state is {self.dim_a}x{self.dim_b}; no common local dimension"
            )
        return self.dim_a


@dataclass(frozen=True)
class TraceClassOperator:
    """Arbitrary finite operator with declared bipartite dimensions.

    Same storage as DensityMatrix but only squareness and finiteness are
    enforced; used where Hermiticity/positivity/normalisation are not assumed.
    """

    dim_a: int
    dim_b: int
    mat: np.ndarray

    def __post_init__(self):
        if self.dim_a < 1 or self.dim_b < 1:
            raise DimensionError("subsystem dimensions must be positive")
        mat = as_matrix(self.mat)
        side = self.dim_a * self.dim_b
        if mat.shape != (side, side):
            raise DimensionError(
                f"matrix shape {mat.shape} does not match dims ({self.dim_a}, {self.dim_b})"
            )
        object.__setattr__(self, "mat", _frozen_copy(mat))
