"""The realignment map and the computable cross norm (CCN).

Realignment reshuffles the entries of a bipartite operator: with
rho[i*dB + k, j*dB + l] = <ik|rho|jl>, the realigned matrix is

    realigned[i*dA + j, k*dB + l] = <ik|rho|jl>

i.e. rows are labelled by Alice index pairs (i, j) and columns by Bob
pairs (k, l).  Equivalently, row (i, j) is the row-major flattening of
the (i, j) block of rho.  Worked 2x2 table (blocks are 2x2):

    rho = [[B00, B01],      realigned = [ vec(B00) ]
           [B10, B11]]                  [ vec(B01) ]
                                        [ vec(B10) ]
                                        [ vec(B11) ]

so for instance realigned[1, 2] = B01[1, 0] = rho[1, 2].  The map is a
bijective entry permutation, hence Frobenius-norm preserving.  The CCN
value is the trace norm of the realigned matrix; for a separable state
it cannot exceed 1, so a value above 1 certifies entanglement (the
converse fails -- the criterion is one-sided).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .linalg import (
    DensityMatrix,
    DimensionError,
    NumericError,
    _frozen_copy,
    _mat_and_dims,
)

TOL_DETECT = 1e-9  # margin above 1 before the entanglement flag trips


@dataclass(frozen=True)
class RealignedMatrix:
    """A realigned bipartite operator together with its singular values."""

    dim_a: int
    dim_b: int
    mat: np.ndarray               # shape (dim_a**2, dim_b**2)
    singular_values: np.ndarray   # nonincreasing, length min(dim_a**2, dim_b**2)

    def __post_init__(self):
        object.__setattr__(self, "mat", _frozen_copy(self.mat))
        sv = np.asarray(self.singular_values, dtype=np.float64)
        sv.flags.writeable = False
        object.__setattr__(self, "singular_values", sv)

    @property
    def trace_norm(self) -> float:
        return float(self.singular_values.sum())


def realign(rho, dims: tuple[int, int] | None = None) -> RealignedMatrix:
    """Realign a bipartite operator; accepts wrapped or raw matrices."""
    mat, da, db = _mat_and_dims(rho, dims)
    if mat.shape[0] != mat.shape[1]:
        raise DimensionError("realignment input must be square")
    aligned = mat.reshape(da, db, da, db).transpose(0, 2, 1, 3).reshape(da * da, db * db)
    try:
        sv = np.linalg.svd(aligned, compute_uv=False)
    except np.linalg.LinAlgError as exc:
        raise NumericError(
            f"SVD did not converge while realigning a {da}x{db} bipartite operator"
        ) from exc
    return RealignedMatrix(da, db, aligned, sv)


def ccn_value(rho, dims: tuple[int, int] | None = None) -> float:
    """Trace norm of the realigned operator (the CCN value tau)."""
    return realign(rho, dims).trace_norm


class CcnVerdict(NamedTuple):
    entangled: bool
    margin: float  # tau - 1, reported whether or not the flag trips


def ccn_entangled(rho: DensityMatrix) -> CcnVerdict:
    """Flag a state as entangled when tau exceeds 1.

    A True flag is a certificate; False only means the test is inconclusive.
    """
    tau = ccn_value(rho)
    return CcnVerdict(tau > 1.0 + TOL_DETECT, tau - 1.0)
