"""Entanglement criteria: PPT, CCN, fidelity bounds, and their closed forms.

The fidelity f of a state is its maximal overlap with a maximally
entangled pure state.  Three quantities sandwich it:

    tr(A(rho))/d  <=  f(rho)  <=  ||A(rho)||_1 / d

with A the realignment map.  The lower end equals <psi+|rho|psi+> exactly;
the middle is estimated by a monotone ascent over local unitaries and is
always reported as a certified lower bound, never as the global optimum.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import NamedTuple

import numpy as np

from .hsbasis import PAULI, HSDecomposition, decompose, t_trace_norm
from .linalg import (
    DensityMatrix,
    DimensionError,
    NumericError,
    TraceClassOperator,
    hermiticity_defect,
    partial_transpose,
    permute_subsystems,
    tensor,
    trace_out,
)
from .realign import ccn_value, realign
from .states import psi_plus

TOL_FLAG = 1e-9        # criterion flags trip only this far above 1
TOL_DISORDERED = 1e-10  # max allowed Bloch-vector norm for "maximally disordered"


class PptResult(NamedTuple):
    min_eig: float
    trace_norm: float
    violated: bool


def ppt_criterion(rho: DensityMatrix) -> PptResult:
    """Evaluate the partial-transpose test in both spectral and norm form.

    A trace norm above 1 (equivalently a negative eigenvalue) certifies
    entanglement.
    """
    pt = partial_transpose(rho, "second")
    eigs = np.linalg.eigvalsh(pt)
    tn = float(np.abs(eigs).sum())
    return PptResult(float(eigs[0]), tn, tn > 1.0 + TOL_FLAG)


def realigned_trace(op) -> complex:
    """Trace of the realigned operator (requires equal local dimensions)."""
    if isinstance(op, (DensityMatrix, TraceClassOperator)) and op.dim_a != op.dim_b:
        raise DimensionError("realigned trace requires equal local dimensions")
    return complex(np.trace(realign(op).mat))


def fidelity_lower(rho: DensityMatrix) -> float:
    """Fidelity lower bound tr(A(rho))/d = <psi+|rho|psi+>.

    Both sides are computed and compared as a self-check before returning.
    """
    if rho.dim_a != rho.dim_b:
        raise DimensionError("fidelity is defined for equal local dimensions only")
    d = rho.dim_a
    via_trace = realigned_trace(rho) / d
    psi = psi_plus(d)
    via_overlap = complex(psi.conj() @ rho.mat @ psi)
    if abs(via_trace - via_overlap) > 1e-12:
        raise NumericError(
            f"realigned-trace/overlap mismatch: {via_trace} vs {via_overlap}"
        )
    return float(via_overlap.real)


class FidelityResult(NamedTuple):
    value: float
    unitary: np.ndarray
    converged: bool


def _fidelity_objective(four: np.ndarray, d: int, u: np.ndarray) -> float:
    return float(np.einsum("ki,ikjl,lj->", u.conj(), four, u).real) / d


def _ascend(four: np.ndarray, d: int, u: np.ndarray, tol: float, max_iter: int):
    """Monotone fixed-point ascent of <psi_U|rho|psi_U> for PSD rho.

    Each step replaces U by the polar factor of the gradient, which cannot
    decrease the objective; stops when the gain drops below tol.
    """
    value = _fidelity_objective(four, d, u)
    for _ in range(max_iter):
        grad = np.einsum("ikjl,lj->ki", four, u) / d
        if np.linalg.norm(grad) < 1e-300:
            return value, u, True
        w, _, vh = np.linalg.svd(grad)
        u_next = w @ vh
        nxt = _fidelity_objective(four, d, u_next)
        if nxt < value:  # only reachable through rounding noise
            return value, u, True
        gain = nxt - value
        value, u = nxt, u_next
        if gain <= tol:
            return value, u, True
    return value, u, False


def _haar_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    phases = np.diagonal(r).copy()
    phases /= np.abs(phases)
    return q * phases


def fidelity_optimize(
    rho,
    restarts: int = 16,
    tol: float = 1e-10,
    max_iter: int = 2000,
    seed: int = 0,
) -> FidelityResult:
    """Best found overlap with a maximally entangled state (I (x) U)|psi+>.

    Restart 0 starts from the identity (so the result is never below the
    realigned-trace lower bound); further restarts draw Haar-random seeds.
    The returned value is a certified lower bound on the fidelity, and the
    returned unitary reproduces it.  Restarts are merged deterministically
    (first restart wins ties), so results are reproducible for fixed seed.

    For a non-PSD trace-class operator the fidelity is max |<psi|op|psi>|;
    the ascent then runs on shifted Hermitian combinations over a phase
    grid and reports the best modulus found.
    """
    if restarts < 1:
        raise ValueError(f"restarts must be >= 1, got {restarts}")
    if isinstance(rho, DensityMatrix):
        if rho.dim_a != rho.dim_b:
            raise DimensionError("fidelity is defined for equal local dimensions only")
        d, mat = rho.dim_a, rho.mat
        return _optimize_psd(mat, d, restarts, tol, max_iter, seed)
    if isinstance(rho, TraceClassOperator):
        if rho.dim_a != rho.dim_b:
            raise DimensionError("fidelity is defined for equal local dimensions only")
        return _optimize_trace_class(rho.mat, rho.dim_a, restarts, tol, max_iter, seed)
    raise TypeError("expected a DensityMatrix or TraceClassOperator")


def _optimize_psd(mat, d, restarts, tol, max_iter, seed) -> FidelityResult:
    four = mat.reshape(d, d, d, d)
    rng = np.random.default_rng(seed)
    best = None
    for trial in range(restarts):
        u0 = np.eye(d, dtype=np.complex128) if trial == 0 else _haar_unitary(d, rng)
        value, u, conv = _ascend(four, d, u0, tol, max_iter)
        if best is None or value > best[0]:
            best = (value, u, conv)
    return FidelityResult(best[0], best[1], best[2])


def _optimize_trace_class(mat, d, restarts, tol, max_iter, seed) -> FidelityResult:
    herm = (mat + mat.conj().T) / 2.0
    skew = (mat - mat.conj().T) / 2.0j
    hermitian_input = np.linalg.norm(skew) <= 1e-13 * max(1.0, np.linalg.norm(herm))
    phases = (0.0, np.pi) if hermitian_input else tuple(2 * np.pi * k / 24 for k in range(24))
    rng = np.random.default_rng(seed)
    four_full = mat.reshape(d, d, d, d)
    best = None
    for theta in phases:
        combo = np.cos(theta) * herm + np.sin(theta) * skew
        shift = max(0.0, -float(np.linalg.eigvalsh(combo)[0]))
        four = (combo + shift * np.eye(d * d)).reshape(d, d, d, d)
        for trial in range(restarts):
            u0 = np.eye(d, dtype=np.complex128) if trial == 0 else _haar_unitary(d, rng)
            _, u, conv = _ascend(four, d, u0, tol, max_iter)
            overlap = abs(np.einsum("ki,ikjl,lj->", u.conj(), four_full, u)) / d
            if best is None or overlap > best[0]:
                best = (float(overlap), u, conv)
    return FidelityResult(best[0], best[1], best[2])


# the maximally entangled state compensating a given diagonal-correlation
# signature; valid signatures have an odd number of negative entries
_SIGNATURE_UNITARIES = {
    (-1, -1, -1): np.array([[0, 1j], [-1j, 0]], dtype=np.complex128),
    (1, 1, -1): np.array([[0, 1], [1, 0]], dtype=np.complex128),
    (1, -1, 1): np.eye(2, dtype=np.complex128),
    (-1, 1, 1): np.array([[1, 0], [0, -1]], dtype=np.complex128),
}


def fidelity_two_qubit_max_disordered(dec: HSDecomposition, entangled_hint: bool) -> float:
    """Closed-form fidelity of an entangled two-qubit state with zero Bloch
    vectors and diagonal correlation matrix.

    Picks the compensating unitary for the sign pattern of diag(T) and
    evaluates f = 1/4 + sum_n t_n tr(sigma_n^T U sigma_n U^dag)/8, which
    equals tau/2 for entangled inputs.  Refuses separable inputs: there the
    sign pattern need not be compensable and the closed form can exceed the
    true fidelity.
    """
    if dec.dim != 2 or dec.basis != "pauli":
        raise ValueError("closed form requires a two-qubit pauli decomposition")
    if max(np.max(np.abs(dec.r_vec)), np.max(np.abs(dec.s_vec))) > TOL_DISORDERED:
        raise ValueError("state is not maximally disordered (nonzero Bloch vector)")
    t = dec.t_mat
    off = t - np.diag(np.diagonal(t))
    if np.max(np.abs(off)) > 1e-12:
        raise ValueError("correlation matrix is not diagonal; rotate the state first")
    if np.max(np.abs(np.diagonal(t).imag)) > 1e-12:
        raise ValueError("correlation matrix has non-real diagonal")
    if not entangled_hint:
        raise ValueError("closed form is only valid for entangled states")
    t_diag = np.diagonal(t).real
    signature = tuple(1 if v >= 0 else -1 for v in t_diag)
    if signature.count(-1) % 2 == 0:
        raise ValueError(
            f"signature {signature} has an even number of negative entries; "
            "no entangled maximally disordered state matches it"
        )
    u = _SIGNATURE_UNITARIES[signature]
    total = 0.25
    for t_n, sigma in zip(t_diag, PAULI):
        total += t_n * np.trace(sigma.T @ u @ sigma @ u.conj().T).real / 8.0
    return float(total)


def ccn_max_disordered(dec: HSDecomposition) -> float:
    """CCN value (1 + ||T||_1)/d for states with maximally mixed reductions."""
    if max(np.max(np.abs(dec.r_vec)), np.max(np.abs(dec.s_vec))) > TOL_DISORDERED:
        raise ValueError("state is not maximally disordered (nonzero Bloch vector)")
    return (1.0 + t_trace_norm(dec)) / dec.dim


@dataclass(frozen=True)
class FactorizedState:
    """A state with declared local tensor factorisations on each side.

    The underlying matrix is laid out with all Alice factors before all
    Bob factors, each block in the declared order.
    """

    state: DensityMatrix
    alice_factors: tuple[int, ...]
    bob_factors: tuple[int, ...]

    def __post_init__(self):
        alice = tuple(int(d) for d in self.alice_factors)
        bob = tuple(int(d) for d in self.bob_factors)
        object.__setattr__(self, "alice_factors", alice)
        object.__setattr__(self, "bob_factors", bob)
        if not alice or not bob:
            raise DimensionError("each side needs at least one factor")
        if min(alice + bob) < 1:
            raise DimensionError("factor dimensions must be positive")
        if int(np.prod(alice)) != self.state.dim_a or int(np.prod(bob)) != self.state.dim_b:
            raise DimensionError(
                f"factors {alice} x {bob} do not multiply to the state dims "
                f"({self.state.dim_a}, {self.state.dim_b})"
            )

    @property
    def factor_dims(self) -> tuple[int, ...]:
        return self.alice_factors + self.bob_factors


def single_factor(state: DensityMatrix) -> FactorizedState:
    """Wrap a state with the trivial one-factor-per-side factorisation."""
    return FactorizedState(state, (state.dim_a,), (state.dim_b,))


def tensor_pair(rho1: DensityMatrix, rho2: DensityMatrix) -> FactorizedState:
    """Product of two bipartite states, regrouped to (A1 A2 | B1 B2)."""
    mat = tensor(rho1.mat, rho2.mat)  # factor order (A1, B1, A2, B2)
    dims = [rho1.dim_a, rho1.dim_b, rho2.dim_a, rho2.dim_b]
    regrouped = permute_subsystems(mat, dims, (0, 2, 1, 3))
    state = DensityMatrix(rho1.dim_a * rho2.dim_a, rho1.dim_b * rho2.dim_b, regrouped)
    return FactorizedState(state, (rho1.dim_a, rho2.dim_a), (rho1.dim_b, rho2.dim_b))


class ExtendedCcnResult(NamedTuple):
    value: float
    traced_alice: tuple[int, ...]
    traced_bob: tuple[int, ...]


def extended_ccn(fs: FactorizedState) -> ExtendedCcnResult:
    """CCN value maximised over local trace-outs of declared tensor factors.

    Every pair of proper factor subsets (one per side, possibly empty) is
    removed in turn; at least one factor must survive on each side so the
    reduction stays bipartite.  The empty pair reproduces the plain CCN
    value, so the result is never smaller.  Ties keep the earliest
    (smallest) subset pair in enumeration order.
    """
    n_a, n_b = len(fs.alice_factors), len(fs.bob_factors)
    dims = list(fs.factor_dims)
    best: ExtendedCcnResult | None = None
    for mask_a in range(2**n_a - 1):
        for mask_b in range(2**n_b - 1):
            traced_a = tuple(i for i in range(n_a) if mask_a >> i & 1)
            traced_b = tuple(i for i in range(n_b) if mask_b >> i & 1)
            traced = list(traced_a) + [n_a + i for i in traced_b]
            reduced = trace_out(fs.state.mat, dims, traced)
            kept_a = int(np.prod([d for i, d in enumerate(fs.alice_factors) if i not in traced_a]))
            kept_b = int(np.prod([d for i, d in enumerate(fs.bob_factors) if i not in traced_b]))
            value = ccn_value(reduced, dims=(kept_a, kept_b))
            if best is None or value > best.value:
                best = ExtendedCcnResult(value, traced_a, traced_b)
    return best


@dataclass(frozen=True)
class CriterionReport:
    """Every computed scalar and flag for one analysed state."""

    dim_a: int
    dim_b: int
    tau: float
    ppt_min_eig: float
    ppt_trace_norm: float
    realigned_trace: float | None
    fidelity_lower: float | None
    fidelity_best: float | None
    fidelity_upper: float | None
    fidelity_converged: bool | None
    ccn_flag: bool
    ppt_flag: bool
    distillable_flag: bool
    max_disordered: bool | None
    t_psd: bool | None
    notes: tuple[str, ...]


def distillable_by_fidelity(report: CriterionReport) -> bool:
    """One-sided distillability certificate.

    True when the realigned trace exceeds 1, or when a maximally disordered
    state with PSD correlation matrix violates the CCN bound.  False means
    "not certified", never "not distillable".
    """
    if report.realigned_trace is not None and report.realigned_trace > 1.0 + TOL_FLAG:
        return True
    if report.max_disordered and report.t_psd and report.tau > 1.0 + TOL_FLAG:
        return True
    return False


def _schmidt_tau(rho: DensityMatrix) -> float:
    """tau of a pure state from its Schmidt spectrum, (sum_i sqrt(a_i))^2."""
    _, vecs = np.linalg.eigh(rho.mat)
    amp = vecs[:, -1].reshape(rho.dim_a, rho.dim_b)
    sv = np.linalg.svd(amp, compute_uv=False)
    return float(sv.sum() ** 2)


def full_report(rho: DensityMatrix, restarts: int = 16, seed: int = 0) -> CriterionReport:
    """Run every criterion on one state and collect the results."""
    tau = ccn_value(rho)
    ppt = ppt_criterion(rho)
    square = rho.dim_a == rho.dim_b
    notes: list[str] = []

    tr_a = fid_low = fid_best = fid_up = None
    fid_conv = None
    max_dis = t_psd = None
    if square:
        d = rho.dim_a
        fid_low = fidelity_lower(rho)
        tr_a = d * fid_low
        opt = fidelity_optimize(rho, restarts=restarts, seed=seed)
        fid_best, fid_conv = opt.value, opt.converged
        fid_up = tau / d
        dec = decompose(rho)
        max_dis = bool(
            max(np.max(np.abs(dec.r_vec)), np.max(np.abs(dec.s_vec))) <= TOL_DISORDERED
        )
        # positivity of the correlation matrix is meaningful in the conjugated
        # (spin-basis) convention, where T >= 0 iff the realigned operator is PSD
        dec_spin = dec if dec.basis == "spin" else decompose(rho, basis="spin")
        t_spin = dec_spin.t_mat
        t_psd = bool(
            hermiticity_defect(t_spin) <= 1e-10
            and float(np.linalg.eigvalsh((t_spin + t_spin.conj().T) / 2)[0]) >= -1e-10
        )
        if max_dis:
            notes.append(
                f"maximally disordered subsystems: tau = (1 + ||T||_1)/d = "
                f"{ccn_max_disordered(dec):.12g}"
            )
        purity = float(np.trace(rho.mat @ rho.mat).real)
        if purity >= 1.0 - 1e-10:
            notes.append(f"pure state: tau = (sum sqrt Schmidt)^2 = {_schmidt_tau(rho):.12g}")
        proj = np.outer(psi_plus(d), psi_plus(d).conj())
        iso = fid_low * proj + (1 - fid_low) * (np.eye(d * d) - proj) / (d * d - 1)
        if np.max(np.abs(iso - rho.mat)) <= 1e-10:
            notes.append(f"isotropic state with fidelity F = {fid_low:.12g}")
    else:
        notes.append("unequal local dimensions: fidelity bounds not defined")

    report = CriterionReport(
        dim_a=rho.dim_a,
        dim_b=rho.dim_b,
        tau=tau,
        ppt_min_eig=ppt.min_eig,
        ppt_trace_norm=ppt.trace_norm,
        realigned_trace=tr_a,
        fidelity_lower=fid_low,
        fidelity_best=fid_best,
        fidelity_upper=fid_up,
        fidelity_converged=fid_conv,
        ccn_flag=tau > 1.0 + TOL_FLAG,
        ppt_flag=ppt.violated,
        distillable_flag=False,
        max_disordered=max_dis,
        t_psd=t_psd,
        notes=tuple(notes),
    )
    return replace(report, distillable_flag=distillable_by_fidelity(report))
