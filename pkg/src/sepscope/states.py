"""Constructors for the state families used by the criteria, plus their
closed-form spectra and thresholds.

Families and their textual forms (the CLI grammar is ``name:key=value,...``
with ``;`` separating vector-valued groups):

    counterexample:s=0.5,r=0.25,t=0.0625   two-qubit PPT-vs-CCN demonstrator
    werner:d=2,p=0.4                       antisymmetric-projector mixture
    isotropic:d=3,F=0.5                    maximally-entangled-state mixture
    belldiag:p=0.6,0.2,0.1,0.1             Bell basis mixture (phi+,phi-,psi+,psi-)
    pure:a=0.7,0.3                         pure state with given Schmidt coefficients
    rhop:a=0.7,0.3;p=0.5                   pure state mixed with white noise
    maxdis:t=0.5,-0.5,0.5                  two-qubit diagonal-correlation state
    random:da=3,db=3,rank=9,seed=42        seeded Wishart-type random state
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from typing import NamedTuple, Union

import numpy as np

from .hsbasis import PAULI, spin_basis
from .linalg import DensityMatrix, tensor

__all__ = [
    "Werner",
    "Isotropic",
    "BellDiagonal",
    "PureSchmidt",
    "RhoP",
    "Counterexample",
    "CounterexampleParams",
    "MaxDisordered",
    "RandomState",
    "FamilySpec",
    "make_state",
    "parse_family",
    "format_family",
    "replace_param",
    "scannable_params",
    "counterexample_matrix",
    "counterexample_spectra",
    "CounterexampleSpectra",
    "rho_p_threshold",
    "psi_plus",
    "bell_vectors",
    "swap_operator",
    "random_unitary",
    "random_density_matrix",
    "random_max_disordered",
]


def psi_plus(d: int) -> np.ndarray:
    """Maximally entangled vector sum_i |ii> / sqrt(d)."""
    vec = np.zeros(d * d, dtype=np.complex128)
    vec[:: d + 1] = 1.0 / np.sqrt(d)
    return vec


def bell_vectors() -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """The four Bell vectors in the order (phi+, phi-, psi+, psi-)."""
    s = 1.0 / np.sqrt(2.0)
    phi_p = np.array([s, 0, 0, s], dtype=np.complex128)
    phi_m = np.array([s, 0, 0, -s], dtype=np.complex128)
    psi_p = np.array([0, s, s, 0], dtype=np.complex128)
    psi_m = np.array([0, s, -s, 0], dtype=np.complex128)
    return phi_p, phi_m, psi_p, psi_m


def swap_operator(d: int) -> np.ndarray:
    """The operator exchanging the two d-dimensional factors."""
    out = np.zeros((d * d, d * d), dtype=np.complex128)
    for i in range(d):
        for k in range(d):
            out[i * d + k, k * d + i] = 1.0
    return out


def random_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary via phase-fixed QR of a Ginibre matrix."""
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    phases = np.diagonal(r).copy()
    phases /= np.abs(phases)
    return q * phases


def random_density_matrix(
    dim_a: int, dim_b: int, rank: int | None = None, rng: np.random.Generator | None = None
) -> DensityMatrix:
    """Normalised G G^dag with a complex Gaussian G of the given rank."""
    side = dim_a * dim_b
    if rank is None:
        rank = side
    if not 1 <= rank <= side:
        raise ValueError(f"rank = {rank} outside [1, {side}]")
    if rng is None:
        rng = np.random.default_rng()
    g = rng.standard_normal((side, rank)) + 1j * rng.standard_normal((side, rank))
    mat = g @ g.conj().T
    mat = (mat + mat.conj().T) / 2.0
    mat /= np.trace(mat).real
    return DensityMatrix(dim_a, dim_b, mat)


def random_max_disordered(d: int, rng: np.random.Generator) -> DensityMatrix:
    """Random state whose reductions are both maximally mixed.

    Mixes the d^2 shift-and-phase Bell-type projectors with Dirichlet
    weights, then applies a random local basis change on each side.
    """
    weights = rng.dirichlet(np.ones(d * d))
    mat = np.zeros((d * d, d * d), dtype=np.complex128)
    for w, op in zip(weights, spin_basis(d).matrices):
        vec = op.T.reshape(-1) / np.sqrt(d)  # (I (x) op) acting on |psi+>
        mat += w * np.outer(vec, vec.conj())
    local = tensor(random_unitary(d, rng), random_unitary(d, rng))
    mat = local @ mat @ local.conj().T
    mat = (mat + mat.conj().T) / 2.0
    return DensityMatrix(d, d, mat)


# --- state families ---------------------------------------------------------


@dataclass(frozen=True)
class Werner:
    """p times the normalised antisymmetric projector plus white noise.

    At d = 2 this is p |psi-><psi-| + (1 - p) I/4.
    """

    d: int
    p: float

    def __post_init__(self):
        if self.d < 2:
            raise ValueError(f"werner d = {self.d} violates d >= 2")
        lo = -(self.d - 1) / (self.d + 1)
        if not lo - 1e-12 <= self.p <= 1 + 1e-12:
            raise ValueError(f"werner p = {self.p} outside [{lo:.6g}, 1]")


@dataclass(frozen=True)
class Isotropic:
    """fidelity * |psi+><psi+| plus the normalised orthogonal complement."""

    d: int
    fidelity: float

    def __post_init__(self):
        if self.d < 2:
            raise ValueError(f"isotropic d = {self.d} violates d >= 2")
        if not -1e-12 <= self.fidelity <= 1 + 1e-12:
            raise ValueError(f"isotropic F = {self.fidelity} outside [0, 1]")


@dataclass(frozen=True)
class BellDiagonal:
    """Mixture of the four Bell projectors in the order (phi+, phi-, psi+, psi-)."""

    probs: tuple[float, float, float, float]

    def __post_init__(self):
        probs = tuple(float(p) for p in self.probs)
        object.__setattr__(self, "probs", probs)
        if len(probs) != 4:
            raise ValueError(f"belldiag needs 4 probabilities, got {len(probs)}")
        if min(probs) < -1e-12:
            raise ValueError(f"belldiag probabilities must be >= 0, got {min(probs)}")
        if abs(sum(probs) - 1.0) > 1e-9:
            raise ValueError(f"belldiag probabilities sum to {sum(probs)}, not 1")


@dataclass(frozen=True)
class PureSchmidt:
    """Pure state sum_i sqrt(a_i) |ii> with Schmidt coefficients a."""

    coeffs: tuple[float, ...]

    def __post_init__(self):
        coeffs = tuple(float(a) for a in self.coeffs)
        object.__setattr__(self, "coeffs", coeffs)
        if len(coeffs) < 1:
            raise ValueError("pure state needs at least one Schmidt coefficient")
        if min(coeffs) < -1e-12:
            raise ValueError(f"Schmidt coefficients must be >= 0, got {min(coeffs)}")
        if abs(sum(coeffs) - 1.0) > 1e-9:
            raise ValueError(f"Schmidt coefficients sum to {sum(coeffs)}, not 1")


@dataclass(frozen=True)
class RhoP:
    """p |psi><psi| + (1 - p)/4 I(x)I for a two-qubit pure |psi>."""

    coeffs: tuple[float, float]
    p: float

    def __post_init__(self):
        PureSchmidt(self.coeffs)
        if len(self.coeffs) != 2:
            raise ValueError(f"rhop needs exactly 2 Schmidt coefficients, got {len(self.coeffs)}")
        object.__setattr__(self, "coeffs", tuple(float(a) for a in self.coeffs))
        if not -1.0 / 3.0 - 1e-12 <= self.p <= 1 + 1e-12:
            raise ValueError(f"rhop p = {self.p} outside [-1/3, 1]")


@dataclass(frozen=True)
class Counterexample:
    """Two-qubit family that is entangled for t != 0 yet CCN-invisible for
    small t: (1/4)(I(x)I + s I(x)sz + r sz(x)I + t sx(x)sx - t sy(x)sy
    + (1 + r - s) sz(x)sz) with s > r."""

    s: float
    r: float
    t: float

    def __post_init__(self):
        if not self.s > self.r:
            raise ValueError(f"counterexample requires s > r, got s = {self.s}, r = {self.r}")
        if abs(self.s) > 1 or abs(self.r) > 1:
            raise ValueError(
                f"counterexample requires |s| <= 1 and |r| <= 1, got s = {self.s}, r = {self.r}"
            )
        eigs = counterexample_spectra(self).rho_eigs
        if min(eigs) < -1e-12:
            raise ValueError(
                f"counterexample (s, r, t) = ({self.s}, {self.r}, {self.t}) is not a state: "
                f"min eigenvalue {min(eigs):.3e}"
            )


CounterexampleParams = Counterexample


@dataclass(frozen=True)
class MaxDisordered:
    """Two-qubit state (1/4)(I(x)I + sum_m t_m sigma_m(x)sigma_m)."""

    t_diag: tuple[float, float, float]

    def __post_init__(self):
        t = tuple(float(x) for x in self.t_diag)
        object.__setattr__(self, "t_diag", t)
        if len(t) != 3:
            raise ValueError(f"maxdis needs 3 correlation values, got {len(t)}")
        t1, t2, t3 = t
        eigs = [
            (1 + t1 - t2 + t3) / 4,
            (1 - t1 + t2 + t3) / 4,
            (1 + t1 + t2 - t3) / 4,
            (1 - t1 - t2 - t3) / 4,
        ]
        if min(eigs) < -1e-12:
            raise ValueError(
                f"maxdis t = {t} is not a state: min eigenvalue {min(eigs):.3e}"
            )


@dataclass(frozen=True)
class RandomState:
    """Seeded random state of the given local dimensions and rank."""

    dim_a: int
    dim_b: int
    rank: int | None = None
    seed: int = 0

    def __post_init__(self):
        if self.dim_a < 1 or self.dim_b < 1:
            raise ValueError("random state dimensions must be positive")
        side = self.dim_a * self.dim_b
        rank = side if self.rank is None else self.rank
        if not 1 <= rank <= side:
            raise ValueError(f"random rank = {self.rank} outside [1, {side}]")


FamilySpec = Union[
    Werner,
    Isotropic,
    BellDiagonal,
    PureSchmidt,
    RhoP,
    Counterexample,
    MaxDisordered,
    RandomState,
]


def counterexample_matrix(s: float, r: float, t: float) -> np.ndarray:
    """Canonical-basis matrix of the counterexample family."""
    return 0.5 * np.array(
        [
            [1 + r, 0, 0, t],
            [0, 0, 0, 0],
            [0, 0, s - r, 0],
            [t, 0, 0, 1 - s],
        ],
        dtype=np.complex128,
    )


class CounterexampleSpectra(NamedTuple):
    rho_eigs: tuple[float, float, float, float]
    pt_eigs: tuple[float, float, float, float]
    psi: float
    g: float


def counterexample_spectra(params: Counterexample) -> CounterexampleSpectra:
    """Closed-form spectra of the counterexample state and its partial
    transpose, plus the pieces of its CCN value tau = g + |t|."""
    s, r, t = params.s, params.r, params.t
    root = 0.5 * np.sqrt(t * t + (s + r) ** 2 / 4.0)
    rho_eigs = (
        0.0,
        (s - r) / 2.0,
        0.5 + (r - s) / 4.0 + root,
        0.5 + (r - s) / 4.0 - root,
    )
    pt_root = 0.5 * np.sqrt((s - r) ** 2 / 4.0 + t * t)
    pt_eigs = (
        (1 + r) / 2.0,
        (1 - s) / 2.0,
        (s - r) / 4.0 + pt_root,
        (s - r) / 4.0 - pt_root,
    )
    psi = (1 + r) ** 2 + (s - r) ** 2 + (1 - s) ** 2
    disc = np.sqrt(psi * psi - 4.0 * (1 + r) ** 2 * (1 - s) ** 2)
    lam_hi = (psi + disc) / 8.0
    lam_lo = (psi - disc) / 8.0
    g = float(np.sqrt(lam_hi) + np.sqrt(max(lam_lo, 0.0)))
    return CounterexampleSpectra(rho_eigs, pt_eigs, float(psi), g)


def rho_p_threshold(schmidt: tuple[float, float]) -> float:
    """Largest noise-mixing weight p at which the CCN value stays at most 1:
    1 / (4 sqrt(a1 a2) + 1)."""
    a1, a2 = float(schmidt[0]), float(schmidt[1])
    if a1 < -1e-12 or a2 < -1e-12 or abs(a1 + a2 - 1.0) > 1e-9:
        raise ValueError(f"({a1}, {a2}) is not a point of the probability simplex")
    return 1.0 / (4.0 * np.sqrt(max(a1 * a2, 0.0)) + 1.0)


def _pure_schmidt_vector(coeffs: tuple[float, ...]) -> np.ndarray:
    d = len(coeffs)
    vec = np.zeros(d * d, dtype=np.complex128)
    vec[:: d + 1] = np.sqrt(np.maximum(np.asarray(coeffs, dtype=float), 0.0))
    return vec


def make_state(spec: FamilySpec) -> DensityMatrix:
    """Construct the density matrix described by a family spec."""
    if isinstance(spec, Werner):
        d = spec.d
        eye = np.eye(d * d, dtype=np.complex128)
        anti = (eye - swap_operator(d)) / (d * d - d)
        mat = spec.p * anti + (1 - spec.p) / (d * d) * eye
        return DensityMatrix(d, d, mat)
    if isinstance(spec, Isotropic):
        d = spec.d
        proj = np.outer(psi_plus(d), psi_plus(d).conj())
        rest = (np.eye(d * d, dtype=np.complex128) - proj) / (d * d - 1)
        return DensityMatrix(d, d, spec.fidelity * proj + (1 - spec.fidelity) * rest)
    if isinstance(spec, BellDiagonal):
        mat = np.zeros((4, 4), dtype=np.complex128)
        for p, vec in zip(spec.probs, bell_vectors()):
            mat += p * np.outer(vec, vec.conj())
        return DensityMatrix(2, 2, mat)
    if isinstance(spec, PureSchmidt):
        vec = _pure_schmidt_vector(spec.coeffs)
        d = len(spec.coeffs)
        return DensityMatrix(d, d, np.outer(vec, vec.conj()))
    if isinstance(spec, RhoP):
        vec = _pure_schmidt_vector(spec.coeffs)
        mat = spec.p * np.outer(vec, vec.conj()) + (1 - spec.p) / 4.0 * np.eye(4)
        return DensityMatrix(2, 2, mat)
    if isinstance(spec, Counterexample):
        return DensityMatrix(2, 2, counterexample_matrix(spec.s, spec.r, spec.t))
    if isinstance(spec, MaxDisordered):
        mat = np.eye(4, dtype=np.complex128)
        for t_m, sigma in zip(spec.t_diag, PAULI):
            mat += t_m * tensor(sigma, sigma)
        return DensityMatrix(2, 2, mat / 4.0)
    if isinstance(spec, RandomState):
        rng = np.random.default_rng(spec.seed)
        return random_density_matrix(spec.dim_a, spec.dim_b, spec.rank, rng)
    raise TypeError(f"unknown family spec {spec!r}")


# --- textual family grammar -------------------------------------------------

# name -> (class, {textual key -> (field, kind)}); kind is int, float or tuple
_REGISTRY: dict[str, tuple[type, dict[str, tuple[str, object]]]] = {
    "counterexample": (Counterexample, {"s": ("s", float), "r": ("r", float), "t": ("t", float)}),
    "werner": (Werner, {"d": ("d", int), "p": ("p", float)}),
    "isotropic": (Isotropic, {"d": ("d", int), "F": ("fidelity", float)}),
    "belldiag": (BellDiagonal, {"p": ("probs", tuple)}),
    "pure": (PureSchmidt, {"a": ("coeffs", tuple)}),
    "rhop": (RhoP, {"a": ("coeffs", tuple), "p": ("p", float)}),
    "maxdis": (MaxDisordered, {"t": ("t_diag", tuple)}),
    "random": (
        RandomState,
        {"da": ("dim_a", int), "db": ("dim_b", int), "rank": ("rank", int), "seed": ("seed", int)},
    ),
}

_CLASS_TO_NAME = {cls: name for name, (cls, _) in _REGISTRY.items()}


def _coerce(name: str, key: str, values: list[str], kind) -> object:
    try:
        floats = [float(v) for v in values]
    except ValueError as exc:
        raise ValueError(f"{name}: value for '{key}' is not numeric: {values}") from exc
    if kind is tuple:
        return tuple(floats)
    if len(floats) != 1:
        raise ValueError(f"{name}: '{key}' expects a single value, got {len(floats)}")
    if kind is int:
        if floats[0] != int(floats[0]):
            raise ValueError(f"{name}: '{key}' must be an integer, got {floats[0]}")
        return int(floats[0])
    return floats[0]


def parse_family(text: str) -> FamilySpec:
    """Parse the ``name:key=value,...`` textual form into a family spec."""
    head, sep, rest = text.strip().partition(":")
    name = head.strip().lower()
    if name not in _REGISTRY:
        known = ", ".join(sorted(_REGISTRY))
        raise ValueError(f"unknown family '{name}' (known: {known})")
    cls, keys = _REGISTRY[name]
    raw: dict[str, list[str]] = {}
    current: str | None = None
    if sep and rest.strip():
        for group in rest.split(";"):
            current = None
            for token in group.split(","):
                token = token.strip()
                if not token:
                    continue
                if "=" in token:
                    current, first = (part.strip() for part in token.split("=", 1))
                    if current in raw:
                        raise ValueError(f"{name}: duplicate key '{current}'")
                    raw[current] = [first]
                elif current is None:
                    raise ValueError(f"{name}: stray value '{token}' before any key")
                else:
                    raw[current].append(token)
    kwargs = {}
    for key, values in raw.items():
        if key not in keys:
            known = ", ".join(keys)
            raise ValueError(f"{name}: unknown key '{key}' (expects: {known})")
        field, kind = keys[key]
        kwargs[field] = _coerce(name, key, values, kind)
    missing = [key for key, (field, _) in keys.items() if field not in kwargs and not _has_default(cls, field)]
    if missing:
        raise ValueError(f"{name}: missing required key(s): {', '.join(missing)}")
    return cls(**kwargs)


def _has_default(cls, field: str) -> bool:
    for f in dataclasses.fields(cls):
        if f.name == field:
            return f.default is not dataclasses.MISSING or f.default_factory is not dataclasses.MISSING
    return False


def format_family(spec: FamilySpec) -> str:
    """Canonical textual form of a family spec (inverse of parse_family)."""
    name = _CLASS_TO_NAME[type(spec)]
    _, keys = _REGISTRY[name]
    groups = []
    for key, (field, kind) in keys.items():
        value = getattr(spec, field)
        if value is None:
            continue
        if kind is tuple:
            groups.append(f"{key}=" + ",".join(repr(float(v)) for v in value))
        elif kind is int:
            groups.append(f"{key}={int(value)}")
        else:
            groups.append(f"{key}={float(value)!r}")
    return name + ":" + ";".join(groups)


def scannable_params(spec: FamilySpec) -> dict[str, str]:
    """Scalar textual keys of a family, mapped to their field names."""
    name = _CLASS_TO_NAME[type(spec)]
    _, keys = _REGISTRY[name]
    return {key: field for key, (field, kind) in keys.items() if kind in (int, float)}


def replace_param(spec: FamilySpec, key: str, value: float) -> FamilySpec:
    """Return a copy of a family spec with one scalar parameter replaced."""
    params = scannable_params(spec)
    if key not in params:
        name = _CLASS_TO_NAME[type(spec)]
        raise ValueError(f"{name}: no scalar parameter '{key}' (have: {', '.join(params)})")
    field = params[key]
    _, keys = _REGISTRY[_CLASS_TO_NAME[type(spec)]]
    kind = keys[key][1]
    if kind is int:
        if float(value) != int(value):
            raise ValueError(f"parameter '{key}' must be an integer, got {value}")
        value = int(value)
    return dataclasses.replace(spec, **{field: value})
