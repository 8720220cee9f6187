"""Functional observables: real-valued functions on the unit sphere of states.

A functional observable generalizes the expectation value of a Hermitian
operator.  The quadratic kind is exactly that expectation; the power kind,
(<psi|P|psi>)^k, is the minimal ray-invariant non-quadratic family and, for a
projector P, doubles as a counting observable with values in [0, 1].
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .hilbert import TOL_STRUCTURAL, as_matrix, is_hermitian, random_pure
from .states import Ensemble, PureState

# Construction-time spot checks (ray invariance of opaque evaluators, range of
# counting observables) draw from this fixed stream so construction is
# deterministic and rng-free for the caller.
_SPOT_CHECK_SEED = 0x5EED

KIND_QUADRATIC = "quadratic"
KIND_POWER = "power"
KIND_CUSTOM = "custom"


def _as_batch(psis) -> np.ndarray:
    arr = np.asarray(psis, dtype=complex)
    if arr.ndim == 1:
        arr = arr[None, :]
    if arr.ndim != 2:
        raise ValueError(f"expected states of shape (m, d), got {arr.shape}")
    return arr


@dataclass(frozen=True)
class FunctionalObservable:
    """A real function on unit state vectors of a fixed dimension.

    ``values`` evaluates a batch (m, d) -> (m,); evaluation must be pure and
    ray-invariant.  Scalar multiplication and addition build linear
    combinations; combinations of quadratics stay quadratic with the combined
    matrix, anything else degrades to the custom kind.
    """

    dim: int
    kind: str
    _values: Callable[[np.ndarray], np.ndarray]
    matrix: np.ndarray | None = None
    exponent: int | None = None
    label: str = field(default="", compare=False)

    def values(self, psis) -> np.ndarray:
        batch = _as_batch(psis)
        if batch.shape[1] != self.dim:
            raise ValueError(
                f"observable of dim {self.dim} applied to states of dim {batch.shape[1]}"
            )
        out = np.asarray(self._values(batch), dtype=float)
        if out.shape != (batch.shape[0],):
            raise ValueError("evaluator returned a wrongly shaped batch")
        return out

    def __call__(self, psi) -> float:
        if isinstance(psi, PureState):
            psi = psi.vec
        return float(self.values(np.asarray(psi, dtype=complex)[None, :])[0])

    def __add__(self, other: "FunctionalObservable") -> "FunctionalObservable":
        if not isinstance(other, FunctionalObservable):
            return NotImplemented
        return combine([1.0, 1.0], [self, other])

    def __mul__(self, scalar) -> "FunctionalObservable":
        if not np.isscalar(scalar):
            return NotImplemented
        return combine([float(scalar)], [self])

    __rmul__ = __mul__

    def __sub__(self, other: "FunctionalObservable") -> "FunctionalObservable":
        if not isinstance(other, FunctionalObservable):
            return NotImplemented
        return combine([1.0, -1.0], [self, other])


def _expectation_batch(matrix: np.ndarray) -> Callable[[np.ndarray], np.ndarray]:
    def values(batch: np.ndarray) -> np.ndarray:
        return np.einsum("ij,jk,ik->i", batch.conj(), matrix, batch).real

    return values


def quadratic(matrix, label: str = "") -> FunctionalObservable:
    """The expectation-value observable psi -> <psi|M|psi> of a Hermitian M."""
    m = as_matrix(matrix)
    if not is_hermitian(m, TOL_STRUCTURAL):
        raise ValueError("matrix must be Hermitian")
    return FunctionalObservable(
        dim=m.shape[0],
        kind=KIND_QUADRATIC,
        _values=_expectation_batch(m),
        matrix=m,
        label=label,
    )


def power(matrix, exponent: int, label: str = "") -> FunctionalObservable:
    """psi -> (<psi|M|psi>)^k for Hermitian M and integer k >= 2.

    Ray-invariant and, when M is a projector, valued in [0, 1].
    """
    m = as_matrix(matrix)
    if not is_hermitian(m, TOL_STRUCTURAL):
        raise ValueError("matrix must be Hermitian")
    if int(exponent) != exponent or exponent < 2:
        raise ValueError("exponent must be an integer >= 2")
    base = _expectation_batch(m)

    def values(batch: np.ndarray) -> np.ndarray:
        return base(batch) ** int(exponent)

    return FunctionalObservable(
        dim=m.shape[0],
        kind=KIND_POWER,
        _values=values,
        matrix=m,
        exponent=int(exponent),
        label=label,
    )


def custom(
    evaluator: Callable,
    dim: int,
    batch: bool = False,
    label: str = "",
    phase_checks: int = 10,
) -> FunctionalObservable:
    """Wrap an opaque evaluator.

    Ray invariance cannot be proven for a black box, so it is spot-checked at
    construction on ``phase_checks`` random (state, phase) pairs.
    """
    if batch:
        values = evaluator
    else:

        def values(psis: np.ndarray) -> np.ndarray:
            return np.array([float(evaluator(p)) for p in psis])

    obs = FunctionalObservable(
        dim=dim, kind=KIND_CUSTOM, _values=values, label=label
    )
    _check_ray_invariance(obs, phase_checks)
    return obs


def combine(coeffs, observables) -> FunctionalObservable:
    """Real linear combination sum_i c_i f_i of observables of one dimension."""
    cs = [float(c) for c in coeffs]
    obs = list(observables)
    if len(cs) != len(obs) or not obs:
        raise ValueError("coefficients and observables must be matched and non-empty")
    dim = obs[0].dim
    if any(o.dim != dim for o in obs):
        raise ValueError("observables must share a dimension")
    if all(o.kind == KIND_QUADRATIC for o in obs):
        mat = sum(c * o.matrix for c, o in zip(cs, obs))
        return quadratic(mat)

    def values(batch: np.ndarray) -> np.ndarray:
        out = np.zeros(batch.shape[0])
        for c, o in zip(cs, obs):
            out += c * o.values(batch)
        return out

    return FunctionalObservable(dim=dim, kind=KIND_CUSTOM, _values=values)


def _check_ray_invariance(obs: FunctionalObservable, checks: int):
    rng = np.random.default_rng(_SPOT_CHECK_SEED)
    for _ in range(checks):
        psi = random_pure(obs.dim, rng)
        theta = rng.uniform(0.0, 2.0 * np.pi)
        delta = abs(obs(np.exp(1j * theta) * psi) - obs(psi))
        if delta > TOL_STRUCTURAL:
            raise ValueError(
                f"evaluator is not ray-invariant (phase deviation {delta})"
            )


@dataclass(frozen=True)
class CountingObservable:
    """An observable valued in [0, 1], modeling a detector that fires or not.

    The range constraint is sampled, not proven: 1000 Haar-random states are
    checked at construction.
    """

    observable: FunctionalObservable

    def __post_init__(self):
        rng = np.random.default_rng(_SPOT_CHECK_SEED + 1)
        pts = np.array(
            [random_pure(self.observable.dim, rng) for _ in range(1000)]
        )
        vals = self.observable.values(pts)
        if vals.min() < -TOL_STRUCTURAL or vals.max() > 1.0 + TOL_STRUCTURAL:
            raise ValueError(
                f"observable range [{vals.min()}, {vals.max()}] leaves [0, 1]"
            )

    @property
    def dim(self) -> int:
        return self.observable.dim

    @property
    def kind(self) -> str:
        return self.observable.kind

    @property
    def matrix(self):
        return self.observable.matrix

    def values(self, psis) -> np.ndarray:
        return self.observable.values(psis)

    def __call__(self, psi) -> float:
        return self.observable(psi)


def ensemble_average(f, ens: Ensemble) -> float:
    """Exact statistical average sum_i p_i f(b_i) over an ensemble."""
    if f.dim != ens.dim:
        raise ValueError(f"dimension mismatch: {f.dim} vs {ens.dim}")
    vals = f.values(np.array([s.vec for s in ens.states]))
    return float(np.dot(ens.weights, vals))


def polarization_reconstruct(f, d: int) -> np.ndarray:
    """The Hermitian matrix a quadratic f of dimension d must have.

    Diagonal entries come from basis states; off-diagonal real and imaginary
    parts from the probes (e_j + e_k)/sqrt(2) and (e_j - i e_k)/sqrt(2).  If f
    is quadratic this reconstructs its matrix exactly; if not, the output is
    still produced and its (mis)fit is judged by ``quadraticity_residual``.
    """
    if d < 2:
        raise ValueError("dimension must be >= 2")
    eye = np.eye(d, dtype=complex)
    mat = np.zeros((d, d), dtype=complex)
    for j in range(d):
        mat[j, j] = f(eye[j])
    inv_sqrt2 = 1.0 / np.sqrt(2.0)
    for j in range(d):
        for k in range(j + 1, d):
            avg = (mat[j, j].real + mat[k, k].real) / 2.0
            re = f((eye[j] + eye[k]) * inv_sqrt2) - avg
            im = f((eye[j] - 1j * eye[k]) * inv_sqrt2) - avg
            mat[j, k] = re + 1j * im
            mat[k, j] = re - 1j * im
    return mat


def quadraticity_residual(
    f, matrix, samples: int, rng: np.random.Generator
) -> float:
    """Max |f(psi) - <psi|M|psi>| over Haar-sampled unit states."""
    if samples < 1:
        raise ValueError("need at least one sample")
    m = as_matrix(matrix, dim=f.dim)
    pts = np.array([random_pure(f.dim, rng) for _ in range(samples)])
    ref = np.einsum("ij,jk,ik->i", pts.conj(), m, pts).real
    return float(np.max(np.abs(f.values(pts) - ref)))
