"""Dense complex linear algebra for small finite-dimensional Hilbert spaces.

Everything here operates on plain numpy arrays: vectors are 1-d complex
arrays, operators are square 2-d complex arrays.  All functions are pure;
randomized ones take an explicit ``numpy.random.Generator``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# Tolerance tiers.  Structural identities (norms, orthonormality of a freshly
# built basis) hold to STRUCTURAL; quantities derived through a few dense
# operations to DERIVED; user-facing "is it quadratic" decisions default to
# DECISION and are configurable at the call sites that use them.
TOL_STRUCTURAL = 1e-12
TOL_DERIVED = 1e-10
TOL_DECISION = 1e-8


def as_vector(v, dim: int | None = None) -> np.ndarray:
    """Coerce to a finite 1-d complex array, optionally checking its length."""
    arr = np.asarray(v, dtype=complex)
    if arr.ndim != 1 or arr.size < 1:
        raise ValueError(f"expected a 1-d vector, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("vector has non-finite entries")
    if dim is not None and arr.size != dim:
        raise ValueError(f"expected dimension {dim}, got {arr.size}")
    return arr


def as_matrix(m, dim: int | None = None) -> np.ndarray:
    """Coerce to a finite square complex matrix."""
    arr = np.asarray(m, dtype=complex)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("matrix has non-finite entries")
    if dim is not None and arr.shape[0] != dim:
        raise ValueError(f"expected dimension {dim}, got {arr.shape[0]}")
    return arr


def inner(u, v) -> complex:
    """Inner product, conjugate-linear in the first argument."""
    u = as_vector(u)
    v = as_vector(v)
    if u.size != v.size:
        raise ValueError(f"dimension mismatch: {u.size} vs {v.size}")
    return complex(np.vdot(u, v))


def norm(v) -> float:
    return float(np.linalg.norm(as_vector(v)))


def is_hermitian(m, tol: float = TOL_STRUCTURAL) -> bool:
    m = as_matrix(m)
    return bool(np.max(np.abs(m - m.conj().T)) <= tol)


def projector(v) -> np.ndarray:
    """Rank-1 projector |v><v| of a unit vector."""
    v = as_vector(v)
    return np.outer(v, v.conj())


def gram_schmidt(vectors, tol: float = TOL_DERIVED) -> list[np.ndarray]:
    """Orthonormalize a linearly independent family of vectors.

    Uses modified Gram-Schmidt with one re-orthogonalization pass, which keeps
    pairwise inner products at the 1e-15 level for the small dimensions used
    here.  Raises ``ValueError`` when a vector's residual norm after projection
    drops below ``tol`` (rank deficiency).
    """
    vs = [as_vector(v) for v in vectors]
    if any(v.size != vs[0].size for v in vs):
        raise ValueError("vectors must share one dimension")
    out: list[np.ndarray] = []
    for v in vs:
        w = v.astype(complex)
        for _ in range(2):
            for q in out:
                w = w - np.vdot(q, w) * q
        r = np.linalg.norm(w)
        if r < tol:
            raise ValueError("input family is rank deficient within tolerance")
        out.append(w / r)
    return out


def haar_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed d x d unitary.

    QR factorization of a complex Gaussian matrix, with the diagonal of R
    phase-normalized so the distribution is exactly left-invariant.
    """
    if d < 1:
        raise ValueError("dimension must be >= 1")
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    q, r = np.linalg.qr(g)
    diag = np.diagonal(r)
    return q * (diag / np.abs(diag))


def random_pure(d: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-uniform unit vector in dimension d."""
    if d < 1:
        raise ValueError("dimension must be >= 1")
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return v / np.linalg.norm(v)


def tensor(a, b) -> np.ndarray:
    """Tensor product of two vectors; dim multiplies, inner products factor."""
    return np.kron(as_vector(a), as_vector(b))


def partial_trace_a(psi, dim_a: int, dim_b: int) -> np.ndarray:
    """Reduced operator on the B factor after tracing out A.

    ``psi`` is a unit vector in the ``dim_a * dim_b`` product space with the
    A index slowest (kron convention).  The result is Hermitian, positive
    semidefinite and trace-1 to within TOL_STRUCTURAL.
    """
    psi = as_vector(psi)
    if dim_a < 1 or dim_b < 1 or psi.size != dim_a * dim_b:
        raise ValueError(
            f"vector of size {psi.size} does not factor as {dim_a}x{dim_b}"
        )
    m = psi.reshape(dim_a, dim_b)
    return m.T @ m.conj()


@dataclass(frozen=True)
class BlochPoint:
    """A point of the unit ball in R^3; surface points are pure states."""

    x: float
    y: float
    z: float

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])

    def radius(self) -> float:
        return float(np.linalg.norm(self.as_array()))

    @staticmethod
    def from_array(p) -> "BlochPoint":
        p = np.asarray(p, dtype=float)
        if p.shape != (3,):
            raise ValueError(f"expected 3 coordinates, got shape {p.shape}")
        return BlochPoint(float(p[0]), float(p[1]), float(p[2]))


def bloch_map(psi) -> BlochPoint:
    """Map a unit dim-2 state to its point on the ball surface.

    Convention: the first basis vector maps to the north pole (0, 0, 1) and
    the equal real superposition to (1, 0, 0).
    """
    psi = as_vector(psi, dim=2)
    if abs(np.linalg.norm(psi) - 1.0) > 1e-9:
        raise ValueError("state must be unit norm")
    c = np.conj(psi[0]) * psi[1]
    return BlochPoint(
        2.0 * c.real, 2.0 * c.imag, float(abs(psi[0]) ** 2 - abs(psi[1]) ** 2)
    )


def bloch_inverse(p: BlochPoint, tol: float = 1e-9) -> np.ndarray:
    """Density operator (I + x sx + y sy + z sz)/2 for a ball point.

    Surface points give the rank-1 projector of the corresponding ray.
    """
    r = p.radius()
    if r > 1.0 + tol:
        raise ValueError(f"point lies outside the unit ball (radius {r})")
    return 0.5 * np.array(
        [[1.0 + p.z, p.x - 1j * p.y], [p.x + 1j * p.y, 1.0 - p.z]]
    )


def bloch_state(p: BlochPoint, tol: float = 1e-9) -> np.ndarray:
    """Unit dim-2 state of a surface point (inverse of bloch_map up to phase)."""
    r = p.radius()
    if abs(r - 1.0) > tol:
        raise ValueError(f"point must lie on the ball surface (radius {r})")
    theta = np.arccos(np.clip(p.z / r, -1.0, 1.0))
    phi = np.arctan2(p.y, p.x)
    return np.array(
        [np.cos(theta / 2.0), np.exp(1j * phi) * np.sin(theta / 2.0)]
    )
