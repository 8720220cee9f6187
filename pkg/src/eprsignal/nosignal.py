"""Executable no-go checks for functional observables.

Three certifiers, each returning a pass/fail certificate:

* mixture consistency on the dim-2 ball: two convex decompositions of one
  interior point must give one mixture average (chord scan);
* the extremal decomposition of a quadratic dim-2 observable;
* the subspace-measure route for dim >= 3: basis independence of the summed
  observable, orthoadditivity, and reconstruction of the unique compatible
  operator.

A quadratic observable passes every check to numerical precision; any
non-quadratic observable produces a concrete witness.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .hilbert import (
    TOL_DECISION,
    TOL_DERIVED,
    BlochPoint,
    bloch_state,
    haar_unitary,
)
from .observables import CountingObservable, polarization_reconstruct
from .streams import run_chunked, substream

VERDICT_QUADRATIC = "quadratic-consistent"
VERDICT_NON_QUADRATIC = "non-quadratic"

# chord-pair witnesses evaluated per substream
_WITNESS_CHUNK = 256

# stream path tags (affinity convex, affinity affine, subspace draws, trace fit)
_PATH_CHORDS = 10
_PATH_AFFINE = 11
_PATH_SUBSPACE = 20
_PATH_TRACE = 21

# PSD slack for reconstructed operators; eigenvalues above -1e-10 count as
# non-negative
_PSD_SLACK = 1e-10

_DECOMP_TOL = 1e-9


@dataclass(frozen=True)
class ChordWitness:
    """Two decompositions of one ball point and the two mixture averages.

    Weights within a pair sum to 1; they lie in [0, 1] for convex witnesses
    and may leave it when ``affine`` is set (the extended scan).
    """

    x1: BlochPoint
    x2: BlochPoint
    x1p: BlochPoint
    x2p: BlochPoint
    p1: float
    p2: float
    p1p: float
    p2p: float
    x: BlochPoint
    lhs: float | None = None
    rhs: float | None = None
    violation: float | None = None
    values: tuple[float, float, float, float] | None = None
    affine: bool = False

    def __post_init__(self):
        for a, b in ((self.p1, self.p2), (self.p1p, self.p2p)):
            if abs(a + b - 1.0) > _DECOMP_TOL:
                raise ValueError(f"weights {a}, {b} do not sum to 1")
            if not self.affine and not (-1e-12 <= a <= 1 + 1e-12):
                raise ValueError(f"convex weight {a} outside [0, 1]")
        x = self.x.as_array()
        for pa, pb, va, vb in (
            (self.p1, self.p2, self.x1, self.x2),
            (self.p1p, self.p2p, self.x1p, self.x2p),
        ):
            err = np.linalg.norm(pa * va.as_array() + pb * vb.as_array() - x)
            if err > _DECOMP_TOL:
                raise ValueError(f"decomposition misses the point by {err}")


@dataclass(frozen=True)
class SubspaceMeasureRecord:
    """Measure of one subspace plus its spread over resampled bases."""

    basis: tuple
    mu: float
    basis_spread: float


@dataclass(frozen=True)
class TraceFitRecord:
    """One comparison of a subspace measure against Tr(F P_X)."""

    subspace_dim: int
    mu: float
    trace_value: float
    residual: float


@dataclass(frozen=True)
class Certificate:
    """Outcome of a scan: verdict, the worst violation found, and evidence."""

    verdict: str
    worst_violation: float
    witnesses: tuple
    tolerance: float
    seed: int | None = None
    operator: np.ndarray | None = None

    def __post_init__(self):
        expected = (
            VERDICT_QUADRATIC
            if self.worst_violation < self.tolerance
            else VERDICT_NON_QUADRATIC
        )
        if self.verdict != expected:
            raise ValueError("verdict inconsistent with worst violation")


def _certificate(worst, witnesses, tolerance, seed=None, operator=None) -> Certificate:
    verdict = VERDICT_QUADRATIC if worst < tolerance else VERDICT_NON_QUADRATIC
    return Certificate(
        verdict=verdict,
        worst_violation=float(worst),
        witnesses=tuple(witnesses),
        tolerance=float(tolerance),
        seed=seed,
        operator=operator,
    )


def _on_sphere(p: BlochPoint, tol: float = TOL_DERIVED) -> np.ndarray:
    v = p.as_array()
    r = np.linalg.norm(v)
    if abs(r - 1.0) > tol:
        raise ValueError(f"point radius {r} is not 1 within {tol}")
    return v


def chord_intersection(
    x1: BlochPoint,
    x2: BlochPoint,
    x1p: BlochPoint,
    x2p: BlochPoint,
    tol: float = 1e-9,
) -> ChordWitness | None:
    """Intersection witness of two chords of the sphere, or None.

    Returns a witness when the open segments x1-x2 and x1p-x2p pass within
    ``tol`` of each other; collinear pairs are skipped (they carry no
    constraint beyond affinity along one line).
    """
    a1, a2 = _on_sphere(x1), _on_sphere(x2)
    b1, b2 = _on_sphere(x1p), _on_sphere(x2p)
    d1, d2, r = a2 - a1, b2 - b1, a1 - b1
    aa, bb, cc = d1 @ d1, d1 @ d2, d2 @ d2
    dd, ee = d1 @ r, d2 @ r
    den = aa * cc - bb * bb
    if den <= 1e-12 * aa * cc:
        return None  # parallel or collinear
    t = (bb * ee - cc * dd) / den
    s = (aa * ee - bb * dd) / den
    if not (0.0 < t < 1.0 and 0.0 < s < 1.0):
        return None
    q1 = a1 + t * d1
    q2 = b1 + s * d2
    if np.linalg.norm(q1 - q2) >= tol:
        return None
    x = BlochPoint.from_array((q1 + q2) / 2.0)
    return ChordWitness(
        x1=x1, x2=x2, x1p=x1p, x2p=x2p,
        p1=1.0 - t, p2=t, p1p=1.0 - s, p2p=s,
        x=x,
    )


def _sphere_value(f, point: np.ndarray) -> float:
    return f(bloch_state(BlochPoint.from_array(point)))


def _evaluate_witness(f, w: ChordWitness) -> ChordWitness:
    v1 = _sphere_value(f, w.x1.as_array())
    v2 = _sphere_value(f, w.x2.as_array())
    v1p = _sphere_value(f, w.x1p.as_array())
    v2p = _sphere_value(f, w.x2p.as_array())
    lhs = w.p1 * v1 + w.p2 * v2
    rhs = w.p1p * v1p + w.p2p * v2p
    return replace(
        w, lhs=lhs, rhs=rhs, violation=abs(lhs - rhs), values=(v1, v2, v1p, v2p)
    )


def _chord_through(x: np.ndarray, direction: np.ndarray):
    """Endpoints on the sphere of the line through interior point x, plus the
    convex weight placing x on the segment."""
    u = direction / np.linalg.norm(direction)
    b = x @ u
    disc = b * b - (x @ x - 1.0)
    root = math.sqrt(disc)
    t_minus, t_plus = -b - root, -b + root
    e1 = x + t_minus * u
    e2 = x + t_plus * u
    p2 = -t_minus / (t_plus - t_minus)
    return e1, e2, p2


def _center_diameter_probes() -> list[ChordWitness]:
    """Deterministic pairs of diameters through the center.

    Axis-aligned observables reach their extreme mixture split on one of
    these, so the scan never relies on sampling luck to exhibit them.
    """
    axes = [
        np.array([0.0, 0.0, 1.0]),
        np.array([1.0, 0.0, 0.0]),
        np.array([0.0, 1.0, 0.0]),
    ]
    for sx in (1.0, -1.0):
        for sy in (1.0, -1.0):
            axes.append(np.array([sx, sy, 1.0]) / math.sqrt(3.0))
    center = BlochPoint(0.0, 0.0, 0.0)
    probes = []
    for i in range(len(axes)):
        for j in range(i + 1, len(axes)):
            probes.append(
                ChordWitness(
                    x1=BlochPoint.from_array(axes[i]),
                    x2=BlochPoint.from_array(-axes[i]),
                    x1p=BlochPoint.from_array(axes[j]),
                    x2p=BlochPoint.from_array(-axes[j]),
                    p1=0.5, p2=0.5, p1p=0.5, p2p=0.5,
                    x=center,
                )
            )
    return probes


def _random_ball_point(rng: np.random.Generator) -> np.ndarray:
    direction = rng.standard_normal(3)
    direction /= np.linalg.norm(direction)
    return direction * rng.random() ** (1.0 / 3.0)


def _random_convex_witness(rng: np.random.Generator) -> ChordWitness:
    # a point drawn in the ball interior plus two random chord directions:
    # both chords pass through it, so the pair always intersects
    x = _random_ball_point(rng)
    e1, e2, p2 = _chord_through(x, rng.standard_normal(3))
    g1, g2, q2 = _chord_through(x, rng.standard_normal(3))
    return ChordWitness(
        x1=BlochPoint.from_array(e1),
        x2=BlochPoint.from_array(e2),
        x1p=BlochPoint.from_array(g1),
        x2p=BlochPoint.from_array(g2),
        p1=1.0 - p2, p2=p2, p1p=1.0 - q2, p2p=q2,
        x=BlochPoint.from_array(x),
    )


def _diameter_average(f, y: np.ndarray) -> float:
    """Mixture value of an interior point via the diameter through it."""
    r = np.linalg.norm(y)
    axis = y / r if r > 1e-12 else np.array([0.0, 0.0, 1.0])
    hi = _sphere_value(f, axis)
    lo = _sphere_value(f, -axis)
    return 0.5 * (1.0 + r) * hi + 0.5 * (1.0 - r) * lo


def _random_affine_witness(f, rng: np.random.Generator):
    """An affine (weights beyond [0,1]) two-point decomposition, evaluated
    through the diameter rule; both decomposition points stay in the ball."""
    for _ in range(100):
        x = _random_ball_point(rng)
        u = rng.standard_normal(3)
        u = u / np.linalg.norm(u)
        b0 = x @ u
        root = math.sqrt(b0 * b0 - (x @ x - 1.0))
        t_minus, t_plus = -b0 - root, -b0 + root
        a = rng.uniform(t_minus, t_plus)
        b = rng.uniform(t_minus, t_plus)
        if abs(a - b) < 0.05:
            continue
        p2 = a / (a - b)
        if not -0.5 <= p2 <= 1.5:
            continue
        y1, y2 = x + a * u, x + b * u
        lhs = _diameter_average(f, x)
        rhs = (1.0 - p2) * _diameter_average(f, y1) + p2 * _diameter_average(f, y2)
        return abs(lhs - rhs)
    return 0.0  # no admissible draw found; contributes nothing


def affinity_scan(
    f,
    n_chords: int,
    seed: int = 0,
    tolerance: float = TOL_DECISION,
    workers: int = 1,
    extended: bool = False,
) -> Certificate:
    """Chord-pair consistency scan for a dim-2 observable.

    Evaluates both mixture averages on deterministic center-diameter pairs
    and on ``n_chords`` sampled intersecting pairs; with ``extended`` the
    affine regime (weights in [-0.5, 1.5], diameter evaluation rule) is
    scanned as well.  The verdict compares the worst |lhs - rhs| against
    ``tolerance``.
    """
    if f.dim != 2:
        raise ValueError("the chord scan is defined for dimension 2 only")
    if n_chords < 1:
        raise ValueError("need at least one chord pair")

    witnesses = [_evaluate_witness(f, w) for w in _center_diameter_probes()]

    sizes = [_WITNESS_CHUNK] * (n_chords // _WITNESS_CHUNK)
    if n_chords % _WITNESS_CHUNK:
        sizes.append(n_chords % _WITNESS_CHUNK)

    def job(k: int) -> list[ChordWitness]:
        rng = substream(seed, _PATH_CHORDS, k)
        return [
            _evaluate_witness(f, _random_convex_witness(rng))
            for _ in range(sizes[k])
        ]

    for chunk in run_chunked(job, len(sizes), workers):
        witnesses.extend(chunk)

    worst = max(w.violation for w in witnesses)

    if extended:

        def affine_job(k: int) -> float:
            rng = substream(seed, _PATH_AFFINE, k)
            return max(_random_affine_witness(f, rng) for _ in range(sizes[k]))

        worst = max(worst, max(run_chunked(affine_job, len(sizes), workers)))

    return _certificate(worst, witnesses, tolerance, seed=seed)


def extremal_decomposition(f):
    """Eigen-split of a quadratic dim-2 observable.

    Returns (high value, low value, high state, low state); the mixture
    functional value at any ball point is the weight-averaged pair.
    """
    if f.kind != "quadratic" or f.matrix is None:
        raise ValueError("extremal decomposition needs a quadratic observable")
    if f.dim != 2:
        raise ValueError("defined for dimension 2 only")
    vals, vecs = np.linalg.eigh(f.matrix)
    return float(vals[1]), float(vals[0]), vecs[:, 1].copy(), vecs[:, 0].copy()


def _basis_rows(basis) -> np.ndarray:
    rows = np.array(
        [b.vec if hasattr(b, "vec") else np.asarray(b, dtype=complex) for b in basis]
    )
    if rows.ndim != 2:
        raise ValueError("basis must be a list of equal-length vectors")
    gram = rows.conj() @ rows.T
    err = np.max(np.abs(gram - np.eye(rows.shape[0])))
    if err > TOL_DERIVED:
        raise ValueError(f"basis is not orthonormal (max deviation {err})")
    return rows


def subspace_measure(f, basis) -> float:
    """Sum of the observable over an orthonormal basis of a subspace.

    For a counting observable this lies in [0, n]; when the measure is basis
    independent it is a function of the subspace alone.
    """
    rows = _basis_rows(basis)
    return float(np.sum(f.values(rows)))


def _structured_rotations(n: int) -> list[np.ndarray]:
    """Basis rotations that expose axis-aligned basis dependence: the discrete
    Fourier mix of all vectors plus real and phase mixes of every pair."""
    if n < 2:
        return []
    j, k = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    fourier = np.exp(2j * np.pi * j * k / n) / math.sqrt(n)
    out = [fourier]
    inv = 1.0 / math.sqrt(2.0)
    for a in range(n):
        for b in range(a + 1, n):
            for block in (
                np.array([[1.0, 1.0], [1.0, -1.0]]) * inv,
                np.array([[1.0, 1.0j], [1.0j, 1.0]]) * inv,
            ):
                w = np.eye(n, dtype=complex)
                w[np.ix_([a, b], [a, b])] = block
                out.append(w)
    return out


def basis_independence(
    f, basis, resamples: int, rng: np.random.Generator, structured: bool = True
) -> SubspaceMeasureRecord:
    """Spread of the subspace measure over rotated bases of one subspace.

    Rotations are ``resamples`` Haar draws plus, by default, a deterministic
    structured family (Fourier and pairwise mixes) that exposes basis
    dependence aligned with the given basis without sampling luck.
    """
    if resamples < 2:
        raise ValueError("need at least two resamples")
    rows = _basis_rows(basis)
    n = rows.shape[0]
    mus = [float(np.sum(f.values(rows)))]
    rotations = _structured_rotations(n) if structured else []
    rotations += [haar_unitary(n, rng) for _ in range(resamples)]
    for w in rotations:
        mus.append(float(np.sum(f.values(w @ rows))))
    return SubspaceMeasureRecord(
        basis=tuple(map(tuple, rows.tolist())),
        mu=mus[0],
        basis_spread=float(max(mus) - min(mus)),
    )


def orthoadditivity_check(
    f,
    basis_y,
    basis_z,
    rng: np.random.Generator,
    resamples: int = 8,
    structured: bool = True,
) -> float:
    """Violation of mu(Y) + mu(Z) = mu(Y + Z) for orthogonal subspaces.

    With the concatenated basis the identity holds termwise (set
    ``resamples=0, structured=False`` to see exactly that); the reported
    violation otherwise folds in rebased evaluations of the direct sum
    (structured plus ``resamples`` Haar rotations), i.e. the basis spread
    of the joint subspace.
    """
    rows_y = _basis_rows(basis_y)
    rows_z = _basis_rows(basis_z)
    cross = np.max(np.abs(rows_y.conj() @ rows_z.T))
    if cross > TOL_DERIVED:
        raise ValueError(f"subspaces are not orthogonal (max overlap {cross})")
    mu_parts = subspace_measure(f, rows_y) + subspace_measure(f, rows_z)
    joint = np.vstack([rows_y, rows_z])
    worst = abs(mu_parts - subspace_measure(f, joint))
    rotations = _structured_rotations(joint.shape[0]) if structured else []
    rotations += [haar_unitary(joint.shape[0], rng) for _ in range(resamples)]
    for w in rotations:
        worst = max(worst, abs(mu_parts - float(np.sum(f.values(w @ joint)))))
    return float(worst)


def _random_subspace(d: int, n: int, rng: np.random.Generator) -> np.ndarray:
    return haar_unitary(d, rng)[:, :n].T


def gleason_certify(
    f,
    seed: int = 0,
    tolerance: float = TOL_DECISION,
    subspaces_per_dim: int = 3,
    resamples: int = 6,
    trace_checks: int = 8,
    workers: int = 1,
) -> Certificate:
    """Subspace-measure certification for dimension >= 3.

    Checks basis independence of the measure on sampled subspaces of every
    dimension (always including the full space with its computational
    basis), reconstructs the only operator a quadratic observable could
    have, and verifies mu(X) = Tr(F P_X) on random subspaces.  Positive
    semidefiniteness of the operator is additionally required for counting
    observables, whose measure is non-negative by construction.
    """
    d = f.dim
    if d < 3:
        raise ValueError(
            "the subspace-measure argument needs dimension >= 3; "
            "use affinity_scan for dimension 2"
        )

    tasks: list[tuple[int, np.ndarray]] = []
    for m in range(1, d + 1):
        if m == d:
            tasks.append((m, np.eye(d, dtype=complex)))
            continue
        for i in range(subspaces_per_dim):
            tasks.append((m, _random_subspace(d, m, substream(seed, _PATH_SUBSPACE, m, i))))

    def spread_job(k: int) -> SubspaceMeasureRecord:
        m, rows = tasks[k]
        rng = substream(seed, _PATH_SUBSPACE, m, 1000 + k)
        return basis_independence(f, rows, resamples, rng)

    records = run_chunked(spread_job, len(tasks), workers)
    witnesses: list = list(records)
    worst = max(r.basis_spread for r in records)

    operator = polarization_reconstruct(f, d)

    if worst < tolerance:
        for i in range(trace_checks):
            rng = substream(seed, _PATH_TRACE, i)
            m = int(rng.integers(1, d + 1))
            rows = np.eye(d, dtype=complex) if m == d else _random_subspace(d, m, rng)
            mu = subspace_measure(f, rows)
            p_x = rows.T @ rows.conj()
            tr = float(np.trace(operator @ p_x).real)
            res = abs(mu - tr)
            witnesses.append(
                TraceFitRecord(subspace_dim=m, mu=mu, trace_value=tr, residual=res)
            )
            worst = max(worst, res)

    if isinstance(f, CountingObservable):
        deficit = max(0.0, -float(np.linalg.eigvalsh(operator).min()))
        if deficit > _PSD_SLACK:
            worst = max(worst, deficit)

    return _certificate(worst, witnesses, tolerance, seed=seed, operator=operator)
