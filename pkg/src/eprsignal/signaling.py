"""The A-to-B channel: exact signal gaps, finite-statistics simulation,
hypothesis testing, and binary-message decoding with a capacity estimate.

A Scenario fixes one entangled state, two A-side measurement bases (the two
"letters"), and the functional observable the B side averages.  If the
observable is quadratic the two letters induce B-side ensembles with one
density matrix and the exact gap vanishes; a non-quadratic observable can
split them, which is the signal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .hilbert import TOL_DERIVED, haar_unitary, random_pure
from .observables import FunctionalObservable, ensemble_average
from .states import (
    Ensemble,
    EntangledState,
    PureState,
    build_entangled,
    conditional_ensemble,
    rebase_alice,
)
from .streams import CHUNK, chunk_sizes, pool_mean_var, run_chunked, substream

# Stream path tags so samples for letter 0 / letter 1 / channel trials never
# collide for one seed.
_PATH_LETTER0 = 0
_PATH_LETTER1 = 1
_PATH_CHANNEL = 2

Z_THRESHOLD = 5.0


@dataclass(frozen=True)
class Scenario:
    """An entangled state, two A-side bases (letters 0 and 1), and the B-side
    observable."""

    state: EntangledState
    basis_a: tuple[PureState, ...]
    basis_a_prime: tuple[PureState, ...]
    observable: FunctionalObservable

    def __post_init__(self):
        object.__setattr__(self, "basis_a", tuple(self.basis_a))
        object.__setattr__(self, "basis_a_prime", tuple(self.basis_a_prime))
        if self.observable.dim != self.state.dim_b:
            raise ValueError(
                f"observable dim {self.observable.dim} does not match the B side "
                f"dim {self.state.dim_b}"
            )
        # rebasing validates orthonormality and span agreement of both bases
        for basis in (self.basis_a, self.basis_a_prime):
            rebase_alice(self.state, basis, span_tol=TOL_DERIVED)

    def letter_basis(self, letter: int) -> tuple[PureState, ...]:
        if letter not in (0, 1):
            raise ValueError("letter must be 0 or 1")
        return self.basis_a if letter == 0 else self.basis_a_prime


@dataclass(frozen=True)
class SignalReport:
    """Exact averages for both letters plus optional Monte-Carlo estimates."""

    exact_fb: float
    exact_fbprime: float
    gap: float
    mc_fb: float | None = None
    mc_fbprime: float | None = None
    stderr_b: float | None = None
    stderr_bprime: float | None = None
    z: float | None = None
    n_samples: int | None = None
    seed: int | None = None
    convergence: tuple[tuple[int, float, float], ...] | None = None


@dataclass(frozen=True)
class ChannelReport:
    block_length: int
    trials: int
    bit_error_rate: float
    estimated_capacity_bits_per_block: float
    decision_threshold: float
    seed: int | None = None

    def __post_init__(self):
        if not 0.0 <= self.bit_error_rate <= 1.0:
            raise ValueError("bit error rate must lie in [0, 1]")


def letter_ensemble(sc: Scenario, letter: int) -> Ensemble:
    """B-side ensemble induced by measuring the letter's basis on the A side."""
    return conditional_ensemble(rebase_alice(sc.state, sc.letter_basis(letter)))


def exact_gap(sc: Scenario) -> SignalReport:
    """Exact averages of the observable under both letters; no sampling."""
    fb = ensemble_average(sc.observable, letter_ensemble(sc, 0))
    fbprime = ensemble_average(sc.observable, letter_ensemble(sc, 1))
    return SignalReport(exact_fb=fb, exact_fbprime=fbprime, gap=fb - fbprime)


def _cumulative(ens: Ensemble) -> np.ndarray:
    cum = np.cumsum(ens.weights)
    cum[-1] = 1.0  # guard against rounding shortfall at the top
    return cum


def _draw_indices(cum: np.ndarray, n: int, rng: np.random.Generator) -> np.ndarray:
    # inverse CDF; at an exact interval boundary the earlier interval wins
    u = rng.random(n)
    return np.searchsorted(cum, u, side="left")


def sample_sequence(
    sc: Scenario, letter: int, n: int, rng: np.random.Generator
) -> list[PureState]:
    """n i.i.d. B-side states received while A measures the given letter."""
    if n < 1:
        raise ValueError("need at least one sample")
    ens = letter_ensemble(sc, letter)
    idx = _draw_indices(_cumulative(ens), n, rng)
    return [ens.states[i] for i in idx]


def per_sample_values(sc: Scenario, letter: int, n: int, seed: int) -> np.ndarray:
    """Observable values of exactly the draws behind ``monte_carlo_report``.

    Useful for dumping raw samples; the report's letter mean equals the mean
    of this array up to summation rounding.
    """
    ens = letter_ensemble(sc, letter)
    cum = _cumulative(ens)
    member_vals = sc.observable.values(np.array([s.vec for s in ens.states]))
    path = _PATH_LETTER0 if letter == 0 else _PATH_LETTER1
    out = np.empty(n)
    pos = 0
    for k, size in enumerate(chunk_sizes(n)):
        rng = substream(seed, path, k)
        out[pos : pos + size] = member_vals[_draw_indices(cum, size, rng)]
        pos += size
    return out


def _letter_statistics(
    sc: Scenario, letter: int, n: int, seed: int, workers: int
) -> tuple[float, float, list[tuple[float, float, int]]]:
    """Sample mean and standard error of f over n draws, chunk-partitioned."""
    ens = letter_ensemble(sc, letter)
    cum = _cumulative(ens)
    member_vals = sc.observable.values(np.array([s.vec for s in ens.states]))
    path = _PATH_LETTER0 if letter == 0 else _PATH_LETTER1
    sizes = chunk_sizes(n)

    def job(k: int) -> tuple[float, float, int]:
        rng = substream(seed, path, k)
        vals = member_vals[_draw_indices(cum, sizes[k], rng)]
        return float(vals.sum()), float(np.dot(vals, vals)), sizes[k]

    partials = run_chunked(job, len(sizes), workers)
    mean, var, total = pool_mean_var(partials)
    stderr = math.sqrt(var / total)
    return mean, stderr, partials


def _z_statistic(mean_b: float, mean_bp: float, se_b: float, se_bp: float) -> float:
    # a mean difference below summation rounding resolution is no evidence;
    # without this, a single-branch scenario (both letters emit one ray, so
    # the standard errors vanish) turns a 1-ulp difference into z = inf
    diff = abs(mean_b - mean_bp)
    scale = max(1.0, abs(mean_b), abs(mean_bp))
    if diff <= 128.0 * np.finfo(float).eps * scale:
        return 0.0
    denom = math.sqrt(se_b * se_b + se_bp * se_bp)
    if denom == 0.0:
        # constant samples at genuinely different values: unambiguous signal
        return math.inf
    return diff / denom


def monte_carlo_report(
    sc: Scenario,
    n: int,
    seed: int = 0,
    workers: int = 1,
    track_convergence: bool = False,
) -> SignalReport:
    """Simulate B's finite statistics with n samples per letter.

    The estimate is the sample average of the observable over the same draws
    ``sample_sequence`` would produce for (seed, letter).  The detection
    statistic z compares the two letter means against their pooled standard
    error.  Results are bit-identical for any ``workers``.
    """
    if n < 2:
        raise ValueError("need at least two samples per letter")
    exact = exact_gap(sc)
    mean_b, se_b, parts_b = _letter_statistics(sc, 0, n, seed, workers)
    mean_bp, se_bp, parts_bp = _letter_statistics(sc, 1, n, seed, workers)

    convergence = None
    if track_convergence:
        rows = []
        for k in range(len(parts_b)):
            m0, v0, n0 = pool_mean_var(parts_b[: k + 1])
            m1, v1, n1 = pool_mean_var(parts_bp[: k + 1])
            pooled = math.sqrt(v0 / n0 + v1 / n1) if min(n0, n1) >= 2 else 0.0
            rows.append((n0, m0 - m1, pooled))
        convergence = tuple(rows)

    return SignalReport(
        exact_fb=exact.exact_fb,
        exact_fbprime=exact.exact_fbprime,
        gap=exact.gap,
        mc_fb=mean_b,
        mc_fbprime=mean_bp,
        stderr_b=se_b,
        stderr_bprime=se_bp,
        z=_z_statistic(mean_b, mean_bp, se_b, se_bp),
        n_samples=n,
        seed=seed,
        convergence=convergence,
    )


def binary_entropy(p: float) -> float:
    if not 0.0 <= p <= 1.0:
        raise ValueError("probability must lie in [0, 1]")
    if p in (0.0, 1.0):
        return 0.0
    return float(-p * math.log2(p) - (1.0 - p) * math.log2(1.0 - p))


def channel_capacity(
    sc: Scenario,
    block_length: int,
    trials: int,
    seed: int = 0,
    workers: int = 1,
) -> ChannelReport:
    """Estimate how well B decodes one uniformly random letter per block.

    Decoder: compare the block sample mean of the observable to the midpoint
    of the two exact means.  Differences below the block's summation rounding
    scale count as ties and are broken by a fair coin, so zero-gap scenarios
    decode at chance level instead of inheriting a knife-edge float bias.
    The capacity estimate is the binary-symmetric-channel bound
    1 - H2(bit error rate), pinned to 0 when the exact gap is 0.
    """
    if block_length < 1 or trials < 1:
        raise ValueError("block length and trials must be >= 1")
    exact = exact_gap(sc)
    threshold = (exact.exact_fb + exact.exact_fbprime) / 2.0
    sign = 1.0 if exact.gap >= 0.0 else -1.0
    scale = max(1.0, abs(exact.exact_fb), abs(exact.exact_fbprime))
    tie_tol = np.finfo(float).eps * block_length * scale

    ensembles = [letter_ensemble(sc, 0), letter_ensemble(sc, 1)]
    cums = [_cumulative(e) for e in ensembles]
    member_vals = [
        sc.observable.values(np.array([s.vec for s in e.states])) for e in ensembles
    ]

    sizes = chunk_sizes(trials, max(1, CHUNK // max(1, block_length)))

    def job(k: int) -> int:
        rng = substream(seed, _PATH_CHANNEL, k)
        errors = 0
        for _ in range(sizes[k]):
            letter = int(rng.integers(0, 2))
            idx = _draw_indices(cums[letter], block_length, rng)
            mean = float(member_vals[letter][idx].mean())
            if abs(mean - threshold) <= tie_tol:
                decoded = int(rng.integers(0, 2))
            else:
                decoded = 0 if sign * (mean - threshold) > 0.0 else 1
            errors += decoded != letter
        return errors

    errors = sum(run_chunked(job, len(sizes), workers))
    ber = errors / trials
    capacity = 0.0 if exact.gap == 0.0 else 1.0 - binary_entropy(ber)
    return ChannelReport(
        block_length=block_length,
        trials=trials,
        bit_error_rate=ber,
        estimated_capacity_bits_per_block=capacity,
        decision_threshold=threshold,
        seed=seed,
    )


def random_scenario(
    observable: FunctionalObservable,
    dim_a: int,
    branches: int,
    rng: np.random.Generator,
) -> Scenario:
    """A random scenario for the given observable: Haar bases, random
    coefficients, independent (generally non-orthogonal) B states."""
    if not 1 <= branches <= dim_a:
        raise ValueError("need 1 <= branches <= dim_a")
    dim_b = observable.dim
    alphas = rng.standard_normal(branches) + 1j * rng.standard_normal(branches)
    alphas = alphas / np.linalg.norm(alphas)
    rotation = haar_unitary(dim_a, rng)
    alice = [rotation[:, i] for i in range(branches)]
    bob = [random_pure(dim_b, rng) for _ in range(branches)]
    state = build_entangled(alphas, alice, bob)
    span = np.array([s.vec for s in state.alice_basis])
    basis_a = tuple(
        PureState(v) for v in (haar_unitary(branches, rng) @ span)
    )
    basis_a_prime = tuple(
        PureState(v) for v in (haar_unitary(branches, rng) @ span)
    )
    return Scenario(state, basis_a, basis_a_prime, observable)
