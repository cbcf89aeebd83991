"""Single-excitation propagation and ensemble statistics on the ring.

States live on the 2N modes of a ring scenario. Propagation injects one
excitation on a chosen mode, applies the composed transfer matrix, and reads
out the mode-occupation probability distribution. Ensembles average those
distributions over independent disorder realizations, with snapshots taken at
intermediate depths along the way.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import UNITARITY_TOL, NonUnitaryError, as_matrix, unitarity_defect
from .network import RngStream, Scenario, scenario_step_factors

SUM_TOL = 1e-12
NEGATIVE_CLAMP = 1e-15


@dataclass(frozen=True)
class Distribution:
    """Probability distribution over the ring modes, anchored at its input.

    input_index is the zero-based mode the excitation started on; the spread
    statistics and profile fits all measure displacement from it. Entries are
    validated on construction: negatives beyond round-off are an error,
    round-off negatives are clamped to zero, and the total must be one to
    within SUM_TOL.
    """

    probabilities: np.ndarray
    input_index: int

    def __post_init__(self):
        p = np.asarray(self.probabilities, dtype=np.float64)
        if p.ndim != 1 or p.shape[0] == 0:
            raise ValueError(f"probabilities must be a nonempty vector, got {p.shape}")
        if not np.isfinite(p).all():
            raise ValueError("probabilities must all be finite")
        if p.min() < -NEGATIVE_CLAMP:
            raise ValueError(f"probability {p.min():.3e} is negative beyond round-off")
        p = np.where(p < 0.0, 0.0, p)
        total = float(p.sum())
        if abs(total - 1.0) > SUM_TOL:
            raise ValueError(f"probabilities sum to {total!r}, expected 1")
        if not 0 <= self.input_index < p.shape[0]:
            raise ValueError(
                f"input_index {self.input_index} outside the mode range "
                f"[0, {p.shape[0]})"
            )
        object.__setattr__(self, "probabilities", p)

    @property
    def n_modes(self) -> int:
        return self.probabilities.shape[0]

    def ipr(self) -> float:
        """Inverse participation ratio, sum of squared probabilities."""
        return float(np.sum(self.probabilities**2))


def initial_state(n_modes: int, input_index: int) -> np.ndarray:
    """Unit excitation on one mode, zero elsewhere."""
    if n_modes <= 0:
        raise ValueError(f"n_modes must be positive, got {n_modes}")
    if not 0 <= input_index < n_modes:
        raise ValueError(
            f"input_index {input_index} outside the mode range [0, {n_modes})"
        )
    state = np.zeros(n_modes, dtype=np.complex128)
    state[input_index] = 1.0
    return state


def output_distribution(w: np.ndarray, input_index: int) -> Distribution:
    """Mode probabilities after applying transfer matrix column input_index.

    The column is renormalized before squaring so accumulated round-off in a
    long matrix product cannot push the total past the distribution tolerance.
    """
    w = np.asarray(w)
    amplitudes = w[:, input_index]
    norm = float(np.linalg.norm(amplitudes))
    if norm == 0.0:
        raise ValueError(f"transfer matrix column {input_index} is zero")
    p = np.abs(amplitudes / norm) ** 2
    return Distribution(probabilities=p / p.sum(), input_index=input_index)


def propagate(w, input_index: int) -> Distribution:
    """Output distribution of a verified-unitary transfer matrix.

    Raises NonUnitaryError when the defect of ``w`` reaches UNITARITY_TOL.
    """
    w = as_matrix(w)
    defect = unitarity_defect(w)
    if defect >= UNITARITY_TOL:
        raise NonUnitaryError(
            f"unitarity defect {defect:.3e} is not below {UNITARITY_TOL:.0e}"
        )
    if not 0 <= input_index < w.shape[0]:
        raise ValueError(
            f"input_index {input_index} outside the mode range [0, {w.shape[0]})"
        )
    return output_distribution(w, input_index)


def circular_displacements(n_modes: int, input_index: int) -> np.ndarray:
    """Signed ring distance of every mode from the input mode.

    Distances wrap around the ring and lie in [-n/2, n/2); the antipodal mode
    sits at -n/2 by that half-open convention.
    """
    if not 0 <= input_index < n_modes:
        raise ValueError(
            f"input_index {input_index} outside the mode range [0, {n_modes})"
        )
    half = n_modes // 2
    modes = np.arange(n_modes)
    return ((modes - input_index + half) % n_modes) - half


def circular_variance(dist: Distribution) -> float:
    """Variance of the signed ring displacement from the input mode.

    Before any amplitude has wrapped around the ring this coincides with the
    plain variance of the walked distance; afterwards it is the natural
    periodic analogue.
    """
    d = circular_displacements(dist.n_modes, dist.input_index).astype(np.float64)
    p = dist.probabilities
    mean = float(p @ d)
    return float(p @ d**2) - mean**2


@dataclass(frozen=True)
class DepthSample:
    """Ensemble-mean distribution at one depth, with its spread statistics.

    ipr is the inverse participation ratio of the mean distribution;
    realization_ipr_mean averages each realization's own IPR instead. The two
    differ where realizations localize sharply but with differing speckle:
    averaging the distributions smooths the tails and lowers ipr, while the
    per-realization average keeps the sharpness.
    """

    depth: int
    distribution: Distribution
    variance: float
    ipr: float
    realization_ipr_mean: float


@dataclass(frozen=True)
class EnsembleResult:
    """Mean distributions over disorder realizations at each requested depth."""

    scenario: Scenario
    runs: int
    samples: tuple[DepthSample, ...]

    @property
    def final(self) -> DepthSample:
        return self.samples[-1]

    @property
    def mean_dist(self) -> Distribution:
        """Ensemble-mean distribution at the deepest requested depth."""
        return self.samples[-1].distribution


def run_ensemble(
    scenario: Scenario,
    input_index: int,
    depths,
    runs: int,
    master_seed: int | None = None,
) -> EnsembleResult:
    """Average output distributions over ``runs`` disorder realizations.

    depths must be strictly increasing with the last entry equal to
    scenario.depth, so every snapshot falls inside a single pass through the
    step factors. Realization r draws from stream r of the master seed
    (scenario.seed unless overridden) and realizations accumulate in
    ascending order; results are therefore reproducible bit for bit
    regardless of platform thread counts.
    """
    depths = tuple(int(d) for d in depths)
    if len(depths) == 0:
        raise ValueError("depths must be nonempty")
    if any(b <= a for a, b in zip(depths, depths[1:])):
        raise ValueError(f"depths must be strictly increasing, got {depths}")
    if depths[0] < 1:
        raise ValueError(f"depths must be positive, got {depths}")
    if depths[-1] != scenario.depth:
        raise ValueError(
            f"last depth {depths[-1]} must equal scenario depth {scenario.depth}"
        )
    if runs < 1:
        raise ValueError(f"runs must be at least 1, got {runs}")
    n = scenario.n_modes
    if not 0 <= input_index < n:
        raise ValueError(f"input_index {input_index} outside the mode range [0, {n})")
    if master_seed is None:
        master_seed = scenario.seed

    wanted = set(depths)
    sums = {d: np.zeros(n, dtype=np.float64) for d in depths}
    ipr_sums = {d: 0.0 for d in depths}
    for r in range(runs):
        rng = RngStream(master_seed, r)
        w = np.eye(n, dtype=np.complex128)
        step = 0
        for factor in scenario_step_factors(scenario, rng):
            w = factor @ w
            step += 1
            if step in wanted:
                dist_r = output_distribution(w, input_index)
                sums[step] += dist_r.probabilities
                ipr_sums[step] += dist_r.ipr()

    samples = []
    for d in depths:
        mean = sums[d] / runs
        dist = Distribution(probabilities=mean / mean.sum(), input_index=input_index)
        samples.append(
            DepthSample(
                depth=d,
                distribution=dist,
                variance=circular_variance(dist),
                ipr=dist.ipr(),
                realization_ipr_mean=ipr_sums[d] / runs,
            )
        )
    return EnsembleResult(scenario=scenario, runs=runs, samples=tuple(samples))
