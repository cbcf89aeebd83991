"""Profile shape analysis and spectral localization diagnostics.

Two ways of asking the same question. In mode space: does the ensemble-mean
output profile fall off like a Gaussian of the ring displacement (spreading)
or like an exponential (trapping)? In the spectrum: do the eigenvectors of
the transfer matrix occupy the whole ring or a few modes, and how far from
the diagonal does the effective generator reach?
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .linalg import as_matrix, eig_unitary, principal_log_unitary
from .simulate import Distribution, circular_displacements

LOG10_E = float(np.log10(np.e))
HERMITIAN_TOL = 1e-6
VECTOR_NORM_TOL = 1e-8
DEFAULT_THRESHOLDS = (0.8, 1.25)
DEFAULT_FLOOR = 1e-12


class FitModel(str, enum.Enum):
    GAUSSIAN = "gaussian"
    EXPONENTIAL = "exponential"


class Regime(str, enum.Enum):
    DIFFUSIVE = "diffusive"
    AMBIGUOUS = "ambiguous"
    LOCALIZED = "localized"


class InsufficientSupportError(ValueError):
    """Too few modes above the probability floor to fit a profile shape."""


@dataclass(frozen=True)
class FitReport:
    """Least-squares fit of log10 probability against a displacement feature.

    The model is log10 p = amplitude_log - decay * x with x the squared
    displacement (gaussian) or the absolute displacement (exponential).
    ssr is the sum of squared residuals in log10 space.
    """

    model: FitModel
    amplitude_log: float
    decay: float
    ssr: float
    n_points: int


def fit_profile(
    dist: Distribution,
    model: FitModel,
    floor: float = DEFAULT_FLOOR,
) -> FitReport:
    """Fit one decay model to the modes whose probability exceeds ``floor``.

    Raises InsufficientSupportError with the support count when fewer than
    three modes survive the floor, or when the surviving displacements give
    the regressor no spread to fit against.
    """
    model = FitModel(model)
    if not 0.0 <= floor < 1.0:
        raise ValueError(f"floor must lie in [0, 1), got {floor!r}")
    p = dist.probabilities
    d = circular_displacements(dist.n_modes, dist.input_index).astype(np.float64)
    keep = p > floor
    n_points = int(np.count_nonzero(keep))
    if n_points < 3:
        raise InsufficientSupportError(
            f"{n_points} mode(s) above floor {floor:.3e}; need at least 3"
        )
    x = d[keep] ** 2 if model is FitModel.GAUSSIAN else np.abs(d[keep])
    y = np.log10(p[keep])
    xc = x - x.mean()
    sxx = float(xc @ xc)
    if sxx <= 0.0:
        raise InsufficientSupportError(
            f"all {n_points} surviving modes share one displacement magnitude"
        )
    slope = float(xc @ (y - y.mean())) / sxx
    intercept = float(y.mean() - slope * x.mean())
    residuals = y - (intercept + slope * x)
    return FitReport(
        model=model,
        amplitude_log=intercept,
        decay=-slope,
        ssr=float(residuals @ residuals),
        n_points=n_points,
    )


@dataclass(frozen=True)
class RegimeVerdict:
    """Both fits plus the ratio-based call between them.

    ssr_ratio is gaussian ssr over exponential ssr: small means the Gaussian
    explains the profile better. localization_length converts the exponential
    decay back to base e and is only set when the verdict is localized.
    """

    regime: Regime
    gaussian: FitReport
    exponential: FitReport
    ssr_ratio: float
    localization_length: float | None


def classify(
    dist: Distribution,
    thresholds=DEFAULT_THRESHOLDS,
    floor: float = DEFAULT_FLOOR,
) -> RegimeVerdict:
    """Call the transport regime of one mean distribution.

    ssr_ratio below thresholds[0] is diffusive, above thresholds[1] is
    localized, between them ambiguous. Both fits always run; a degenerate
    pair of exact fits (both ssr zero) counts as ambiguous.
    """
    low, high = float(thresholds[0]), float(thresholds[1])
    if not 0.0 < low <= high:
        raise ValueError(f"thresholds must satisfy 0 < low <= high, got {thresholds}")
    gaussian = fit_profile(dist, FitModel.GAUSSIAN, floor)
    exponential = fit_profile(dist, FitModel.EXPONENTIAL, floor)
    if exponential.ssr == 0.0:
        ratio = np.inf if gaussian.ssr > 0.0 else 1.0
    else:
        ratio = gaussian.ssr / exponential.ssr
    if ratio < low:
        regime = Regime.DIFFUSIVE
    elif ratio > high:
        regime = Regime.LOCALIZED
    else:
        regime = Regime.AMBIGUOUS
    length = None
    if regime is Regime.LOCALIZED and exponential.decay > 0.0:
        length = LOG10_E / exponential.decay
    return RegimeVerdict(
        regime=regime,
        gaussian=gaussian,
        exponential=exponential,
        ssr_ratio=float(ratio),
        localization_length=length,
    )


def ipr(dist: Distribution) -> float:
    """Inverse participation ratio of a probability distribution."""
    return dist.ipr()


def ipr_vector(v) -> float:
    """Inverse participation ratio of a normalized amplitude vector."""
    v = np.asarray(v, dtype=np.complex128)
    if v.ndim != 1 or v.shape[0] == 0:
        raise ValueError(f"expected a nonempty vector, got shape {v.shape}")
    norm = float(np.linalg.norm(v))
    if abs(norm - 1.0) > VECTOR_NORM_TOL:
        raise ValueError(f"vector norm {norm!r} is not 1 within {VECTOR_NORM_TOL:.0e}")
    p = np.abs(v) ** 2
    return float(np.sum(p**2))


def effective_hamiltonian(w, depth: int) -> np.ndarray:
    """Hermitian generator per step: the principal log of ``w`` over depth."""
    if depth < 1:
        raise ValueError(f"depth must be at least 1, got {depth}")
    return principal_log_unitary(w) / float(depth)


def band_mass_profile(h) -> np.ndarray:
    """Cumulative squared-magnitude fraction within each ring bandwidth.

    Entry k is the fraction of sum |h_ij|^2 carried by pairs at ring distance
    at most k, for k = 0 .. n//2. The profile is nondecreasing and ends at
    exactly 1; a zero matrix concentrates nowhere, so every entry reports 1.
    """
    h = as_matrix(h)
    defect = float(np.abs(h - h.conj().T).max())
    if defect >= HERMITIAN_TOL:
        raise ValueError(
            f"hermitian defect {defect:.3e} is not below {HERMITIAN_TOL:.0e}"
        )
    n = h.shape[0]
    idx = np.arange(n)
    sep = np.abs(np.subtract.outer(idx, idx))
    ring = np.minimum(sep, n - sep)
    weights = (np.abs(h) ** 2).ravel()
    bins = np.bincount(ring.ravel(), weights=weights, minlength=n // 2 + 1)
    total = float(bins.sum())
    if total == 0.0:
        return np.ones(n // 2 + 1, dtype=np.float64)
    out = np.cumsum(bins) / total
    out[-1] = 1.0
    return out


@dataclass(frozen=True)
class SpectralReport:
    """Eigen-level localization summary of one unitary transfer matrix."""

    eigenphases: np.ndarray
    eigenvector_ipr: np.ndarray
    eigenvector_ipr_mean: float
    band_fractions: np.ndarray


def eigenvector_localization(w, depth: int = 1) -> SpectralReport:
    """Eigenphases, per-eigenvector IPR, and the generator's band profile.

    Eigenphases come out sorted ascending with the IPR array in matching
    order. The band profile is taken on the effective per-step generator.
    """
    w = as_matrix(w)
    dec = eig_unitary(w)
    phases = np.angle(dec.eigenvalues)
    iprs = np.sum(np.abs(dec.eigenvectors) ** 4, axis=0)
    order = np.argsort(phases, kind="stable")
    h = effective_hamiltonian(w, depth)
    return SpectralReport(
        eigenphases=phases[order],
        eigenvector_ipr=iprs[order],
        eigenvector_ipr_mean=float(iprs.mean()),
        band_fractions=band_mass_profile(h),
    )
