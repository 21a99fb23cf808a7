"""Shuffling null models and autocorrelation diagnostics.

Two Monte Carlo null models destroy the mutual correlations of a panel:

* complete shuffling permutes each series independently in time, destroying
  autocorrelations and mutual correlations alike (the classical
  random-matrix null);
* rotational shuffling cyclically shifts each series by an independent
  random offset under a periodic boundary, preserving each series' cyclic
  autocorrelation function exactly while still decoupling the series.

On autocorrelated data the rotational null pushes the largest-eigenvalue
edge above the Marchenko-Pastur bound, giving a stricter significance
threshold for retained eigenmodes.
"""

from __future__ import annotations

import csv
import enum
import json
from dataclasses import dataclass
from pathlib import Path
from typing import TextIO

import numpy as np
from scipy import stats as _stats

from .errors import (
    BadConfidence,
    EmptyEnsemble,
    LagOutOfRange,
)
from .panel import StandardizedPanel
from .spectral import ModeBasis


class ShuffleMode(str, enum.Enum):
    COMPLETE = "complete"
    ROTATIONAL = "rotational"


# ---------------------------------------------------------------------------
# autocorrelation diagnostics
# ---------------------------------------------------------------------------


def autocorrelation(w: StandardizedPanel, series: int, lag: int) -> float:
    """Non-cyclic autocorrelation R(lag) of one series (1-based flat index).

    R(m) = (1/(N'-m)) * sum_{j=1}^{N'-m} w(t_j) w(t_{j+m}); with the
    population standardization R(0) is exactly 1.
    """
    if not 1 <= series <= w.n_series:
        raise LagOutOfRange(f"series index {series} outside [1, {w.n_series}]")
    return _autocorr_row(w.values[series - 1], lag)


def autocorrelations(w: StandardizedPanel, lag: int) -> np.ndarray:
    """Vector of R(lag) across all series."""
    n = w.n_obs
    if not 0 <= lag <= n - 2:
        raise LagOutOfRange(f"lag {lag} outside [0, {n - 2}]")
    if lag == 0:
        return (w.values * w.values).mean(axis=1)
    v = w.values
    return (v[:, :-lag] * v[:, lag:]).sum(axis=1) / (n - lag)


def _autocorr_row(x: np.ndarray, lag: int) -> float:
    n = x.size
    if not 0 <= lag <= n - 2:
        raise LagOutOfRange(f"lag {lag} outside [0, {n - 2}]")
    if lag == 0:
        return float((x * x).mean())
    return float((x[:-lag] * x[lag:]).sum() / (n - lag))


def cyclic_autocorrelation(x: np.ndarray, lag: int) -> float:
    """Autocorrelation under the periodic boundary (invariant under rotation)."""
    x = np.asarray(x, dtype=float)
    return float((x * np.roll(x, -lag)).mean())


def no_autocorr_band(n_obs: int, confidence: float = 0.95) -> float:
    """Half-width of the two-sided no-autocorrelation confidence band.

    Under the hypothesis of no autocorrelation, the lag estimates are
    asymptotically normal with variance 1/N', so the band is
    z((1+confidence)/2) / sqrt(N') around zero (1.96/sqrt(N') at 95%).
    """
    if not 0.0 < confidence < 1.0:
        raise BadConfidence(f"confidence must be in (0, 1), got {confidence}")
    if n_obs < 2:
        raise ValueError(f"sample length must be >= 2, got {n_obs}")
    z = float(_stats.norm.ppf((1.0 + confidence) / 2.0))
    return z / np.sqrt(n_obs)


# ---------------------------------------------------------------------------
# shuffles
# ---------------------------------------------------------------------------


def cyclic_shift(x: np.ndarray, tau: int) -> np.ndarray:
    """Shift a series right by tau months under the periodic boundary."""
    return np.roll(np.asarray(x), tau)


def complete_shuffle(w: StandardizedPanel, rng: np.random.Generator) -> StandardizedPanel:
    """Independently permute each series in time (destroys all correlations)."""
    values = np.empty_like(w.values)
    n = w.n_obs
    for i in range(w.n_series):
        values[i] = w.values[i, rng.permutation(n)]
    return w.replace_values(values)


def rotational_shuffle(w: StandardizedPanel, rng: np.random.Generator) -> StandardizedPanel:
    """Cyclically shift each series by an independent uniform offset.

    Preserves each series' cyclic autocorrelation function exactly; only the
    mutual correlations between series are destroyed.
    """
    taus = rng.integers(0, w.n_obs, size=w.n_series)
    values = np.empty_like(w.values)
    for i, tau in enumerate(taus):
        values[i] = np.roll(w.values[i], int(tau))
    return w.replace_values(values)


_SHUFFLERS = {
    ShuffleMode.COMPLETE: complete_shuffle,
    ShuffleMode.ROTATIONAL: rotational_shuffle,
}


# ---------------------------------------------------------------------------
# Monte Carlo ensembles
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EdgeEstimate:
    """Largest-eigenvalue edge: ensemble mean with a percentile interval."""

    center: float
    low: float
    high: float
    confidence: float


@dataclass(frozen=True)
class NullEnsemble:
    """Eigenvalue samples from repeated shuffling of one panel.

    ``lambda_max`` holds the largest eigenvalue of every sample in sample
    order; ``pooled`` all M eigenvalues per sample (samples x M), kept for
    density comparisons and omitted from the compact JSON form.
    """

    mode: ShuffleMode
    samples: int
    seed: int
    lambda_max: np.ndarray
    edge: EdgeEstimate
    pooled: np.ndarray | None = None

    def __post_init__(self):
        lmax = np.asarray(self.lambda_max, dtype=float)
        if lmax.shape != (self.samples,):
            raise EmptyEnsemble(f"{lmax.size} largest eigenvalues for {self.samples} samples")
        object.__setattr__(self, "lambda_max", lmax)
        object.__setattr__(self, "mode", ShuffleMode(self.mode))

    def to_json(self, target: str | Path | TextIO | None = None) -> dict:
        doc = {
            "mode": self.mode.value,
            "samples": self.samples,
            "seed": self.seed,
            "lambda_max": self.lambda_max.tolist(),
            "edge": {
                "center": self.edge.center,
                "low": self.edge.low,
                "high": self.edge.high,
                "confidence": self.edge.confidence,
            },
        }
        if target is not None:
            own = not hasattr(target, "write")
            fh: TextIO = open(target, "w") if own else target  # type: ignore[arg-type]
            try:
                json.dump(doc, fh)
            finally:
                if own:
                    fh.close()
        return doc

    @classmethod
    def from_json(cls, source: str | Path | TextIO | dict) -> "NullEnsemble":
        if isinstance(source, dict):
            doc = source
        elif hasattr(source, "read"):
            doc = json.load(source)  # type: ignore[arg-type]
        else:
            with open(source) as fh:
                doc = json.load(fh)
        edge = EdgeEstimate(**doc["edge"])
        return cls(
            mode=ShuffleMode(doc["mode"]),
            samples=doc["samples"],
            seed=doc["seed"],
            lambda_max=np.asarray(doc["lambda_max"], dtype=float),
            edge=edge,
        )

    def histogram(self, bins: int = 50, value_range: tuple[float, float] | None = None):
        """Normalized histogram of the pooled eigenvalue spectrum."""
        from .spectral import eigenvalue_histogram

        if self.pooled is None:
            raise EmptyEnsemble("ensemble carries no pooled eigenvalues")
        return eigenvalue_histogram(self.pooled.ravel(), bins, value_range)

    def pooled_to_csv(self, target: str | Path | TextIO) -> None:
        if self.pooled is None:
            raise EmptyEnsemble("ensemble carries no pooled eigenvalues")
        own = not hasattr(target, "write")
        fh: TextIO = open(target, "w", newline="") if own else target  # type: ignore[arg-type]
        try:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["sample", "eigenvalue"])
            for s in range(self.pooled.shape[0]):
                for lam in self.pooled[s]:
                    writer.writerow([s, repr(float(lam))])
        finally:
            if own:
                fh.close()


def null_ensemble(
    w: StandardizedPanel,
    mode: ShuffleMode | str,
    samples: int,
    seed: int,
    keep_pooled: bool = True,
) -> NullEnsemble:
    """Generate a shuffling null ensemble of correlation eigenvalues.

    Each sample draws from its own counter-based stream spawned from the
    master seed, so the result depends only on (seed, samples, mode) and is
    reproducible regardless of how samples would be scheduled.
    """
    mode = ShuffleMode(mode)
    if samples < 1:
        raise ValueError(f"need at least 1 sample, got {samples}")
    shuffler = _SHUFFLERS[mode]
    n = w.n_obs
    pooled = np.empty((samples, w.n_series)) if keep_pooled else None
    lambda_max = np.empty(samples)
    streams = np.random.SeedSequence(seed).spawn(samples)
    for s in range(samples):
        rng = np.random.Generator(np.random.Philox(streams[s]))
        shuffled = shuffler(w, rng)
        corr = shuffled.values @ shuffled.values.T / n
        eigs = np.linalg.eigvalsh(corr)
        lambda_max[s] = eigs[-1]
        if pooled is not None:
            pooled[s] = eigs[::-1]
    edge_vals = upper_edge_values(lambda_max, 0.95)
    return NullEnsemble(
        mode=mode,
        samples=samples,
        seed=seed,
        lambda_max=lambda_max,
        edge=EdgeEstimate(*edge_vals, 0.95),
        pooled=pooled,
    )


def upper_edge_values(
    lambda_max: np.ndarray, confidence: float
) -> tuple[float, float, float]:
    if lambda_max.size == 0:
        raise EmptyEnsemble("no samples")
    if not 0.0 <= confidence < 1.0:
        raise BadConfidence(f"confidence must be in [0, 1), got {confidence}")
    center = float(lambda_max.mean())
    half = 50.0 * confidence
    low, high = np.percentile(lambda_max, [50.0 - half, 50.0 + half])
    return center, float(low), float(high)


def upper_edge(
    ensemble: NullEnsemble, confidence: float = 0.95
) -> tuple[float, float, float]:
    """(center, low, high): mean largest eigenvalue with percentile interval."""
    return upper_edge_values(ensemble.lambda_max, confidence)


def count_significant(basis: ModeBasis, threshold: float) -> int:
    """Number of eigenvalues strictly above the significance threshold."""
    if threshold <= 0:
        raise ValueError(f"threshold must be positive, got {threshold}")
    return int(np.sum(basis.eigenvalues > threshold))
