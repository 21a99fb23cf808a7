"""Business-cycle analysis: smoothing, Fourier bands, phases, external stimuli.

The two leading mode series carry the economy-wide cycles.  A centered
moving average strips the fast month-to-month noise; an inverse Fourier
reconstruction restricted to low frequency indices isolates the long-period
(business-cycle) component.  The difference between the two is the residual
disturbance, and inverting the reduced two-mode susceptibility on that
residual recovers the external stimulus series driving the economy beyond
its inherent cycles.

Fourier convention: coefficients are (1/sqrt(N')) sum_j x(t_j) e^{+i w_k t_j}
with w_k = 2 pi k / N' per month, and series are reconstructed with
e^{-i w_k t_j}.  Under that convention a positive relative phase means the
series peaks earlier than (is ahead of) the reference.

Frequency presets below (k = {1,2,4,6}, roughly 240/120/60/40-month periods,
and k <= 9, all periods over two years) are tuned to ~240-month panels.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence, TextIO

import numpy as np

from .errors import (
    BadFrequencyIndex,
    BadModeCount,
    DegenerateWeights,
    DimensionMismatch,
    EmptyInput,
    InsufficientOverlap,
    ReferenceAmplitudeZero,
    SingularSusceptibility,
    UnknownSeries,
    WindowTooWide,
)
from .panel import SeriesId, Variable
from .response import ReducedSusceptibility
from .spectral import ModeBasis, ModeSeries

#: The four dominant cycle tones of a ~240-month panel.
KSET_BUSINESS_CYCLES: tuple[int, ...] = (1, 2, 4, 6)

#: Every component with period above two years in a ~240-month panel.
KSET_LONG_PERIODS: tuple[int, ...] = tuple(range(1, 10))


# ---------------------------------------------------------------------------
# smoothing
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SmoothedSeries:
    """Centered moving average; the window shrinks at the boundaries."""

    values: np.ndarray
    half_width: int
    edge_policy: str = "shrink"


def moving_average(x: Sequence[float] | np.ndarray, half_width: int) -> SmoothedSeries:
    """Mean over the window [j - half_width, j + half_width], clipped to the series.

    half_width = 0 returns the input unchanged; constants and (at interior
    points) linear ramps are preserved for any width.
    """
    arr = np.asarray(x, dtype=float)
    n = arr.size
    if half_width < 0:
        raise ValueError(f"half-width must be >= 0, got {half_width}")
    if half_width >= n:
        raise WindowTooWide(f"half-width {half_width} >= series length {n}")
    if half_width == 0:
        return SmoothedSeries(values=arr.copy(), half_width=0)
    csum = np.concatenate([[0.0], np.cumsum(arr)])
    j = np.arange(n)
    lo = np.maximum(j - half_width, 0)
    hi = np.minimum(j + half_width + 1, n)
    values = (csum[hi] - csum[lo]) / (hi - lo)
    return SmoothedSeries(values=values, half_width=half_width)


def lag_correlation(
    x: Sequence[float] | np.ndarray,
    y: Sequence[float] | np.ndarray,
    lag: int,
    half_width: int = 0,
) -> float:
    """Normalized lagged correlation <x(t) y(t - lag)>_t after smoothing both.

    The lagged product is averaged over the overlapping months; the
    normalization uses each smoothed series' full-sample root mean square,
    so the value is a correlation coefficient comparable across lags.
    """
    xs = moving_average(x, half_width).values
    ys = moving_average(y, half_width).values
    if xs.size != ys.size:
        raise DimensionMismatch("series lengths differ")
    n = xs.size
    if n - abs(lag) < 2:
        raise InsufficientOverlap(f"overlap for lag {lag} shorter than 2 points")
    if lag >= 0:
        num = float(np.mean(xs[lag:] * ys[: n - lag]))
    else:
        num = float(np.mean(xs[: n + lag] * ys[-lag:]))
    den = float(np.sqrt(np.mean(xs**2) * np.mean(ys**2)))
    if den == 0.0:
        raise InsufficientOverlap("a smoothed series vanishes identically")
    return num / den


# ---------------------------------------------------------------------------
# Fourier decomposition
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SpectralCoefficients:
    """Complex coefficients at w_k = 2 pi k / N' per month, k = 0 .. N'-1."""

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=complex)
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def n_obs(self) -> int:
        return self.coeffs.size

    def omega(self, k: int) -> float:
        return 2.0 * np.pi * k / self.n_obs


def dft(x: Sequence[float] | np.ndarray) -> SpectralCoefficients:
    """Forward transform (1/sqrt(N')) sum_j x(t_j) e^{+i w_k t_j}, t_j = j months."""
    arr = np.asarray(x, dtype=float)
    n = arr.size
    if n < 2:
        raise EmptyInput(f"need at least 2 points, got {n}")
    k = np.arange(n)
    # t_j = j with j = 1..N', so the array origin carries one extra phase step
    phase = np.exp(2j * np.pi * k / n)
    return SpectralCoefficients(coeffs=np.sqrt(n) * phase * np.fft.ifft(arr))


def inverse_dft(sc: SpectralCoefficients) -> np.ndarray:
    """Reconstruct x(t_j) = (1/sqrt(N')) sum_k coeffs_k e^{-i w_k t_j}."""
    n = sc.n_obs
    k = np.arange(n)
    b = sc.coeffs * np.exp(-2j * np.pi * k / n)
    out = np.fft.fft(b) / np.sqrt(n)
    scale = np.abs(sc.coeffs).max() if sc.coeffs.size else 0.0
    if np.abs(out.imag).max() > 1e-9 * max(scale, 1.0):
        raise ValueError("coefficients are not conjugate-symmetric; result not real")
    return out.real


def _check_kset(kset: Iterable[int], n: int) -> list[int]:
    ks = sorted(set(int(k) for k in kset))
    if not ks:
        raise EmptyInput("empty frequency set")
    for k in ks:
        if not 1 <= k <= n - 1:
            raise BadFrequencyIndex(f"frequency index {k} outside [1, {n - 1}]")
    return ks


def long_period(x: Sequence[float] | np.ndarray, kset: Iterable[int]) -> np.ndarray:
    """Inverse transform keeping only kset and its conjugate partners N' - k.

    The retained pair (k, N' - k) keeps the output real; anything outside the
    band, including the mean (k = 0), is annihilated.
    """
    arr = np.asarray(x, dtype=float)
    n = arr.size
    ks = _check_kset(kset, n)
    keep = set(ks) | {n - k for k in ks}
    sc = dft(arr)
    masked = np.zeros(n, dtype=complex)
    for k in keep:
        masked[k] = sc.coeffs[k]
    return inverse_dft(SpectralCoefficients(coeffs=masked))


# ---------------------------------------------------------------------------
# residual disturbance and external stimuli
# ---------------------------------------------------------------------------


def _mode_residuals(
    ms: ModeSeries, half_width: int, kset: Iterable[int]
) -> np.ndarray:
    """Smoothed-minus-long-period residual of the two leading mode series (2 x N')."""
    if ms.coeffs.shape[0] < 2:
        raise BadModeCount("need the two leading mode series")
    out = np.empty((2, ms.coeffs.shape[1]))
    for i in range(2):
        a = ms.coeffs[i]
        out[i] = moving_average(a, half_width).values - long_period(a, kset)
    return out


def residual_disturbance(
    ms: ModeSeries,
    basis: ModeBasis,
    half_width: int = 6,
    kset: Iterable[int] = KSET_BUSINESS_CYCLES,
) -> np.ndarray:
    """Per-series residual fluctuation <w_l(t)> beyond the inherent cycles.

    Combines the two leading modes: smoothed coefficients minus their
    long-period components, mapped back through the eigenvectors (M x N').
    """
    if basis.m < 2:
        raise BadModeCount("need at least two modes in the basis")
    resid = _mode_residuals(ms, half_width, kset)
    return basis.vectors[:, :2] @ resid


@dataclass(frozen=True)
class StimulusSeries:
    """Inferred external fields acting on the two leading modes."""

    months: np.ndarray
    values: np.ndarray  # 2 x N'
    beta: float
    half_width: int
    kset: tuple[int, ...]

    @property
    def eta1(self) -> np.ndarray:
        return self.values[0]

    @property
    def eta2(self) -> np.ndarray:
        return self.values[1]

    def to_csv(self, target: str | Path | TextIO) -> None:
        own = not hasattr(target, "write")
        fh: TextIO = open(target, "w", newline="") if own else target  # type: ignore[arg-type]
        try:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["date", "eta1", "eta2"])
            for j, month in enumerate(self.months):
                writer.writerow([str(month), repr(float(self.values[0, j])), repr(float(self.values[1, j]))])
        finally:
            if own:
                fh.close()


def external_stimuli(
    ms: ModeSeries,
    basis: ModeBasis,
    chi: ReducedSusceptibility,
    half_width: int = 6,
    kset: Iterable[int] = KSET_BUSINESS_CYCLES,
) -> StimulusSeries:
    """Invert the reduced linear response on the residual mode fluctuations.

    (eta1, eta2)(t) = chi^-1 (  <a1>, <a2> )(t) with <a_n> the smoothed mode
    series minus its long-period component; the system is assumed to respond
    to the fields instantaneously.
    """
    if chi.values.shape != (2, 2):
        raise BadModeCount("stimulus inversion uses exactly the two leading modes")
    det = abs(float(np.linalg.det(chi.values)))
    if det <= 1e-12 * float(np.sum(chi.values**2)):
        raise SingularSusceptibility(f"determinant {det:.3e} too small")
    resid = _mode_residuals(ms, half_width, kset)
    eta = np.linalg.solve(chi.values, resid)
    return StimulusSeries(
        months=ms.months,
        values=eta,
        beta=chi.beta,
        half_width=half_width,
        kset=tuple(sorted(set(int(k) for k in kset))),
    )


# ---------------------------------------------------------------------------
# phase tables
# ---------------------------------------------------------------------------


def _wrap_degrees(d: np.ndarray) -> np.ndarray:
    out = (np.asarray(d, dtype=float) + 180.0) % 360.0 - 180.0
    return np.where(out == -180.0, 180.0, out)


@dataclass(frozen=True)
class PhaseTable:
    """Per-series oscillation phases in degrees, relative to a reference series.

    Values lie in (-180, 180]; positive means the series peaks earlier than
    the reference.  The reference entry is exactly zero.
    """

    phases: np.ndarray
    reference: SeriesId
    period_label: str
    kset: tuple[int, ...]
    n_goods: int

    def phase(self, sid: SeriesId) -> float:
        return float(self.phases[sid.flat(self.n_goods) - 1])

    def class_average(self, alpha: Variable | int) -> float:
        """Arithmetic mean phase over goods for one variable class."""
        a = int(Variable(alpha))
        block = self.phases[(a - 1) * self.n_goods: a * self.n_goods]
        return float(block.mean())

    def to_csv(self, target: str | Path | TextIO) -> None:
        """Goods rows with P/S/I columns, one decimal, plus a class-average row."""
        own = not hasattr(target, "write")
        fh: TextIO = open(target, "w", newline="") if own else target  # type: ignore[arg-type]
        try:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["goods", "P", "S", "I"])
            g_count = self.n_goods
            for g in range(1, g_count + 1):
                row = [g] + [
                    f"{self.phases[(a - 1) * g_count + g - 1]:.1f}" for a in (1, 2, 3)
                ]
                writer.writerow(row)
            writer.writerow(
                ["average"] + [f"{self.class_average(a):.1f}" for a in (1, 2, 3)]
            )
        finally:
            if own:
                fh.close()


def _two_mode_amplitudes(ms: ModeSeries, basis: ModeBasis, k: int) -> np.ndarray:
    """Complex amplitude of each series at frequency k in the two-mode picture."""
    n = ms.coeffs.shape[1]
    if not 1 <= k <= n - 1:
        raise BadFrequencyIndex(f"frequency index {k} outside [1, {n - 1}]")
    if ms.coeffs.shape[0] < 2 or basis.m < 2:
        raise BadModeCount("need the two leading modes")
    j = np.arange(1, n + 1)
    bin_vec = np.exp(2j * np.pi * k * j / n) / np.sqrt(n)
    a_tilde = ms.coeffs[:2] @ bin_vec
    return basis.vectors[:, :2] @ a_tilde


def _ref_index(basis: ModeBasis, ref: SeriesId) -> int:
    if basis.n_goods is None:
        raise UnknownSeries("basis carries no series layout")
    return ref.flat(basis.n_goods) - 1


def mode_phases(
    ms: ModeSeries, basis: ModeBasis, k: int, ref: SeriesId
) -> PhaseTable:
    """Phases of every series at one frequency, relative to the reference.

    The two-mode reconstruction fixes each series' complex amplitude at w_k;
    the table lists wrap(arg ref - arg series) in degrees, so a positive
    entry peaks ahead of the reference.
    """
    ref_idx = _ref_index(basis, ref)
    amp = _two_mode_amplitudes(ms, basis, k)
    if np.abs(amp[ref_idx]) < 1e-12:
        raise ReferenceAmplitudeZero(f"reference {ref.label} has no amplitude at k={k}")
    rel = _wrap_degrees(np.degrees(np.angle(amp[ref_idx]) - np.angle(amp)))
    rel[ref_idx] = 0.0
    n = ms.coeffs.shape[1]
    label = f"T={round((n + 1) / k)}"
    return PhaseTable(
        phases=rel, reference=ref, period_label=label, kset=(k,), n_goods=basis.n_goods
    )


def freq_avg_phases(
    ms: ModeSeries,
    basis: ModeBasis,
    kset: Iterable[int] = KSET_LONG_PERIODS,
    ref: SeriesId | None = None,
) -> PhaseTable:
    """Amplitude-weighted circular mean of the relative phases over kset.

    Each frequency contributes its relative phase weighted by the series'
    squared amplitude there; a series with no spectral weight anywhere in
    the band has no defined phase and raises DegenerateWeights.
    """
    if ref is None:
        ref = SeriesId(Variable.PRODUCTION, 20)
    ref_idx = _ref_index(basis, ref)
    n = ms.coeffs.shape[1]
    ks = _check_kset(kset, n)
    m = basis.m
    resultant = np.zeros(m, dtype=complex)
    total = np.zeros(m)
    for k in ks:
        amp = _two_mode_amplitudes(ms, basis, k)
        weight = np.abs(amp) ** 2
        rel = np.angle(amp[ref_idx]) - np.angle(amp)
        resultant += weight * np.exp(1j * rel)
        total += weight
    for i in range(m):
        if total[i] < 1e-12:
            raise DegenerateWeights(i + 1)
    phases = _wrap_degrees(np.degrees(np.angle(resultant)))
    phases[ref_idx] = 0.0
    return PhaseTable(
        phases=phases,
        reference=ref,
        period_label="frequency-averaged",
        kset=tuple(ks),
        n_goods=basis.n_goods,
    )
