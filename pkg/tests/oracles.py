"""Independent reference implementations used as test oracles.

Everything here is deliberately written from scratch (brute-force loops,
direct sums, high-precision arithmetic) so the tests never validate the
package against itself.
"""

from __future__ import annotations

from decimal import Decimal, getcontext

import numpy as np

# ---------------------------------------------------------------------------
# Marchenko-Pastur reference (high-precision closed form + numeric CDF)
# ---------------------------------------------------------------------------

_PI_50 = Decimal("3.14159265358979323846264338327950288419716939937511")


def mp_density_decimal(lam: float, q: float) -> float:
    """Closed-form density evaluated with 50-digit decimal arithmetic."""
    getcontext().prec = 50
    qd = Decimal(repr(q))
    lamd = Decimal(repr(lam))
    root = qd.sqrt()
    hi = (1 + root) ** 2 / qd
    lo = (1 - root) ** 2 / qd
    if not (lo <= lamd <= hi):
        return 0.0
    rho = (qd / (2 * _PI_50)) * ((hi - lamd) * (lamd - lo)).sqrt() / lamd
    return float(rho)


def mp_bounds_decimal(q: float) -> tuple[float, float]:
    getcontext().prec = 50
    qd = Decimal(repr(q))
    root = qd.sqrt()
    return float((1 - root) ** 2 / qd), float((1 + root) ** 2 / qd)


class MpReference:
    """Grid-based CDF and inverse-CDF sampler for the Marchenko-Pastur law."""

    def __init__(self, q: float, grid_points: int = 20001):
        self.q = q
        lo, hi = mp_bounds_decimal(q)
        self.lo, self.hi = lo, hi
        x = np.linspace(lo, hi, grid_points)
        dens = np.zeros_like(x)
        inner = (x > lo) & (x < hi)
        dens[inner] = (
            q / (2.0 * np.pi) * np.sqrt((hi - x[inner]) * (x[inner] - lo)) / x[inner]
        )
        cdf = np.concatenate([[0.0], np.cumsum((dens[1:] + dens[:-1]) / 2.0 * np.diff(x))])
        self._x = x
        self._cdf = cdf / cdf[-1]

    def cdf(self, lam):
        return np.interp(lam, self._x, self._cdf, left=0.0, right=1.0)

    def sample(self, n: int, rng: np.random.Generator) -> np.ndarray:
        return np.interp(rng.uniform(0.0, 1.0, size=n), self._cdf, self._x)


def ks_distance(samples: np.ndarray, cdf) -> float:
    """Kolmogorov-Smirnov distance between an empirical sample and a CDF."""
    x = np.sort(np.asarray(samples, dtype=float))
    n = x.size
    f = np.asarray(cdf(x), dtype=float)
    upper = np.abs(np.arange(1, n + 1) / n - f)
    lower = np.abs(np.arange(0, n) / n - f)
    return float(max(upper.max(), lower.max()))


# ---------------------------------------------------------------------------
# brute-force signal oracles
# ---------------------------------------------------------------------------


def direct_dft(x: np.ndarray) -> np.ndarray:
    """O(N^2) direct evaluation of (1/sqrt(N)) sum_j x_j e^{+2 pi i k j / N}."""
    x = np.asarray(x, dtype=float)
    n = x.size
    out = np.zeros(n, dtype=complex)
    for k in range(n):
        acc = 0.0 + 0.0j
        for j in range(1, n + 1):
            acc += x[j - 1] * np.exp(2j * np.pi * k * j / n)
        out[k] = acc / np.sqrt(n)
    return out


def brute_moving_average(x: np.ndarray, xi: int) -> np.ndarray:
    """Window mean with explicit clipping, one point at a time."""
    x = np.asarray(x, dtype=float)
    n = x.size
    out = np.empty(n)
    for j in range(n):
        lo = max(0, j - xi)
        hi = min(n, j + xi + 1)
        out[j] = x[lo:hi].mean()
    return out


def brute_autocorrelation(x: np.ndarray, lag: int) -> float:
    x = np.asarray(x, dtype=float)
    n = x.size
    acc = 0.0
    for j in range(n - lag):
        acc += x[j] * x[j + lag]
    return acc / (n - lag)


def circular_mean_degrees(phases_deg: np.ndarray, weights: np.ndarray) -> float:
    """Weighted circular mean, computed from scratch."""
    rad = np.radians(np.asarray(phases_deg, dtype=float))
    w = np.asarray(weights, dtype=float)
    s = np.sum(w * np.sin(rad))
    c = np.sum(w * np.cos(rad))
    return float(np.degrees(np.arctan2(s, c)))


# ---------------------------------------------------------------------------
# Gaussian conditional-expectation oracle
# ---------------------------------------------------------------------------


def gaussian_regression_slope(
    corr: np.ndarray, source: int, target: int, n_draws: int, rng: np.random.Generator
) -> float:
    """Regression slope of target on source over simulated correlated draws."""
    chol = np.linalg.cholesky(np.asarray(corr, dtype=float))
    z = rng.standard_normal((n_draws, corr.shape[0]))
    draws = z @ chol.T
    s = draws[:, source]
    t = draws[:, target]
    return float(np.sum(s * t) / np.sum(s * s))


# ---------------------------------------------------------------------------
# panel construction helpers (plain string CSV, independent of the writer)
# ---------------------------------------------------------------------------


def panel_csv_text(
    months: list[str], columns: dict[str, list[object]]
) -> str:
    """Build a panel CSV by naive string assembly."""
    header = "date," + ",".join(columns.keys())
    lines = [header]
    for j, month in enumerate(months):
        cells = []
        for key in columns:
            v = columns[key][j]
            cells.append("" if v is None else str(v))
        lines.append(month + "," + ",".join(cells))
    return "\n".join(lines) + "\n"


def month_list(start: str, count: int) -> list[str]:
    year, month = (int(p) for p in start.split("-"))
    out = []
    for _ in range(count):
        out.append(f"{year:04d}-{month:02d}")
        month += 1
        if month == 13:
            month = 1
            year += 1
    return out
