"""Correlation matrices, eigenmode decomposition, and the Marchenko-Pastur law.

The equal-time correlation matrix of a standardized panel is the time average
C_lm = <w_l(t) w_m(t)>_t.  Its eigendecomposition yields mode strengths
(eigenvalues, summing to M) and orthonormal mode vectors; projecting the panel
onto the vectors gives per-mode time series a_n(t) whose mean-square strengths
reproduce the eigenvalues.

For a panel of independent noise with aspect ratio Q = N'/M > 1 the
eigenvalue density converges to the Marchenko-Pastur form with support
[(1 - sqrt(Q))^2 / Q, (1 + sqrt(Q))^2 / Q]; eigenvalues above that support
are candidates for genuine correlation structure.
"""

from __future__ import annotations

import csv
import json
import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence, TextIO

import numpy as np

from .errors import (
    BadModeIndex,
    DimensionMismatch,
    EmptyInput,
    NotSymmetric,
    QOutOfRange,
    SchemaError,
)
from .panel import StandardizedPanel

_SYM_TOL = 1e-12
_DIAG_TOL = 1e-12
_RAW_ENTRY_TOL = 1e-9
_GENUINE_ENTRY_TOL = 0.05
_PSD_TOL = 1e-9
_ORTHO_TOL = 1e-10
_EIG_RESID_FACTOR = 1e-9
_SIGN_TOL = 1e-12
_TIE_TOL = 1e-12


@dataclass(frozen=True)
class CorrMatrix:
    """Symmetric unit-diagonal correlation matrix.

    ``kind`` is "raw" for a directly measured matrix (positive semidefinite)
    or "genuine" for a noise-filtered reconstruction, which keeps the unit
    diagonal but is not guaranteed positive semidefinite and may carry
    off-diagonal entries slightly outside [-1, 1] (warned, tolerated up to
    +-0.05).  ``n_goods`` tags the 3-variable-class layout when known;
    ``n_modes`` records how many modes built a genuine matrix.
    """

    values: np.ndarray
    kind: str = "raw"
    n_goods: int | None = None
    n_modes: int | None = None

    def __post_init__(self):
        v = np.array(self.values, dtype=float)
        if self.kind not in ("raw", "genuine"):
            raise SchemaError(f"unknown matrix kind {self.kind!r}")
        if v.ndim != 2 or v.shape[0] != v.shape[1]:
            raise SchemaError("correlation matrix must be square")
        if np.abs(v - v.T).max() > _SYM_TOL:
            raise NotSymmetric(f"asymmetry {np.abs(v - v.T).max():.3e} exceeds {_SYM_TOL}")
        if np.abs(np.diag(v) - 1.0).max() > _DIAG_TOL:
            raise SchemaError("diagonal entries must equal 1")
        limit = _RAW_ENTRY_TOL if self.kind == "raw" else _GENUINE_ENTRY_TOL
        over = np.abs(v).max() - 1.0
        if over > limit:
            raise SchemaError(f"entries exceed [-1, 1] by {over:.3e}")
        if self.kind == "genuine" and over > 0.0:
            warnings.warn(
                f"noise-filtered matrix has entries outside [-1, 1] by {over:.3e}",
                stacklevel=2,
            )
        if self.kind == "raw":
            min_eig = float(np.linalg.eigvalsh(v)[0])
            if min_eig < -_PSD_TOL:
                raise SchemaError(f"raw matrix not positive semidefinite ({min_eig:.3e})")
        if self.n_goods is not None and v.shape[0] != 3 * self.n_goods:
            raise SchemaError("n_goods inconsistent with matrix dimension")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def m(self) -> int:
        return self.values.shape[0]


@dataclass(frozen=True)
class ModeBasis:
    """Sorted eigenvalues and orthonormal, sign-fixed eigenvectors.

    ``vectors[:, n]`` is the unit-norm vector of mode n (0-based column for
    the 1-based mode n+1); eigenvalues are in descending order.
    """

    eigenvalues: np.ndarray
    vectors: np.ndarray
    n_goods: int | None = None
    sign_convention: str = "production-sum"

    def __post_init__(self):
        lam = np.array(self.eigenvalues, dtype=float)
        vec = np.array(self.vectors, dtype=float)
        m = lam.size
        if vec.shape != (m, m):
            raise DimensionMismatch("eigenvector matrix must be M x M")
        if np.any(np.diff(lam) > 1e-10):
            raise SchemaError("eigenvalues must be sorted in descending order")
        gram = vec.T @ vec
        if np.abs(gram - np.eye(m)).max() > _ORTHO_TOL:
            raise SchemaError("eigenvectors are not orthonormal")
        lam.setflags(write=False)
        vec.setflags(write=False)
        object.__setattr__(self, "eigenvalues", lam)
        object.__setattr__(self, "vectors", vec)

    @property
    def m(self) -> int:
        return self.eigenvalues.size

    def vector(self, n: int) -> np.ndarray:
        """Eigenvector of 1-based mode index n."""
        if not 1 <= n <= self.m:
            raise BadModeIndex(f"mode {n} outside [1, {self.m}]")
        return self.vectors[:, n - 1]


@dataclass(frozen=True)
class ModeSeries:
    """Projection coefficients a_n(t_j) of a panel on a mode basis (M x N')."""

    months: np.ndarray
    coeffs: np.ndarray

    def __post_init__(self):
        months = np.asarray(self.months, dtype="datetime64[M]")
        coeffs = np.array(self.coeffs, dtype=float)
        if coeffs.ndim != 2 or months.shape != (coeffs.shape[1],):
            raise DimensionMismatch("mode coefficients and months are inconsistent")
        coeffs.setflags(write=False)
        object.__setattr__(self, "months", months)
        object.__setattr__(self, "coeffs", coeffs)

    def mode(self, n: int) -> np.ndarray:
        """Coefficient series of 1-based mode index n."""
        if not 1 <= n <= self.coeffs.shape[0]:
            raise BadModeIndex(f"mode {n} outside [1, {self.coeffs.shape[0]}]")
        return self.coeffs[n - 1]


# ---------------------------------------------------------------------------
# construction and decomposition
# ---------------------------------------------------------------------------


def correlation_matrix(w: StandardizedPanel) -> CorrMatrix:
    """Equal-time correlation matrix C_lm = <w_l(t) w_m(t)>_t."""
    values = w.values @ w.values.T / w.n_obs
    values = (values + values.T) / 2.0
    # unit by construction for standardized input; drop the rounding dust
    np.fill_diagonal(values, 1.0)
    return CorrMatrix(values=values, kind="raw", n_goods=w.n_goods)


def _fix_signs(vectors: np.ndarray, n_goods: int | None) -> np.ndarray:
    """Orient each column deterministically.

    The orientation sum runs over the production block (first G components)
    when the layout is known, otherwise over all components; on a vanishing
    sum the largest-magnitude component is made positive.
    """
    v = vectors.copy()
    block = slice(0, n_goods) if n_goods is not None else slice(None)
    for i in range(v.shape[1]):
        s = v[block, i].sum()
        if abs(s) <= _SIGN_TOL:
            lead = int(np.argmax(np.abs(v[:, i])))
            s = v[lead, i]
        if s < 0:
            v[:, i] = -v[:, i]
    return v


def _break_ties(lam: np.ndarray, vec: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Reorder equal eigenvalues by descending lexicographic column order."""
    m = lam.size
    order = list(range(m))
    start = 0
    while start < m:
        stop = start + 1
        while stop < m and abs(lam[stop] - lam[start]) <= _TIE_TOL * max(1.0, abs(lam[start])):
            stop += 1
        if stop - start > 1:
            group = order[start:stop]
            group.sort(key=lambda i: tuple(vec[:, i]), reverse=True)
            order[start:stop] = group
        start = stop
    order = np.asarray(order)
    return lam[order], vec[:, order]


def eigendecompose(c: CorrMatrix | np.ndarray) -> ModeBasis:
    """Eigenvalues (descending) and sign-fixed orthonormal eigenvectors."""
    if isinstance(c, CorrMatrix):
        values, n_goods = c.values, c.n_goods
    else:
        values = np.asarray(c, dtype=float)
        if values.ndim != 2 or values.shape[0] != values.shape[1]:
            raise NotSymmetric("input must be a square matrix")
        if np.abs(values - values.T).max() > _SYM_TOL:
            raise NotSymmetric("matrix is not symmetric")
        n_goods = None
    lam, vec = np.linalg.eigh(values)
    lam, vec = lam[::-1].copy(), vec[:, ::-1].copy()
    vec = _fix_signs(vec, n_goods)
    lam, vec = _break_ties(lam, vec)
    resid = np.abs(values @ vec - vec * lam).max()
    if resid > _EIG_RESID_FACTOR * lam.size:
        raise RuntimeError(f"eigensolver residual {resid:.3e} too large")
    convention = "production-sum" if n_goods is not None else "component-sum"
    return ModeBasis(
        eigenvalues=lam, vectors=vec, n_goods=n_goods, sign_convention=convention
    )


def mode_series(w: StandardizedPanel, basis: ModeBasis) -> ModeSeries:
    """Per-mode time series a_n(t_j), recovered by orthonormal projection.

    Summing a_n(t_j) V_l^(n) over all M modes reconstructs w_l(t_j) exactly.
    """
    if basis.m != w.n_series:
        raise DimensionMismatch(
            f"basis dimension {basis.m} does not match panel {w.n_series}"
        )
    return ModeSeries(months=w.months, coeffs=basis.vectors.T @ w.values)


def reconstruct(basis: ModeBasis, modes: Iterable[int]) -> np.ndarray:
    """Partial spectral sum over the given 1-based mode indices."""
    idx = sorted(set(int(n) for n in modes))
    for n in idx:
        if not 1 <= n <= basis.m:
            raise BadModeIndex(f"mode {n} outside [1, {basis.m}]")
    out = np.zeros((basis.m, basis.m))
    for n in idx:
        v = basis.vectors[:, n - 1]
        out += basis.eigenvalues[n - 1] * np.outer(v, v)
    return out


# ---------------------------------------------------------------------------
# Marchenko-Pastur reference law
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MpParams:
    """Aspect ratio Q = N'/M and the implied eigenvalue support bounds."""

    q: float
    lower: float
    upper: float

    @classmethod
    def from_q(cls, q: float) -> "MpParams":
        lo, hi = mp_bounds(q)
        return cls(q=float(q), lower=lo, upper=hi)

    @classmethod
    def from_shape(cls, n_series: int, n_obs: int) -> "MpParams":
        return cls.from_q(n_obs / n_series)


def mp_bounds(q: float) -> tuple[float, float]:
    """Support bounds (1 -+ sqrt(Q))^2 / Q of the Marchenko-Pastur density."""
    if q <= 1.0:
        raise QOutOfRange(f"aspect ratio must exceed 1, got {q}")
    root = np.sqrt(q)
    return float((1.0 - root) ** 2 / q), float((1.0 + root) ** 2 / q)


def mp_density(lam: float | np.ndarray, q: float) -> float | np.ndarray:
    """Marchenko-Pastur eigenvalue density at lam for aspect ratio q > 1."""
    lo, hi = mp_bounds(q)
    lam_arr = np.asarray(lam, dtype=float)
    inside = (lam_arr >= lo) & (lam_arr <= hi)
    radicand = np.where(inside, (hi - lam_arr) * (lam_arr - lo), 0.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        dens = np.where(
            inside, q / (2.0 * np.pi) * np.sqrt(radicand) / lam_arr, 0.0
        )
    return float(dens) if np.isscalar(lam) else dens


@dataclass(frozen=True)
class EigenvalueHistogram:
    """Normalized histogram: density over bins, integrating to one."""

    bin_edges: np.ndarray
    density: np.ndarray

    @property
    def centers(self) -> np.ndarray:
        return (self.bin_edges[:-1] + self.bin_edges[1:]) / 2.0


def eigenvalue_histogram(
    values: Sequence[float] | np.ndarray,
    bins: int,
    value_range: tuple[float, float] | None = None,
) -> EigenvalueHistogram:
    """Histogram of eigenvalues, normalized to integrate to one.

    Spans [min, max] of the data unless ``value_range`` is given (the
    plotting default elsewhere is 50 bins over [0, 1.05 * max]).
    """
    arr = np.asarray(values, dtype=float).ravel()
    if arr.size == 0:
        raise EmptyInput("no eigenvalues to histogram")
    if bins < 1:
        raise SchemaError(f"bins must be >= 1, got {bins}")
    density, edges = np.histogram(arr, bins=bins, range=value_range, density=True)
    return EigenvalueHistogram(bin_edges=edges, density=density)


# ---------------------------------------------------------------------------
# serialization (exact round trip via repr-precision floats)
# ---------------------------------------------------------------------------


def _open_w(target: str | Path | TextIO):
    return open(target, "w", newline="") if not hasattr(target, "write") else target


def _open_r(source: str | Path | TextIO):
    return open(source, newline="") if not hasattr(source, "read") else source


def corr_to_csv(c: CorrMatrix, target: str | Path | TextIO) -> None:
    """Row-major CSV with a two-line header carrying kind and dimensions."""
    fh = _open_w(target)
    own = fh is not target
    try:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["kind", "m", "goods", "k"])
        writer.writerow(
            [c.kind, c.m, "" if c.n_goods is None else c.n_goods,
             "" if c.n_modes is None else c.n_modes]
        )
        for row in c.values:
            writer.writerow([repr(float(x)) for x in row])
    finally:
        if own:
            fh.close()


def corr_from_csv(source: str | Path | TextIO) -> CorrMatrix:
    fh = _open_r(source)
    own = fh is not source
    try:
        rows = list(csv.reader(fh))
    finally:
        if own:
            fh.close()
    rows = [r for r in rows if not (r and r[0].startswith("#"))]
    if len(rows) < 3 or rows[0][:2] != ["kind", "m"]:
        raise SchemaError("not a correlation-matrix CSV")
    head = dict(zip(rows[0], rows[1]))
    m = int(head["m"])
    values = np.array([[float(x) for x in row] for row in rows[2: 2 + m]])
    return CorrMatrix(
        values=values,
        kind=head["kind"],
        n_goods=int(head["goods"]) if head.get("goods") else None,
        n_modes=int(head["k"]) if head.get("k") else None,
    )


def corr_to_json(c: CorrMatrix, target: str | Path | TextIO | None = None) -> dict:
    doc = {
        "kind": c.kind,
        "m": c.m,
        "goods": c.n_goods,
        "k": c.n_modes,
        "values": c.values.tolist(),
    }
    if target is not None:
        fh = _open_w(target)
        own = fh is not target
        try:
            json.dump(doc, fh)
        finally:
            if own:
                fh.close()
    return doc


def _read_json(source: str | Path | TextIO | dict) -> dict:
    if isinstance(source, dict):
        return source
    if hasattr(source, "read"):
        return json.load(source)  # type: ignore[arg-type]
    with open(source) as fh:
        return json.load(fh)


def corr_from_json(source: str | Path | TextIO | dict) -> CorrMatrix:
    doc = _read_json(source)
    return CorrMatrix(
        values=np.asarray(doc["values"], dtype=float),
        kind=doc["kind"],
        n_goods=doc.get("goods"),
        n_modes=doc.get("k"),
    )


def basis_to_json(b: ModeBasis, target: str | Path | TextIO | None = None) -> dict:
    doc = {
        "kind": "mode-basis",
        "m": b.m,
        "goods": b.n_goods,
        "sign_convention": b.sign_convention,
        "eigenvalues": b.eigenvalues.tolist(),
        "eigenvectors": b.vectors.tolist(),
    }
    if target is not None:
        fh = _open_w(target)
        own = fh is not target
        try:
            json.dump(doc, fh)
        finally:
            if own:
                fh.close()
    return doc


def basis_from_json(source: str | Path | TextIO | dict) -> ModeBasis:
    doc = _read_json(source)
    if doc.get("kind") != "mode-basis":
        raise SchemaError("not a mode-basis document")
    return ModeBasis(
        eigenvalues=np.asarray(doc["eigenvalues"], dtype=float),
        vectors=np.asarray(doc["eigenvectors"], dtype=float),
        n_goods=doc.get("goods"),
        sign_convention=doc.get("sign_convention", "production-sum"),
    )
