"""Linear response under the fluctuation-dissipation ansatz.

In equilibrium, the susceptibility matrix relating induced mean shifts to
weak constant external fields is proportional to the unperturbed correlation
matrix: chi = beta * C.  Eliminating the unobservable field gives the ripple
relation <w_l> = C_lm <w_m>: the correlation entries themselves quantify how
a unit shift applied to one series propagates to every other.  The same
relation follows from Onsager's regression hypothesis, or simply from the
conditional expectation of one standardized Gaussian variable given another.

With the noise-filtered matrix in place of the raw one, these relations read
off interindustrial ripple effects directly.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import TextIO

import numpy as np

from .errors import BadBeta, BadModeCount, LayoutMismatch, UnknownSeries
from .panel import DEFAULT_GOODS_LABELS, SeriesId, Variable
from .spectral import CorrMatrix, ModeBasis


@dataclass(frozen=True)
class Susceptibility:
    """Linear-response matrix chi = beta * C (M x M, symmetric)."""

    values: np.ndarray
    beta: float

    def __post_init__(self):
        v = np.array(self.values, dtype=float)
        v.setflags(write=False)
        object.__setattr__(self, "values", v)


@dataclass(frozen=True)
class RippleReport:
    """Responses of all series to a shift applied at one source series."""

    source: SeriesId
    shift: float
    responses: np.ndarray
    n_goods: int

    def response(self, sid: SeriesId) -> float:
        return float(self.responses[sid.flat(self.n_goods) - 1])


@dataclass(frozen=True)
class ReducedSusceptibility:
    """Susceptibility projected on the leading eigenmodes (k x k, symmetric)."""

    values: np.ndarray
    beta: float

    def __post_init__(self):
        v = np.array(self.values, dtype=float)
        v = (v + v.T) / 2.0
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def normalized(self) -> np.ndarray:
        """Values relative to the leading diagonal entry."""
        return self.values / self.values[0, 0]


def susceptibility(c: CorrMatrix, beta: float = 1.0) -> Susceptibility:
    """Scale a correlation matrix by the inverse-temperature parameter.

    All ripple quantities are ratios chi_lm / chi_mm, so beta cancels in
    every reported response; it defaults to 1 and only sets an overall scale.
    """
    if beta <= 0:
        raise BadBeta(f"beta must be positive, got {beta}")
    return Susceptibility(values=beta * c.values, beta=beta)


def ripple(cg: CorrMatrix, source: SeriesId, shift: float = 1.0) -> RippleReport:
    """Mean shifts induced in every series by a shift at the source series.

    The response of series l is C_lm * shift where m is the source; the
    source itself responds with exactly the applied shift (unit diagonal).
    Interpretation is up to the caller: any source/target pair is computed,
    but the economically grounded direction is shipments of final demand
    goods driving production of producer goods.
    """
    if cg.n_goods is None:
        raise UnknownSeries("matrix carries no series layout")
    try:
        idx = source.flat(cg.n_goods) - 1
    except Exception:
        raise UnknownSeries(f"series {source} not in a {cg.n_goods}-goods layout") from None
    responses = cg.values[:, idx] * shift
    responses[idx] = shift  # unit diagonal, kept exact
    return RippleReport(source=source, shift=shift, responses=responses, n_goods=cg.n_goods)


def final_to_intermediate(cg: CorrMatrix) -> np.ndarray:
    """Ripple table from final-demand shipments to producer-goods production.

    Returns a 19 x 2 array: row g (1-based final demand goods category),
    column 0 the response of production of goods 20 (Mining & Manufacturing)
    and column 1 of goods 21 (Others) to a unit growth-rate increase in
    shipments of goods g.  Requires the standard 21-goods layout.
    """
    if cg.n_goods != 21:
        raise LayoutMismatch(f"expected the 21-goods layout, got {cg.n_goods}")
    out = np.empty((19, 2))
    for g in range(1, 20):
        ship = SeriesId(Variable.SHIPMENTS, g).flat(21) - 1
        for col, target_goods in enumerate((20, 21)):
            prod = SeriesId(Variable.PRODUCTION, target_goods).flat(21) - 1
            out[g - 1, col] = cg.values[prod, ship]
    return out


def final_to_intermediate_csv(
    genuine: CorrMatrix,
    raw: CorrMatrix | None,
    target: str | Path | TextIO,
) -> None:
    """Write the final-demand -> producer-goods table with goods labels.

    Columns g20/g21 appear for the noise-filtered matrix and, when a raw
    matrix is supplied, for the raw one alongside.
    """
    table_g = final_to_intermediate(genuine)
    table_r = final_to_intermediate(raw) if raw is not None else None
    own = not hasattr(target, "write")
    fh: TextIO = open(target, "w", newline="") if own else target  # type: ignore[arg-type]
    try:
        writer = csv.writer(fh, lineterminator="\n")
        header = ["goods", "label", "g20_genuine", "g21_genuine"]
        if table_r is not None:
            header += ["g20_raw", "g21_raw"]
        writer.writerow(header)
        for g in range(1, 20):
            row = [g, DEFAULT_GOODS_LABELS[g],
                   repr(float(table_g[g - 1, 0])), repr(float(table_g[g - 1, 1]))]
            if table_r is not None:
                row += [repr(float(table_r[g - 1, 0])), repr(float(table_r[g - 1, 1]))]
            writer.writerow(row)
    finally:
        if own:
            fh.close()


def reduced_susceptibility(
    c: CorrMatrix | np.ndarray,
    basis: ModeBasis,
    k: int = 2,
    beta: float = 1.0,
) -> ReducedSusceptibility:
    """Susceptibility in the subspace of the first k eigenmodes.

    chi_hat[m, n] = beta * V(m)^T C V(n).  On the raw correlation matrix
    this is exactly beta * diag(lambda_1 .. lambda_k) by orthonormality; on
    the noise-filtered matrix the diagonal reset adds small corrections.
    """
    if beta <= 0:
        raise BadBeta(f"beta must be positive, got {beta}")
    if not 1 <= k <= basis.m:
        raise BadModeCount(f"mode count {k} outside [1, {basis.m}]")
    values = c.values if isinstance(c, CorrMatrix) else np.asarray(c, dtype=float)
    if values.shape != (basis.m, basis.m):
        raise BadModeCount("matrix and basis dimensions differ")
    vk = basis.vectors[:, :k]
    return ReducedSusceptibility(values=beta * (vk.T @ values @ vk), beta=beta)
