"""Noise-filtered ("genuine") correlation matrix from significant modes.

Keeping only the statistically significant eigenmodes in the spectral sum
and resetting the diagonal to one yields a correlation matrix that retains
the measured mutual correlations while discarding the finite-sample noise
floor.  The result is symmetric with a unit diagonal by construction but is
not guaranteed positive semidefinite; downstream linear-response relations
use its entries individually, so that loss is benign.
"""

from __future__ import annotations

import numpy as np

from .errors import BadModeCount
from .nullmodel import NullEnsemble, count_significant, upper_edge
from .spectral import CorrMatrix, ModeBasis


def genuine_matrix(basis: ModeBasis, k: int) -> CorrMatrix:
    """Low-rank reconstruction from the first k modes, diagonal reset to 1.

    k = 0 yields the identity; k = M reproduces the raw matrix (whose
    diagonal is already one).
    """
    if not 0 <= k <= basis.m:
        raise BadModeCount(f"mode count {k} outside [0, {basis.m}]")
    vk = basis.vectors[:, :k]
    values = (vk * basis.eigenvalues[:k]) @ vk.T
    np.fill_diagonal(values, 1.0)
    values = (values + values.T) / 2.0
    return CorrMatrix(values=values, kind="genuine", n_goods=basis.n_goods, n_modes=k)


def default_mode_count(
    basis: ModeBasis, ensemble: NullEnsemble, confidence: float = 0.95
) -> int:
    """Significant-mode count against the upper end of a null-model edge.

    The threshold is the high end of the rotational-shuffle (or other null)
    largest-eigenvalue interval, so a mode counts only when it clears the
    null edge including its Monte Carlo uncertainty.
    """
    _, _, high = upper_edge(ensemble, confidence)
    return count_significant(basis, high)
