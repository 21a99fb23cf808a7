"""Noise-filtered correlation and linear-response analysis of monthly index panels.

The package takes monthly multivariate index panels (production, shipments,
inventory per goods category), separates genuine mutual correlations from
finite-sample noise with random-matrix and rotational-shuffling null models,
and answers linear-response questions (ripple effects, reduced
susceptibilities, external stimuli, business-cycle phases) under the
fluctuation-dissipation ansatz.
"""

from __future__ import annotations

__version__ = "0.1.0"

from .cycles import (
    KSET_BUSINESS_CYCLES,
    KSET_LONG_PERIODS,
    PhaseTable,
    SmoothedSeries,
    SpectralCoefficients,
    StimulusSeries,
    dft,
    external_stimuli,
    freq_avg_phases,
    inverse_dft,
    lag_correlation,
    long_period,
    mode_phases,
    moving_average,
    residual_disturbance,
)
from .errors import PanelResponseError
from .genuine import default_mode_count, genuine_matrix
from .nullmodel import (
    EdgeEstimate,
    NullEnsemble,
    ShuffleMode,
    autocorrelation,
    autocorrelations,
    complete_shuffle,
    count_significant,
    cyclic_autocorrelation,
    cyclic_shift,
    no_autocorr_band,
    null_ensemble,
    rotational_shuffle,
    upper_edge,
)
from .panel import (
    DEFAULT_GOODS_LABELS,
    DEFAULT_GOODS_WEIGHTS,
    GrowthPanel,
    Panel,
    SeriesId,
    StandardizedPanel,
    Variable,
    canonical_ids,
    load_panel,
    load_weights,
    log_growth,
    parse_month,
    parse_window,
    simple_growth,
    standardize,
    weighted_aggregate,
    write_panel_csv,
)
from .response import (
    ReducedSusceptibility,
    RippleReport,
    Susceptibility,
    final_to_intermediate,
    final_to_intermediate_csv,
    reduced_susceptibility,
    ripple,
    susceptibility,
)
from .spectral import (
    CorrMatrix,
    EigenvalueHistogram,
    ModeBasis,
    ModeSeries,
    MpParams,
    basis_from_json,
    basis_to_json,
    corr_from_csv,
    corr_from_json,
    corr_to_csv,
    corr_to_json,
    correlation_matrix,
    eigendecompose,
    eigenvalue_histogram,
    mode_series,
    mp_bounds,
    mp_density,
    reconstruct,
)
from .synth import (
    Ar1,
    PlantedMode,
    Sinusoid,
    SynthSpec,
    generate,
    spec_from_json,
    spec_to_json,
    to_level_panel,
)

__all__ = [
    "__version__",
    # panel
    "Variable", "SeriesId", "Panel", "GrowthPanel", "StandardizedPanel",
    "DEFAULT_GOODS_LABELS", "DEFAULT_GOODS_WEIGHTS", "canonical_ids",
    "load_panel", "load_weights", "write_panel_csv", "log_growth",
    "simple_growth", "standardize", "weighted_aggregate", "parse_month",
    "parse_window",
    # spectral
    "CorrMatrix", "ModeBasis", "ModeSeries", "MpParams", "EigenvalueHistogram",
    "correlation_matrix", "eigendecompose", "mode_series", "reconstruct",
    "mp_bounds", "mp_density", "eigenvalue_histogram",
    "corr_to_csv", "corr_from_csv", "corr_to_json", "corr_from_json",
    "basis_to_json", "basis_from_json",
    # nullmodel
    "ShuffleMode", "NullEnsemble", "EdgeEstimate", "autocorrelation",
    "autocorrelations", "cyclic_autocorrelation", "no_autocorr_band",
    "cyclic_shift", "complete_shuffle", "rotational_shuffle", "null_ensemble",
    "upper_edge", "count_significant",
    # genuine
    "genuine_matrix", "default_mode_count",
    # response
    "Susceptibility", "RippleReport", "ReducedSusceptibility",
    "susceptibility", "ripple", "final_to_intermediate",
    "final_to_intermediate_csv", "reduced_susceptibility",
    # cycles
    "KSET_BUSINESS_CYCLES", "KSET_LONG_PERIODS", "SmoothedSeries",
    "SpectralCoefficients", "PhaseTable", "StimulusSeries", "moving_average",
    "lag_correlation", "dft", "inverse_dft", "long_period",
    "residual_disturbance", "external_stimuli", "mode_phases",
    "freq_avg_phases",
    # synth
    "SynthSpec", "PlantedMode", "Sinusoid", "Ar1", "generate",
    "to_level_panel", "spec_to_json", "spec_from_json",
    # errors
    "PanelResponseError",
]
