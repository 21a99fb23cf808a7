import io

import numpy as np
import pytest

from panelresponse import (
    KSET_BUSINESS_CYCLES,
    ModeSeries,
    ReducedSusceptibility,
    SeriesId,
    StandardizedPanel,
    Variable,
    correlation_matrix,
    dft,
    eigendecompose,
    external_stimuli,
    freq_avg_phases,
    inverse_dft,
    lag_correlation,
    long_period,
    mode_phases,
    mode_series,
    moving_average,
    residual_disturbance,
)
from panelresponse.errors import (
    BadFrequencyIndex,
    DegenerateWeights,
    EmptyInput,
    InsufficientOverlap,
    ReferenceAmplitudeZero,
    SingularSusceptibility,
    WindowTooWide,
)

from oracles import brute_moving_average, circular_mean_degrees, direct_dft

N = 240
T_INDEX = np.arange(1, N + 1, dtype=float)


def tone(k: int, delta_deg: float = 0.0, n: int = N) -> np.ndarray:
    """Unit-variance cosine at integer frequency bin k, phase shift in degrees."""
    t = np.arange(1, n + 1, dtype=float)
    return np.sqrt(2.0) * np.cos(2.0 * np.pi * k * t / n + np.radians(delta_deg))


def tone_panel(rows) -> StandardizedPanel:
    return StandardizedPanel.from_values(np.asarray(rows, dtype=float))


def rank2_pipeline(rows):
    w = tone_panel(rows)
    basis = eigendecompose(correlation_matrix(w))
    return w, basis, mode_series(w, basis)


# ---------------------------------------------------------------------------
# moving average
# ---------------------------------------------------------------------------


def test_moving_average_identity_and_constants():
    x = np.random.default_rng(1).standard_normal(50)
    assert np.array_equal(moving_average(x, 0).values, x)
    const = np.full(30, 3.25)
    for xi in (1, 5, 12):
        assert np.allclose(moving_average(const, xi).values, 3.25, atol=1e-14)


def test_moving_average_linear_ramp_interior():
    ramp = np.arange(40, dtype=float)
    xi = 6
    smooth = moving_average(ramp, xi).values
    assert np.allclose(smooth[xi:-xi], ramp[xi:-xi], atol=1e-12)


def test_moving_average_matches_brute_force():
    rng = np.random.default_rng(2)
    x = rng.standard_normal(73)
    for xi in (1, 3, 10, 36, 72):
        assert np.allclose(
            moving_average(x, xi).values, brute_moving_average(x, xi), atol=1e-12
        )


def test_moving_average_linearity():
    rng = np.random.default_rng(3)
    x, y = rng.standard_normal((2, 40))
    a, b = 2.5, -1.25
    combined = moving_average(a * x + b * y, 4).values
    separate = a * moving_average(x, 4).values + b * moving_average(y, 4).values
    assert np.allclose(combined, separate, atol=1e-12)


def test_moving_average_window_too_wide():
    with pytest.raises(WindowTooWide):
        moving_average(np.zeros(10), 10)
    with pytest.raises(ValueError):
        moving_average(np.zeros(10), -1)


# ---------------------------------------------------------------------------
# lag correlation
# ---------------------------------------------------------------------------


def test_lag_correlation_self():
    x = np.random.default_rng(4).standard_normal(100)
    assert lag_correlation(x, x, 0, 0) == pytest.approx(1.0, abs=1e-14)


def test_lag_correlation_quadrature_tones():
    t = np.arange(1, 201, dtype=float)
    x = np.sin(2 * np.pi * t / 20.0)
    y = np.cos(2 * np.pi * t / 20.0)
    assert abs(lag_correlation(x, y, 0, 0)) <= 1e-10


def test_lag_correlation_detects_shift():
    rng = np.random.default_rng(5)
    x = rng.standard_normal(300)
    shift = 7
    y = np.roll(x, -shift)  # y(t) = x(t + shift): x lags y by `shift`
    # C(tau) = <x(t) y(t - tau)> peaks at tau = shift
    values = [lag_correlation(x, y, tau, 0) for tau in range(0, 15)]
    assert int(np.argmax(values)) == shift


def test_lag_correlation_insufficient_overlap():
    x = np.arange(10, dtype=float)
    with pytest.raises(InsufficientOverlap):
        lag_correlation(x, x, 9, 0)


# ---------------------------------------------------------------------------
# discrete Fourier transform
# ---------------------------------------------------------------------------


def test_dft_zero_series():
    assert np.allclose(dft(np.zeros(32)).coeffs, 0.0, atol=0)


def test_dft_matches_direct_sum():
    rng = np.random.default_rng(6)
    x = rng.standard_normal(64)
    assert np.abs(dft(x).coeffs - direct_dft(x)).max() <= 1e-10


def test_dft_single_tone_support():
    x = np.cos(2 * np.pi * 4 * T_INDEX / N)
    power = np.abs(dft(x).coeffs) ** 2
    on = power[[4, N - 4]].sum()
    assert on / power.sum() == pytest.approx(1.0, abs=1e-12)


def test_dft_round_trip_and_parseval():
    rng = np.random.default_rng(7)
    x = rng.standard_normal(239)
    sc = dft(x)
    assert np.abs(inverse_dft(sc) - x).max() <= 1e-10
    energy_x = float(np.sum(x**2))
    energy_c = float(np.sum(np.abs(sc.coeffs) ** 2))
    assert abs(energy_c - energy_x) <= 1e-8 * energy_x


def test_dft_conjugate_symmetry():
    x = np.random.default_rng(8).standard_normal(100)
    c = dft(x).coeffs
    for k in range(1, 50):
        assert abs(c[100 - k] - np.conj(c[k])) <= 1e-10


# ---------------------------------------------------------------------------
# long-period extraction
# ---------------------------------------------------------------------------


def test_long_period_recovers_in_band_tone():
    x = np.cos(2 * np.pi * 4 * T_INDEX / N)
    assert np.abs(long_period(x, [4]) - x).max() <= 1e-10
    assert np.abs(long_period(x, KSET_BUSINESS_CYCLES) - x).max() <= 1e-10


def test_long_period_annihilates_out_of_band_tone():
    x = np.cos(2 * np.pi * 50 * T_INDEX / N)
    assert np.abs(long_period(x, KSET_BUSINESS_CYCLES)).max() <= 1e-10


def test_long_period_full_set_completeness():
    rng = np.random.default_rng(9)
    x = rng.standard_normal(120)
    x -= x.mean()
    assert np.abs(long_period(x, range(1, 120)) - x).max() <= 1e-10


def test_long_period_idempotent_and_real():
    rng = np.random.default_rng(10)
    x = rng.standard_normal(239)
    once = long_period(x, KSET_BUSINESS_CYCLES)
    twice = long_period(once, KSET_BUSINESS_CYCLES)
    assert np.abs(once - twice).max() <= 1e-10
    assert once.dtype == np.float64


def test_long_period_bad_index():
    x = np.zeros(50)
    with pytest.raises(BadFrequencyIndex):
        long_period(x, [0])
    with pytest.raises(BadFrequencyIndex):
        long_period(x, [50])
    with pytest.raises(EmptyInput):
        long_period(x, [])


# ---------------------------------------------------------------------------
# residual disturbance
# ---------------------------------------------------------------------------


def band_limited_setup():
    w1 = tone(4)
    w2 = tone(6, 90.0)
    w3 = (w1 + w2) / np.sqrt(2.0)
    return rank2_pipeline([w1, w2, w3])


def test_residual_zero_for_band_limited_modes():
    _, basis, ms = band_limited_setup()
    resid = residual_disturbance(ms, basis, half_width=0, kset=(4, 6))
    assert np.abs(resid).max() <= 1e-10
    resid_wide = residual_disturbance(ms, basis, half_width=0, kset=(1, 2, 4, 6))
    assert np.abs(resid_wide).max() <= 1e-10


def test_residual_recovers_planted_pulse():
    _, basis, ms = band_limited_setup()
    pulse = np.zeros(N)
    pulse[100] = 5.0
    bumped = ModeSeries(months=ms.months, coeffs=ms.coeffs + np.outer([1, 0, 0], pulse))
    resid = residual_disturbance(bumped, basis, half_width=0, kset=(4, 6))
    # oracle: the pulse minus its own in-band part, mapped through mode 1
    c = direct_dft(pulse)
    kept = np.zeros(N, dtype=complex)
    for k in (4, 6, N - 4, N - 6):
        kept[k] = c[k]
    j = np.arange(1, N + 1)
    in_band = np.real(
        kept[None, :] @ np.exp(-2j * np.pi * np.arange(N)[:, None] * j[None, :] / N)
    ).ravel() / np.sqrt(N)
    expected = np.outer(basis.vectors[:, 0], pulse - in_band)
    assert np.abs(resid - expected).max() <= 1e-8


def test_residual_orthonormal_shortcut(planted_panel):
    basis = eigendecompose(correlation_matrix(planted_panel))
    ms = mode_series(planted_panel, basis)
    resid = residual_disturbance(ms, basis, half_width=6, kset=KSET_BUSINESS_CYCLES)
    back = basis.vectors[:, :2].T @ resid
    for i in range(2):
        a = ms.coeffs[i]
        direct = moving_average(a, 6).values - long_period(a, KSET_BUSINESS_CYCLES)
        assert np.abs(back[i] - direct).max() <= 1e-10


# ---------------------------------------------------------------------------
# external stimuli
# ---------------------------------------------------------------------------


def test_stimuli_zero_when_no_residual():
    _, basis, ms = band_limited_setup()
    chi = ReducedSusceptibility(values=np.eye(2), beta=1.0)
    s = external_stimuli(ms, basis, chi, half_width=0, kset=(4, 6))
    assert np.abs(s.values).max() <= 1e-10


def test_stimuli_identity_chi_reads_mode_one_residual():
    _, basis, ms = band_limited_setup()
    pulse = np.zeros(N)
    pulse[57] = 2.0
    bumped = ModeSeries(months=ms.months, coeffs=ms.coeffs + np.outer([1, 0, 0], pulse))
    chi = ReducedSusceptibility(values=np.eye(2), beta=1.0)
    s = external_stimuli(bumped, basis, chi, half_width=0, kset=(4, 6))
    expected = pulse - long_period(pulse, (4, 6))
    assert np.abs(s.eta1 - expected).max() <= 1e-10
    assert np.abs(s.eta2).max() <= 1e-10


def test_stimuli_linear_in_residual():
    _, basis, ms = band_limited_setup()
    rng = np.random.default_rng(11)
    noisy = ModeSeries(
        months=ms.months, coeffs=ms.coeffs + 0.3 * rng.standard_normal(ms.coeffs.shape)
    )
    doubled = ModeSeries(months=ms.months, coeffs=2.0 * noisy.coeffs)
    chi = ReducedSusceptibility(values=np.array([[1.0, 0.1], [0.1, 0.5]]), beta=1.0)
    s1 = external_stimuli(noisy, basis, chi, half_width=3, kset=(4, 6))
    s2 = external_stimuli(doubled, basis, chi, half_width=3, kset=(4, 6))
    assert np.abs(s2.values - 2.0 * s1.values).max() <= 1e-10


def test_stimuli_singular_chi():
    _, basis, ms = band_limited_setup()
    chi = ReducedSusceptibility(values=np.array([[1.0, 1.0], [1.0, 1.0]]), beta=1.0)
    with pytest.raises(SingularSusceptibility):
        external_stimuli(ms, basis, chi, half_width=0, kset=(4, 6))


def test_stimulus_csv(tmp_path):
    _, basis, ms = band_limited_setup()
    chi = ReducedSusceptibility(values=np.eye(2), beta=1.0)
    s = external_stimuli(ms, basis, chi, half_width=2, kset=(4, 6))
    path = tmp_path / "stimuli.csv"
    s.to_csv(path)
    lines = path.read_text().strip().split("\n")
    assert lines[0] == "date,eta1,eta2"
    assert len(lines) == N + 1
    assert lines[1].startswith("1988-01,")


# ---------------------------------------------------------------------------
# phases
# ---------------------------------------------------------------------------


def quarter_shift_setup():
    w1 = tone(8)
    w2 = tone(8, 90.0)  # peaks a quarter period earlier
    w3 = (w1 + w2) / np.sqrt(2.0)
    return rank2_pipeline([w1, w2, w3])


def test_mode_phases_reference_zero_and_quarter_period():
    _, basis, ms = quarter_shift_setup()
    table = mode_phases(ms, basis, k=8, ref=SeriesId(Variable.PRODUCTION, 1))
    assert table.phase(SeriesId(Variable.PRODUCTION, 1)) == 0.0
    assert table.phase(SeriesId(Variable.SHIPMENTS, 1)) == pytest.approx(90.0, abs=1e-8)
    assert table.phase(SeriesId(Variable.INVENTORY, 1)) == pytest.approx(45.0, abs=1e-8)
    assert np.all(table.phases > -180.0) and np.all(table.phases <= 180.0)


def test_mode_phases_reference_amplitude_zero():
    w1 = tone(5)
    w2 = tone(7)
    w3 = (w1 + w2) / np.sqrt(2.0)
    _, basis, ms = rank2_pipeline([w1, w2, w3])
    with pytest.raises(ReferenceAmplitudeZero):
        mode_phases(ms, basis, k=7, ref=SeriesId(Variable.PRODUCTION, 1))


def test_mode_phases_period_label(planted_panel):
    basis = eigendecompose(correlation_matrix(planted_panel))
    ms = mode_series(planted_panel, basis)
    table = mode_phases(ms, basis, k=4, ref=SeriesId(Variable.PRODUCTION, 20))
    assert table.period_label == "T=60"  # 239-month panel, friendly display name
    assert mode_phases(ms, basis, 6, SeriesId(Variable.PRODUCTION, 20)).period_label == "T=40"


def test_freq_avg_constant_phase_across_band():
    delta = 60.0
    w1 = tone(2) + tone(4)
    w1 /= w1.std()
    w2 = tone(2, delta) + tone(4, delta)
    w2 /= w2.std()
    w3 = w1 + w2
    w3 /= w3.std()
    _, basis, ms = rank2_pipeline([w1, w2, w3])
    table = freq_avg_phases(ms, basis, kset=(2, 4), ref=SeriesId(Variable.PRODUCTION, 1))
    assert table.phase(SeriesId(Variable.PRODUCTION, 1)) == 0.0
    assert table.phase(SeriesId(Variable.SHIPMENTS, 1)) == pytest.approx(delta, abs=1e-8)
    # equal mixture of the zero-phase and delta-phase series sits halfway
    assert table.phase(SeriesId(Variable.INVENTORY, 1)) == pytest.approx(delta / 2, abs=1e-8)
    assert table.period_label == "frequency-averaged"


def test_freq_avg_matches_circular_mean_oracle():
    # different phase offsets and amplitudes per tone: closed-form weights
    amp3, amp9 = 1.4, 0.6
    d3, d9 = 25.0, 70.0
    base3, base9 = tone(3), tone(9)
    w1 = base3 * amp3 + base9 * amp9
    w1 /= w1.std()
    w2 = amp3 * tone(3, d3) + amp9 * tone(9, d9)
    w2 /= w2.std()
    w3 = w1 + 0.5 * w2
    w3 /= w3.std()
    _, basis, ms = rank2_pipeline([w1, w2, w3])
    table = freq_avg_phases(ms, basis, kset=(3, 9), ref=SeriesId(Variable.PRODUCTION, 1))
    # oracle: weights are squared tone amplitudes of the target series
    scale = 1.0 / np.sqrt(amp3**2 + amp9**2)  # from the w2 restandardization
    weights = np.array([(amp3 * scale) ** 2, (amp9 * scale) ** 2]) * N / 2.0 * 2.0
    expected = circular_mean_degrees(np.array([d3, d9]), weights)
    assert table.phase(SeriesId(Variable.SHIPMENTS, 1)) == pytest.approx(expected, abs=1e-6)


def test_freq_avg_degenerate_weights():
    w1 = tone(5)
    w2 = tone(7)
    w3 = (w1 + w2) / np.sqrt(2.0)
    _, basis, ms = rank2_pipeline([w1, w2, w3])
    with pytest.raises(DegenerateWeights):
        freq_avg_phases(ms, basis, kset=(3,), ref=SeriesId(Variable.PRODUCTION, 1))


def test_phase_table_csv(planted_panel):
    basis = eigendecompose(correlation_matrix(planted_panel))
    ms = mode_series(planted_panel, basis)
    table = mode_phases(ms, basis, k=4, ref=SeriesId(Variable.PRODUCTION, 20))
    buf = io.StringIO()
    table.to_csv(buf)
    lines = buf.getvalue().strip().split("\n")
    assert lines[0] == "goods,P,S,I"
    assert len(lines) == 23  # 21 goods + header + average row
    assert lines[-1].startswith("average,")
    p20_row = lines[20].split(",")
    assert p20_row[0] == "20" and float(p20_row[1]) == 0.0
