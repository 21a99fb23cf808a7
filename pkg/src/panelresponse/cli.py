"""Command-line front end: orchestrates the pipeline, emits CSV/JSON artifacts.

Every subcommand writes its artifacts plus a ``manifest.json`` into the
output directory (flag ``--outdir``, env ``PANELRESPONSE_OUTDIR``, default
``out``) and embeds its full effective configuration in each file, so any
output can be reproduced bit-for-bit from the recorded configuration.  No
plotting: artifacts are plot-ready CSV for external tools.

Exit status: 0 on success, 1 on data or validation errors (one-line
diagnostic on stderr), 2 on usage errors.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import platform
import sys
from pathlib import Path
from typing import Sequence, TextIO

import numpy as np
import scipy

from . import __version__
from .cycles import (
    KSET_BUSINESS_CYCLES,
    KSET_LONG_PERIODS,
    external_stimuli,
    freq_avg_phases,
    lag_correlation,
    mode_phases,
    moving_average,
)
from .errors import PanelResponseError
from .genuine import default_mode_count, genuine_matrix
from .nullmodel import null_ensemble
from .panel import (
    Panel,
    SeriesId,
    StandardizedPanel,
    load_panel,
    log_growth,
    simple_growth,
    standardize,
    write_panel_csv,
)
from .response import (
    final_to_intermediate_csv,
    reduced_susceptibility,
    ripple,
)
from .spectral import (
    correlation_matrix,
    corr_to_csv,
    corr_to_json,
    eigendecompose,
    eigenvalue_histogram,
    mode_series,
    mp_bounds,
    mp_density,
)
from .synth import generate, spec_from_json, spec_to_json, to_level_panel

#: Conventional analysis window for the monthly industrial panels this tool
#: was built around (the pre-recession "normal" period).
DEFAULT_WINDOW = "1988-01:2007-12"

_KSET_PRESETS = {
    "cycles": KSET_BUSINESS_CYCLES,
    "two-years": KSET_LONG_PERIODS,
}


def _parse_kset(text: str) -> tuple[int, ...]:
    if text in _KSET_PRESETS:
        return _KSET_PRESETS[text]
    try:
        return tuple(sorted({int(p) for p in text.split(",") if p.strip()}))
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"bad kset {text!r}: use 'cycles', 'two-years', or comma-separated integers"
        ) from None


def _versions() -> dict:
    return {
        "panelresponse": __version__,
        "python": platform.python_version(),
        "numpy": np.__version__,
        "scipy": scipy.__version__,
    }


def _config_line(config: dict) -> str:
    return "# config: " + json.dumps(config, sort_keys=True) + "\n"


def _write_manifest(outdir: Path, subcommand: str, config: dict) -> None:
    doc = {"subcommand": subcommand, "config": config, "versions": _versions()}
    with open(outdir / "manifest.json", "w") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)


def _write_csv_rows(path: Path, config: dict, header: list[str], rows) -> None:
    import csv as _csv

    with open(path, "w", newline="") as fh:
        fh.write(_config_line(config))
        writer = _csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def _open_input(path: str) -> TextIO | str:
    return sys.stdin if path == "-" else path


def _load_pipeline(args) -> tuple[Panel, StandardizedPanel]:
    panel = load_panel(_open_input(args.input), window=args.window)
    growth = log_growth(panel) if args.method == "log10" else simple_growth(panel)
    return panel, standardize(growth)


def _effective_config(args, exclude: Sequence[str] = ()) -> dict:
    skip = {"func", "command"} | set(exclude)
    config = {k: v for k, v in vars(args).items() if k not in skip}
    config["outdir"] = str(config.get("outdir", ""))
    return config


def _resolve_mode_count(args, w: StandardizedPanel, basis) -> int:
    if args.k is not None:
        return args.k
    ensemble = null_ensemble(w, "rotational", args.samples, args.seed)
    return default_mode_count(basis, ensemble)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def _cmd_validate(args, outdir: Path, config: dict) -> int:
    panel = load_panel(_open_input(args.input), window=args.window, weights=args.weights)
    summary = {
        "series": panel.n_series,
        "goods": panel.n_goods,
        "months": panel.n_months,
        "start": str(panel.months[0]),
        "end": str(panel.months[-1]),
        "weight_sum": panel.weight_sum,
    }
    print(json.dumps(summary, sort_keys=True))
    _write_manifest(outdir, "validate", config)
    return 0


def _cmd_analyze(args, outdir: Path, config: dict) -> int:
    _, w = _load_pipeline(args)
    basis = eigendecompose(correlation_matrix(w))
    lam = basis.eigenvalues
    _write_csv_rows(
        outdir / "eigenvalues.csv", config, ["n", "eigenvalue"],
        [[n + 1, repr(float(v))] for n, v in enumerate(lam)],
    )
    labels = [sid.label for sid in w.ids] if w.ids else [str(i + 1) for i in range(w.n_series)]
    _write_csv_rows(
        outdir / "eigenvectors.csv", config, ["mode", "series", "component"],
        [
            [n + 1, labels[i], repr(float(basis.vectors[i, n]))]
            for n in range(basis.m)
            for i in range(basis.m)
        ],
    )
    top = float(lam[0]) * 1.05
    hist = eigenvalue_histogram(lam, bins=args.bins, value_range=(0.0, top))
    _write_csv_rows(
        outdir / "spectrum_histogram.csv", config, ["lambda_lo", "lambda_hi", "density"],
        [
            [repr(float(lo)), repr(float(hi)), repr(float(d))]
            for lo, hi, d in zip(hist.bin_edges[:-1], hist.bin_edges[1:], hist.density)
        ],
    )
    q = w.n_obs / w.n_series
    grid = np.linspace(0.0, top, 512)
    dens = mp_density(grid, q)
    _write_csv_rows(
        outdir / "mp_density.csv", config, ["lambda", "density"],
        [[repr(float(x)), repr(float(d))] for x, d in zip(grid, dens)],
    )
    lo, hi = mp_bounds(q)
    print(json.dumps({
        "m": w.n_series, "n_obs": w.n_obs, "q": q,
        "mp_lower": lo, "mp_upper": hi,
        "top_eigenvalues": [float(v) for v in lam[:3]],
    }, sort_keys=True))
    _write_manifest(outdir, "analyze", config)
    return 0


def _cmd_null(args, outdir: Path, config: dict) -> int:
    _, w = _load_pipeline(args)
    ensemble = null_ensemble(w, args.mode, args.samples, args.seed)
    doc = {"config": config}
    doc.update(ensemble.to_json())
    with open(outdir / "ensemble.json", "w") as fh:
        json.dump(doc, fh)
    with open(outdir / "pooled_eigenvalues.csv", "w", newline="") as fh:
        fh.write(_config_line(config))
        ensemble.pooled_to_csv(fh)
    print(json.dumps({
        "mode": ensemble.mode.value,
        "edge": dataclasses.asdict(ensemble.edge),
    }, sort_keys=True))
    _write_manifest(outdir, "null", config)
    return 0


def _cmd_genuine(args, outdir: Path, config: dict) -> int:
    _, w = _load_pipeline(args)
    basis = eigendecompose(correlation_matrix(w))
    k = _resolve_mode_count(args, w, basis)
    config["effective_k"] = k
    cg = genuine_matrix(basis, k)
    with open(outdir / "genuine_matrix.csv", "w", newline="") as fh:
        fh.write(_config_line(config))
        corr_to_csv(cg, fh)
    doc = {"config": config}
    doc.update(corr_to_json(cg))
    with open(outdir / "genuine_matrix.json", "w") as fh:
        json.dump(doc, fh)
    print(json.dumps({"k": k, "m": cg.m}, sort_keys=True))
    _write_manifest(outdir, "genuine", config)
    return 0


def _cmd_ripple(args, outdir: Path, config: dict) -> int:
    _, w = _load_pipeline(args)
    craw = correlation_matrix(w)
    basis = eigendecompose(craw)
    k = _resolve_mode_count(args, w, basis)
    config["effective_k"] = k
    cg = genuine_matrix(basis, k)
    with open(outdir / "intermediate_response.csv", "w", newline="") as fh:
        fh.write(_config_line(config))
        final_to_intermediate_csv(cg, craw, fh)
    if args.source is not None:
        report = ripple(cg, SeriesId.parse(args.source), args.shift)
        _write_csv_rows(
            outdir / "ripple_source.csv", config, ["series", "response"],
            [
                [sid.label, repr(float(r))]
                for sid, r in zip(w.ids, report.responses)
            ],
        )
    _write_manifest(outdir, "ripple", config)
    return 0


def _cmd_reduced_chi(args, outdir: Path, config: dict) -> int:
    _, w = _load_pipeline(args)
    basis = eigendecompose(correlation_matrix(w))
    cg = genuine_matrix(basis, args.k)
    red = reduced_susceptibility(cg, basis, args.k, args.beta)
    doc = {
        "config": config,
        "beta": red.beta,
        "k": args.k,
        "values": red.values.tolist(),
        "normalized": red.normalized.tolist(),
    }
    with open(outdir / "reduced_chi.json", "w") as fh:
        json.dump(doc, fh)
    _write_csv_rows(
        outdir / "reduced_chi.csv", config, ["row", "col", "value", "normalized"],
        [
            [i + 1, j + 1, repr(float(red.values[i, j])), repr(float(red.normalized[i, j]))]
            for i in range(args.k)
            for j in range(args.k)
        ],
    )
    print(json.dumps({"normalized": red.normalized.tolist()}))
    _write_manifest(outdir, "reduced-chi", config)
    return 0


def _cmd_cycles(args, outdir: Path, config: dict) -> int:
    _, w = _load_pipeline(args)
    basis = eigendecompose(correlation_matrix(w))
    ms = mode_series(w, basis)
    a1, a2 = ms.coeffs[0], ms.coeffs[1]
    s1 = moving_average(a1, args.xi).values
    s2 = moving_average(a2, args.xi).values
    _write_csv_rows(
        outdir / "mode_series.csv", config,
        ["date", "a1", "a2", "a1_smooth", "a2_smooth"],
        [
            [str(m), repr(float(a1[j])), repr(float(a2[j])),
             repr(float(s1[j])), repr(float(s2[j]))]
            for j, m in enumerate(ms.months)
        ],
    )
    rows = []
    for lag in range(-args.max_lag, args.max_lag + 1):
        rows.append([lag, repr(lag_correlation(a1, a2, lag, args.xi))])
    _write_csv_rows(outdir / "lag_correlation.csv", config, ["lag", "correlation"], rows)
    _write_manifest(outdir, "cycles", config)
    return 0


def _cmd_phases(args, outdir: Path, config: dict) -> int:
    _, w = _load_pipeline(args)
    basis = eigendecompose(correlation_matrix(w))
    ms = mode_series(w, basis)
    ref = SeriesId.parse(args.ref)
    if args.freq_avg:
        table = freq_avg_phases(ms, basis, args.kset, ref)
    else:
        table = mode_phases(ms, basis, args.k, ref)
    with open(outdir / "phases.csv", "w", newline="") as fh:
        fh.write(_config_line(config))
        table.to_csv(fh)
    print(json.dumps({
        "period": table.period_label,
        "average": {
            "P": table.class_average(1), "S": table.class_average(2),
            "I": table.class_average(3),
        },
    }, sort_keys=True))
    _write_manifest(outdir, "phases", config)
    return 0


def _cmd_stimuli(args, outdir: Path, config: dict) -> int:
    _, w = _load_pipeline(args)
    basis = eigendecompose(correlation_matrix(w))
    ms = mode_series(w, basis)
    cg = genuine_matrix(basis, 2)
    chi = reduced_susceptibility(cg, basis, 2, args.beta)
    series = external_stimuli(ms, basis, chi, args.xi, args.kset)
    with open(outdir / "stimuli.csv", "w", newline="") as fh:
        fh.write(_config_line(config))
        series.to_csv(fh)
    print(json.dumps({
        "max_abs_eta1": float(np.abs(series.eta1).max()),
        "max_abs_eta2": float(np.abs(series.eta2).max()),
    }, sort_keys=True))
    _write_manifest(outdir, "stimuli", config)
    return 0


def _cmd_synth(args, outdir: Path, config: dict) -> int:
    spec = spec_from_json(args.spec)
    if args.seed is not None:
        spec = dataclasses.replace(spec, seed=args.seed)
    config["effective_spec"] = spec_to_json(spec)
    w = generate(spec)
    panel = to_level_panel(w)
    if args.stdout:
        sys.stdout.write(_config_line(config))
        write_panel_csv(panel, sys.stdout)
    else:
        with open(outdir / "panel.csv", "w", newline="") as fh:
            fh.write(_config_line(config))
            write_panel_csv(panel, fh)
    _write_manifest(outdir, "synth", config)
    return 0


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def _add_common(p: argparse.ArgumentParser, pipeline: bool = True) -> None:
    p.add_argument(
        "--outdir",
        default=os.environ.get("PANELRESPONSE_OUTDIR", "out"),
        help="output directory (env PANELRESPONSE_OUTDIR; default: out)",
    )
    if pipeline:
        p.add_argument("--input", required=True, help="panel CSV path, or - for stdin")
        p.add_argument(
            "--window", default=None,
            help=f"analysis window START:END (conventional choice: {DEFAULT_WINDOW})",
        )
        p.add_argument(
            "--method", choices=("log10", "simple"), default="log10",
            help="growth-rate definition (default: log10)",
        )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="panelresponse",
        description="Noise-filtered correlation and linear-response analysis "
                    "of monthly index panels.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="load and validate a panel CSV")
    _add_common(p)
    p.add_argument("--weights", default=None, help="goods,weight CSV")
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("analyze", help="eigenvalues, eigenvectors, spectrum vs MP law")
    _add_common(p)
    p.add_argument("--bins", type=int, default=50)
    p.set_defaults(func=_cmd_analyze)

    p = sub.add_parser("null", help="shuffling null ensemble and significance edge")
    _add_common(p)
    p.add_argument("--mode", choices=("complete", "rotational"), default="rotational")
    p.add_argument("--samples", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_null)

    p = sub.add_parser("genuine", help="noise-filtered correlation matrix")
    _add_common(p)
    p.add_argument("--k", type=int, default=None,
                   help="modes to keep (default: count above the rotational edge)")
    p.add_argument("--samples", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_genuine)

    p = sub.add_parser("ripple", help="final-demand to producer-goods response table")
    _add_common(p)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--samples", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--source", default=None, help="optional source series, e.g. S.15")
    p.add_argument("--shift", type=float, default=1.0)
    p.set_defaults(func=_cmd_ripple)

    p = sub.add_parser("reduced-chi", help="two-mode reduced susceptibility")
    _add_common(p)
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--beta", type=float, default=1.0)
    p.set_defaults(func=_cmd_reduced_chi)

    p = sub.add_parser("cycles", help="smoothed mode series and lag correlation")
    _add_common(p)
    p.add_argument("--xi", type=int, default=6, help="moving-average half-width")
    p.add_argument("--max-lag", type=int, default=36)
    p.set_defaults(func=_cmd_cycles)

    p = sub.add_parser("phases", help="per-goods oscillation phase table")
    _add_common(p)
    p.add_argument("--k", type=int, default=4, help="frequency index (single-tone table)")
    p.add_argument("--freq-avg", action="store_true",
                   help="amplitude-weighted average over --kset instead of one tone")
    p.add_argument("--kset", type=_parse_kset, default=KSET_LONG_PERIODS)
    p.add_argument("--ref", default="P.20", help="reference series (default P.20)")
    p.set_defaults(func=_cmd_phases)

    p = sub.add_parser("stimuli", help="invert the reduced response on residuals")
    _add_common(p)
    p.add_argument("--xi", type=int, default=6)
    p.add_argument("--kset", type=_parse_kset, default=KSET_BUSINESS_CYCLES)
    p.add_argument("--beta", type=float, default=1.0)
    p.set_defaults(func=_cmd_stimuli)

    p = sub.add_parser("synth", help="generate a synthetic panel CSV from a spec")
    _add_common(p, pipeline=False)
    p.add_argument("--spec", required=True, help="JSON spec file")
    p.add_argument("--seed", type=int, default=None, help="override the spec seed")
    p.add_argument("--stdout", action="store_true", help="write the CSV to stdout")
    p.set_defaults(func=_cmd_synth)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    outdir = Path(args.outdir)
    config = _effective_config(args)
    try:
        outdir.mkdir(parents=True, exist_ok=True)
        return args.func(args, outdir, config)
    except PanelResponseError as exc:
        print(f"panelresponse: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"panelresponse: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
